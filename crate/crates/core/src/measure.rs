//! Measure & Conquer bookkeeping: the weighted measure of a state, the
//! decrease each branching case is supposed to achieve, and the branching
//! number of a decrease vector.
//!
//! Weights are kept as integers in units of 10^-4 so sums are exact.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Sub};

use crate::branch::{BranchDecision, CaseId};
use crate::graph::VertexId;
use crate::state::{Label, SearchState};

/// Fixed-point measure value, 1 unit = 10^-4.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Measure(pub i64);

impl Measure {
    pub const ZERO: Measure = Measure(0);
    pub const SCALE: i64 = 10_000;

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / Self::SCALE as f64
    }

    fn times(self, k: usize) -> Measure {
        Measure(self.0 * k as i64)
    }
}

impl Add for Measure {
    type Output = Measure;
    fn add(self, o: Measure) -> Measure {
        Measure(self.0 + o.0)
    }
}

impl AddAssign for Measure {
    fn add_assign(&mut self, o: Measure) {
        self.0 += o.0;
    }
}

impl Sub for Measure {
    type Output = Measure;
    fn sub(self, o: Measure) -> Measure {
        Measure(self.0 - o.0)
    }
}

impl core::iter::Sum for Measure {
    fn sum<I: Iterator<Item = Measure>>(iter: I) -> Measure {
        iter.fold(Measure::ZERO, Add::add)
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let a = self.0.unsigned_abs();
        write!(f, "{sign}{}.{:04}", a / 10_000, a % 10_000)
    }
}

/// The weight table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MeasureConstants {
    pub fl: Measure,
    pub bn1: Measure,
    pub bn2: Measure,
    pub free1: Measure,
    pub free2: Measure,
    pub free3: Measure,
}

pub const CONSTANTS: MeasureConstants = MeasureConstants {
    fl: Measure(2251),
    bn1: Measure(6668),
    bn2: Measure(7749),
    free1: Measure(9762),
    free2: Measure(9935),
    free3: Measure(10000),
};

/// Claimed upper bound on the branching number of every case.
pub const TAU_BOUND: f64 = 1.9043;

impl MeasureConstants {
    /// Smallest gain of any relabelling step the analysis relies on.
    pub fn eta(&self) -> Measure {
        let one = self.free3;
        [
            self.fl,
            one - self.bn1,
            one - self.bn2,
            self.free2 - self.bn1,
            self.free2 - self.bn2,
            self.free1 - self.bn1,
            self.free1 - self.bn2,
        ]
        .into_iter()
        .min()
        .unwrap()
    }

    /// Weight of a free vertex with in-degree `d` (0 for `d == 0`).
    pub fn free(&self, d: usize) -> Measure {
        match d {
            0 => Measure::ZERO,
            1 => self.free1,
            2 => self.free2,
            _ => self.free3,
        }
    }

    /// Weight of a branching vertex with out-degree `d` (0 for `d == 0`).
    pub fn bn(&self, d: usize) -> Measure {
        match d {
            0 => Measure::ZERO,
            1 => self.bn1,
            _ => self.bn2,
        }
    }

    /// Gain when a free vertex drops from in-degree `i` to `i - 1`.
    pub fn delta_free(&self, i: usize) -> Measure {
        match i {
            0 => Measure::ZERO,
            _ => self.free(i) - self.free(i - 1),
        }
    }

    fn min_fl_gain(&self) -> Measure {
        (self.free1 - self.fl).min(self.bn2)
    }
}

/// Measure of a state: weighted count of free, floating and branching
/// vertices. Internal and leaf nodes weigh nothing.
pub fn mu(s: &SearchState) -> Measure {
    let c = &CONSTANTS;
    let g = s.graph();
    g.vertices()
        .map(|v| match s.label(v) {
            Label::Free => c.free(g.in_degree(v)),
            Label::Branching => c.bn(g.out_degree(v)),
            Label::Floating => c.fl,
            Label::Internal | Label::Leaf => Measure::ZERO,
        })
        .sum()
}

#[derive(Clone, Debug, PartialEq)]
pub enum MeasureError {
    NonPositiveDelta(f64),
    Empty,
}

impl fmt::Display for MeasureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureError::NonPositiveDelta(d) => write!(f, "non-positive decrease {d}"),
            MeasureError::Empty => f.write_str("empty decrease vector"),
        }
    }
}

impl core::error::Error for MeasureError {}

/// The root `tau >= 1` of `sum tau^(-d_i) = 1`, by bisection.
pub fn branching_number(deltas: &[f64]) -> Result<f64, MeasureError> {
    if deltas.is_empty() {
        return Err(MeasureError::Empty);
    }
    if let Some(&d) = deltas.iter().find(|&&d| !(d > 0.0)) {
        return Err(MeasureError::NonPositiveDelta(d));
    }
    if deltas.len() == 1 {
        return Ok(1.0);
    }
    let excess = |t: f64| deltas.iter().map(|&d| libm::pow(t, -d)).sum::<f64>() - 1.0;
    let (mut lo, mut hi) = (1.0_f64, 64.0_f64);
    while excess(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if excess(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn measures_to_f64(ds: &[Measure]) -> Vec<f64> {
    ds.iter().map(|d| d.as_f64()).collect()
}

/// Free-class indicator contributions `chi(x in free_2) e2 + chi(x in free_>=3) e3`.
fn free_weight_ge2(s: &SearchState, x: VertexId) -> Measure {
    if s.label(x) != Label::Free {
        return Measure::ZERO;
    }
    match s.graph().in_degree(x) {
        2 => CONSTANTS.free2,
        d if d >= 3 => CONSTANTS.free3,
        _ => Measure::ZERO,
    }
}

/// `chi(x in free_2)(e2 - bn2) + chi(x in free_>=3)(e3 - bn2)`.
fn free_to_bn_gain(s: &SearchState, x: VertexId) -> Measure {
    match free_weight_ge2(s, x) {
        Measure::ZERO => Measure::ZERO,
        w => w - CONSTANTS.bn2,
    }
}

/// `sum_{i=2..3} chi(x in free_i) Delta_i`: gain from losing one in-arc.
fn degree_drop_gain(s: &SearchState, x: VertexId) -> Measure {
    if s.label(x) != Label::Free {
        return Measure::ZERO;
    }
    match s.graph().in_degree(x) {
        d @ 2..=3 => CONSTANTS.delta_free(d),
        _ => Measure::ZERO,
    }
}

/// `fl_i * eFL + fr_i^{>=3} (e3 - bn2) + fr_i^2 (e2 - bn2)` over
/// `N^+(x) \ N^+(v)`.
fn successor_gain(s: &SearchState, v: VertexId, x: VertexId) -> Measure {
    let g = s.graph();
    let nv = g.out_neighbors(v);
    g.out_neighbors(x)
        .iter()
        .filter(|u| !nv.contains(u))
        .map(|&u| match s.label(u) {
            Label::Floating => CONSTANTS.fl,
            Label::Free => free_to_bn_gain(s, u),
            _ => Measure::ZERO,
        })
        .sum()
}

/// The decrease vector the analysis claims for `decision` on `parent`, or
/// `None` for cases without a stand-alone claim (B1, B4.3, naive).
pub fn claimed_deltas(parent: &SearchState, decision: &BranchDecision) -> Option<Vec<Measure>> {
    let c = &CONSTANTS;
    let g = parent.graph();
    let v = decision.pivot;
    let ctx = &decision.context;
    let pair = || (ctx.x1.expect("x1"), ctx.x2.expect("x2"));
    let b7_items = || {
        let (x1, x2) = pair();
        let both = free_weight_ge2(parent, x1) + free_weight_ge2(parent, x2);
        let d1 = c.bn2 + free_weight_ge2(parent, x1) + free_to_bn_gain(parent, x2) + successor_gain(parent, v, x1);
        let d2 = c.bn2 + both + successor_gain(parent, v, x2);
        let fan = (g.in_degree(x1) + g.in_degree(x2)).saturating_sub(4).max(2);
        let d3 = c.bn2 + both + c.min_fl_gain().times(fan);
        let d4 = c.bn2 + degree_drop_gain(parent, x1) + degree_drop_gain(parent, x2);
        [d1, d2, d3, d4]
    };
    let d = match decision.case {
        CaseId::B1 | CaseId::B4_3 | CaseId::Naive => return None,
        CaseId::B2 => {
            let chain = ctx.chain.as_ref().expect("chain");
            let k = chain.vertices.len() - 1;
            let v1 = chain.vertices[1];
            vec![
                c.bn1 + c.free1.times(k - 1) + free_weight_ge2(parent, v1) + c.eta().times(2),
                c.bn1 + degree_drop_gain(parent, v1),
            ]
        }
        CaseId::B3a => {
            let n = g.out_neighbors(v);
            let d1 = c.bn2
                + n.iter()
                    .map(|&x| match parent.label(x) {
                        Label::Floating => c.fl,
                        _ => free_to_bn_gain(parent, x),
                    })
                    .sum();
            let d2 = c.bn2 + n.iter().map(|&x| degree_drop_gain(parent, x)).sum();
            vec![d1, d2]
        }
        CaseId::B3b => vec![c.bn2 + c.fl.times(2) + c.min_fl_gain(), c.bn2],
        CaseId::B4_1 | CaseId::B4_2 => vec![c.bn2 + c.free2 + c.fl.min(c.free2 - c.bn2), c.bn2],
        CaseId::B5 => {
            let (x1, _) = pair();
            let base = c.bn2 + c.free2 + c.fl;
            let nv = g.out_neighbors(v);
            let succ: Measure = g
                .out_neighbors(x1)
                .iter()
                .filter(|u| !nv.contains(u))
                .map(|&u| match parent.label(u) {
                    Label::Free => c.free2 - c.bn2,
                    Label::Floating => c.fl,
                    _ => Measure::ZERO,
                })
                .sum();
            vec![base + succ, base + c.min_fl_gain(), c.bn2]
        }
        CaseId::B6 => {
            let [d1, d2, _, d4] = b7_items();
            vec![d1, d2, d4]
        }
        CaseId::B7 => b7_items().to_vec(),
        CaseId::B8a => vec![c.bn2 + (c.free2 - c.bn2).times(2), c.bn2 + c.free1],
        CaseId::B8b => vec![c.bn2 + (c.free2 - c.bn2).times(2), c.bn2 + c.free2 + c.bn2],
    };
    Some(d)
}

/// Audit record of one branching node.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchAudit {
    pub case: CaseId,
    pub pivot: VertexId,
    /// Decrease per child, measured after the child's reductions. A child
    /// that halts counts as dropping to measure zero.
    pub observed: Vec<Measure>,
    /// Decrease per child right after its assignments, before reducing.
    pub pre_reduction: Vec<Measure>,
    pub claimed: Option<Vec<Measure>>,
    /// Vector obtained by merging the first child with the branching that
    /// follows it; only set for B4.3.
    pub composite: Option<Vec<Measure>>,
    /// Branching number of `composite` if set, otherwise of `observed`.
    pub branching_number: f64,
    /// Children that halted; excluded from the claimed comparison.
    pub halted: Vec<bool>,
}

impl BranchAudit {
    /// Some child failed to decrease the measure.
    pub fn nonpositive(&self) -> bool {
        self.observed.iter().any(|d| d.0 <= 0)
    }

    /// Indices of non-halted children whose observed decrease is below the
    /// claimed one.
    pub fn analysis_violations(&self) -> Vec<usize> {
        let Some(claimed) = &self.claimed else { return Vec::new() };
        (0..self.observed.len())
            .filter(|&i| !self.halted[i] && self.observed[i] < claimed[i])
            .collect()
    }

    pub fn bound_violation(&self) -> bool {
        self.branching_number > TAU_BOUND + 1e-9
    }

    pub fn is_clean(&self) -> bool {
        !self.nonpositive() && self.analysis_violations().is_empty() && !self.bound_violation()
    }

    /// Merges the first child with the node that branched right after it.
    pub fn compose_first_child(&mut self, successor: &BranchAudit) {
        let head = self.observed[0];
        let mut v: Vec<Measure> = successor.observed.iter().map(|&d| head + d).collect();
        v.extend_from_slice(&self.observed[1..]);
        if let Ok(t) = branching_number(&measures_to_f64(&v)) {
            self.branching_number = t;
        }
        self.composite = Some(v);
    }
}

impl fmt::Display for BranchAudit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} v={} observed=[", self.case, self.pivot)?;
        for (i, d) in self.observed.iter().enumerate() {
            write!(f, "{}{d}", if i > 0 { " " } else { "" })?;
        }
        f.write_str("]")?;
        if let Some(cl) = &self.claimed {
            f.write_str(" claimed=[")?;
            for (i, d) in cl.iter().enumerate() {
                write!(f, "{}{d}", if i > 0 { " " } else { "" })?;
            }
            f.write_str("]")?;
        }
        write!(f, " tau={:.6}", self.branching_number)
    }
}

/// Builds the audit record for one node. `pre` and `post` are the children's
/// measures before and after their reductions; `halted[i]` marks children
/// whose reduction ended the search (their post measure is taken as zero).
pub fn audit_branch(
    parent: &SearchState,
    decision: &BranchDecision,
    pre: &[Measure],
    post: &[Measure],
    halted: &[bool],
) -> BranchAudit {
    let m = mu(parent);
    let observed: Vec<Measure> = post
        .iter()
        .zip(halted)
        .map(|(&p, &h)| if h { m } else { m - p })
        .collect();
    let pre_reduction = pre.iter().map(|&p| m - p).collect();
    let branching_number = branching_number(&measures_to_f64(&observed)).unwrap_or(f64::INFINITY);
    BranchAudit {
        case: decision.case,
        pivot: decision.pivot,
        observed,
        pre_reduction,
        claimed: claimed_deltas(parent, decision),
        composite: None,
        branching_number,
        halted: halted.to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branch::CaseContext;
    use crate::graph::{Arc, DiGraph};

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn eta_is_free1_minus_bn2() {
        let c = CONSTANTS;
        assert_eq!(c.eta(), Measure(2013));
        assert_eq!(c.eta(), c.free1 - c.bn2);
    }

    #[test]
    fn delta_free_table() {
        let c = CONSTANTS;
        assert_eq!(c.delta_free(1), Measure(9762));
        assert_eq!(c.delta_free(2), Measure(173));
        assert_eq!(c.delta_free(3), Measure(65));
        assert_eq!(c.delta_free(4), Measure::ZERO);
        assert_eq!(c.delta_free(9), Measure::ZERO);
    }

    #[test]
    fn display_fixed_point() {
        assert_eq!(Measure(9762).to_string(), "0.9762");
        assert_eq!(Measure(19870).to_string(), "1.9870");
        assert_eq!(Measure(-5).to_string(), "-0.0005");
    }

    #[test]
    fn mu_examples() {
        // one free vertex of in-degree 1 besides the root
        let s = SearchState::initial(DiGraph::from_arcs(2, [Arc::new(0, 1)]).unwrap(), VertexId(0)).unwrap();
        // the root is internal and 1 became branching with out-degree 0
        assert_eq!(mu(&s), Measure::ZERO);

        let g = DiGraph::from_arcs(3, [Arc::new(0, 1), Arc::new(1, 2)]).unwrap();
        let s = SearchState::initial(g, VertexId(0)).unwrap();
        // 1 is BN with out-degree 1, 2 free with in-degree 1
        assert_eq!(mu(&s), Measure(6668 + 9762));
    }

    #[test]
    fn mu_bn3_plus_fl() {
        // 1 is BN with out-degree 3; its out-neighbours are floating
        let arcs = [(0, 1), (1, 2), (1, 3), (1, 4)];
        let g = DiGraph::from_arcs(5, arcs.iter().map(|&(u, v)| Arc::new(u, v))).unwrap();
        let mut s = SearchState::initial(g, VertexId(0)).unwrap();
        for x in [2, 3, 4] {
            s.make_floating(VertexId(x)).unwrap();
        }
        assert_eq!(mu(&s), Measure(7749 + 3 * 2251));
        assert_eq!(CONSTANTS.bn(3) + CONSTANTS.fl, Measure(10000));
    }

    #[test]
    fn branching_number_examples() {
        assert!(close(branching_number(&[1.0, 1.0]).unwrap(), 2.0));
        assert!(close(branching_number(&[1.0, 2.0]).unwrap(), 1.618_033_988_749_895));
        assert!(close(branching_number(&[2.0, 2.0]).unwrap(), core::f64::consts::SQRT_2));
        assert_eq!(branching_number(&[0.5]).unwrap(), 1.0);
        assert!(matches!(branching_number(&[1.0, 0.0]), Err(MeasureError::NonPositiveDelta(_))));
        assert!(matches!(branching_number(&[]), Err(MeasureError::Empty)));
        // tiny decreases push the root beyond the initial bracket
        assert!(branching_number(&[0.1, 0.1]).unwrap() > 64.0);
    }

    #[test]
    fn constant_case_vectors() {
        let s = SearchState::initial(DiGraph::from_arcs(2, [Arc::new(0, 1)]).unwrap(), VertexId(0)).unwrap();
        let mk = |case| BranchDecision { case, pivot: VertexId(1), children: Vec::new(), context: CaseContext::default() };
        assert_eq!(claimed_deltas(&s, &mk(CaseId::B8a)).unwrap(), vec![Measure(12121), Measure(17511)]);
        assert_eq!(claimed_deltas(&s, &mk(CaseId::B8b)).unwrap(), vec![Measure(12121), Measure(25433)]);
        assert_eq!(claimed_deltas(&s, &mk(CaseId::B3b)).unwrap(), vec![Measure(19762), Measure(7749)]);
        assert_eq!(claimed_deltas(&s, &mk(CaseId::B4_1)).unwrap(), vec![Measure(19870), Measure(7749)]);
        assert_eq!(claimed_deltas(&s, &mk(CaseId::B4_3)), None);
        assert_eq!(claimed_deltas(&s, &mk(CaseId::B1)), None);
    }

    #[test]
    fn claimed_vectors_within_bound() {
        let t = |d: [i64; 2]| branching_number(&[Measure(d[0]).as_f64(), Measure(d[1]).as_f64()]).unwrap();
        assert!(t([12121, 17511]) <= TAU_BOUND + 1e-4);
        assert!(t([19870, 7749]) <= TAU_BOUND + 1e-4);
        assert!(t([19762, 7749]) <= TAU_BOUND + 1e-4);
    }
}
