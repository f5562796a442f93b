//! Case selection for the branching step.
//!
//! Cases are tried in priority order B1 ... B8 on a fully reduced state. Each
//! case produces a list of children; a child is an ordered list of [`Step`]s
//! applied to a copy of the parent.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::VertexId;
use crate::reduce::{self, RuleSet};
use crate::state::{Label, SearchState, StateError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CaseId {
    B1,
    B2,
    B3a,
    B3b,
    B4_1,
    B4_2,
    B4_3,
    B5,
    B6,
    B7,
    B8a,
    B8b,
    /// Plain binary branch on a branching vertex (exponential-space variant).
    Naive,
}

impl CaseId {
    pub const ALL: [CaseId; 13] = [
        CaseId::B1,
        CaseId::B2,
        CaseId::B3a,
        CaseId::B3b,
        CaseId::B4_1,
        CaseId::B4_2,
        CaseId::B4_3,
        CaseId::B5,
        CaseId::B6,
        CaseId::B7,
        CaseId::B8a,
        CaseId::B8b,
        CaseId::Naive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseId::B1 => "B1",
            CaseId::B2 => "B2",
            CaseId::B3a => "B3a",
            CaseId::B3b => "B3b",
            CaseId::B4_1 => "B4.1",
            CaseId::B4_2 => "B4.2",
            CaseId::B4_3 => "B4.3",
            CaseId::B5 => "B5",
            CaseId::B6 => "B6",
            CaseId::B7 => "B7",
            CaseId::B8a => "B8a",
            CaseId::B8b => "B8b",
            CaseId::Naive => "naive",
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One action inside a child of a branching decision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    /// Fix the vertex as internal (it must be attached by then).
    Internal(VertexId),
    /// Fix the vertex as a leaf node.
    Leaf(VertexId),
    /// Free vertices in the list become floating leaves, branching ones
    /// become leaf nodes. The list is computed on the parent state.
    MakeLeaves(Vec<VertexId>),
}

/// Path `v0 ... vk` followed from a branching vertex of out-degree one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainPath {
    pub vertices: Vec<VertexId>,
    /// The last vertex has no out-arc leaving the path.
    pub dead_end: bool,
}

/// Which vertices a decision looked at; used by the measure audit.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CaseContext {
    pub chain: Option<ChainPath>,
    pub x1: Option<VertexId>,
    pub x2: Option<VertexId>,
    /// B4: the out-neighbour satisfying the sub-case; B6: the shared
    /// in-neighbour.
    pub z: Option<VertexId>,
    /// B8: the single extra in-neighbour of `x1`, `x2`.
    pub q: Option<VertexId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchDecision {
    pub case: CaseId,
    pub pivot: VertexId,
    pub children: Vec<Vec<Step>>,
    pub context: CaseContext,
}

impl BranchDecision {
    /// Indices of children that run `makeleaves`.
    pub fn makeleaves_children(&self) -> Vec<usize> {
        self.children
            .iter()
            .enumerate()
            .filter(|(_, steps)| steps.iter().any(|s| matches!(s, Step::MakeLeaves(_))))
            .map(|(i, _)| i)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BranchError {
    /// No branching vertex, or reductions still apply.
    ContractViolation(&'static str),
    State(StateError),
}

impl fmt::Display for BranchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BranchError::ContractViolation(why) => write!(f, "precondition violated: {why}"),
            BranchError::State(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for BranchError {}

impl From<StateError> for BranchError {
    fn from(e: StateError) -> Self {
        BranchError::State(e)
    }
}

/// Follows the forced path out of `v`, a branching vertex with exactly one
/// out-arc. Each free vertex with exactly one out-arc leaving the path so far
/// extends it; the path stops at a non-free vertex or a free vertex with zero
/// or several such arcs.
pub fn find_chain(s: &SearchState, v: VertexId) -> Result<ChainPath, BranchError> {
    let g = s.graph();
    if s.label(v) != Label::Branching || g.out_degree(v) != 1 {
        return Err(BranchError::ContractViolation("chain must start at a BN vertex of out-degree 1"));
    }
    let mut path = vec![v];
    let mut next = g.out_neighbors(v)[0];
    loop {
        path.push(next);
        let exits: Vec<VertexId> = g
            .out_neighbors(next)
            .iter()
            .copied()
            .filter(|u| !path.contains(u))
            .collect();
        if s.label(next) != Label::Free || exits.len() != 1 {
            return Ok(ChainPath { vertices: path, dead_end: exits.is_empty() });
        }
        next = exits[0];
    }
}

/// `(N^-(x1) ∪ N^-(x2)) \ {v, x1, x2}` on `s`, ascending.
pub fn makeleaves_targets(s: &SearchState, v: VertexId, x1: VertexId, x2: VertexId) -> Vec<VertexId> {
    let g = s.graph();
    let mut out: Vec<VertexId> = g
        .in_neighbors(x1)
        .iter()
        .chain(g.in_neighbors(x2))
        .copied()
        .filter(|&u| u != v && u != x1 && u != x2)
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Applies `makeleaves` for the pivot `v` and its out-neighbours `x1`, `x2`,
/// reading the in-neighbourhoods from `s` itself.
pub fn make_leaves(s: &SearchState, v: VertexId, x1: VertexId, x2: VertexId) -> SearchState {
    let targets = makeleaves_targets(s, v, x1, x2);
    let mut t = s.clone();
    apply_makeleaves(&mut t, &targets);
    t
}

fn apply_makeleaves(s: &mut SearchState, targets: &[VertexId]) {
    for &u in targets {
        if !s.graph().is_alive(u) {
            continue;
        }
        match s.label(u) {
            Label::Free => s.make_floating(u).expect("free vertex"),
            Label::Branching => s.make_leaf(u).expect("branching vertex"),
            _ => {}
        }
    }
}

/// Applies one child of a decision to a copy of `parent`.
pub fn apply_child(parent: &SearchState, steps: &[Step]) -> Result<SearchState, StateError> {
    let mut s = parent.clone();
    for step in steps {
        match *step {
            Step::Internal(x) => match s.label(x) {
                Label::Internal => {}
                _ => s.internalize(x)?,
            },
            Step::Leaf(x) => match s.label(x) {
                Label::Leaf => {}
                _ => s.make_leaf(x)?,
            },
            Step::MakeLeaves(ref targets) => apply_makeleaves(&mut s, targets),
        }
    }
    Ok(s)
}

fn binary(case: CaseId, v: VertexId, context: CaseContext) -> BranchDecision {
    BranchDecision {
        case,
        pivot: v,
        children: vec![vec![Step::Internal(v)], vec![Step::Leaf(v)]],
        context,
    }
}

fn branching_vertices(s: &SearchState) -> impl Iterator<Item = VertexId> + '_ {
    s.with_label(Label::Branching)
}

/// Branching vertex of maximum out-degree, lowest id on ties.
fn max_out_degree_bn(s: &SearchState) -> Option<VertexId> {
    let g = s.graph();
    branching_vertices(s).fold(None, |best, v| match best {
        Some(b) if g.out_degree(b) >= g.out_degree(v) => Some(b),
        _ => Some(v),
    })
}

/// B1/B2 for the lowest branching vertex of out-degree one, if there is one.
fn chain_case(s: &SearchState) -> Option<BranchDecision> {
    let v = branching_vertices(s).find(|&v| s.graph().out_degree(v) == 1)?;
    let chain = find_chain(s, v).expect("BN_1 vertex");
    let context = CaseContext { chain: Some(chain.clone()), ..CaseContext::default() };
    Some(if chain.dead_end {
        BranchDecision { case: CaseId::B1, pivot: v, children: vec![vec![Step::Leaf(v)]], context }
    } else {
        let inner: Vec<Step> = chain.vertices.iter().map(|&u| Step::Internal(u)).collect();
        BranchDecision { case: CaseId::B2, pivot: v, children: vec![inner, vec![Step::Leaf(v)]], context }
    })
}

/// Case selection. Checks that `s` is reduced and not halted first.
pub fn select_case(s: &SearchState) -> Result<BranchDecision, BranchError> {
    select_case_with(s, RuleSet::FULL)
}

/// [`select_case`] against a specific rule set.
pub fn select_case_with(s: &SearchState, rules: RuleSet) -> Result<BranchDecision, BranchError> {
    if s.count(Label::Branching) == 0 {
        return Err(BranchError::ContractViolation("no branching vertex"));
    }
    if !reduce::is_reduced(s, rules) {
        return Err(BranchError::ContractViolation("state is not reduced"));
    }
    Ok(select_case_unchecked(s))
}

/// Binary branching used by the exponential-space variant: B1/B2 while a
/// branching vertex of out-degree one exists, otherwise `<v IN; v LN>` on
/// the branching vertex of maximum out-degree.
pub fn select_naive(s: &SearchState) -> BranchDecision {
    if let Some(d) = chain_case(s) {
        return d;
    }
    let v = max_out_degree_bn(s).expect("reduced state has a branching vertex");
    binary(CaseId::Naive, v, CaseContext::default())
}

/// Case selection without precondition checks; `s` must be reduced.
pub fn select_case_unchecked(s: &SearchState) -> BranchDecision {
    if let Some(d) = chain_case(s) {
        return d;
    }
    let g = s.graph();
    let v = max_out_degree_bn(s).expect("reduced state has a branching vertex");
    if g.out_degree(v) >= 3 {
        return binary(CaseId::B3a, v, CaseContext::default());
    }
    debug_assert_eq!(g.out_degree(v), 2);
    debug_assert!(branching_vertices(s).all(|b| g.out_degree(b) == 2));
    let (a, b) = (g.out_neighbors(v)[0], g.out_neighbors(v)[1]);
    let (la, lb) = (s.label(a), s.label(b));
    let pair = CaseContext { x1: Some(a), x2: Some(b), ..CaseContext::default() };

    if la == Label::Floating && lb == Label::Floating {
        let targets = makeleaves_targets(s, v, a, b);
        debug_assert!(!targets.is_empty());
        return BranchDecision {
            case: CaseId::B3b,
            pivot: v,
            children: vec![vec![Step::Internal(v), Step::MakeLeaves(targets)], vec![Step::Leaf(v)]],
            context: pair,
        };
    }

    let outside = |z: VertexId| g.out_neighbors(z).iter().filter(|&&u| u != a && u != b).count();
    let free_pair: Vec<VertexId> = [a, b].into_iter().filter(|&x| s.label(x) == Label::Free).collect();
    let sub_cases: [(CaseId, &dyn Fn(VertexId) -> bool); 3] = [
        (CaseId::B4_1, &|z| outside(z) == 0),
        (CaseId::B4_2, &|z| g.out_arcs_cut(z, s.root())),
        (CaseId::B4_3, &|z| outside(z) == 1),
    ];
    for (case, holds) in sub_cases {
        if let Some(&z) = free_pair.iter().find(|&&z| holds(z)) {
            return binary(case, v, CaseContext { z: Some(z), ..pair });
        }
    }

    if free_pair.len() == 1 {
        let (x1, x2) = if la == Label::Free { (a, b) } else { (b, a) };
        debug_assert_eq!(s.label(x2), Label::Floating);
        let targets = makeleaves_targets(s, v, x1, x2);
        debug_assert!(!targets.is_empty());
        return BranchDecision {
            case: CaseId::B5,
            pivot: v,
            children: vec![
                vec![Step::Internal(v), Step::Internal(x1)],
                vec![Step::Internal(v), Step::Leaf(x1), Step::MakeLeaves(targets)],
                vec![Step::Leaf(v)],
            ],
            context: CaseContext { x1: Some(x1), x2: Some(x2), ..CaseContext::default() },
        };
    }

    debug_assert_eq!(free_pair.len(), 2);
    let (x1, x2) = (a, b);
    let shared = g
        .in_neighbors(x1)
        .iter()
        .copied()
        .find(|&z| z != v && g.in_neighbors(x2).binary_search(&z).is_ok());
    if let Some(z) = shared {
        return BranchDecision {
            case: CaseId::B6,
            pivot: v,
            children: vec![
                vec![Step::Internal(v), Step::Internal(x1)],
                vec![Step::Internal(v), Step::Leaf(x1), Step::Internal(x2)],
                vec![Step::Leaf(v)],
            ],
            context: CaseContext { z: Some(z), ..pair },
        };
    }

    let targets = makeleaves_targets(s, v, x1, x2);
    if targets.len() >= 2 {
        debug_assert!(outside(x1) >= 2 && outside(x2) >= 2);
        return BranchDecision {
            case: CaseId::B7,
            pivot: v,
            children: vec![
                vec![Step::Internal(v), Step::Internal(x1)],
                vec![Step::Internal(v), Step::Leaf(x1), Step::Internal(x2)],
                vec![Step::Internal(v), Step::Leaf(x1), Step::Leaf(x2), Step::MakeLeaves(targets)],
                vec![Step::Leaf(v)],
            ],
            context: pair,
        };
    }

    debug_assert_eq!(targets.len(), 1);
    let q = targets.first().copied();
    let case = match q.map(|q| s.label(q)) {
        Some(Label::Branching) => CaseId::B8b,
        _ => CaseId::B8a,
    };
    binary(case, v, CaseContext { q, ..pair })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Arc, DiGraph};
    use crate::reduce::{reduce_fixpoint, HaltOutcome};

    fn g(n: usize, arcs: &[(usize, usize)]) -> DiGraph {
        DiGraph::from_arcs(n, arcs.iter().map(|&(u, v)| Arc::new(u, v))).unwrap()
    }

    fn v(i: usize) -> VertexId {
        VertexId::from(i)
    }

    fn reduced(n: usize, arcs: &[(usize, usize)]) -> SearchState {
        let red = reduce_fixpoint(SearchState::initial(g(n, arcs), v(0)).unwrap(), RuleSet::FULL);
        assert_eq!(red.halt, HaltOutcome::NoHalt);
        red.state
    }

    #[test]
    fn chain_with_open_end() {
        // BN 1 -> 2 -> 3 -> {4, 5}; 2 and 3 free
        let s = SearchState::initial(g(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (3, 5)]), v(0)).unwrap();
        let c = find_chain(&s, v(1)).unwrap();
        assert_eq!(c.vertices, vec![v(1), v(2), v(3)]);
        assert!(!c.dead_end);
    }

    #[test]
    fn chain_dead_end() {
        let s = SearchState::initial(g(4, &[(0, 1), (1, 2), (2, 3)]), v(0)).unwrap();
        let c = find_chain(&s, v(1)).unwrap();
        assert_eq!(c.vertices, vec![v(1), v(2), v(3)]);
        assert!(c.dead_end);
    }

    #[test]
    fn chain_single_step() {
        let s = SearchState::initial(g(5, &[(0, 1), (1, 2), (2, 3), (2, 4)]), v(0)).unwrap();
        let c = find_chain(&s, v(1)).unwrap();
        assert_eq!(c.vertices, vec![v(1), v(2)]);
        assert!(!c.dead_end);
        assert!(find_chain(&s, v(2)).is_err());
    }

    #[test]
    fn b1_on_dead_end_chain() {
        // 1 -> 2 is 1's only out-arc and 2 has no way on; 3 and 5 also feed
        // 2 and 4, so no out-arc set is a cut
        let arcs = [(0, 1), (0, 3), (0, 5), (1, 2), (3, 2), (3, 4), (5, 2), (5, 4)];
        let s = reduced(6, &arcs);
        let d = select_case(&s).unwrap();
        assert_eq!(d.case, CaseId::B1);
        assert_eq!(d.pivot, v(1));
        assert_eq!(d.children, vec![vec![Step::Leaf(v(1))]]);
    }

    #[test]
    fn b3b_two_floating_neighbours() {
        // v = 1 with out-neighbours 2 and 3 marked floating; other in-arcs from 4
        let arcs = [(0, 1), (0, 4), (1, 2), (1, 3), (4, 2), (4, 3), (4, 5), (5, 4), (0, 5)];
        let mut s = SearchState::initial(g(6, &arcs), v(0)).unwrap();
        s.make_floating(v(2)).unwrap();
        s.make_floating(v(3)).unwrap();
        let red = reduce_fixpoint(s, RuleSet::FULL);
        assert_eq!(red.halt, HaltOutcome::NoHalt);
        let d = select_case(&red.state).unwrap();
        assert_eq!(d.case, CaseId::B3b);
        assert_eq!(d.makeleaves_children(), vec![0]);
    }

    #[test]
    fn b8_figure_situation() {
        // v = 1 -> {2, 3}; q = 4 -> 2; 2 -> 3; root also reaches 4 through 5
        // and both x's have further out-arcs so no earlier case fires.
        let arcs = [
            (0, 1),
            (0, 5),
            (1, 2),
            (1, 3),
            (5, 4),
            (5, 6),
            (4, 2),
            (2, 3),
            (2, 6),
            (3, 6),
            (3, 7),
            (2, 7),
            (6, 7),
            (7, 6),
            (4, 7),
            (6, 4),
        ];
        let s = reduced(8, &arcs);
        let d = select_case(&s).unwrap();
        assert!(matches!(d.case, CaseId::B8a | CaseId::B8b), "{:?}", d.case);
    }

    #[test]
    fn make_leaves_relabels() {
        // in-neighbours of 2/3 besides 1: 4 (free) and 5 (branching)
        let arcs = [(0, 1), (0, 5), (1, 2), (1, 3), (4, 2), (5, 3), (5, 4)];
        let s = SearchState::initial(g(6, &arcs), v(0)).unwrap();
        let t = make_leaves(&s, v(1), v(2), v(3));
        assert_eq!(t.label(v(4)), Label::Floating);
        assert_eq!(t.label(v(5)), Label::Leaf);
        assert_eq!(t.label(v(0)), Label::Internal);
    }

    #[test]
    fn select_rejects_unreduced() {
        let s = SearchState::initial(g(3, &[(0, 1), (1, 2)]), v(0)).unwrap();
        assert!(matches!(select_case(&s), Err(BranchError::ContractViolation(_))));
    }
}
