//! Halting rules H1-H3 and reduction rules R1-R6, plus the fixpoint driver.
//!
//! The driver checks the halting rules, then applies the first applicable
//! reduction (rules in priority order, lowest vertex or arc first) and starts
//! over until a halting rule fires or nothing applies.

use alloc::vec::Vec;
use core::fmt;

use crate::graph::{Arc, VertexId};
use crate::state::{Label, SearchState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HaltRule {
    /// A free or floating vertex has no in-arc left.
    H1,
    /// No branching vertex left.
    H2,
    /// A non-tree bridge into a floating leaf separates two parts of size >= 2.
    H3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HaltOutcome {
    NoHalt,
    AnswerNo(HaltRule),
    /// A spanning tree with this many leaves has been built.
    Solved(usize),
}

impl HaltOutcome {
    pub fn is_halt(self) -> bool {
        self != HaltOutcome::NoHalt
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
}

impl Rule {
    pub const ALL: [Rule; 6] = [Rule::R1, Rule::R2, Rule::R3, Rule::R4, Rule::R5, Rule::R6];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R{}", self.index() + 1)
    }
}

/// One applied reduction and what it touched.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionEvent {
    pub rule: Rule,
    pub vertices: Vec<VertexId>,
    pub arcs: Vec<Arc>,
}

/// Which rules the driver may use. The exponential-space variant runs
/// without contraction so that residual graphs stay vertex-induced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RuleSet {
    pub contraction: bool,
}

impl RuleSet {
    pub const FULL: RuleSet = RuleSet { contraction: true };
    pub const NO_CONTRACTION: RuleSet = RuleSet { contraction: false };
}

impl Default for RuleSet {
    fn default() -> Self {
        RuleSet::FULL
    }
}

pub fn check_halt(s: &SearchState) -> HaltOutcome {
    let g = s.graph();
    let unattached = |v: VertexId| matches!(s.label(v), Label::Free | Label::Floating);

    if g.vertices().any(|v| unattached(v) && g.in_degree(v) == 0) {
        return HaltOutcome::AnswerNo(HaltRule::H1);
    }
    if s.count(Label::Branching) == 0 {
        return if g.vertices().any(unattached) {
            HaltOutcome::AnswerNo(HaltRule::H2)
        } else {
            HaltOutcome::Solved(s.leaf_count())
        };
    }
    if s.count(Label::Floating) > 0 {
        let stranded = g.undirected_bridges().into_iter().any(|b| {
            s.label(b.arc.head) == Label::Floating
                && !s.is_tree_arc(b.arc)
                && b.tail_side >= 2
                && b.head_side >= 2
        });
        if stranded {
            return HaltOutcome::AnswerNo(HaltRule::H3);
        }
    }
    HaltOutcome::NoHalt
}

/// Finds and applies the highest-priority reduction, if any.
pub fn apply_one(s: &mut SearchState, rules: RuleSet) -> Option<ReductionEvent> {
    for rule in Rule::ALL {
        if rule == Rule::R6 && !rules.contraction {
            continue;
        }
        if let Some(ev) = apply_rule(s, rule) {
            return Some(ev);
        }
    }
    None
}

fn event(rule: Rule, vertices: Vec<VertexId>, arcs: Vec<Arc>) -> Option<ReductionEvent> {
    Some(ReductionEvent { rule, vertices, arcs })
}

fn remove_all(s: &mut SearchState, arcs: &[Arc]) {
    for &a in arcs {
        s.remove_arc(a).expect("arc listed from the graph itself");
    }
}

/// Applies `rule` at its lowest qualifying vertex or arc.
pub fn apply_rule(s: &mut SearchState, rule: Rule) -> Option<ReductionEvent> {
    let vertices: Vec<VertexId> = s.graph().vertices().collect();
    match rule {
        Rule::R1 => {
            for v in vertices {
                let g = s.graph();
                let doomed: Vec<Arc> = match s.label(v) {
                    Label::Floating => g.out_neighbors(v).iter().map(|&h| Arc { tail: v, head: h }).collect(),
                    Label::Branching => g
                        .in_neighbors(v)
                        .iter()
                        .map(|&t| Arc { tail: t, head: v })
                        .filter(|&a| !s.is_tree_arc(a))
                        .collect(),
                    _ => continue,
                };
                if !doomed.is_empty() {
                    remove_all(s, &doomed);
                    return event(rule, alloc::vec![v], doomed);
                }
            }
            None
        }
        Rule::R2 => {
            let v = vertices
                .into_iter()
                .find(|&v| s.label(v) == Label::Branching && s.graph().out_degree(v) == 0)?;
            s.make_leaf(v).expect("branching vertex");
            event(rule, alloc::vec![v], Vec::new())
        }
        Rule::R3 => {
            let v = vertices
                .into_iter()
                .find(|&v| s.label(v) == Label::Free && s.graph().degree(v) == 1)?;
            s.make_floating(v).expect("free vertex");
            event(rule, alloc::vec![v], Vec::new())
        }
        Rule::R4 => {
            for v in vertices {
                if s.label(v) != Label::Leaf {
                    continue;
                }
                let g = s.graph();
                let doomed: Vec<Arc> = g
                    .in_neighbors(v)
                    .iter()
                    .map(|&t| Arc { tail: t, head: v })
                    .chain(g.out_neighbors(v).iter().map(|&h| Arc { tail: v, head: h }))
                    .filter(|&a| !s.is_tree_arc(a))
                    .collect();
                if !doomed.is_empty() {
                    remove_all(s, &doomed);
                    return event(rule, alloc::vec![v], doomed);
                }
            }
            None
        }
        Rule::R5 => {
            let root = s.root();
            let u = vertices
                .into_iter()
                .find(|&u| s.label(u) == Label::Branching && s.graph().out_arcs_cut(u, root))?;
            let attached: Vec<VertexId> = s.graph().out_neighbors(u).to_vec();
            s.internalize(u).expect("branching vertex");
            let mut touched = alloc::vec![u];
            touched.extend(attached);
            event(rule, touched, Vec::new())
        }
        Rule::R6 => {
            let (a, b) = mandatory_free_arc(s)?;
            s.contract(a, b).expect("arc exists");
            event(rule, alloc::vec![a, b], alloc::vec![Arc { tail: a, head: b }])
        }
    }
}

/// Lowest arc `(a,b)` between free vertices such that everything behind it,
/// a set `S` containing `b` with at least two vertices, is reachable from the
/// root only through `(a,b)`.
pub fn mandatory_free_arc(s: &SearchState) -> Option<(VertexId, VertexId)> {
    let g = s.graph();
    let root = s.root();
    let mut full: Option<usize> = None;
    for a in g.vertices().filter(|&a| s.label(a) == Label::Free) {
        for &b in g.out_neighbors(a) {
            if s.label(b) != Label::Free {
                continue;
            }
            let all = *full.get_or_insert_with(|| g.reach_filtered(root, |_, _| true).len());
            let without = g.reach_filtered(root, |t, h| !(t == a && h == b));
            if !without.contains(b) && all - without.len() >= 2 {
                return Some((a, b));
            }
        }
    }
    None
}

/// Result of running the reductions to a fixpoint or a halt.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub state: SearchState,
    pub events: Vec<ReductionEvent>,
    pub halt: HaltOutcome,
}

pub fn reduce_fixpoint(s: SearchState, rules: RuleSet) -> Reduction {
    reduce_fixpoint_with(s, rules, |_, _| {})
}

/// [`reduce_fixpoint`] with a callback after every applied event.
pub fn reduce_fixpoint_with<F>(mut s: SearchState, rules: RuleSet, mut observe: F) -> Reduction
where
    F: FnMut(&ReductionEvent, &SearchState),
{
    let mut events = Vec::new();
    loop {
        let halt = check_halt(&s);
        if halt.is_halt() {
            return Reduction { state: s, events, halt };
        }
        match apply_one(&mut s, rules) {
            Some(ev) => {
                observe(&ev, &s);
                events.push(ev);
            }
            None => {
                return Reduction { state: s, events, halt: HaltOutcome::NoHalt };
            }
        }
    }
}

/// True when no halting rule fires and no reduction applies.
pub fn is_reduced(s: &SearchState, rules: RuleSet) -> bool {
    if check_halt(s).is_halt() {
        return false;
    }
    let mut probe = s.clone();
    apply_one(&mut probe, rules).is_none()
}
