//! The recursive search: reduce, stop on a halting rule, otherwise branch and
//! keep the best child. The rooted driver is wrapped by one that tries every
//! root.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::branch::{self, BranchDecision, CaseId};
use crate::graph::{Arc, DiGraph, VertexId};
use crate::measure::{self, BranchAudit, Measure};
use crate::memo::MemoTable;
use crate::reduce::{self, HaltOutcome, Reduction, RuleSet, Rule};
use crate::state::{SearchState, StateError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Variant {
    /// The full case analysis with all reduction rules.
    #[default]
    BranchReduce,
    /// Chain cases plus a plain binary split; no contraction rule.
    NaiveBn,
    /// [`Variant::NaiveBn`] until the open region is small, then a table
    /// lookup.
    Memoized,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    /// Record a [`BranchAudit`] for every branching node (full variant only).
    pub audit: bool,
    pub variant: Variant,
    /// Abort with [`SolveError::Timeout`] after this many search nodes.
    pub node_limit: Option<u64>,
    /// Table cutover fraction for [`Variant::Memoized`].
    pub alpha: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { audit: false, variant: Variant::BranchReduce, node_limit: None, alpha: 0.3 }
    }
}

impl SolverConfig {
    pub fn with_variant(variant: Variant) -> Self {
        SolverConfig { variant, ..Self::default() }
    }

    pub fn audited() -> Self {
        SolverConfig { audit: true, ..Self::default() }
    }

    fn rules(&self) -> RuleSet {
        match self.variant {
            Variant::BranchReduce => RuleSet::FULL,
            Variant::NaiveBn | Variant::Memoized => RuleSet::NO_CONTRACTION,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SearchStats {
    pub nodes_expanded: u64,
    pub max_depth: usize,
    /// Events per rule, indexed by [`Rule::index`].
    pub reductions: [u64; 6],
    pub cases: BTreeMap<CaseId, u64>,
    pub audits: Vec<BranchAudit>,
    /// Reduction events after which the measure went up (audit mode only).
    pub measure_increases: u64,
    pub memo_lookups: u64,
}

impl SearchStats {
    pub fn reductions_of(&self, rule: Rule) -> u64 {
        self.reductions[rule.index()]
    }

    pub fn case_count(&self, case: CaseId) -> u64 {
        self.cases.get(&case).copied().unwrap_or(0)
    }

    /// Largest branching number over the audited nodes.
    pub fn max_branching_number(&self) -> Option<f64> {
        self.audits.iter().map(|a| a.branching_number).fold(None, |m, t| Some(m.map_or(t, |m: f64| m.max(t))))
    }

    pub fn merge(&mut self, other: SearchStats) {
        self.nodes_expanded += other.nodes_expanded;
        self.max_depth = self.max_depth.max(other.max_depth);
        for (a, b) in self.reductions.iter_mut().zip(other.reductions) {
            *a += b;
        }
        for (case, n) in other.cases {
            *self.cases.entry(case).or_insert(0) += n;
        }
        self.audits.extend(other.audits);
        self.measure_increases += other.measure_increases;
        self.memo_lookups += other.memo_lookups;
    }
}

/// An optimal out-branching, in the input graph's vertex ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub root: VertexId,
    pub leaves: usize,
    pub tree: Vec<Arc>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveResult {
    /// `None` when no spanning out-branching exists.
    pub solution: Option<Solution>,
    pub stats: SearchStats,
}

impl SolveResult {
    pub fn leaf_count(&self) -> Option<usize> {
        self.solution.as_ref().map(|s| s.leaves)
    }

    pub fn is_feasible(&self) -> bool {
        self.solution.is_some()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SolveError {
    EmptyGraph,
    BadRoot(VertexId),
    Timeout { nodes: u64 },
    State(StateError),
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::EmptyGraph => f.write_str("graph has no vertices"),
            SolveError::BadRoot(r) => write!(f, "root {r} is not a vertex"),
            SolveError::Timeout { nodes } => write!(f, "node limit reached after {nodes} nodes"),
            SolveError::State(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for SolveError {}

impl From<StateError> for SolveError {
    fn from(e: StateError) -> Self {
        SolveError::State(e)
    }
}

/// How the best tree of a subtree is represented until the search returns.
enum Witness {
    /// A finished state; its tree still needs contraction expansion.
    Solved(SearchState),
    /// Tree arcs already in the input graph's ids.
    Combined(Vec<Arc>),
}

struct Best {
    leaves: usize,
    witness: Witness,
}

impl Best {
    fn into_tree(self) -> Vec<Arc> {
        match self.witness {
            Witness::Solved(s) => {
                let mut t = s.expanded_tree();
                t.sort();
                t
            }
            Witness::Combined(mut t) => {
                t.sort();
                t
            }
        }
    }
}

struct Search<'t> {
    cfg: SolverConfig,
    rules: RuleSet,
    stats: SearchStats,
    memo: Option<&'t mut MemoTable>,
}

impl Search<'_> {
    fn reduce(&mut self, s: SearchState) -> Reduction {
        let audit = self.cfg.audit;
        let mut last = if audit { measure::mu(&s) } else { Measure::ZERO };
        let stats = &mut self.stats;
        reduce::reduce_fixpoint_with(s, self.rules, |ev, st| {
            stats.reductions[ev.rule.index()] += 1;
            if audit {
                let m = measure::mu(st);
                if m > last {
                    stats.measure_increases += 1;
                }
                last = m;
            }
        })
    }

    fn decide(&self, s: &SearchState) -> BranchDecision {
        match self.cfg.variant {
            Variant::BranchReduce => branch::select_case_unchecked(s),
            Variant::NaiveBn | Variant::Memoized => branch::select_naive(s),
        }
    }

    fn expand_children(&mut self, s: &SearchState, d: &BranchDecision) -> Result<Vec<Reduction>, SolveError> {
        let mut out = Vec::with_capacity(d.children.len());
        for steps in &d.children {
            let child = branch::apply_child(s, steps)?;
            out.push(self.reduce(child));
        }
        Ok(out)
    }

    fn audit(&mut self, s: &SearchState, d: &BranchDecision, children: &[Reduction]) -> Result<(), SolveError> {
        let mut pre = Vec::with_capacity(children.len());
        for steps in &d.children {
            pre.push(measure::mu(&branch::apply_child(s, steps)?));
        }
        let mut record = audit_record(s, d, &pre, children);
        if d.case == CaseId::B4_3 && !children[0].halt.is_halt() {
            // analysed together with the branching that follows the first child
            let next_state = &children[0].state;
            let next = branch::select_case_unchecked(next_state);
            let mut lookahead = Search { cfg: SolverConfig { audit: false, ..self.cfg }, rules: self.rules, stats: SearchStats::default(), memo: None };
            let grand = lookahead.expand_children(next_state, &next)?;
            let pre_next: Vec<Measure> = grand.iter().map(|r| measure::mu(&r.state)).collect();
            let successor = audit_record(next_state, &next, &pre_next, &grand);
            record.compose_first_child(&successor);
        }
        self.stats.audits.push(record);
        Ok(())
    }

    fn memo_cutover(&mut self, s: &SearchState) -> Option<Option<Best>> {
        let table = self.memo.as_deref_mut()?;
        let lookup = table.lookup(s)?;
        self.stats.memo_lookups += 1;
        Some(lookup.map(|(leaves, tree)| Best { leaves, witness: Witness::Combined(tree) }))
    }

    fn node(&mut self, red: Reduction, depth: usize) -> Result<Option<Best>, SolveError> {
        self.stats.nodes_expanded += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        if let Some(limit) = self.cfg.node_limit {
            if self.stats.nodes_expanded > limit {
                return Err(SolveError::Timeout { nodes: self.stats.nodes_expanded });
            }
        }
        match red.halt {
            HaltOutcome::AnswerNo(_) => return Ok(None),
            HaltOutcome::Solved(leaves) => return Ok(Some(Best { leaves, witness: Witness::Solved(red.state) })),
            HaltOutcome::NoHalt => {}
        }
        let s = red.state;
        if let Some(found) = self.memo_cutover(&s) {
            return Ok(found);
        }
        let d = self.decide(&s);
        *self.stats.cases.entry(d.case).or_insert(0) += 1;
        let children = self.expand_children(&s, &d)?;
        if self.cfg.audit && self.cfg.variant == Variant::BranchReduce {
            self.audit(&s, &d, &children)?;
        }
        drop(s);
        let mut best: Option<Best> = None;
        for child in children {
            if let Some(b) = self.node(child, depth + 1)? {
                if best.as_ref().map_or(true, |cur| b.leaves > cur.leaves) {
                    best = Some(b);
                }
            }
        }
        Ok(best)
    }
}

fn audit_record(s: &SearchState, d: &BranchDecision, pre: &[Measure], children: &[Reduction]) -> BranchAudit {
    let post: Vec<Measure> = children.iter().map(|r| measure::mu(&r.state)).collect();
    let halted: Vec<bool> = children.iter().map(|r| r.halt.is_halt()).collect();
    measure::audit_branch(s, d, pre, &post, &halted)
}

fn run(s: SearchState, cfg: SolverConfig, memo: Option<&mut MemoTable>) -> Result<SolveResult, SolveError> {
    let root = s.root();
    let mut search = Search { cfg, rules: cfg.rules(), stats: SearchStats::default(), memo };
    let red = search.reduce(s);
    let best = search.node(red, 0)?;
    Ok(SolveResult {
        solution: best.map(|b| Solution { root, leaves: b.leaves, tree: b.into_tree() }),
        stats: search.stats,
    })
}

fn trivial(g: &DiGraph, r: VertexId) -> Option<SolveResult> {
    let single = g.vertex_count() == 1;
    let feasible = g.reachable_from(r, &Default::default()).len() == g.vertex_count();
    (single || !feasible).then(|| SolveResult {
        solution: single.then(|| Solution { root: r, leaves: 0, tree: Vec::new() }),
        stats: SearchStats::default(),
    })
}

fn check_input(g: &DiGraph, r: VertexId) -> Result<(), SolveError> {
    if g.vertex_count() == 0 {
        return Err(SolveError::EmptyGraph);
    }
    if !g.is_alive(r) {
        return Err(SolveError::BadRoot(r));
    }
    Ok(())
}

/// Maximum leaf out-branching rooted at `r`.
pub fn solve_rooted(g: &DiGraph, r: VertexId, cfg: SolverConfig) -> Result<SolveResult, SolveError> {
    check_input(g, r)?;
    if cfg.variant == Variant::Memoized {
        let mut table = MemoTable::new(g.clone(), cfg.alpha);
        return solve_rooted_with_table(g, r, cfg, &mut table);
    }
    if let Some(res) = trivial(g, r) {
        return Ok(res);
    }
    run(SearchState::initial(g.clone(), r)?, cfg, None)
}

/// [`solve_rooted`] for the memoized variant against an existing table.
pub fn solve_rooted_with_table(
    g: &DiGraph,
    r: VertexId,
    cfg: SolverConfig,
    table: &mut MemoTable,
) -> Result<SolveResult, SolveError> {
    check_input(g, r)?;
    if let Some(res) = trivial(g, r) {
        return Ok(res);
    }
    let cfg = SolverConfig { variant: Variant::Memoized, ..cfg };
    run(SearchState::initial(g.clone(), r)?, cfg, Some(table))
}

/// Runs the search from an arbitrary partial solution. The tree is reported
/// in the ids of the graph the state was created from.
pub fn solve_state(s: SearchState, cfg: SolverConfig) -> Result<SolveResult, SolveError> {
    let cfg = if cfg.variant == Variant::Memoized { SolverConfig { variant: Variant::NaiveBn, ..cfg } } else { cfg };
    run(s, cfg, None)
}

/// Exponential-time baseline: chain cases plus a binary split.
pub fn solve_naive_bn(g: &DiGraph, r: VertexId) -> Result<SolveResult, SolveError> {
    solve_rooted(g, r, SolverConfig::with_variant(Variant::NaiveBn))
}

/// Best over all roots, tried in ascending order; ties keep the lower root.
pub fn solve(g: &DiGraph, cfg: SolverConfig) -> Result<SolveResult, SolveError> {
    if cfg.variant == Variant::Memoized {
        let mut table = MemoTable::new(g.clone(), cfg.alpha);
        return solve_with_table(g, cfg, &mut table);
    }
    solve_all_roots(g, cfg, None)
}

/// [`solve`] for the memoized variant; the table is shared by all roots.
pub fn solve_with_table(g: &DiGraph, cfg: SolverConfig, table: &mut MemoTable) -> Result<SolveResult, SolveError> {
    solve_all_roots(g, cfg, Some(table))
}

fn solve_all_roots(g: &DiGraph, cfg: SolverConfig, mut table: Option<&mut MemoTable>) -> Result<SolveResult, SolveError> {
    if g.vertex_count() == 0 {
        return Err(SolveError::EmptyGraph);
    }
    let mut stats = SearchStats::default();
    let mut best: Option<Solution> = None;
    let mut remaining = cfg.node_limit;
    for r in g.vertices() {
        let cfg_r = SolverConfig { node_limit: remaining, ..cfg };
        let res = match table.as_deref_mut() {
            Some(t) => solve_rooted_with_table(g, r, cfg_r, t)?,
            None => solve_rooted(g, r, cfg_r)?,
        };
        if let Some(limit) = remaining.as_mut() {
            *limit -= res.stats.nodes_expanded.min(*limit);
        }
        stats.merge(res.stats);
        if let Some(sol) = res.solution {
            if best.as_ref().map_or(true, |b| sol.leaves > b.leaves) {
                best = Some(sol);
            }
        }
    }
    Ok(SolveResult { solution: best, stats })
}

/// Checks that `tree` is a spanning out-branching of `g` rooted at `r` and
/// returns its number of leaves.
pub fn validate_tree(g: &DiGraph, r: VertexId, tree: &[Arc]) -> Result<usize, &'static str> {
    let n = g.capacity();
    let mut parent = vec![None; n];
    let mut children = vec![0usize; n];
    for a in tree {
        if !g.has_arc(a.tail, a.head) {
            return Err("tree arc not in graph");
        }
        if a.head == r {
            return Err("arc into the root");
        }
        if parent[a.head.index()].replace(a.tail).is_some() {
            return Err("vertex with two parents");
        }
        children[a.tail.index()] += 1;
    }
    for v in g.vertices() {
        if v != r && parent[v.index()].is_none() {
            return Err("vertex not spanned");
        }
        // walk up; a path longer than n means a cycle
        let mut cur = v;
        let mut steps = 0;
        while let Some(p) = parent[cur.index()] {
            cur = p;
            steps += 1;
            if steps > n {
                return Err("cycle");
            }
        }
        if cur != r {
            return Err("not rooted at r");
        }
    }
    Ok(g.vertices().filter(|&v| v != r && children[v.index()] == 0).count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn g(n: usize, arcs: &[(usize, usize)]) -> DiGraph {
        DiGraph::from_arcs(n, arcs.iter().map(|&(u, v)| Arc::new(u, v))).unwrap()
    }

    fn cycle(n: usize) -> DiGraph {
        g(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
    }

    fn check(h: &DiGraph, r: usize, cfg: SolverConfig) -> Option<usize> {
        let r = VertexId::from(r);
        let res = solve_rooted(h, r, cfg).unwrap();
        if let Some(sol) = &res.solution {
            assert_eq!(validate_tree(h, r, &sol.tree), Ok(sol.leaves));
        }
        res.leaf_count()
    }

    #[test]
    fn star_and_cycle() {
        let arcs: Vec<_> = (1..5).flat_map(|i| [(0, i), (i, 0)]).collect();
        let star = g(5, &arcs);
        for variant in [Variant::BranchReduce, Variant::NaiveBn, Variant::Memoized] {
            let cfg = SolverConfig::with_variant(variant);
            assert_eq!(check(&star, 0, cfg), Some(4));
            for r in 0..5 {
                assert_eq!(check(&cycle(5), r, cfg), Some(1));
            }
        }
    }

    #[test]
    fn in_star_is_infeasible() {
        let h = g(4, &[(1, 0), (2, 0), (3, 0)]);
        let res = solve(&h, SolverConfig::default()).unwrap();
        assert!(!res.is_feasible());
    }

    #[test]
    fn complete_bidirected_k4() {
        let arcs: Vec<_> = (0..4).flat_map(|u| (0..4).filter(move |&v| v != u).map(move |v| (u, v))).collect();
        let res = solve(&g(4, &arcs), SolverConfig::default()).unwrap();
        assert_eq!(res.leaf_count(), Some(3));
    }

    #[test]
    fn single_vertex_and_empty() {
        let res = solve(&DiGraph::new(1), SolverConfig::default()).unwrap();
        assert_eq!(res.leaf_count(), Some(0));
        assert_eq!(solve(&DiGraph::new(0), SolverConfig::default()), Err(SolveError::EmptyGraph));
        assert_eq!(
            solve_rooted(&DiGraph::new(2), VertexId(5), SolverConfig::default()),
            Err(SolveError::BadRoot(VertexId(5)))
        );
    }

    #[test]
    fn cycle_with_chord_matches_oracle() {
        let mut arcs: Vec<_> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        arcs.push((0, 3));
        let h = g(6, &arcs);
        let best = (0..6).filter_map(|r| oracle::solve_unconstrained(&h, VertexId::from(r)).unwrap()).max();
        assert_eq!(solve(&h, SolverConfig::default()).unwrap().leaf_count(), best);
    }

    #[test]
    fn node_limit_times_out() {
        // fixed pseudo-random digraph that needs real branching
        let mut x = 0x2545_f491_4f6c_dd1du64;
        let mut arcs = Vec::new();
        for u in 0..10 {
            for v in 0..10 {
                x ^= x << 13;
                x ^= x >> 7;
                x ^= x << 17;
                if u != v && x % 100 < 35 {
                    arcs.push((u, v));
                }
            }
        }
        let h = g(10, &arcs);
        let r = (0..10).map(VertexId::from).find(|&r| h.reachable_from(r, &Default::default()).len() == 10).unwrap();
        let full = solve_rooted(&h, r, SolverConfig::default()).unwrap();
        let nodes = full.stats.nodes_expanded;
        assert!(nodes > 2, "{nodes}");
        let cfg = SolverConfig { node_limit: Some(nodes - 1), ..SolverConfig::default() };
        assert_eq!(solve_rooted(&h, r, cfg), Err(SolveError::Timeout { nodes }));
        let cfg = SolverConfig { node_limit: Some(nodes), ..SolverConfig::default() };
        assert_eq!(solve_rooted(&h, r, cfg).unwrap().leaf_count(), full.leaf_count());
    }

    #[test]
    fn validate_rejects_bad_trees() {
        let h = g(3, &[(0, 1), (1, 2), (2, 1), (0, 2)]);
        let r = VertexId(0);
        assert_eq!(validate_tree(&h, r, &[Arc::new(0, 1), Arc::new(1, 2)]), Ok(1));
        assert_eq!(validate_tree(&h, r, &[Arc::new(0, 1)]), Err("vertex not spanned"));
        assert_eq!(validate_tree(&h, r, &[Arc::new(1, 2), Arc::new(2, 1)]), Err("cycle"));
        assert_eq!(validate_tree(&h, r, &[Arc::new(0, 1), Arc::new(0, 2), Arc::new(1, 2)]), Err("vertex with two parents"));
    }
}
