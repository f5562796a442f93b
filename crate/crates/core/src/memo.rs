//! Exponential-space variant. The search runs the naive branching until the
//! open part of the instance (free, floating and branching vertices) has at
//! most `ceil(alpha * n)` vertices and then finishes with a table of optimal
//! completions of small induced subgraphs.
//!
//! A table entry for a vertex set `W` with branching set `B` and floating set
//! `F` is the best out-branching of `G[W]` plus two new vertices `r'` and `y`
//! and arcs `(r', y)` and `(r', b)` for `b` in `B`, rooted at `r'`, with
//! every vertex of `F` a leaf. Entries are filled on first use.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{Arc, DiGraph, VertexId};
use crate::solver::{self, SolveError, SolveResult, SolverConfig, Variant};
use crate::state::{Label, SearchState};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MemoKey {
    pub vertices: Vec<VertexId>,
    pub bn: Vec<VertexId>,
    pub fl: Vec<VertexId>,
}

/// Optimal completion over the augmented graph, whose vertices are the key's
/// vertices in order followed by `r'` and `y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemoEntry {
    pub leaves: usize,
    pub tree: Vec<Arc>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MemoError {
    BudgetExceeded { needed: u64, budget: u64 },
}

impl fmt::Display for MemoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MemoError::BudgetExceeded { needed, budget } => {
                write!(f, "table needs {needed} entries, budget is {budget}")
            }
        }
    }
}

impl core::error::Error for MemoError {}

/// `ceil(alpha * n)`, tolerant to rounding noise in `alpha * n`.
pub fn cutover_size(n: usize, alpha: f64) -> usize {
    let x = libm::ceil(alpha * n as f64 - 1e-9);
    if x <= 0.0 {
        0
    } else {
        x as usize
    }
}

/// The graph an entry is computed on, with the map from its local ids to the
/// original ones. `r'` and `y` are the last two vertices.
pub fn augmented_graph(g: &DiGraph, key: &MemoKey) -> (DiGraph, Vec<VertexId>) {
    let (sub, map) = g.induced_subgraph(&key.vertices);
    let k = map.len();
    let local = |u: VertexId| VertexId::from(map.binary_search(&u).expect("bn vertex in key"));
    let mut aug = DiGraph::new(k + 2);
    for a in sub.arcs() {
        aug.add_arc(a).expect("fresh arc");
    }
    let (r, y) = (VertexId::from(k), VertexId::from(k + 1));
    aug.add_arc(Arc { tail: r, head: y }).expect("fresh arc");
    for &b in &key.bn {
        aug.add_arc(Arc { tail: r, head: local(b) }).expect("fresh arc");
    }
    (aug, map)
}

/// Computes one entry with the full branch-and-reduce search.
pub fn compute_entry(g: &DiGraph, key: &MemoKey) -> Option<MemoEntry> {
    if key.bn.is_empty() && !key.vertices.is_empty() {
        return None;
    }
    let (aug, map) = augmented_graph(g, key);
    let k = map.len();
    let mut s = SearchState::initial(aug, VertexId::from(k)).ok()?;
    for &u in &key.fl {
        let local = VertexId::from(map.binary_search(&u).ok()?);
        s.make_floating(local).ok()?;
    }
    let res = solver::solve_state(s, SolverConfig::default()).expect("no node limit");
    res.solution.map(|sol| MemoEntry { leaves: sol.leaves, tree: sol.tree })
}

pub struct MemoTable {
    graph: DiGraph,
    alpha: f64,
    threshold: usize,
    entries: BTreeMap<MemoKey, Option<MemoEntry>>,
}

impl MemoTable {
    /// An empty table; entries are computed on demand.
    pub fn new(graph: DiGraph, alpha: f64) -> Self {
        let threshold = cutover_size(graph.vertex_count(), alpha);
        MemoTable { graph, alpha, threshold, entries: BTreeMap::new() }
    }

    /// Fills every entry up front. Fails before doing any work if the number
    /// of keys exceeds `budget`.
    pub fn build(graph: DiGraph, alpha: f64, budget: u64) -> Result<Self, MemoError> {
        let mut t = MemoTable::new(graph, alpha);
        let n = t.graph.vertex_count() as u64;
        let needed: u64 = (0..=t.threshold as u64).map(|k| binomial(n, k).saturating_mul(3u64.saturating_pow(k as u32))).fold(0, u64::saturating_add);
        if needed > budget {
            return Err(MemoError::BudgetExceeded { needed, budget });
        }
        let verts: Vec<VertexId> = t.graph.vertices().collect();
        let mut subset = Vec::new();
        t.fill_subsets(&verts, 0, &mut subset);
        Ok(t)
    }

    fn fill_subsets(&mut self, verts: &[VertexId], from: usize, subset: &mut Vec<VertexId>) {
        let k = subset.len();
        for code in 0..3usize.pow(k as u32) {
            let (mut bn, mut fl) = (Vec::new(), Vec::new());
            let mut c = code;
            for &u in subset.iter() {
                match c % 3 {
                    1 => bn.push(u),
                    2 => fl.push(u),
                    _ => {}
                }
                c /= 3;
            }
            self.entry(MemoKey { vertices: subset.clone(), bn, fl });
        }
        if k == self.threshold {
            return;
        }
        for i in from..verts.len() {
            subset.push(verts[i]);
            self.fill_subsets(verts, i + 1, subset);
            subset.pop();
        }
    }

    pub fn graph(&self) -> &DiGraph {
        &self.graph
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Largest open region the table answers for.
    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MemoKey, &Option<MemoEntry>)> {
        self.entries.iter()
    }

    /// Stores an entry as is, e.g. when loading a saved table.
    pub fn insert(&mut self, key: MemoKey, entry: Option<MemoEntry>) {
        self.entries.insert(key, entry);
    }

    pub fn entry(&mut self, key: MemoKey) -> &Option<MemoEntry> {
        let g = &self.graph;
        self.entries.entry(key).or_insert_with_key(|k| compute_entry(g, k))
    }

    /// Key of the open region of `s`, if it is small enough.
    pub fn key_for(&self, s: &SearchState) -> Option<MemoKey> {
        let (mut vertices, mut bn, mut fl) = (Vec::new(), Vec::new(), Vec::new());
        for v in s.graph().vertices() {
            match s.label(v) {
                Label::Free => vertices.push(v),
                Label::Branching => {
                    vertices.push(v);
                    bn.push(v);
                }
                Label::Floating => {
                    vertices.push(v);
                    fl.push(v);
                }
                Label::Internal | Label::Leaf => {}
            }
            if vertices.len() > self.threshold {
                return None;
            }
        }
        Some(MemoKey { vertices, bn, fl })
    }

    /// Finishes `s` from the table when its open region is small enough:
    /// `None` if it is not, otherwise the best leaf count and tree (or `None`
    /// if `s` has no completion).
    pub fn lookup(&mut self, s: &SearchState) -> Option<Option<(usize, Vec<Arc>)>> {
        debug_assert!(s.contractions().is_empty());
        let key = self.key_for(s)?;
        let k = key.vertices.len();
        let vertices = key.vertices.clone();
        let entry = self.entry(key).as_ref();
        Some(entry.map(|e| {
            let mut tree = s.tree_arcs();
            tree.extend(e.tree.iter().filter(|a| a.tail.index() < k).map(|a| Arc {
                tail: vertices[a.tail.index()],
                head: vertices[a.head.index()],
            }));
            (s.leaf_count() + e.leaves - 1, tree)
        }))
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Memoized search from root `r` with a fresh lazily filled table.
pub fn solve_memoized(g: &DiGraph, r: VertexId, alpha: f64) -> Result<SolveResult, SolveError> {
    solver::solve_rooted(g, r, SolverConfig { variant: Variant::Memoized, alpha, ..SolverConfig::default() })
}
