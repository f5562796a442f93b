//! Simple directed graphs with the structural queries used by the reduction
//! and branching rules.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Dense vertex index into the graph that owns it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for VertexId {
    #[inline]
    fn from(i: usize) -> Self {
        VertexId(i as u32)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A directed arc `tail -> head`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arc {
    pub tail: VertexId,
    pub head: VertexId,
}

impl Arc {
    #[inline]
    pub fn new(tail: impl Into<VertexId>, head: impl Into<VertexId>) -> Self {
        Arc {
            tail: tail.into(),
            head: head.into(),
        }
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.tail, self.head)
    }
}

pub type ArcSet = BTreeSet<Arc>;

/// Fixed-capacity bit set over vertex ids. Iteration is in ascending id order.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct VertexSet {
    words: Vec<u64>,
}

impl VertexSet {
    pub fn with_capacity(n: usize) -> Self {
        VertexSet {
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn insert(&mut self, v: VertexId) -> bool {
        let (w, b) = (v.index() / 64, v.index() % 64);
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn remove(&mut self, v: VertexId) -> bool {
        let (w, b) = (v.index() / 64, v.index() % 64);
        match self.words.get_mut(w) {
            Some(word) if *word & (1 << b) != 0 => {
                *word &= !(1 << b);
                true
            }
            _ => false,
        }
    }

    #[inline]
    pub fn contains(&self, v: VertexId) -> bool {
        let (w, b) = (v.index() / 64, v.index() % 64);
        self.words.get(w).is_some_and(|word| word & (1 << b) != 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &word)| {
            let mut rest = word;
            core::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(VertexId::from(i * 64 + b))
            })
        })
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.words
            .iter()
            .enumerate()
            .all(|(i, &w)| w & !other.words.get(i).copied().unwrap_or(0) == 0)
    }
}

impl FromIterator<VertexId> for VertexSet {
    fn from_iter<I: IntoIterator<Item = VertexId>>(iter: I) -> Self {
        let mut set = VertexSet::default();
        for v in iter {
            set.insert(v);
        }
        set
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|v| v.0)).finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphError {
    VertexOutOfRange(VertexId),
    SelfLoop(VertexId),
    DuplicateArc(Arc),
    MissingArc(Arc),
    RetiredVertex(VertexId),
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::VertexOutOfRange(v) => write!(f, "vertex {v} out of range"),
            GraphError::SelfLoop(v) => write!(f, "self-loop at vertex {v}"),
            GraphError::DuplicateArc(a) => write!(f, "duplicate arc {a}"),
            GraphError::MissingArc(a) => write!(f, "arc {a} not in graph"),
            GraphError::RetiredVertex(v) => write!(f, "vertex {v} was contracted away"),
        }
    }
}

impl core::error::Error for GraphError {}

/// An arc of the underlying undirected graph whose removal disconnects its
/// component, with the vertex counts on the tail and head side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bridge {
    pub arc: Arc,
    pub tail_side: usize,
    pub head_side: usize,
}

/// Everything needed to undo the merge of `merged` into `survivor` on a tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionRecord {
    pub survivor: VertexId,
    pub merged: VertexId,
    /// In-neighbours of the survivor before the merge.
    pub survivor_in: Vec<VertexId>,
    /// Out-neighbours of the merged vertex before the merge.
    pub merged_out: Vec<VertexId>,
}

impl ContractionRecord {
    /// Maps a tree (given as parent pointers, indexed by vertex id) of the
    /// contracted graph to a tree of the graph before the merge.
    ///
    /// The survivor keeps its parent, the merged vertex hangs below the
    /// survivor, and every child reachable through an original arc of the
    /// merged vertex is moved below it.
    pub fn expand(&self, parent: &mut [Option<VertexId>]) {
        let (a, b) = (self.survivor, self.merged);
        debug_assert!(parent[a.index()].map_or(true, |p| self.survivor_in.binary_search(&p).is_ok()));
        for child in 0..parent.len() {
            if parent[child] == Some(a) && self.merged_out.binary_search(&VertexId::from(child)).is_ok() {
                parent[child] = Some(b);
            }
        }
        parent[b.index()] = Some(a);
    }
}

/// Simple digraph: no self-loops, no parallel arcs. Adjacency lists are kept
/// sorted so every iteration is in ascending id order.
///
/// Vertex ids are stable. A contraction retires the merged id; retired ids are
/// skipped by [`DiGraph::vertices`] and have empty adjacency.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DiGraph {
    out: Vec<Vec<VertexId>>,
    inc: Vec<Vec<VertexId>>,
    alive: Vec<bool>,
    arc_count: usize,
}

impl fmt::Debug for DiGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiGraph")
            .field("n", &self.vertex_count())
            .field("arcs", &self.arcs().map(|a| (a.tail.0, a.head.0)).collect::<Vec<_>>())
            .finish()
    }
}

impl DiGraph {
    pub fn new(n: usize) -> Self {
        DiGraph {
            out: vec![Vec::new(); n],
            inc: vec![Vec::new(); n],
            alive: vec![true; n],
            arc_count: 0,
        }
    }

    /// Builds a graph from an arc list, rejecting self-loops and duplicates.
    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = Arc>,
    {
        let mut g = DiGraph::new(n);
        for a in arcs {
            g.add_arc(a)?;
        }
        Ok(g)
    }

    /// Number of id slots, including retired ones.
    #[inline]
    pub fn capacity(&self) -> usize {
        self.alive.len()
    }

    /// Number of live vertices.
    pub fn vertex_count(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }

    #[inline]
    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    #[inline]
    pub fn is_alive(&self, v: VertexId) -> bool {
        self.alive.get(v.index()).copied().unwrap_or(false)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.alive
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(i, _)| VertexId::from(i))
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices().collect()
    }

    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, hs)| hs.iter().map(move |&h| Arc::new(u, h)))
    }

    fn check(&self, v: VertexId) -> Result<(), GraphError> {
        if v.index() >= self.capacity() {
            Err(GraphError::VertexOutOfRange(v))
        } else if !self.alive[v.index()] {
            Err(GraphError::RetiredVertex(v))
        } else {
            Ok(())
        }
    }

    pub fn add_arc(&mut self, a: Arc) -> Result<(), GraphError> {
        self.check(a.tail)?;
        self.check(a.head)?;
        if a.tail == a.head {
            return Err(GraphError::SelfLoop(a.tail));
        }
        let outs = &mut self.out[a.tail.index()];
        match outs.binary_search(&a.head) {
            Ok(_) => Err(GraphError::DuplicateArc(a)),
            Err(pos) => {
                outs.insert(pos, a.head);
                let ins = &mut self.inc[a.head.index()];
                let pos = ins.binary_search(&a.tail).unwrap_err();
                ins.insert(pos, a.tail);
                self.arc_count += 1;
                Ok(())
            }
        }
    }

    pub fn remove_arc(&mut self, a: Arc) -> Result<(), GraphError> {
        let missing = GraphError::MissingArc(a);
        let outs = self.out.get_mut(a.tail.index()).ok_or(missing.clone())?;
        let pos = outs.binary_search(&a.head).map_err(|_| missing)?;
        outs.remove(pos);
        let ins = &mut self.inc[a.head.index()];
        let pos = ins.binary_search(&a.tail).expect("adjacency views out of sync");
        ins.remove(pos);
        self.arc_count -= 1;
        Ok(())
    }

    #[inline]
    pub fn has_arc(&self, tail: VertexId, head: VertexId) -> bool {
        self.out
            .get(tail.index())
            .is_some_and(|hs| hs.binary_search(&head).is_ok())
    }

    #[inline]
    pub fn out_neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.out[v.index()]
    }

    #[inline]
    pub fn in_neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.inc[v.index()]
    }

    /// `N^-(v)` restricted to `restrict`.
    pub fn in_neighbors_within(&self, v: VertexId, restrict: &VertexSet) -> VertexSet {
        self.in_neighbors(v)
            .iter()
            .copied()
            .filter(|&u| restrict.contains(u))
            .collect()
    }

    /// `N^+(v)` restricted to `restrict`.
    pub fn out_neighbors_within(&self, v: VertexId, restrict: &VertexSet) -> VertexSet {
        self.out_neighbors(v)
            .iter()
            .copied()
            .filter(|&u| restrict.contains(u))
            .collect()
    }

    #[inline]
    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out[v.index()].len()
    }

    #[inline]
    pub fn in_degree(&self, v: VertexId) -> usize {
        self.inc[v.index()].len()
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        self.in_degree(v) + self.out_degree(v)
    }

    /// Vertices reachable from `root` along arcs accepted by `allow`.
    pub(crate) fn reach_filtered<F>(&self, root: VertexId, mut allow: F) -> VertexSet
    where
        F: FnMut(VertexId, VertexId) -> bool,
    {
        let mut seen = VertexSet::with_capacity(self.capacity());
        seen.insert(root);
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            for &h in self.out_neighbors(u) {
                if !seen.contains(h) && allow(u, h) {
                    seen.insert(h);
                    stack.push(h);
                }
            }
        }
        seen
    }

    /// Vertices reachable from `root` by directed paths avoiding `removed`.
    pub fn reachable_from(&self, root: VertexId, removed: &ArcSet) -> VertexSet {
        self.reach_filtered(root, |t, h| !removed.contains(&Arc { tail: t, head: h }))
    }

    /// True iff deleting `arcs` makes some vertex that is currently reachable
    /// from `root` unreachable.
    pub fn is_arc_cut(&self, arcs: &ArcSet, root: VertexId) -> bool {
        let before = self.reach_filtered(root, |_, _| true);
        let after = self.reachable_from(root, arcs);
        before.len() != after.len()
    }

    /// Arc-cut test for the full out-arc set of `v`.
    pub(crate) fn out_arcs_cut(&self, v: VertexId, root: VertexId) -> bool {
        if self.out_degree(v) == 0 {
            return false;
        }
        let before = self.reach_filtered(root, |_, _| true);
        let after = self.reach_filtered(root, |t, _| t != v);
        before.len() != after.len()
    }

    /// Arcs whose removal disconnects the underlying undirected multigraph
    /// (antiparallel pairs are never bridges), with side sizes.
    pub fn undirected_bridges(&self) -> Vec<Bridge> {
        let n = self.capacity();
        // undirected incidence: (neighbour, arc id); arc ids index `arcs`
        let arcs: Vec<Arc> = self.arcs().collect();
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (id, a) in arcs.iter().enumerate() {
            adj[a.tail.index()].push((a.head.index(), id));
            adj[a.head.index()].push((a.tail.index(), id));
        }
        const UNSEEN: usize = usize::MAX;
        let mut disc = vec![UNSEEN; n];
        let mut low = vec![0; n];
        let mut size = vec![1usize; n];
        let mut timer = 0;
        let mut found: Vec<(usize, usize)> = Vec::new(); // (arc id, child vertex)
        let mut comp_of = vec![UNSEEN; n];
        let mut comp_size: Vec<usize> = Vec::new();

        for s in self.vertices().map(VertexId::index) {
            if disc[s] != UNSEEN {
                continue;
            }
            let comp = comp_size.len();
            comp_size.push(0);
            // frame: (vertex, arc id used to enter, next adjacency index)
            let mut stack: Vec<(usize, usize, usize)> = vec![(s, UNSEEN, 0)];
            disc[s] = timer;
            low[s] = timer;
            timer += 1;
            while let Some(top) = stack.len().checked_sub(1) {
                let (u, via, next) = stack[top];
                if next < adj[u].len() {
                    let (w, id) = adj[u][next];
                    stack[top].2 += 1;
                    if id == via {
                        continue;
                    }
                    if disc[w] == UNSEEN {
                        disc[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        stack.push((w, id, 0));
                    } else {
                        low[u] = low[u].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    comp_of[u] = comp;
                    comp_size[comp] += 1;
                    if let Some(&(p, _, _)) = stack.last() {
                        low[p] = low[p].min(low[u]);
                        size[p] += size[u];
                        if low[u] > disc[p] {
                            found.push((via, u));
                        }
                    }
                }
            }
        }

        let mut bridges: Vec<Bridge> = found
            .into_iter()
            .map(|(id, child)| {
                let a = arcs[id];
                let inner = size[child];
                let outer = comp_size[comp_of[child]] - inner;
                if a.head.index() == child {
                    Bridge { arc: a, tail_side: outer, head_side: inner }
                } else {
                    Bridge { arc: a, tail_side: inner, head_side: outer }
                }
            })
            .collect();
        bridges.sort_by_key(|b| b.arc);
        bridges
    }

    /// Strongly connected components (Tarjan). Each component is sorted and
    /// components are ordered by their smallest member.
    pub fn scc(&self) -> Vec<Vec<VertexId>> {
        let n = self.capacity();
        const UNSEEN: usize = usize::MAX;
        let mut index = vec![UNSEEN; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack: Vec<usize> = Vec::new();
        let mut counter = 0;
        let mut comps: Vec<Vec<VertexId>> = Vec::new();

        for s in self.vertices().map(VertexId::index) {
            if index[s] != UNSEEN {
                continue;
            }
            let mut call: Vec<(usize, usize)> = vec![(s, 0)];
            index[s] = counter;
            low[s] = counter;
            counter += 1;
            stack.push(s);
            on_stack[s] = true;
            while let Some(top) = call.len().checked_sub(1) {
                let (u, next) = call[top];
                let outs = &self.out[u];
                if next < outs.len() {
                    let w = outs[next].index();
                    call[top].1 += 1;
                    if index[w] == UNSEEN {
                        index[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[u] = low[u].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(p, _)) = call.last() {
                        low[p] = low[p].min(low[u]);
                    }
                    if low[u] == index[u] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().expect("tarjan stack underflow");
                            on_stack[w] = false;
                            comp.push(VertexId::from(w));
                            if w == u {
                                break;
                            }
                        }
                        comp.sort();
                        comps.push(comp);
                    }
                }
            }
        }
        comps.sort_by_key(|c| c[0]);
        comps
    }

    /// Merges `b` into `a` along the arc `(a,b)`; `b` is retired.
    pub fn contract(&mut self, a: VertexId, b: VertexId) -> Result<ContractionRecord, GraphError> {
        if !self.has_arc(a, b) {
            return Err(GraphError::MissingArc(Arc { tail: a, head: b }));
        }
        let record = ContractionRecord {
            survivor: a,
            merged: b,
            survivor_in: self.inc[a.index()].clone(),
            merged_out: self.out[b.index()].clone(),
        };
        let b_in = core::mem::take(&mut self.inc[b.index()]);
        let b_out = core::mem::take(&mut self.out[b.index()]);
        for &p in &b_in {
            let outs = &mut self.out[p.index()];
            outs.remove(outs.binary_search(&b).expect("adjacency views out of sync"));
            self.arc_count -= 1;
        }
        for &h in &b_out {
            let ins = &mut self.inc[h.index()];
            ins.remove(ins.binary_search(&b).expect("adjacency views out of sync"));
            self.arc_count -= 1;
        }
        self.alive[b.index()] = false;
        for &p in &b_in {
            if p != a && !self.has_arc(p, a) {
                self.add_arc(Arc { tail: p, head: a }).expect("checked above");
            }
        }
        for &h in &b_out {
            if h != a && !self.has_arc(a, h) {
                self.add_arc(Arc { tail: a, head: h }).expect("checked above");
            }
        }
        Ok(record)
    }

    /// Subgraph induced by `vertices`, relabelled densely in ascending order.
    /// Returns the graph and the original id of every new vertex.
    pub fn induced_subgraph(&self, vertices: &[VertexId]) -> (DiGraph, Vec<VertexId>) {
        let mut map: Vec<Option<u32>> = vec![None; self.capacity()];
        let mut ids: Vec<VertexId> = vertices.to_vec();
        ids.sort();
        ids.dedup();
        for (i, v) in ids.iter().enumerate() {
            map[v.index()] = Some(i as u32);
        }
        let mut g = DiGraph::new(ids.len());
        for (i, &v) in ids.iter().enumerate() {
            for &h in self.out_neighbors(v) {
                if let Some(j) = map[h.index()] {
                    g.add_arc(Arc::new(i, j as usize)).expect("simple graph");
                }
            }
        }
        (g, ids)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, arcs: &[(usize, usize)]) -> DiGraph {
        DiGraph::from_arcs(n, arcs.iter().map(|&(u, v)| Arc::new(u, v))).unwrap()
    }

    fn set(vs: &[usize]) -> VertexSet {
        vs.iter().map(|&v| VertexId::from(v)).collect()
    }

    fn v(i: usize) -> VertexId {
        VertexId::from(i)
    }

    #[test]
    fn in_and_out_neighbors() {
        let path = g(3, &[(0, 1), (1, 2)]);
        assert_eq!(path.in_neighbors_within(v(1), &path.vertex_set()), set(&[0]));
        assert!(path.in_neighbors_within(v(0), &path.vertex_set()).is_empty());
        let k3 = g(3, &[(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)]);
        assert_eq!(k3.in_neighbors_within(v(0), &set(&[1])), set(&[1]));
        assert_eq!(k3.out_neighbors_within(v(0), &set(&[2])), set(&[2]));
    }

    #[test]
    fn rejects_malformed_arcs() {
        let mut h = DiGraph::new(2);
        assert_eq!(h.add_arc(Arc::new(0, 0)), Err(GraphError::SelfLoop(v(0))));
        h.add_arc(Arc::new(0, 1)).unwrap();
        assert_eq!(h.add_arc(Arc::new(0, 1)), Err(GraphError::DuplicateArc(Arc::new(0, 1))));
        assert_eq!(h.add_arc(Arc::new(0, 2)), Err(GraphError::VertexOutOfRange(v(2))));
        assert_eq!(h.remove_arc(Arc::new(1, 0)), Err(GraphError::MissingArc(Arc::new(1, 0))));
    }

    #[test]
    fn reachability() {
        let cycle = g(3, &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(cycle.reachable_from(v(0), &ArcSet::new()), set(&[0, 1, 2]));
        let cut: ArcSet = [Arc::new(0, 1)].into_iter().collect();
        assert_eq!(cycle.reachable_from(v(0), &cut), set(&[0]));
        let star = g(4, &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(star.reachable_from(v(1), &ArcSet::new()), set(&[1]));
    }

    #[test]
    fn arc_cuts() {
        let path = g(3, &[(0, 1), (1, 2)]);
        assert!(path.is_arc_cut(&[Arc::new(1, 2)].into_iter().collect(), v(0)));
        let k3 = g(3, &[(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)]);
        for a in k3.arcs() {
            for r in 0..3 {
                assert!(!k3.is_arc_cut(&[a].into_iter().collect(), v(r)));
            }
        }
        // r=0 -> a=1, r -> b=2, a -> b: removing (r,a) strands a
        let h = g(3, &[(0, 1), (0, 2), (1, 2)]);
        assert!(h.is_arc_cut(&[Arc::new(0, 1)].into_iter().collect(), v(0)));
        assert!(!h.is_arc_cut(&[Arc::new(0, 2)].into_iter().collect(), v(0)));
        assert!(h.out_arcs_cut(v(0), v(0)));
        assert!(!h.out_arcs_cut(v(1), v(0)));
    }

    #[test]
    fn bridges_on_small_shapes() {
        let path = g(3, &[(0, 1), (1, 2)]);
        let b = path.undirected_bridges();
        assert_eq!(b.len(), 2);
        assert_eq!(b[0], Bridge { arc: Arc::new(0, 1), tail_side: 1, head_side: 2 });
        assert_eq!(b[1], Bridge { arc: Arc::new(1, 2), tail_side: 2, head_side: 1 });
        let c4 = g(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert!(c4.undirected_bridges().is_empty());
        let two = g(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)]);
        assert_eq!(
            two.undirected_bridges(),
            vec![Bridge { arc: Arc::new(2, 3), tail_side: 3, head_side: 3 }]
        );
        let anti = g(2, &[(0, 1), (1, 0)]);
        assert!(anti.undirected_bridges().is_empty());
    }

    #[test]
    fn strongly_connected_components() {
        let bipath = g(3, &[(0, 1), (1, 0), (1, 2), (2, 1)]);
        assert_eq!(bipath.scc(), vec![vec![v(0), v(1), v(2)]]);
        let path = g(3, &[(0, 1), (1, 2)]);
        assert_eq!(path.scc(), vec![vec![v(0)], vec![v(1)], vec![v(2)]]);
        let pair = g(4, &[(0, 1), (1, 0), (2, 3), (3, 2), (1, 2)]);
        assert_eq!(pair.scc(), vec![vec![v(0), v(1)], vec![v(2), v(3)]]);
    }

    #[test]
    fn contraction() {
        let mut path = g(4, &[(0, 1), (1, 2), (2, 3)]);
        let rec = path.contract(v(1), v(2)).unwrap();
        assert_eq!(path.arcs().collect::<Vec<_>>(), vec![Arc::new(0, 1), Arc::new(1, 3)]);
        assert_eq!(path.vertex_count(), 3);
        assert!(!path.is_alive(v(2)));
        assert_eq!((rec.survivor, rec.merged), (v(1), v(2)));

        // r->a, r->b, a->b, b->c: the parallel r->a collapses
        let mut h = g(4, &[(0, 1), (0, 2), (1, 2), (2, 3)]);
        h.contract(v(1), v(2)).unwrap();
        assert_eq!(h.arcs().collect::<Vec<_>>(), vec![Arc::new(0, 1), Arc::new(1, 3)]);
        assert_eq!(h.arc_count(), 2);

        let mut h = g(3, &[(0, 1)]);
        assert!(h.contract(v(1), v(2)).is_err());
    }

    #[test]
    fn contraction_expansion_keeps_leaves() {
        let mut path = g(4, &[(0, 1), (1, 2), (2, 3)]);
        let rec = path.contract(v(1), v(2)).unwrap();
        let mut parent = vec![None, Some(v(0)), None, Some(v(1))];
        rec.expand(&mut parent);
        assert_eq!(parent, vec![None, Some(v(0)), Some(v(1)), Some(v(2))]);
    }

    #[test]
    fn induced() {
        let h = g(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let (sub, ids) = h.induced_subgraph(&[v(3), v(1), v(2)]);
        assert_eq!(ids, vec![v(1), v(2), v(3)]);
        assert_eq!(sub.arcs().collect::<Vec<_>>(), vec![Arc::new(0, 1), Arc::new(1, 2)]);
    }
}
