//! Labelled search states: the digraph being reduced, the vertex labels, the
//! partial out-tree grown from the root and the log of contractions.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{Arc, ContractionRecord, DiGraph, GraphError, VertexId};

/// Role of a vertex during the search.
///
/// Allowed transitions: `Free -> {Internal, Leaf, Branching, Floating}`,
/// `Branching -> {Internal, Leaf}`, `Floating -> Leaf`. `Internal` and `Leaf`
/// are final.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    /// Not in the tree, nothing decided.
    Free,
    /// In the tree and fixed to be internal (IN).
    Internal,
    /// In the tree and fixed to be a leaf (LN).
    Leaf,
    /// In the tree with a parent, leaf or internal still open (BN).
    Branching,
    /// Must end up a leaf but has no parent yet (FL).
    Floating,
}

impl Label {
    pub fn in_tree(self) -> bool {
        matches!(self, Label::Internal | Label::Leaf | Label::Branching)
    }

    pub fn can_become(self, to: Label) -> bool {
        use Label::*;
        matches!(
            (self, to),
            (Free, Internal | Leaf | Branching | Floating) | (Branching, Internal | Leaf) | (Floating, Leaf)
        )
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Free => "free",
            Label::Internal => "IN",
            Label::Leaf => "LN",
            Label::Branching => "BN",
            Label::Floating => "FL",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StateError {
    IllegalTransition { vertex: VertexId, from: Label, to: Label },
    /// Some vertex cannot be reached from the chosen root.
    InfeasibleRoot(VertexId),
    /// Fewer than two vertices.
    Degenerate,
    Graph(GraphError),
}

impl fmt::Display for StateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateError::IllegalTransition { vertex, from, to } => {
                write!(f, "vertex {vertex} cannot go from {from} to {to}")
            }
            StateError::InfeasibleRoot(r) => write!(f, "root {r} does not reach every vertex"),
            StateError::Degenerate => f.write_str("graph has fewer than two vertices"),
            StateError::Graph(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for StateError {}

impl From<GraphError> for StateError {
    fn from(e: GraphError) -> Self {
        StateError::Graph(e)
    }
}

/// One node of the search: graph, labels, partial tree `T` (as parent
/// pointers) and the contractions performed so far.
///
/// Invariants kept by every operation:
/// * the root is `Internal` and has no parent;
/// * a vertex has a parent iff it is a non-root tree vertex;
/// * every non-root tree vertex has exactly one in-arc, its tree arc, and the
///   root has none;
/// * `Internal` vertices have all their out-arcs in `T` (inner-maximality).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchState {
    graph: DiGraph,
    root: VertexId,
    labels: Vec<Label>,
    parent: Vec<Option<VertexId>>,
    contractions: Vec<ContractionRecord>,
}

impl SearchState {
    /// The root as an internal vertex with all its out-neighbours attached as
    /// `Branching` vertices.
    pub fn initial(graph: DiGraph, root: VertexId) -> Result<Self, StateError> {
        if !graph.is_alive(root) {
            return Err(GraphError::VertexOutOfRange(root).into());
        }
        if graph.vertex_count() < 2 {
            return Err(StateError::Degenerate);
        }
        let reached = graph.reach_filtered(root, |_, _| true);
        if let Some(v) = graph.vertices().find(|&v| !reached.contains(v)) {
            return Err(StateError::InfeasibleRoot(v));
        }
        let n = graph.capacity();
        let mut s = SearchState {
            graph,
            root,
            labels: vec![Label::Free; n],
            parent: vec![None; n],
            contractions: Vec::new(),
        };
        for p in s.graph.in_neighbors(root).to_vec() {
            s.graph.remove_arc(Arc { tail: p, head: root })?;
        }
        s.labels[root.index()] = Label::Branching;
        s.internalize(root)?;
        Ok(s)
    }

    #[inline]
    pub fn graph(&self) -> &DiGraph {
        &self.graph
    }

    #[inline]
    pub fn root(&self) -> VertexId {
        self.root
    }

    #[inline]
    pub fn label(&self, v: VertexId) -> Label {
        self.labels[v.index()]
    }

    #[inline]
    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.parent[v.index()]
    }

    pub fn contractions(&self) -> &[ContractionRecord] {
        &self.contractions
    }

    /// Live vertices carrying `label`, ascending.
    pub fn with_label(&self, label: Label) -> impl Iterator<Item = VertexId> + '_ {
        self.graph.vertices().filter(move |&v| self.label(v) == label)
    }

    pub fn count(&self, label: Label) -> usize {
        self.with_label(label).count()
    }

    /// Tree arcs in the current (possibly contracted) id space.
    pub fn tree_arcs(&self) -> Vec<Arc> {
        self.graph
            .vertices()
            .filter_map(|v| self.parent(v).map(|p| Arc { tail: p, head: v }))
            .collect()
    }

    pub fn in_tree(&self, v: VertexId) -> bool {
        self.label(v).in_tree()
    }

    pub fn is_tree_arc(&self, a: Arc) -> bool {
        self.parent[a.head.index()] == Some(a.tail)
    }

    /// Number of `Leaf` vertices.
    pub fn leaf_count(&self) -> usize {
        self.count(Label::Leaf)
    }

    /// True when every vertex is in the tree.
    pub fn is_spanning(&self) -> bool {
        self.graph
            .vertices()
            .all(|v| !matches!(self.label(v), Label::Free | Label::Floating))
    }

    fn transition(&self, v: VertexId, to: Label) -> Result<(), StateError> {
        let from = self.label(v);
        if from.can_become(to) {
            Ok(())
        } else {
            Err(StateError::IllegalTransition { vertex: v, from, to })
        }
    }

    /// Fixes the `Branching` vertex `v` as internal and attaches all of its
    /// out-neighbours (free ones become `Branching`, floating ones `Leaf`).
    pub fn set_internal(&self, v: VertexId) -> Result<SearchState, StateError> {
        let mut s = self.clone();
        s.internalize(v)?;
        Ok(s)
    }

    /// In-place [`SearchState::set_internal`].
    ///
    /// Arcs that can no longer be tree arcs are dropped on the way: other
    /// in-arcs of each newly attached vertex, and arcs from `v` to vertices
    /// already in the tree.
    pub fn internalize(&mut self, v: VertexId) -> Result<(), StateError> {
        self.transition(v, Label::Internal)?;
        self.labels[v.index()] = Label::Internal;
        for u in self.graph.out_neighbors(v).to_vec() {
            let attached = match self.label(u) {
                Label::Free => Label::Branching,
                Label::Floating => Label::Leaf,
                _ => {
                    self.graph.remove_arc(Arc { tail: v, head: u })?;
                    continue;
                }
            };
            self.labels[u.index()] = attached;
            self.parent[u.index()] = Some(v);
            for w in self.graph.in_neighbors(u).to_vec() {
                if w != v {
                    self.graph.remove_arc(Arc { tail: w, head: u })?;
                }
            }
        }
        Ok(())
    }

    /// Fixes the `Branching` vertex `v` as a leaf.
    pub fn set_leaf(&self, v: VertexId) -> Result<SearchState, StateError> {
        let mut s = self.clone();
        s.make_leaf(v)?;
        Ok(s)
    }

    /// In-place [`SearchState::set_leaf`]. Only attached vertices may become
    /// leaf nodes this way; floating leaves turn into leaf nodes when a parent
    /// is internalized.
    pub fn make_leaf(&mut self, v: VertexId) -> Result<(), StateError> {
        if self.label(v) != Label::Branching {
            return Err(StateError::IllegalTransition { vertex: v, from: self.label(v), to: Label::Leaf });
        }
        self.labels[v.index()] = Label::Leaf;
        Ok(())
    }

    /// Marks a free vertex as a floating leaf.
    pub fn make_floating(&mut self, v: VertexId) -> Result<(), StateError> {
        if self.label(v) != Label::Free {
            return Err(StateError::IllegalTransition { vertex: v, from: self.label(v), to: Label::Floating });
        }
        self.labels[v.index()] = Label::Floating;
        Ok(())
    }

    pub(crate) fn remove_arc(&mut self, a: Arc) -> Result<(), StateError> {
        debug_assert!(!self.is_tree_arc(a), "tree arc {a} removed");
        self.graph.remove_arc(a)?;
        Ok(())
    }

    /// Contracts the arc `(a,b)` between two free vertices.
    pub(crate) fn contract(&mut self, a: VertexId, b: VertexId) -> Result<(), StateError> {
        debug_assert!(self.label(a) == Label::Free && self.label(b) == Label::Free);
        let rec = self.graph.contract(a, b)?;
        self.contractions.push(rec);
        Ok(())
    }

    /// Parent pointers of the current tree with all contractions undone,
    /// indexed by original vertex id.
    pub fn expanded_parents(&self) -> Vec<Option<VertexId>> {
        let mut parent = self.parent.clone();
        for rec in self.contractions.iter().rev() {
            rec.expand(&mut parent);
        }
        parent
    }

    /// Tree arcs in original vertex ids.
    pub fn expanded_tree(&self) -> Vec<Arc> {
        self.expanded_parents()
            .iter()
            .enumerate()
            .filter_map(|(v, p)| p.map(|p| Arc::new(p, v)))
            .collect()
    }

    /// Checks the structural invariants listed on the type.
    pub fn check_invariants(&self) -> Result<(), &'static str> {
        let g = &self.graph;
        if self.label(self.root) != Label::Internal || self.parent(self.root).is_some() {
            return Err("root must be internal without parent");
        }
        if g.in_degree(self.root) != 0 {
            return Err("root has an in-arc");
        }
        let mut tree_size = 0;
        for v in g.vertices() {
            let label = self.label(v);
            if label.in_tree() {
                tree_size += 1;
            }
            if v == self.root {
                continue;
            }
            match (label.in_tree(), self.parent(v)) {
                (true, Some(p)) => {
                    if g.in_neighbors(v) != [p] {
                        return Err("tree vertex must have exactly its tree in-arc");
                    }
                    if !matches!(self.label(p), Label::Internal) {
                        return Err("parent must be internal");
                    }
                }
                (false, None) => {}
                _ => return Err("parent pointer disagrees with label"),
            }
            if label == Label::Internal && g.out_neighbors(v).iter().any(|&u| self.parent(u) != Some(v)) {
                return Err("internal vertex with a non-tree out-arc");
            }
        }
        if g.out_neighbors(self.root).iter().any(|&u| self.parent(u) != Some(self.root)) {
            return Err("root with a non-tree out-arc");
        }
        if self.tree_arcs().len() + 1 != tree_size {
            return Err("tree is not connected");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, arcs: &[(usize, usize)]) -> DiGraph {
        DiGraph::from_arcs(n, arcs.iter().map(|&(u, v)| Arc::new(u, v))).unwrap()
    }

    fn v(i: usize) -> VertexId {
        VertexId::from(i)
    }

    #[test]
    fn initial_star() {
        let s = SearchState::initial(g(4, &[(0, 1), (0, 2), (0, 3)]), v(0)).unwrap();
        assert_eq!(s.tree_arcs(), vec![Arc::new(0, 1), Arc::new(0, 2), Arc::new(0, 3)]);
        for i in 1..4 {
            assert_eq!(s.label(v(i)), Label::Branching);
        }
        assert!(s.is_spanning());
        s.check_invariants().unwrap();
    }

    #[test]
    fn initial_path_and_cycle() {
        let s = SearchState::initial(g(3, &[(0, 1), (1, 2)]), v(0)).unwrap();
        assert_eq!(s.tree_arcs(), vec![Arc::new(0, 1)]);
        assert_eq!(s.label(v(1)), Label::Branching);
        assert_eq!(s.label(v(2)), Label::Free);
        assert!(!s.is_spanning());

        let s = SearchState::initial(g(3, &[(0, 1), (1, 2), (2, 0)]), v(0)).unwrap();
        assert_eq!(s.tree_arcs(), vec![Arc::new(0, 1)]);
        assert_eq!(s.label(v(2)), Label::Free);
        assert!(!s.graph().has_arc(v(2), v(0)));
        s.check_invariants().unwrap();
    }

    #[test]
    fn initial_errors() {
        assert_eq!(
            SearchState::initial(g(3, &[(0, 1)]), v(0)).unwrap_err(),
            StateError::InfeasibleRoot(v(2))
        );
        assert_eq!(SearchState::initial(DiGraph::new(1), v(0)).unwrap_err(), StateError::Degenerate);
    }

    #[test]
    fn set_internal_attaches_free_and_floating() {
        // 0 -> 1 -> {2, 3}
        let mut s = SearchState::initial(g(4, &[(0, 1), (1, 2), (1, 3)]), v(0)).unwrap();
        s.make_floating(v(3)).unwrap();
        let t = s.set_internal(v(1)).unwrap();
        assert_eq!(t.label(v(1)), Label::Internal);
        assert_eq!(t.label(v(2)), Label::Branching);
        assert_eq!(t.label(v(3)), Label::Leaf);
        assert!(t.is_tree_arc(Arc::new(1, 2)) && t.is_tree_arc(Arc::new(1, 3)));
        // input untouched
        assert_eq!(s.label(v(1)), Label::Branching);
        t.check_invariants().unwrap();
    }

    #[test]
    fn set_internal_without_out_arcs() {
        let s = SearchState::initial(g(2, &[(0, 1)]), v(0)).unwrap();
        let t = s.set_internal(v(1)).unwrap();
        assert_eq!(t.label(v(1)), Label::Internal);
        assert_eq!(t.tree_arcs().len(), 1);
    }

    #[test]
    fn set_internal_drops_dead_arcs() {
        // 0 -> {1, 2}, 1 -> 2, 3 -> 2 ... 2's extra in-arcs vanish on attach
        let s = SearchState::initial(g(4, &[(0, 1), (1, 3), (3, 2), (1, 2)]), v(0)).unwrap();
        let t = s.set_internal(v(1)).unwrap();
        assert!(!t.graph().has_arc(v(3), v(2)));
        assert_eq!(t.parent(v(2)), Some(v(1)));
        t.check_invariants().unwrap();
    }

    #[test]
    fn illegal_transitions() {
        let s = SearchState::initial(g(3, &[(0, 1), (1, 2)]), v(0)).unwrap();
        assert!(matches!(s.set_internal(v(0)), Err(StateError::IllegalTransition { .. })));
        assert!(matches!(s.set_leaf(v(0)), Err(StateError::IllegalTransition { .. })));
        assert!(matches!(s.set_leaf(v(2)), Err(StateError::IllegalTransition { .. })));
        let t = s.set_leaf(v(1)).unwrap();
        assert_eq!(t.label(v(1)), Label::Leaf);
        assert!(matches!(t.set_leaf(v(1)), Err(StateError::IllegalTransition { .. })));
    }

    #[test]
    fn transition_table() {
        use Label::*;
        let all = [Free, Internal, Leaf, Branching, Floating];
        let allowed: Vec<(Label, Label)> = all
            .iter()
            .flat_map(|&a| all.iter().map(move |&b| (a, b)))
            .filter(|&(a, b)| a.can_become(b))
            .collect();
        assert_eq!(
            allowed,
            vec![
                (Free, Internal),
                (Free, Leaf),
                (Free, Branching),
                (Free, Floating),
                (Branching, Internal),
                (Branching, Leaf),
                (Floating, Leaf)
            ]
        );
    }
}
