//! Brute-force ground truth. Every non-root vertex picks one in-arc; all
//! acyclic choices are enumerated and the best leaf count is kept. The only
//! pruning is rejecting a choice that closes a cycle.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{DiGraph, VertexId};
use crate::state::{Label, SearchState};

pub const DEFAULT_CAP: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleError {
    CapExceeded { vertices: usize, cap: usize },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::CapExceeded { vertices, cap } => {
                write!(f, "{vertices} vertices exceed the oracle cap of {cap}")
            }
        }
    }
}

impl core::error::Error for OracleError {}

struct Enumerator<'a> {
    root: VertexId,
    order: Vec<VertexId>,
    choices: Vec<Vec<VertexId>>,
    parent: Vec<Option<VertexId>>,
    children: Vec<u32>,
    alive: Vec<VertexId>,
    must_have_child: &'a [VertexId],
}

impl Enumerator<'_> {
    fn closes_cycle(&self, v: VertexId, p: VertexId) -> bool {
        let mut cur = Some(p);
        while let Some(u) = cur {
            if u == v {
                return true;
            }
            cur = self.parent[u.index()];
        }
        false
    }

    fn run<F: FnMut(&Self)>(&mut self, i: usize, visit: &mut F) {
        if i == self.order.len() {
            if self.must_have_child.iter().all(|u| self.children[u.index()] > 0) {
                visit(self);
            }
            return;
        }
        let v = self.order[i];
        for k in 0..self.choices[i].len() {
            let p = self.choices[i][k];
            if self.closes_cycle(v, p) {
                continue;
            }
            self.parent[v.index()] = Some(p);
            self.children[p.index()] += 1;
            self.run(i + 1, visit);
            self.children[p.index()] -= 1;
            self.parent[v.index()] = None;
        }
    }

    fn leaves(&self) -> usize {
        self.alive
            .iter()
            .filter(|&&u| u != self.root && self.children[u.index()] == 0)
            .count()
    }
}

fn check_cap(n: usize, cap: usize) -> Result<(), OracleError> {
    if n > cap {
        Err(OracleError::CapExceeded { vertices: n, cap })
    } else {
        Ok(())
    }
}

fn unconstrained(g: &DiGraph, r: VertexId) -> Enumerator<'static> {
    let order: Vec<VertexId> = g.vertices().filter(|&v| v != r).collect();
    let choices = order.iter().map(|&v| g.in_neighbors(v).to_vec()).collect();
    Enumerator {
        root: r,
        order,
        choices,
        parent: vec![None; g.capacity()],
        children: vec![0; g.capacity()],
        alive: g.vertices().collect(),
        must_have_child: &[],
    }
}

/// Maximum number of leaves of a spanning out-branching rooted at `r`, or
/// `None` if `r` does not reach every vertex.
pub fn solve_unconstrained(g: &DiGraph, r: VertexId) -> Result<Option<usize>, OracleError> {
    solve_unconstrained_capped(g, r, DEFAULT_CAP)
}

pub fn solve_unconstrained_capped(g: &DiGraph, r: VertexId, cap: usize) -> Result<Option<usize>, OracleError> {
    check_cap(g.vertex_count(), cap)?;
    let mut e = unconstrained(g, r);
    let mut best = None;
    e.run(0, &mut |e| best = best.max(Some(e.leaves())));
    Ok(best)
}

/// Number of spanning out-branchings rooted at `r`.
pub fn count_branchings(g: &DiGraph, r: VertexId) -> Result<u64, OracleError> {
    check_cap(g.vertex_count(), DEFAULT_CAP)?;
    let mut e = unconstrained(g, r);
    let mut count = 0u64;
    e.run(0, &mut |_| count += 1);
    Ok(count)
}

/// Best completion of a partial solution: tree arcs stay, internal nodes get
/// at least one child, leaf nodes and floating leaves get none. Only arcs of
/// the state's current graph are used.
pub fn solve_constrained(s: &SearchState) -> Result<Option<usize>, OracleError> {
    solve_constrained_capped(s, DEFAULT_CAP)
}

pub fn solve_constrained_capped(s: &SearchState, cap: usize) -> Result<Option<usize>, OracleError> {
    let g = s.graph();
    check_cap(g.vertex_count(), cap)?;
    let r = s.root();
    let mut parent = vec![None; g.capacity()];
    let mut children = vec![0u32; g.capacity()];
    let mut order = Vec::new();
    let mut choices = Vec::new();
    for v in g.vertices() {
        if let Some(p) = s.parent(v) {
            parent[v.index()] = Some(p);
            children[p.index()] += 1;
        } else if v != r {
            let c: Vec<VertexId> = g
                .in_neighbors(v)
                .iter()
                .copied()
                .filter(|&u| !matches!(s.label(u), Label::Leaf | Label::Floating))
                .collect();
            if c.is_empty() {
                return Ok(None);
            }
            order.push(v);
            choices.push(c);
        }
    }
    let internal: Vec<VertexId> = s.with_label(Label::Internal).filter(|&u| u != r).collect();
    let mut e = Enumerator {
        root: r,
        order,
        choices,
        parent,
        children,
        alive: g.vertices().collect(),
        must_have_child: &internal,
    };
    let mut best = None;
    e.run(0, &mut |e| best = best.max(Some(e.leaves())));
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Arc;

    fn g(n: usize, arcs: &[(usize, usize)]) -> DiGraph {
        DiGraph::from_arcs(n, arcs.iter().map(|&(u, v)| Arc::new(u, v))).unwrap()
    }

    fn bidirected_complete(n: usize) -> DiGraph {
        let mut arcs = Vec::new();
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    arcs.push((u, v));
                }
            }
        }
        g(n, &arcs)
    }

    #[test]
    fn cycle_has_one_leaf() {
        let c4 = g(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        for r in 0..4 {
            assert_eq!(solve_unconstrained(&c4, VertexId::from(r)).unwrap(), Some(1));
        }
    }

    #[test]
    fn bidirected_star_center() {
        let n = 6;
        let arcs: Vec<_> = (1..n).flat_map(|i| [(0, i), (i, 0)]).collect();
        let star = g(n, &arcs);
        assert_eq!(solve_unconstrained(&star, VertexId(0)).unwrap(), Some(n - 1));
        assert_eq!(solve_unconstrained(&star, VertexId(1)).unwrap(), Some(n - 2));
    }

    #[test]
    fn in_star_is_infeasible() {
        let s = g(4, &[(1, 0), (2, 0), (3, 0)]);
        for r in 0..4 {
            assert_eq!(solve_unconstrained(&s, VertexId::from(r)).unwrap(), None);
        }
    }

    #[test]
    fn cayley_counts() {
        // bidirected K_n has n^(n-2) spanning out-branchings per root
        for n in 1..=5u32 {
            let expected = if n == 1 { 1 } else { (n as u64).pow(n - 2) };
            assert_eq!(count_branchings(&bidirected_complete(n as usize), VertexId(0)).unwrap(), expected);
        }
    }

    #[test]
    fn b8_gadget_pin() {
        // v = 1 with out-neighbours x1 = 2, x2 = 3; q = 4 also feeds x1 and x1 -> x2
        let h = g(6, &[(0, 1), (0, 4), (1, 2), (1, 3), (4, 2), (2, 3), (2, 5), (3, 5), (5, 4)]);
        assert_eq!(solve_unconstrained(&h, VertexId(0)).unwrap(), Some(3));
    }

    #[test]
    fn cap_is_enforced() {
        let big = DiGraph::new(13);
        assert_eq!(
            solve_unconstrained(&big, VertexId(0)),
            Err(OracleError::CapExceeded { vertices: 13, cap: 12 })
        );
    }

    #[test]
    fn constrained_matches_unconstrained_on_initial_state() {
        let h = g(5, &[(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (4, 1), (2, 4)]);
        let s = SearchState::initial(h.clone(), VertexId(0)).unwrap();
        assert_eq!(solve_constrained(&s).unwrap(), solve_unconstrained(&h, VertexId(0)).unwrap());
    }

    #[test]
    fn constrained_terminal_state() {
        let h = g(3, &[(0, 1), (0, 2)]);
        let mut s = SearchState::initial(h, VertexId(0)).unwrap();
        s.make_leaf(VertexId(1)).unwrap();
        s.make_leaf(VertexId(2)).unwrap();
        assert_eq!(solve_constrained(&s).unwrap(), Some(2));
    }

    #[test]
    fn constrained_floating_without_parent() {
        // 2's only in-neighbour is a leaf
        let h = g(3, &[(0, 1), (1, 2)]);
        let mut s = SearchState::initial(h, VertexId(0)).unwrap();
        s.make_floating(VertexId(2)).unwrap();
        s.make_leaf(VertexId(1)).unwrap();
        assert_eq!(solve_constrained(&s).unwrap(), None);
    }
}
