use dmlst_core::graph::{Arc, ArcSet, DiGraph, VertexId};
use dmlst_core::measure::{self, branching_number, Measure};
use dmlst_core::reduce::{self, RuleSet};
use dmlst_core::solver::{self, validate_tree, SolverConfig};
use dmlst_core::state::SearchState;
use proptest::prelude::*;

fn digraph(max_n: usize) -> impl Strategy<Value = DiGraph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let arcs = (0..n)
                .flat_map(|u| (0..n).map(move |v| (u, v)))
                .filter(|&(u, v)| u != v && bits[u * n + v])
                .map(|(u, v)| Arc::new(u, v));
            DiGraph::from_arcs(n, arcs).unwrap()
        })
    })
}

fn undirected_components(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut comp: Vec<usize> = (0..n).collect();
    fn find(c: &mut [usize], x: usize) -> usize {
        if c[x] != x {
            let r = find(c, c[x]);
            c[x] = r;
        }
        c[x]
    }
    for &(u, v) in edges {
        let (a, b) = (find(&mut comp, u), find(&mut comp, v));
        comp[a] = b;
    }
    (0..n).map(|x| find(&mut comp, x)).collect()
}

proptest! {
    #[test]
    fn bridges_match_edge_deletion(g in digraph(6)) {
        let n = g.capacity();
        let arcs: Vec<Arc> = g.arcs().collect();
        let mut expected = Vec::new();
        for (i, a) in arcs.iter().enumerate() {
            let rest: Vec<(usize, usize)> = arcs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, b)| (b.tail.index(), b.head.index()))
                .collect();
            let comp = undirected_components(n, &rest);
            let (t, h) = (comp[a.tail.index()], comp[a.head.index()]);
            if t != h {
                let size = |c| comp.iter().filter(|&&x| x == c).count();
                expected.push((*a, size(t), size(h)));
            }
        }
        let got: Vec<(Arc, usize, usize)> =
            g.undirected_bridges().into_iter().map(|b| (b.arc, b.tail_side, b.head_side)).collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn removing_arcs_never_grows_reach(g in digraph(7), mask in proptest::collection::vec(any::<bool>(), 49)) {
        let r = VertexId(0);
        let removed: ArcSet = g.arcs().enumerate().filter(|&(i, _)| mask[i % mask.len()]).map(|(_, a)| a).collect();
        let full = g.reachable_from(r, &ArcSet::new());
        let cut = g.reachable_from(r, &removed);
        prop_assert!(cut.is_subset(&full));
        prop_assert_eq!(g.is_arc_cut(&removed, r), cut.len() != full.len());
    }

    #[test]
    fn branching_number_monotone(
        ds in proptest::collection::vec(0.05f64..4.0, 2..5),
        i in 0usize..5,
        bump in 0.01f64..2.0,
    ) {
        let i = i % ds.len();
        let base = branching_number(&ds).unwrap();
        let mut more = ds.clone();
        more[i] += bump;
        let t = branching_number(&more).unwrap();
        prop_assert!(t <= base + 1e-10);
        let excess: f64 = ds.iter().map(|&d| base.powf(-d)).sum::<f64>() - 1.0;
        prop_assert!(excess.abs() < 1e-9);
    }

    #[test]
    fn reductions_never_raise_the_measure(g in digraph(8)) {
        let n = g.vertex_count();
        let r = VertexId(0);
        if n < 2 || g.reachable_from(r, &ArcSet::new()).len() != n {
            return Ok(());
        }
        let s = SearchState::initial(g, r).unwrap();
        let start = measure::mu(&s);
        prop_assert!(start >= Measure::ZERO && start <= Measure(n as i64 * Measure::SCALE));
        let mut last = start;
        let mut ok = true;
        let red = reduce::reduce_fixpoint_with(s, RuleSet::FULL, |_, st| {
            let m = measure::mu(st);
            ok &= m <= last;
            last = m;
            st.check_invariants().unwrap();
        });
        prop_assert!(ok);
        prop_assert!(measure::mu(&red.state) <= start);
    }

    #[test]
    fn witnesses_survive_contraction(g in digraph(8)) {
        let res = solver::solve(&g, SolverConfig::default()).unwrap();
        if let Some(sol) = res.solution {
            prop_assert_eq!(validate_tree(&g, sol.root, &sol.tree), Ok(sol.leaves));
        }
    }
}
