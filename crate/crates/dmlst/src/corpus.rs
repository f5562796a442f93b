//! Batch equivalence runs: every variant against the brute-force oracle.

use dmlst_core::oracle;
use dmlst_core::solver::{self, validate_tree, SolverConfig, Variant};
use dmlst_core::{DiGraph, VertexId};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::generate::generate_random;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CorpusSummary {
    pub instances: usize,
    pub feasible: usize,
    pub mismatches: usize,
    pub invalid_witnesses: usize,
    /// Instances above the oracle cap, compared across variants only.
    pub unchecked_by_oracle: usize,
}

impl CorpusSummary {
    pub fn render(&self) -> String {
        format!(
            "instances: {}\nfeasible: {}\nunchecked by oracle: {}\ninvalid witnesses: {}\nmismatches: {}\n",
            self.instances, self.feasible, self.unchecked_by_oracle, self.invalid_witnesses, self.mismatches
        )
    }
}

/// Best leaf count over all roots by brute force, `None` if infeasible.
pub fn oracle_all_roots(g: &DiGraph) -> Result<Option<usize>, oracle::OracleError> {
    let mut best = None;
    for r in g.vertices() {
        best = best.max(oracle::solve_unconstrained(g, r)?);
    }
    Ok(best)
}

/// Checks one instance and folds the outcome into `summary`.
pub fn check_instance(g: &DiGraph, alpha: f64, summary: &mut CorpusSummary) {
    summary.instances += 1;
    let truth = oracle_all_roots(g).ok();
    if truth.is_none() {
        summary.unchecked_by_oracle += 1;
    }
    let mut answers = Vec::new();
    for variant in [Variant::BranchReduce, Variant::NaiveBn, Variant::Memoized] {
        let cfg = SolverConfig { variant, alpha, ..SolverConfig::default() };
        let res = solver::solve(g, cfg).expect("no node limit");
        if let Some(sol) = &res.solution {
            if validate_tree(g, sol.root, &sol.tree) != Ok(sol.leaves) {
                summary.invalid_witnesses += 1;
            }
        }
        answers.push(res.leaf_count());
    }
    if answers[0].is_some() {
        summary.feasible += 1;
    }
    let reference = truth.unwrap_or(answers[0]);
    if answers.iter().any(|&a| a != reference) {
        summary.mismatches += 1;
    }
}

/// `count` random instances on `n` vertices; per-instance seeds are drawn
/// from a generator seeded with `seed`.
pub fn run_corpus(n: usize, count: usize, p: f64, seed: u64, alpha: f64) -> CorpusSummary {
    let mut seeds = ChaCha8Rng::seed_from_u64(seed);
    let mut summary = CorpusSummary::default();
    for _ in 0..count {
        let g = generate_random(n, p, seeds.next_u64());
        check_instance(&g, alpha, &mut summary);
    }
    summary
}

/// Convenience for callers that only need the root list.
pub fn feasible_roots(g: &DiGraph) -> Vec<VertexId> {
    g.vertices().filter(|&r| g.reachable_from(r, &Default::default()).len() == g.vertex_count()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_corpus_is_clean() {
        let s = run_corpus(6, 10, 0.35, 1, 0.3);
        assert_eq!(s.instances, 10);
        assert_eq!(s.mismatches, 0);
        assert_eq!(s.invalid_witnesses, 0);
        assert_eq!(s.unchecked_by_oracle, 0);
    }
}
