//! Text and JSON renderings of a solve. Vertex ids are 1-indexed, matching
//! the input format.

use std::collections::BTreeMap;
use std::fmt::Write;

use dmlst_core::branch::CaseId;
use dmlst_core::reduce::Rule;
use dmlst_core::solver::SolveResult;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AuditSummary {
    pub nodes: usize,
    pub nonpositive: usize,
    pub analysis_violations: usize,
    pub bound_violations: usize,
    pub measure_increases: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub feasible: bool,
    pub leaf_count: Option<usize>,
    pub root: Option<usize>,
    pub tree: Vec<[usize; 2]>,
    pub nodes_expanded: u64,
    pub max_depth: usize,
    pub cases: BTreeMap<String, u64>,
    pub reductions: BTreeMap<String, u64>,
    pub max_branching_number: Option<f64>,
    pub audit: Option<AuditSummary>,
}

impl Report {
    pub fn new(res: &SolveResult, audited: bool) -> Self {
        let st = &res.stats;
        let sol = res.solution.as_ref();
        Report {
            feasible: sol.is_some(),
            leaf_count: sol.map(|s| s.leaves),
            root: sol.map(|s| s.root.index() + 1),
            tree: sol.map_or(Vec::new(), |s| s.tree.iter().map(|a| [a.tail.index() + 1, a.head.index() + 1]).collect()),
            nodes_expanded: st.nodes_expanded,
            max_depth: st.max_depth,
            cases: CaseId::ALL.iter().map(|&c| (c.to_string(), st.case_count(c))).collect(),
            reductions: Rule::ALL.iter().map(|&r| (r.to_string(), st.reductions_of(r))).collect(),
            max_branching_number: st.max_branching_number(),
            audit: audited.then(|| AuditSummary {
                nodes: st.audits.len(),
                nonpositive: st.audits.iter().filter(|a| a.nonpositive()).count(),
                analysis_violations: st.audits.iter().filter(|a| !a.analysis_violations().is_empty()).count(),
                bound_violations: st.audits.iter().filter(|a| a.bound_violation()).count(),
                measure_increases: st.measure_increases,
            }),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self.leaf_count {
            Some(k) => {
                writeln!(out, "leafCount: {k}").unwrap();
                writeln!(out, "root: {}", self.root.unwrap()).unwrap();
                writeln!(out, "tree:").unwrap();
                for [u, v] in &self.tree {
                    writeln!(out, "  {u} {v}").unwrap();
                }
            }
            None => writeln!(out, "infeasible").unwrap(),
        }
        writeln!(out, "nodesExpanded: {}", self.nodes_expanded).unwrap();
        writeln!(out, "maxDepth: {}", self.max_depth).unwrap();
        let nonzero = |m: &BTreeMap<String, u64>| {
            m.iter().filter(|(_, &n)| n > 0).map(|(k, n)| format!("{k}={n}")).collect::<Vec<_>>().join(" ")
        };
        writeln!(out, "cases: {}", nonzero(&self.cases)).unwrap();
        writeln!(out, "reductions: {}", nonzero(&self.reductions)).unwrap();
        if let Some(t) = self.max_branching_number {
            writeln!(out, "maxBranchingNumber: {t:.6}").unwrap();
        }
        if let Some(a) = &self.audit {
            writeln!(
                out,
                "audit: nodes={} nonpositive={} analysisViolations={} boundViolations={} measureIncreases={}",
                a.nodes, a.nonpositive, a.analysis_violations, a.bound_violations, a.measure_increases
            )
            .unwrap();
        }
        out
    }
}
