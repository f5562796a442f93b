//! Exact solver for the directed maximum leaf spanning tree problem: given a
//! digraph, find an out-branching that spans every vertex and has as many
//! leaves as possible.
//!
//! The search labels vertices as it goes (see [`state::Label`]), shrinks the
//! instance with halting and reduction rules ([`reduce`]) and branches on a
//! prioritised list of cases ([`branch`]). [`measure`] audits each branching
//! against the running-time analysis, [`oracle`] is a brute-force reference
//! and [`memo`] is the table-backed exponential-space variant.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod branch;
pub mod graph;
pub mod measure;
pub mod memo;
pub mod oracle;
pub mod reduce;
pub mod solver;
pub mod state;

pub use graph::{Arc, DiGraph, GraphError, VertexId};
pub use solver::{solve, solve_rooted, Solution, SolveError, SolveResult, SolverConfig, Variant};
pub use state::{Label, SearchState};
