//! Sort-and-sweep reduction for 3-CNF formulas.
//!
//! The pipeline normalizes a formula, rewrites it to an irreducible form with
//! merge, subsumption and unit rules discovered by sorting clause permutations,
//! then expands the residual clauses into product terms. A brute-force oracle
//! and a differential harness check every verdict the pipeline produces.

pub mod appendix;
pub mod cnf;
pub mod dimacs;
pub mod expand;
pub mod harness;
pub mod oracle;
pub mod permute;
pub mod reduce;
pub mod report;

pub use cnf::{Assignment, Clause, ClauseId, CnfError, Formula, Lit, Lits, Var};
pub use reduce::{Backend, ReduceConfig};
