//! Fixture generation: a DRUP-logging solver, a splitter and random unsatisfiable
//! formulas, so the pipeline can be exercised without external tools.

mod generate;
mod oracle;
mod solver;
mod split;

pub use generate::{gen_random_unsat, random_unsat_suite, BadRatio, ClauseRatio, GenerateError, MAX_ATTEMPTS, TRUTH_TABLE_LIMIT};
pub use oracle::{truth_table_model, truth_table_satisfiable, TooManyVariables, MAX_ORACLE_VARIABLES};
pub use solver::{solve_drup, solve_drup_with, ResourceLimit, SolveOutcome, SolverConfig};
pub use split::{split, split_variables, DepthTooLarge};
