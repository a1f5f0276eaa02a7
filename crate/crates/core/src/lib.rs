//! Combining per-cube DRAT refutations of a divide-and-conquer SAT run into a single
//! refutation of the original instance.
//!
//! The crate is `no_std` (it needs `alloc`). Everything touching files, threads or
//! clocks lives behind small traits implemented by the `drat-stitch` crate.
#![no_std]

extern crate alloc;

pub mod checker;
pub mod clause;
pub mod cube;
pub mod formula;
pub mod harness;
pub mod lit;
pub mod proof;
pub mod stitcher;
pub mod trimmer;

pub use checker::{check_refutation, is_preserving, CheckReport, DeletionMode, Verdict};
pub use clause::Clause;
pub use cube::{Cube, ProofBundle};
pub use formula::Formula;
pub use lit::{Literal, Var};
pub use proof::{ProofStep, Refutation, StepKind};
pub use stitcher::{build_cube_tree, combine, combine_all, stitch, CombineOptions, TrimPolicy};
