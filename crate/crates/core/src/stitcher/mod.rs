//! Stitching sub-problem refutations together.
//!
//! Given refutations of `φ ∧ x` and `φ ∧ ¬x`, every clause of the first gains `¬x`,
//! every clause of the second gains `x`, and the concatenation closed by `(Add, ∅)`
//! refutes `φ`. The added literal is placed last so each clause keeps its pivot.

mod combine;
mod plan;
mod tree;

use alloc::vec::Vec;
use core::fmt;

pub use combine::{
    combine, combine_all, Clock, CombineOptions, Combined, LevelExecutor, LevelReport, MemoryStore,
    NoClock, ProofStore, Sequential, StitchRecord,
};
pub use plan::{StitchJob, StitchPlan};
pub use tree::{build_cube_tree, CubeNode, CubeTree, NodeId, TreeError};

use crate::checker::{check_refutation, preservation_violation, CheckReport, DeletionMode};
use crate::clause::Clause;
use crate::cube::Cube;
use crate::formula::Formula;
use crate::lit::Literal;
use crate::proof::{ProofStep, Refutation};
use crate::trimmer::TrimError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StitchError {
    #[error("refutation for cube {cube} is not preserving: {clause:?} is deleted more often than added")]
    NonPreservingInput { cube: Cube, clause: Clause },
    #[error("refutation for cube {cube} is invalid (step {:?}, {:?})", .report.failing_step, .report.reason)]
    InvalidSubProof { cube: Cube, report: CheckReport },
    #[error("refutation for cube {cube} still fails after stripping deletions (step {:?}, {:?}); it needs RAT", .report.failing_step, .report.reason)]
    RepairFailed { cube: Cube, report: CheckReport },
    #[error("trimming the refutation for cube {cube} failed: {source}")]
    Trim { cube: Cube, source: TrimError },
    #[error("intermediate refutation storage failed at cube {cube}: {message}")]
    Storage { cube: Cube, message: alloc::string::String },
}

/// Stitching without any input checking: lift `positive` (a refutation of `φ ∧ x`) by
/// `¬x`, lift `negative` (of `φ ∧ ¬x`) by `x`, and close with `(Add, ∅)`.
pub fn lift_and_join(decision: Literal, positive: &Refutation, negative: &Refutation) -> Refutation {
    let mut steps = Vec::with_capacity(positive.len() + negative.len() + 1);
    let lift = |step: &ProofStep, l: Literal| ProofStep {
        kind: step.kind,
        clause: step.clause.with_appended(l),
    };
    steps.extend(positive.iter().map(|s| lift(s, -decision)));
    steps.extend(negative.iter().map(|s| lift(s, decision)));
    steps.push(ProofStep::add(Clause::empty()));
    steps.into()
}

/// Checks a sub-refutation the way stitching requires: preserving, then valid for
/// its instance.
pub fn verify_sub_proof(
    instance: &Formula,
    cube: &Cube,
    proof: &Refutation,
    mode: DeletionMode,
) -> Result<(), StitchError> {
    if let Some(clause) = preservation_violation(proof) {
        return Err(StitchError::NonPreservingInput {
            cube: cube.clone(),
            clause,
        });
    }
    let report = check_refutation(instance, proof, mode);
    if !report.is_valid() {
        return Err(StitchError::InvalidSubProof {
            cube: cube.clone(),
            report,
        });
    }
    Ok(())
}

/// Stitches refutations of `formula ∧ decision` and `formula ∧ ¬decision`. With
/// `verify` set, both inputs must be valid and preserving first; `None` skips that.
pub fn stitch(
    formula: &Formula,
    decision: Literal,
    positive: &Refutation,
    negative: &Refutation,
    verify: Option<DeletionMode>,
) -> Result<Refutation, StitchError> {
    if let Some(mode) = verify {
        for (l, proof) in [(decision, positive), (-decision, negative)] {
            let cube = Cube::new(alloc::vec![l]).expect("single literal");
            verify_sub_proof(&cube.instance(formula), &cube, proof, mode)?;
        }
    }
    Ok(lift_and_join(decision, positive, negative))
}

/// Literal count over additions; deletions do not count.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClauseLengthAverage {
    pub literals: u64,
    pub additions: u64,
}

impl ClauseLengthAverage {
    /// Exact `literals / additions > threshold`; an empty average is 0.
    pub fn exceeds(self, threshold: u64) -> bool {
        self.literals > threshold.saturating_mul(self.additions)
    }

    pub fn value(self) -> f64 {
        if self.additions == 0 {
            0.0
        } else {
            self.literals as f64 / self.additions as f64
        }
    }
}

impl fmt::Display for ClauseLengthAverage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.3}", self.value())
    }
}

pub fn average_clause_length(proof: &Refutation) -> ClauseLengthAverage {
    proof
        .additions()
        .fold(ClauseLengthAverage::default(), |acc, c| ClauseLengthAverage {
            literals: acc.literals + c.len() as u64,
            additions: acc.additions + 1,
        })
}

/// When to trim an intermediate refutation after a stitch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrimPolicy {
    Never,
    /// Trim when the average clause length is strictly above the threshold.
    AboveAverageLength(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("CL_avg must be -1 or a non-negative integer, got {0}")]
pub struct InvalidThreshold(pub i64);

impl TrimPolicy {
    /// `-1` never trims, `0` trims after every stitch, `n` trims above average length `n`.
    pub fn from_cl_avg(value: i64) -> Result<TrimPolicy, InvalidThreshold> {
        match value {
            -1 => Ok(TrimPolicy::Never),
            v if v >= 0 => Ok(TrimPolicy::AboveAverageLength(v as u64)),
            v => Err(InvalidThreshold(v)),
        }
    }

    pub fn cl_avg(self) -> i64 {
        match self {
            TrimPolicy::Never => -1,
            TrimPolicy::AboveAverageLength(t) => t as i64,
        }
    }

    pub fn should_trim(self, average: ClauseLengthAverage) -> bool {
        match self {
            TrimPolicy::Never => false,
            TrimPolicy::AboveAverageLength(t) => average.exceeds(t),
        }
    }
}
