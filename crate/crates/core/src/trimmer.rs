//! Unsat-core based trimming of DRAT refutations.
//!
//! A forward replay checks the input and records which clause instance every step added
//! or deleted. A backward pass then starts from the accepted empty clause, undoes the
//! steps one by one and re-justifies each needed addition against the database as it
//! stood before it, marking the clauses its conflict used. Propagation prefers original
//! and already marked clauses, which leaves more additions unmarked. A RAT-justified
//! addition depends on every clause that contained the negated pivot at that point, not
//! just on its conflict clauses. Only marked additions are kept.
//!
//! Trimming repeats until the output no longer changes, so trimming a trimmed proof is
//! a no-op.

use alloc::vec;
use alloc::vec::Vec;
use core::time::Duration;

use crate::checker::{
    redundant, replay, CheckOptions, CheckReport, CheckStats, DeletionMode, FailureReason, StepTrace,
    Trace, Verdict,
};
use crate::clause::Clause;
use crate::formula::Formula;
use crate::proof::{ProofStep, Refutation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrimOptions {
    /// Delete every kept clause right after its last use.
    pub resynthesize_deletions: bool,
    /// Deletion handling while checking the input.
    pub input_mode: DeletionMode,
    pub max_rounds: usize,
}

impl Default for TrimOptions {
    fn default() -> Self {
        TrimOptions {
            resynthesize_deletions: true,
            input_mode: DeletionMode::Permissive,
            max_rounds: 16,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TrimReport {
    pub input_steps: usize,
    pub output_steps: usize,
    pub input_bytes: usize,
    pub output_bytes: usize,
    /// Clause occurrences of the formula marked as needed.
    pub core_clauses: usize,
    pub rounds: usize,
    pub wall_time: Option<Duration>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TrimError {
    #[error("input is not a valid refutation (step {:?}, {:?})", .0.failing_step, .0.reason)]
    InvalidInput(CheckReport),
    #[error("trimmed refutation failed its re-check (step {:?}, {:?}); this is a bug", .0.failing_step, .0.reason)]
    InternalMismatch(CheckReport),
}

#[derive(Debug, Clone)]
pub struct Trimmed {
    pub refutation: Refutation,
    pub core: Formula,
    pub report: TrimReport,
}

/// Trims with default options.
pub fn trim(formula: &Formula, proof: &Refutation) -> Result<(Refutation, TrimReport), TrimError> {
    let t = trim_with(formula, proof, &TrimOptions::default())?;
    Ok((t.refutation, t.report))
}

/// The clauses of `formula` needed by the trimmed refutation.
pub fn unsat_core(formula: &Formula, proof: &Refutation) -> Result<Formula, TrimError> {
    Ok(trim_with(formula, proof, &TrimOptions::default())?.core)
}

pub fn trim_with(
    formula: &Formula,
    proof: &Refutation,
    options: &TrimOptions,
) -> Result<Trimmed, TrimError> {
    let originals: Vec<&Clause> = formula.occurrences().collect();
    let mut current = proof.clone();
    let mut round = 0;
    loop {
        let mode = if round == 0 {
            options.input_mode
        } else {
            DeletionMode::Strict
        };
        let check = CheckOptions::new(mode);
        let (report, trace) = replay(formula, &current, check, true);
        let Some(mut trace) = trace else {
            return Err(if round == 0 {
                TrimError::InvalidInput(report)
            } else {
                TrimError::InternalMismatch(report)
            });
        };
        round += 1;
        let marks = mark_backward(&current, &mut trace, check.allow_rat).map_err(TrimError::InternalMismatch)?;
        let (next, core_marks) = rebuild(&originals, &current, &trace, &marks, options.resynthesize_deletions);
        let converged = next == current;
        if !converged && round >= options.max_rounds {
            let recheck = replay(formula, &next, CheckOptions::new(DeletionMode::Strict), false).0;
            if !recheck.is_valid() {
                return Err(TrimError::InternalMismatch(recheck));
            }
        }
        if converged || round >= options.max_rounds {
            let core: Formula = originals
                .iter()
                .zip(&core_marks)
                .filter(|(_, &m)| m)
                .map(|(c, _)| (*c).clone())
                .collect();
            let report = TrimReport {
                input_steps: proof.len(),
                output_steps: next.len(),
                input_bytes: proof.serialized_len(),
                output_bytes: next.serialized_len(),
                core_clauses: core.total_clauses(),
                rounds: round,
                wall_time: None,
            };
            return Ok(Trimmed {
                refutation: next,
                core,
                report,
            });
        }
        current = next;
    }
}

/// Needed clause instances and, for each, the last step that relies on it.
struct Marks {
    needed: Vec<bool>,
    last_use: Vec<Option<usize>>,
}

/// Walks back from the final empty clause, re-justifying each needed addition against
/// the database as it stood before it. Propagation prefers clauses already known to be
/// needed, which keeps the marked set small.
fn mark_backward(proof: &Refutation, trace: &mut Trace, allow_rat: bool) -> Result<Marks, CheckReport> {
    let n = trace.engine.instances();
    let mut marks = Marks {
        needed: vec![false; n],
        last_use: vec![None; n],
    };
    let engine = &mut trace.engine;
    engine.set_core_first(true);
    for id in 0..trace.original {
        engine.mark_core(id);
    }
    for t in (0..=trace.final_step).rev() {
        match trace.steps[t] {
            StepTrace::Added(id) => {
                engine.uninsert(id);
                if t == trace.final_step {
                    marks.needed[id] = true;
                }
                if !marks.needed[id] {
                    continue;
                }
                let clause = &proof.steps()[t].clause;
                let pivot = if allow_rat { clause.pivot() } else { None };
                let Some(justification) = redundant(engine, clause, pivot, true) else {
                    return Err(CheckReport {
                        verdict: Verdict::Invalid,
                        failing_step: Some(t + 1),
                        reason: Some(if pivot.is_some() {
                            FailureReason::NotRat
                        } else {
                            FailureReason::NotAt
                        }),
                        stats: CheckStats::default(),
                    });
                };
                for d in justification.deps {
                    if !marks.needed[d] {
                        marks.needed[d] = true;
                        engine.mark_core(d);
                    }
                    marks.last_use[d].get_or_insert(t);
                }
            }
            StepTrace::Deleted(Some(id)) => engine.revive(id),
            StepTrace::Deleted(None) => {}
        }
    }
    Ok(marks)
}

/// Rebuilds the proof from the marks. Returns it with the needed-marks of the original
/// clause occurrences.
fn rebuild(
    originals: &[&Clause],
    proof: &Refutation,
    trace: &Trace,
    marks: &Marks,
    resynthesize: bool,
) -> (Refutation, Vec<bool>) {
    let steps = proof.steps();
    let final_step = trace.final_step;
    let n_ids = marks.needed.len();
    let marked = &marks.needed;
    let last_use = &marks.last_use;

    let mut added_at: Vec<Option<usize>> = vec![None; n_ids];
    let mut deleted_at: Vec<Option<usize>> = vec![None; n_ids];
    for (t, s) in trace.steps[..=final_step].iter().enumerate() {
        match s {
            StepTrace::Added(id) => added_at[*id] = Some(t),
            StepTrace::Deleted(Some(id)) => deleted_at[*id] = Some(t),
            StepTrace::Deleted(None) => {}
        }
    }

    // Deletions the input already had are kept: originals at their position, kept
    // additions at their position or, when resynthesizing, right after their last use.
    let mut deletions_after: Vec<Vec<usize>> = vec![Vec::new(); final_step + 1];
    let mut kept_steps = 0usize;
    let mut kept_bytes = 0usize;
    let mut optional: Vec<(usize, usize)> = Vec::new();
    for id in 0..n_ids {
        let is_original = id < trace.original;
        if !is_original && !marked[id] {
            continue;
        }
        if let Some(t) = added_at[id] {
            kept_steps += 1;
            kept_bytes += steps[t].serialized_len();
        }
        match (deleted_at[id], last_use[id]) {
            (Some(d), use_) => {
                let at = match (resynthesize && !is_original, use_) {
                    (true, Some(u)) => u,
                    _ => d,
                };
                deletions_after[at].push(id);
                kept_steps += 1;
                kept_bytes += steps[d].serialized_len();
            }
            (None, Some(u)) if resynthesize && !is_original && u < final_step => {
                optional.push((u, id));
            }
            _ => {}
        }
    }
    let clause_of = |id: usize| -> Clause {
        if id < trace.original {
            originals[id].clone()
        } else {
            steps[added_at[id].expect("added instance")].clause.clone()
        }
    };
    // At most half of what the dropped steps freed, so a trim that drops anything
    // always shortens the proof.
    let mut budget_steps = steps.len().saturating_sub(kept_steps) / 2;
    let mut budget_bytes = proof.serialized_len().saturating_sub(kept_bytes) / 2;
    optional.sort_unstable();
    for (u, id) in optional {
        let len = ProofStep::delete(clause_of(id)).serialized_len();
        if budget_steps == 0 || len > budget_bytes {
            continue;
        }
        budget_steps -= 1;
        budget_bytes -= len;
        deletions_after[u].push(id);
    }

    let mut out = Refutation::new();
    for (t, s) in trace.steps[..=final_step].iter().enumerate() {
        if let StepTrace::Added(id) = s {
            if marked[*id] {
                out.push(steps[t].clone());
            }
        }
        let mut pending = core::mem::take(&mut deletions_after[t]);
        pending.sort_unstable();
        for id in pending {
            out.push(ProofStep::delete(clause_of(id)));
        }
    }
    let core_marks = marked[..trace.original].to_vec();
    (out, core_marks)
}
