//! DRAT semantics: unit propagation, AT, RAT, refutation checking and the preserving
//! predicate.

pub mod definitional;
pub(crate) mod engine;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::time::Duration;

use crate::clause::Clause;
use crate::formula::Formula;
use crate::lit::Literal;
use crate::proof::{Refutation, StepKind};

pub use definitional::{fixpoint_by_definition, propagate_step, NotUnit, PropagationOutcome};
use engine::{ClauseId, Engine};

/// Unit propagation to the unique fixpoint.
///
/// Runs on the watched-literal engine and rebuilds the fixpoint formula from the final
/// assignment: clauses satisfied by it disappear, falsified literals are stripped, and
/// each assigned literal contributes one unit clause.
pub fn propagate_fixpoint(f: &Formula) -> PropagationOutcome {
    let mut engine = Engine::new();
    for c in f.occurrences() {
        engine.insert(c);
    }
    let Some(assignment) = engine.top_level_assignment() else {
        return PropagationOutcome::Conflict;
    };
    let mut assigned: Vec<Literal> = assignment;
    assigned.sort_unstable();
    let is_true = |l: Literal| assigned.binary_search(&l).is_ok();

    let mut result = Formula::new();
    for (c, &m) in f.iter() {
        if c.literals().iter().any(|&l| is_true(l)) {
            continue;
        }
        let reduced = Clause::new(c.literals().iter().copied().filter(|&l| !is_true(-l)));
        for _ in 0..m {
            result.add(reduced.clone());
        }
    }
    for &l in &assigned {
        result.add(Clause::new([l]));
    }
    PropagationOutcome::Fixpoint(result)
}

/// `F ∪ {¬ℓ₁} ∪ … ∪ {¬ℓₖ} ↦ ⊥` for `C = {ℓ₁, …, ℓₖ}`.
pub fn has_at(f: &Formula, c: &Clause) -> bool {
    let mut engine = Engine::new();
    for d in f.occurrences() {
        engine.insert(d);
    }
    engine.at(c.literals(), false).is_some()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("pivot {0} is not a literal of the clause")]
pub struct PivotNotInClause(pub Literal);

/// RAT of `c` on `pivot` with respect to `f`. Clause multiplicity does not matter: each
/// distinct clause containing `¬pivot` yields one resolvent.
pub fn has_rat(f: &Formula, c: &Clause, pivot: Literal) -> Result<bool, PivotNotInClause> {
    if !c.contains(pivot) {
        return Err(PivotNotInClause(pivot));
    }
    let mut engine = Engine::new();
    for d in f.occurrences() {
        engine.insert(d);
    }
    Ok(redundant(&mut engine, c, Some(pivot), false).is_some())
}

/// How an addition was justified, with the clause instances it relied on.
pub(crate) struct Justification {
    pub deps: Vec<ClauseId>,
    pub rat: bool,
}

pub(crate) fn redundant(
    engine: &mut Engine,
    c: &Clause,
    rat_pivot: Option<Literal>,
    trace: bool,
) -> Option<Justification> {
    if let Some(conflict) = engine.at(c.literals(), trace) {
        return Some(Justification {
            deps: conflict.deps,
            rat: false,
        });
    }
    let pivot = rat_pivot?;
    let candidates: Vec<(Clause, Vec<ClauseId>)> = engine
        .live_containing(-pivot)
        .into_iter()
        .map(|(d, ids)| (d.clone(), ids.to_vec()))
        .collect();
    let mut deps = Vec::new();
    for (d, ids) in candidates {
        let resolvent = c.union(&d.without(-pivot));
        let conflict = engine.at(resolvent.literals(), trace)?;
        if trace {
            deps.extend(conflict.deps);
            deps.extend(ids);
        }
    }
    deps.sort_unstable();
    deps.dedup();
    Some(Justification { deps, rat: true })
}

/// What to do when a proof deletes a clause the formula does not contain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DeletionMode {
    /// Fail the check.
    Strict,
    /// Warn and skip the deletion, as drat-trim does.
    #[default]
    Permissive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    pub deletions: DeletionMode,
    /// When false every addition must be an asymmetric tautology (DRUP checking).
    pub allow_rat: bool,
}

impl CheckOptions {
    pub fn new(deletions: DeletionMode) -> CheckOptions {
        CheckOptions {
            deletions,
            allow_rat: true,
        }
    }
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions::new(DeletionMode::default())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureReason {
    NotAt,
    NotRat,
    MissingEmptyClause,
    DeletionAbsent,
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FailureReason::NotAt => "not-at",
            FailureReason::NotRat => "not-rat",
            FailureReason::MissingEmptyClause => "missing-empty-clause",
            FailureReason::DeletionAbsent => "deletion-absent",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CheckStats {
    pub steps_checked: usize,
    pub propagations: u64,
    /// Additions that needed RAT because plain AT failed.
    pub rat_steps: usize,
    pub skipped_deletions: usize,
    /// Steps after the first accepted empty clause.
    pub ignored_trailing_steps: usize,
    /// Filled in by callers that own a clock.
    pub wall_time: Option<Duration>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub verdict: Verdict,
    /// 1-based index of the offending step.
    pub failing_step: Option<usize>,
    pub reason: Option<FailureReason>,
    pub stats: CheckStats,
}

impl CheckReport {
    pub fn is_valid(&self) -> bool {
        self.verdict == Verdict::Valid
    }
}

/// Checks that `proof` is a DRAT refutation of `formula`.
///
/// Additions are checked for RAT on their first serialized literal (AT first), the empty
/// clause for AT. Checking ends at the first accepted `(Add, ∅)`.
pub fn check_refutation(formula: &Formula, proof: &Refutation, mode: DeletionMode) -> CheckReport {
    replay(formula, proof, CheckOptions::new(mode), false).0
}

pub fn check_refutation_with(
    formula: &Formula,
    proof: &Refutation,
    options: CheckOptions,
) -> CheckReport {
    replay(formula, proof, options, false).0
}

/// Per-step record of a traced replay: the clause instance each step added or deleted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum StepTrace {
    Added(ClauseId),
    Deleted(Option<ClauseId>),
}

/// Instance ids of a replayed valid refutation, with the clause database as it stood
/// after the accepted `(Add, ∅)`. Ids `0..original` are the formula's clause
/// occurrences in canonical order.
pub(crate) struct Trace {
    pub original: usize,
    pub steps: Vec<StepTrace>,
    /// 0-based index of the accepted `(Add, ∅)`.
    pub final_step: usize,
    pub engine: Engine,
}

pub(crate) fn replay(
    formula: &Formula,
    proof: &Refutation,
    options: CheckOptions,
    trace: bool,
) -> (CheckReport, Option<Trace>) {
    let mut engine = Engine::new();
    for c in formula.occurrences() {
        engine.insert(c);
    }
    let mut stats = CheckStats::default();
    let mut steps = Vec::new();
    let fail = |stats: CheckStats, engine: &Engine, step: Option<usize>, reason| {
        let mut stats = stats;
        stats.propagations = engine.propagations;
        (
            CheckReport {
                verdict: Verdict::Invalid,
                failing_step: step,
                reason: Some(reason),
                stats,
            },
            None,
        )
    };

    for (i, step) in proof.iter().enumerate() {
        stats.steps_checked += 1;
        match step.kind {
            StepKind::Delete => match engine.remove(&step.clause) {
                Some(id) => steps.push(StepTrace::Deleted(Some(id))),
                None => match options.deletions {
                    DeletionMode::Strict => {
                        return fail(stats, &engine, Some(i + 1), FailureReason::DeletionAbsent)
                    }
                    DeletionMode::Permissive => {
                        log::warn!(
                            "step {}: ignoring deletion of absent clause {:?}",
                            i + 1,
                            step.clause
                        );
                        stats.skipped_deletions += 1;
                        steps.push(StepTrace::Deleted(None));
                    }
                },
            },
            StepKind::Add => {
                let pivot = if options.allow_rat {
                    step.clause.pivot()
                } else {
                    None
                };
                let Some(justification) = redundant(&mut engine, &step.clause, pivot, false) else {
                    let reason = if pivot.is_some() {
                        FailureReason::NotRat
                    } else {
                        FailureReason::NotAt
                    };
                    return fail(stats, &engine, Some(i + 1), reason);
                };
                if justification.rat {
                    stats.rat_steps += 1;
                }
                let id = engine.insert(&step.clause);
                steps.push(StepTrace::Added(id));
                if step.clause.is_empty() {
                    stats.ignored_trailing_steps = proof.len() - (i + 1);
                    if stats.ignored_trailing_steps > 0 {
                        log::warn!(
                            "ignoring {} step(s) after the empty clause at step {}",
                            stats.ignored_trailing_steps,
                            i + 1
                        );
                    }
                    stats.propagations = engine.propagations;
                    let report = CheckReport {
                        verdict: Verdict::Valid,
                        failing_step: None,
                        reason: None,
                        stats,
                    };
                    let trace = trace.then(|| Trace {
                        original: formula.total_clauses(),
                        steps,
                        final_step: i,
                        engine,
                    });
                    return (report, trace);
                }
            }
        }
    }
    fail(stats, &engine, None, FailureReason::MissingEmptyClause)
}

/// Definition of a preserving refutation: no clause is deleted more often than it is
/// added. Order is irrelevant.
pub fn is_preserving(proof: &Refutation) -> bool {
    preservation_violation(proof).is_none()
}

/// Some clause deleted more often than added, if there is one.
pub fn preservation_violation(proof: &Refutation) -> Option<Clause> {
    let mut balance: BTreeMap<&Clause, i64> = BTreeMap::new();
    for step in proof {
        let delta = match step.kind {
            StepKind::Add => 1,
            StepKind::Delete => -1,
        };
        *balance.entry(&step.clause).or_insert(0) += delta;
    }
    balance
        .into_iter()
        .find(|&(_, b)| b < 0)
        .map(|(c, _)| c.clone())
}
