//! Bottom-up combination of a whole cube tree.

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::convert::Infallible;
use core::fmt;
use core::time::Duration;

use super::plan::{StitchJob, StitchPlan};
use super::tree::{CubeTree, NodeId};
use super::{
    average_clause_length, lift_and_join, verify_sub_proof, ClauseLengthAverage, StitchError,
    TrimPolicy,
};
use crate::checker::{check_refutation_with, is_preserving, preservation_violation, CheckOptions, DeletionMode};
use crate::cube::Cube;
use crate::formula::Formula;
use crate::lit::Var;
use crate::proof::{Refutation, StepKind};
use crate::trimmer::{trim_with, TrimOptions};

/// Runs the independent jobs of one level and returns their results in input order.
pub trait LevelExecutor: Sync {
    fn map<T, R, F>(&self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send;
}

/// Runs every job on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl LevelExecutor for Sequential {
    fn map<T, R, F>(&self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        items.into_iter().map(f).collect()
    }
}

/// Monotonic time source for the timing report.
pub trait Clock: Sync {
    fn now(&self) -> Duration;
}

/// Reports zero for everything.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn now(&self) -> Duration {
        Duration::ZERO
    }
}

/// Holds the refutations of finished nodes until their parent consumes them.
pub trait ProofStore {
    type Error: fmt::Display;

    fn put(&mut self, node: NodeId, proof: Refutation) -> Result<(), Self::Error>;
    fn take(&mut self, node: NodeId) -> Result<Refutation, Self::Error>;
}

#[derive(Debug, Default)]
pub struct MemoryStore {
    proofs: BTreeMap<NodeId, Refutation>,
}

impl ProofStore for MemoryStore {
    type Error = Infallible;

    fn put(&mut self, node: NodeId, proof: Refutation) -> Result<(), Infallible> {
        self.proofs.insert(node, proof);
        Ok(())
    }

    fn take(&mut self, node: NodeId) -> Result<Refutation, Infallible> {
        Ok(self.proofs.remove(&node).expect("node result stored before use"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CombineOptions {
    pub policy: TrimPolicy,
    /// Check every leaf refutation (valid and preserving) before stitching; `None`
    /// trusts them.
    pub leaf_check: Option<DeletionMode>,
    /// Repair non-preserving leaves by dropping their deletions. Only succeeds when
    /// every remaining addition is an asymmetric tautology.
    pub strip_deletions: bool,
    pub trim: TrimOptions,
}

impl CombineOptions {
    pub fn new(policy: TrimPolicy) -> CombineOptions {
        CombineOptions {
            policy,
            leaf_check: Some(DeletionMode::Permissive),
            strip_deletions: false,
            trim: TrimOptions {
                input_mode: DeletionMode::Strict,
                ..TrimOptions::default()
            },
        }
    }
}

/// What happened at one inner node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StitchRecord {
    pub cube: Cube,
    pub decision: Var,
    pub depth: usize,
    /// Steps of the stitched refutation before any trimming.
    pub steps: usize,
    pub average: ClauseLengthAverage,
    pub trimmed: bool,
    /// Steps after trimming, equal to `steps` when not trimmed.
    pub final_steps: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelReport {
    pub depth: usize,
    pub stitched: usize,
    pub trimmed: usize,
    /// Summed over the level's jobs.
    pub merge_time: Duration,
    pub trim_time: Duration,
}

#[derive(Debug, Clone)]
pub struct Combined {
    pub refutation: Refutation,
    pub levels: Vec<LevelReport>,
    /// One record per inner node in plan order.
    pub stitches: Vec<StitchRecord>,
    pub leaf_check_time: Duration,
}

impl Combined {
    pub fn trims(&self) -> usize {
        self.stitches.iter().filter(|s| s.trimmed).count()
    }
}

/// Sequential, in-memory, untimed [`combine_all`].
pub fn combine(
    formula: &Formula,
    tree: CubeTree,
    options: &CombineOptions,
) -> Result<Combined, StitchError> {
    combine_all(formula, tree, options, &Sequential, &NoClock, &mut MemoryStore::default())
}

/// Combines all leaf refutations of `tree` into one refutation of `formula`.
///
/// Levels run deepest first with a barrier between them; jobs of a level go through
/// `executor`. After each stitch the result is trimmed against the node's instance
/// (`formula` plus the node's cube as units) when `options.policy` says so. The output
/// does not depend on the executor.
pub fn combine_all<E, K, S>(
    formula: &Formula,
    mut tree: CubeTree,
    options: &CombineOptions,
    executor: &E,
    clock: &K,
    store: &mut S,
) -> Result<Combined, StitchError>
where
    E: LevelExecutor,
    K: Clock,
    S: ProofStore,
{
    let plan = StitchPlan::for_tree(&tree);
    let leaves = tree.take_leaf_refutations();

    let started = clock.now();
    let checked = executor.map(leaves, |(node, cube, proof)| {
        prepare_leaf(formula, &cube, proof, options).map(|p| (node, cube, p))
    });
    let leaf_check_time = clock.now().saturating_sub(started);
    let mut leaf_results = Vec::with_capacity(checked.len());
    for r in checked {
        leaf_results.push(r?);
    }

    if plan.levels.is_empty() {
        let (_, _, refutation) = leaf_results.pop().expect("a tree has at least one node");
        return Ok(Combined {
            refutation,
            levels: Vec::new(),
            stitches: Vec::new(),
            leaf_check_time,
        });
    }

    let storage = |cube: &Cube, e: S::Error| StitchError::Storage {
        cube: cube.clone(),
        message: e.to_string(),
    };
    for (node, cube, proof) in leaf_results {
        store.put(node, proof).map_err(|e| storage(&cube, e))?;
    }

    let mut levels = Vec::with_capacity(plan.levels.len());
    let mut stitches = Vec::with_capacity(plan.job_count());
    for level in &plan.levels {
        let mut inputs = Vec::with_capacity(level.len());
        for job in level {
            let cube = tree.node(job.node).cube().clone();
            let pos = store.take(job.pos).map_err(|e| storage(&cube, e))?;
            let neg = store.take(job.neg).map_err(|e| storage(&cube, e))?;
            inputs.push((*job, cube, pos, neg));
        }
        let outputs = executor.map(inputs, |(job, cube, pos, neg)| {
            run_job(formula, &job, cube, &pos, &neg, options, clock)
        });

        let mut report = LevelReport {
            depth: level[0].depth,
            stitched: 0,
            trimmed: 0,
            merge_time: Duration::ZERO,
            trim_time: Duration::ZERO,
        };
        for out in outputs {
            let out = out?;
            report.stitched += 1;
            report.trimmed += usize::from(out.record.trimmed);
            report.merge_time += out.merge_time;
            report.trim_time += out.trim_time;
            store
                .put(out.node, out.refutation)
                .map_err(|e| storage(&out.record.cube, e))?;
            stitches.push(out.record);
        }
        levels.push(report);
    }

    let root = tree.root();
    let refutation = store
        .take(root)
        .map_err(|e| storage(tree.node(root).cube(), e))?;
    Ok(Combined {
        refutation,
        levels,
        stitches,
        leaf_check_time,
    })
}

fn prepare_leaf(
    formula: &Formula,
    cube: &Cube,
    proof: Refutation,
    options: &CombineOptions,
) -> Result<Refutation, StitchError> {
    let instance = cube.instance(formula);
    if options.strip_deletions && !is_preserving(&proof) {
        let stripped: Refutation = proof
            .into_iter()
            .filter(|s| s.kind == StepKind::Add)
            .collect();
        let options = CheckOptions {
            deletions: DeletionMode::Strict,
            allow_rat: false,
        };
        let report = check_refutation_with(&instance, &stripped, options);
        if !report.is_valid() {
            return Err(StitchError::RepairFailed {
                cube: cube.clone(),
                report,
            });
        }
        return Ok(stripped);
    }
    match options.leaf_check {
        Some(mode) => verify_sub_proof(&instance, cube, &proof, mode)?,
        None => {
            if let Some(clause) = preservation_violation(&proof) {
                return Err(StitchError::NonPreservingInput {
                    cube: cube.clone(),
                    clause,
                });
            }
        }
    }
    Ok(proof)
}

struct JobOutput {
    node: NodeId,
    refutation: Refutation,
    record: StitchRecord,
    merge_time: Duration,
    trim_time: Duration,
}

fn run_job<K: Clock>(
    formula: &Formula,
    job: &StitchJob,
    cube: Cube,
    pos: &Refutation,
    neg: &Refutation,
    options: &CombineOptions,
    clock: &K,
) -> Result<JobOutput, StitchError> {
    let t0 = clock.now();
    let stitched = lift_and_join(job.decision.positive(), pos, neg);
    let t1 = clock.now();
    let average = average_clause_length(&stitched);
    let steps = stitched.len();
    let trimmed = options.policy.should_trim(average);
    log::debug!(
        "stitched cube={} steps={} literals={} additions={} cl_avg={} trim={}",
        cube,
        steps,
        average.literals,
        average.additions,
        options.policy.cl_avg(),
        trimmed
    );
    let refutation = if trimmed {
        let instance = cube.instance(formula);
        trim_with(&instance, &stitched, &options.trim)
            .map_err(|source| StitchError::Trim {
                cube: cube.clone(),
                source,
            })?
            .refutation
    } else {
        stitched
    };
    let t2 = clock.now();
    Ok(JobOutput {
        node: job.node,
        record: StitchRecord {
            cube,
            decision: job.decision,
            depth: job.depth,
            steps,
            average,
            trimmed,
            final_steps: refutation.len(),
        },
        refutation,
        merge_time: t1.saturating_sub(t0),
        trim_time: t2.saturating_sub(t1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::check_refutation;
    use crate::clause::Clause;
    use crate::formula::formula;
    use crate::lit::lit;
    use crate::proof::ProofStep;
    use crate::stitcher::tree::build_cube_tree;
    use alloc::vec;

    fn cube(v: &[i32]) -> Cube {
        Cube::new(v.iter().map(|&x| lit(x)).collect()).unwrap()
    }

    fn add(v: &[i32]) -> ProofStep {
        ProofStep::add(Clause::from_ints(v))
    }

    /// x1..x2 all four combinations forbidden: every cube refutes by one empty clause.
    fn four_leaf_bundle() -> (Formula, Vec<(Cube, Refutation)>) {
        let f = formula(&[&[1, 2], &[1, -2], &[-1, 2], &[-1, -2]]);
        let leaves = [&[1, 2][..], &[1, -2], &[-1, 2], &[-1, -2]]
            .iter()
            .map(|c| (cube(c), Refutation::from(vec![add(&[])])))
            .collect();
        (f, leaves)
    }

    #[test]
    fn two_level_tree_stitches_bottom_up() {
        let (f, leaves) = four_leaf_bundle();
        let tree = build_cube_tree(leaves).unwrap();
        let out = combine(&f, tree, &CombineOptions::new(TrimPolicy::Never)).unwrap();
        assert_eq!(out.levels.len(), 2);
        assert_eq!(out.levels[0].stitched, 2);
        assert_eq!(out.levels[1].stitched, 1);
        // 4 leaf steps, one empty clause per inner node.
        assert_eq!(out.refutation.len(), 4 + 3);
        assert_eq!(
            out.refutation,
            Refutation::from(vec![
                add(&[-2, -1]),
                add(&[2, -1]),
                add(&[-1]),
                add(&[-2, 1]),
                add(&[2, 1]),
                add(&[1]),
                add(&[]),
            ])
        );
        assert!(check_refutation(&f, &out.refutation, DeletionMode::Strict).is_valid());
        assert_eq!(out.trims(), 0);
    }

    #[test]
    fn always_trimming_still_checks() {
        let (f, leaves) = four_leaf_bundle();
        let tree = build_cube_tree(leaves).unwrap();
        let out = combine(&f, tree, &CombineOptions::new(TrimPolicy::AboveAverageLength(0))).unwrap();
        assert_eq!(out.trims(), 3);
        assert!(check_refutation(&f, &out.refutation, DeletionMode::Strict).is_valid());
    }

    #[test]
    fn single_leaf_is_returned_unchanged() {
        let f = formula(&[&[1], &[-1]]);
        let proof: Refutation = vec![add(&[5]), add(&[])].into();
        let tree = build_cube_tree(vec![(Cube::root(), proof.clone())]).unwrap();
        let out = combine(&f, tree, &CombineOptions::new(TrimPolicy::AboveAverageLength(0))).unwrap();
        assert_eq!(out.refutation, proof);
        assert!(out.stitches.is_empty());
    }

    #[test]
    fn invalid_leaf_names_its_cube() {
        let f = formula(&[&[1, 2], &[-1, 2]]);
        let leaves = vec![
            (cube(&[1]), Refutation::from(vec![add(&[])])),
            (cube(&[-1]), Refutation::from(vec![add(&[])])),
        ];
        let tree = build_cube_tree(leaves).unwrap();
        let err = combine(&f, tree, &CombineOptions::new(TrimPolicy::Never)).unwrap_err();
        assert!(matches!(err, StitchError::InvalidSubProof { cube: c, .. } if c == cube(&[1])));
    }

    #[test]
    fn strip_deletions_repairs_drup_leaves() {
        let f = formula(&[&[1, 2], &[1, -2], &[-1, 3], &[-1, -3]]);
        // Deletes an original clause: not preserving, but all additions are AT.
        let bad: Refutation = vec![
            add(&[3, 2]),
            ProofStep::delete(Clause::from_ints(&[1, 2])),
            add(&[]),
        ]
        .into();
        let good: Refutation = vec![add(&[])].into();
        let leaves = vec![(cube(&[1]), good.clone()), (cube(&[-1]), bad.clone())];
        let tree = build_cube_tree(leaves.clone()).unwrap();
        let err = combine(&f, tree, &CombineOptions::new(TrimPolicy::Never)).unwrap_err();
        assert!(matches!(err, StitchError::NonPreservingInput { .. }));

        let mut options = CombineOptions::new(TrimPolicy::Never);
        options.strip_deletions = true;
        let tree = build_cube_tree(leaves).unwrap();
        let out = combine(&f, tree, &options).unwrap();
        assert!(check_refutation(&f, &out.refutation, DeletionMode::Strict).is_valid());
    }
}
