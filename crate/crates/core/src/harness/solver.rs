//! A small CDCL solver that logs every learned clause.
//!
//! Learned clauses come from first-UIP conflict analysis, so each one is an asymmetric
//! tautology of the formula plus the clauses learned before it. Nothing is ever
//! deleted, which keeps the emitted proofs preserving.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::clause::Clause;
use crate::formula::Formula;
use crate::lit::{Literal, Var};
use crate::proof::{ProofStep, Refutation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    /// Values for every variable occurring in the formula.
    Sat(BTreeMap<Var, bool>),
    Unsat(Refutation),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("gave up after {0} conflicts")]
pub struct ResourceLimit(pub u64);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    pub seed: u64,
    pub max_conflicts: Option<u64>,
}

impl SolverConfig {
    pub const DEFAULT_MAX_CONFLICTS: u64 = 1_000_000;

    pub fn new(seed: u64) -> SolverConfig {
        SolverConfig {
            seed,
            max_conflicts: Some(Self::DEFAULT_MAX_CONFLICTS),
        }
    }
}

pub fn solve_drup(formula: &Formula, seed: u64) -> Result<SolveOutcome, ResourceLimit> {
    solve_drup_with(formula, &SolverConfig::new(seed))
}

pub fn solve_drup_with(formula: &Formula, config: &SolverConfig) -> Result<SolveOutcome, ResourceLimit> {
    let mut solver = Solver::new(formula, config.seed);
    let mut proof = Refutation::new();
    if !solver.load(formula) {
        proof.push(ProofStep::add(Clause::empty()));
        return Ok(SolveOutcome::Unsat(proof));
    }
    let mut conflicts = 0u64;
    loop {
        if let Some(conflict) = solver.propagate() {
            if solver.decision_level() == 0 {
                proof.push(ProofStep::add(Clause::empty()));
                return Ok(SolveOutcome::Unsat(proof));
            }
            conflicts += 1;
            if config.max_conflicts.is_some_and(|max| conflicts > max) {
                return Err(ResourceLimit(conflicts - 1));
            }
            let (learnt, level) = solver.analyze(conflict);
            proof.push(ProofStep::add(learnt.iter().copied().collect()));
            solver.backtrack(level);
            solver.learn(learnt);
        } else if let Some(decision) = solver.pick_branch() {
            solver.trail_lim.push(solver.trail.len());
            solver.enqueue(decision, None);
        } else {
            return Ok(SolveOutcome::Sat(solver.model(formula)));
        }
    }
}

type ClauseRef = usize;

struct Solver {
    clauses: Vec<Vec<Literal>>,
    /// Indexed by literal code: clauses whose first or second literal it is.
    watches: Vec<Vec<ClauseRef>>,
    values: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<Option<ClauseRef>>,
    trail: Vec<Literal>,
    trail_lim: Vec<usize>,
    qhead: usize,
    candidates: Vec<Var>,
    activity: Vec<f64>,
    increment: f64,
    /// Seeded tie-break among equally active variables.
    rank: Vec<u32>,
    phase: Vec<bool>,
    seen: Vec<bool>,
}

impl Solver {
    fn new(formula: &Formula, seed: u64) -> Solver {
        let n = formula.max_variable().map_or(0, Var::index) as usize + 1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Solver {
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * n],
            values: vec![0; n],
            level: vec![0; n],
            reason: vec![None; n],
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            candidates: formula.variables().into_iter().collect(),
            activity: vec![0.0; n],
            increment: 1.0,
            rank: (0..n).map(|_| rng.gen()).collect(),
            phase: (0..n).map(|_| rng.gen()).collect(),
            seen: vec![false; n],
        }
    }

    /// Adds the formula; false when it is already refuted at level 0 without search.
    fn load(&mut self, formula: &Formula) -> bool {
        for (clause, _) in formula.iter() {
            if clause.is_tautology() {
                continue;
            }
            match clause.literals() {
                [] => return false,
                [unit] => match self.value(*unit) {
                    1 => {}
                    -1 => return false,
                    _ => self.enqueue(*unit, None),
                },
                lits => {
                    self.attach(lits.to_vec());
                }
            }
        }
        true
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn value(&self, l: Literal) -> i8 {
        let v = self.values[l.var().index() as usize];
        if l.is_positive() {
            v
        } else {
            -v
        }
    }

    fn enqueue(&mut self, l: Literal, reason: Option<ClauseRef>) {
        let v = l.var().index() as usize;
        self.values[v] = if l.is_positive() { 1 } else { -1 };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn attach(&mut self, lits: Vec<Literal>) -> ClauseRef {
        let r = self.clauses.len();
        self.watches[lits[0].code()].push(r);
        self.watches[lits[1].code()].push(r);
        self.clauses.push(lits);
        r
    }

    /// Returns the conflicting clause, if any.
    fn propagate(&mut self) -> Option<ClauseRef> {
        while self.qhead < self.trail.len() {
            let falsified = -self.trail[self.qhead];
            self.qhead += 1;
            let watching = core::mem::take(&mut self.watches[falsified.code()]);
            let mut keep = Vec::with_capacity(watching.len());
            let mut conflict = None;
            let mut rest = watching.into_iter();
            for r in rest.by_ref() {
                let lits = &mut self.clauses[r];
                if lits[0] == falsified {
                    lits.swap(0, 1);
                }
                let first = lits[0];
                if self.value(first) == 1 {
                    keep.push(r);
                    continue;
                }
                let lits = &self.clauses[r];
                if let Some(k) = (2..lits.len()).find(|&k| self.value(lits[k]) != -1) {
                    let lits = &mut self.clauses[r];
                    lits.swap(1, k);
                    let code = lits[1].code();
                    self.watches[code].push(r);
                    continue;
                }
                keep.push(r);
                if self.value(first) == -1 {
                    conflict = Some(r);
                    break;
                }
                self.enqueue(first, Some(r));
            }
            keep.extend(rest);
            self.watches[falsified.code()] = keep;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                return conflict;
            }
        }
        None
    }

    /// First-UIP learning. The asserting literal comes first and a literal of the
    /// backjump level second.
    fn analyze(&mut self, conflict: ClauseRef) -> (Vec<Literal>, u32) {
        let current = self.decision_level();
        let mut learnt = vec![Literal::new(1).expect("placeholder")];
        let mut pending = 0usize;
        let mut index = self.trail.len();
        let mut clause = conflict;
        let mut skip_first = false;
        let uip = loop {
            let lits = self.clauses[clause].clone();
            for &q in &lits[usize::from(skip_first)..] {
                let v = q.var().index() as usize;
                if self.seen[v] || self.level[v] == 0 {
                    continue;
                }
                self.seen[v] = true;
                self.bump(v);
                if self.level[v] == current {
                    pending += 1;
                } else {
                    learnt.push(q);
                }
            }
            let p = loop {
                index -= 1;
                if self.seen[self.trail[index].var().index() as usize] {
                    break self.trail[index];
                }
            };
            let v = p.var().index() as usize;
            self.seen[v] = false;
            pending -= 1;
            if pending == 0 {
                break p;
            }
            clause = self.reason[v].expect("implied literal at the conflict level");
            skip_first = true;
        };
        learnt[0] = -uip;
        for l in &learnt[1..] {
            self.seen[l.var().index() as usize] = false;
        }
        let mut level = 0;
        if learnt.len() > 1 {
            let (best, _) = learnt[1..]
                .iter()
                .enumerate()
                .max_by_key(|(_, l)| self.level[l.var().index() as usize])
                .expect("non-empty");
            learnt.swap(1, best + 1);
            level = self.level[learnt[1].var().index() as usize];
        }
        self.decay();
        (learnt, level)
    }

    fn learn(&mut self, learnt: Vec<Literal>) {
        let asserting = learnt[0];
        if learnt.len() == 1 {
            self.enqueue(asserting, None);
        } else {
            let r = self.attach(learnt);
            self.enqueue(asserting, Some(r));
        }
    }

    fn backtrack(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let keep = self.trail_lim[level as usize];
        for l in self.trail.drain(keep..) {
            let v = l.var().index() as usize;
            self.phase[v] = l.is_positive();
            self.values[v] = 0;
            self.reason[v] = None;
        }
        self.trail_lim.truncate(level as usize);
        self.qhead = keep;
    }

    fn bump(&mut self, v: usize) {
        self.activity[v] += self.increment;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.increment *= 1e-100;
        }
    }

    fn decay(&mut self) {
        self.increment /= 0.95;
    }

    fn pick_branch(&self) -> Option<Literal> {
        self.candidates
            .iter()
            .map(|v| v.index() as usize)
            .filter(|&v| self.values[v] == 0)
            .max_by(|&a, &b| {
                self.activity[a]
                    .total_cmp(&self.activity[b])
                    .then(self.rank[a].cmp(&self.rank[b]))
            })
            .map(|v| {
                let var = Var::new(v as u32).expect("variable of the formula");
                var.literal(self.phase[v])
            })
    }

    fn model(&self, formula: &Formula) -> BTreeMap<Var, bool> {
        formula
            .variables()
            .into_iter()
            .map(|v| (v, self.values[v.index() as usize] == 1))
            .collect()
    }
}
