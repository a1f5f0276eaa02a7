//! Seeded random unsatisfiable 3-CNF.

use alloc::vec::Vec;
use core::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::oracle::truth_table_satisfiable;
use super::solver::{solve_drup, SolveOutcome};
use crate::clause::Clause;
use crate::formula::Formula;
use crate::lit::Var;

/// Variables up to this count are decided by truth table, above it by the solver.
pub const TRUTH_TABLE_LIMIT: usize = 16;
pub const MAX_ATTEMPTS: u32 = 1000;

/// Clauses per variable as a fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClauseRatio {
    pub numerator: u32,
    pub denominator: u32,
}

impl ClauseRatio {
    /// The usual hard region for random 3-SAT, 4.26.
    pub const THRESHOLD: ClauseRatio = ClauseRatio::new(426, 100);

    pub const fn new(numerator: u32, denominator: u32) -> ClauseRatio {
        ClauseRatio {
            numerator,
            denominator,
        }
    }

    /// `round(vars * ratio)`.
    pub fn clauses_for(self, vars: usize) -> usize {
        let scaled = vars as u64 * u64::from(self.numerator);
        let d = u64::from(self.denominator.max(1));
        ((2 * scaled + d) / (2 * d)) as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("expected a positive ratio such as `4.26` or `213/50`")]
pub struct BadRatio;

impl FromStr for ClauseRatio {
    type Err = BadRatio;

    /// Accepts `a/b` and plain decimals.
    fn from_str(s: &str) -> Result<ClauseRatio, BadRatio> {
        let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
        let (n, d) = if let Some((n, d)) = s.split_once('/') {
            if !digits(n) || !digits(d) {
                return Err(BadRatio);
            }
            (n.parse().map_err(|_| BadRatio)?, d.parse().map_err(|_| BadRatio)?)
        } else {
            let (whole, frac) = s.split_once('.').unwrap_or((s, ""));
            if !(digits(whole) || digits(frac)) || !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
                return Err(BadRatio);
            }
            let scale = 10u32.checked_pow(frac.len() as u32).ok_or(BadRatio)?;
            let mut joined = alloc::string::String::from(whole);
            joined.push_str(frac);
            (joined.parse::<u32>().map_err(|_| BadRatio)?, scale)
        };
        if n == 0 || d == 0 {
            return Err(BadRatio);
        }
        Ok(ClauseRatio::new(n, d))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum GenerateError {
    #[error("no unsatisfiable formula found after {0} attempts")]
    GiveUp(u32),
    #[error("a formula needs at least one variable")]
    NoVariables,
}

/// Samples formulas of `min(3, vars)`-literal clauses over variables `1..=vars` until
/// one is unsatisfiable. Clauses are distinct, so the clause count is capped by the
/// number of distinct clauses.
pub fn gen_random_unsat(vars: usize, ratio: ClauseRatio, seed: u64) -> Result<Formula, GenerateError> {
    if vars == 0 {
        return Err(GenerateError::NoVariables);
    }
    let width = vars.min(3);
    let wanted = ratio.clauses_for(vars).min(distinct_clauses(vars, width));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..MAX_ATTEMPTS {
        let mut f = Formula::new();
        while f.total_clauses() < wanted {
            let clause: Clause = sample(&mut rng, vars, width)
                .into_iter()
                .map(|i| {
                    let v = Var::new(i as u32 + 1).expect("positive index");
                    v.literal(rng.gen())
                })
                .collect();
            if !f.contains(&clause) {
                f.add(clause);
            }
        }
        let unsat = if vars <= TRUTH_TABLE_LIMIT {
            !truth_table_satisfiable(&f).expect("within the oracle limit")
        } else {
            matches!(solve_drup(&f, seed ^ u64::from(attempt)), Ok(SolveOutcome::Unsat(_)))
        };
        if unsat {
            return Ok(f);
        }
    }
    Err(GenerateError::GiveUp(MAX_ATTEMPTS))
}

fn distinct_clauses(vars: usize, width: usize) -> usize {
    let choose = (0..width).fold(1usize, |acc, i| acc.saturating_mul(vars - i) / (i + 1));
    choose.saturating_mul(1 << width)
}

pub fn random_unsat_suite(count: usize, vars: core::ops::RangeInclusive<usize>, seed: u64) -> Result<Vec<Formula>, GenerateError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| gen_random_unsat(rng.gen_range(vars.clone()), ClauseRatio::THRESHOLD, rng.gen()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::formula;

    #[test]
    fn one_variable() {
        assert_eq!(
            gen_random_unsat(1, ClauseRatio::THRESHOLD, 3),
            Ok(formula(&[&[1], &[-1]]))
        );
    }

    #[test]
    fn deterministic_and_unsat() {
        for seed in 0..10 {
            let f = gen_random_unsat(10, ClauseRatio::THRESHOLD, seed).unwrap();
            assert_eq!(gen_random_unsat(10, ClauseRatio::THRESHOLD, seed).unwrap(), f);
            assert_eq!(truth_table_satisfiable(&f), Ok(false));
            assert_eq!(f.total_clauses(), 43);
            assert!(f.iter().all(|(c, n)| c.len() == 3 && *n == 1));
        }
    }

    #[test]
    fn hopeless_ratio_gives_up() {
        assert_eq!(
            gen_random_unsat(8, ClauseRatio::new(1, 2), 0),
            Err(GenerateError::GiveUp(MAX_ATTEMPTS))
        );
    }

    #[test]
    fn ratio_parsing() {
        assert_eq!("4.26".parse(), Ok(ClauseRatio::new(426, 100)));
        assert_eq!("213/50".parse(), Ok(ClauseRatio::new(213, 50)));
        assert_eq!("5".parse(), Ok(ClauseRatio::new(5, 1)));
        assert_eq!(".5".parse(), Ok(ClauseRatio::new(5, 10)));
        for bad in ["", "0", "1/0", "-1", "4.2.6", "x", "."] {
            assert_eq!(bad.parse::<ClauseRatio>(), Err(BadRatio), "{bad}");
        }
    }

    #[test]
    fn clause_count_rounds() {
        assert_eq!(ClauseRatio::THRESHOLD.clauses_for(20), 85);
        assert_eq!(ClauseRatio::new(1, 2).clauses_for(3), 2);
        assert_eq!(distinct_clauses(3, 3), 8);
        assert_eq!(distinct_clauses(1, 1), 2);
    }
}
