//! Formulas as multisets of clauses.

use alloc::collections::btree_map::{self, BTreeMap};
use alloc::collections::BTreeSet;
use core::fmt;

use crate::clause::Clause;
use crate::lit::{Literal, Var};

/// Removing a clause that the formula does not contain.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("clause {0:?} is not in the formula")]
pub struct AbsentClause(pub Clause);

/// A multiset of clauses. Iteration order is the canonical clause order, so everything
/// derived from a formula is deterministic.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Formula {
    clauses: BTreeMap<Clause, usize>,
    total: usize,
}

impl Formula {
    pub fn new() -> Formula {
        Formula::default()
    }

    /// Increases the multiplicity of `clause` by one.
    pub fn add(&mut self, clause: Clause) {
        *self.clauses.entry(clause).or_insert(0) += 1;
        self.total += 1;
    }

    /// Decreases the multiplicity of `clause` by one.
    pub fn remove(&mut self, clause: &Clause) -> Result<(), AbsentClause> {
        match self.clauses.get_mut(clause) {
            Some(m) if *m > 1 => *m -= 1,
            Some(_) => {
                self.clauses.remove(clause);
            }
            None => return Err(AbsentClause(clause.clone())),
        }
        self.total -= 1;
        Ok(())
    }

    /// Value-semantics form of [`Formula::add`].
    pub fn with_clause(mut self, clause: Clause) -> Formula {
        self.add(clause);
        self
    }

    /// Value-semantics form of [`Formula::remove`].
    pub fn without_clause(mut self, clause: &Clause) -> Result<Formula, AbsentClause> {
        self.remove(clause)?;
        Ok(self)
    }

    pub fn multiplicity(&self, clause: &Clause) -> usize {
        self.clauses.get(clause).copied().unwrap_or(0)
    }

    pub fn contains(&self, clause: &Clause) -> bool {
        self.clauses.contains_key(clause)
    }

    /// Sum of all multiplicities.
    pub fn total_clauses(&self) -> usize {
        self.total
    }

    pub fn distinct_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// Distinct clauses with their multiplicities.
    pub fn iter(&self) -> btree_map::Iter<'_, Clause, usize> {
        self.clauses.iter()
    }

    /// Every clause occurrence, repeated according to multiplicity.
    pub fn occurrences(&self) -> impl Iterator<Item = &Clause> + '_ {
        self.clauses
            .iter()
            .flat_map(|(c, &m)| core::iter::repeat_n(c, m))
    }

    /// Multiplicity-summing union.
    pub fn union(&self, other: &Formula) -> Formula {
        let mut out = self.clone();
        for (c, &m) in other.iter() {
            *out.clauses.entry(c.clone()).or_insert(0) += m;
            out.total += m;
        }
        out
    }

    /// Multiset inclusion.
    pub fn is_subset_of(&self, other: &Formula) -> bool {
        self.iter().all(|(c, &m)| other.multiplicity(c) >= m)
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.clauses
            .keys()
            .flat_map(|c| c.literals().iter().map(|l| l.var()))
            .collect()
    }

    pub fn max_variable(&self) -> Option<Var> {
        self.clauses
            .keys()
            .flat_map(|c| c.literals().iter().map(|l| l.var()))
            .max()
    }

    /// The formula extended with one unit clause per literal.
    pub fn with_units<I: IntoIterator<Item = Literal>>(&self, units: I) -> Formula {
        let mut out = self.clone();
        for l in units {
            out.add(Clause::new([l]));
        }
        out
    }
}

impl FromIterator<Clause> for Formula {
    fn from_iter<I: IntoIterator<Item = Clause>>(iter: I) -> Self {
        let mut f = Formula::new();
        for c in iter {
            f.add(c);
        }
        f
    }
}

impl Extend<Clause> for Formula {
    fn extend<I: IntoIterator<Item = Clause>>(&mut self, iter: I) {
        for c in iter {
            self.add(c);
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.clauses.iter()).finish()
    }
}

/// Builds a formula from DIMACS integer clauses. Panics on 0.
pub fn formula(clauses: &[&[i32]]) -> Formula {
    clauses.iter().map(|c| Clause::from_ints(c)).collect()
}
