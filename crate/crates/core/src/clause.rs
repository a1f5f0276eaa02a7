//! Clauses as sets of literals that remember a serialization order.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::hash::{Hash, Hasher};

use crate::lit::Literal;

/// A clause: a finite set of literals.
///
/// Identity (equality, ordering, hashing) is set identity. The literal order a clause was
/// built with is kept for serialization, and its first literal is the RAT pivot.
#[derive(Clone)]
pub struct Clause {
    ordered: Vec<Literal>,
    sorted: Vec<Literal>,
}

impl Clause {
    pub fn empty() -> Clause {
        Clause {
            ordered: Vec::new(),
            sorted: Vec::new(),
        }
    }

    /// Builds a clause, silently dropping repeated literals (first occurrence wins).
    pub fn new<I: IntoIterator<Item = Literal>>(literals: I) -> Clause {
        Self::with_duplicate_count(literals).0
    }

    /// Like [`Clause::new`], also reporting how many repeated literals were dropped.
    pub fn with_duplicate_count<I: IntoIterator<Item = Literal>>(literals: I) -> (Clause, usize) {
        let mut ordered: Vec<Literal> = Vec::new();
        let mut sorted: Vec<Literal> = Vec::new();
        let mut duplicates = 0;
        for l in literals {
            match sorted.binary_search(&l) {
                Ok(_) => duplicates += 1,
                Err(pos) => {
                    sorted.insert(pos, l);
                    ordered.push(l);
                }
            }
        }
        (Clause { ordered, sorted }, duplicates)
    }

    /// Builds a clause from DIMACS integers. Panics on 0.
    pub fn from_ints(values: &[i32]) -> Clause {
        Clause::new(values.iter().map(|&v| crate::lit::lit(v)))
    }

    /// Literals in serialization order.
    pub fn literals(&self) -> &[Literal] {
        &self.ordered
    }

    /// Literals in ascending order; the canonical form used for identity.
    pub fn sorted_literals(&self) -> &[Literal] {
        &self.sorted
    }

    /// The first serialized literal; `None` for the empty clause.
    pub fn pivot(&self) -> Option<Literal> {
        self.ordered.first().copied()
    }

    pub fn len(&self) -> usize {
        self.ordered.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordered.is_empty()
    }

    pub fn contains(&self, l: Literal) -> bool {
        self.sorted.binary_search(&l).is_ok()
    }

    pub fn is_tautology(&self) -> bool {
        self.ordered.iter().any(|&l| self.contains(-l))
    }

    /// Set union with a single literal, placed last. A no-op if `l` is already present.
    pub fn with_appended(&self, l: Literal) -> Clause {
        if self.contains(l) {
            return self.clone();
        }
        let mut c = self.clone();
        c.ordered.push(l);
        let pos = c.sorted.binary_search(&l).unwrap_err();
        c.sorted.insert(pos, l);
        c
    }

    /// Set difference with a single literal.
    pub fn without(&self, l: Literal) -> Clause {
        if !self.contains(l) {
            return self.clone();
        }
        Clause {
            ordered: self.ordered.iter().copied().filter(|&m| m != l).collect(),
            sorted: self.sorted.iter().copied().filter(|&m| m != l).collect(),
        }
    }

    /// Set union; literals of `self` keep their order and new ones follow in `other`'s order.
    pub fn union(&self, other: &Clause) -> Clause {
        Clause::new(self.ordered.iter().chain(other.ordered.iter()).copied())
    }
}

impl PartialEq for Clause {
    fn eq(&self, other: &Self) -> bool {
        self.sorted == other.sorted
    }
}

impl Eq for Clause {}

impl PartialOrd for Clause {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Clause {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sorted.cmp(&other.sorted)
    }
}

impl Hash for Clause {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.sorted.hash(state);
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, l) in self.ordered.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("}")
    }
}

impl FromIterator<Literal> for Clause {
    fn from_iter<I: IntoIterator<Item = Literal>>(iter: I) -> Self {
        Clause::new(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lit::lit;

    #[test]
    fn identity_ignores_order() {
        assert_eq!(Clause::from_ints(&[1, 2]), Clause::from_ints(&[2, 1]));
        assert_eq!(Clause::from_ints(&[2, 1]).literals(), &[lit(2), lit(1)]);
    }

    #[test]
    fn duplicates_are_dropped_and_counted() {
        let (c, dups) = Clause::with_duplicate_count([lit(3), lit(-1), lit(3), lit(3)]);
        assert_eq!(c.literals(), &[lit(3), lit(-1)]);
        assert_eq!(dups, 2);
    }

    #[test]
    fn tautologies_are_kept() {
        let c = Clause::from_ints(&[1, -1]);
        assert_eq!(c.len(), 2);
        assert!(c.is_tautology());
    }

    #[test]
    fn appended_literal_goes_last_and_keeps_pivot() {
        let c = Clause::from_ints(&[2, -1]).with_appended(lit(-5));
        assert_eq!(c.literals(), &[lit(2), lit(-1), lit(-5)]);
        assert_eq!(c.pivot(), Some(lit(2)));
        // Union with a literal already present is a no-op.
        let d = c.with_appended(lit(-1));
        assert_eq!(d.literals(), c.literals());
    }

    #[test]
    fn without_removes_one_literal() {
        let c = Clause::from_ints(&[1, 2, 3]).without(lit(2));
        assert_eq!(c.literals(), &[lit(1), lit(3)]);
        assert_eq!(c, Clause::from_ints(&[3, 1]));
    }
}
