//! Proof steps and refutations.

use alloc::vec::Vec;
use core::fmt;

use crate::clause::Clause;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum StepKind {
    Add,
    Delete,
}

/// One operation-clause pair of a clausal proof.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProofStep {
    pub kind: StepKind,
    pub clause: Clause,
}

impl ProofStep {
    pub fn add(clause: Clause) -> ProofStep {
        ProofStep {
            kind: StepKind::Add,
            clause,
        }
    }

    pub fn delete(clause: Clause) -> ProofStep {
        ProofStep {
            kind: StepKind::Delete,
            clause,
        }
    }

    pub fn is_add(&self) -> bool {
        self.kind == StepKind::Add
    }

    /// True for `(Add, ∅)`.
    pub fn is_empty_addition(&self) -> bool {
        self.is_add() && self.clause.is_empty()
    }

    /// Length in bytes of the ASCII DRAT line for this step, newline included.
    pub fn serialized_len(&self) -> usize {
        let mut counter = ByteCounter(0);
        // Writing into a counter cannot fail.
        let _ = fmt::write(&mut counter, format_args!("{self}"));
        counter.0 + 1
    }
}

/// The ASCII DRAT line for this step, without the trailing newline.
impl fmt::Display for ProofStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kind == StepKind::Delete {
            f.write_str("d ")?;
        }
        for l in self.clause.literals() {
            write!(f, "{l} ")?;
        }
        f.write_str("0")
    }
}

struct ByteCounter(usize);

impl fmt::Write for ByteCounter {
    fn write_str(&mut self, s: &str) -> fmt::Result {
        self.0 += s.len();
        Ok(())
    }
}

/// An ordered sequence of proof steps. Whether it is actually a refutation of some
/// formula is for the checker to decide.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Refutation {
    steps: Vec<ProofStep>,
}

impl Refutation {
    pub fn new() -> Refutation {
        Refutation::default()
    }

    pub fn steps(&self) -> &[ProofStep] {
        &self.steps
    }

    pub fn into_steps(self) -> Vec<ProofStep> {
        self.steps
    }

    pub fn push(&mut self, step: ProofStep) {
        self.steps.push(step);
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, ProofStep> {
        self.steps.iter()
    }

    pub fn additions(&self) -> impl Iterator<Item = &Clause> + '_ {
        self.steps.iter().filter(|s| s.is_add()).map(|s| &s.clause)
    }

    pub fn ends_with_empty_clause(&self) -> bool {
        self.steps.last().is_some_and(ProofStep::is_empty_addition)
    }

    /// Size of the ASCII DRAT serialization in bytes.
    pub fn serialized_len(&self) -> usize {
        self.steps.iter().map(ProofStep::serialized_len).sum()
    }
}

impl From<Vec<ProofStep>> for Refutation {
    fn from(steps: Vec<ProofStep>) -> Self {
        Refutation { steps }
    }
}

impl FromIterator<ProofStep> for Refutation {
    fn from_iter<I: IntoIterator<Item = ProofStep>>(iter: I) -> Self {
        Refutation {
            steps: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a Refutation {
    type Item = &'a ProofStep;
    type IntoIter = core::slice::Iter<'a, ProofStep>;

    fn into_iter(self) -> Self::IntoIter {
        self.steps.iter()
    }
}

impl IntoIterator for Refutation {
    type Item = ProofStep;
    type IntoIter = alloc::vec::IntoIter<ProofStep>;

    fn into_iter(self) -> Self::IntoIter {
        self.steps.into_iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn display_matches_drat_lines() {
        assert_eq!(ProofStep::add(Clause::empty()).to_string(), "0");
        assert_eq!(
            ProofStep::delete(Clause::from_ints(&[1, -2])).to_string(),
            "d 1 -2 0"
        );
        assert_eq!(ProofStep::add(Clause::from_ints(&[2, -1])).to_string(), "2 -1 0");
    }

    #[test]
    fn serialized_len_counts_newline() {
        assert_eq!(ProofStep::add(Clause::empty()).serialized_len(), 2);
        assert_eq!(ProofStep::delete(Clause::from_ints(&[-12])).serialized_len(), 8);
        let r: Refutation = [
            ProofStep::add(Clause::from_ints(&[1])),
            ProofStep::add(Clause::empty()),
        ]
        .into_iter()
        .collect();
        assert_eq!(r.serialized_len(), 6);
        assert!(r.ends_with_empty_clause());
    }
}
