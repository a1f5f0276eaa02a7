//! Cubes (decision literals of a sub-problem) and bundles of sub-problem refutations.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::formula::Formula;
use crate::lit::{Literal, Var};
use crate::proof::Refutation;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("variable {0} is decided twice in one cube")]
pub struct DuplicateVariable(pub Var);

/// The decision literals of a sub-problem in decision order. Its depth is its length.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cube {
    literals: Vec<Literal>,
}

impl Cube {
    /// The empty cube of the unsplit root problem.
    pub fn root() -> Cube {
        Cube::default()
    }

    pub fn new(literals: Vec<Literal>) -> Result<Cube, DuplicateVariable> {
        let mut seen = BTreeSet::new();
        for l in &literals {
            if !seen.insert(l.var()) {
                return Err(DuplicateVariable(l.var()));
            }
        }
        Ok(Cube { literals })
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn depth(&self) -> usize {
        self.literals.len()
    }

    pub fn decides(&self, var: Var) -> bool {
        self.literals.iter().any(|l| l.var() == var)
    }

    /// This cube followed by one more decision.
    pub fn extended(&self, l: Literal) -> Result<Cube, DuplicateVariable> {
        if self.decides(l.var()) {
            return Err(DuplicateVariable(l.var()));
        }
        let mut literals = self.literals.clone();
        literals.push(l);
        Ok(Cube { literals })
    }

    /// The sub-problem instance: `formula` plus one unit clause per decision.
    pub fn instance(&self, formula: &Formula) -> Formula {
        formula.with_units(self.literals.iter().copied())
    }
}

impl fmt::Debug for Cube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for Cube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The original instance together with one refutation per sub-problem cube.
#[derive(Clone, Debug, Default)]
pub struct ProofBundle {
    pub instance: Formula,
    pub entries: Vec<(Cube, Refutation)>,
}
