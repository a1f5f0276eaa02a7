//! Variables and literals.

use core::fmt;
use core::num::NonZeroI32;
use core::ops::Neg;

/// A propositional variable, numbered from 1 as in DIMACS.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u32);

impl Var {
    /// Returns `None` for 0 and for indices that do not fit a signed DIMACS literal.
    pub fn new(index: u32) -> Option<Var> {
        if index == 0 || index > i32::MAX as u32 {
            None
        } else {
            Some(Var(index))
        }
    }

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn positive(self) -> Literal {
        Literal(NonZeroI32::new(self.0 as i32).unwrap())
    }

    pub fn negative(self) -> Literal {
        -self.positive()
    }

    pub fn literal(self, polarity: bool) -> Literal {
        if polarity {
            self.positive()
        } else {
            self.negative()
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A literal in DIMACS encoding: the magnitude is the variable, the sign the polarity.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal(NonZeroI32);

impl Literal {
    /// Returns `None` for 0 (the clause terminator) and for `i32::MIN`, whose negation
    /// is not representable.
    pub fn new(value: i32) -> Option<Literal> {
        if value == i32::MIN {
            return None;
        }
        NonZeroI32::new(value).map(Literal)
    }

    pub fn value(self) -> i32 {
        self.0.get()
    }

    pub fn var(self) -> Var {
        Var(self.0.get().unsigned_abs())
    }

    pub fn is_positive(self) -> bool {
        self.0.get() > 0
    }

    pub fn negate(self) -> Literal {
        -self
    }

    /// Dense index usable for per-literal tables: `2 * var + (negative as usize)`.
    pub fn code(self) -> usize {
        2 * self.var().index() as usize + usize::from(!self.is_positive())
    }
}

impl Neg for Literal {
    type Output = Literal;

    fn neg(self) -> Literal {
        // i32::MIN is rejected at construction, so the negation cannot overflow.
        Literal(NonZeroI32::new(-self.0.get()).unwrap())
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Shorthand for tests and fixtures. Panics on 0.
pub fn lit(value: i32) -> Literal {
    Literal::new(value).expect("literal must be nonzero")
}
