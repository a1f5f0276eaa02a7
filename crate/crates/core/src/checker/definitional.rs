//! Unit propagation computed directly on multisets, one `F →ℓ F'` step at a time.
//!
//! This is deliberately slow and literal. It is the reference the indexed engine is
//! tested against.

use alloc::vec::Vec;

use crate::clause::Clause;
use crate::formula::Formula;
use crate::lit::Literal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("literal {0} is not derivable by one unit propagation step")]
pub struct NotUnit(pub Literal);

/// `F →ℓ F'` with `F' = {C ∖ {¬ℓ} : C ∈ F, ℓ ∉ C} ∪ {ℓ}`, provided some clause
/// `{ℓ, ℓ₁, …, ℓₖ}` of `F` has every `{¬ℓᵢ}` in `F`.
pub fn propagate_step(f: &Formula, l: Literal) -> Result<Formula, NotUnit> {
    if !is_unit_in(f, l) {
        return Err(NotUnit(l));
    }
    let mut next = Formula::new();
    for (c, &m) in f.iter() {
        if c.contains(l) {
            continue;
        }
        let reduced = c.without(-l);
        for _ in 0..m {
            next.add(reduced.clone());
        }
    }
    next.add(Clause::new([l]));
    Ok(next)
}

fn is_unit_in(f: &Formula, l: Literal) -> bool {
    f.iter().any(|(c, _)| {
        c.contains(l)
            && c
                .literals()
                .iter()
                .filter(|&&m| m != l)
                .all(|&m| f.contains(&Clause::new([-m])))
    })
}

/// Literals on which `f` can take one propagation step that changes it, in ascending
/// literal order.
pub fn propagatable(f: &Formula) -> Vec<Literal> {
    let mut candidates: Vec<Literal> = f
        .iter()
        .flat_map(|(c, _)| c.literals().iter().copied())
        .collect();
    candidates.sort_unstable();
    candidates.dedup();
    candidates
        .into_iter()
        .filter(|&l| match propagate_step(f, l) {
            Ok(next) => next != *f,
            Err(_) => false,
        })
        .collect()
}

/// Result of propagating a formula to its fixpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropagationOutcome {
    Fixpoint(Formula),
    Conflict,
}

/// Applies `→` until nothing changes, letting `choose` pick among the applicable
/// literals (given in ascending order) at each step. Stops early once `∅` appears.
pub fn fixpoint_by_definition<C>(f: &Formula, mut choose: C) -> PropagationOutcome
where
    C: FnMut(&[Literal]) -> usize,
{
    let empty = Clause::empty();
    let mut current = f.clone();
    loop {
        if current.contains(&empty) {
            return PropagationOutcome::Conflict;
        }
        let options = propagatable(&current);
        if options.is_empty() {
            return PropagationOutcome::Fixpoint(current);
        }
        let pick = options[choose(&options) % options.len()];
        current = propagate_step(&current, pick).expect("candidate was applicable");
    }
}
