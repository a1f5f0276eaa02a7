#![allow(dead_code)]

use drat_stitch_core::{Clause, Formula, Literal};
use proptest::prelude::*;

/// Literal in `±1..=±vars`.
pub fn literal(vars: i32) -> impl Strategy<Value = i32> {
    (1..=vars, any::<bool>()).prop_map(|(v, pos)| if pos { v } else { -v })
}

pub fn clause(vars: i32, max_len: usize) -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec(literal(vars), 0..=max_len)
}

pub fn formula(vars: i32, max_clauses: usize, max_len: usize) -> impl Strategy<Value = Vec<Vec<i32>>> {
    prop::collection::vec(clause(vars, max_len), 0..=max_clauses)
}

/// Drops duplicate literals so the input is a valid clause.
pub fn to_clause(c: &[i32]) -> Clause {
    let mut seen = Vec::new();
    for &x in c {
        if !seen.contains(&x) {
            seen.push(x);
        }
    }
    Clause::from_ints(&seen)
}

pub fn to_formula(cs: &[Vec<i32>]) -> Formula {
    cs.iter().map(|c| to_clause(c)).collect()
}

/// Straightforward enumeration over variables `1..=vars`.
pub fn satisfied_by(c: &Clause, assignment: u32) -> bool {
    c.literals().iter().any(|l: &Literal| {
        let bit = assignment >> (l.var().index() - 1) & 1 == 1;
        bit == l.is_positive()
    })
}

pub fn models(f: &Formula, vars: u32) -> impl Iterator<Item = u32> + '_ {
    (0..1u32 << vars).filter(move |&a| f.occurrences().all(|c| satisfied_by(c, a)))
}

pub fn is_sat(f: &Formula, vars: u32) -> bool {
    models(f, vars).next().is_some()
}

/// Every model of `f` satisfies `c`.
pub fn entails(f: &Formula, c: &Clause, vars: u32) -> bool {
    models(f, vars).all(|a| satisfied_by(c, a))
}
