//! Exhaustive truth-table evaluation for small formulas.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::formula::Formula;
use crate::lit::Var;

pub const MAX_ORACLE_VARIABLES: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("{0} variables are too many for a truth table (limit {MAX_ORACLE_VARIABLES})")]
pub struct TooManyVariables(pub usize);

/// Returns a satisfying assignment of the formula's variables, or `None` when every
/// assignment falsifies some clause.
pub fn truth_table_model(formula: &Formula) -> Result<Option<BTreeMap<Var, bool>>, TooManyVariables> {
    let vars: Vec<Var> = formula.variables().into_iter().collect();
    if vars.len() > MAX_ORACLE_VARIABLES {
        return Err(TooManyVariables(vars.len()));
    }
    let index = |v: Var| vars.binary_search(&v).expect("variable of the formula") as u32;
    // A clause is false under `a` exactly when `a & mask == falsifying`.
    let clauses: Vec<(u32, u32)> = formula
        .iter()
        .map(|(c, _)| {
            c.literals().iter().fold((0, 0), |(mask, neg), l| {
                let bit = 1 << index(l.var());
                (mask | bit, if l.is_positive() { neg } else { neg | bit })
            })
        })
        .collect();
    let model = (0..1u32 << vars.len()).find(|&a| clauses.iter().all(|&(m, n)| a & m != n));
    Ok(model.map(|a| {
        vars.iter()
            .enumerate()
            .map(|(i, &v)| (v, a >> i & 1 == 1))
            .collect()
    }))
}

pub fn truth_table_satisfiable(formula: &Formula) -> Result<bool, TooManyVariables> {
    truth_table_model(formula).map(|m| m.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::formula;

    #[test]
    fn small_cases() {
        assert_eq!(truth_table_satisfiable(&formula(&[&[1], &[-1]])), Ok(false));
        assert_eq!(truth_table_satisfiable(&formula(&[&[-1], &[2, 3], &[-2, 3]])), Ok(true));
        assert_eq!(truth_table_satisfiable(&formula(&[&[]])), Ok(false));
        assert_eq!(truth_table_satisfiable(&Formula::new()), Ok(true));
        let model = truth_table_model(&formula(&[&[-1], &[2, 3], &[-2, 3]])).unwrap().unwrap();
        assert!(!model[&Var::new(1).unwrap()]);
        assert!(model[&Var::new(3).unwrap()]);
    }
}
