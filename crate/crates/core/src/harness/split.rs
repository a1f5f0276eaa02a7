//! Occurrence-count splitting into a full binary cube tree.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::cube::Cube;
use crate::formula::Formula;
use crate::lit::Var;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("cannot split {variables} variables to depth {depth}")]
pub struct DepthTooLarge {
    pub depth: usize,
    pub variables: usize,
}

/// The `depth` variables with the most occurrences, most frequent first; ties go to
/// the lower index.
pub fn split_variables(formula: &Formula, depth: usize) -> Result<Vec<Var>, DepthTooLarge> {
    let mut counts: BTreeMap<Var, usize> = BTreeMap::new();
    for clause in formula.occurrences() {
        for l in clause.literals() {
            *counts.entry(l.var()).or_default() += 1;
        }
    }
    if depth > counts.len() {
        return Err(DepthTooLarge {
            depth,
            variables: counts.len(),
        });
    }
    let mut ranked: Vec<(Var, usize)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    Ok(ranked.into_iter().take(depth).map(|(v, _)| v).collect())
}

/// All `2^depth` cubes over the split variables, positive branches first. Depth 0
/// gives the single root cube.
pub fn split(formula: &Formula, depth: usize) -> Result<Vec<Cube>, DepthTooLarge> {
    let vars = split_variables(formula, depth)?;
    let mut cubes = alloc::vec![Cube::root()];
    for v in vars {
        cubes = cubes
            .into_iter()
            .flat_map(|c| {
                [v.positive(), v.negative()]
                    .map(|l| c.extended(l).expect("split variables are distinct"))
            })
            .collect();
    }
    Ok(cubes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::formula;
    use crate::lit::lit;
    use crate::proof::Refutation;
    use crate::stitcher::build_cube_tree;

    #[test]
    fn most_frequent_variable_first() {
        let f = formula(&[&[1, 2], &[-1, 3], &[1, -2]]);
        let cubes = split(&f, 1).unwrap();
        assert_eq!(cubes.len(), 2);
        assert_eq!(cubes[0].literals(), &[lit(1)]);
        assert_eq!(cubes[1].literals(), &[lit(-1)]);
    }

    #[test]
    fn ties_go_to_lower_index() {
        let f = formula(&[&[3, 2], &[-3, -2]]);
        assert_eq!(split_variables(&f, 2).unwrap(), alloc::vec![Var::new(2).unwrap(), Var::new(3).unwrap()]);
    }

    #[test]
    fn full_tree() {
        let f = formula(&[&[1, 2, 3], &[-1, 2], &[-2, 3]]);
        let cubes = split(&f, 2).unwrap();
        assert_eq!(cubes.len(), 4);
        let first = cubes[0].literals()[0].var();
        assert!(cubes.iter().all(|c| c.literals()[0].var() == first));
        build_cube_tree(cubes.into_iter().map(|c| (c, Refutation::new())).collect()).unwrap();
        assert_eq!(split(&f, 0).unwrap(), alloc::vec![Cube::root()]);
        assert_eq!(split(&f, 4), Err(DepthTooLarge { depth: 4, variables: 3 }));
    }
}
