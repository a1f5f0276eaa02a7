//! Rebuilding the solver's binary decision tree from the cubes of its sub-problems.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::cube::Cube;
use crate::lit::{Literal, Var};
use crate::proof::Refutation;

pub type NodeId = usize;

#[derive(Debug, Clone)]
pub enum CubeNode {
    Leaf {
        cube: Cube,
        refutation: Refutation,
    },
    /// `pos` extends `cube` with `var`, `neg` with its negation.
    Inner {
        cube: Cube,
        var: Var,
        pos: NodeId,
        neg: NodeId,
    },
}

impl CubeNode {
    pub fn cube(&self) -> &Cube {
        match self {
            CubeNode::Leaf { cube, .. } | CubeNode::Inner { cube, .. } => cube,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, CubeNode::Leaf { .. })
    }
}

/// A full binary decision tree stored as an arena. Children always precede their parent,
/// so the root is the last node.
#[derive(Debug, Clone)]
pub struct CubeTree {
    nodes: Vec<CubeNode>,
}

impl CubeTree {
    pub fn root(&self) -> NodeId {
        self.nodes.len() - 1
    }

    pub fn node(&self, id: NodeId) -> &CubeNode {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[CubeNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn leaves(&self) -> impl Iterator<Item = (NodeId, &Cube)> + '_ {
        self.nodes.iter().enumerate().filter_map(|(id, n)| match n {
            CubeNode::Leaf { cube, .. } => Some((id, cube)),
            CubeNode::Inner { .. } => None,
        })
    }

    /// Largest number of nodes sharing one depth.
    pub fn widest_level(&self) -> usize {
        let mut per_depth: Vec<usize> = Vec::new();
        for n in &self.nodes {
            let d = n.cube().depth();
            if per_depth.len() <= d {
                per_depth.resize(d + 1, 0);
            }
            per_depth[d] += 1;
        }
        per_depth.into_iter().max().unwrap_or(0)
    }

    /// Moves the leaf refutations out, leaving empty ones behind.
    pub(crate) fn take_leaf_refutations(&mut self) -> Vec<(NodeId, Cube, Refutation)> {
        let mut out = Vec::new();
        for (id, n) in self.nodes.iter_mut().enumerate() {
            if let CubeNode::Leaf { cube, refutation } = n {
                out.push((id, cube.clone(), core::mem::take(refutation)));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("no sub-problem refutations were given")]
    Empty,
    #[error("cube {0} occurs more than once")]
    DuplicateCube(Cube),
    /// Cubes below one node do not all decide the same variable next.
    #[error("sub-problems below {cube} do not partition the search space: they decide different variables {variables:?} next")]
    IncompletePartition { cube: Cube, variables: Vec<Var> },
    #[error("sub-problems below {cube} decide {present} but nothing covers its negation")]
    MissingSibling { cube: Cube, present: Literal },
    /// A cube is a strict prefix of another one.
    #[error("cube {cube} is both a sub-problem and the prefix of deeper sub-problems")]
    InconsistentDecisionOrder { cube: Cube },
}

/// Reconstructs the decision tree whose leaves are exactly the given cubes.
pub fn build_cube_tree(entries: Vec<(Cube, Refutation)>) -> Result<CubeTree, TreeError> {
    if entries.is_empty() {
        return Err(TreeError::Empty);
    }
    let mut seen = BTreeSet::new();
    for (cube, _) in &entries {
        if !seen.insert(cube) {
            return Err(TreeError::DuplicateCube(cube.clone()));
        }
    }
    let mut nodes = Vec::new();
    build(Cube::root(), entries, &mut nodes)?;
    Ok(CubeTree { nodes })
}

fn build(
    prefix: Cube,
    mut entries: Vec<(Cube, Refutation)>,
    nodes: &mut Vec<CubeNode>,
) -> Result<NodeId, TreeError> {
    let depth = prefix.depth();
    if entries.iter().any(|(c, _)| c.depth() == depth) {
        if entries.len() > 1 {
            return Err(TreeError::InconsistentDecisionOrder { cube: prefix });
        }
        let (cube, refutation) = entries.pop().expect("one entry");
        nodes.push(CubeNode::Leaf { cube, refutation });
        return Ok(nodes.len() - 1);
    }

    let next = |c: &Cube| c.literals()[depth];
    let mut variables: Vec<Var> = entries.iter().map(|(c, _)| next(c).var()).collect();
    variables.sort_unstable();
    variables.dedup();
    if variables.len() > 1 {
        return Err(TreeError::IncompletePartition {
            cube: prefix,
            variables,
        });
    }
    let var = variables[0];
    let (pos, neg): (Vec<_>, Vec<_>) = entries
        .into_iter()
        .partition(|(c, _)| next(c).is_positive());
    if pos.is_empty() || neg.is_empty() {
        return Err(TreeError::MissingSibling {
            cube: prefix,
            present: var.literal(!pos.is_empty()),
        });
    }
    let pos_cube = prefix.extended(var.positive()).expect("cubes never repeat a variable");
    let neg_cube = prefix.extended(var.negative()).expect("cubes never repeat a variable");
    let pos = build(pos_cube, pos, nodes)?;
    let neg = build(neg_cube, neg, nodes)?;
    nodes.push(CubeNode::Inner {
        cube: prefix,
        var,
        pos,
        neg,
    });
    Ok(nodes.len() - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lit::lit;
    use alloc::vec;

    fn cube(v: &[i32]) -> Cube {
        Cube::new(v.iter().map(|&x| lit(x)).collect()).unwrap()
    }

    fn entries(cubes: &[&[i32]]) -> Vec<(Cube, Refutation)> {
        cubes.iter().map(|c| (cube(c), Refutation::new())).collect()
    }

    #[test]
    fn imbalanced_tree() {
        let tree = build_cube_tree(entries(&[&[1, 2], &[1, -2], &[-1]])).unwrap();
        let CubeNode::Inner { var, pos, neg, .. } = tree.node(tree.root()) else {
            panic!("root must be inner");
        };
        assert_eq!(var.index(), 1);
        let CubeNode::Inner { var: v2, pos: a, neg: b, cube } = tree.node(*pos) else {
            panic!("positive child must be inner");
        };
        assert_eq!(v2.index(), 2);
        assert_eq!(cube, &self::cube(&[1]));
        assert_eq!(tree.node(*a).cube(), &self::cube(&[1, 2]));
        assert_eq!(tree.node(*b).cube(), &self::cube(&[1, -2]));
        assert!(tree.node(*neg).is_leaf());
        assert_eq!(tree.node(*neg).cube(), &self::cube(&[-1]));
        assert_eq!(tree.leaves().count(), 3);
        assert_eq!(tree.widest_level(), 2);
    }

    #[test]
    fn different_variables_are_an_incomplete_partition() {
        assert_eq!(
            build_cube_tree(entries(&[&[1], &[-2]])).unwrap_err(),
            TreeError::IncompletePartition {
                cube: Cube::root(),
                variables: vec![Var::new(1).unwrap(), Var::new(2).unwrap()],
            }
        );
    }

    #[test]
    fn lone_cube_misses_its_sibling() {
        assert_eq!(
            build_cube_tree(entries(&[&[1]])).unwrap_err(),
            TreeError::MissingSibling {
                cube: Cube::root(),
                present: lit(1),
            }
        );
        assert!(matches!(
            build_cube_tree(entries(&[&[1, 2], &[1, -2], &[-1, 3]])),
            Err(TreeError::MissingSibling { .. })
        ));
    }

    #[test]
    fn prefix_cubes_are_inconsistent() {
        assert!(matches!(
            build_cube_tree(entries(&[&[1], &[1, 2], &[1, -2], &[-1]])),
            Err(TreeError::InconsistentDecisionOrder { .. })
        ));
        assert!(matches!(
            build_cube_tree(entries(&[&[1], &[1], &[-1]])),
            Err(TreeError::DuplicateCube(_))
        ));
        assert_eq!(build_cube_tree(Vec::new()).unwrap_err(), TreeError::Empty);
    }

    #[test]
    fn root_cube_is_a_single_leaf() {
        let tree = build_cube_tree(entries(&[&[]])).unwrap();
        assert_eq!(tree.len(), 1);
        assert!(tree.node(tree.root()).is_leaf());
    }
}
