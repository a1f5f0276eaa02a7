//! Depth-ordered schedule of stitching jobs.

use alloc::vec::Vec;

use super::tree::{CubeNode, CubeTree, NodeId};
use crate::lit::Var;

/// Combines the refutations of `pos` and `neg` into one for `node`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StitchJob {
    pub node: NodeId,
    pub depth: usize,
    pub decision: Var,
    pub pos: NodeId,
    pub neg: NodeId,
}

/// Jobs grouped by depth, deepest group first. A group only starts after every deeper
/// group has finished; jobs inside a group touch disjoint nodes and may run in parallel.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StitchPlan {
    pub levels: Vec<Vec<StitchJob>>,
}

impl StitchPlan {
    pub fn for_tree(tree: &CubeTree) -> StitchPlan {
        let mut jobs: Vec<StitchJob> = tree
            .nodes()
            .iter()
            .enumerate()
            .filter_map(|(node, n)| match n {
                CubeNode::Inner { cube, var, pos, neg } => Some(StitchJob {
                    node,
                    depth: cube.depth(),
                    decision: *var,
                    pos: *pos,
                    neg: *neg,
                }),
                CubeNode::Leaf { .. } => None,
            })
            .collect();
        jobs.sort_by(|a, b| b.depth.cmp(&a.depth).then(a.node.cmp(&b.node)));
        let mut levels: Vec<Vec<StitchJob>> = Vec::new();
        for job in jobs {
            match levels.last_mut() {
                Some(level) if level[0].depth == job.depth => level.push(job),
                _ => levels.push(alloc::vec![job]),
            }
        }
        StitchPlan { levels }
    }

    pub fn job_count(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::Cube;
    use crate::lit::lit;
    use crate::proof::Refutation;
    use crate::stitcher::tree::build_cube_tree;

    fn tree(cubes: &[&[i32]]) -> CubeTree {
        build_cube_tree(
            cubes
                .iter()
                .map(|c| {
                    (
                        Cube::new(c.iter().map(|&x| lit(x)).collect()).unwrap(),
                        Refutation::new(),
                    )
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn balanced_tree_has_two_levels() {
        let t = tree(&[&[1, 2], &[1, -2], &[-1, 3], &[-1, -3]]);
        let plan = StitchPlan::for_tree(&t);
        assert_eq!(plan.levels.len(), 2);
        assert_eq!(plan.levels[0].len(), 2);
        assert!(plan.levels[0].iter().all(|j| j.depth == 1));
        assert_eq!(plan.levels[1].len(), 1);
        assert_eq!(plan.levels[1][0].node, t.root());
        assert_eq!(plan.job_count(), 3);
    }

    #[test]
    fn deeper_jobs_come_first_and_share_no_operands() {
        let t = tree(&[&[1, 2, 3], &[1, 2, -3], &[1, -2], &[-1, 4], &[-1, -4]]);
        let plan = StitchPlan::for_tree(&t);
        let depths: Vec<Vec<usize>> = plan
            .levels
            .iter()
            .map(|l| l.iter().map(|j| j.depth).collect())
            .collect();
        assert_eq!(depths, alloc::vec![alloc::vec![2], alloc::vec![1, 1], alloc::vec![0]]);
        for level in &plan.levels {
            let mut operands: Vec<NodeId> = level.iter().flat_map(|j| [j.pos, j.neg]).collect();
            let n = operands.len();
            operands.sort_unstable();
            operands.dedup();
            assert_eq!(operands.len(), n);
        }
    }

    #[test]
    fn single_leaf_has_no_jobs() {
        assert!(StitchPlan::for_tree(&tree(&[&[]])).levels.is_empty());
    }
}
