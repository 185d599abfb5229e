use serde::{Deserialize, Serialize};

use crate::alpha::ceil_log;
use crate::error::{Error, Result};

/// Which of the two trees of a subdivision path a blueprint is for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityRole {
    Odd,
    EvenJ1,
    EvenJ2,
}

/// A path hanging from the root whose far end carries a branching tree.
///
/// Nodes are numbered in breadth-first order with the root as node 0, so
/// every parent precedes its children.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeBlueprint {
    pub role: ParityRole,
    pub sigma: usize,
    pub degree: usize,
    pub path_length: usize,
    pub branch_height: usize,
    pub leaf_target: usize,
    pub parent: Vec<Option<usize>>,
    pub depth: Vec<usize>,
    pub leaves: Vec<usize>,
}

impl TreeBlueprint {
    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    /// Distance from the root to every leaf.
    pub fn height(&self) -> usize {
        self.path_length + self.branch_height
    }

    /// Nodes from the root down to `node`, inclusive.
    pub fn path_to(&self, node: usize) -> Vec<usize> {
        let mut out = vec![node];
        let mut cur = node;
        while let Some(p) = self.parent[cur] {
            out.push(p);
            cur = p;
        }
        out.reverse();
        out
    }

    pub fn children_count(&self, node: usize) -> usize {
        self.parent.iter().filter(|&&p| p == Some(node)).count()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.node_count())
            .map(|v| self.children_count(v) + usize::from(self.parent[v].is_some()))
            .max()
            .unwrap_or(0)
    }
}

/// Length of the hanging path for a role, or the shortest admissible `σ`.
pub fn path_length(sigma: usize, role: ParityRole, k: usize) -> Result<usize> {
    let (parity_ok, needed) = match role {
        ParityRole::Odd => (sigma % 2 == 1, 2 * k + 1),
        ParityRole::EvenJ1 | ParityRole::EvenJ2 => (sigma.is_multiple_of(2), 2 * k + 2),
    };
    if !parity_ok {
        return Err(Error::InvalidParameter(format!(
            "role {role:?} does not match the parity of path length {sigma}"
        )));
    }
    if sigma < needed {
        return Err(Error::SigmaTooShort { sigma, needed });
    }
    Ok(match role {
        ParityRole::Odd => (sigma - 2 * k - 1) / 2,
        ParityRole::EvenJ1 => sigma / 2 - k - 1,
        ParityRole::EvenJ2 => sigma / 2 - k,
    })
}

/// Height of the branching part: least `k` with `(D-1)^k ≥ leaf_target`.
pub fn branch_height(degree: usize, leaf_target: usize) -> Result<usize> {
    if degree <= 2 {
        return Err(Error::DegreeTooSmall(degree));
    }
    Ok(ceil_log(degree as u64 - 1, leaf_target as u64) as usize)
}

pub fn build_tree_blueprint(
    sigma: usize,
    role: ParityRole,
    degree: usize,
    leaf_target: usize,
) -> Result<TreeBlueprint> {
    if leaf_target == 0 {
        return Err(Error::InvalidParameter(
            "leaf_target must be positive".into(),
        ));
    }
    let k = branch_height(degree, leaf_target)?;
    let len = path_length(sigma, role, k)?;
    let mut parent = vec![None];
    let mut depth = vec![0];
    for i in 1..=len {
        parent.push(Some(i - 1));
        depth.push(i);
    }
    // leftmost filling: a node at branch depth d and position p keeps child c
    // when some leaf below it has position < leaf_target
    let arity = degree - 1;
    let mut level: Vec<(usize, usize)> = vec![(len, 0)];
    for d in 0..k {
        let span = arity.pow((k - d - 1) as u32);
        let mut next = Vec::new();
        for &(node, pos) in &level {
            for c in 0..arity {
                let cp = pos * arity + c;
                if cp * span >= leaf_target {
                    break;
                }
                parent.push(Some(node));
                depth.push(len + d + 1);
                next.push((parent.len() - 1, cp));
            }
        }
        level = next;
    }
    let leaves = level.into_iter().map(|(v, _)| v).collect();
    Ok(TreeBlueprint {
        role,
        sigma,
        degree,
        path_length: len,
        branch_height: k,
        leaf_target,
        parent,
        depth,
        leaves,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_example() {
        let t = build_tree_blueprint(5, ParityRole::Odd, 3, 2).unwrap();
        assert_eq!((t.branch_height, t.path_length), (1, 1));
        assert_eq!(t.leaves.len(), 2);
        assert!(t.leaves.iter().all(|&l| t.depth[l] == 2));
        assert_eq!(t.parent, vec![None, Some(0), Some(1), Some(1)]);
    }

    #[test]
    fn even_pair_assembles_to_sigma() {
        let a = build_tree_blueprint(8, ParityRole::EvenJ1, 3, 2).unwrap();
        let b = build_tree_blueprint(8, ParityRole::EvenJ2, 3, 2).unwrap();
        assert_eq!((a.path_length, b.path_length), (2, 3));
        assert_eq!((a.height(), b.height()), (3, 4));
        assert_eq!(a.height() + b.height() + 1, 8);
    }

    #[test]
    fn rejects_short_and_low_degree() {
        assert!(matches!(
            build_tree_blueprint(3, ParityRole::Odd, 3, 4),
            Err(Error::SigmaTooShort {
                sigma: 3,
                needed: 5
            })
        ));
        assert!(matches!(
            build_tree_blueprint(9, ParityRole::Odd, 2, 4),
            Err(Error::DegreeTooSmall(2))
        ));
    }

    #[test]
    fn leftmost_filling_is_exact() {
        for d in 3..=6 {
            for target in 1..=40 {
                let t = build_tree_blueprint(41, ParityRole::Odd, d, target).unwrap();
                assert_eq!(t.leaves.len(), target);
                assert!(t.leaves.iter().all(|&l| t.depth[l] == t.height()));
                assert!(t.max_degree() <= d);
                assert!((d - 1).pow(t.branch_height as u32) >= target);
                assert_eq!(2 * t.height() + 1, 41);
            }
        }
    }
}
