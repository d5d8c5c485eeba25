//! Exhaustive generation of small trees.
//!
//! Unordered rooted trees come from the Beyer–Hedetniemi successor rule on
//! canonical level sequences, one tree per isomorphism class. Binary and
//! full binary trees are generated by recursive left/right size splits, one
//! tree per left/right shape.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tree::{NodeId, RootedTree, Side};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TreeClass {
    Rooted,
    Binary,
    FullBinary,
}

impl TreeClass {
    pub fn name(self) -> &'static str {
        match self {
            TreeClass::Rooted => "rooted",
            TreeClass::Binary => "binary",
            TreeClass::FullBinary => "full_binary",
        }
    }

    /// Whether trees of this class exist with `n` nodes.
    pub fn admits(self, n: usize) -> bool {
        match self {
            TreeClass::Rooted | TreeClass::Binary => n >= 1,
            TreeClass::FullBinary => n % 2 == 1,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnumerateError {
    #[error("no {class} trees with {n} nodes")]
    UnsupportedSize { class: &'static str, n: usize },
}

/// All trees of `class` with `n` nodes, in a deterministic order.
pub fn enumerate_trees(
    class: TreeClass,
    n: usize,
) -> Result<Box<dyn Iterator<Item = RootedTree>>, EnumerateError> {
    if !class.admits(n) {
        return Err(EnumerateError::UnsupportedSize {
            class: class.name(),
            n,
        });
    }
    Ok(match class {
        TreeClass::Rooted => Box::new(LevelSequences::new(n)),
        TreeClass::Binary => Box::new(binary_shapes(n).into_iter().map(|s| s.to_tree())),
        TreeClass::FullBinary => Box::new(full_binary_shapes(n).into_iter().map(|s| s.to_tree())),
    })
}

/// Canonical level sequences of rooted trees with `n` nodes, starting from
/// the path and ending with the star.
pub struct LevelSequences {
    levels: Vec<usize>,
    done: bool,
}

impl LevelSequences {
    pub fn new(n: usize) -> Self {
        LevelSequences {
            levels: (0..n).collect(),
            done: n == 0,
        }
    }

    fn advance(&mut self) {
        let levels = &mut self.levels;
        // last position deeper than depth 1
        let Some(p) = levels.iter().rposition(|&d| d > 1) else {
            self.done = true;
            return;
        };
        let q = levels[..p]
            .iter()
            .rposition(|&d| d == levels[p] - 1)
            .expect("parent level exists");
        let period = p - q;
        for i in p..levels.len() {
            levels[i] = levels[i - period];
        }
    }
}

impl Iterator for LevelSequences {
    type Item = RootedTree;

    fn next(&mut self) -> Option<RootedTree> {
        if self.done {
            return None;
        }
        let tree = RootedTree::from_level_sequence(&self.levels).expect("valid level sequence");
        self.advance();
        Some(tree)
    }
}

/// A binary shape with explicit empty slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Empty,
    Node(Box<Shape>, Box<Shape>),
}

impl Shape {
    fn size(&self) -> usize {
        match self {
            Shape::Empty => 0,
            Shape::Node(l, r) => 1 + l.size() + r.size(),
        }
    }

    /// Converts a non-empty shape into a tree, recording child sides.
    pub fn to_tree(&self) -> RootedTree {
        let n = self.size();
        let mut children = Vec::with_capacity(n);
        let mut parent = Vec::with_capacity(n);
        let mut sides = Vec::with_capacity(n);
        fn walk(
            s: &Shape,
            up: Option<NodeId>,
            side: Option<Side>,
            children: &mut Vec<Vec<NodeId>>,
            parent: &mut Vec<Option<NodeId>>,
            sides: &mut Vec<Option<Side>>,
        ) {
            let Shape::Node(l, r) = s else { return };
            let id = NodeId(children.len());
            children.push(Vec::new());
            parent.push(up);
            sides.push(side);
            if let Some(u) = up {
                children[u.0].push(id);
            }
            walk(l, Some(id), Some(Side::Left), children, parent, sides);
            walk(r, Some(id), Some(Side::Right), children, parent, sides);
        }
        walk(self, None, None, &mut children, &mut parent, &mut sides);
        RootedTree::from_children_preorder_with_sides(children, parent, sides)
    }
}

/// All binary shapes with `n` nodes (`n = 0` yields the empty shape).
pub fn binary_shapes(n: usize) -> Vec<Shape> {
    let mut memo: Vec<Vec<Shape>> = vec![vec![Shape::Empty]];
    for size in 1..=n {
        let mut out = Vec::new();
        for left in 0..size {
            let right = size - 1 - left;
            for l in &memo[left] {
                for r in &memo[right] {
                    out.push(Shape::Node(Box::new(l.clone()), Box::new(r.clone())));
                }
            }
        }
        memo.push(out);
    }
    memo.swap_remove(n)
}

/// All full binary shapes with `n` nodes, `n` odd. Leaves are nodes with two
/// empty slots.
pub fn full_binary_shapes(n: usize) -> Vec<Shape> {
    if n.is_multiple_of(2) {
        return Vec::new();
    }
    let leaf = Shape::Node(Box::new(Shape::Empty), Box::new(Shape::Empty));
    let mut memo: Vec<Vec<Shape>> = vec![Vec::new(); n + 1];
    memo[1] = vec![leaf];
    for size in (3..=n).step_by(2) {
        let mut out = Vec::new();
        for left in (1..size - 1).step_by(2) {
            let right = size - 1 - left;
            for l in &memo[left] {
                for r in &memo[right] {
                    out.push(Shape::Node(Box::new(l.clone()), Box::new(r.clone())));
                }
            }
        }
        memo[size] = out;
    }
    memo.swap_remove(n)
}

/// Catalan number `(2n)! / ((n+1)! n!)`.
pub fn catalan(n: u64) -> u128 {
    // C_{k+1} = C_k * 2(2k+1) / (k+2)
    (0..n).fold(1u128, |c, k| {
        c * (2 * (2 * k as u128 + 1)) / (k as u128 + 2)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn rooted_counts() {
        let counts: Vec<usize> = (1..=10)
            .map(|n| enumerate_trees(TreeClass::Rooted, n).unwrap().count())
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 9, 20, 48, 115, 286, 719]);
    }

    #[test]
    fn rooted_classes_are_distinct() {
        for n in 1..=9 {
            let forms: BTreeSet<String> = enumerate_trees(TreeClass::Rooted, n)
                .unwrap()
                .map(|t| t.canonical_form())
                .collect();
            assert_eq!(
                forms.len(),
                enumerate_trees(TreeClass::Rooted, n).unwrap().count()
            );
        }
    }

    #[test]
    fn rooted_order_starts_with_path_and_ends_with_star() {
        let trees: Vec<_> = enumerate_trees(TreeClass::Rooted, 4).unwrap().collect();
        assert_eq!(trees.first().unwrap().serialize(), "(((())))");
        assert_eq!(trees.last().unwrap().serialize(), "(()()())");
    }

    #[test]
    fn binary_and_full_binary_counts() {
        assert_eq!(enumerate_trees(TreeClass::Binary, 3).unwrap().count(), 5);
        assert_eq!(
            enumerate_trees(TreeClass::FullBinary, 7).unwrap().count(),
            5
        );
        assert_eq!(
            enumerate_trees(TreeClass::FullBinary, 1).unwrap().count(),
            1
        );
        for tree in enumerate_trees(TreeClass::FullBinary, 9).unwrap() {
            assert!(tree.is_full_binary());
        }
    }

    #[test]
    fn unsupported_sizes() {
        assert!(enumerate_trees(TreeClass::Rooted, 0).is_err());
        assert!(enumerate_trees(TreeClass::Binary, 0).is_err());
        assert!(enumerate_trees(TreeClass::FullBinary, 4).is_err());
    }

    #[test]
    fn catalan_values() {
        let v: Vec<u128> = (0..=10).map(catalan).collect();
        assert_eq!(v, vec![1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796]);
    }
}
