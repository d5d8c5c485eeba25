//! Colorings, the ancestor-distinct rule and the two canonical colorings.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tree::{NodeId, RootedTree};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColoringError {
    #[error("coloring has {got} entries but the tree has {expected} nodes")]
    SizeMismatch { expected: usize, got: usize },
    #[error("color labels must be positive integers")]
    ZeroColor,
    #[error("invalid partition: {0}")]
    BadPartition(String),
}

/// Color label per node, indexed by preorder node id. Labels are opaque
/// positive integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coloring {
    colors: Vec<u32>,
}

impl Coloring {
    pub fn new(colors: Vec<u32>) -> Result<Self, ColoringError> {
        if colors.contains(&0) {
            return Err(ColoringError::ZeroColor);
        }
        Ok(Coloring { colors })
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn color(&self, v: NodeId) -> u32 {
        self.colors[v.0]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.colors
    }

    /// Number of distinct labels used.
    pub fn color_count(&self) -> usize {
        self.class_sizes().len()
    }

    /// Node count per label.
    pub fn class_sizes(&self) -> BTreeMap<u32, usize> {
        let mut sizes = BTreeMap::new();
        for &c in &self.colors {
            *sizes.entry(c).or_insert(0) += 1;
        }
        sizes
    }

    /// Class sizes, sorted non-increasing. Labels do not matter.
    pub fn partition(&self) -> ColorPartition {
        ColorPartition::new(self.class_sizes().into_values().collect())
    }
}

/// Outcome of [`verify_coloring`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Valid,
    Violation {
        ancestor: NodeId,
        descendant: NodeId,
    },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

/// Checks that no node shares its color with one of its ancestors. Reports
/// the first offending pair met in preorder.
pub fn verify_coloring(tree: &RootedTree, coloring: &Coloring) -> Result<Verdict, ColoringError> {
    if coloring.len() != tree.len() {
        return Err(ColoringError::SizeMismatch {
            expected: tree.len(),
            got: coloring.len(),
        });
    }
    // path[d] is the node at depth d on the current root path
    let mut path: Vec<NodeId> = Vec::with_capacity(tree.height() + 1);
    for v in tree.nodes() {
        path.truncate(tree.depth_of(v));
        let c = coloring.color(v);
        if let Some(&u) = path.iter().find(|&&u| coloring.color(u) == c) {
            return Ok(Verdict::Violation {
                ancestor: u,
                descendant: v,
            });
        }
        path.push(v);
    }
    Ok(Verdict::Valid)
}

/// Color `depth + 1` on every node.
pub fn canonical_by_depth(tree: &RootedTree) -> Coloring {
    Coloring {
        colors: tree.nodes().map(|v| tree.depth_of(v) as u32 + 1).collect(),
    }
}

/// Color `height + 1` on every node.
pub fn canonical_by_height(tree: &RootedTree) -> Coloring {
    Coloring {
        colors: tree.nodes().map(|v| tree.height_of(v) as u32 + 1).collect(),
    }
}

/// Minimum number of colors of a valid coloring: the tree height plus one.
pub fn min_colors(tree: &RootedTree) -> usize {
    tree.height() + 1
}

/// Class sizes of `coloring`, sorted non-increasing.
pub fn partition_of(coloring: &Coloring) -> ColorPartition {
    coloring.partition()
}

/// Multiset of positive class sizes, stored non-increasing.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ColorPartition {
    sizes: Vec<usize>,
}

impl ColorPartition {
    /// Normalizes: zero-sized classes are dropped and sizes sorted
    /// non-increasing.
    pub fn new(mut sizes: Vec<usize>) -> Self {
        sizes.retain(|&a| a > 0);
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        ColorPartition { sizes }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Number of non-empty classes.
    pub fn classes(&self) -> usize {
        self.sizes.len()
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn largest(&self) -> usize {
        self.sizes.first().copied().unwrap_or(0)
    }

    pub fn unit_classes(&self) -> usize {
        self.sizes.iter().filter(|&&a| a == 1).count()
    }
}

impl From<Vec<usize>> for ColorPartition {
    fn from(sizes: Vec<usize>) -> Self {
        ColorPartition::new(sizes)
    }
}

impl<const N: usize> From<[usize; N]> for ColorPartition {
    fn from(sizes: [usize; N]) -> Self {
        ColorPartition::new(sizes.to_vec())
    }
}

impl fmt::Display for ColorPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sizes.iter().map(|a| a.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Comma-separated sizes in any order; zeros allowed and dropped.
impl FromStr for ColorPartition {
    type Err = ColoringError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        let sizes = trimmed
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<usize>()
                    .map_err(|e| ColoringError::BadPartition(format!("{part:?}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let partition = ColorPartition::new(sizes);
        if partition.classes() == 0 {
            return Err(ColoringError::BadPartition("no positive class size".into()));
        }
        Ok(partition)
    }
}
