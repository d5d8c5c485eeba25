//! Necessary conditions for a multiset of class sizes to be realizable by a
//! valid coloring of a given tree.
//!
//! * the sizes sum to `n`,
//! * some class has size 1 (the root's color),
//! * for every `k`, the `k` largest classes hold at most `n_0 + ... + n_{k-1}`
//!   nodes, where `n_g` counts nodes of height `g`. The bound depends only on
//!   `k`, so checking the top-`k` prefix covers every `k`-subset of colors,
//! * a tree with a single node on each depth `0..=d` needs `d + 1` unit
//!   classes,
//! * per-node capacity: the color of `v` can only reappear on siblings of
//!   `v` and of its ancestors (and their descendants), at most once per
//!   leaf of those subtrees.
//!
//! None of these is sufficient; [`crate::solver`] decides exactly.

use std::collections::BTreeSet;

use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::coloring::ColorPartition;
use crate::tree::{NodeId, Profile, RootedTree, TreeError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Condition {
    Sum,
    RootUnit,
    /// Top-`k` prefix bound.
    Prefix(usize),
    UniquePath,
    /// Capacity bound anchored at a node.
    NodeBound(NodeId),
}

impl Condition {
    pub fn id(&self) -> &'static str {
        match self {
            Condition::Sum => "sum",
            Condition::RootUnit => "root_unit",
            Condition::Prefix(_) => "prefix_k",
            Condition::UniquePath => "unique_path",
            Condition::NodeBound(_) => "node_bound",
        }
    }
}

/// One violated condition. For inequalities `lhs > rhs`; for `sum`, `lhs`
/// is the partition total and `rhs` the node count.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Failure {
    pub condition: Condition,
    pub lhs: usize,
    pub rhs: usize,
}

impl Serialize for Failure {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        map.serialize_entry("condition", self.condition.id())?;
        match self.condition {
            Condition::Prefix(k) => map.serialize_entry("k", &k)?,
            Condition::NodeBound(v) => map.serialize_entry("node", &v)?,
            _ => {}
        }
        map.serialize_entry("lhs", &self.lhs)?;
        map.serialize_entry("rhs", &self.rhs)?;
        map.end()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct CheckReport {
    pub passed: bool,
    pub failures: Vec<Failure>,
}

impl CheckReport {
    fn from_failures(failures: Vec<Failure>) -> Self {
        CheckReport {
            passed: failures.is_empty(),
            failures,
        }
    }

    pub fn fails(&self, condition: Condition) -> bool {
        self.failures.iter().any(|f| f.condition == condition)
    }

    /// Concatenates reports; passes only if both pass.
    pub fn merge(mut self, other: CheckReport) -> Self {
        self.failures.extend(other.failures);
        self.passed = self.failures.is_empty();
        self
    }
}

/// Sum, unit-class and top-`k` prefix conditions against a height profile.
pub fn check_necessary(partition: &ColorPartition, profile: &Profile) -> CheckReport {
    let mut failures = Vec::new();
    let n = profile.total();
    let total = partition.total();
    if total != n {
        failures.push(Failure {
            condition: Condition::Sum,
            lhs: total,
            rhs: n,
        });
    }
    let smallest = partition.sizes().last().copied().unwrap_or(0);
    if smallest != 1 {
        failures.push(Failure {
            condition: Condition::RootUnit,
            lhs: smallest,
            rhs: 1,
        });
    }
    let mut top = 0;
    let mut bound = 0;
    for (i, &a) in partition.sizes().iter().enumerate() {
        top += a;
        bound += profile.counts.get(i).copied().unwrap_or(0);
        if top > bound {
            failures.push(Failure {
                condition: Condition::Prefix(i + 1),
                lhs: top,
                rhs: bound,
            });
        }
    }
    CheckReport::from_failures(failures)
}

/// Largest `d` such that every depth `0..=d` holds exactly one node.
pub fn unique_path_depth(tree: &RootedTree) -> usize {
    let depths = tree.depth_profile();
    depths.counts.iter().take_while(|&&c| c == 1).count() - 1
}

/// A single node on each depth `0..=d` forces `d + 1` unit classes.
pub fn check_unique_path(partition: &ColorPartition, tree: &RootedTree) -> CheckReport {
    let required = unique_path_depth(tree) + 1;
    let units = partition.unit_classes();
    let mut failures = Vec::new();
    if units < required {
        failures.push(Failure {
            condition: Condition::UniquePath,
            lhs: required,
            rhs: units,
        });
    }
    CheckReport::from_failures(failures)
}

/// Most nodes the color of `v` can cover:
/// `1 + sum over lambda < depth(v) of the leaves below the siblings of the
/// lambda-th ancestor of v`.
pub fn node_color_bound(tree: &RootedTree, v: NodeId) -> Result<usize, TreeError> {
    if !tree.contains(v) {
        return Err(TreeError::InvalidNode(v.0));
    }
    let mut bound = 1;
    let mut u = v;
    while let Some(p) = tree.parent(u) {
        // leaves under the siblings of u
        bound += tree.subtree_leaf_count(p)? - tree.subtree_leaf_count(u)?;
        u = p;
    }
    Ok(bound)
}

/// Capacity bounds of every node, indexed by node id.
pub fn node_color_bounds(tree: &RootedTree) -> Vec<usize> {
    let mut bounds = vec![1; tree.len()];
    for v in tree.nodes().skip(1) {
        let p = tree.parent(v).expect("non-root");
        let siblings_leaves =
            tree.subtree_leaf_count(p).unwrap() - tree.subtree_leaf_count(v).unwrap();
        bounds[v.0] = bounds[p.0] + siblings_leaves;
    }
    bounds
}

/// Matches class sizes against per-node capacity bounds.
///
/// Two sound relaxations are applied:
/// * every class has some node, so classes must inject into nodes with
///   `size <= bound`: greedy matching of the sorted sequences, largest to
///   largest;
/// * nodes of one root-to-leaf path carry pairwise distinct colors, so the
///   path's nodes must inject into classes with `size <= bound`: greedy
///   matching smallest to smallest along every path.
pub fn check_node_bounds(partition: &ColorPartition, tree: &RootedTree) -> CheckReport {
    let bounds = node_color_bounds(tree);
    let mut failures = BTreeSet::new();

    let mut anchors: Vec<(usize, NodeId)> = tree.nodes().map(|v| (bounds[v.0], v)).collect();
    anchors.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    for (&a, &(b, v)) in partition.sizes().iter().zip(&anchors) {
        if a > b {
            failures.insert(Failure {
                condition: Condition::NodeBound(v),
                lhs: a,
                rhs: b,
            });
        }
    }

    let ascending: Vec<usize> = partition.sizes().iter().rev().copied().collect();
    for leaf in tree.nodes().filter(|&v| tree.is_leaf(v)) {
        let mut path: Vec<(usize, NodeId)> = tree
            .root_path(leaf)
            .into_iter()
            .map(|v| (bounds[v.0], v))
            .collect();
        path.sort();
        if path.len() > ascending.len() {
            failures.insert(Failure {
                condition: Condition::NodeBound(leaf),
                lhs: path.len(),
                rhs: ascending.len(),
            });
            continue;
        }
        if let Some((&a, &(b, v))) = ascending.iter().zip(&path).find(|(&a, &(b, _))| a > b) {
            failures.insert(Failure {
                condition: Condition::NodeBound(v),
                lhs: a,
                rhs: b,
            });
        }
    }
    CheckReport::from_failures(failures.into_iter().collect())
}

/// All conditions of this module against one tree.
pub fn check_all(partition: &ColorPartition, tree: &RootedTree) -> CheckReport {
    check_necessary(partition, &tree.height_profile())
        .merge(check_unique_path(partition, tree))
        .merge(check_node_bounds(partition, tree))
}
