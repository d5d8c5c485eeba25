//! Exact colorability decision for a tree and a multiset of class sizes.
//!
//! Depth-first search over nodes in preorder. Each node picks a class that
//! still has room and is not used on its root path; the path set of a node
//! is its parent's set plus the parent's class, so no undo is needed.
//! Equal-sized classes that are still untouched are interchangeable, and
//! only the first of them is tried.
//!
//! Before a subtree is entered, the remaining budgets of the classes allowed
//! there are tested against the subtree's height profile: the restriction of
//! a valid coloring to a subtree is a valid coloring of that subtree, so its
//! `k` largest classes fit in the subtree's `k` lowest levels. With
//! `P_k` the number of subtree nodes of height `< k` and `r` the allowed
//! budgets sorted non-increasing, at most
//! `min_k (P_k + r_(k+1) + r_(k+2) + ...)` subtree nodes can be colored.
//! A second bound checks, after every assignment, that each class can still
//! place its remaining nodes among the leaves of the pending subtrees where
//! it is allowed.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::check::check_necessary;
use crate::coloring::{ColorPartition, Coloring};
use crate::partitions::partitions_with_parts;
use crate::tree::{NodeId, RootedTree};

pub const DEFAULT_BUDGET: u64 = 100_000_000;
pub const BUDGET_ENV: &str = "TREECOLOR_BUDGET";

/// Largest number of classes the search supports (one bit per class).
pub const MAX_CLASSES: usize = 128;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("expansion budget exceeded after {nodes_expanded} node expansions")]
    BudgetExceeded { nodes_expanded: u64 },
    #[error("{0} classes exceed the supported maximum of {MAX_CLASSES}")]
    TooManyClasses(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Colorable(Coloring),
    NotColorable,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub status: Status,
    pub nodes_expanded: u64,
    pub elapsed: Duration,
}

impl SolveResult {
    pub fn is_colorable(&self) -> bool {
        matches!(self.status, Status::Colorable(_))
    }

    pub fn witness(&self) -> Option<&Coloring> {
        match &self.status {
            Status::Colorable(c) => Some(c),
            Status::NotColorable => None,
        }
    }
}

impl Serialize for SolveResult {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(None)?;
        match &self.status {
            Status::Colorable(w) => {
                map.serialize_entry("status", "colorable")?;
                map.serialize_entry("witness", w)?;
            }
            Status::NotColorable => map.serialize_entry("status", "not_colorable")?,
        }
        map.serialize_entry("nodes_expanded", &self.nodes_expanded)?;
        map.end()
    }
}

/// Solver configuration.
#[derive(Clone, Copy, Debug)]
pub struct Solver {
    /// Cap on node expansions per decision.
    pub budget: u64,
}

impl Default for Solver {
    fn default() -> Self {
        Solver {
            budget: DEFAULT_BUDGET,
        }
    }
}

impl Solver {
    pub fn new(budget: u64) -> Self {
        Solver { budget }
    }

    /// Default budget, overridden by `TREECOLOR_BUDGET` when it parses.
    pub fn from_env() -> Self {
        let budget = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_BUDGET);
        Solver { budget }
    }

    /// Decides whether some valid coloring of `tree` has exactly the class
    /// sizes of `partition`.
    pub fn is_colorable(
        &self,
        tree: &RootedTree,
        partition: &ColorPartition,
    ) -> Result<SolveResult, SolveError> {
        let start = Instant::now();
        if partition.classes() > MAX_CLASSES {
            return Err(SolveError::TooManyClasses(partition.classes()));
        }
        if partition.total() != tree.len() || partition.classes() < tree.height() + 1 {
            return Ok(SolveResult {
                status: Status::NotColorable,
                nodes_expanded: 0,
                elapsed: start.elapsed(),
            });
        }
        let mut search = Search::new(tree, partition, self.budget);
        let found = search.run()?;
        let status = if found {
            let colors = search.assign.iter().map(|&j| j as u32 + 1).collect();
            Status::Colorable(Coloring::new(colors).expect("labels are positive"))
        } else {
            Status::NotColorable
        };
        Ok(SolveResult {
            status,
            nodes_expanded: search.expanded,
            elapsed: start.elapsed(),
        })
    }

    /// Every partition realized by some valid coloring of `tree`, sorted.
    pub fn all_colorable_partitions(
        &self,
        tree: &RootedTree,
    ) -> Result<Vec<ColorPartition>, SolveError> {
        self.colorable_partitions_with_parts(tree, tree.height() + 1, tree.len())
    }

    /// Colorable partitions with a class count in `min_parts..=max_parts`.
    pub fn colorable_partitions_with_parts(
        &self,
        tree: &RootedTree,
        min_parts: usize,
        max_parts: usize,
    ) -> Result<Vec<ColorPartition>, SolveError> {
        let profile = tree.height_profile();
        let candidates: Vec<ColorPartition> =
            partitions_with_parts(tree.len(), min_parts, max_parts)
                .filter(|p| check_necessary(p, &profile).passed)
                .collect();
        let verdicts = candidates
            .par_iter()
            .map(|p| self.is_colorable(tree, p).map(|r| r.is_colorable()))
            .collect::<Result<Vec<bool>, SolveError>>()?;
        let mut out: Vec<ColorPartition> = candidates
            .into_iter()
            .zip(verdicts)
            .filter_map(|(p, ok)| ok.then_some(p))
            .collect();
        out.sort();
        Ok(out)
    }
}

/// [`Solver::is_colorable`] with the default budget.
pub fn is_colorable(
    tree: &RootedTree,
    partition: &ColorPartition,
) -> Result<SolveResult, SolveError> {
    Solver::default().is_colorable(tree, partition)
}

/// [`Solver::all_colorable_partitions`] with the default budget.
pub fn all_colorable_partitions(tree: &RootedTree) -> Result<Vec<ColorPartition>, SolveError> {
    Solver::default().all_colorable_partitions(tree)
}

struct Search {
    n: usize,
    parent: Vec<usize>,
    end: Vec<usize>,
    leaves: Vec<usize>,
    // prefix[offset[v] + k]: nodes of the subtree at v with height < k, k = 0..=height(v)+1
    prefix: Vec<usize>,
    offset: Vec<usize>,
    height: Vec<usize>,
    sizes: Vec<usize>,
    remaining: Vec<usize>,
    path: Vec<u128>,
    assign: Vec<usize>,
    // pending subtree roots (not yet entered) in stack order
    pending: Vec<usize>,
    scratch: Vec<usize>,
    expanded: u64,
    budget: u64,
}

impl Search {
    fn new(tree: &RootedTree, partition: &ColorPartition, budget: u64) -> Self {
        let n = tree.len();
        let parent: Vec<usize> = tree
            .nodes()
            .map(|v| tree.parent(v).map_or(usize::MAX, |p| p.index()))
            .collect();
        let end: Vec<usize> = tree
            .nodes()
            .map(|v| v.index() + tree.subtree_size(v))
            .collect();
        let leaves: Vec<usize> = tree
            .nodes()
            .map(|v| tree.subtree_leaf_count(v).expect("node in tree"))
            .collect();
        let height: Vec<usize> = tree.nodes().map(|v| tree.height_of(v)).collect();
        let mut offset = Vec::with_capacity(n);
        let mut prefix = Vec::new();
        for v in 0..n {
            offset.push(prefix.len());
            let mut counts = vec![0; height[v] + 1];
            for &h in &height[v..end[v]] {
                counts[h] += 1;
            }
            let mut acc = 0;
            prefix.push(0);
            for c in counts {
                acc += c;
                prefix.push(acc);
            }
        }
        let sizes = partition.sizes().to_vec();
        Search {
            n,
            parent,
            end,
            leaves,
            prefix,
            offset,
            height,
            remaining: sizes.clone(),
            sizes,
            path: vec![0; n],
            assign: vec![usize::MAX; n],
            pending: Vec::with_capacity(n),
            scratch: Vec::new(),
            expanded: 0,
            budget,
        }
    }

    fn run(&mut self) -> Result<bool, SolveError> {
        self.dfs(0)
    }

    fn forbidden(&self, v: usize) -> u128 {
        match self.parent[v] {
            usize::MAX => 0,
            p => self.path[p] | (1u128 << self.assign[p]),
        }
    }

    /// Whether the subtree at `v` can still absorb its nodes given the
    /// budgets of the classes allowed there.
    fn subtree_feasible(&mut self, v: usize, forbidden: u128) -> bool {
        let m = self.end[v] - v;
        self.scratch.clear();
        for (j, &r) in self.remaining.iter().enumerate() {
            if r > 0 && forbidden & (1u128 << j) == 0 {
                self.scratch.push(r);
            }
        }
        self.scratch.sort_unstable_by(|a, b| b.cmp(a));
        let mut tail: usize = self.scratch.iter().sum();
        let levels = self.height[v] + 1;
        let base = self.offset[v];
        for k in 0..=self.scratch.len().min(levels) {
            if self.prefix[base + k] + tail < m {
                return false;
            }
            if k < self.scratch.len() {
                tail -= self.scratch[k];
            }
        }
        // fewer allowed classes than levels in the subtree
        self.scratch.len() >= levels
    }

    fn dfs(&mut self, v: usize) -> Result<bool, SolveError> {
        if v == self.n {
            return Ok(true);
        }
        let forbidden = self.forbidden(v);
        if !self.subtree_feasible(v, forbidden) {
            return Ok(false);
        }
        if v > 0 && !self.pending_feasible(v) {
            return Ok(false);
        }
        for j in 0..self.sizes.len() {
            if self.remaining[j] == 0 || forbidden & (1u128 << j) != 0 {
                continue;
            }
            if j > 0
                && self.sizes[j - 1] == self.sizes[j]
                && self.remaining[j - 1] == self.sizes[j - 1]
                && self.remaining[j] == self.sizes[j]
            {
                continue;
            }
            self.expanded += 1;
            if self.expanded > self.budget {
                return Err(SolveError::BudgetExceeded {
                    nodes_expanded: self.expanded,
                });
            }
            self.assign[v] = j;
            self.remaining[j] -= 1;
            self.path[v] = forbidden;
            let found = self.dfs(v + 1)?;
            if found {
                return Ok(true);
            }
            self.remaining[j] += 1;
            self.assign[v] = usize::MAX;
        }
        Ok(false)
    }

    /// The unassigned nodes `v..n` split into subtrees hanging off the
    /// current root path; each class must fit its remaining budget into the
    /// leaves of the subtrees where it is allowed.
    fn pending_feasible(&mut self, v: usize) -> bool {
        self.pending.clear();
        // walk up from v: v's subtree, then later siblings of each ancestor-or-self
        let mut u = v;
        self.pending.push(u);
        loop {
            let p = self.parent[u];
            if p == usize::MAX {
                break;
            }
            let mut s = self.end[u];
            while s < self.end[p] {
                self.pending.push(s);
                s = self.end[s];
            }
            u = p;
        }
        for j in 0..self.sizes.len() {
            let r = self.remaining[j];
            if r == 0 {
                continue;
            }
            let bit = 1u128 << j;
            let mut capacity = 0;
            for &root in &self.pending {
                if self.forbidden(root) & bit == 0 {
                    capacity += self.leaves[root];
                    if capacity >= r {
                        break;
                    }
                }
            }
            if capacity < r {
                return false;
            }
        }
        true
    }
}

/// Every valid coloring of `tree`, one per class of label permutations.
///
/// Nodes are colored in preorder; a node takes any color already in use and
/// absent from its root path, or the next fresh color. Labels therefore
/// appear in first-use order.
pub fn oracle_colorings(tree: &RootedTree) -> OracleColorings {
    OracleColorings::new(tree)
}

pub struct OracleColorings {
    parent: Vec<Option<usize>>,
    colors: Vec<u32>,
    // highest label used among nodes 0..=v
    used: Vec<u32>,
    started: bool,
    done: bool,
}

impl OracleColorings {
    fn new(tree: &RootedTree) -> Self {
        let n = tree.len();
        OracleColorings {
            parent: tree
                .nodes()
                .map(|v| tree.parent(v).map(NodeId::index))
                .collect(),
            colors: vec![0; n],
            used: vec![0; n],
            started: false,
            done: n == 0,
        }
    }

    fn on_path(&self, v: usize, c: u32) -> bool {
        let mut u = self.parent[v];
        while let Some(p) = u {
            if self.colors[p] == c {
                return true;
            }
            u = self.parent[p];
        }
        false
    }

    /// Smallest admissible color for `v` strictly above `after`.
    fn next_choice(&self, v: usize, after: u32) -> Option<u32> {
        let limit = if v == 0 { 1 } else { self.used[v - 1] + 1 };
        (after + 1..=limit).find(|&c| !self.on_path(v, c))
    }

    fn set(&mut self, v: usize, c: u32) {
        self.colors[v] = c;
        self.used[v] = if v == 0 { c } else { self.used[v - 1].max(c) };
    }

    /// Fills nodes `from..n` with their first choices. The fresh color is
    /// always admissible, so this never fails.
    fn fill_from(&mut self, from: usize) {
        for v in from..self.colors.len() {
            let c = self
                .next_choice(v, 0)
                .expect("fresh color is always admissible");
            self.set(v, c);
        }
    }
}

impl Iterator for OracleColorings {
    type Item = Coloring;

    fn next(&mut self) -> Option<Coloring> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.fill_from(0);
            return Some(Coloring::new(self.colors.clone()).expect("positive labels"));
        }
        let mut v = self.colors.len();
        while v > 0 {
            v -= 1;
            if let Some(c) = self.next_choice(v, self.colors[v]) {
                self.set(v, c);
                self.fill_from(v + 1);
                return Some(Coloring::new(self.colors.clone()).expect("positive labels"));
            }
        }
        self.done = true;
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::verify_coloring;
    use std::collections::BTreeSet;

    fn t(s: &str) -> RootedTree {
        RootedTree::parse(s).unwrap()
    }

    fn p(sizes: &[usize]) -> ColorPartition {
        ColorPartition::new(sizes.to_vec())
    }

    const PERFECT2: &str = "((()())(()()))";
    const RAIL: &str = "((()()()))";

    #[test]
    fn balanced_perfect_is_colorable() {
        let tree = t(PERFECT2);
        let result = is_colorable(&tree, &p(&[3, 3, 1])).unwrap();
        let w = result.witness().expect("colorable");
        assert!(verify_coloring(&tree, w).unwrap().is_valid());
        assert_eq!(w.partition(), p(&[3, 3, 1]));
    }

    #[test]
    fn rail_rejects_two_two_one() {
        let result = is_colorable(&t(RAIL), &p(&[2, 2, 1])).unwrap();
        assert_eq!(result.status, Status::NotColorable);
    }

    #[test]
    fn wrong_total_or_too_few_classes() {
        assert_eq!(
            is_colorable(&t(RAIL), &p(&[2, 1])).unwrap().status,
            Status::NotColorable
        );
        assert_eq!(
            is_colorable(&t(RAIL), &p(&[4, 1])).unwrap().status,
            Status::NotColorable
        );
    }

    #[test]
    fn budget_is_a_distinct_verdict() {
        let tree = t(PERFECT2);
        let err = Solver::new(2)
            .is_colorable(&tree, &p(&[3, 3, 1]))
            .unwrap_err();
        assert!(matches!(err, SolveError::BudgetExceeded { .. }));
    }

    #[test]
    fn perfect_partitions() {
        let tree = t(PERFECT2);
        let all = all_colorable_partitions(&tree).unwrap();
        let three: Vec<_> = all.iter().filter(|q| q.classes() == 3).cloned().collect();
        assert_eq!(three, vec![p(&[3, 3, 1]), p(&[4, 2, 1])]);
        assert!(all.contains(&p(&[3, 2, 1, 1])));
        assert_eq!(
            all_colorable_partitions(&RootedTree::singleton()).unwrap(),
            vec![p(&[1])]
        );
    }

    #[test]
    fn oracle_small_cases() {
        assert_eq!(oracle_colorings(&t("(())")).count(), 1);
        // star: leaves are free, so colorings are set partitions of the 3 leaves
        assert_eq!(oracle_colorings(&t("(()()())")).count(), 5);
        for c in oracle_colorings(&t(PERFECT2)) {
            assert!(verify_coloring(&t(PERFECT2), &c).unwrap().is_valid());
        }
    }

    #[test]
    fn oracle_matches_search_on_perfect() {
        let tree = t(PERFECT2);
        let from_oracle: BTreeSet<ColorPartition> =
            oracle_colorings(&tree).map(|c| c.partition()).collect();
        let from_solver: BTreeSet<ColorPartition> = all_colorable_partitions(&tree)
            .unwrap()
            .into_iter()
            .collect();
        assert_eq!(from_oracle, from_solver);
    }

    #[test]
    fn oracle_colorings_are_distinct_up_to_relabeling() {
        let tree = t("((())(()))");
        let all: Vec<Coloring> = oracle_colorings(&tree).collect();
        let distinct: BTreeSet<Vec<u32>> = all.iter().map(|c| c.as_slice().to_vec()).collect();
        assert_eq!(distinct.len(), all.len());
    }
}
