//! Censuses over small trees: trees whose necessary conditions are not
//! sufficient, the perfect-binary-tree sufficiency conjecture and the
//! Catalan counts.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::check::check_necessary;
use crate::coloring::ColorPartition;
use crate::enumerate::{catalan, enumerate_trees, TreeClass};
use crate::partitions::partitions_with_parts;
use crate::solver::{SolveError, Solver};
use crate::tree::{Profile, RootedTree};

/// A tree with partitions that pass [`check_necessary`] yet are not
/// colorable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TnscRecord {
    /// Canonical form, itself valid tree text.
    pub tree: String,
    pub class: TreeClass,
    pub n: usize,
    pub profile: Profile,
    pub failing_partitions: Vec<ColorPartition>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusSummary {
    pub class: TreeClass,
    pub n: usize,
    /// Isomorphism classes examined.
    pub trees_scanned: usize,
    pub tnsc_count: usize,
    pub budget_exceeded: usize,
}

/// A partition whose search ran out of budget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Unresolved {
    pub tree: String,
    pub partition: ColorPartition,
    pub nodes_expanded: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TnscCensus {
    pub records: Vec<TnscRecord>,
    pub summaries: Vec<CensusSummary>,
    /// Non-empty means the census is partial.
    pub unresolved: Vec<Unresolved>,
}

impl TnscCensus {
    pub fn is_complete(&self) -> bool {
        self.unresolved.is_empty()
    }

    /// One JSON object per line: records, then unresolved partitions, then
    /// one summary per size.
    pub fn to_json_lines(&self) -> String {
        #[derive(Serialize)]
        #[serde(tag = "kind", rename_all = "snake_case")]
        enum Line<'a> {
            Tnsc(&'a TnscRecord),
            Unresolved(&'a Unresolved),
            Summary(&'a CensusSummary),
        }
        let lines = self
            .records
            .iter()
            .map(Line::Tnsc)
            .chain(self.unresolved.iter().map(Line::Unresolved))
            .chain(self.summaries.iter().map(Line::Summary));
        let mut out = String::new();
        for line in lines {
            out.push_str(&serde_json::to_string(&line).expect("serializable"));
            out.push('\n');
        }
        out
    }
}

/// Distinct isomorphism classes of `class` trees with `n` nodes, keyed and
/// ordered by canonical form.
pub fn isomorphism_classes(class: TreeClass, n: usize) -> BTreeMap<String, RootedTree> {
    let mut classes = BTreeMap::new();
    if let Ok(trees) = enumerate_trees(class, n) {
        for tree in trees {
            classes.entry(tree.canonical_form()).or_insert(tree);
        }
    }
    classes
}

struct TreeOutcome {
    failing: Vec<ColorPartition>,
    unresolved: Vec<(ColorPartition, u64)>,
}

fn scan_tree(solver: &Solver, tree: &RootedTree) -> TreeOutcome {
    let profile = tree.height_profile();
    let mut outcome = TreeOutcome {
        failing: Vec::new(),
        unresolved: Vec::new(),
    };
    for partition in partitions_with_parts(tree.len(), tree.height() + 1, tree.len()) {
        if !check_necessary(&partition, &profile).passed {
            continue;
        }
        match solver.is_colorable(tree, &partition) {
            Ok(r) if r.is_colorable() => {}
            Ok(_) => outcome.failing.push(partition),
            Err(SolveError::BudgetExceeded { nodes_expanded }) => {
                outcome.unresolved.push((partition, nodes_expanded))
            }
            Err(e) => panic!("census tree outside solver limits: {e}"),
        }
    }
    outcome.failing.sort_by(|a, b| b.cmp(a));
    outcome
}

/// Every tree of `class` with up to `n_max` nodes, scanned up to
/// isomorphism. Records are sorted by size, then canonical form.
pub fn find_tnsc(solver: &Solver, class: TreeClass, n_max: usize) -> TnscCensus {
    let mut census = TnscCensus::default();
    for n in (1..=n_max).filter(|&n| class.admits(n)) {
        let trees: Vec<(String, RootedTree)> = isomorphism_classes(class, n).into_iter().collect();
        let outcomes: Vec<TreeOutcome> = trees
            .par_iter()
            .map(|(_, tree)| scan_tree(solver, tree))
            .collect();
        let mut summary = CensusSummary {
            class,
            n,
            trees_scanned: trees.len(),
            tnsc_count: 0,
            budget_exceeded: 0,
        };
        for ((form, tree), outcome) in trees.into_iter().zip(outcomes) {
            for (partition, nodes_expanded) in outcome.unresolved {
                summary.budget_exceeded += 1;
                census.unresolved.push(Unresolved {
                    tree: form.clone(),
                    partition,
                    nodes_expanded,
                });
            }
            if !outcome.failing.is_empty() {
                summary.tnsc_count += 1;
                census.records.push(TnscRecord {
                    tree: form,
                    class,
                    n,
                    profile: tree.height_profile(),
                    failing_partitions: outcome.failing,
                });
            }
        }
        census.summaries.push(summary);
    }
    census
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct HeightReport {
    pub h: usize,
    pub n: usize,
    /// Partitions passing the necessary conditions.
    pub partitions_tested: usize,
    pub colorable: usize,
    /// Colorable partitions with exactly `h + 1` classes.
    pub minimum_color_partitions: Vec<ColorPartition>,
    pub counterexamples: Vec<ColorPartition>,
    pub budget_exceeded: Vec<ColorPartition>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub heights: Vec<HeightReport>,
}

impl ConjectureReport {
    pub fn counterexample_count(&self) -> usize {
        self.heights.iter().map(|h| h.counterexamples.len()).sum()
    }
}

/// Solves every partition of a perfect binary tree of height `h` that
/// passes the necessary conditions.
pub fn test_perfect_height(solver: &Solver, h: usize) -> HeightReport {
    let tree = RootedTree::perfect_binary(h);
    let profile = tree.height_profile();
    let candidates: Vec<ColorPartition> = partitions_with_parts(tree.len(), h + 1, tree.len())
        .filter(|p| check_necessary(p, &profile).passed)
        .collect();
    let verdicts: Vec<Result<bool, SolveError>> = candidates
        .par_iter()
        .map(|p| solver.is_colorable(&tree, p).map(|r| r.is_colorable()))
        .collect();
    let mut report = HeightReport {
        h,
        n: tree.len(),
        partitions_tested: candidates.len(),
        ..Default::default()
    };
    for (partition, verdict) in candidates.into_iter().zip(verdicts) {
        match verdict {
            Ok(true) => {
                report.colorable += 1;
                if partition.classes() == h + 1 {
                    report.minimum_color_partitions.push(partition);
                }
            }
            Ok(false) => report.counterexamples.push(partition),
            Err(_) => report.budget_exceeded.push(partition),
        }
    }
    report
}

/// [`test_perfect_height`] for every height `0..=h_max`.
pub fn test_perfect_conjecture(solver: &Solver, h_max: usize) -> ConjectureReport {
    ConjectureReport {
        heights: (0..=h_max)
            .map(|h| test_perfect_height(solver, h))
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalanRow {
    pub n: usize,
    pub formula: u128,
    pub binary: usize,
    pub full_binary: usize,
    /// Distinct full binary trees obtained by completing every binary tree.
    pub bijection: usize,
    /// Every completion strips back to its binary tree.
    pub round_trip: bool,
}

impl CatalanRow {
    pub fn agrees(&self) -> bool {
        let c = self.formula as usize;
        self.binary == c && self.full_binary == c && self.bijection == c && self.round_trip
    }
}

/// Binary trees of size `n` and full binary trees of size `2n + 1`,
/// counted directly and through leaf completion, against `C_n`.
pub fn catalan_census(n_max: usize) -> Vec<CatalanRow> {
    (1..=n_max)
        .map(|n| {
            let binary: Vec<RootedTree> = enumerate_trees(TreeClass::Binary, n)
                .expect("n >= 1")
                .collect();
            let full_binary = enumerate_trees(TreeClass::FullBinary, 2 * n + 1)
                .expect("odd")
                .count();
            let mut completed = BTreeSet::new();
            let mut round_trip = true;
            for tree in &binary {
                let full = tree.complete_to_full().expect("binary");
                round_trip &= full.len() == 2 * n + 1 && full.strip_leaves().as_ref() == Ok(tree);
                completed.insert(full.serialize());
            }
            CatalanRow {
                n,
                formula: catalan(n as u64),
                binary: binary.len(),
                full_binary,
                bijection: completed.len(),
                round_trip,
            }
        })
        .collect()
}
