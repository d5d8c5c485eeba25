//! Ancestor-distinct coloring of rooted trees.
//!
//! A coloring is valid when no node shares its color with any of its
//! ancestors. The crate verifies and constructs such colorings, checks the
//! known necessary conditions on the multiset of color-class sizes, decides
//! colorability of a size multiset exactly, optimizes class balance and runs
//! the censuses of trees for which the necessary conditions are not
//! sufficient.

pub mod check;
pub mod coloring;
pub mod dot;
pub mod enumerate;
pub mod experiments;
pub mod optimize;
pub mod partitions;
pub mod solver;
pub mod tree;

pub use check::{CheckReport, Condition, Failure};
pub use coloring::{ColorPartition, Coloring, ColoringError, Verdict};
pub use enumerate::{enumerate_trees, TreeClass};
pub use solver::{SolveError, SolveResult, Solver, Status};
pub use tree::{Axis, NodeId, Profile, RootedTree, TreeError};
