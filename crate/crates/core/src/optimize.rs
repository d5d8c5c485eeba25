//! Balanced colorings.
//!
//! Every objective is minimized: the largest class, the `p`-th moment
//! `sum a_i^p`, the negated coloring entropy `sum a_i ln a_i` (any log base
//! gives the same minimizer), or a tabulated cost `sum f(a_i)`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::coloring::{ColorPartition, Coloring};
use crate::solver::{SolveError, Solver, Status};
use crate::tree::RootedTree;

#[derive(Debug, Error, PartialEq)]
pub enum OptimizeError {
    #[error("cost table has no entry for class size {0}")]
    MissingCost(usize),
    #[error("moment order must be finite and positive, got {0}")]
    BadMoment(f64),
    #[error("{colors} colors cannot color a tree of height {height}")]
    TooFewColors { colors: usize, height: usize },
    #[error("unknown objective {0:?}")]
    UnknownObjective(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Objective {
    MinMax,
    /// `sum a_i^p`, `p > 0`.
    Moment(f64),
    /// Maximize entropy, exposed as minimizing `sum a_i ln a_i`.
    MaxEntropy,
    /// `sum f(a_i)` with `costs[a - 1] = f(a)`.
    Cost(Vec<f64>),
}

impl Objective {
    pub fn moment(p: f64) -> Result<Self, OptimizeError> {
        if p.is_finite() && p > 0.0 {
            Ok(Objective::Moment(p))
        } else {
            Err(OptimizeError::BadMoment(p))
        }
    }

    pub fn value(&self, partition: &ColorPartition) -> Result<f64, OptimizeError> {
        objective_value(partition, self)
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Objective::MinMax => write!(f, "max"),
            Objective::Moment(p) => write!(f, "moment:{p}"),
            Objective::MaxEntropy => write!(f, "entropy"),
            Objective::Cost(_) => write!(f, "cost"),
        }
    }
}

/// `max`, `entropy` or `moment:<p>`. Cost tables are loaded separately.
impl FromStr for Objective {
    type Err = OptimizeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "max" => Ok(Objective::MinMax),
            "entropy" => Ok(Objective::MaxEntropy),
            other => match other.strip_prefix("moment:") {
                Some(p) => {
                    let p: f64 = p
                        .parse()
                        .map_err(|_| OptimizeError::UnknownObjective(s.into()))?;
                    Objective::moment(p)
                }
                None => Err(OptimizeError::UnknownObjective(s.into())),
            },
        }
    }
}

pub fn objective_value(
    partition: &ColorPartition,
    objective: &Objective,
) -> Result<f64, OptimizeError> {
    let sizes = partition.sizes();
    Ok(match objective {
        Objective::MinMax => partition.largest() as f64,
        Objective::Moment(p) => sizes.iter().map(|&a| (a as f64).powf(*p)).sum(),
        Objective::MaxEntropy => sizes.iter().map(|&a| a as f64 * (a as f64).ln()).sum(),
        Objective::Cost(table) => {
            let mut total = 0.0;
            for &a in sizes {
                total += table
                    .get(a - 1)
                    .copied()
                    .ok_or(OptimizeError::MissingCost(a))?;
            }
            total
        }
    })
}

/// How many colors a solution may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColorBudget {
    /// Exactly the minimum, height + 1.
    ExactlyChi,
    AtMost(usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct Optimum {
    pub partition: ColorPartition,
    pub value: f64,
    pub witness: Coloring,
}

/// Exact optimum over all colorable partitions within the color budget.
/// Ties go to the lexicographically smallest partition.
pub fn optimize(
    solver: &Solver,
    tree: &RootedTree,
    objective: &Objective,
    colors: ColorBudget,
) -> Result<Optimum, OptimizeError> {
    let chi = tree.height() + 1;
    let max_parts = match colors {
        ColorBudget::ExactlyChi => chi,
        ColorBudget::AtMost(c) if c < chi => {
            return Err(OptimizeError::TooFewColors {
                colors: c,
                height: tree.height(),
            })
        }
        ColorBudget::AtMost(c) => c.min(tree.len()),
    };
    let candidates = solver.colorable_partitions_with_parts(tree, chi, max_parts)?;
    let mut best: Option<(f64, ColorPartition)> = None;
    for partition in candidates {
        let value = objective_value(&partition, objective)?;
        let better = match &best {
            None => true,
            Some((v, q)) => value.total_cmp(v).then_with(|| partition.cmp(q)).is_lt(),
        };
        if better {
            best = Some((value, partition));
        }
    }
    let (value, partition) = best.expect("the height profile is always colorable");
    let witness = match solver.is_colorable(tree, &partition)?.status {
        Status::Colorable(w) => w,
        Status::NotColorable => unreachable!("partition was certified colorable"),
    };
    Ok(Optimum {
        partition,
        value,
        witness,
    })
}

/// Baseline heuristic: nodes by decreasing height, each takes the least
/// loaded color absent from its root path.
pub fn greedy_balance(
    tree: &RootedTree,
    colors: usize,
) -> Result<(Coloring, ColorPartition), OptimizeError> {
    if colors < tree.height() + 1 {
        return Err(OptimizeError::TooFewColors {
            colors,
            height: tree.height(),
        });
    }
    let mut order: Vec<_> = tree.nodes().collect();
    order.sort_by(|&a, &b| tree.height_of(b).cmp(&tree.height_of(a)).then(a.cmp(&b)));
    let mut load = vec![0usize; colors];
    let mut assigned = vec![0u32; tree.len()];
    for v in order {
        // ancestors have greater height, so they are already colored
        let path: Vec<u32> = tree.root_path(v)[..tree.depth_of(v)]
            .iter()
            .map(|u| assigned[u.0])
            .collect();
        let c = (0..colors)
            .filter(|&c| !path.contains(&(c as u32 + 1)))
            .min_by_key(|&c| (load[c], c))
            .expect("a root path has at most `height` ancestors");
        load[c] += 1;
        assigned[v.0] = c as u32 + 1;
    }
    let coloring = Coloring::new(assigned).expect("labels are positive");
    let partition = coloring.partition();
    Ok((coloring, partition))
}
