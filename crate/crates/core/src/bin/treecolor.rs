//! Command-line front end. Standard output carries exactly one JSON document
//! (JSON lines for `tnsc`); diagnostics go to standard error.
//!
//! Exit codes: 0 success or positive verdict, 1 negative verdict, 2 usage or
//! parse error, 3 expansion budget exceeded.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use treecolor::check::{check_necessary, check_node_bounds, check_unique_path};
use treecolor::coloring::{canonical_by_depth, canonical_by_height, min_colors, verify_coloring};
use treecolor::dot::to_dot;
use treecolor::experiments::{catalan_census, find_tnsc, test_perfect_conjecture};
use treecolor::optimize::{greedy_balance, optimize, ColorBudget, Objective, OptimizeError};
use treecolor::solver::{SolveError, Solver};
use treecolor::{ColorPartition, Coloring, RootedTree, TreeClass};

#[derive(Parser)]
#[command(
    name = "treecolor",
    version,
    about = "Ancestor-distinct coloring of rooted trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a tree and print its structure.
    Parse(TreeInput),
    /// Height and depth profiles.
    Profile(TreeInput),
    /// Canonical coloring by depth or height.
    Color {
        #[command(flatten)]
        input: TreeInput,
        #[arg(long, value_enum)]
        canonical: Canonical,
        /// Emit Graphviz DOT instead of JSON.
        #[arg(long)]
        dot: bool,
    },
    /// Check a coloring (JSON array of per-node colors, preorder).
    Verify {
        #[command(flatten)]
        input: TreeInput,
        #[arg(long)]
        coloring: String,
        #[arg(long)]
        dot: bool,
    },
    /// Necessary conditions on a partition.
    Check(PartitionInput),
    /// Decide whether a partition is colorable.
    Solve(PartitionInput),
    /// Every colorable partition of a tree.
    Partitions {
        #[command(flatten)]
        input: TreeInput,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// Best balanced coloring under an objective.
    Optimize {
        #[command(flatten)]
        input: TreeInput,
        /// max | moment:<p> | entropy | cost:<file>
        #[arg(long, default_value = "max")]
        objective: String,
        /// chi | <N> (at most N colors)
        #[arg(long, default_value = "chi")]
        colors: String,
        /// Use the greedy heuristic instead of exact search.
        #[arg(long)]
        greedy: bool,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// Census of trees whose necessary conditions are not sufficient.
    Tnsc {
        #[arg(long, value_enum)]
        class: ClassArg,
        #[arg(long)]
        nmax: usize,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// Check sufficiency of the necessary conditions on perfect binary trees.
    Conjecture {
        #[arg(long)]
        hmax: usize,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// Binary and full binary tree counts against the Catalan numbers.
    Catalan {
        #[arg(long)]
        nmax: usize,
    },
}

#[derive(Args)]
struct TreeInput {
    /// Tree text, e.g. "((()())(()()))".
    #[arg(long, conflicts_with = "file", required_unless_present = "file")]
    tree: Option<String>,
    /// File holding the tree text.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct PartitionInput {
    #[command(flatten)]
    input: TreeInput,
    /// Comma-separated class sizes, any order.
    #[arg(long)]
    partition: String,
    #[command(flatten)]
    budget: BudgetArg,
}

#[derive(Args)]
struct BudgetArg {
    /// Node-expansion cap per search; defaults to $TREECOLOR_BUDGET or 10^8.
    #[arg(long)]
    budget: Option<u64>,
}

impl BudgetArg {
    fn solver(&self) -> Solver {
        match self.budget {
            Some(b) => Solver::new(b),
            None => Solver::from_env(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Canonical {
    Depth,
    Height,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    Rooted,
    Binary,
    #[value(alias = "full_binary")]
    Full,
}

impl From<ClassArg> for TreeClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Rooted => TreeClass::Rooted,
            ClassArg::Binary => TreeClass::Binary,
            ClassArg::Full => TreeClass::FullBinary,
        }
    }
}

/// What a command produced.
enum Output {
    Json(Value, ExitCode),
    Text(String, ExitCode),
}

struct Failure {
    message: String,
    code: u8,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            message: message.into(),
            code: 2,
        }
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        let code = match e {
            SolveError::BudgetExceeded { .. } => 3,
            SolveError::TooManyClasses(_) => 2,
        };
        Failure {
            message: e.to_string(),
            code,
        }
    }
}

impl From<OptimizeError> for Failure {
    fn from(e: OptimizeError) -> Self {
        match e {
            OptimizeError::Solve(s) => s.into(),
            other => Failure::usage(other.to_string()),
        }
    }
}

fn verdict(positive: bool) -> ExitCode {
    if positive {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn load_tree(input: &TreeInput) -> Result<RootedTree, Failure> {
    let text = match (&input.tree, &input.file) {
        (Some(t), _) => t.clone(),
        (None, Some(path)) => fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?,
        (None, None) => return Err(Failure::usage("missing --tree or --file")),
    };
    RootedTree::parse(&text).map_err(|e| Failure::usage(format!("invalid tree: {e}")))
}

fn load_partition(text: &str) -> Result<ColorPartition, Failure> {
    text.parse()
        .map_err(|e| Failure::usage(format!("invalid partition: {e}")))
}

fn load_objective(text: &str) -> Result<Objective, Failure> {
    if let Some(path) = text.strip_prefix("cost:") {
        let raw = fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read cost table {path}: {e}")))?;
        let table: Vec<f64> = serde_json::from_str(&raw).map_err(|e| {
            Failure::usage(format!("cost table must be a JSON array of numbers: {e}"))
        })?;
        return Ok(Objective::Cost(table));
    }
    text.parse()
        .map_err(|e: OptimizeError| Failure::usage(e.to_string()))
}

fn tree_json(tree: &RootedTree) -> Value {
    json!({
        "tree": tree.serialize(),
        "canonical_form": tree.canonical_form(),
        "n": tree.len(),
        "height": tree.height(),
        "leaves": tree.leaf_count(),
        "binary": tree.is_binary(),
        "full_binary": tree.is_full_binary(),
    })
}

fn run(command: Command) -> Result<Output, Failure> {
    Ok(match command {
        Command::Parse(input) => Output::Json(tree_json(&load_tree(&input)?), ExitCode::SUCCESS),
        Command::Profile(input) => {
            let tree = load_tree(&input)?;
            Output::Json(
                json!({
                    "n": tree.len(),
                    "height": tree.height(),
                    "by_height": tree.height_profile().counts,
                    "by_depth": tree.depth_profile().counts,
                }),
                ExitCode::SUCCESS,
            )
        }
        Command::Color {
            input,
            canonical,
            dot,
        } => {
            let tree = load_tree(&input)?;
            let coloring = match canonical {
                Canonical::Depth => canonical_by_depth(&tree),
                Canonical::Height => canonical_by_height(&tree),
            };
            if dot {
                Output::Text(to_dot(&tree, Some(&coloring)), ExitCode::SUCCESS)
            } else {
                Output::Json(
                    json!({
                        "coloring": coloring,
                        "partition": coloring.partition(),
                        "colors": min_colors(&tree),
                    }),
                    ExitCode::SUCCESS,
                )
            }
        }
        Command::Verify {
            input,
            coloring,
            dot,
        } => {
            let tree = load_tree(&input)?;
            let colors: Vec<u32> = serde_json::from_str(&coloring)
                .map_err(|e| Failure::usage(format!("coloring must be a JSON array: {e}")))?;
            let coloring = Coloring::new(colors).map_err(|e| Failure::usage(e.to_string()))?;
            let result =
                verify_coloring(&tree, &coloring).map_err(|e| Failure::usage(e.to_string()))?;
            let code = verdict(result.is_valid());
            if dot {
                Output::Text(to_dot(&tree, Some(&coloring)), code)
            } else {
                let mut value = serde_json::to_value(result).expect("serializable");
                value["partition"] = json!(coloring.partition());
                Output::Json(value, code)
            }
        }
        Command::Check(args) => {
            let tree = load_tree(&args.input)?;
            let partition = load_partition(&args.partition)?;
            let necessary = check_necessary(&partition, &tree.height_profile());
            let unique_path = check_unique_path(&partition, &tree);
            let node_bounds = check_node_bounds(&partition, &tree);
            let passed = necessary.passed && unique_path.passed && node_bounds.passed;
            Output::Json(
                json!({
                    "partition": partition,
                    "passed": passed,
                    "necessary": necessary,
                    "unique_path": unique_path,
                    "node_bounds": node_bounds,
                }),
                verdict(necessary.passed),
            )
        }
        Command::Solve(args) => {
            let tree = load_tree(&args.input)?;
            let partition = load_partition(&args.partition)?;
            let result = args.budget.solver().is_colorable(&tree, &partition)?;
            let code = verdict(result.is_colorable());
            Output::Json(serde_json::to_value(&result).expect("serializable"), code)
        }
        Command::Partitions { input, budget } => {
            let tree = load_tree(&input)?;
            let all = budget.solver().all_colorable_partitions(&tree)?;
            Output::Json(
                json!({ "count": all.len(), "partitions": all }),
                ExitCode::SUCCESS,
            )
        }
        Command::Optimize {
            input,
            objective,
            colors,
            greedy,
            budget,
        } => {
            let tree = load_tree(&input)?;
            let objective = load_objective(&objective)?;
            let budget_colors = match colors.as_str() {
                "chi" => ColorBudget::ExactlyChi,
                n => ColorBudget::AtMost(
                    n.parse()
                        .map_err(|_| Failure::usage(format!("invalid --colors {n:?}")))?,
                ),
            };
            if greedy {
                let count = match budget_colors {
                    ColorBudget::ExactlyChi => tree.height() + 1,
                    ColorBudget::AtMost(c) => c,
                };
                let (coloring, partition) = greedy_balance(&tree, count)?;
                let value = objective.value(&partition)?;
                Output::Json(
                    json!({ "partition": partition, "value": value, "witness": coloring, "exact": false }),
                    ExitCode::SUCCESS,
                )
            } else {
                let best = optimize(&budget.solver(), &tree, &objective, budget_colors)?;
                Output::Json(
                    json!({
                        "partition": best.partition,
                        "value": best.value,
                        "witness": best.witness,
                        "exact": true,
                    }),
                    ExitCode::SUCCESS,
                )
            }
        }
        Command::Tnsc {
            class,
            nmax,
            budget,
        } => {
            let census = find_tnsc(&budget.solver(), class.into(), nmax);
            let code = if census.is_complete() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            };
            Output::Text(census.to_json_lines(), code)
        }
        Command::Conjecture { hmax, budget } => {
            let report = test_perfect_conjecture(&budget.solver(), hmax);
            let unresolved: usize = report.heights.iter().map(|h| h.budget_exceeded.len()).sum();
            let code = if unresolved > 0 {
                ExitCode::from(3)
            } else {
                verdict(report.counterexample_count() == 0)
            };
            Output::Json(serde_json::to_value(&report).expect("serializable"), code)
        }
        Command::Catalan { nmax } => {
            let rows = catalan_census(nmax);
            let ok = rows.iter().all(|r| r.agrees());
            Output::Json(json!({ "agrees": ok, "rows": rows }), verdict(ok))
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(Output::Json(value, code)) => {
            println!("{value}");
            code
        }
        Ok(Output::Text(text, code)) => {
            print!("{text}");
            code
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
