use std::process::{Command, Output};

use serde_json::{json, Value};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_treecolor"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

#[test]
fn solve_not_colorable() {
    let out = run(&["solve", "--tree", "((()()()))", "--partition", "2,2,1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["status"], "not_colorable");
}

#[test]
fn solve_colorable_with_witness() {
    let out = run(&["solve", "--tree", "((()())(()()))", "--partition", "1,3,3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["status"], "colorable");
    assert_eq!(v["witness"].as_array().unwrap().len(), 7);
}

#[test]
fn solve_budget_exceeded() {
    let out = run(&[
        "solve",
        "--tree",
        "((()())(()()))",
        "--partition",
        "3,3,1",
        "--budget",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn budget_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_treecolor"))
        .args(["solve", "--tree", "((()())(()()))", "--partition", "3,3,1"])
        .env("TREECOLOR_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn canonical_height_coloring() {
    let out = run(&["color", "--canonical", "height", "--tree", "((()())(()()))"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["partition"], json!([4, 2, 1]));
}

#[test]
fn malformed_tree_is_a_usage_error() {
    let out = run(&["parse", "--tree", "(("]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("byte 2"));
}

#[test]
fn unknown_flag_is_rejected() {
    let out = run(&["parse", "--tree", "()", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn profile_and_parse() {
    let v = json_of(&run(&["profile", "--tree", "(((()))(()())())"]));
    assert_eq!(v["by_height"], json!([4, 2, 1, 1]));
    assert_eq!(v["by_depth"], json!([1, 3, 3, 1]));
    let v = json_of(&run(&["parse", "--tree", "(()(()))"]));
    assert_eq!(v["canonical_form"], "((())())");
    assert_eq!(v["n"], 4);
}

#[test]
fn tree_from_file() {
    let dir = std::env::temp_dir().join(format!("treecolor-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("tree.txt");
    std::fs::write(&path, "((()()()))\n").unwrap();
    let v = json_of(&run(&["parse", "--file", path.to_str().unwrap()]));
    assert_eq!(v["n"], 5);
}

#[test]
fn check_reports_failures() {
    let out = run(&["check", "--tree", "((()()()))", "--partition", "5"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["necessary"]["passed"], false);
    let conditions: Vec<&str> = v["necessary"]["failures"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["condition"].as_str().unwrap())
        .collect();
    assert!(conditions.contains(&"prefix_k"));

    let out = run(&["check", "--tree", "((()()()))", "--partition", "2,2,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["necessary"]["passed"], true);
    assert_eq!(v["unique_path"]["passed"], false);
}

#[test]
fn verify_valid_and_invalid() {
    let out = run(&["verify", "--tree", "((()))", "--coloring", "[1,1,2]"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["status"], "violation");
    assert_eq!(v["ancestor"], 0);
    let out = run(&["verify", "--tree", "((()))", "--coloring", "[3,1,2]"]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["verify", "--tree", "((()))", "--coloring", "[1,2]"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dot_output() {
    let out = run(&[
        "color",
        "--canonical",
        "depth",
        "--tree",
        "((()())(()()))",
        "--dot",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("digraph tree {"));
    assert_eq!(text.matches("fillcolor=\"#").count(), 7);
}

#[test]
fn optimize_min_max() {
    let out = run(&["optimize", "--tree", "((()())(()()))", "--objective", "max"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["partition"], json!([3, 3, 1]));
    assert_eq!(v["value"], 3.0);
    let v = json_of(&run(&[
        "optimize",
        "--tree",
        "((()())(()()))",
        "--objective",
        "moment:2",
    ]));
    assert_eq!(v["value"], 19.0);
    let v = json_of(&run(&[
        "optimize",
        "--tree",
        "((()()()))",
        "--greedy",
        "--colors",
        "3",
    ]));
    assert_eq!(v["partition"], json!([3, 1, 1]));
    let out = run(&["optimize", "--tree", "((()()()))", "--objective", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn optimize_cost_table() {
    let dir = std::env::temp_dir().join(format!("treecolor-cost-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cost.json");
    // convex cost favours balance
    std::fs::write(&path, "[1, 4, 9, 16, 25, 36, 49]").unwrap();
    let arg = format!("cost:{}", path.display());
    let v = json_of(&run(&[
        "optimize",
        "--tree",
        "((()())(()()))",
        "--objective",
        &arg,
    ]));
    assert_eq!(v["partition"], json!([3, 3, 1]));
    assert_eq!(v["value"], 19.0);
}

#[test]
fn partitions_listing() {
    let v = json_of(&run(&["partitions", "--tree", "((()())(()()))"]));
    let all = v["partitions"].as_array().unwrap();
    assert!(all.contains(&json!([3, 3, 1])));
    assert!(all.contains(&json!([4, 2, 1])));
}

#[test]
fn tnsc_json_lines() {
    let out = run(&["tnsc", "--class", "rooted", "--nmax", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let records: Vec<&Value> = lines.iter().filter(|l| l["kind"] == "tnsc").collect();
    assert_eq!(records.len(), 1);
    assert_eq!(records[0]["tree"], "((()()()))");
    assert_eq!(records[0]["failing_partitions"], json!([[2, 2, 1]]));
    // byte-identical reruns
    let again = run(&["tnsc", "--class", "rooted", "--nmax", "5"]);
    assert_eq!(again.stdout, text.as_bytes());
}

#[test]
fn conjecture_and_catalan() {
    let out = run(&["conjecture", "--hmax", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(
        v["heights"][2]["minimum_color_partitions"],
        json!([[4, 2, 1], [3, 3, 1]])
    );
    let out = run(&["catalan", "--nmax", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["agrees"], true);
    assert_eq!(v["rows"][7]["formula"], 1430);
}
