//! Graphviz DOT output, one fill color per color class.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::coloring::Coloring;
use crate::tree::RootedTree;

const PALETTE: [&str; 12] = [
    "#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#ffff33", "#a65628", "#f781bf",
    "#999999", "#66c2a5", "#fc8d62", "#8da0cb",
];

/// Renders `tree` top-down; with a coloring, each node is labeled and
/// filled by its color. Classes beyond the palette reuse it cyclically.
pub fn to_dot(tree: &RootedTree, coloring: Option<&Coloring>) -> String {
    let mut fill: BTreeMap<u32, &str> = BTreeMap::new();
    if let Some(c) = coloring {
        for (i, label) in c.class_sizes().into_keys().enumerate() {
            fill.insert(label, PALETTE[i % PALETTE.len()]);
        }
    }
    let mut out = String::new();
    out.push_str("digraph tree {\n");
    out.push_str("  node [shape=circle, style=filled, fillcolor=white];\n");
    out.push_str("  edge [arrowhead=none];\n");
    for v in tree.nodes() {
        match coloring {
            Some(c) => {
                let label = c.color(v);
                writeln!(
                    out,
                    "  n{} [label=\"{}\", fillcolor=\"{}\"];",
                    v, label, fill[&label]
                )
                .unwrap();
            }
            None => writeln!(out, "  n{} [label=\"\"];", v).unwrap(),
        }
    }
    for v in tree.nodes() {
        for c in tree.children(v) {
            writeln!(out, "  n{} -> n{};", v, c).unwrap();
        }
    }
    out.push_str("}\n");
    out
}
