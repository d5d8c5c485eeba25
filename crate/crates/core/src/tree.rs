//! Rooted trees: construction, the parenthesis text format, profiles and
//! structural queries.
//!
//! Node ids are dense and assigned in preorder, so the root is always `0`
//! and the subtree of `v` occupies the contiguous id range
//! `v..v + subtree_size(v)`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Dense node index; `NodeId(0)` is the root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct NodeId(pub usize);

impl NodeId {
    pub const ROOT: NodeId = NodeId(0);

    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Position of a child under a binary parent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("empty input")]
    Empty,
    #[error("syntax error at byte {offset}: {message}")]
    Syntax {
        offset: usize,
        message: &'static str,
    },
    #[error("node {0} is not in the tree")]
    InvalidNode(usize),
    #[error("tree is not {0}")]
    WrongClass(&'static str),
    #[error("stripping the leaves of a single node leaves an empty tree")]
    EmptyStrip,
    #[error("malformed structure: {0}")]
    Malformed(&'static str),
}

/// Immutable rooted tree with precomputed depth, height and subtree sizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTree {
    children: Vec<Vec<NodeId>>,
    parent: Vec<Option<NodeId>>,
    depth: Vec<usize>,
    height: Vec<usize>,
    subtree_size: Vec<usize>,
    leaves_below: Vec<usize>,
    // Left/right slot of every non-root node; only meaningful for binary trees.
    sides: Vec<Option<Side>>,
}

impl RootedTree {
    /// Single-node tree.
    pub fn singleton() -> Self {
        Self::from_children_preorder(vec![Vec::new()], vec![None])
    }

    /// Perfect binary tree of height `h`, `2^(h+1) - 1` nodes.
    pub fn perfect_binary(h: usize) -> Self {
        let mut levels = Vec::with_capacity((1 << (h + 1)) - 1);
        fn walk(depth: usize, h: usize, levels: &mut Vec<usize>) {
            levels.push(depth);
            if depth < h {
                walk(depth + 1, h, levels);
                walk(depth + 1, h, levels);
            }
        }
        walk(0, h, &mut levels);
        Self::from_level_sequence(&levels).expect("valid level sequence")
    }

    /// Builds a tree from per-node child lists. `root` may be any node; ids
    /// are renumbered into preorder, keeping child order.
    pub fn from_children(children: &[Vec<usize>], root: usize) -> Result<Self, TreeError> {
        let n = children.len();
        if n == 0 {
            return Err(TreeError::Empty);
        }
        if root >= n {
            return Err(TreeError::InvalidNode(root));
        }
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            if seen[v] {
                return Err(TreeError::Malformed("node reachable twice"));
            }
            seen[v] = true;
            order.push(v);
            for &c in children[v].iter().rev() {
                if c >= n {
                    return Err(TreeError::InvalidNode(c));
                }
                stack.push(c);
            }
        }
        if order.len() != n {
            return Err(TreeError::Malformed(
                "not every node is reachable from the root",
            ));
        }
        let mut new_id = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            new_id[v] = i;
        }
        let mut kids = vec![Vec::new(); n];
        let mut parent = vec![None; n];
        for &v in &order {
            for &c in &children[v] {
                kids[new_id[v]].push(NodeId(new_id[c]));
                parent[new_id[c]] = Some(NodeId(new_id[v]));
            }
        }
        let sides = default_sides(&kids);
        Ok(Self::from_children_preorder_with_sides(kids, parent, sides))
    }

    /// Builds a tree from a preorder depth sequence (a level sequence).
    pub fn from_level_sequence(levels: &[usize]) -> Result<Self, TreeError> {
        if levels.is_empty() {
            return Err(TreeError::Empty);
        }
        if levels[0] != 0 {
            return Err(TreeError::Malformed("level sequence must start at 0"));
        }
        let n = levels.len();
        let mut children = vec![Vec::new(); n];
        let mut parent = vec![None; n];
        let mut stack: Vec<usize> = vec![0];
        for (i, &d) in levels.iter().enumerate().skip(1) {
            if d == 0 || d > stack.len() {
                return Err(TreeError::Malformed(
                    "level sequence jumps by more than one",
                ));
            }
            stack.truncate(d);
            let p = stack[d - 1];
            children[p].push(NodeId(i));
            parent[i] = Some(NodeId(p));
            stack.push(i);
        }
        Ok(Self::from_children_preorder(children, parent))
    }

    fn from_children_preorder(children: Vec<Vec<NodeId>>, parent: Vec<Option<NodeId>>) -> Self {
        let sides = default_sides(&children);
        Self::from_children_preorder_with_sides(children, parent, sides)
    }

    /// `children` must already be numbered in preorder.
    pub(crate) fn from_children_preorder_with_sides(
        children: Vec<Vec<NodeId>>,
        parent: Vec<Option<NodeId>>,
        sides: Vec<Option<Side>>,
    ) -> Self {
        let n = children.len();
        let mut depth = vec![0; n];
        for v in 1..n {
            depth[v] = depth[parent[v].expect("non-root has a parent").0] + 1;
        }
        let mut height = vec![0; n];
        let mut subtree_size = vec![1; n];
        let mut leaves_below = vec![0; n];
        for v in (0..n).rev() {
            if children[v].is_empty() {
                leaves_below[v] = 1;
            }
            for c in &children[v] {
                height[v] = height[v].max(height[c.0] + 1);
                subtree_size[v] += subtree_size[c.0];
                leaves_below[v] += leaves_below[c.0];
            }
        }
        RootedTree {
            children,
            parent,
            depth,
            height,
            subtree_size,
            leaves_below,
            sides,
        }
    }

    pub fn len(&self) -> usize {
        self.children.len()
    }

    pub fn is_empty(&self) -> bool {
        self.children.is_empty()
    }

    /// Height of the tree, i.e. of its root.
    pub fn height(&self) -> usize {
        self.height[0]
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.len()).map(NodeId)
    }

    pub fn contains(&self, v: NodeId) -> bool {
        v.0 < self.len()
    }

    fn check(&self, v: NodeId) -> Result<(), TreeError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(TreeError::InvalidNode(v.0))
        }
    }

    pub fn children(&self, v: NodeId) -> &[NodeId] {
        &self.children[v.0]
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.parent[v.0]
    }

    pub fn depth_of(&self, v: NodeId) -> usize {
        self.depth[v.0]
    }

    pub fn height_of(&self, v: NodeId) -> usize {
        self.height[v.0]
    }

    pub fn subtree_size(&self, v: NodeId) -> usize {
        self.subtree_size[v.0]
    }

    pub fn is_leaf(&self, v: NodeId) -> bool {
        self.children[v.0].is_empty()
    }

    pub fn side(&self, v: NodeId) -> Option<Side> {
        self.sides[v.0]
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves_below[0]
    }

    /// Every node has at most two children.
    pub fn is_binary(&self) -> bool {
        self.children.iter().all(|c| c.len() <= 2)
    }

    /// Every node has zero or two children.
    pub fn is_full_binary(&self) -> bool {
        self.children.iter().all(|c| c.is_empty() || c.len() == 2)
    }

    /// Node counts by height, `n_0..n_h`.
    pub fn height_profile(&self) -> Profile {
        let mut counts = vec![0; self.height() + 1];
        for &h in &self.height {
            counts[h] += 1;
        }
        Profile {
            counts,
            axis: Axis::ByHeight,
        }
    }

    /// Node counts by depth, `d_0..d_h`.
    pub fn depth_profile(&self) -> Profile {
        let mut counts = vec![0; self.height() + 1];
        for &d in &self.depth {
            counts[d] += 1;
        }
        Profile {
            counts,
            axis: Axis::ByDepth,
        }
    }

    /// Other children of `v`'s parent; empty for the root.
    pub fn siblings(&self, v: NodeId) -> Result<Vec<NodeId>, TreeError> {
        self.check(v)?;
        Ok(match self.parent(v) {
            None => Vec::new(),
            Some(p) => self
                .children(p)
                .iter()
                .copied()
                .filter(|&w| w != v)
                .collect(),
        })
    }

    /// The `lambda`-th ancestor of `v`: `v` itself for 0, `None` past the root.
    pub fn ancestor(&self, v: NodeId, lambda: usize) -> Result<Option<NodeId>, TreeError> {
        self.check(v)?;
        if lambda > self.depth_of(v) {
            return Ok(None);
        }
        let mut u = v;
        for _ in 0..lambda {
            u = self.parent(u).expect("depth bounds the ancestor chain");
        }
        Ok(Some(u))
    }

    /// Number of leaves in the subtree rooted at `w`.
    pub fn subtree_leaf_count(&self, w: NodeId) -> Result<usize, TreeError> {
        self.check(w)?;
        Ok(self.leaves_below[w.0])
    }

    /// Nodes on the path from the root down to `v`, root first.
    pub fn root_path(&self, v: NodeId) -> Vec<NodeId> {
        let mut path = vec![v];
        let mut u = v;
        while let Some(p) = self.parent(u) {
            path.push(p);
            u = p;
        }
        path.reverse();
        path
    }

    /// Parses the nested-parenthesis format; whitespace is ignored.
    pub fn parse(text: &str) -> Result<Self, TreeError> {
        let bytes = text.as_bytes();
        let mut children: Vec<Vec<NodeId>> = Vec::new();
        let mut parent: Vec<Option<NodeId>> = Vec::new();
        let mut open: Vec<usize> = Vec::new();
        let mut closed_root = false;
        for (offset, &b) in bytes.iter().enumerate() {
            match b {
                b'(' => {
                    if closed_root {
                        return Err(TreeError::Syntax {
                            offset,
                            message: "trailing input after the root",
                        });
                    }
                    let id = children.len();
                    let p = open.last().copied();
                    if let Some(p) = p {
                        children[p].push(NodeId(id));
                    }
                    children.push(Vec::new());
                    parent.push(p.map(NodeId));
                    open.push(id);
                }
                b')' => {
                    if open.pop().is_none() {
                        return Err(TreeError::Syntax {
                            offset,
                            message: "unmatched ')'",
                        });
                    }
                    if open.is_empty() {
                        closed_root = true;
                    }
                }
                b if b.is_ascii_whitespace() => {}
                _ => {
                    return Err(TreeError::Syntax {
                        offset,
                        message: "unexpected character",
                    })
                }
            }
        }
        if children.is_empty() {
            return Err(TreeError::Empty);
        }
        if !open.is_empty() {
            return Err(TreeError::Syntax {
                offset: bytes.len(),
                message: "unclosed '('",
            });
        }
        Ok(Self::from_children_preorder(children, parent))
    }

    /// Serializes in stored child order; inverse of [`RootedTree::parse`].
    pub fn serialize(&self) -> String {
        let mut out = String::with_capacity(2 * self.len());
        self.write_node(NodeId::ROOT, &mut out);
        out
    }

    fn write_node(&self, v: NodeId, out: &mut String) {
        out.push('(');
        for &c in self.children(v) {
            self.write_node(c, out);
        }
        out.push(')');
    }

    /// AHU encoding: equal strings iff isomorphic as unordered rooted trees.
    /// The result is itself valid tree text.
    pub fn canonical_form(&self) -> String {
        let mut codes: Vec<String> = vec![String::new(); self.len()];
        for v in (0..self.len()).rev() {
            let mut kids: Vec<String> = self.children[v]
                .iter()
                .map(|c| std::mem::take(&mut codes[c.0]))
                .collect();
            kids.sort_unstable();
            let mut code = String::with_capacity(2 * self.subtree_size[v]);
            code.push('(');
            for k in kids {
                code.push_str(&k);
            }
            code.push(')');
            codes[v] = code;
        }
        std::mem::take(&mut codes[0])
    }

    /// Removes all leaves of a full binary tree, keeping the internal
    /// skeleton with its left/right positions.
    pub fn strip_leaves(&self) -> Result<RootedTree, TreeError> {
        if !self.is_full_binary() {
            return Err(TreeError::WrongClass("full binary"));
        }
        if self.len() == 1 {
            return Err(TreeError::EmptyStrip);
        }
        // Internal nodes keep their relative preorder.
        let mut new_id = vec![usize::MAX; self.len()];
        let mut next = 0;
        for v in self.nodes() {
            if !self.is_leaf(v) {
                new_id[v.0] = next;
                next += 1;
            }
        }
        let mut children = vec![Vec::new(); next];
        let mut parent = vec![None; next];
        let mut sides = vec![None; next];
        for v in self.nodes().filter(|&v| !self.is_leaf(v)) {
            for (slot, &c) in self.children(v).iter().enumerate() {
                if self.is_leaf(c) {
                    continue;
                }
                children[new_id[v.0]].push(NodeId(new_id[c.0]));
                parent[new_id[c.0]] = Some(NodeId(new_id[v.0]));
                sides[new_id[c.0]] = Some(if slot == 0 { Side::Left } else { Side::Right });
            }
        }
        Ok(Self::from_children_preorder_with_sides(
            children, parent, sides,
        ))
    }

    /// Gives every node of a binary tree exactly two children by adding
    /// leaves in the empty left/right positions.
    pub fn complete_to_full(&self) -> Result<RootedTree, TreeError> {
        if !self.is_binary() {
            return Err(TreeError::WrongClass("binary"));
        }
        let mut children: Vec<Vec<NodeId>> = Vec::with_capacity(2 * self.len() + 1);
        let mut parent: Vec<Option<NodeId>> = Vec::with_capacity(2 * self.len() + 1);
        let mut sides: Vec<Option<Side>> = Vec::with_capacity(2 * self.len() + 1);
        self.complete_node(
            NodeId::ROOT,
            None,
            None,
            &mut children,
            &mut parent,
            &mut sides,
        );
        Ok(Self::from_children_preorder_with_sides(
            children, parent, sides,
        ))
    }

    fn complete_node(
        &self,
        v: NodeId,
        up: Option<NodeId>,
        side: Option<Side>,
        children: &mut Vec<Vec<NodeId>>,
        parent: &mut Vec<Option<NodeId>>,
        sides: &mut Vec<Option<Side>>,
    ) -> NodeId {
        let id = NodeId(children.len());
        children.push(Vec::with_capacity(2));
        parent.push(up);
        sides.push(side);
        let (left, right) = self.binary_slots(v);
        for (slot, child) in [(Side::Left, left), (Side::Right, right)] {
            let c = match child {
                Some(c) => self.complete_node(c, Some(id), Some(slot), children, parent, sides),
                None => {
                    let leaf = NodeId(children.len());
                    children.push(Vec::new());
                    parent.push(Some(id));
                    sides.push(Some(slot));
                    leaf
                }
            };
            children[id.0].push(c);
        }
        id
    }

    /// Left and right child of a node in a binary tree.
    pub fn binary_slots(&self, v: NodeId) -> (Option<NodeId>, Option<NodeId>) {
        let kids = self.children(v);
        match kids {
            [] => (None, None),
            [c] => match self.side(*c) {
                Some(Side::Right) => (None, Some(*c)),
                _ => (Some(*c), None),
            },
            [l, r, ..] => (Some(*l), Some(*r)),
        }
    }
}

fn default_sides(children: &[Vec<NodeId>]) -> Vec<Option<Side>> {
    let mut sides = vec![None; children.len()];
    for kids in children {
        for (slot, c) in kids.iter().enumerate() {
            sides[c.0] = Some(if slot == 0 { Side::Left } else { Side::Right });
        }
    }
    sides
}

impl fmt::Display for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

impl std::str::FromStr for RootedTree {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RootedTree::parse(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    ByHeight,
    ByDepth,
}

/// Node counts per level, `counts[i]` for height or depth `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Profile {
    pub counts: Vec<usize>,
    pub axis: Axis,
}

impl Profile {
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Number of nodes on the first `k` levels; saturates at the total.
    pub fn prefix_sum(&self, k: usize) -> usize {
        self.counts.iter().take(k).sum()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.counts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> RootedTree {
        RootedTree::parse(s).unwrap()
    }

    #[test]
    fn parse_smallest_tree() {
        let tree = t("()");
        assert_eq!(tree.len(), 1);
        assert_eq!(tree.height(), 0);
    }

    #[test]
    fn parse_rail_tree() {
        let tree = t("((()()()))");
        assert_eq!(tree.len(), 5);
        assert_eq!(tree.height(), 2);
        assert_eq!(tree.height_profile().counts, vec![3, 1, 1]);
    }

    #[test]
    fn parse_perfect_and_whitespace() {
        let tree = t(" ( (() ()) \n(()()) )");
        assert_eq!(tree.len(), 7);
        assert!(tree.is_full_binary());
        assert_eq!(tree.serialize(), "((()())(()()))");
    }

    #[test]
    fn parse_errors_carry_offsets() {
        assert_eq!(RootedTree::parse(""), Err(TreeError::Empty));
        assert_eq!(RootedTree::parse("  "), Err(TreeError::Empty));
        assert!(matches!(
            RootedTree::parse("(("),
            Err(TreeError::Syntax { offset: 2, .. })
        ));
        assert!(matches!(
            RootedTree::parse("())"),
            Err(TreeError::Syntax { offset: 2, .. })
        ));
        assert!(matches!(
            RootedTree::parse("()()"),
            Err(TreeError::Syntax { offset: 2, .. })
        ));
        assert!(matches!(
            RootedTree::parse("(x)"),
            Err(TreeError::Syntax { offset: 1, .. })
        ));
    }

    #[test]
    fn serialize_round_trip() {
        assert_eq!(RootedTree::singleton().serialize(), "()");
        assert_eq!(t("((()))").serialize(), "((()))");
        assert_eq!(t("((()()()))").serialize(), "((()()()))");
    }

    #[test]
    fn profiles() {
        let perfect = t("((()())(()()))");
        assert_eq!(perfect.height_profile().counts, vec![4, 2, 1]);
        assert_eq!(perfect.depth_profile().counts, vec![1, 2, 4]);
        let single = RootedTree::singleton();
        assert_eq!(single.height_profile().counts, vec![1]);
        assert_eq!(single.depth_profile().counts, vec![1]);
    }

    #[test]
    fn depth_height_figure_tree() {
        // root with three children: a path of three, a cherry-less leaf and a leaf
        let tree = t("(((()))(()())())");
        assert_eq!(tree.depth_profile().counts, vec![1, 3, 3, 1]);
        assert_eq!(tree.height_profile().counts, vec![4, 2, 1, 1]);
    }

    #[test]
    fn structural_queries() {
        let rail = t("((()()()))");
        assert!(rail.siblings(NodeId(1)).unwrap().is_empty());
        assert_eq!(
            rail.siblings(NodeId(2)).unwrap(),
            vec![NodeId(3), NodeId(4)]
        );
        assert_eq!(rail.ancestor(NodeId::ROOT, 0).unwrap(), Some(NodeId::ROOT));
        assert_eq!(rail.ancestor(NodeId(3), 2).unwrap(), Some(NodeId::ROOT));
        assert_eq!(rail.ancestor(NodeId(3), 3).unwrap(), None);
        assert_eq!(rail.siblings(NodeId(9)), Err(TreeError::InvalidNode(9)));
        let perfect = t("((()())(()()))");
        assert_eq!(perfect.subtree_leaf_count(NodeId(1)).unwrap(), 2);
        assert_eq!(perfect.subtree_leaf_count(NodeId::ROOT).unwrap(), 4);
    }

    #[test]
    fn canonical_form_ignores_child_order() {
        assert_eq!(
            t("((())())").canonical_form(),
            t("(()(()))").canonical_form()
        );
        assert_ne!(
            t("((()()()))").canonical_form(),
            t("(((((())))))").canonical_form()
        );
        let c = t("(()(()))").canonical_form();
        assert_eq!(t(&c).canonical_form(), c);
    }

    #[test]
    fn strip_and_complete() {
        assert_eq!(
            RootedTree::singleton()
                .complete_to_full()
                .unwrap()
                .serialize(),
            "(()())"
        );
        let full = t("((()())(()((()())())))");
        assert!(full.is_full_binary());
        assert_eq!(full.len(), 11);
        let skeleton = full.strip_leaves().unwrap();
        assert_eq!(skeleton.len(), 5);
        assert_eq!(skeleton.complete_to_full().unwrap(), full);
        assert_eq!(
            t("(()()())").complete_to_full(),
            Err(TreeError::WrongClass("binary"))
        );
        assert_eq!(
            t("((()))").strip_leaves(),
            Err(TreeError::WrongClass("full binary"))
        );
        assert_eq!(
            RootedTree::singleton().strip_leaves(),
            Err(TreeError::EmptyStrip)
        );
    }

    #[test]
    fn right_only_child_survives_round_trip() {
        // right child of the root is internal, left is a leaf
        let full = t("(()(()()))");
        let skeleton = full.strip_leaves().unwrap();
        assert_eq!(skeleton.binary_slots(NodeId::ROOT), (None, Some(NodeId(1))));
        assert_eq!(
            skeleton.complete_to_full().unwrap().serialize(),
            "(()(()()))"
        );
    }

    #[test]
    fn from_children_renumbers_preorder() {
        // 2 is the root with children 0 and 1; 0 has child 3
        let tree = RootedTree::from_children(&[vec![3], vec![], vec![0, 1], vec![]], 2).unwrap();
        assert_eq!(tree.serialize(), "((())())");
        assert!(RootedTree::from_children(&[vec![1], vec![0]], 0).is_err());
        assert!(RootedTree::from_children(&[vec![], vec![]], 0).is_err());
    }

    #[test]
    fn perfect_binary_shape() {
        assert_eq!(RootedTree::perfect_binary(0).serialize(), "()");
        assert_eq!(RootedTree::perfect_binary(2).serialize(), "((()())(()()))");
        assert_eq!(RootedTree::perfect_binary(4).len(), 31);
    }

    #[test]
    fn level_sequence() {
        let tree = RootedTree::from_level_sequence(&[0, 1, 2, 2, 2]).unwrap();
        assert_eq!(tree.serialize(), "((()()()))");
        assert!(RootedTree::from_level_sequence(&[0, 2]).is_err());
    }
}
