use std::collections::{HashMap, HashSet};
use std::fmt;

use indexmap::IndexSet;

use super::item::Item;

pub type NodeId = usize;

#[derive(Debug, Clone)]
struct Node {
    item: Item,
    parent: Option<NodeId>,
    children: Vec<NodeId>,
}

/// A root-to-leaf sequence of items (root included).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path(pub Vec<Item>);

impl Path {
    pub fn items(&self) -> &[Item] {
        &self.0
    }

    pub fn root(&self) -> &Item {
        &self.0[0]
    }

    /// The item directly below the root.
    pub fn head(&self) -> Option<&Item> {
        self.0.get(1)
    }

    /// The leaf.
    pub fn tail(&self) -> &Item {
        self.0.last().expect("paths are non-empty")
    }

    /// Number of nodes, which is the height of the leaf.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Items below the root.
    pub fn below_root(&self) -> &[Item] {
        &self.0[1..]
    }
}

/// Replaces the first node of every path with `root`, collapsing duplicates.
pub fn root_replace<'a, I>(paths: I, root: &Item) -> Vec<Path>
where
    I: IntoIterator<Item = &'a Path>,
{
    let mut seen = IndexSet::new();
    for p in paths {
        let mut items = p.0.clone();
        items[0] = root.clone();
        seen.insert(Path(items));
    }
    seen.into_iter().collect()
}

/// A rooted, ordered tree of items: the value every operator consumes and
/// produces.
///
/// Equality is path-set equality with the root ignored. Child order is kept
/// (rank needs it) but does not take part in equality.
#[derive(Debug, Clone)]
pub struct ExplorationSet {
    nodes: Vec<Node>,
}

impl Default for ExplorationSet {
    fn default() -> Self {
        ExplorationSet::new()
    }
}

impl ExplorationSet {
    /// Empty set with a fresh synthetic root.
    pub fn new() -> Self {
        ExplorationSet::with_root(Item::fresh_root())
    }

    pub fn with_root(root: Item) -> Self {
        ExplorationSet { nodes: vec![Node { item: root, parent: None, children: Vec::new() }] }
    }

    /// Depth-2 set holding `items` once each, in first-seen order.
    pub fn flat<I: IntoIterator<Item = Item>>(items: I) -> Self {
        let mut set = ExplorationSet::new();
        let mut seen = HashSet::new();
        for it in items {
            if seen.insert(it.clone()) {
                set.push_child(0, it);
            }
        }
        set
    }

    /// Builds a tree (fresh root) whose path set, below the root, is exactly
    /// the given sequences. Empty sequences are ignored and duplicates
    /// collapse. A sequence that is a strict prefix of another stays a
    /// separate leaf.
    pub fn from_paths<I, P>(paths: I) -> Self
    where
        I: IntoIterator<Item = P>,
        P: AsRef<[Item]>,
    {
        let mut b = SetBuilder::new(Item::fresh_root());
        for p in paths {
            b.insert(p.as_ref());
        }
        b.finish()
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn root_item(&self) -> &Item {
        &self.nodes[0].item
    }

    pub fn item(&self, n: NodeId) -> &Item {
        &self.nodes[n].item
    }

    pub fn children(&self, n: NodeId) -> &[NodeId] {
        &self.nodes[n].children
    }

    pub fn parent(&self, n: NodeId) -> Option<NodeId> {
        self.nodes[n].parent
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// True when the root has no children.
    pub fn is_empty(&self) -> bool {
        self.nodes[0].children.is_empty()
    }

    /// Raw builder step: appends `item` under `parent` without any dedup.
    pub fn push_child(&mut self, parent: NodeId, item: Item) -> NodeId {
        let id = self.nodes.len();
        self.nodes.push(Node { item, parent: Some(parent), children: Vec::new() });
        self.nodes[parent].children.push(id);
        id
    }

    /// Replaces the child order of `n`; `order` must be a permutation.
    pub fn reorder_children(&mut self, n: NodeId, order: Vec<NodeId>) {
        debug_assert_eq!(order.len(), self.nodes[n].children.len());
        self.nodes[n].children = order;
    }

    /// Level (height) of a node; the root is level 1.
    pub fn level(&self, mut n: NodeId) -> usize {
        let mut h = 1;
        while let Some(p) = self.nodes[n].parent {
            h += 1;
            n = p;
        }
        h
    }

    /// Maximum level of any node; a root-only set has depth 1.
    pub fn depth(&self) -> usize {
        let mut best = 1;
        let mut stack = vec![(0usize, 1usize)];
        while let Some((n, h)) = stack.pop() {
            best = best.max(h);
            for &c in &self.nodes[n].children {
                stack.push((c, h + 1));
            }
        }
        best
    }

    /// Preorder node ids, root first.
    pub fn preorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![0];
        while let Some(n) = stack.pop() {
            out.push(n);
            for &c in self.nodes[n].children.iter().rev() {
                stack.push(c);
            }
        }
        out
    }

    /// Nodes at level `lv` in preorder.
    pub fn level_nodes(&self, lv: usize) -> Vec<NodeId> {
        let mut out = Vec::new();
        if lv == 0 {
            return out;
        }
        let mut stack = vec![(0usize, 1usize)];
        while let Some((n, h)) = stack.pop() {
            if h == lv {
                out.push(n);
                continue;
            }
            for &c in self.nodes[n].children.iter().rev() {
                stack.push((c, h + 1));
            }
        }
        out
    }

    pub fn level_items(&self, lv: usize) -> Vec<Item> {
        self.level_nodes(lv).into_iter().map(|n| self.nodes[n].item.clone()).collect()
    }

    /// Leaves in preorder. A root-only set has no leaves.
    pub fn leaves(&self) -> Vec<NodeId> {
        if self.is_empty() {
            return Vec::new();
        }
        self.preorder().into_iter().filter(|&n| self.nodes[n].children.is_empty()).collect()
    }

    /// Distinct leaf items in preorder.
    pub fn leaf_items(&self) -> IndexSet<Item> {
        self.leaves().into_iter().map(|n| self.nodes[n].item.clone()).collect()
    }

    /// Items from the root down to `n`, inclusive.
    pub fn path_to(&self, mut n: NodeId) -> Vec<Item> {
        let mut out = vec![self.nodes[n].item.clone()];
        while let Some(p) = self.nodes[n].parent {
            out.push(self.nodes[p].item.clone());
            n = p;
        }
        out.reverse();
        out
    }

    /// One path per leaf, in preorder.
    pub fn paths(&self) -> Vec<Path> {
        self.leaves().into_iter().map(|l| Path(self.path_to(l))).collect()
    }

    /// Paths without the root.
    pub fn tails(&self) -> Vec<Vec<Item>> {
        self.leaves()
            .into_iter()
            .map(|l| {
                let mut p = self.path_to(l);
                p.remove(0);
                p
            })
            .collect()
    }

    pub fn path_set(&self) -> HashSet<Vec<Item>> {
        self.tails().into_iter().collect()
    }

    pub fn path_count(&self) -> usize {
        self.leaves().len()
    }

    /// Path-set equality with roots ignored.
    pub fn same_paths(&self, other: &ExplorationSet) -> bool {
        self.path_set() == other.path_set()
    }

    /// Level-2 items in child order.
    pub fn top_items(&self) -> Vec<Item> {
        self.nodes[0].children.iter().map(|&c| self.nodes[c].item.clone()).collect()
    }

    /// Copies the subtree below `src_node` (excluding it) under `dst_parent`.
    pub fn copy_children_into(&self, src_node: NodeId, dst: &mut ExplorationSet, dst_parent: NodeId) {
        let mut stack: Vec<(NodeId, NodeId)> =
            self.nodes[src_node].children.iter().rev().map(|&c| (c, dst_parent)).collect();
        while let Some((s, d)) = stack.pop() {
            let nd = dst.push_child(d, self.nodes[s].item.clone());
            for &c in self.nodes[s].children.iter().rev() {
                stack.push((c, nd));
            }
        }
    }

    /// Structural copy under a fresh root, keeping child order.
    pub fn rerooted(&self) -> ExplorationSet {
        let mut out = ExplorationSet::new();
        self.copy_children_into(0, &mut out, 0);
        out
    }

    /// Multi-line indented rendering, one node per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut stack: Vec<(NodeId, usize)> =
            self.nodes[0].children.iter().rev().map(|&c| (c, 0)).collect();
        while let Some((n, indent)) = stack.pop() {
            for _ in 0..indent {
                out.push_str("  ");
            }
            let it = &self.nodes[n].item;
            out.push_str(&it.to_string());
            if let Some(l) = it.label() {
                out.push_str("  ");
                out.push_str(l);
            }
            out.push('\n');
            for &c in self.nodes[n].children.iter().rev() {
                stack.push((c, indent + 1));
            }
        }
        out
    }

    fn fmt_node(&self, n: NodeId, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let node = &self.nodes[n];
        if node.children.is_empty() {
            return write!(f, "{}", node.item);
        }
        write!(f, "⟨{}, {{", node.item)?;
        for (i, &c) in node.children.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            self.fmt_node(c, f)?;
        }
        f.write_str("}⟩")
    }
}

impl PartialEq for ExplorationSet {
    fn eq(&self, other: &Self) -> bool {
        self.same_paths(other)
    }
}

impl fmt::Display for ExplorationSet {
    /// `{a, ⟨b, {c, d}⟩}` with the root omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, &c) in self.nodes[0].children.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            self.fmt_node(c, f)?;
        }
        f.write_str("}")
    }
}

/// Incremental trie construction used by [`ExplorationSet::from_paths`].
pub struct SetBuilder {
    set: ExplorationSet,
    // (parent, item, is_leaf) -> node
    index: HashMap<(NodeId, Item, bool), NodeId>,
}

impl SetBuilder {
    pub fn new(root: Item) -> Self {
        SetBuilder { set: ExplorationSet::with_root(root), index: HashMap::new() }
    }

    /// Adds one path (root excluded). Returns false for duplicates.
    pub fn insert(&mut self, path: &[Item]) -> bool {
        if path.is_empty() {
            return false;
        }
        let mut cur = 0;
        for (k, it) in path.iter().enumerate() {
            let leaf = k + 1 == path.len();
            let key = (cur, it.clone(), leaf);
            match self.index.get(&key) {
                Some(_) if leaf => return false,
                Some(&n) => cur = n,
                None => {
                    let n = self.set.push_child(cur, it.clone());
                    self.index.insert(key, n);
                    cur = n;
                }
            }
        }
        true
    }

    pub fn finish(self) -> ExplorationSet {
        self.set
    }
}
