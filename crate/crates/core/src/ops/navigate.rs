use indexmap::{IndexMap, IndexSet};

use super::predicate::PathPattern;
use crate::error::{Error, Result};
use crate::model::{ExplorationSet, Item, RelationPath, RelationSource, RelationSourceExt, SetBuilder};

/// Maps the leaves of `a` through `rp`; the result is flat.
pub fn pivot(env: &dyn RelationSource, a: &ExplorationSet, rp: &RelationPath) -> Result<ExplorationSet> {
    env.validate_path(rp)?;
    let leaves = a.leaf_items();
    Ok(ExplorationSet::flat(env.image_along(rp, leaves.iter())?))
}

/// Keeps the paths of `a` accepted by `pattern`.
pub fn refine(env: &dyn RelationSource, a: &ExplorationSet, pattern: &PathPattern) -> Result<ExplorationSet> {
    pattern.validate(env)?;
    let mut b = SetBuilder::new(Item::fresh_root());
    for p in a.paths() {
        if pattern.matches(env, p.items())? {
            b.insert(p.below_root());
        }
    }
    Ok(b.finish())
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct GroupOptions {
    /// Level of the node that gets the new parent; defaults to each path's leaf.
    pub level: Option<usize>,
    /// Collect nodes with no grouping image under [`ungrouped_item`].
    pub keep_ungrouped: bool,
}

pub fn ungrouped_item() -> Item {
    Item::entity("_:ungrouped")
}

/// Inserts each item of `gR[node]` as the new parent of `node`, one output
/// path per grouping item.
pub fn group(
    env: &dyn RelationSource,
    a: &ExplorationSet,
    rp: &RelationPath,
    opts: &GroupOptions,
) -> Result<ExplorationSet> {
    env.validate_path(rp)?;
    if let Some(lv) = opts.level {
        if lv < 2 {
            return Err(Error::InvalidLevel { level: lv, reason: "the root cannot be grouped".into() });
        }
    }
    let mut b = SetBuilder::new(Item::fresh_root());
    for p in a.paths() {
        let items = p.items();
        let pos = match opts.level {
            Some(lv) if lv - 1 >= items.len() => continue,
            Some(lv) => lv - 1,
            None => items.len() - 1,
        };
        let groups = env.image_of(rp, &items[pos])?;
        let mut emit = |g: Item| {
            let mut out: Vec<Item> = items[1..pos].to_vec();
            out.push(g);
            out.extend_from_slice(&items[pos..]);
            b.insert(&out);
        };
        if groups.is_empty() {
            if opts.keep_ungrouped {
                emit(ungrouped_item());
            }
            continue;
        }
        for g in groups {
            emit(g);
        }
    }
    Ok(b.finish())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelateOptions {
    pub pattern: Option<PathPattern>,
    /// Maximum number of edges on a returned path.
    pub max_length: usize,
    /// Also walk relation edges backwards.
    pub undirected: bool,
}

impl Default for CorrelateOptions {
    fn default() -> Self {
        CorrelateOptions { pattern: None, max_length: 4, undirected: false }
    }
}

/// Every simple path of at most `max_length` edges from a leaf of `a` to a
/// leaf of `b` over the edges of all relations.
pub fn correlate(
    env: &dyn RelationSource,
    a: &ExplorationSet,
    b: &ExplorationSet,
    opts: &CorrelateOptions,
) -> Result<ExplorationSet> {
    if opts.max_length == 0 {
        return Err(Error::arg("correlate maxLength must be at least 1"));
    }
    if let Some(p) = &opts.pattern {
        p.validate(env)?;
    }
    let mut adj: IndexMap<Item, IndexSet<Item>> = IndexMap::new();
    for r in env.all_relations() {
        for (x, y) in r.pairs() {
            adj.entry(x.clone()).or_default().insert(y.clone());
            if opts.undirected {
                adj.entry(y.clone()).or_default().insert(x.clone());
            }
        }
    }
    let targets = b.leaf_items();
    let root = Item::fresh_root();
    let mut out = SetBuilder::new(root.clone());
    let mut found: Vec<Vec<Item>> = Vec::new();
    for src in a.leaf_items() {
        // iterative DFS; each frame is (node, next neighbour index)
        let mut path = vec![src.clone()];
        let mut on_path: IndexSet<Item> = IndexSet::from([src.clone()]);
        let mut cursor = vec![0usize];
        while let Some(&i) = cursor.last() {
            let node = path.last().unwrap().clone();
            let next = if path.len() <= opts.max_length {
                adj.get(&node).and_then(|ns| ns.get_index(i)).cloned()
            } else {
                None
            };
            match next {
                Some(n) => {
                    *cursor.last_mut().unwrap() += 1;
                    if on_path.contains(&n) {
                        continue;
                    }
                    path.push(n.clone());
                    on_path.insert(n.clone());
                    cursor.push(0);
                    if targets.contains(&n) {
                        found.push(path.clone());
                    }
                }
                None => {
                    cursor.pop();
                    let gone = path.pop().unwrap();
                    on_path.swap_remove(&gone);
                }
            }
        }
    }
    for p in found {
        if let Some(pat) = &opts.pattern {
            let mut full = Vec::with_capacity(p.len() + 1);
            full.push(root.clone());
            full.extend(p.iter().cloned());
            if !pat.matches(env, &full)? {
                continue;
            }
        }
        out.insert(&p);
    }
    Ok(out.finish())
}
