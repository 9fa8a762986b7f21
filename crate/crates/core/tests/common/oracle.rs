//! Brute-force reference implementations. They work on plain pair lists
//! and path sets and share no code with the operators.

use std::collections::{HashMap, HashSet};

use xplore_core::{Dataset, Item};

pub type Paths = HashSet<Vec<Item>>;

pub fn pairs(d: &Dataset, rel: &str) -> Vec<(Item, Item)> {
    d.relation_map()
        .get(rel)
        .map(|r| r.pairs().map(|(a, b)| (a.clone(), b.clone())).collect())
        .unwrap_or_default()
}

/// Image of `x` along forward relations `rels`, by scanning the pairs.
pub fn image(d: &Dataset, rels: &[&str], x: &Item) -> HashSet<Item> {
    let mut cur: HashSet<Item> = HashSet::from([x.clone()]);
    for r in rels {
        let ps = pairs(d, r);
        cur = ps.iter().filter(|(a, _)| cur.contains(a)).map(|(_, b)| b.clone()).collect();
    }
    cur
}

pub fn pivot(d: &Dataset, rels: &[&str], from: &[Item]) -> HashSet<Item> {
    from.iter().flat_map(|x| image(d, rels, x)).collect()
}

/// Keeps paths whose item at `pos` (0-based, root excluded) passes `keep`.
pub fn refine_at(paths: &Paths, pos: usize, keep: impl Fn(&Item) -> bool) -> Paths {
    paths.iter().filter(|p| p.get(pos).is_some_and(&keep)).cloned().collect()
}

/// Inserts each grouping item above position `pos` of every path
/// (`None` = the leaf). Paths without a grouping image disappear.
pub fn group(paths: &Paths, pos: Option<usize>, groups_of: impl Fn(&Item) -> HashSet<Item>) -> Paths {
    let mut out = Paths::new();
    for p in paths {
        let at = pos.unwrap_or(p.len() - 1);
        if at >= p.len() {
            continue;
        }
        for g in groups_of(&p[at]) {
            let mut q = p[..at].to_vec();
            q.push(g);
            q.extend_from_slice(&p[at..]);
            out.insert(q);
        }
    }
    out
}

pub fn unite(a: &Paths, b: &Paths) -> Paths {
    a.union(b).cloned().collect()
}

pub fn intersect(a: &Paths, b: &Paths) -> Paths {
    a.intersection(b).cloned().collect()
}

pub fn diff(a: &Paths, b: &Paths) -> Paths {
    a.difference(b).cloned().collect()
}

/// Every simple path of 1..=max_len edges from a source to a target,
/// grown breadth-first one edge at a time.
pub fn simple_paths(edges: &[(Item, Item)], sources: &[Item], targets: &HashSet<Item>, max_len: usize) -> Paths {
    let mut next: HashMap<&Item, Vec<&Item>> = HashMap::new();
    for (a, b) in edges {
        next.entry(a).or_default().push(b);
    }
    let mut out = Paths::new();
    let mut layer: Vec<Vec<Item>> = sources.iter().map(|s| vec![s.clone()]).collect();
    for _ in 0..max_len {
        let mut grown = Vec::new();
        for p in &layer {
            for n in next.get(p.last().unwrap()).into_iter().flatten() {
                if p.contains(n) {
                    continue;
                }
                let mut q = p.clone();
                q.push((*n).clone());
                if targets.contains(n) {
                    out.insert(q.clone());
                }
                grown.push(q);
            }
        }
        layer = grown;
    }
    out
}
