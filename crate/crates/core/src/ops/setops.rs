use std::collections::HashSet;

use crate::model::{ExplorationSet, Item};

/// Paths of `a` followed by the paths of `b` not already present.
pub fn unite(a: &ExplorationSet, b: &ExplorationSet) -> ExplorationSet {
    ExplorationSet::from_paths(a.tails().into_iter().chain(b.tails()))
}

pub fn intersect(a: &ExplorationSet, b: &ExplorationSet) -> ExplorationSet {
    let bs: HashSet<Vec<Item>> = b.path_set();
    ExplorationSet::from_paths(a.tails().into_iter().filter(|p| bs.contains(p)))
}

pub fn diff(a: &ExplorationSet, b: &ExplorationSet) -> ExplorationSet {
    let bs: HashSet<Vec<Item>> = b.path_set();
    ExplorationSet::from_paths(a.tails().into_iter().filter(|p| !bs.contains(p)))
}
