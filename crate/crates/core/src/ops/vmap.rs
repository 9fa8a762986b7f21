//! Vertical maps: functions over the edges of each path.

use super::expr::{Scope, ValueExpr};
use crate::error::Result;
use crate::model::{ExplorationSet, Item, RelationSource, SetBuilder};

fn leaves_with_nodes(a: &ExplorationSet) -> Vec<(Vec<usize>, Vec<Item>)> {
    a.leaves()
        .into_iter()
        .map(|l| {
            let mut nodes = vec![l];
            let mut n = l;
            while let Some(p) = a.parent(n) {
                nodes.push(p);
                n = p;
            }
            nodes.pop(); // root
            nodes.reverse();
            let items = nodes.iter().map(|&n| a.item(n).clone()).collect();
            (nodes, items)
        })
        .collect()
}

/// Maps every edge `⟨i, j⟩` to `⟨f(i), f(j)⟩`; since edges share endpoints
/// this is `f` applied to every non-root node of every path.
pub fn tvmap(env: &dyn RelationSource, a: &ExplorationSet, f: &ValueExpr) -> Result<ExplorationSet> {
    f.validate(env)?;
    let mut b = SetBuilder::new(Item::fresh_root());
    for (nodes, items) in leaves_with_nodes(a) {
        let mapped = nodes
            .iter()
            .zip(&items)
            .map(|(&n, it)| f.map_item(&Scope { env, item: it, node: Some((a, n)) }))
            .collect::<Result<Vec<_>>>()?;
        b.insert(&mapped);
    }
    Ok(b.finish())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeFold {
    /// `f(⟨a, b⟩, ⟨c, d⟩) = ⟨a, d⟩`: a path collapses to its endpoints.
    Compose,
    /// `f(⟨a, b⟩, ⟨_, k⟩) = ⟨a, k + 1⟩`: a path becomes its edge count.
    Length,
}

impl EdgeFold {
    pub fn name(self) -> &'static str {
        match self {
            EdgeFold::Compose => "compose",
            EdgeFold::Length => "length",
        }
    }

    pub fn from_name(s: &str) -> Option<EdgeFold> {
        match s.to_ascii_lowercase().as_str() {
            "compose" => Some(EdgeFold::Compose),
            "length" => Some(EdgeFold::Length),
            _ => None,
        }
    }
}

/// Folds each path's edges from the right with a null seed.
pub fn avmap(a: &ExplorationSet, f: EdgeFold) -> ExplorationSet {
    let mut b = SetBuilder::new(Item::fresh_root());
    for (_, items) in leaves_with_nodes(a) {
        let head = items[0].clone();
        let out = match f {
            EdgeFold::Compose => {
                let mut acc: Option<(Item, Item)> = None;
                for w in items.windows(2).rev() {
                    acc = Some(match acc {
                        None => (w[0].clone(), w[1].clone()),
                        Some((_, d)) => (w[0].clone(), d),
                    });
                }
                match acc {
                    Some((x, y)) => vec![x, y],
                    None => vec![head],
                }
            }
            EdgeFold::Length => {
                let mut acc: (Option<Item>, i64) = (None, 0);
                for w in items.windows(2).rev() {
                    acc = (Some(w[0].clone()), acc.1 + 1);
                }
                vec![acc.0.unwrap_or(head), Item::int(acc.1)]
            }
        };
        b.insert(&out);
    }
    b.finish()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeCombine {
    /// First and last node.
    Endpoints,
    /// First node and the number of edges.
    Length,
    /// First node and a string listing every node id.
    Trace,
}

impl EdgeCombine {
    pub fn name(self) -> &'static str {
        match self {
            EdgeCombine::Endpoints => "endpoints",
            EdgeCombine::Length => "length",
            EdgeCombine::Trace => "trace",
        }
    }

    pub fn from_name(s: &str) -> Option<EdgeCombine> {
        match s.to_ascii_lowercase().as_str() {
            "endpoints" => Some(EdgeCombine::Endpoints),
            "length" => Some(EdgeCombine::Length),
            "trace" => Some(EdgeCombine::Trace),
            _ => None,
        }
    }
}

/// Applies `f` once to all edges of each path.
pub fn cvmap(a: &ExplorationSet, f: EdgeCombine) -> ExplorationSet {
    let mut b = SetBuilder::new(Item::fresh_root());
    for (_, items) in leaves_with_nodes(a) {
        let first = items[0].clone();
        let out = match f {
            EdgeCombine::Endpoints if items.len() > 1 => vec![first, items[items.len() - 1].clone()],
            EdgeCombine::Endpoints => vec![first],
            EdgeCombine::Length => vec![first, Item::int(items.len() as i64 - 1)],
            EdgeCombine::Trace => {
                let trace = items.iter().map(Item::id).collect::<Vec<_>>().join("/");
                vec![first, Item::string(trace)]
            }
        };
        b.insert(&out);
    }
    b.finish()
}
