//! Horizontal maps: functions applied to the children of each node at a level.

use indexmap::IndexSet;

use super::expr::{Scope, ValueExpr};
use crate::error::{Error, Result};
use crate::model::{ExplorationSet, Item, NodeId, RelationSource};

/// `max(1, depth - 1)`: the parents of the deepest leaves.
pub fn default_level(a: &ExplorationSet) -> usize {
    a.depth().saturating_sub(1).max(1)
}

fn check_level(a: &ExplorationSet, lv: usize) -> Result<()> {
    let depth = a.depth();
    if lv == 0 || lv > depth {
        return Err(Error::InvalidLevel { level: lv, reason: format!("expected 1 <= level <= {depth}") });
    }
    Ok(())
}

/// Copies `a`, replacing the children of every level-`lv` node with the
/// leaves returned by `f`. Subtrees below those children are dropped.
fn replace_children<F>(a: &ExplorationSet, lv: usize, mut f: F) -> Result<ExplorationSet>
where
    F: FnMut(NodeId) -> Result<Vec<Item>>,
{
    let mut out = ExplorationSet::new();
    let mut stack = vec![(a.root(), out.root(), 1usize)];
    while let Some((src, dst, h)) = stack.pop() {
        if h == lv {
            let mut seen = IndexSet::new();
            for it in f(src)? {
                if seen.insert(it.clone()) {
                    out.push_child(dst, it);
                }
            }
            continue;
        }
        let mut pushed = Vec::new();
        for &c in a.children(src) {
            let n = out.push_child(dst, a.item(c).clone());
            pushed.push((c, n, h + 1));
        }
        stack.extend(pushed.into_iter().rev());
    }
    Ok(out)
}

/// Transformation map: each child `c` of a level-`lv` node becomes `f(c)`.
pub fn thmap(env: &dyn RelationSource, a: &ExplorationSet, lv: Option<usize>, f: &ValueExpr) -> Result<ExplorationSet> {
    f.validate(env)?;
    let lv = lv.unwrap_or_else(|| default_level(a));
    check_level(a, lv)?;
    replace_children(a, lv, |n| {
        a.children(n)
            .iter()
            .map(|&c| f.map_item(&Scope { env, item: a.item(c), node: Some((a, c)) }))
            .collect()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Aggregation {
    Count,
    Sum,
    Mean,
    Min,
    Max,
}

impl Aggregation {
    pub fn name(self) -> &'static str {
        match self {
            Aggregation::Count => "count",
            Aggregation::Sum => "sum",
            Aggregation::Mean => "mean",
            Aggregation::Min => "min",
            Aggregation::Max => "max",
        }
    }

    pub fn from_name(s: &str) -> Option<Aggregation> {
        Some(match s.to_ascii_lowercase().as_str() {
            "count" => Aggregation::Count,
            "sum" => Aggregation::Sum,
            "mean" | "avg" | "average" => Aggregation::Mean,
            "min" => Aggregation::Min,
            "max" => Aggregation::Max,
            _ => return None,
        })
    }
}

/// Running value of a fold; `Acc::seed` stands for the null initial value.
#[derive(Debug, Clone)]
enum Acc {
    Count(i64),
    Sum { int: i64, float: f64, is_float: bool },
    Mean { sum: f64, n: usize },
    Extreme(Option<(f64, Item)>),
}

impl Acc {
    fn seed(agg: Aggregation) -> Acc {
        match agg {
            Aggregation::Count => Acc::Count(0),
            Aggregation::Sum => Acc::Sum { int: 0, float: 0.0, is_float: false },
            Aggregation::Mean => Acc::Mean { sum: 0.0, n: 0 },
            Aggregation::Min | Aggregation::Max => Acc::Extreme(None),
        }
    }

    /// `f(child, acc)`
    fn step(self, agg: Aggregation, child: &Item) -> Result<Acc> {
        let num = || {
            child.numeric().ok_or_else(|| Error::Mapping {
                item: child.id().to_string(),
                reason: format!("{} needs numeric children", agg.name()),
            })
        };
        Ok(match self {
            Acc::Count(n) => Acc::Count(n + 1),
            Acc::Sum { int, float, is_float } => match child.as_int() {
                Some(i) if !is_float => match int.checked_add(i) {
                    Some(s) => Acc::Sum { int: s, float: float + i as f64, is_float },
                    None => Acc::Sum { int, float: float + i as f64, is_float: true },
                },
                _ => Acc::Sum { int, float: float + num()?, is_float: true },
            },
            Acc::Mean { sum, n } => Acc::Mean { sum: sum + num()?, n: n + 1 },
            Acc::Extreme(best) => {
                let v = num()?;
                let better = match &best {
                    None => true,
                    Some((b, _)) if agg == Aggregation::Min => v < *b,
                    Some((b, _)) => v > *b,
                };
                Acc::Extreme(if better { Some((v, child.clone())) } else { best })
            }
        })
    }

    fn finish(self) -> Option<Item> {
        match self {
            Acc::Count(n) => Some(Item::int(n)),
            Acc::Sum { int, is_float: false, .. } => Some(Item::int(int)),
            Acc::Sum { float, .. } => Some(Item::float(float)),
            Acc::Mean { n: 0, .. } => None,
            Acc::Mean { sum, n } => Some(Item::float(sum / n as f64)),
            Acc::Extreme(best) => best.map(|(_, it)| it),
        }
    }
}

/// Aggregation map: the children of each level-`lv` node fold to one value,
/// `f(c1, f(c2, ... f(cn, null)))`.
pub fn ahmap(a: &ExplorationSet, lv: Option<usize>, agg: Aggregation) -> Result<ExplorationSet> {
    let lv = lv.unwrap_or_else(|| default_level(a));
    check_level(a, lv)?;
    replace_children(a, lv, |n| {
        let mut acc = Acc::seed(agg);
        for &c in a.children(n).iter().rev() {
            acc = acc.step(agg, a.item(c))?;
        }
        Ok(acc.finish().into_iter().collect())
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combine {
    Product,
    Sum,
    /// Joins item ids with `|` into a string literal.
    Concat,
    Difference,
    Ratio,
}

impl Combine {
    pub fn name(self) -> &'static str {
        match self {
            Combine::Product => "product",
            Combine::Sum => "sum",
            Combine::Concat => "concat",
            Combine::Difference => "difference",
            Combine::Ratio => "ratio",
        }
    }

    pub fn from_name(s: &str) -> Option<Combine> {
        Some(match s.to_ascii_lowercase().as_str() {
            "product" => Combine::Product,
            "sum" => Combine::Sum,
            "concat" => Combine::Concat,
            "difference" | "diff" => Combine::Difference,
            "ratio" => Combine::Ratio,
            _ => return None,
        })
    }

    /// Fixed arity, or `None` for variadic functions.
    pub fn arity(self) -> Option<usize> {
        match self {
            Combine::Difference | Combine::Ratio => Some(2),
            _ => None,
        }
    }

    fn apply(self, tuple: &[&Item]) -> Result<Item> {
        let nums = || -> Result<Vec<f64>> {
            tuple
                .iter()
                .map(|it| {
                    it.numeric().ok_or_else(|| Error::Mapping {
                        item: it.id().to_string(),
                        reason: format!("{} needs numeric items", self.name()),
                    })
                })
                .collect()
        };
        let all_int = tuple.iter().all(|it| it.as_int().is_some());
        Ok(match self {
            Combine::Concat => Item::string(tuple.iter().map(|i| i.id()).collect::<Vec<_>>().join("|")),
            Combine::Product => Item::number(nums()?.iter().product(), all_int),
            Combine::Sum => Item::number(nums()?.iter().sum(), all_int),
            Combine::Difference => {
                let v = nums()?;
                Item::number(v[0] - v[1], all_int)
            }
            Combine::Ratio => {
                let v = nums()?;
                if v[1] == 0.0 {
                    return Err(Error::Mapping { item: tuple[1].id().to_string(), reason: "division by zero".into() });
                }
                Item::float(v[0] / v[1])
            }
        })
    }
}

/// Which ordered tuples of a node's children a combination map sees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selector {
    /// Every n-tuple with repetition: k children give kⁿ tuples.
    All(usize),
    /// Tuples of n distinct positions in increasing order.
    Distinct(usize),
    /// The single tuple at these 0-based positions; nodes with too few
    /// children contribute nothing.
    Positions(Vec<usize>),
}

impl Selector {
    pub fn tuple_len(&self) -> usize {
        match self {
            Selector::All(n) | Selector::Distinct(n) => *n,
            Selector::Positions(p) => p.len(),
        }
    }

    fn tuples(&self, k: usize) -> Vec<Vec<usize>> {
        let n = self.tuple_len();
        if n == 0 {
            return Vec::new();
        }
        match self {
            Selector::Positions(p) => {
                if p.iter().all(|&i| i < k) {
                    vec![p.clone()]
                } else {
                    Vec::new()
                }
            }
            Selector::All(_) => {
                let mut out = vec![Vec::new()];
                for _ in 0..n {
                    out = out
                        .into_iter()
                        .flat_map(|t| {
                            (0..k).map(move |i| {
                                let mut t = t.clone();
                                t.push(i);
                                t
                            })
                        })
                        .collect();
                }
                out
            }
            Selector::Distinct(_) => {
                fn rec(start: usize, k: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
                    if left == 0 {
                        out.push(cur.clone());
                        return;
                    }
                    for i in start..k {
                        cur.push(i);
                        rec(i + 1, k, left - 1, cur, out);
                        cur.pop();
                    }
                }
                let mut out = Vec::new();
                rec(0, k, n, &mut Vec::new(), &mut out);
                out
            }
        }
    }
}

/// Combination map: children of each level-`lv` node become
/// `{ f(t) | t selected from c(node)ⁿ }`.
pub fn chmap(a: &ExplorationSet, lv: Option<usize>, f: Combine, sel: &Selector) -> Result<ExplorationSet> {
    let n = sel.tuple_len();
    if let Some(k) = f.arity() {
        if k != n {
            return Err(Error::Arity(format!("{} takes {k} items but the selector yields {n}-tuples", f.name())));
        }
    }
    let lv = lv.unwrap_or_else(|| default_level(a));
    check_level(a, lv)?;
    replace_children(a, lv, |node| {
        let kids: Vec<&Item> = a.children(node).iter().map(|&c| a.item(c)).collect();
        sel.tuples(kids.len())
            .into_iter()
            .map(|t| f.apply(&t.iter().map(|&i| kids[i]).collect::<Vec<_>>()))
            .collect()
    })
}
