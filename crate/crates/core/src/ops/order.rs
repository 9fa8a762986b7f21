use super::expr::{Scope, ValueExpr};
use crate::error::{Error, Result};
use crate::model::{ExplorationSet, RelationSource};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum MissingScore {
    /// Items without a score sort after every scored item.
    #[default]
    Last,
    Error,
}

/// Sorts the children of every level-`lv - 1` node by descending score.
/// The sort is stable, so ties keep their input order.
pub fn rank(
    env: &dyn RelationSource,
    a: &ExplorationSet,
    lv: usize,
    score: &ValueExpr,
    missing: MissingScore,
) -> Result<ExplorationSet> {
    score.validate(env)?;
    let mut out = a.rerooted();
    if out.is_empty() {
        return Ok(out);
    }
    let depth = out.depth();
    if lv < 2 || lv > depth {
        return Err(Error::InvalidLevel { level: lv, reason: format!("rank needs 2 <= level <= {depth}") });
    }
    for parent in out.level_nodes(lv - 1) {
        let kids = out.children(parent).to_vec();
        let mut scored = Vec::with_capacity(kids.len());
        for &k in &kids {
            let item = out.item(k).clone();
            let s = score.score(&Scope { env, item: &item, node: Some((&out, k)) })?;
            let key = match s {
                Some(v) if !v.is_nan() => v,
                _ if missing == MissingScore::Error => {
                    return Err(Error::Score { item: item.id().to_string(), reason: "no score".into() })
                }
                _ => f64::NEG_INFINITY,
            };
            scored.push((key, k));
        }
        scored.sort_by(|x, y| y.0.total_cmp(&x.0));
        out.reorder_children(parent, scored.into_iter().map(|(_, k)| k).collect());
    }
    Ok(out)
}

/// Keeps level-2 children whose 0-based position lies in `from..=to`,
/// with their subtrees. Bounds clamp to the available children.
pub fn slice(a: &ExplorationSet, from: usize, to: usize) -> ExplorationSet {
    let mut out = ExplorationSet::new();
    for (i, &c) in a.children(a.root()).iter().enumerate() {
        if i < from || i > to {
            continue;
        }
        let n = out.push_child(0, a.item(c).clone());
        a.copy_children_into(c, &mut out, n);
    }
    out
}
