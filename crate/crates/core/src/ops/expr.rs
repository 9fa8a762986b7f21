//! Score and mapping expressions over `%item`.

use crate::error::{Error, Result};
use crate::model::{ExplorationSet, Item, NodeId, RelationPath, RelationSource, RelationSourceExt};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Float(f64),
    Item(Item),
    /// An image lookup found nothing.
    Missing,
}

impl Value {
    fn from_item(it: &Item) -> Value {
        if let Some(i) = it.as_int() {
            Value::Int(i)
        } else if let Some(f) = it.numeric() {
            Value::Float(f)
        } else {
            Value::Item(it.clone())
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Int(i) => Some(*i as f64),
            Value::Float(f) => Some(*f),
            Value::Item(it) => it.numeric(),
            Value::Missing => None,
        }
    }

    pub fn into_item(self) -> Option<Item> {
        match self {
            Value::Int(i) => Some(Item::int(i)),
            Value::Float(f) if f.is_finite() => Some(Item::float(f)),
            Value::Float(_) => None,
            Value::Item(it) => Some(it),
            Value::Missing => None,
        }
    }
}

/// Expression language for rank scores and item mappings.
#[derive(Debug, Clone, PartialEq)]
pub enum ValueExpr {
    Const(Value),
    /// `%item`
    Item,
    /// `:R[%item]`: the largest numeric image value, or the first image item
    /// when none is numeric.
    Image(RelationPath),
    /// `c(%item)`: numeric children add their value, other children add 1.
    ChildValues,
    /// `count_children`
    ChildCount,
    Neg(Box<ValueExpr>),
    Bin(BinOp, Box<ValueExpr>, Box<ValueExpr>),
    Round(Box<ValueExpr>, u32),
}

/// Where an expression is evaluated: an item, and optionally its node.
pub struct Scope<'a> {
    pub env: &'a dyn RelationSource,
    pub item: &'a Item,
    pub node: Option<(&'a ExplorationSet, NodeId)>,
}

fn arith(op: BinOp, a: Value, b: Value) -> std::result::Result<Value, String> {
    match (a, b) {
        (Value::Int(x), Value::Int(y)) => {
            let r = match op {
                BinOp::Add => x.checked_add(y),
                BinOp::Sub => x.checked_sub(y),
                BinOp::Mul => x.checked_mul(y),
            };
            r.map(Value::Int).ok_or_else(|| "integer overflow".to_string())
        }
        (Value::Missing, _) | (_, Value::Missing) => Ok(Value::Missing),
        (a, b) => {
            let x = a.as_f64().ok_or_else(|| format!("{a:?} is not numeric"))?;
            let y = b.as_f64().ok_or_else(|| format!("{b:?} is not numeric"))?;
            Ok(Value::Float(match op {
                BinOp::Add => x + y,
                BinOp::Sub => x - y,
                BinOp::Mul => x * y,
            }))
        }
    }
}

impl ValueExpr {
    pub fn validate(&self, env: &dyn RelationSource) -> Result<()> {
        match self {
            ValueExpr::Image(rp) => env.validate_path(rp),
            ValueExpr::Neg(x) | ValueExpr::Round(x, _) => x.validate(env),
            ValueExpr::Bin(_, a, b) => {
                a.validate(env)?;
                b.validate(env)
            }
            _ => Ok(()),
        }
    }

    pub fn uses_children(&self) -> bool {
        match self {
            ValueExpr::ChildValues | ValueExpr::ChildCount => true,
            ValueExpr::Neg(x) | ValueExpr::Round(x, _) => x.uses_children(),
            ValueExpr::Bin(_, a, b) => a.uses_children() || b.uses_children(),
            _ => false,
        }
    }

    /// Evaluates; the error string explains a type failure.
    pub fn eval(&self, s: &Scope<'_>) -> std::result::Result<Value, String> {
        match self {
            ValueExpr::Const(v) => Ok(v.clone()),
            ValueExpr::Item => Ok(Value::from_item(s.item)),
            ValueExpr::Image(rp) => {
                let img = s.env.image_of(rp, s.item).map_err(|e| e.to_string())?;
                let mut best: Option<Value> = None;
                for it in &img {
                    let v = Value::from_item(it);
                    if let Some(x) = v.as_f64() {
                        if best.as_ref().and_then(Value::as_f64).is_none_or(|b| x > b) {
                            best = Some(v);
                        }
                    }
                }
                Ok(best.or_else(|| img.first().map(|i| Value::Item(i.clone()))).unwrap_or(Value::Missing))
            }
            ValueExpr::ChildValues | ValueExpr::ChildCount => {
                let (set, n) = s.node.ok_or("no node in scope")?;
                let kids = set.children(n);
                if matches!(self, ValueExpr::ChildCount) {
                    return Ok(Value::Int(kids.len() as i64));
                }
                let mut acc = Value::Int(0);
                for &k in kids {
                    let it = set.item(k);
                    let v = if it.numeric().is_some() { Value::from_item(it) } else { Value::Int(1) };
                    acc = arith(BinOp::Add, acc, v)?;
                }
                Ok(acc)
            }
            ValueExpr::Neg(x) => match x.eval(s)? {
                Value::Int(i) => Ok(Value::Int(-i)),
                Value::Missing => Ok(Value::Missing),
                v => v.as_f64().map(|f| Value::Float(-f)).ok_or_else(|| format!("{v:?} is not numeric")),
            },
            ValueExpr::Bin(op, a, b) => arith(*op, a.eval(s)?, b.eval(s)?),
            ValueExpr::Round(x, digits) => match x.eval(s)? {
                Value::Missing => Ok(Value::Missing),
                v @ Value::Int(_) => Ok(v),
                v => {
                    let f = v.as_f64().ok_or_else(|| format!("{v:?} is not numeric"))?;
                    let m = 10f64.powi(*digits as i32);
                    Ok(Value::Float((f * m).round() / m))
                }
            },
        }
    }

    /// Numeric score; `None` when the expression has no value for the item.
    pub fn score(&self, s: &Scope<'_>) -> Result<Option<f64>> {
        let v = self.eval(s).map_err(|reason| Error::Score { item: s.item.id().to_string(), reason })?;
        match v {
            Value::Missing => Ok(None),
            v => match v.as_f64() {
                Some(f) => Ok(Some(f)),
                None => Err(Error::Score { item: s.item.id().to_string(), reason: format!("{v:?} is not numeric") }),
            },
        }
    }

    /// The mapped item.
    pub fn map_item(&self, s: &Scope<'_>) -> Result<Item> {
        let fail = |reason: String| Error::Mapping { item: s.item.id().to_string(), reason };
        let v = self.eval(s).map_err(fail)?;
        v.into_item().ok_or_else(|| fail("no value".to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Dataset;

    fn scope<'a>(env: &'a Dataset, item: &'a Item) -> Scope<'a> {
        Scope { env, item, node: None }
    }

    #[test]
    fn currency_rounding() {
        let d = Dataset::new();
        let f = ValueExpr::Round(
            Box::new(ValueExpr::Bin(
                BinOp::Mul,
                Box::new(ValueExpr::Item),
                Box::new(ValueExpr::Const(Value::Float(3.5))),
            )),
            2,
        );
        for (from, to) in [(150.00, 525.00), (160.50, 561.75), (135.73, 475.05)] {
            let it = Item::float(from);
            assert_eq!(f.map_item(&scope(&d, &it)).unwrap(), Item::float(to));
        }
    }

    #[test]
    fn int_arithmetic_stays_int() {
        let d = Dataset::new();
        let it = Item::int(2002);
        let neg = ValueExpr::Bin(BinOp::Mul, Box::new(ValueExpr::Item), Box::new(ValueExpr::Const(Value::Int(-1))));
        assert_eq!(neg.eval(&scope(&d, &it)).unwrap(), Value::Int(-2002));
        let e = Item::entity("x");
        assert!(neg.eval(&scope(&d, &e)).is_err());
    }

    #[test]
    fn missing_image_is_missing() {
        let mut d = Dataset::new();
        d.insert(":Year", Item::entity("p1"), Item::int(2002));
        let img = ValueExpr::Image(RelationPath::single(":Year"));
        let p1 = Item::entity("p1");
        let p9 = Item::entity("p9");
        assert_eq!(img.score(&scope(&d, &p1)).unwrap(), Some(2002.0));
        assert_eq!(img.score(&scope(&d, &p9)).unwrap(), None);
    }

    #[test]
    fn child_values() {
        let d = Dataset::new();
        let set = ExplorationSet::from_paths([
            vec![Item::entity("a"), Item::int(3)],
            vec![Item::entity("a"), Item::entity("b")],
        ]);
        let a = set.children(0)[0];
        let it = set.item(a).clone();
        let s = Scope { env: &d, item: &it, node: Some((&set, a)) };
        assert_eq!(ValueExpr::ChildValues.eval(&s).unwrap(), Value::Int(4));
        assert_eq!(ValueExpr::ChildCount.eval(&s).unwrap(), Value::Int(2));
    }
}
