//! Turns recorded intentions into operator calls.

use std::sync::Arc;

use indexmap::IndexSet;

use super::{Intention, Invocation, Session, StateId};
use crate::dsl::{self, Arg, Term, TermOp};
use crate::error::{Error, Result};
use crate::model::{ExplorationSet, Item, RelationPath, RelationSource, RelationSourceExt};
use crate::ops::{self, *};

pub(super) fn run(s: &Session, id: StateId, intention: &Intention) -> Result<ExplorationSet> {
    match intention {
        Intention::Dataset => Ok(ExplorationSet::flat(s.dataset.entities().cloned())),
        Intention::Items(items) => Ok(ExplorationSet::flat(items.iter().cloned())),
        Intention::Invoke(inv) => invoke(s, inv),
        Intention::Propagated { ancestor, pivot, support, .. } => {
            let Intention::Invoke(pinv) = s.intention(*pivot)? else {
                return Err(Error::UnsupportedShape(format!("s{id}: s{pivot} is not a pivot")));
            };
            let mut b = Bound::new(&pinv.args)?;
            let rp = relpath(b.take("relation")?.ok_or_else(|| Error::arg("pivot needs a relation"))?)?;
            let anc = s.extension(*ancestor)?;
            let keep = s.extension(*support)?.leaf_items();
            let env = s.catalog();
            let mut paths = Vec::new();
            for p in anc.tails() {
                let tail = p.last().expect("tails are non-empty");
                if env.image_of(&rp, tail)?.iter().any(|i| keep.contains(i)) {
                    paths.push(p);
                }
            }
            Ok(ExplorationSet::from_paths(paths))
        }
    }
}

/// Positional and keyword arguments, consumed as an operator reads them.
struct Bound<'a> {
    pos: std::collections::VecDeque<&'a Term>,
    kw: Vec<(&'a str, &'a Term)>,
}

impl<'a> Bound<'a> {
    fn new(args: &'a [Arg]) -> Result<Bound<'a>> {
        let mut b = Bound { pos: Default::default(), kw: Vec::new() };
        for a in args {
            match a {
                Arg::Term(t) => b.pos.push_back(t),
                Arg::Kw(k, t) => {
                    if b.kw.iter().any(|(n, _)| n == k) {
                        return Err(Error::arg(format!("`{k}` given twice")));
                    }
                    if k != "as" {
                        b.kw.push((k, t));
                    }
                }
                Arg::Set(_) => return Err(Error::arg("unexpected set argument")),
            }
        }
        Ok(b)
    }

    fn kw(&mut self, names: &[&str]) -> Option<&'a Term> {
        let i = self.kw.iter().position(|(n, _)| names.contains(n))?;
        Some(self.kw.remove(i).1)
    }

    /// Next positional argument, or the keyword `name`.
    fn take(&mut self, name: &str) -> Result<Option<&'a Term>> {
        Ok(self.kw(&[name]).or_else(|| self.pos.pop_front()))
    }

    fn finish(self, op: Operator) -> Result<()> {
        if let Some((k, _)) = self.kw.first() {
            return Err(Error::arg(format!("{} has no parameter `{k}`", op.name())));
        }
        if !self.pos.is_empty() {
            return Err(Error::Arity(format!("{}: {} extra argument(s)", op.name(), self.pos.len())));
        }
        Ok(())
    }
}

fn relpath(t: &Term) -> Result<RelationPath> {
    match t {
        Term::Rel(rp) => Ok(rp.clone()),
        t => Err(Error::arg(format!("expected a relation path, got {}", dsl::print_term(t)))),
    }
}

fn uint(t: &Term, what: &str) -> Result<usize> {
    match t {
        Term::Int(i) if *i >= 0 => Ok(*i as usize),
        t => Err(Error::arg(format!("{what} must be a non-negative integer, got {}", dsl::print_term(t)))),
    }
}

fn boolean(t: &Term, what: &str) -> Result<bool> {
    match t {
        Term::Ident(s) if s == "true" => Ok(true),
        Term::Ident(s) if s == "false" => Ok(false),
        t => Err(Error::arg(format!("{what} must be true or false, got {}", dsl::print_term(t)))),
    }
}

fn name(t: &Term, what: &str) -> Result<String> {
    match t {
        Term::Ident(s) | Term::Str(s) => Ok(s.clone()),
        t => Err(Error::arg(format!("{what} must be a name, got {}", dsl::print_term(t)))),
    }
}

/// Reads `[level,] f` for the horizontal maps: a leading integer is the
/// level only when a mapping follows it.
fn level_and_f<'a>(b: &mut Bound<'a>) -> Result<(Option<usize>, &'a Term)> {
    let f_kw = b.kw(&["f"]);
    let level_kw = b.kw(&["level"]);
    let mut level = level_kw.map(|t| uint(t, "level")).transpose()?;
    let lead_int = matches!(b.pos.front(), Some(Term::Int(_)));
    if level.is_none() && lead_int && (b.pos.len() >= 2 || f_kw.is_some()) {
        level = Some(uint(b.pos.pop_front().expect("checked"), "level")?);
    }
    let f = match f_kw {
        Some(f) => f,
        None => b.pos.pop_front().ok_or_else(|| Error::arg("missing mapping `f`"))?,
    };
    Ok((level, f))
}

fn invoke(s: &Session, inv: &Invocation) -> Result<ExplorationSet> {
    let env = s.catalog();
    let inputs: Vec<Arc<ExplorationSet>> = inv.inputs.iter().map(|&i| s.extension(i)).collect::<Result<_>>()?;
    let a = inputs.first().map(|x| x.as_ref()).ok_or_else(|| Error::Arity("missing input".into()))?;
    let mut b = Bound::new(&inv.args)?;
    let op = inv.op;
    let out = match op {
        Operator::Pivot => {
            let rp = relpath(b.take("relation")?.ok_or_else(|| Error::arg("pivot needs a relation path"))?)?;
            b.finish(op)?;
            ops::pivot(&env, a, &rp)?
        }
        Operator::Refine => {
            let preds = b.pos.drain(..).map(|t| predicate(s, t)).collect::<Result<Vec<_>>>()?;
            b.finish(op)?;
            ops::refine(&env, a, &PathPattern::levels(preds))?
        }
        Operator::Group => {
            let rp = relpath(b.take("relation")?.ok_or_else(|| Error::arg("group needs a relation path"))?)?;
            let level = b.take("level")?.map(|t| uint(t, "level")).transpose()?;
            let keep_ungrouped = b.kw(&["keep_ungrouped", "keepUngrouped"]).map(|t| boolean(t, "keep_ungrouped")).transpose()?;
            b.finish(op)?;
            ops::group(&env, a, &rp, &GroupOptions { level, keep_ungrouped: keep_ungrouped.unwrap_or(false) })?
        }
        Operator::Rank => {
            let level = uint(b.take("level")?.ok_or_else(|| Error::arg("rank needs a level"))?, "level")?;
            let score = value_expr(b.take("score")?.ok_or_else(|| Error::arg("rank needs a score"))?)?;
            let missing = match b.kw(&["missing"]).map(|t| name(t, "missing")).transpose()?.as_deref() {
                None | Some("last") => MissingScore::Last,
                Some("error") => MissingScore::Error,
                Some(o) => return Err(Error::arg(format!("missing must be last or error, got {o}"))),
            };
            b.finish(op)?;
            ops::rank(&env, a, level, &score, missing)?
        }
        Operator::Slice => {
            let from = uint(b.take("from")?.ok_or_else(|| Error::arg("slice needs from"))?, "from")?;
            let to = uint(b.take("to")?.ok_or_else(|| Error::arg("slice needs to"))?, "to")?;
            b.finish(op)?;
            ops::slice(a, from, to)
        }
        Operator::Correlate => {
            let max_length = b.kw(&["maxLength", "max_length"]).map(|t| uint(t, "maxLength")).transpose()?;
            let undirected = b.kw(&["undirected"]).map(|t| boolean(t, "undirected")).transpose()?;
            let preds = b.pos.drain(..).map(|t| predicate(s, t)).collect::<Result<Vec<_>>>()?;
            b.finish(op)?;
            let opts = CorrelateOptions {
                pattern: (!preds.is_empty()).then(|| PathPattern::levels(preds)),
                max_length: max_length.unwrap_or(4),
                undirected: undirected.unwrap_or(false),
            };
            ops::correlate(&env, a, &inputs[1], &opts)?
        }
        Operator::Thmap => {
            let (level, f) = level_and_f(&mut b)?;
            let f = value_expr(f)?;
            b.finish(op)?;
            ops::thmap(&env, a, level, &f)?
        }
        Operator::Ahmap => {
            let (level, f) = level_and_f(&mut b)?;
            let fname = name(f, "f")?;
            let agg = Aggregation::from_name(&fname).ok_or_else(|| Error::arg(format!("unknown aggregation {fname}")))?;
            b.finish(op)?;
            ops::ahmap(a, level, agg)?
        }
        Operator::Chmap => {
            let (level, f) = level_and_f(&mut b)?;
            let fname = name(f, "f")?;
            let comb = Combine::from_name(&fname).ok_or_else(|| Error::arg(format!("unknown combination {fname}")))?;
            let n = b.kw(&["n"]).map(|t| uint(t, "n")).transpose()?.unwrap_or(2);
            let sel = match b.kw(&["select"]) {
                None => Selector::All(n),
                Some(t) => selector(t, n)?,
            };
            b.finish(op)?;
            ops::chmap(a, level, comb, &sel)?
        }
        Operator::Tvmap => {
            let f = value_expr(b.take("f")?.ok_or_else(|| Error::arg("tvmap needs f"))?)?;
            b.finish(op)?;
            ops::tvmap(&env, a, &f)?
        }
        Operator::Avmap => {
            let f = name(b.take("f")?.ok_or_else(|| Error::arg("avmap needs f"))?, "f")?;
            let f = EdgeFold::from_name(&f).ok_or_else(|| Error::arg(format!("unknown edge fold {f}")))?;
            b.finish(op)?;
            ops::avmap(a, f)
        }
        Operator::Cvmap => {
            let f = name(b.take("f")?.ok_or_else(|| Error::arg("cvmap needs f"))?, "f")?;
            let f = EdgeCombine::from_name(&f).ok_or_else(|| Error::arg(format!("unknown edge combination {f}")))?;
            b.finish(op)?;
            ops::cvmap(a, f)
        }
        Operator::Unite | Operator::Intersect | Operator::Diff => {
            b.finish(op)?;
            match op {
                Operator::Unite => ops::unite(a, &inputs[1]),
                Operator::Intersect => ops::intersect(a, &inputs[1]),
                _ => ops::diff(a, &inputs[1]),
            }
        }
        Operator::Branch => return Err(Error::arg("branch is not a recorded operator")),
    };
    Ok(match inv.slice {
        Some((lo, hi)) => ops::slice(&out, lo as usize, hi as usize),
        None => out,
    })
}

fn selector(t: &Term, n: usize) -> Result<Selector> {
    match t {
        Term::Ident(s) if s == "all" => Ok(Selector::All(n)),
        Term::Ident(s) if s == "distinct" => Ok(Selector::Distinct(n)),
        Term::Apply(f, args) if f == "positions" => {
            Ok(Selector::Positions(args.iter().map(|a| uint(a, "position")).collect::<Result<_>>()?))
        }
        Term::Apply(f, args) if (f == "all" || f == "distinct") && args.len() == 1 => {
            let k = uint(&args[0], "tuple size")?;
            Ok(if f == "all" { Selector::All(k) } else { Selector::Distinct(k) })
        }
        t => Err(Error::arg(format!("select must be all, distinct or positions(...), got {}", dsl::print_term(t)))),
    }
}

/// A score or mapping expression over `%item`.
pub(crate) fn value_expr(t: &Term) -> Result<ValueExpr> {
    Ok(match t {
        Term::Int(i) => ValueExpr::Const(Value::Int(*i)),
        Term::Float(f) => ValueExpr::Const(Value::Float(*f)),
        Term::Str(s) => ValueExpr::Const(Value::Item(Item::string(s.as_str()))),
        Term::ItemVar => ValueExpr::Item,
        Term::Rel(rp) | Term::Image(rp) => ValueExpr::Image(rp.clone()),
        Term::Ident(s) if s == "count_children" || s == "childCount" => ValueExpr::ChildCount,
        Term::Apply(f, args) if f == "c" && args == &[Term::ItemVar] => ValueExpr::ChildValues,
        Term::Apply(f, args) if f == "round" && (args.len() == 1 || args.len() == 2) => {
            let digits = match args.get(1) {
                Some(d) => uint(d, "digits")? as u32,
                None => 0,
            };
            ValueExpr::Round(Box::new(value_expr(&args[0])?), digits)
        }
        Term::Neg(a) => ValueExpr::Neg(Box::new(value_expr(a)?)),
        Term::Bin(op, a, b) => {
            let op = match op {
                TermOp::Add => BinOp::Add,
                TermOp::Sub => BinOp::Sub,
                TermOp::Mul => BinOp::Mul,
            };
            ValueExpr::Bin(op, Box::new(value_expr(a)?), Box::new(value_expr(b)?))
        }
        t => return Err(Error::arg(format!("not a value expression: {}", dsl::print_term(t)))),
    })
}

fn operand(s: &Session, t: &Term) -> Result<Operand> {
    if let Some(text) = t.hyphenated() {
        return Ok(match s.catalog().entity(&text) {
            Some(e) => Operand::Item(e.clone()),
            None => Operand::Text(text),
        });
    }
    Ok(match t {
        Term::State(id) => Operand::Items(Arc::new(s.extension(*id)?.leaf_items())),
        Term::Str(x) => Operand::Text(x.clone()),
        Term::Int(i) => Operand::Item(Item::int(*i)),
        Term::Float(f) => Operand::Item(Item::float(*f)),
        Term::Neg(inner) => match &**inner {
            Term::Int(i) => Operand::Item(Item::int(-i)),
            Term::Float(f) => Operand::Item(Item::float(-f)),
            _ => return Err(Error::arg(format!("not a comparable value: {}", dsl::print_term(t)))),
        },
        // `:Company` as a value names the entity `Company`.
        Term::Rel(rp) if rp.len() == 1 && !rp.steps()[0].inverse => {
            let id = &rp.steps()[0].id[1..];
            match s.catalog().entity(id) {
                Some(e) => Operand::Item(e.clone()),
                None => Operand::Text(id.to_string()),
            }
        }
        Term::Apply(f, args) if f == "set" => {
            let mut items = IndexSet::new();
            for a in args {
                match operand(s, a)? {
                    Operand::Item(i) => {
                        items.insert(i);
                    }
                    Operand::Items(xs) => items.extend(xs.iter().cloned()),
                    Operand::Text(x) => return Err(Error::UnknownItem(x)),
                }
            }
            Operand::Items(Arc::new(items))
        }
        t => return Err(Error::arg(format!("not a comparable value: {}", dsl::print_term(t)))),
    })
}

fn text_args(args: &[Term], what: &str) -> Result<Vec<String>> {
    args.iter()
        .map(|a| match a {
            Term::Str(s) => Ok(s.clone()),
            a => a.hyphenated().ok_or_else(|| Error::arg(format!("{what} takes text, got {}", dsl::print_term(a)))),
        })
        .collect()
}

pub(crate) fn predicate(s: &Session, t: &Term) -> Result<FilterPredicate> {
    let (f, args) = match t {
        Term::Ident(x) if x == "true" => return Ok(FilterPredicate::True),
        Term::Apply(f, args) => (f.to_ascii_lowercase(), args.as_slice()),
        t => return Err(Error::arg(format!("expected a predicate, got {}", dsl::print_term(t)))),
    };
    let want = |n: usize| -> Result<()> {
        if args.len() == n {
            Ok(())
        } else {
            Err(Error::Arity(format!("{f} takes {n} argument(s), got {}", args.len())))
        }
    };
    Ok(match f.as_str() {
        "true" => {
            want(0)?;
            FilterPredicate::True
        }
        "equals" | "eq" => match args {
            [x] => FilterPredicate::Equals(operand(s, x)?),
            [Term::Rel(rp) | Term::Image(rp), x] => FilterPredicate::EqualsVia(rp.clone(), operand(s, x)?),
            _ => return Err(Error::Arity("equals takes (value) or (relation, value)".into())),
        },
        "equalsone" => match args {
            [Term::Rel(rp) | Term::Image(rp), x] => FilterPredicate::EqualsOne(rp.clone(), operand(s, x)?),
            _ => return Err(Error::Arity("equalsOne takes (relation, value)".into())),
        },
        "contains" => match args {
            [Term::Rel(rp) | Term::Image(rp), x] => FilterPredicate::Contains(rp.clone(), operand(s, x)?),
            _ => return Err(Error::Arity("contains takes (relation, value)".into())),
        },
        "matchall" => FilterPredicate::MatchAll(text_args(args, "matchAll")?),
        "matchone" => FilterPredicate::MatchOne(text_args(args, "matchOne")?),
        "not" => {
            want(1)?;
            FilterPredicate::Not(Box::new(predicate(s, &args[0])?))
        }
        "and" => FilterPredicate::And(args.iter().map(|a| predicate(s, a)).collect::<Result<_>>()?),
        "or" => FilterPredicate::Or(args.iter().map(|a| predicate(s, a)).collect::<Result<_>>()?),
        "greaterthan" | "gt" => {
            let (rp, v) = match args {
                [v] => (None, v),
                [Term::ItemVar, v] => (None, v),
                [Term::Rel(rp) | Term::Image(rp), v] => (Some(rp.clone()), v),
                _ => return Err(Error::Arity("greaterThan takes ([relation,] number)".into())),
            };
            let n = match v {
                Term::Int(i) => *i as f64,
                Term::Float(x) => *x,
                Term::Neg(b) => match **b {
                    Term::Int(i) => -(i as f64),
                    Term::Float(x) => -x,
                    _ => return Err(Error::arg("greaterThan needs a number")),
                },
                _ => return Err(Error::arg("greaterThan needs a number")),
            };
            FilterPredicate::GreaterThan(rp, n)
        }
        other => return Err(Error::arg(format!("unknown predicate {other}"))),
    })
}
