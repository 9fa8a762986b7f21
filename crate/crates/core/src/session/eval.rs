//! Evaluation of DSL statements against a session.

use serde::Serialize;

use super::{Binding, Invocation, Session, StateId};
use crate::dsl::{Arg, Call, Expr, Stmt, Term};
use crate::error::{Error, Result};
use crate::model::{Item, RelationSource};
use crate::ops::Operator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Value {
    State(StateId),
    Pair(StateId, StateId),
}

impl Value {
    fn single(self) -> Result<StateId> {
        match self {
            Value::State(s) => Ok(s),
            Value::Pair(a, b) => Err(Error::arg(format!("expected one set, got the pair (s{a}, s{b})"))),
        }
    }
}

/// What one statement did.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub target: Option<String>,
    pub value: Value,
    /// States created by this statement, in order.
    pub created: Vec<StateId>,
}

pub(super) fn eval_stmt(s: &mut Session, st: &Stmt) -> Result<Outcome> {
    let cp = s.checkpoint();
    let before = s.len();
    let r = eval(s, &st.expr, None);
    let value = match r {
        Ok(v) => v,
        Err(e) => {
            s.rollback(cp);
            return Err(e);
        }
    };
    if let Some(name) = &st.target {
        bind_target(s, name, value);
    }
    Ok(Outcome { target: st.target.clone(), value, created: (before..s.len()).collect() })
}

fn bind_target(s: &mut Session, name: &str, value: Value) {
    match value {
        Value::State(id) => s.bind(name, Binding::State(id)),
        Value::Pair(a, b) => {
            s.bind(&format!("{name}_1"), Binding::State(a));
            s.bind(&format!("{name}_2"), Binding::State(b));
            s.bind(name, Binding::Pair(a, b));
        }
    }
}

fn eval(s: &mut Session, e: &Expr, irs: Option<StateId>) -> Result<Value> {
    match e {
        Expr::Source(name, loc) => source(s, name, irs).map_err(|err| err.at(loc.0)),
        Expr::Set(ids, loc) => {
            let items = ids.iter().map(|id| resolve_item(s, id)).collect::<Result<Vec<_>>>().map_err(|err| err.at(loc.0))?;
            Ok(Value::State(s.add_items(items)))
        }
        Expr::Bang(inner) => match &**inner {
            Expr::Call(c) => call(s, None, c, irs, true),
            Expr::Chain(recv, c) => {
                let r = eval(s, recv, irs)?.single().map_err(|err| err.at(recv.loc()))?;
                call(s, Some(r), c, irs, true)
            }
            other => Err(Error::UnsupportedShape("`!` applies to a refine call".into()).at(other.loc())),
        },
        Expr::Call(c) => call(s, None, c, irs, false),
        Expr::Chain(recv, c) => {
            let r = eval(s, recv, irs)?.single().map_err(|err| err.at(recv.loc()))?;
            call(s, Some(r), c, irs, false)
        }
    }
}

fn source(s: &mut Session, name: &str, irs: Option<StateId>) -> Result<Value> {
    match name {
        "d" => Ok(Value::State(s.dataset_state())),
        "irs" => irs.map(Value::State).ok_or_else(|| Error::Unbound("irs is only bound inside branch".into())),
        n => match s.lookup(n) {
            Some(Binding::State(id)) => Ok(Value::State(id)),
            Some(Binding::Pair(a, b)) => Ok(Value::Pair(a, b)),
            None => by_number(s, n).map(Value::State).ok_or_else(|| Error::Unbound(n.to_string())),
        },
    }
}

/// `sN` names state N when no binding shadows it.
fn by_number(s: &Session, name: &str) -> Option<StateId> {
    let digits = name.strip_prefix('s')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok().filter(|&id| id < s.len())
}

fn resolve_item(s: &Session, id: &str) -> Result<Item> {
    if let Some(e) = s.catalog().entity(id) {
        return Ok(e.clone());
    }
    if let Ok(i) = id.parse::<i64>() {
        return Ok(Item::int(i));
    }
    Err(Error::UnknownItem(id.to_string()))
}

/// Names of states inside predicate arguments become state references.
fn resolve_term(s: &Session, t: &Term, irs: Option<StateId>, inside: bool) -> Term {
    match t {
        Term::Ident(n) if inside => match (n.as_str(), s.lookup(n)) {
            ("irs", _) if irs.is_some() => Term::State(irs.expect("checked")),
            (_, Some(Binding::State(id))) => Term::State(id),
            (_, None) => by_number(s, n).map(Term::State).unwrap_or_else(|| t.clone()),
            _ => t.clone(),
        },
        Term::Apply(f, args) => Term::Apply(f.clone(), args.iter().map(|a| resolve_term(s, a, irs, true)).collect()),
        Term::Neg(a) => Term::Neg(Box::new(resolve_term(s, a, irs, inside))),
        Term::Bin(op, a, b) => {
            Term::Bin(*op, Box::new(resolve_term(s, a, irs, inside)), Box::new(resolve_term(s, b, irs, inside)))
        }
        t => t.clone(),
    }
}

fn call(s: &mut Session, recv: Option<StateId>, c: &Call, irs: Option<StateId>, bang: bool) -> Result<Value> {
    let span = c.loc.0;
    let mut inputs: Vec<StateId> = recv.into_iter().collect();
    let mut bodies: Vec<&Expr> = Vec::new();
    let mut args = Vec::new();
    for a in &c.args {
        match a {
            Arg::Set(e) if c.op == Operator::Branch && !inputs.is_empty() => bodies.push(e),
            Arg::Set(e) => inputs.push(eval(s, e, irs)?.single().map_err(|err| err.at(e.loc()))?),
            Arg::Term(t) => args.push(Arg::Term(resolve_term(s, t, irs, false))),
            Arg::Kw(k, t) => args.push(Arg::Kw(k.clone(), resolve_term(s, t, irs, false))),
        }
    }
    if c.op == Operator::Branch {
        if bang || c.slice.is_some() || !args.is_empty() {
            return Err(Error::arg("branch takes an input and two expressions only").at(span));
        }
        let input = inputs[0];
        let a = eval(s, bodies[0], Some(input))?.single().map_err(|err| err.at(bodies[0].loc()))?;
        let b = eval(s, bodies[1], Some(input))?.single().map_err(|err| err.at(bodies[1].loc()))?;
        return Ok(Value::Pair(a, b));
    }
    if bang && c.op != Operator::Refine {
        return Err(Error::UnsupportedShape(format!("`!` applies to refine, not {}", c.op.name())).at(span));
    }
    let inv = Invocation { op: c.op, inputs, args, slice: c.slice, propagate: bang };
    let created = s.invoke(inv).map_err(|err| err.at(span))?;
    Ok(Value::State(*created.last().expect("invoke creates a state")))
}
