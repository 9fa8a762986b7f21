//! Exploration sessions: a DAG of states, each an intention (how it was
//! produced) plus a lazily computed extension (the set it denotes).

mod compile;
mod eval;
mod persist;

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};
use std::time::{SystemTime, UNIX_EPOCH};

use indexmap::IndexMap;
use serde::Serialize;

pub use eval::{Outcome, Value};
pub use persist::DATASET_HEADER;

use crate::dsl::{self, Arg, Call, Expr, Loc, Term};
use crate::error::{Error, Result};
use crate::ingest::fingerprint;
use crate::model::{Dataset, ExplorationSet, Item, Layered, Provenance, Relation};
use crate::ops::Operator;

pub type StateId = usize;

/// One operator application recorded in a session.
#[derive(Debug, Clone, PartialEq)]
pub struct Invocation {
    pub op: Operator,
    pub inputs: Vec<StateId>,
    /// Non-set arguments; names of states appear as [`Term::State`].
    pub args: Vec<Arg>,
    pub slice: Option<(u64, u64)>,
    /// Written with `!`: back-propagate through the pivot chain.
    pub propagate: bool,
}

impl Invocation {
    pub fn new(op: Operator, inputs: Vec<StateId>, args: Vec<Arg>) -> Invocation {
        Invocation { op, inputs, args, slice: None, propagate: false }
    }

    /// Name given with `as=:name`.
    pub fn register_as(&self) -> Option<&Term> {
        self.args.iter().find_map(|a| match a {
            Arg::Kw(k, t) if k == "as" => Some(t),
            _ => None,
        })
    }

    fn to_expr(&self) -> Expr {
        let mut args: Vec<Arg> = self.inputs.iter().map(|i| Arg::Set(Expr::source(&format!("s{i}")))).collect();
        args.extend(self.args.iter().cloned());
        let e = Expr::Call(Call { op: self.op, args, slice: self.slice, loc: Loc::default() });
        if self.propagate {
            Expr::Bang(Box::new(e))
        } else {
            e
        }
    }
}

fn term_states(t: &Term, out: &mut Vec<StateId>) {
    match t {
        Term::State(s) => out.push(*s),
        Term::Apply(_, args) => args.iter().for_each(|a| term_states(a, out)),
        Term::Neg(a) => term_states(a, out),
        Term::Bin(_, a, b) => {
            term_states(a, out);
            term_states(b, out);
        }
        _ => {}
    }
}

fn remap_term(t: &Term, map: &HashMap<StateId, StateId>) -> Term {
    match t {
        Term::State(s) => Term::State(*map.get(s).unwrap_or(s)),
        Term::Apply(n, args) => Term::Apply(n.clone(), args.iter().map(|a| remap_term(a, map)).collect()),
        Term::Neg(a) => Term::Neg(Box::new(remap_term(a, map))),
        Term::Bin(op, a, b) => Term::Bin(*op, Box::new(remap_term(a, map)), Box::new(remap_term(b, map))),
        t => t.clone(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Intention {
    /// Every entity of the dataset (`d`).
    Dataset,
    /// A literal set `{a, b}`.
    Items(Vec<Item>),
    Invoke(Invocation),
    /// Paths of `ancestor` whose pivot image meets the leaves of `support`;
    /// created by back-propagating `refine`.
    Propagated { refine: StateId, ancestor: StateId, pivot: StateId, support: StateId },
}

impl Intention {
    /// States this one is computed from.
    pub fn deps(&self) -> Vec<StateId> {
        match self {
            Intention::Dataset | Intention::Items(_) => Vec::new(),
            Intention::Invoke(inv) => {
                let mut v = inv.inputs.clone();
                for a in &inv.args {
                    if let Arg::Term(t) | Arg::Kw(_, t) = a {
                        term_states(t, &mut v);
                    }
                }
                v.dedup();
                v
            }
            Intention::Propagated { ancestor, support, pivot, .. } => vec![*support, *ancestor, *pivot],
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Intention::Dataset => "dataset",
            Intention::Items(_) => "items",
            Intention::Invoke(inv) => inv.op.name(),
            Intention::Propagated { .. } => "propagated",
        }
    }

    /// Expression form; `None` for propagated states, which have no
    /// surface syntax of their own.
    pub fn to_expr(&self) -> Option<Expr> {
        match self {
            Intention::Dataset => Some(Expr::source("d")),
            Intention::Items(items) => Some(Expr::Set(items.iter().map(|i| i.id().to_string()).collect(), Loc::default())),
            Intention::Invoke(inv) => Some(inv.to_expr()),
            Intention::Propagated { .. } => None,
        }
    }

    pub fn text(&self) -> String {
        match (self, self.to_expr()) {
            (_, Some(e)) => dsl::print_expr(&e),
            (Intention::Propagated { refine, ancestor, .. }, None) => format!("propagate(s{refine} onto s{ancestor})"),
            _ => unreachable!(),
        }
    }

    fn remap(&self, map: &HashMap<StateId, StateId>) -> Intention {
        let m = |s: &StateId| *map.get(s).unwrap_or(s);
        match self {
            Intention::Invoke(inv) => Intention::Invoke(Invocation {
                op: inv.op,
                inputs: inv.inputs.iter().map(m).collect(),
                args: inv
                    .args
                    .iter()
                    .map(|a| match a {
                        Arg::Term(t) => Arg::Term(remap_term(t, map)),
                        Arg::Kw(k, t) => Arg::Kw(k.clone(), remap_term(t, map)),
                        Arg::Set(e) => Arg::Set(e.clone()),
                    })
                    .collect(),
                slice: inv.slice,
                propagate: inv.propagate,
            }),
            Intention::Propagated { refine, ancestor, pivot, support } => Intention::Propagated {
                refine: m(refine),
                ancestor: m(ancestor),
                pivot: m(pivot),
                support: m(support),
            },
            i => i.clone(),
        }
    }
}

#[derive(Debug)]
pub struct State {
    pub id: StateId,
    pub intention: Intention,
    /// Milliseconds since the Unix epoch.
    pub created_ms: u64,
    extension: OnceLock<Arc<ExplorationSet>>,
}

impl State {
    pub fn is_materialized(&self) -> bool {
        self.extension.get().is_some()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Binding {
    State(StateId),
    /// The two results of a `branch`.
    Pair(StateId, StateId),
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TrailNode {
    pub id: StateId,
    pub kind: &'static str,
    #[serde(rename = "intentionText")]
    pub intention: String,
    pub names: Vec<String>,
    pub created_ms: u64,
    pub materialized: bool,
}

/// The session DAG in creation order; edges point from input to result.
#[derive(Debug, Clone, Serialize)]
pub struct Trail {
    pub nodes: Vec<TrailNode>,
    pub edges: Vec<(StateId, StateId)>,
}

impl Trail {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for n in &self.nodes {
            let names = if n.names.is_empty() { String::new() } else { format!("  [{}]", n.names.join(", ")) };
            let parents: Vec<String> =
                self.edges.iter().filter(|(_, to)| *to == n.id).map(|(from, _)| format!("s{from}")).collect();
            let from = if parents.is_empty() { String::new() } else { format!("  <- {}", parents.join(", ")) };
            out.push_str(&format!("s{}  {}{}{}\n", n.id, n.intention, names, from));
        }
        out
    }
}

/// Marker for [`Session::rollback`].
#[derive(Debug, Clone, Copy)]
pub struct Checkpoint {
    states: usize,
    computed: usize,
    names: usize,
}

pub struct Session {
    dataset: Arc<Dataset>,
    fingerprint: OnceLock<String>,
    states: Vec<State>,
    /// Relations registered with `as=`, and the state each came from.
    computed: IndexMap<String, Relation>,
    computed_from: IndexMap<String, StateId>,
    names: IndexMap<String, Binding>,
    dataset_state: Option<StateId>,
}

impl Session {
    pub fn new(dataset: Arc<Dataset>) -> Session {
        Session {
            dataset,
            fingerprint: OnceLock::new(),
            states: Vec::new(),
            computed: IndexMap::new(),
            computed_from: IndexMap::new(),
            names: IndexMap::new(),
            dataset_state: None,
        }
    }

    pub fn dataset(&self) -> &Arc<Dataset> {
        &self.dataset
    }

    pub fn fingerprint(&self) -> &str {
        self.fingerprint.get_or_init(|| fingerprint(&self.dataset))
    }

    /// Dataset relations with the session's computed relations on top.
    pub fn catalog(&self) -> Layered<'_> {
        Layered { base: &self.dataset, extra: &self.computed }
    }

    pub fn computed_relations(&self) -> &IndexMap<String, Relation> {
        &self.computed
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn state(&self, id: StateId) -> Result<&State> {
        self.states.get(id).ok_or_else(|| Error::UnknownState(format!("s{id}")))
    }

    pub fn intention(&self, id: StateId) -> Result<&Intention> {
        Ok(&self.state(id)?.intention)
    }

    /// The set a state denotes, computed on first use.
    pub fn extension(&self, id: StateId) -> Result<Arc<ExplorationSet>> {
        let st = self.state(id)?;
        if let Some(e) = st.extension.get() {
            return Ok(e.clone());
        }
        let set = Arc::new(compile::run(self, id, &st.intention)?);
        Ok(st.extension.get_or_init(|| set).clone())
    }

    pub fn names(&self) -> &IndexMap<String, Binding> {
        &self.names
    }

    pub fn lookup(&self, name: &str) -> Option<Binding> {
        self.names.get(name).copied()
    }

    pub fn bind(&mut self, name: &str, b: Binding) {
        self.names.shift_remove(name);
        self.names.insert(name.to_string(), b);
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint { states: self.states.len(), computed: self.computed.len(), names: self.names.len() }
    }

    /// Drops every state, computed relation and name created after `cp`.
    pub fn rollback(&mut self, cp: Checkpoint) {
        self.states.truncate(cp.states);
        self.computed.truncate(cp.computed);
        self.computed_from.truncate(cp.computed);
        self.names.truncate(cp.names);
        if self.dataset_state.is_some_and(|d| d >= cp.states) {
            self.dataset_state = None;
        }
    }

    fn push(&mut self, intention: Intention) -> StateId {
        let id = self.states.len();
        let created_ms = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis() as u64).unwrap_or(0);
        self.states.push(State { id, intention, created_ms, extension: OnceLock::new() });
        id
    }

    fn check_refs(&self, intention: &Intention) -> Result<()> {
        for d in intention.deps() {
            self.state(d)?;
        }
        Ok(())
    }

    /// The state for `d`, created on first use.
    pub fn dataset_state(&mut self) -> StateId {
        match self.dataset_state {
            Some(id) => id,
            None => {
                let id = self.push(Intention::Dataset);
                self.dataset_state = Some(id);
                id
            }
        }
    }

    pub fn add_items(&mut self, items: Vec<Item>) -> StateId {
        self.push(Intention::Items(items))
    }

    /// Adds a state without computing it.
    pub fn add_lazy(&mut self, intention: Intention) -> Result<StateId> {
        self.check_refs(&intention)?;
        Ok(self.push(intention))
    }

    /// Records and evaluates an operator application. Returns the new state
    /// followed by any states created by back-propagation. Nothing is kept
    /// when evaluation fails.
    pub fn invoke(&mut self, inv: Invocation) -> Result<Vec<StateId>> {
        if inv.op == Operator::Branch {
            return Err(Error::arg("branch is evaluated by the expression layer, not recorded as a state"));
        }
        if inv.inputs.len() != inv.op.set_inputs() {
            return Err(Error::Arity(format!(
                "{} takes {} input set(s), got {}",
                inv.op.name(),
                inv.op.set_inputs(),
                inv.inputs.len()
            )));
        }
        let cp = self.checkpoint();
        let r = self.invoke_inner(inv, true);
        if r.is_err() {
            self.rollback(cp);
        }
        r
    }

    fn invoke_inner(&mut self, inv: Invocation, strict_register: bool) -> Result<Vec<StateId>> {
        let intention = Intention::Invoke(inv.clone());
        self.check_refs(&intention)?;
        let id = self.push(intention);
        self.extension(id)?;
        if let Some(t) = inv.register_as() {
            let name = match t {
                Term::Rel(rp) if rp.len() == 1 && !rp.steps()[0].inverse => rp.steps()[0].id.clone(),
                t => return Err(Error::arg(format!("`as` expects a relation name like :name, got {}", dsl::print_term(t)))),
            };
            match self.register_computed_relation(id, &name) {
                Ok(()) => {}
                Err(Error::RelationExists(_)) if !strict_register => {}
                Err(e) => return Err(e),
            }
        }
        let mut out = vec![id];
        if inv.propagate {
            out.extend(self.back_propagate(id)?);
        }
        Ok(out)
    }

    /// Publishes a depth-3 state whose level-2 nodes each have one leaf
    /// child as relation `name`, usable in later relation paths.
    pub fn register_computed_relation(&mut self, state: StateId, name: &str) -> Result<()> {
        if !name.starts_with(':') || name.len() < 2 {
            return Err(Error::arg(format!("relation names start with ':', got {name:?}")));
        }
        if self.dataset.relation_map().contains_key(name) || self.computed.contains_key(name) {
            return Err(Error::RelationExists(name.to_string()));
        }
        let set = self.extension(state)?;
        let mut rel = Relation::new(name, Provenance::Computed);
        for &n in set.children(set.root()) {
            let kids = set.children(n);
            if kids.len() != 1 || !set.children(kids[0]).is_empty() {
                return Err(Error::ShapeMismatch(format!(
                    "s{state}: {} needs exactly one leaf below every level-2 node to be a relation",
                    set.item(n).id()
                )));
            }
            rel.insert(set.item(n).clone(), set.item(kids[0]).clone());
        }
        self.computed.insert(name.to_string(), rel);
        self.computed_from.insert(name.to_string(), state);
        Ok(())
    }

    /// Pushes the result of refine state `refine` back through each pivot
    /// that produced its input, creating one state per ancestor.
    pub fn back_propagate(&mut self, refine: StateId) -> Result<Vec<StateId>> {
        let input = match self.intention(refine)? {
            Intention::Invoke(inv) if inv.op == Operator::Refine => inv.inputs[0],
            other => {
                return Err(Error::UnsupportedShape(format!(
                    "back-propagation starts at a refine, s{refine} is {}",
                    other.kind()
                )))
            }
        };
        let mut out = Vec::new();
        let (mut support, mut cur) = (refine, input);
        while let Intention::Invoke(inv) = self.intention(cur)? {
            if inv.op != Operator::Pivot || inv.slice.is_some() {
                break;
            }
            let ancestor = inv.inputs[0];
            let d = self.push(Intention::Propagated { refine, ancestor, pivot: cur, support });
            self.extension(d)?;
            out.push(d);
            support = d;
            cur = ancestor;
        }
        if out.is_empty() {
            let what = self.intention(cur)?.kind();
            return Err(Error::UnsupportedShape(format!(
                "back-propagation needs the refined set to come from a pivot; s{cur} is {what}"
            )));
        }
        Ok(out)
    }

    /// Re-evaluates the intentions of `ids` (in id order) with input
    /// substitutions `subs`, creating new states. Each replayed state reads
    /// the replayed versions of earlier states in `ids`. Returns the new
    /// states; on error nothing is kept.
    pub fn replay(&mut self, ids: &[StateId], subs: &[(StateId, StateId)]) -> Result<Vec<StateId>> {
        let cp = self.checkpoint();
        let r = self.replay_inner(ids, subs);
        if r.is_err() {
            self.rollback(cp);
        }
        r
    }

    fn replay_inner(&mut self, ids: &[StateId], subs: &[(StateId, StateId)]) -> Result<Vec<StateId>> {
        for &(from, to) in subs {
            self.state(from)?;
            self.state(to)?;
        }
        let mut ids: Vec<StateId> = ids.to_vec();
        ids.sort_unstable();
        ids.dedup();
        for &i in &ids {
            if let Intention::Propagated { refine, .. } = self.state(i)?.intention {
                if !ids.contains(&refine) {
                    return Err(Error::UnsupportedShape(format!(
                        "s{i} was derived by back-propagation; replay its refine s{refine} instead"
                    )));
                }
            }
        }
        let mut map: HashMap<StateId, StateId> = subs.iter().copied().collect();
        let mut out = Vec::new();
        for id in ids {
            if map.contains_key(&id) {
                continue;
            }
            let intention = self.intention(id)?.remap(&map);
            let created = match intention {
                Intention::Invoke(inv) => {
                    let created = self.invoke_inner(inv, false)?;
                    // States the original `!` derived map onto the new ones.
                    let derived: Vec<StateId> = self
                        .states
                        .iter()
                        .filter(|s| matches!(s.intention, Intention::Propagated { refine, .. } if refine == id))
                        .map(|s| s.id)
                        .collect();
                    for (old, new) in derived.iter().zip(created.iter().skip(1)) {
                        map.insert(*old, *new);
                    }
                    created
                }
                other => {
                    self.check_refs(&other)?;
                    if other == Intention::Dataset {
                        let d = self.dataset_state();
                        map.insert(id, d);
                        continue;
                    }
                    let n = self.push(other);
                    self.extension(n)?;
                    vec![n]
                }
            };
            map.insert(id, created[0]);
            out.extend(created);
        }
        Ok(out)
    }

    pub fn trail(&self) -> Trail {
        let mut names: HashMap<StateId, Vec<String>> = HashMap::new();
        for (n, b) in &self.names {
            match *b {
                Binding::State(s) => names.entry(s).or_default().push(n.clone()),
                Binding::Pair(a, b) => {
                    names.entry(a).or_default().push(format!("{n}.1"));
                    names.entry(b).or_default().push(format!("{n}.2"));
                }
            }
        }
        let nodes = self
            .states
            .iter()
            .map(|s| TrailNode {
                id: s.id,
                kind: s.intention.kind(),
                intention: s.intention.text(),
                names: names.remove(&s.id).unwrap_or_default(),
                created_ms: s.created_ms,
                materialized: s.is_materialized(),
            })
            .collect();
        let mut edges = Vec::new();
        for s in &self.states {
            for d in s.intention.deps() {
                if !edges.contains(&(d, s.id)) {
                    edges.push((d, s.id));
                }
            }
        }
        Trail { nodes, edges }
    }

    /// Evaluates a script, binding names as it goes. Stops at the first
    /// failing statement; states from that statement are discarded.
    pub fn eval(&mut self, src: &str) -> Result<Vec<Outcome>> {
        let script = dsl::parse_script(src)?;
        let mut out = Vec::new();
        for st in &script.stmts {
            out.push(self.eval_stmt(st)?);
        }
        Ok(out)
    }

    pub fn eval_stmt(&mut self, st: &dsl::Stmt) -> Result<Outcome> {
        eval::eval_stmt(self, st)
    }

    /// Evaluates one expression and returns its single resulting state.
    pub fn eval_expr(&mut self, src: &str) -> Result<StateId> {
        let e = dsl::parse_expr(src)?;
        let st = dsl::Stmt { target: None, expr: e, loc: Loc::default() };
        match self.eval_stmt(&st)?.value {
            Value::State(s) => Ok(s),
            Value::Pair(..) => Err(Error::arg("expression yields two states")),
        }
    }

    /// Script that rebuilds this session on the same dataset.
    pub fn save(&self) -> String {
        persist::save(self)
    }

    pub fn load(dataset: Arc<Dataset>, text: &str) -> Result<Session> {
        persist::load(dataset, text)
    }
}
