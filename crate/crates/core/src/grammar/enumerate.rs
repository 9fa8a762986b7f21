//! Bounded enumeration of a grammar's language and depth-bounded
//! comparison of two languages.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use indexmap::IndexSet;
use serde::Serialize;

use super::cfg::{Grammar, Template};
use super::derive::Membership;
use super::skeleton::Skeleton;
use crate::error::{Error, Result};
use crate::ops::Operator;

pub const DEFAULT_MAX_DEPTH: usize = 6;
pub const DEFAULT_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, Copy)]
pub struct EnumerateOptions {
    /// Largest depth a caller may ask for.
    pub cap: usize,
    /// Sentences that may be materialized before giving up.
    pub budget: usize,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions { cap: DEFAULT_MAX_DEPTH, budget: DEFAULT_BUDGET }
    }
}

/// (nonterminal, inside a branch body)
type Ctx<'g> = (&'g str, bool);

/// Sentences grouped by the depth at which they first appear.
#[derive(Debug, Clone)]
pub struct Enumeration {
    /// `by_depth[d]` holds the sentences of depth exactly `d`, sorted.
    pub by_depth: Vec<Vec<Arc<Skeleton>>>,
    /// False when the budget ran out before `max_depth`.
    pub complete: bool,
}

impl Enumeration {
    /// Deepest depth whose sentences are all present.
    pub fn depth(&self) -> Option<usize> {
        self.by_depth.len().checked_sub(1)
    }

    pub fn sentences(&self) -> impl Iterator<Item = &Arc<Skeleton>> {
        self.by_depth.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.by_depth.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Leaf (`irs` or not) or operator node over interned children.
#[derive(Clone, PartialEq, Eq, Hash)]
enum Node {
    Leaf(bool),
    Op(Operator, bool, Box<[u32]>),
}

/// Hash-consed nodes: equal skeletons share one id, so sets of sentences
/// are sets of integers.
#[derive(Default)]
struct Interner {
    ids: HashMap<Node, u32>,
    nodes: Vec<(Node, Arc<Skeleton>, usize)>,
}

impl Interner {
    fn get(&mut self, n: Node) -> u32 {
        if let Some(&id) = self.ids.get(&n) {
            return id;
        }
        let (sk, depth) = match &n {
            Node::Leaf(true) => (Skeleton::Irs, 0),
            Node::Leaf(false) => (Skeleton::S0, 0),
            Node::Op(op, bang, kids) => {
                let children = kids.iter().map(|&k| self.nodes[k as usize].1.clone()).collect();
                let depth = 1 + kids.iter().map(|&k| self.nodes[k as usize].2).max().unwrap_or(0);
                (Skeleton::Op { op: *op, bang: *bang, children }, depth)
            }
        };
        let id = u32::try_from(self.nodes.len()).expect("fewer than 2^32 nodes");
        self.ids.insert(n.clone(), id);
        self.nodes.push((n, Arc::new(sk), depth));
        id
    }

    /// The node with a `!` added, when it is an operator node without one.
    fn banged(&mut self, id: u32) -> Option<u32> {
        match &self.nodes[id as usize].0 {
            Node::Op(op, false, kids) => {
                let n = Node::Op(*op, true, kids.clone());
                Some(self.get(n))
            }
            _ => None,
        }
    }
}

type Set = Arc<IndexSet<u32>>;

struct Enumerator<'g> {
    g: &'g Grammar,
    ctxs: Vec<Ctx<'g>>,
    /// `levels[d][ctx]`: sentences of depth at most `d`.
    levels: Vec<HashMap<Ctx<'g>, Set>>,
    nodes: Interner,
    produced: usize,
    budget: usize,
}

struct OutOfBudget;

impl<'g> Enumerator<'g> {
    fn new(g: &'g Grammar, budget: usize) -> Enumerator<'g> {
        Enumerator { g, ctxs: reachable(g), levels: Vec::new(), nodes: Interner::default(), produced: 0, budget }
    }

    fn charge(&mut self, n: usize) -> std::result::Result<(), OutOfBudget> {
        self.produced = self.produced.saturating_add(n);
        if self.produced > self.budget {
            Err(OutOfBudget)
        } else {
            Ok(())
        }
    }

    /// Sentences of `t` of depth at most `d`, for a template nested in an
    /// operator slot (so every nonterminal level up to `d` is final).
    fn nested(&mut self, t: &Template, d: usize, body: bool) -> std::result::Result<Vec<u32>, OutOfBudget> {
        Ok(match t {
            Template::S0 => vec![self.nodes.get(Node::Leaf(body))],
            Template::Irs if body => vec![self.nodes.get(Node::Leaf(true))],
            Template::Irs => vec![],
            Template::Nt { name, bang } => {
                let set = self.levels[d][&(name.as_str(), body)].clone();
                if *bang {
                    set.iter().filter_map(|&s| self.nodes.banged(s)).collect()
                } else {
                    set.iter().copied().collect()
                }
            }
            Template::Op { .. } if d == 0 => vec![],
            Template::Op { op, slots, bang } => self.product(*op, slots, *bang, d - 1, body)?,
        })
    }

    /// Every instantiation of `op(slots)` whose children have depth at most `d`.
    fn product(
        &mut self,
        op: Operator,
        slots: &[Vec<Template>],
        bang: bool,
        d: usize,
        body: bool,
    ) -> std::result::Result<Vec<u32>, OutOfBudget> {
        let mut options: Vec<IndexSet<u32>> = Vec::with_capacity(slots.len());
        for (i, slot) in slots.iter().enumerate() {
            let inner = body || (op == Operator::Branch && i >= 1);
            let mut opts = IndexSet::new();
            for alt in slot {
                opts.extend(self.nested(alt, d, inner)?);
            }
            options.push(opts);
        }
        let total = options.iter().fold(1usize, |acc, o| acc.saturating_mul(o.len()));
        self.charge(total)?;
        let mut out = Vec::with_capacity(total);
        if total == 0 {
            return Ok(out);
        }
        let mut idx = vec![0usize; options.len()];
        loop {
            let kids: Box<[u32]> = idx.iter().zip(&options).map(|(&i, o)| o[i]).collect();
            out.push(self.nodes.get(Node::Op(op, bang, kids)));
            let mut k = idx.len();
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < options[k].len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    /// Computes `levels[d]` from `levels[d - 1]`.
    fn level(&mut self, d: usize) -> std::result::Result<(), OutOfBudget> {
        let ctxs = self.ctxs.clone();
        let g = self.g;
        let mut sets: HashMap<Ctx<'g>, IndexSet<u32>> = HashMap::new();
        for &(nt, body) in &ctxs {
            let mut set = IndexSet::new();
            for t in &g.rules()[nt] {
                let found = match t {
                    Template::Nt { .. } => continue,
                    Template::Op { op, slots, bang } if d > 0 => self.product(*op, slots, *bang, d - 1, body)?,
                    Template::Op { .. } => continue,
                    leaf => self.nested(leaf, d, body)?,
                };
                set.extend(found);
            }
            sets.insert((nt, body), set);
        }
        // unit and `X!` alternatives stay at the same depth: iterate to a fixpoint
        loop {
            let mut grew = false;
            for &(nt, body) in &ctxs {
                let mut add = Vec::new();
                for t in &g.rules()[nt] {
                    let Template::Nt { name, bang } = t else { continue };
                    for &s in &sets[&(name.as_str(), body)] {
                        let s = if *bang {
                            match self.nodes.banged(s) {
                                Some(b) => b,
                                None => continue,
                            }
                        } else {
                            s
                        };
                        if !sets[&(nt, body)].contains(&s) {
                            add.push(s);
                        }
                    }
                }
                if !add.is_empty() {
                    self.charge(add.len())?;
                    grew = true;
                    sets.get_mut(&(nt, body)).expect("reachable context").extend(add);
                }
            }
            if !grew {
                break;
            }
        }
        self.levels.push(sets.into_iter().map(|(k, v)| (k, Arc::new(v))).collect());
        Ok(())
    }
}

/// (nonterminal, body) pairs reachable from the start symbol at top level.
fn reachable(g: &Grammar) -> Vec<Ctx<'_>> {
    fn visit<'g>(t: &'g Template, body: bool, out: &mut Vec<Ctx<'g>>, todo: &mut Vec<Ctx<'g>>) {
        match t {
            Template::Nt { name, .. } => {
                let c = (name.as_str(), body);
                if !out.contains(&c) {
                    out.push(c);
                    todo.push(c);
                }
            }
            Template::Op { op, slots, .. } => {
                for (i, slot) in slots.iter().enumerate() {
                    let inner = body || (*op == Operator::Branch && i >= 1);
                    slot.iter().for_each(|t| visit(t, inner, out, todo));
                }
            }
            _ => {}
        }
    }
    let start = (g.start(), false);
    let mut out = vec![start];
    let mut todo = vec![start];
    while let Some((nt, body)) = todo.pop() {
        for t in &g.rules()[nt] {
            visit(t, body, &mut out, &mut todo);
        }
    }
    out
}

/// Sentences of depth at most `max_depth`, level by level, stopping early
/// if the budget runs out.
pub fn enumerate_with(g: &Grammar, max_depth: usize, opts: EnumerateOptions) -> Result<Enumeration> {
    if max_depth > opts.cap {
        return Err(Error::Grammar(format!("depth {max_depth} exceeds the enumeration cap {}", opts.cap)));
    }
    let mut e = Enumerator::new(g, opts.budget);
    let mut by_depth = Vec::new();
    for d in 0..=max_depth {
        if e.level(d).is_err() {
            return Ok(Enumeration { by_depth, complete: false });
        }
        let nodes = &e.nodes.nodes;
        let mut fresh: Vec<Arc<Skeleton>> = e.levels[d][&(g.start(), false)]
            .iter()
            .map(|&s| &nodes[s as usize])
            .filter(|n| n.2 == d)
            .map(|n| n.1.clone())
            .collect();
        fresh.sort();
        by_depth.push(fresh);
    }
    Ok(Enumeration { by_depth, complete: true })
}

/// Exactly the sentences of depth at most `max_depth`, shallowest first.
pub fn enumerate(g: &Grammar, max_depth: usize) -> Result<Vec<Skeleton>> {
    let e = enumerate_with(g, max_depth, EnumerateOptions::default())?;
    if !e.complete {
        return Err(Error::Grammar(format!(
            "{} has more than {DEFAULT_BUDGET} sentences up to depth {max_depth}",
            g.name()
        )));
    }
    Ok(e.sentences().map(|s| (**s).clone()).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Equal,
    /// L(a) is a proper subset of L(b).
    AInB,
    BInA,
    Incomparable,
    /// Neither side could be settled within budget.
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Equal => "equal",
            Verdict::AInB => "a ⊂ b",
            Verdict::BInA => "b ⊂ a",
            Verdict::Incomparable => "incomparable",
            Verdict::Unknown => "unknown",
        })
    }
}

/// One direction of a comparison: sentences of one language missing from
/// the other.
#[derive(Debug, Clone, Serialize)]
pub struct Difference {
    pub count: usize,
    /// Shallowest first, at most `example_limit` of them.
    pub examples: Vec<String>,
    /// Depth up to which this side was fully enumerated.
    pub enumerated_depth: Option<usize>,
    /// True when enumeration stopped short of the requested depth.
    pub truncated: bool,
}

impl Difference {
    /// Some(true) when checked to full depth and empty; Some(false) once a
    /// witness exists (it stays a witness at any larger depth).
    fn contained(&self) -> Option<bool> {
        match (self.count, self.truncated) {
            (0, false) => Some(true),
            (0, true) => None,
            _ => Some(false),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub a: String,
    pub b: String,
    pub max_depth: usize,
    pub only_a: Difference,
    pub only_b: Difference,
    pub a_in_b: Option<bool>,
    pub b_in_a: Option<bool>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Copy)]
pub struct CompareOptions {
    pub enumerate: EnumerateOptions,
    pub example_limit: usize,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions { enumerate: EnumerateOptions::default(), example_limit: 20 }
    }
}

fn one_side(from: &Grammar, other: &Grammar, max_depth: usize, opts: &CompareOptions) -> Result<Difference> {
    let e = enumerate_with(from, max_depth, opts.enumerate)?;
    let mut m = Membership::new(other);
    let found = m.contains_all(e.sentences().map(|s| &**s));
    let mut count = 0;
    let mut examples = Vec::new();
    for (s, inside) in e.sentences().zip(found) {
        if !inside {
            count += 1;
            if examples.len() < opts.example_limit {
                examples.push(s.to_string());
            }
        }
    }
    Ok(Difference { count, examples, enumerated_depth: e.depth(), truncated: !e.complete })
}

/// L(a) and L(b) restricted to depth `max_depth`: each side is enumerated
/// within budget and checked against the other by membership.
pub fn compare_grammars_with(a: &Grammar, b: &Grammar, max_depth: usize, opts: CompareOptions) -> Result<Comparison> {
    let only_a = one_side(a, b, max_depth, &opts)?;
    let only_b = one_side(b, a, max_depth, &opts)?;
    let (a_in_b, b_in_a) = (only_a.contained(), only_b.contained());
    let verdict = match (a_in_b, b_in_a) {
        (Some(true), Some(true)) => Verdict::Equal,
        (Some(true), Some(false)) => Verdict::AInB,
        (Some(false), Some(true)) => Verdict::BInA,
        (Some(false), Some(false)) => Verdict::Incomparable,
        _ => Verdict::Unknown,
    };
    Ok(Comparison { a: a.name().into(), b: b.name().into(), max_depth, only_a, only_b, a_in_b, b_in_a, verdict })
}

pub fn compare_grammars(a: &Grammar, b: &Grammar, max_depth: usize) -> Result<Comparison> {
    compare_grammars_with(a, b, max_depth, CompareOptions::default())
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} vs {} up to depth {}: {}", self.a, self.b, self.max_depth, self.verdict)?;
        for (name, d, other) in [(&self.a, &self.only_a, &self.b), (&self.b, &self.only_b, &self.a)] {
            write!(f, "  in {name} but not {other}: {}", d.count)?;
            if d.truncated {
                match d.enumerated_depth {
                    Some(k) => write!(f, " (enumerated to depth {k} only)")?,
                    None => write!(f, " (not enumerated)")?,
                }
            }
            writeln!(f)?;
            for ex in &d.examples {
                writeln!(f, "    {ex}")?;
            }
            if d.count > d.examples.len() {
                writeln!(f, "    ... {} more", d.count - d.examples.len())?;
            }
        }
        Ok(())
    }
}
