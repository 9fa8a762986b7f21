//! Membership by memoized top-down matching over the skeleton tree.
//!
//! Unit productions (`S -> R`) are closed up front, so every remaining
//! match either consumes an operator node or strips a `!`, and recursion
//! always makes progress.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::cfg::{Grammar, Template};
use super::skeleton::Skeleton;
use crate::ops::Operator;

/// How one nonterminal produced one node: a chain of unit steps, then a rule.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Derivation {
    /// Starts with the expanded nonterminal; each next entry is a unit step.
    pub chain: Vec<String>,
    pub rule: Inst,
}

/// An instantiated template: each slot resolved to one alternative.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Inst {
    Leaf { symbol: String },
    Op { op: Operator, bang: bool, children: Vec<Inst> },
    Nt { bang: bool, derivation: Arc<Derivation> },
}

impl Derivation {
    /// Sentential forms of the leftmost derivation, start symbol first.
    pub fn steps(&self) -> Vec<String> {
        let mut form = Form::Hole { bang: false, d: self, at: 0 };
        let mut out = vec![form.to_string()];
        while form.expand() {
            out.push(form.to_string());
        }
        out
    }
}

enum Form<'a> {
    Leaf(&'a str),
    Op { op: Operator, bang: bool, kids: Vec<Form<'a>> },
    Hole { bang: bool, d: &'a Derivation, at: usize },
}

impl<'a> Form<'a> {
    fn of(inst: &'a Inst, bang: bool) -> Form<'a> {
        match inst {
            Inst::Leaf { symbol } => Form::Leaf(symbol),
            Inst::Op { op, bang: b, children } => {
                Form::Op { op: *op, bang: bang || *b, kids: children.iter().map(|c| Form::of(c, false)).collect() }
            }
            Inst::Nt { bang: b, derivation } => Form::Hole { bang: bang || *b, d: derivation, at: 0 },
        }
    }

    /// Expands the leftmost hole by one step.
    fn expand(&mut self) -> bool {
        match self {
            Form::Leaf(_) => false,
            Form::Op { kids, .. } => kids.iter_mut().any(|k| k.expand()),
            Form::Hole { bang, d, at } => {
                if *at + 1 < d.chain.len() {
                    *at += 1;
                } else {
                    *self = Form::of(&d.rule, *bang);
                }
                true
            }
        }
    }
}

impl fmt::Display for Form<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Form::Leaf(s) => f.write_str(s),
            Form::Hole { bang, d, at } => write!(f, "{}{}", d.chain[*at], if *bang { "!" } else { "" }),
            Form::Op { op, bang, kids } => {
                write!(f, "{}(", op.name())?;
                for (i, k) in kids.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{k}")?;
                }
                write!(f, "){}", if *bang { "!" } else { "" })
            }
        }
    }
}

/// For each nonterminal, the nonterminals reachable through unit
/// productions, with the chain that reaches them (itself first).
pub(crate) fn unit_closure(g: &Grammar) -> HashMap<&str, Vec<Vec<&str>>> {
    let mut out = HashMap::new();
    for start in g.rules().keys() {
        let mut seen = vec![start.as_str()];
        let mut chains = vec![vec![start.as_str()]];
        let mut queue = VecDeque::from([vec![start.as_str()]]);
        while let Some(chain) = queue.pop_front() {
            let last = *chain.last().expect("non-empty chain");
            for t in &g.rules()[last] {
                if let Some(next) = t.unit() {
                    if !seen.contains(&next) {
                        seen.push(next);
                        let mut c = chain.clone();
                        c.push(next);
                        chains.push(c.clone());
                        queue.push_back(c);
                    }
                }
            }
        }
        out.insert(start.as_str(), chains);
    }
    out
}

/// A template with nonterminals resolved to indices.
enum Tpl {
    Nt(usize, bool),
    S0,
    Irs,
    Op { op: Operator, slots: Vec<Vec<Tpl>>, bang: bool },
}

impl Tpl {
    fn of(t: &Template, index: &HashMap<&str, usize>) -> Tpl {
        match t {
            Template::Nt { name, bang } => Tpl::Nt(index[name.as_str()], *bang),
            Template::S0 => Tpl::S0,
            Template::Irs => Tpl::Irs,
            Template::Op { op, slots, bang } => Tpl::Op {
                op: *op,
                slots: slots.iter().map(|s| s.iter().map(|t| Tpl::of(t, index)).collect()).collect(),
                bang: *bang,
            },
        }
    }
}

/// Memo key: nonterminal, node address, inside a branch body, `!` stripped.
type Key = (usize, usize, bool, bool);

struct Matcher {
    names: Vec<String>,
    start: usize,
    /// Non-unit alternatives per nonterminal.
    rules: Arc<Vec<Vec<Tpl>>>,
    /// Unit chains per nonterminal, itself first.
    chains: Vec<Vec<Vec<usize>>>,
    memo: HashMap<Key, Option<Arc<Derivation>>>,
}

impl Matcher {
    fn new(g: &Grammar) -> Matcher {
        let index: HashMap<&str, usize> = g.rules().keys().enumerate().map(|(i, k)| (k.as_str(), i)).collect();
        let rules = g
            .rules()
            .values()
            .map(|alts| alts.iter().filter(|t| t.unit().is_none()).map(|t| Tpl::of(t, &index)).collect())
            .collect::<Vec<_>>();
        let closure = unit_closure(g);
        let chains = g
            .rules()
            .keys()
            .map(|k| closure[k.as_str()].iter().map(|c| c.iter().map(|n| index[n]).collect()).collect())
            .collect();
        Matcher {
            names: g.rules().keys().cloned().collect(),
            start: index[g.start()],
            rules: Arc::new(rules),
            chains,
            memo: HashMap::new(),
        }
    }

    /// Matches `node`, read without its `!` when `strip` is set.
    fn nt(&mut self, nt: usize, node: &Skeleton, body: bool, strip: bool) -> Option<Arc<Derivation>> {
        let key = (nt, node as *const Skeleton as usize, body, strip);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let mut found = None;
        let rules = self.rules.clone();
        'chains: for c in 0..self.chains[nt].len() {
            let last = *self.chains[nt][c].last().expect("non-empty chain");
            for t in &rules[last] {
                if let Some(rule) = self.tpl(t, node, body, strip) {
                    let chain = self.chains[nt][c].iter().map(|&i| self.names[i].clone()).collect();
                    found = Some(Arc::new(Derivation { chain, rule }));
                    break 'chains;
                }
            }
        }
        self.memo.insert(key, found.clone());
        found
    }

    fn tpl(&mut self, t: &Tpl, node: &Skeleton, body: bool, strip: bool) -> Option<Inst> {
        match (t, node) {
            (Tpl::S0, Skeleton::S0) if !body => Some(Inst::Leaf { symbol: "s0".into() }),
            (Tpl::S0 | Tpl::Irs, Skeleton::Irs) if body => Some(Inst::Leaf { symbol: "irs".into() }),
            (Tpl::Nt(nt, false), _) => {
                self.nt(*nt, node, body, strip).map(|d| Inst::Nt { bang: false, derivation: d })
            }
            (Tpl::Nt(nt, true), Skeleton::Op { bang: true, .. }) if !strip => {
                self.nt(*nt, node, body, true).map(|d| Inst::Nt { bang: true, derivation: d })
            }
            (Tpl::Op { op, slots, bang }, Skeleton::Op { op: nop, bang: nbang, children })
                if op == nop && *bang == (*nbang && !strip) && slots.len() == children.len() =>
            {
                let mut kids = Vec::with_capacity(children.len());
                for (i, (slot, child)) in slots.iter().zip(children).enumerate() {
                    let inner = body || (*op == Operator::Branch && i >= 1);
                    kids.push(slot.iter().find_map(|alt| self.tpl(alt, child, inner, false))?);
                }
                Some(Inst::Op { op: *op, bang: *bang, children: kids })
            }
            _ => None,
        }
    }
}

/// One derivation of `sk` from the start symbol, if any.
pub fn derive(g: &Grammar, sk: &Skeleton) -> Option<Derivation> {
    let mut m = Matcher::new(g);
    let start = m.start;
    m.nt(start, sk, false, false).map(|d| (*d).clone())
}

pub fn derivable(g: &Grammar, sk: &Skeleton) -> bool {
    derive(g, sk).is_some()
}

/// Reusable membership checks against one grammar.
pub struct Membership {
    m: Matcher,
}

impl Membership {
    pub fn new(g: &Grammar) -> Membership {
        Membership { m: Matcher::new(g) }
    }

    pub fn contains(&mut self, sk: &Skeleton) -> bool {
        // nodes are memoized by address, which is only stable within a query
        self.m.memo.clear();
        let start = self.m.start;
        self.m.nt(start, sk, false, false).is_some()
    }

    /// Checks many sentences with one memo, so subtrees shared between
    /// them (as enumeration produces) are matched once.
    pub fn contains_all<'s>(&mut self, sentences: impl IntoIterator<Item = &'s Skeleton>) -> Vec<bool> {
        self.m.memo.clear();
        let start = self.m.start;
        // every borrowed sentence outlives this call, so addresses stay unique
        let out = sentences.into_iter().map(|s| self.m.nt(start, s, false, false).is_some()).collect();
        self.m.memo.clear();
        out
    }
}
