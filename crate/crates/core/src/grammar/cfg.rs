//! Strategy grammars: context-free productions over skeleton templates,
//! written as in `S -> branch(s0, S, S) | R`.

use std::fmt;

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::ops::Operator;

/// Right-hand side of a production.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Template {
    Nt { name: String, bang: bool },
    S0,
    Irs,
    /// Each slot lists its alternatives.
    Op { op: Operator, slots: Vec<Vec<Template>>, bang: bool },
}

impl Template {
    /// `X` without `!`: derives exactly what `X` derives.
    pub(crate) fn unit(&self) -> Option<&str> {
        match self {
            Template::Nt { name, bang: false } => Some(name),
            _ => None,
        }
    }

    fn visit_nts<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Template::Nt { name, .. } => out.push(name),
            Template::Op { slots, .. } => slots.iter().flatten().for_each(|t| t.visit_nts(out)),
            _ => {}
        }
    }

    fn renamed(&self, f: &dyn Fn(&str) -> String) -> Template {
        match self {
            Template::Nt { name, bang } => Template::Nt { name: f(name), bang: *bang },
            Template::Op { op, slots, bang } => Template::Op {
                op: *op,
                slots: slots.iter().map(|s| s.iter().map(|t| t.renamed(f)).collect()).collect(),
                bang: *bang,
            },
            t => t.clone(),
        }
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Template::Nt { name, bang } => write!(f, "{name}{}", if *bang { "!" } else { "" }),
            Template::S0 => f.write_str("s0"),
            Template::Irs => f.write_str("irs"),
            Template::Op { op, slots, bang } => {
                write!(f, "{}(", op.name())?;
                for (i, slot) in slots.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    let alts: Vec<String> = slot.iter().map(|t| t.to_string()).collect();
                    f.write_str(&alts.join(" | "))?;
                }
                write!(f, "){}", if *bang { "!" } else { "" })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grammar {
    name: String,
    start: String,
    rules: IndexMap<String, Vec<Template>>,
}

impl Grammar {
    /// One production per line, `#` comments; the first head is the start
    /// symbol. Repeated heads add alternatives.
    pub fn parse(name: &str, text: &str) -> Result<Grammar> {
        let mut rules: IndexMap<String, Vec<Template>> = IndexMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |m: String| Error::Grammar(format!("line {}: {m}", n + 1));
            let (head, body) = line
                .split_once("->")
                .or_else(|| line.split_once('→'))
                .ok_or_else(|| err("expected `N -> alternatives`".into()))?;
            let head = head.trim();
            if !is_nonterminal(head) {
                return Err(err(format!("`{head}` is not a nonterminal (capitalised name)")));
            }
            let mut p = TplParser { s: body.as_bytes(), i: 0 };
            let alts = p.alternatives().map_err(err)?;
            p.ws();
            if p.i != p.s.len() {
                return Err(err(format!("unexpected `{}`", &body[p.i..])));
            }
            rules.entry(head.to_string()).or_default().extend(alts);
        }
        let start = rules.keys().next().cloned().ok_or_else(|| Error::Grammar("grammar has no productions".into()))?;
        let g = Grammar { name: name.to_string(), start, rules };
        g.check()?;
        Ok(g)
    }

    fn check(&self) -> Result<()> {
        for alts in self.rules.values() {
            let mut used = Vec::new();
            alts.iter().for_each(|t| t.visit_nts(&mut used));
            if let Some(u) = used.iter().find(|u| !self.rules.contains_key(**u)) {
                return Err(Error::Grammar(format!("undeclared nonterminal {u}")));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn start(&self) -> &str {
        &self.start
    }

    pub fn rules(&self) -> &IndexMap<String, Vec<Template>> {
        &self.rules
    }

    /// A grammar whose language is the union of `parts`, nonterminals
    /// renamed apart with a per-part suffix.
    pub fn union(name: &str, parts: &[&Grammar]) -> Grammar {
        let mut rules = IndexMap::new();
        let start = "S".to_string();
        let mut starts = Vec::new();
        for (k, g) in parts.iter().enumerate() {
            let suffix = (k + 1).to_string();
            let rename = |n: &str| format!("{n}{suffix}");
            starts.push(Template::Nt { name: rename(&g.start), bang: false });
            for (head, alts) in &g.rules {
                rules.insert(rename(head), alts.iter().map(|t| t.renamed(&rename)).collect::<Vec<_>>());
            }
        }
        let mut all = IndexMap::new();
        all.insert(start.clone(), starts);
        all.extend(rules);
        Grammar { name: name.to_string(), start, rules: all }
    }
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (head, alts) in &self.rules {
            let alts: Vec<String> = alts.iter().map(|t| t.to_string()).collect();
            writeln!(f, "{head} -> {}", alts.join(" | "))?;
        }
        Ok(())
    }
}

fn is_nonterminal(s: &str) -> bool {
    let b = s.as_bytes();
    !b.is_empty() && b[0].is_ascii_uppercase() && b.iter().all(|c| c.is_ascii_alphanumeric() || *c == b'_' || *c == b'\'')
}

struct TplParser<'a> {
    s: &'a [u8],
    i: usize,
}

impl TplParser<'_> {
    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.ws();
        if self.s.get(self.i) == Some(&c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn alternatives(&mut self) -> std::result::Result<Vec<Template>, String> {
        let mut alts = vec![self.item()?];
        while self.eat(b'|') {
            alts.push(self.item()?);
        }
        Ok(alts)
    }

    fn item(&mut self) -> std::result::Result<Template, String> {
        self.ws();
        let start = self.i;
        while self.i < self.s.len() && (self.s[self.i].is_ascii_alphanumeric() || matches!(self.s[self.i], b'_' | b'\'')) {
            self.i += 1;
        }
        let word = std::str::from_utf8(&self.s[start..self.i]).map_err(|e| e.to_string())?;
        if word.is_empty() {
            return Err(format!("expected a symbol at column {}", start + 1));
        }
        let mut t = if self.eat(b'(') {
            let op = Operator::from_name(word).ok_or_else(|| format!("unknown operator `{word}`"))?;
            let mut slots = vec![self.alternatives()?];
            while self.eat(b',') {
                slots.push(self.alternatives()?);
            }
            if !self.eat(b')') {
                return Err(format!("expected `)` at column {}", self.i + 1));
            }
            if op != Operator::Branch && slots.len() != op.set_inputs() {
                return Err(format!("{} takes {} input(s), got {}", op.name(), op.set_inputs(), slots.len()));
            }
            if op == Operator::Branch && slots.len() != 3 {
                return Err("branch takes 3 inputs".into());
            }
            Template::Op { op, slots, bang: false }
        } else if word == "s0" {
            Template::S0
        } else if word == "irs" {
            Template::Irs
        } else if is_nonterminal(word) {
            Template::Nt { name: word.to_string(), bang: false }
        } else {
            return Err(format!("`{word}` is neither a nonterminal, s0, irs nor an operator"));
        };
        if self.eat(b'!') {
            t = match t {
                Template::Nt { name, .. } => Template::Nt { name, bang: true },
                Template::Op { op, slots, .. } => Template::Op { op, slots, bang: true },
                _ => return Err("`!` applies to operators and nonterminals".into()),
            };
        }
        Ok(t)
    }
}
