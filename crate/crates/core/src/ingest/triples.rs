//! Tab-separated triple files: `subject \t :relation \t object`.
//!
//! Literal syntax decides the kind of a term: `"quoted"` is a string,
//! `-?digits` an int, `-?digits.digits` a float, anything else an entity.
//! The reserved `:label` relation sets display labels.

use std::collections::HashMap;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::{Dataset, Item, ItemKind, RelationSource};

pub const LABEL: &str = ":label";

#[derive(Debug, Clone, PartialEq)]
pub struct TripleRecord {
    pub subject: Item,
    pub relation: String,
    pub object: Item,
}

fn is_int(s: &str) -> bool {
    let d = s.strip_prefix('-').unwrap_or(s);
    !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit())
}

fn is_float(s: &str) -> bool {
    let d = s.strip_prefix('-').unwrap_or(s);
    match d.split_once('.') {
        Some((a, b)) => {
            !a.is_empty()
                && !b.is_empty()
                && a.bytes().all(|c| c.is_ascii_digit())
                && b.bytes().all(|c| c.is_ascii_digit())
        }
        None => false,
    }
}

fn unquote(s: &str) -> std::result::Result<String, String> {
    let inner = s
        .strip_prefix('"')
        .and_then(|r| r.strip_suffix('"'))
        .filter(|_| s.len() >= 2)
        .ok_or_else(|| format!("unterminated string {s}"))?;
    let mut out = String::with_capacity(inner.len());
    let mut chars = inner.chars();
    while let Some(c) = chars.next() {
        match c {
            '\\' => match chars.next() {
                Some('"') => out.push('"'),
                Some('\\') => out.push('\\'),
                Some('n') => out.push('\n'),
                Some('t') => out.push('\t'),
                other => return Err(format!("bad escape \\{}", other.map(String::from).unwrap_or_default())),
            },
            '"' => return Err(format!("unescaped quote in {s}")),
            c => out.push(c),
        }
    }
    Ok(out)
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Parses one term by the literal rules.
pub fn parse_term(text: &str) -> std::result::Result<Item, String> {
    if text.is_empty() {
        return Err("empty term".into());
    }
    if text.starts_with('"') {
        return unquote(text).map(Item::string);
    }
    if is_int(text) {
        return text.parse::<i64>().map(Item::int).map_err(|e| format!("{text}: {e}"));
    }
    if is_float(text) {
        return text.parse::<f64>().map(Item::float).map_err(|e| format!("{text}: {e}"));
    }
    if text.chars().any(char::is_whitespace) {
        return Err(format!("entity id {text:?} contains whitespace"));
    }
    Ok(Item::entity(text))
}

/// Inverse of [`parse_term`].
pub fn format_term(item: &Item) -> String {
    match item.kind() {
        ItemKind::Entity | ItemKind::LiteralInt => item.id().to_string(),
        ItemKind::LiteralString => quote(item.id()),
        ItemKind::LiteralFloat => {
            let v = item.numeric().unwrap_or(f64::NAN);
            let s = format!("{v}");
            if s.contains('.') {
                s
            } else {
                format!("{s}.0")
            }
        }
    }
}

/// Parses records, checking that one id never appears with two kinds.
pub fn parse_triples(text: &str) -> Result<Vec<TripleRecord>> {
    let mut out = Vec::new();
    let mut kinds: HashMap<String, ItemKind> = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim_end_matches('\r');
        if l.trim().is_empty() || l.trim_start().starts_with('#') {
            continue;
        }
        let err = |reason: String| Error::Ingest { line, reason };
        let fields: Vec<&str> = l.split('\t').collect();
        if fields.len() != 3 {
            return Err(err(format!("expected 3 tab-separated fields, found {}", fields.len())));
        }
        let relation = fields[1].trim();
        if !relation.starts_with(':') || relation.len() < 2 {
            return Err(err(format!("relation {relation:?} must start with ':'")));
        }
        let subject = parse_term(fields[0].trim()).map_err(err)?;
        let object = parse_term(fields[2].trim()).map_err(err)?;
        if relation == LABEL && object.kind() != ItemKind::LiteralString {
            return Err(err("labels must be quoted strings".into()));
        }
        let mut terms = vec![&subject];
        if relation != LABEL {
            terms.push(&object);
        }
        for t in terms {
            match kinds.get(t.id()) {
                Some(&k) if k != t.kind() => {
                    return Err(err(format!(
                        "id {} used as {} and as {}",
                        t.id(),
                        k.as_str(),
                        t.kind().as_str()
                    )))
                }
                Some(_) => {}
                None => {
                    kinds.insert(t.id().to_string(), t.kind());
                }
            }
        }
        out.push(TripleRecord { subject, relation: relation.to_string(), object });
    }
    Ok(out)
}

pub fn build_dataset(records: Vec<TripleRecord>) -> Dataset {
    let mut d = Dataset::new();
    let mut labels = Vec::new();
    for r in records {
        if r.relation == LABEL {
            labels.push((r.subject, r.object));
        } else {
            d.insert(&r.relation, r.subject, r.object);
        }
    }
    for (s, l) in labels {
        d.set_label(&s, l.id());
    }
    d
}

pub fn load_triples(text: &str) -> Result<Dataset> {
    parse_triples(text).map(build_dataset)
}

/// Records of a dataset as lines, sorted.
pub fn records(d: &Dataset) -> Vec<String> {
    let mut lines = Vec::new();
    for r in d.all_relations() {
        for (a, b) in r.pairs() {
            lines.push(format!("{}\t{}\t{}", format_term(a), r.id(), format_term(b)));
        }
    }
    for it in d.items() {
        if let Some(l) = it.label() {
            lines.push(format!("{}\t{LABEL}\t{}", format_term(it), quote(l)));
        }
    }
    lines.sort();
    lines
}

pub fn serialize(d: &Dataset) -> String {
    let mut s = String::new();
    for l in records(d) {
        s.push_str(&l);
        s.push('\n');
    }
    s
}

/// SHA-256 over the sorted record list, hex encoded.
pub fn fingerprint(d: &Dataset) -> String {
    hex::encode(Sha256::digest(serialize(d).as_bytes()))
}
