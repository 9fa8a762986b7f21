use std::fmt;

use indexmap::{IndexMap, IndexSet};
use serde::{Deserialize, Serialize};

use super::item::Item;
use super::set::ExplorationSet;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "of")]
pub enum Provenance {
    Schema,
    Computed,
    InverseOf(String),
}

/// A binary relation with both directions indexed.
///
/// Iteration order is insertion order, which keeps operator output stable.
#[derive(Debug, Clone)]
pub struct Relation {
    id: String,
    provenance: Provenance,
    // provenance of the relation this one inverts
    origin: Option<Box<Provenance>>,
    forward: IndexMap<Item, IndexSet<Item>>,
    backward: IndexMap<Item, IndexSet<Item>>,
    len: usize,
}

static EMPTY: std::sync::OnceLock<IndexSet<Item>> = std::sync::OnceLock::new();

fn empty_set() -> &'static IndexSet<Item> {
    EMPTY.get_or_init(IndexSet::new)
}

impl Relation {
    pub fn new(id: impl Into<String>, provenance: Provenance) -> Self {
        Relation {
            id: id.into(),
            provenance,
            origin: None,
            forward: IndexMap::new(),
            backward: IndexMap::new(),
            len: 0,
        }
    }

    pub fn from_pairs<I>(id: impl Into<String>, provenance: Provenance, pairs: I) -> Self
    where
        I: IntoIterator<Item = (Item, Item)>,
    {
        let mut r = Relation::new(id, provenance);
        for (a, b) in pairs {
            r.insert(a, b);
        }
        r
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Adds a pair; returns false when it was already present.
    pub fn insert(&mut self, from: Item, to: Item) -> bool {
        let fresh = self.forward.entry(from.clone()).or_default().insert(to.clone());
        if fresh {
            self.backward.entry(to).or_default().insert(from);
            self.len += 1;
        }
        fresh
    }

    pub fn contains(&self, from: &Item, to: &Item) -> bool {
        self.forward.get(from).is_some_and(|s| s.contains(to))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Item, &Item)> + '_ {
        self.forward.iter().flat_map(|(a, bs)| bs.iter().map(move |b| (a, b)))
    }

    pub fn domain(&self) -> impl Iterator<Item = &Item> + '_ {
        self.forward.keys()
    }

    pub fn image(&self) -> impl Iterator<Item = &Item> + '_ {
        self.backward.keys()
    }

    /// `r[i]`: every `j` with `⟨i, j⟩ ∈ r`.
    pub fn restricted_image(&self, item: &Item) -> &IndexSet<Item> {
        self.forward.get(item).unwrap_or_else(|| empty_set())
    }

    /// `r⁻¹[j]`: every `i` with `⟨i, j⟩ ∈ r`.
    pub fn restricted_domain(&self, item: &Item) -> &IndexSet<Item> {
        self.backward.get(item).unwrap_or_else(|| empty_set())
    }

    /// Looks up `item` in one direction.
    pub fn step(&self, item: &Item, inverse: bool) -> &IndexSet<Item> {
        if inverse {
            self.restricted_domain(item)
        } else {
            self.restricted_image(item)
        }
    }

    pub fn inverse(&self) -> Relation {
        let (id, provenance, origin) = match (&self.provenance, &self.origin) {
            (Provenance::InverseOf(base), Some(origin)) => (base.clone(), (**origin).clone(), None),
            _ => (
                format!("inverse({})", self.id),
                Provenance::InverseOf(self.id.clone()),
                Some(Box::new(self.provenance.clone())),
            ),
        };
        Relation {
            id,
            provenance,
            origin,
            forward: self.backward.clone(),
            backward: self.forward.clone(),
            len: self.len,
        }
    }

    /// Relation join: `{⟨i, j⟩ | ∃k. ⟨i, k⟩ ∈ self ∧ ⟨k, j⟩ ∈ other}`.
    pub fn rjoin(&self, other: &Relation) -> Relation {
        let mut out = Relation::new(format!("{}{}", self.id, other.id), Provenance::Computed);
        for (i, ks) in &self.forward {
            for k in ks {
                for j in other.restricted_image(k) {
                    out.insert(i.clone(), j.clone());
                }
            }
        }
        out
    }

    pub fn same_pairs(&self, other: &Relation) -> bool {
        self.len == other.len && self.pairs().all(|(a, b)| other.contains(a, b))
    }

    /// Two-level tree form: the relation id at the root, domain items at
    /// level 2 and their images at level 3.
    pub fn to_tree(&self) -> ExplorationSet {
        let mut set = ExplorationSet::with_root(Item::entity(self.id.clone()));
        let root = set.root();
        for (a, bs) in &self.forward {
            let n = set.push_child(root, a.clone());
            for b in bs {
                set.push_child(n, b.clone());
            }
        }
        set
    }
}

impl PartialEq for Relation {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id && self.same_pairs(other)
    }
}

/// One step of a relation path: a relation id, possibly walked backwards.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelStep {
    pub id: String,
    pub inverse: bool,
}

impl RelStep {
    pub fn forward(id: impl Into<String>) -> Self {
        RelStep { id: id.into(), inverse: false }
    }

    pub fn backward(id: impl Into<String>) -> Self {
        RelStep { id: id.into(), inverse: true }
    }
}

impl fmt::Display for RelStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "inverse({})", self.id)
        } else {
            f.write_str(&self.id)
        }
    }
}

/// Ordered, non-empty sequence of relation steps whose denotation is the
/// left fold of [`Relation::rjoin`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelationPath {
    steps: Vec<RelStep>,
}

impl RelationPath {
    pub fn new(steps: Vec<RelStep>) -> Self {
        assert!(!steps.is_empty(), "relation paths are non-empty");
        RelationPath { steps }
    }

    pub fn single(id: impl Into<String>) -> Self {
        RelationPath::new(vec![RelStep::forward(id)])
    }

    pub fn steps(&self) -> &[RelStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn then(mut self, other: RelationPath) -> Self {
        self.steps.extend(other.steps);
        self
    }

    /// Reverses the path: `inverse(:A:B)` walks `inverse(:B)` then `inverse(:A)`.
    pub fn inverse(&self) -> RelationPath {
        let steps = self
            .steps
            .iter()
            .rev()
            .map(|s| RelStep { id: s.id.clone(), inverse: !s.inverse })
            .collect();
        RelationPath { steps }
    }

    /// Parses `:A:B`, `inverse(:A)`, and juxtapositions such as `inverse(:A:B):C`.
    pub fn parse(text: &str) -> Option<RelationPath> {
        let mut p = PathParser { s: text.as_bytes(), i: 0 };
        let path = p.path()?;
        p.skip_ws();
        (p.i == p.s.len()).then_some(path)
    }
}

impl fmt::Display for RelationPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            // `:Ainverse(:B)` would read back as one relation name
            if s.inverse && i > 0 && !self.steps[i - 1].inverse {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

pub(crate) fn is_ident_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

struct PathParser<'a> {
    s: &'a [u8],
    i: usize,
}

impl PathParser<'_> {
    fn skip_ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn path(&mut self) -> Option<RelationPath> {
        let mut steps = Vec::new();
        loop {
            self.skip_ws();
            let rest = &self.s[self.i..];
            if rest.first() == Some(&b':') {
                let start = self.i;
                self.i += 1;
                while self.i < self.s.len() && is_ident_byte(self.s[self.i]) {
                    self.i += 1;
                }
                if self.i == start + 1 {
                    return None;
                }
                let id = std::str::from_utf8(&self.s[start..self.i]).ok()?;
                steps.push(RelStep::forward(id));
            } else if rest.starts_with(b"inverse") {
                self.i += "inverse".len();
                self.skip_ws();
                if self.s.get(self.i) != Some(&b'(') {
                    return None;
                }
                self.i += 1;
                let inner = self.path()?;
                self.skip_ws();
                if self.s.get(self.i) != Some(&b')') {
                    return None;
                }
                self.i += 1;
                steps.extend(inner.inverse().steps);
            } else {
                break;
            }
        }
        (!steps.is_empty()).then(|| RelationPath { steps })
    }
}
