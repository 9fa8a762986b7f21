use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

static NEXT_ROOT: AtomicU64 = AtomicU64::new(0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ItemKind {
    Entity,
    LiteralInt,
    LiteralFloat,
    LiteralString,
}

impl ItemKind {
    pub fn is_literal(self) -> bool {
        self != ItemKind::Entity
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ItemKind::Entity => "entity",
            ItemKind::LiteralInt => "literal-int",
            ItemKind::LiteralFloat => "literal-float",
            ItemKind::LiteralString => "literal-string",
        }
    }
}

/// A member of a dataset: an entity or a typed literal.
///
/// Identity is `(kind, id)`; the label is display text only and never takes
/// part in equality or hashing.
#[derive(Clone)]
pub struct Item {
    id: Arc<str>,
    kind: ItemKind,
    label: Option<Arc<str>>,
}

impl Item {
    pub fn entity(id: impl Into<Arc<str>>) -> Self {
        let id = id.into();
        assert!(!id.is_empty(), "entity ids must be non-empty");
        Item { id, kind: ItemKind::Entity, label: None }
    }

    pub fn int(value: i64) -> Self {
        Item { id: value.to_string().into(), kind: ItemKind::LiteralInt, label: None }
    }

    /// Float literal. The id is the shortest round-tripping decimal form,
    /// so `Item::float(525.00)` and `Item::float(525.0)` are the same item.
    pub fn float(value: f64) -> Self {
        Item { id: format!("{value:?}").into(), kind: ItemKind::LiteralFloat, label: None }
    }

    pub fn string(value: impl Into<Arc<str>>) -> Self {
        Item { id: value.into(), kind: ItemKind::LiteralString, label: None }
    }

    /// Number item: ints stay ints, everything else becomes a float.
    pub fn number(value: f64, integral: bool) -> Self {
        if integral && value.fract() == 0.0 && value.abs() < 9.0e15 {
            Item::int(value as i64)
        } else {
            Item::float(value)
        }
    }

    /// Fresh synthetic root identifier (`_:rsN`).
    pub fn fresh_root() -> Self {
        let n = NEXT_ROOT.fetch_add(1, AtomicOrdering::Relaxed);
        Item::entity(format!("_:rs{n}"))
    }

    pub fn with_label(mut self, label: impl Into<Arc<str>>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn set_label(&mut self, label: Option<Arc<str>>) {
        self.label = label;
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn kind(&self) -> ItemKind {
        self.kind
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Label when present, otherwise the id.
    pub fn text(&self) -> &str {
        self.label.as_deref().unwrap_or(&self.id)
    }

    pub fn is_entity(&self) -> bool {
        self.kind == ItemKind::Entity
    }

    pub fn is_synthetic(&self) -> bool {
        self.kind == ItemKind::Entity && self.id.starts_with("_:")
    }

    pub fn numeric(&self) -> Option<f64> {
        match self.kind {
            ItemKind::LiteralInt | ItemKind::LiteralFloat => self.id.parse().ok(),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self.kind {
            ItemKind::LiteralInt => self.id.parse().ok(),
            _ => None,
        }
    }
}

impl PartialEq for Item {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.id == other.id
    }
}

impl Eq for Item {}

impl Hash for Item {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.kind.hash(state);
        self.id.hash(state);
    }
}

impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        self.kind.cmp(&other.kind).then_with(|| self.id.cmp(&other.id))
    }
}

impl fmt::Debug for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ItemKind::LiteralString => write!(f, "{:?}", &*self.id),
            _ => f.write_str(&self.id),
        }
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
