use std::sync::Arc;

use indexmap::{IndexMap, IndexSet};

use super::item::Item;
use super::relation::{Provenance, RelStep, Relation, RelationPath};
use crate::error::{Error, Result};

/// A dataset `⟨I, R⟩`: items plus named relations over them.
#[derive(Debug, Clone, Default)]
pub struct Dataset {
    items: IndexSet<Item>,
    relations: IndexMap<String, Relation>,
}

impl Dataset {
    pub fn new() -> Self {
        Dataset::default()
    }

    /// Adds an item. An existing item keeps its label unless the new one
    /// carries a label.
    pub fn add_item(&mut self, item: Item) -> Item {
        match self.items.get(&item) {
            Some(existing) if item.label().is_none() => existing.clone(),
            _ => {
                self.items.replace(item.clone());
                item
            }
        }
    }

    pub fn set_label(&mut self, item: &Item, label: impl Into<Arc<str>>) {
        let mut it = self.items.get(item).cloned().unwrap_or_else(|| item.clone());
        it.set_label(Some(label.into()));
        self.items.replace(it);
    }

    /// Adds a pair to a schema relation, creating it on first use.
    pub fn insert(&mut self, relation: &str, from: Item, to: Item) {
        let from = self.add_item(from);
        let to = self.add_item(to);
        self.relations
            .entry(relation.to_string())
            .or_insert_with(|| Relation::new(relation, Provenance::Schema))
            .insert(from, to);
    }

    pub fn add_relation(&mut self, relation: Relation) {
        for (a, b) in relation.pairs() {
            if !self.items.contains(a) {
                self.items.insert(a.clone());
            }
            if !self.items.contains(b) {
                self.items.insert(b.clone());
            }
        }
        self.relations.insert(relation.id().to_string(), relation);
    }

    pub fn items(&self) -> impl Iterator<Item = &Item> + '_ {
        self.items.iter()
    }

    pub fn entities(&self) -> impl Iterator<Item = &Item> + '_ {
        self.items.iter().filter(|i| i.is_entity())
    }

    pub fn item_count(&self) -> usize {
        self.items.len()
    }

    pub fn get(&self, item: &Item) -> Option<&Item> {
        self.items.get(item)
    }

    pub fn contains(&self, item: &Item) -> bool {
        self.items.contains(item)
    }

    pub fn relation_map(&self) -> &IndexMap<String, Relation> {
        &self.relations
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty() && self.relations.is_empty()
    }
}

impl PartialEq for Dataset {
    fn eq(&self, other: &Self) -> bool {
        self.items.len() == other.items.len()
            && self.items.iter().all(|i| other.items.get(i).is_some_and(|o| o.label() == i.label()))
            && self.relations.len() == other.relations.len()
            && self.relations.iter().all(|(k, r)| {
                other.relations.get(k).is_some_and(|o| o.provenance() == r.provenance() && o.same_pairs(r))
            })
    }
}

/// Where operators look up relations and items. A dataset is one; a session
/// layers its computed relations over a dataset.
pub trait RelationSource {
    fn relation(&self, id: &str) -> Option<&Relation>;
    fn entity(&self, id: &str) -> Option<&Item>;
    fn all_relations(&self) -> Vec<&Relation>;
}

impl RelationSource for Dataset {
    fn relation(&self, id: &str) -> Option<&Relation> {
        self.relations.get(id)
    }

    fn entity(&self, id: &str) -> Option<&Item> {
        self.items.get(&Item::entity(id))
    }

    fn all_relations(&self) -> Vec<&Relation> {
        self.relations.values().collect()
    }
}

/// Path resolution shared by every [`RelationSource`].
pub trait RelationSourceExt: RelationSource {
    /// Resolves one step to a relation and a direction. `:XOf` falls back to
    /// the inverse of `:X` when the dataset has no `:XOf`.
    fn resolve_step(&self, step: &RelStep) -> Result<(&Relation, bool)> {
        if let Some(r) = self.relation(&step.id) {
            return Ok((r, step.inverse));
        }
        if let Some(base) = step.id.strip_suffix("Of") {
            if let Some(r) = self.relation(base) {
                return Ok((r, !step.inverse));
            }
        }
        Err(Error::UnknownRelation(step.id.clone()))
    }

    fn validate_path(&self, rp: &RelationPath) -> Result<()> {
        for s in rp.steps() {
            self.resolve_step(s)?;
        }
        Ok(())
    }

    /// Denotation of a relation path: the left fold of `rjoin`.
    fn resolve_path(&self, rp: &RelationPath) -> Result<Relation> {
        let mut acc: Option<Relation> = None;
        for s in rp.steps() {
            let (r, inv) = self.resolve_step(s)?;
            let r = if inv { r.inverse() } else { r.clone() };
            acc = Some(match acc {
                None => r,
                Some(a) => a.rjoin(&r),
            });
        }
        Ok(acc.expect("relation paths are non-empty"))
    }

    /// `rp[item]`, walked one step at a time.
    fn image_of(&self, rp: &RelationPath, item: &Item) -> Result<IndexSet<Item>> {
        self.image_along(rp, std::iter::once(item))
    }

    /// Union of `rp[i]` over `items`.
    fn image_along<'a, I>(&self, rp: &RelationPath, items: I) -> Result<IndexSet<Item>>
    where
        I: IntoIterator<Item = &'a Item>,
    {
        let mut frontier: IndexSet<Item> = items.into_iter().cloned().collect();
        for s in rp.steps() {
            let (r, inv) = self.resolve_step(s)?;
            let mut next = IndexSet::new();
            for it in &frontier {
                for j in r.step(it, inv) {
                    next.insert(j.clone());
                }
            }
            frontier = next;
        }
        Ok(frontier)
    }
}

impl<T: RelationSource + ?Sized> RelationSourceExt for T {}

/// A dataset with extra relations layered on top (session-computed ones).
pub struct Layered<'a> {
    pub base: &'a Dataset,
    pub extra: &'a IndexMap<String, Relation>,
}

impl RelationSource for Layered<'_> {
    fn relation(&self, id: &str) -> Option<&Relation> {
        self.base.relation(id).or_else(|| self.extra.get(id))
    }

    fn entity(&self, id: &str) -> Option<&Item> {
        self.base.entity(id)
    }

    fn all_relations(&self) -> Vec<&Relation> {
        let mut v = self.base.all_relations();
        v.extend(self.extra.values());
        v
    }
}
