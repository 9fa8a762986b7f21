use std::collections::HashSet;
use std::sync::Arc;

use indexmap::IndexSet;

use crate::error::Result;
use crate::model::{Item, RelationPath, RelationSource, RelationSourceExt};

/// The value side of a comparison.
#[derive(Debug, Clone, PartialEq)]
pub enum Operand {
    Item(Item),
    /// Leaf items of another set.
    Items(Arc<IndexSet<Item>>),
    /// Matches a string literal with this value, or an item whose id or
    /// label is this text.
    Text(String),
}

impl Operand {
    fn matches(&self, it: &Item) -> bool {
        match self {
            Operand::Item(x) => x == it,
            Operand::Items(s) => s.contains(it),
            Operand::Text(t) => it.id() == t || it.label() == Some(t.as_str()),
        }
    }

    /// Some member of `image` matches.
    fn any_in(&self, image: &IndexSet<Item>) -> bool {
        match self {
            Operand::Item(x) => image.contains(x),
            Operand::Items(s) => s.iter().any(|x| image.contains(x)),
            Operand::Text(_) => image.iter().any(|i| self.matches(i)),
        }
    }

    /// Every member of the operand is in `image`; an empty set never matches.
    fn all_in(&self, image: &IndexSet<Item>) -> bool {
        match self {
            Operand::Items(s) => !s.is_empty() && s.iter().all(|x| image.contains(x)),
            _ => self.any_in(image),
        }
    }
}

/// A boolean test on one item of a path.
#[derive(Debug, Clone, PartialEq)]
pub enum FilterPredicate {
    True,
    /// The item itself equals the operand (or belongs to it, for sets).
    Equals(Operand),
    /// The item's image along the path equals the value; with a set operand,
    /// the image must contain every member.
    EqualsVia(RelationPath, Operand),
    /// The item's image along the path shares at least one member with the operand.
    EqualsOne(RelationPath, Operand),
    /// Every keyword token occurs in the item's label (or id).
    MatchAll(Vec<String>),
    /// At least one keyword token occurs.
    MatchOne(Vec<String>),
    Not(Box<FilterPredicate>),
    And(Vec<FilterPredicate>),
    Or(Vec<FilterPredicate>),
    /// Some ancestor of the item (below the root) has a matching image.
    Contains(RelationPath, Operand),
    /// Numeric comparison on the item itself, or on its image when a path is given.
    GreaterThan(Option<RelationPath>, f64),
}

pub fn tokens(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric()).filter(|t| !t.is_empty()).map(str::to_lowercase).collect()
}

impl FilterPredicate {
    pub fn validate(&self, env: &dyn RelationSource) -> Result<()> {
        match self {
            FilterPredicate::EqualsVia(rp, _)
            | FilterPredicate::EqualsOne(rp, _)
            | FilterPredicate::Contains(rp, _)
            | FilterPredicate::GreaterThan(Some(rp), _) => env.validate_path(rp),
            FilterPredicate::Not(p) => p.validate(env),
            FilterPredicate::And(ps) | FilterPredicate::Or(ps) => ps.iter().try_for_each(|p| p.validate(env)),
            _ => Ok(()),
        }
    }

    /// Evaluates on `item`; `ancestors` are the path nodes between the root
    /// (excluded) and the item (excluded).
    pub fn eval(&self, env: &dyn RelationSource, item: &Item, ancestors: &[Item]) -> Result<bool> {
        Ok(match self {
            FilterPredicate::True => true,
            FilterPredicate::Equals(op) => op.matches(item),
            FilterPredicate::EqualsVia(rp, op) => op.all_in(&env.image_of(rp, item)?),
            FilterPredicate::EqualsOne(rp, op) => op.any_in(&env.image_of(rp, item)?),
            FilterPredicate::MatchAll(kw) => {
                let have: HashSet<String> = tokens(item.text()).into_iter().collect();
                let want: Vec<String> = kw.iter().flat_map(|k| tokens(k)).collect();
                !want.is_empty() && want.iter().all(|w| have.contains(w))
            }
            FilterPredicate::MatchOne(kw) => {
                let have: HashSet<String> = tokens(item.text()).into_iter().collect();
                kw.iter().flat_map(|k| tokens(k)).any(|w| have.contains(&w))
            }
            FilterPredicate::Not(p) => !p.eval(env, item, ancestors)?,
            FilterPredicate::And(ps) => {
                for p in ps {
                    if !p.eval(env, item, ancestors)? {
                        return Ok(false);
                    }
                }
                true
            }
            FilterPredicate::Or(ps) => {
                for p in ps {
                    if p.eval(env, item, ancestors)? {
                        return Ok(true);
                    }
                }
                false
            }
            FilterPredicate::Contains(rp, op) => {
                for a in ancestors {
                    if op.any_in(&env.image_of(rp, a)?) {
                        return Ok(true);
                    }
                }
                false
            }
            FilterPredicate::GreaterThan(None, t) => item.numeric().is_some_and(|v| v > *t),
            FilterPredicate::GreaterThan(Some(rp), t) => {
                env.image_of(rp, item)?.iter().any(|i| i.numeric().is_some_and(|v| v > *t))
            }
        })
    }
}

/// Level-indexed chain of filters. Index 0 is the root filter, always `True`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathPattern {
    filters: Vec<FilterPredicate>,
}

impl Default for PathPattern {
    fn default() -> Self {
        PathPattern::identity()
    }
}

impl PathPattern {
    /// The pattern `⟨True⟩`, which accepts every path.
    pub fn identity() -> Self {
        PathPattern { filters: vec![FilterPredicate::True] }
    }

    /// Pattern with `levels[0]` applied at level 2, `levels[1]` at level 3, ...
    pub fn levels(levels: Vec<FilterPredicate>) -> Self {
        let mut filters = vec![FilterPredicate::True];
        filters.extend(levels);
        PathPattern { filters }
    }

    pub fn filters(&self) -> &[FilterPredicate] {
        &self.filters
    }

    pub fn len(&self) -> usize {
        self.filters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn validate(&self, env: &dyn RelationSource) -> Result<()> {
        self.filters.iter().try_for_each(|f| f.validate(env))
    }

    /// `path` includes the root. Patterns longer than the path reject it;
    /// levels past the end of the pattern are unconstrained.
    pub fn matches(&self, env: &dyn RelationSource, path: &[Item]) -> Result<bool> {
        if self.filters.len() > path.len() {
            return Ok(false);
        }
        for k in 1..self.filters.len() {
            if !self.filters[k].eval(env, &path[k], &path[1..k])? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
