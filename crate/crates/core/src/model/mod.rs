//! Items, relations, exploration sets and the path calculus.

mod dataset;
mod item;
mod relation;
mod set;

pub use dataset::{Dataset, Layered, RelationSource, RelationSourceExt};
pub use item::{Item, ItemKind};
pub use relation::{Provenance, RelStep, Relation, RelationPath};
pub(crate) use relation::is_ident_byte;
pub use set::{root_replace, ExplorationSet, NodeId, Path, SetBuilder};
