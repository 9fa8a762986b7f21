//! Exploration operators over nested relations.
//!
//! An [`ExplorationSet`] is a rooted tree of items. Operators in [`ops`]
//! map sets to fresh sets; a [`session::Session`] records each application
//! as a state in a dependency graph; [`dsl`] gives the textual form and
//! [`grammar`] compares what different tools can express.

pub mod dsl;
pub mod error;
pub mod grammar;
pub mod ingest;
pub mod model;
pub mod ops;
pub mod session;

pub use error::{Error, Result, Span};
pub use model::{
    Dataset, ExplorationSet, Item, ItemKind, Path, Provenance, RelStep, Relation, RelationPath,
    RelationSource, RelationSourceExt,
};
