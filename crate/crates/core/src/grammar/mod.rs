//! Strategy grammars over expression skeletons, and tactical profiles.
//!
//! ```text
//! S -> branch(s0, S, S) | R
//! R -> refine(R | s0)
//! ```
//!
//! Inside the second and third slots of `branch`, the leaf `s0` stands for
//! `irs`, the branch input.

mod cfg;
mod derive;
mod enumerate;
mod presets;
mod profile;
mod skeleton;

pub use cfg::{Grammar, Template};
pub use derive::{derivable, derive, Derivation, Inst, Membership};
pub use enumerate::{
    compare_grammars, compare_grammars_with, enumerate, enumerate_with, CompareOptions, Comparison, Difference,
    EnumerateOptions, Enumeration, Verdict, DEFAULT_BUDGET, DEFAULT_MAX_DEPTH,
};
pub use presets::{grammar_preset, grammar_presets, profile_preset, profile_presets, version, VERSIONS};
pub use profile::{
    compare_profiles, Attribute, Cardinality, DataType, Finding, MappingKind, MatchType, OperationProfile,
    ProfileOp, ProfileReport, RelationStructure, RelationType, TacticalProfile,
};
pub use skeleton::Skeleton;
