//! Loading datasets from triple files, schema summaries and fixtures.

mod citation;
pub mod fixtures;
mod summary;
mod triples;

pub use citation::{build_citation_fixture, CitationFixture, GroundTruth, MAX_SCALE, MIN_SCALE, PAPER};
pub use summary::{schema_summary, RelationSummary, SchemaSummary};
pub use triples::{
    build_dataset, fingerprint, format_term, load_triples, parse_term, parse_triples, records, serialize,
    TripleRecord, LABEL,
};
