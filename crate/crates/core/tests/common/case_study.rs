//! The paper-review strategy on the synthetic citation corpus.

use std::sync::Arc;

use xplore_core::ingest::{build_citation_fixture, CitationFixture};
use xplore_core::session::{Binding, Session};
use xplore_core::ExplorationSet;

use super::{expect, Check};

pub const REVIEW: &str = include_str!("../../../../scripts/review.xpl");
pub const ALTERNATIVES: &str = include_str!("../../../../scripts/review-alternatives.xpl");

pub const SEED: u64 = 1;
pub const SCALE: usize = 200;

pub fn fixture() -> CitationFixture {
    build_citation_fixture(SEED, SCALE).expect("fixture builds")
}

/// Session after the review script and both alternatives.
pub fn reviewed() -> Result<(CitationFixture, Session), String> {
    let f = fixture();
    let mut s = Session::new(Arc::new(f.dataset.clone()));
    s.eval(REVIEW).map_err(|e| format!("review script: {e}"))?;
    s.eval(ALTERNATIVES).map_err(|e| format!("alternatives: {e}"))?;
    Ok((f, s))
}

pub fn state(s: &Session, name: &str) -> Result<Arc<ExplorationSet>, String> {
    match s.lookup(name) {
        Some(Binding::State(id)) => s.extension(id).map_err(|e| e.to_string()),
        other => Err(format!("{name} is bound to {other:?}")),
    }
}

/// The single value of an aggregated, flat state.
pub fn scalar(s: &Session, name: &str) -> Result<f64, String> {
    let x = state(s, name)?;
    let leaves: Vec<f64> = x.leaf_items().iter().filter_map(|i| i.numeric()).collect();
    match leaves[..] {
        [v] => Ok(v),
        _ => Err(format!("{name} is not a single number: {}", x.render())),
    }
}

pub fn mean_citation_year() -> Result<(), String> {
    let (f, s) = reviewed()?;
    expect("s3", scalar(&s, "s3")?, f.truth.citation_year_mean)
}

pub fn self_citations() -> Result<(), String> {
    let (f, s) = reviewed()?;
    expect("s13", scalar(&s, "s13")?, f.truth.self_citations as f64)
}

pub fn same_venue_citations() -> Result<(), String> {
    let (f, s) = reviewed()?;
    expect("s17", scalar(&s, "s17")?, f.truth.same_venue_citations as f64)
}

pub fn missing_citations_exclude_s1() -> Result<(), String> {
    let (_, s) = reviewed()?;
    let (s7, s8, s1) = (state(&s, "s7")?, state(&s, "s8")?, state(&s, "s1")?);
    expect("s7 keeps the top 20", s7.path_count(), 20)?;
    if s8.is_empty() {
        return Err("s8 is empty, the check would be vacuous".into());
    }
    let cited = s1.leaf_items();
    let overlap: Vec<String> = s8.leaf_items().iter().filter(|i| cited.contains(*i)).map(|i| i.id().to_string()).collect();
    expect("s8 ∩ s1", overlap, Vec::new())
}

/// Co-author route counts the group citations; browsing the citation
/// venues returns every citation, since each one sits at its own venue.
pub fn alternatives() -> Result<(), String> {
    let (f, s) = reviewed()?;
    expect("g16", scalar(&s, "g16")?, f.truth.group_citations as f64)?;
    expect("v20", scalar(&s, "v20")?, f.truth.citations as f64)
}

pub const ALL: &[Check] = &[
    ("mean_citation_year", mean_citation_year),
    ("self_citations", self_citations),
    ("same_venue_citations", same_venue_citations),
    ("missing_citations_exclude_s1", missing_citations_exclude_s1),
    ("alternatives", alternatives),
];
