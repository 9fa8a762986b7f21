use std::path::Path;

use anyhow::{bail, Context, Result};
use xplore_core::grammar::{grammar_preset, profile_preset, Grammar, TacticalProfile};
use xplore_core::ingest::{build_citation_fixture, fixtures, load_triples};
use xplore_core::Dataset;

/// Seed and scale used when `citation` is given without them.
pub const CITATION_DEFAULT: (u64, usize) = (1, 200);

/// Resolves a dataset argument: `publications`, `citation`,
/// `citation:SEED:SCALE`, or a path to a triples file. Returns the id the
/// dataset is served under and the dataset itself.
pub fn open_dataset(spec: &str) -> Result<(String, Dataset)> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {spec}"))?;
        let d = load_triples(&text).with_context(|| format!("loading {spec}"))?;
        let id = path.file_stem().and_then(|s| s.to_str()).unwrap_or(spec).to_string();
        return Ok((id, d));
    }
    let mut parts = spec.split(':');
    match parts.next() {
        Some("publications") if parts.next().is_none() => Ok(("publications".into(), fixtures::publications())),
        Some("citation") => {
            let (mut seed, mut scale) = CITATION_DEFAULT;
            if let Some(s) = parts.next() {
                seed = s.parse().with_context(|| format!("bad seed in {spec}"))?;
                scale = parts.next().context("expected citation:SEED:SCALE")?.parse().context("bad scale")?;
            }
            if parts.next().is_some() {
                bail!("expected citation:SEED:SCALE, got {spec}");
            }
            Ok(("citation".into(), build_citation_fixture(seed, scale)?.dataset))
        }
        _ => bail!("{spec}: no such file, and not one of publications, citation, citation:SEED:SCALE"),
    }
}

/// A preset name (`v1`..`v4` or a tool row) or a grammar file.
pub fn open_grammar(spec: &str) -> Result<Grammar> {
    if let Some(g) = grammar_preset(spec) {
        return Ok(g);
    }
    let path = Path::new(spec);
    if !path.is_file() {
        bail!("{spec}: not a preset grammar and not a file");
    }
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or(spec);
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {spec}"))?;
    Ok(Grammar::parse(name, &text)?)
}

/// A preset tool name or a profile file.
pub fn open_profile(spec: &str) -> Result<TacticalProfile> {
    if let Some(p) = profile_preset(spec) {
        return Ok(p);
    }
    let text = std::fs::read_to_string(spec).with_context(|| format!("{spec}: not a preset profile and not readable"))?;
    Ok(TacticalProfile::parse(&text)?)
}
