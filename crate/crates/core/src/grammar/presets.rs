//! Built-in grammars and profiles.
//!
//! The five tool rows ship verbatim. The four faceted-search versions are
//! cumulative: `vN` is the union of the first N faceted rows (Humboldt and
//! Parallax sit outside that line), so each version contains the previous.

use std::sync::OnceLock;

use super::cfg::Grammar;
use super::profile::TacticalProfile;

const ROWS: [(&str, &str); 5] = [
    ("flamenco", include_str!("../../presets/flamenco.grammar")),
    ("parallel-faceted-browser", include_str!("../../presets/parallel-faceted-browser.grammar")),
    ("humboldt-parallax", include_str!("../../presets/humboldt-parallax.grammar")),
    ("facet", include_str!("../../presets/facet.grammar")),
    ("sewelis-semfacet", include_str!("../../presets/sewelis-semfacet.grammar")),
];

const PROFILES: [&str; 2] = [include_str!("../../presets/gfacet.toml"), include_str!("../../presets/seco.toml")];

pub const VERSIONS: [&str; 4] = ["v1", "v2", "v3", "v4"];

/// Rows that make up each version, by index into the row table.
const VERSION_ROWS: [&[usize]; 4] = [&[0], &[0, 1], &[0, 1, 3], &[0, 1, 3, 4]];

fn rows() -> &'static [Grammar] {
    static ROWS_PARSED: OnceLock<Vec<Grammar>> = OnceLock::new();
    ROWS_PARSED.get_or_init(|| {
        ROWS.iter().map(|(n, t)| Grammar::parse(n, t).expect("preset grammars parse")).collect()
    })
}

fn versions() -> &'static [Grammar] {
    static V: OnceLock<Vec<Grammar>> = OnceLock::new();
    V.get_or_init(|| {
        VERSION_ROWS
            .iter()
            .zip(VERSIONS)
            .map(|(idx, name)| match idx {
                [only] => {
                    let g = &rows()[*only];
                    Grammar::parse(name, &g.to_string()).expect("preset grammars parse")
                }
                _ => {
                    let parts: Vec<&Grammar> = idx.iter().map(|&i| &rows()[i]).collect();
                    Grammar::union(name, &parts)
                }
            })
            .collect()
    })
}

/// The five tool rows, in table order.
pub fn grammar_presets() -> Vec<Grammar> {
    rows().to_vec()
}

/// Faceted-search version 1 to 4.
pub fn version(n: usize) -> Option<Grammar> {
    versions().get(n.checked_sub(1)?).cloned()
}

/// A row by name, or `v1`..`v4`.
pub fn grammar_preset(name: &str) -> Option<Grammar> {
    let name = name.to_ascii_lowercase();
    if let Some(i) = VERSIONS.iter().position(|v| *v == name) {
        return version(i + 1);
    }
    rows().iter().find(|g| g.name() == name).cloned()
}

pub fn profile_presets() -> Vec<TacticalProfile> {
    PROFILES.iter().map(|t| TacticalProfile::parse(t).expect("preset profiles parse")).collect()
}

/// Case-insensitive tool name.
pub fn profile_preset(tool: &str) -> Option<TacticalProfile> {
    profile_presets().into_iter().find(|p| p.tool.eq_ignore_ascii_case(tool))
}
