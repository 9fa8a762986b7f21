//! The gfacet and SeCo tactical profiles against a checked-in report.

use xplore_core::grammar::{compare_profiles, profile_preset, ProfileReport};

use super::Check;

pub const GOLDEN: &str = include_str!("../golden/gfacet_vs_seco.txt");

pub fn report() -> ProfileReport {
    let g = profile_preset("gfacet").expect("gfacet preset");
    let s = profile_preset("SeCo").expect("SeCo preset");
    compare_profiles(&g, &s)
}

pub fn gfacet_vs_seco_golden() -> Result<(), String> {
    let r = report();
    if r.findings.len() != 3 {
        return Err(format!("expected 3 findings, got {}:\n{r}", r.findings.len()));
    }
    let text = r.to_string();
    if text != GOLDEN {
        return Err(format!("report differs from golden file:\n--- got\n{text}--- want\n{GOLDEN}"));
    }
    Ok(())
}

pub const ALL: &[Check] = &[("gfacet_vs_seco_golden", gfacet_vs_seco_golden)];
