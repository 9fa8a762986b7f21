mod common;

use common::profiles::*;
use xplore_core::grammar::*;

fn ok(r: Result<(), String>) {
    if let Err(m) = r {
        panic!("{m}");
    }
}

#[test]
fn gfacet_against_seco_matches_the_golden_report() {
    ok(gfacet_vs_seco_golden());
}

#[test]
fn findings_are_the_three_expected_ones() {
    let r = report();
    assert_eq!(r.findings.len(), 3);
    assert_eq!(
        r.findings[0],
        Finding::OperationsOnlyIn {
            tool: "SeCo".into(),
            operations: vec![ProfileOp::Group, ProfileOp::Rank, ProfileOp::Map]
        }
    );
    assert!(matches!(
        &r.findings[1],
        Finding::AttributeDiffers { operation: ProfileOp::Refine, attribute: Attribute::RelationType, .. }
    ));
    assert_eq!(r.findings[2], Finding::MetadataSupport { supported: "SeCo".into(), unsupported: "gfacet".into() });
}

#[test]
fn comparison_is_symmetric_up_to_side() {
    let (g, s) = (profile_preset("gfacet").unwrap(), profile_preset("SeCo").unwrap());
    let back = compare_profiles(&s, &g);
    assert_eq!(back.findings.len(), 3);
    assert!(back.to_string().contains("- refine relation-type: SeCo [schema, computed], gfacet [schema]"));
}

#[test]
fn presets_round_trip_through_toml() {
    for p in profile_presets() {
        assert_eq!(TacticalProfile::parse(&p.to_toml()).unwrap(), p);
        assert!(compare_profiles(&p, &p).is_empty());
    }
}

#[test]
fn json_report_names_each_finding() {
    let v: serde_json::Value = serde_json::from_str(&report().to_json()).unwrap();
    let kinds: Vec<&str> = v["findings"].as_array().unwrap().iter().map(|f| f["kind"].as_str().unwrap()).collect();
    assert_eq!(kinds, ["operations-only-in", "attribute-differs", "metadata-support"]);
}
