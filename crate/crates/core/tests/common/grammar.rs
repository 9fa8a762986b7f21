//! Which faceted-search versions accept the strategy examples, and whether
//! the versions nest.

use xplore_core::grammar::*;

use super::{expect, Check};

pub const BRANCH_EXAMPLE: &str = "branch(s0,
  refine(irs, equals(:VenueOf:Author, a1)),
  refine(irs, equals(:VenueOf:Author, a2)))";

pub const PUC_RIO: &str = "refine(
  pivot(
    pivot(s0, :Author),
    :Affiliation
  ),
  equals(:Abbr, \"PUC-Rio\")
)!";

pub const DISJUNCTION: &str = "intersect(
  union(
    refine(s0, equals(:Venue, ISWC)),
    refine(s0, equals(:Venue, ESWC))
  ),
  union(
    refine(s0, equals(:Author:Affiliation, \"PUC-Rio\")),
    refine(s0, equals(:Author:Affiliation, UFRJ))
  )
)";

pub const CHAIN_DEPTH: usize = 4;

pub fn sk(s: &str) -> Skeleton {
    Skeleton::parse(s).expect("skeleton parses")
}

pub fn v(n: usize) -> Grammar {
    version(n).expect("versions 1 to 4 exist")
}

pub fn accepted_by(expr: &str) -> Vec<usize> {
    let s = sk(expr);
    (1..=4).filter(|&n| derivable(&v(n), &s)).collect()
}

pub fn version_one() -> Result<(), String> {
    expect("refine(refine(s0))", accepted_by("refine(refine(s0))"), vec![1, 2, 3, 4])?;
    expect("pivot(s0) in v1", derivable(&v(1), &sk("pivot(s0)")), false)
}

pub fn branch_example() -> Result<(), String> {
    expect("skeleton", sk(BRANCH_EXAMPLE).to_string(), "branch(s0, refine(irs), refine(irs))".into())?;
    expect("accepted by", accepted_by(BRANCH_EXAMPLE), vec![2, 3, 4])
}

pub fn back_propagation() -> Result<(), String> {
    expect("skeleton", sk(PUC_RIO).to_string(), "refine(pivot(pivot(s0)))!".into())?;
    expect("accepted by", accepted_by(PUC_RIO), vec![3, 4])
}

pub fn disjunction() -> Result<(), String> {
    expect(
        "skeleton",
        sk(DISJUNCTION).to_string(),
        "intersect(unite(refine(s0), refine(s0)), unite(refine(s0), refine(s0)))".into(),
    )?;
    expect("accepted by", accepted_by(DISJUNCTION), vec![4])
}

/// Every sentence of vN up to depth 4 is a sentence of vN+1.
pub fn containment_chain() -> Result<(), String> {
    for n in 1..4 {
        let e = enumerate_with(&v(n), CHAIN_DEPTH, EnumerateOptions::default()).map_err(|e| e.to_string())?;
        if !e.complete {
            return Err(format!("v{n} did not enumerate fully to depth {CHAIN_DEPTH}"));
        }
        let all: Vec<_> = e.sentences().collect();
        let found = Membership::new(&v(n + 1)).contains_all(all.iter().map(|s| &***s));
        if let Some((s, _)) = all.iter().zip(&found).find(|(_, ok)| !**ok) {
            return Err(format!("v{n} ⊄ v{}: {s}", n + 1));
        }
    }
    Ok(())
}

pub const ALL: &[Check] = &[
    ("version_one", version_one),
    ("branch_example", branch_example),
    ("back_propagation", back_propagation),
    ("disjunction", disjunction),
    ("containment_chain", containment_chain),
];
