//! Shared fixtures, brute-force oracles and the check lists that both the
//! per-topic suites and the acceptance report run.
#![allow(dead_code)]

pub mod case_study;
pub mod dsl;
pub mod examples;
pub mod grammar;
pub mod oracle;
pub mod profiles;
pub mod props;

use std::collections::HashSet;

use xplore_core::{ExplorationSet, Item};

/// A named check. `Err` carries what went wrong.
pub type Check = (&'static str, fn() -> Result<(), String>);

pub fn e(id: &str) -> Item {
    Item::entity(id)
}

/// Parses `"a1/p1"`-style paths; all-digit segments become integers.
pub fn path(spec: &str) -> Vec<Item> {
    spec.split('/')
        .map(|s| match s.parse::<i64>() {
            Ok(i) => Item::int(i),
            Err(_) => e(s),
        })
        .collect()
}

pub fn set(paths: &[&str]) -> ExplorationSet {
    ExplorationSet::from_paths(paths.iter().map(|p| path(p)))
}

pub fn path_set(paths: &[&str]) -> HashSet<Vec<Item>> {
    paths.iter().map(|p| path(p)).collect()
}

pub fn show(paths: &HashSet<Vec<Item>>) -> String {
    let mut v: Vec<String> =
        paths.iter().map(|p| p.iter().map(|i| i.id().to_string()).collect::<Vec<_>>().join("/")).collect();
    v.sort();
    format!("{{{}}}", v.join(", "))
}

/// Path-set equality with the root ignored.
pub fn expect_paths(what: &str, got: &ExplorationSet, want: &HashSet<Vec<Item>>) -> Result<(), String> {
    let have = got.path_set();
    if &have == want {
        Ok(())
    } else {
        Err(format!("{what}: got {}, want {}", show(&have), show(want)))
    }
}

pub fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, want {want:?}"))
    }
}

pub fn ids(items: &[Item]) -> Vec<String> {
    items.iter().map(|i| i.id().to_string()).collect()
}

/// Runs every check and panics with all failures at once.
pub fn run_all(checks: &[Check]) {
    let failed: Vec<String> =
        checks.iter().filter_map(|(name, f)| f().err().map(|m| format!("{name}: {m}"))).collect();
    assert!(failed.is_empty(), "{}", failed.join("\n"));
}
