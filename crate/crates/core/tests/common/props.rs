//! Operator properties against the brute-force oracles, run with a fixed
//! seed so the acceptance report is reproducible.

use std::collections::{HashMap, HashSet};
use std::sync::atomic::{AtomicUsize, Ordering};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use xplore_core::ops::*;
use xplore_core::{Dataset, ExplorationSet, Item, Provenance, Relation, RelationPath};

use super::oracle::{self, Paths};
use super::{e, show, Check};

pub const TREE_CASES: u32 = 256;
pub const GRAPH_CASES: u32 = 128;
pub const MAX_NODES: usize = 50;
pub const MAX_DEPTH: usize = 4;
pub const MAX_GRAPH_NODES: usize = 12;

fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn run<S: Strategy>(cases: u32, s: S, f: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    runner(cases).run(&s, f).map_err(|e| e.to_string())
}

fn item(k: u8) -> Item {
    e(&format!("i{k}"))
}

/// Up to 16 paths of 1 to 3 items below the root: depth at most 4 and at
/// most 49 nodes.
pub fn tree() -> impl Strategy<Value = ExplorationSet> {
    prop::collection::vec(prop::collection::vec(0u8..6, 1..=3), 0..=16)
        .prop_map(|ps| ExplorationSet::from_paths(ps.into_iter().map(|p| p.into_iter().map(item).collect::<Vec<_>>())))
}

fn check_shape(t: &ExplorationSet) -> Result<(), TestCaseError> {
    prop_assert!(t.node_count() <= MAX_NODES + 1 && t.depth() <= MAX_DEPTH);
    Ok(())
}

fn same(got: &ExplorationSet, want: &Paths) -> Result<(), TestCaseError> {
    let have = got.path_set();
    prop_assert!(&have == want, "got {}, want {}", show(&have), show(want));
    Ok(())
}

pub fn set_operations() -> Result<(), String> {
    run(TREE_CASES, (tree(), tree()), |(a, b)| {
        check_shape(&a)?;
        check_shape(&b)?;
        let (pa, pb) = (a.path_set(), b.path_set());
        same(&unite(&a, &b), &oracle::unite(&pa, &pb))?;
        same(&intersect(&a, &b), &oracle::intersect(&pa, &pb))?;
        same(&diff(&a, &b), &oracle::diff(&pa, &pb))
    })
}

/// Pairs from the tree items to tree items (0..6) and group items (6..9).
fn relation() -> impl Strategy<Value = Vec<(u8, u8)>> {
    prop::collection::vec((0u8..6, 0u8..9), 0..24)
}

fn target(k: u8) -> Item {
    if k < 6 {
        item(k)
    } else {
        e(&format!("g{}", k - 6))
    }
}

fn dataset(rel: &str, pairs: &[(u8, u8)]) -> Dataset {
    let mut d = Dataset::new();
    d.add_relation(Relation::new(rel, Provenance::Schema));
    for k in 0..6 {
        d.add_item(item(k));
    }
    for k in 6..9 {
        d.add_item(target(k));
    }
    for &(a, b) in pairs {
        d.insert(rel, item(a), target(b));
    }
    d
}

#[derive(Debug, Clone, Copy)]
enum Filter {
    Any,
    Is(u8),
    Not(u8),
    Via(u8),
}

fn filter() -> impl Strategy<Value = Filter> {
    prop_oneof![Just(Filter::Any), (0u8..6).prop_map(Filter::Is), (0u8..6).prop_map(Filter::Not), (0u8..9).prop_map(Filter::Via)]
}

impl Filter {
    fn predicate(self) -> FilterPredicate {
        match self {
            Filter::Any => FilterPredicate::True,
            Filter::Is(k) => FilterPredicate::Equals(Operand::Item(item(k))),
            Filter::Not(k) => FilterPredicate::Not(Box::new(FilterPredicate::Equals(Operand::Item(item(k))))),
            Filter::Via(k) => FilterPredicate::EqualsVia(RelationPath::single(":R"), Operand::Item(target(k))),
        }
    }

    fn holds(self, image: &HashMap<Item, HashSet<Item>>, x: &Item) -> bool {
        match self {
            Filter::Any => true,
            Filter::Is(k) => *x == item(k),
            Filter::Not(k) => *x != item(k),
            Filter::Via(k) => image.get(x).is_some_and(|s| s.contains(&target(k))),
        }
    }
}

pub fn refine_matches_oracle() -> Result<(), String> {
    let s = (tree(), relation(), prop::collection::vec(filter(), 0..=3));
    run(TREE_CASES, s, |(t, pairs, filters)| {
        let d = dataset(":R", &pairs);
        let mut image: HashMap<Item, HashSet<Item>> = HashMap::new();
        for (a, b) in &pairs {
            image.entry(item(*a)).or_default().insert(target(*b));
        }
        let want: Paths = t
            .path_set()
            .into_iter()
            .filter(|p| p.len() >= filters.len() && filters.iter().zip(p).all(|(f, x)| f.holds(&image, x)))
            .collect();
        let pat = PathPattern::levels(filters.iter().map(|f| f.predicate()).collect());
        same(&refine(&d, &t, &pat).map_err(|e| TestCaseError::fail(e.to_string()))?, &want)
    })
}

pub fn group_matches_oracle() -> Result<(), String> {
    let s = (tree(), relation(), prop_oneof![Just(None), (2usize..=4).prop_map(Some)]);
    run(TREE_CASES, s, |(t, pairs, level)| {
        let d = dataset(":G", &pairs);
        let want = oracle::group(&t.path_set(), level.map(|lv| lv - 2), |x| oracle::image(&d, &[":G"], x));
        let opts = GroupOptions { level, keep_ungrouped: false };
        let got = group(&d, &t, &RelationPath::single(":G"), &opts).map_err(|e| TestCaseError::fail(e.to_string()))?;
        same(&got, &want)
    })
}

fn node(k: usize) -> Item {
    e(&format!("n{k}"))
}

type Graph = (usize, Vec<(usize, usize, bool)>, Vec<usize>, Vec<usize>, usize);

/// Up to 12 nodes, edges split over two relations, random sources and
/// targets, and a path bound of 1 to 4.
fn graph() -> impl Strategy<Value = Graph> {
    (2usize..=MAX_GRAPH_NODES).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec((0..n, 0..n, any::<bool>()), 0..=3 * n),
            prop::collection::vec(0..n, 1..=3),
            prop::collection::vec(0..n, 1..=3),
            1usize..=4,
        )
    })
}

pub fn correlate_matches_dfs() -> Result<(), String> {
    let found = AtomicUsize::new(0);
    run(GRAPH_CASES, graph(), |(n, edges, src, dst, max_len)| {
        let mut d = Dataset::new();
        for k in 0..n {
            d.add_item(node(k));
        }
        for &(a, b, which) in &edges {
            d.insert(if which { ":E" } else { ":F" }, node(a), node(b));
        }
        let pairs: Vec<(Item, Item)> = edges.iter().map(|&(a, b, _)| (node(a), node(b))).collect();
        let sources: Vec<Item> = src.iter().map(|&k| node(k)).collect();
        let targets: HashSet<Item> = dst.iter().map(|&k| node(k)).collect();
        let want = oracle::simple_paths(&pairs, &sources, &targets, max_len);
        let a = ExplorationSet::flat(sources);
        let b = ExplorationSet::flat(targets);
        let opts = CorrelateOptions { max_length: max_len, ..CorrelateOptions::default() };
        let got = correlate(&d, &a, &b, &opts).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(got.path_set().iter().all(|p| p.len() - 1 <= max_len));
        if !want.is_empty() {
            found.fetch_add(1, Ordering::Relaxed);
        }
        same(&got, &want)
    })?;
    // guard against a generator that only makes disconnected graphs
    let found = found.into_inner();
    if found * 4 < GRAPH_CASES as usize {
        return Err(format!("only {found} of {GRAPH_CASES} graphs had a connecting path"));
    }
    Ok(())
}

/// Children under each parent path, in order.
fn children_by_parent(t: &ExplorationSet, lv: usize) -> HashMap<Vec<Item>, Vec<Item>> {
    t.level_nodes(lv - 1)
        .into_iter()
        .map(|n| (t.path_to(n)[1..].to_vec(), t.children(n).iter().map(|&c| t.item(c).clone()).collect()))
        .collect()
}

pub fn rank_is_stable_descending_permutation() -> Result<(), String> {
    let s = (tree(), prop::collection::vec(prop::option::of(0i64..4), 6), 2usize..=4);
    run(TREE_CASES, s, |(t, scores, lv)| {
        prop_assume!(!t.is_empty() && lv <= t.depth());
        let mut d = Dataset::new();
        d.add_relation(Relation::new(":score", Provenance::Schema));
        for (k, sc) in scores.iter().enumerate() {
            d.add_item(item(k as u8));
            if let Some(v) = sc {
                d.insert(":score", item(k as u8), Item::int(*v));
            }
        }
        let score = |x: &Item| -> f64 {
            let k: usize = x.id()[1..].parse().unwrap();
            scores[k].map_or(f64::NEG_INFINITY, |v| v as f64)
        };
        let got = rank(&d, &t, lv, &ValueExpr::Image(RelationPath::single(":score")), MissingScore::Last)
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(got.path_set(), t.path_set());
        let before = children_by_parent(&t, lv);
        let after = children_by_parent(&got, lv);
        prop_assert_eq!(before.len(), after.len());
        for (parent, kids) in before {
            let mut want = kids.clone();
            // std's sort_by is stable: ties keep input order
            want.sort_by(|x, y| score(y).total_cmp(&score(x)));
            prop_assert_eq!(after.get(&parent), Some(&want));
        }
        Ok(())
    })
}

pub const ALL: &[Check] = &[
    ("set_operations", set_operations),
    ("refine_matches_oracle", refine_matches_oracle),
    ("group_matches_oracle", group_matches_oracle),
    ("correlate_matches_dfs", correlate_matches_dfs),
    ("rank_is_stable_descending_permutation", rank_is_stable_descending_permutation),
];
