//! Random ASTs for the print/parse round trip, the repository scripts, and
//! session save/load.

use std::sync::Arc;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use xplore_core::dsl::*;
use xplore_core::ingest::fixtures::publications;
use xplore_core::ops::Operator;
use xplore_core::session::Session;
use xplore_core::{RelStep, RelationPath};

use super::case_study;
use super::Check;

pub const AST_CASES: u32 = 500;

pub const SCRIPTS: &[(&str, &str)] = &[
    ("review.xpl", include_str!("../../../../scripts/review.xpl")),
    ("review-alternatives.xpl", include_str!("../../../../scripts/review-alternatives.xpl")),
    ("publications.xpl", include_str!("../../../../scripts/publications.xpl")),
    ("grammar-examples.xpl", include_str!("../../../../scripts/grammar-examples.xpl")),
];

fn ident() -> impl Strategy<Value = String> {
    "[a-z_][a-z0-9_]{0,6}".prop_filter("reserved", |s| s != "inverse")
}

fn relpath() -> impl Strategy<Value = RelationPath> {
    prop::collection::vec(("[A-Za-z][A-Za-z0-9_]{0,5}", any::<bool>()), 1..=3).prop_map(|steps| {
        RelationPath::new(steps.into_iter().map(|(id, inverse)| RelStep { id: format!(":{id}"), inverse }).collect())
    })
}

fn term_op() -> impl Strategy<Value = TermOp> {
    prop_oneof![Just(TermOp::Add), Just(TermOp::Sub), Just(TermOp::Mul)]
}

/// Terms the parser can produce: numbers are non-negative (a minus sign
/// parses as negation) and state references only arise from evaluation.
pub fn term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        (0i64..=i64::MAX).prop_map(Term::Int),
        any::<f64>().prop_filter("finite, non-negative", |f| f.is_finite() && f.is_sign_positive()).prop_map(Term::Float),
        any::<String>().prop_map(Term::Str),
        Just(Term::ItemVar),
        ident().prop_map(Term::Ident),
        relpath().prop_map(Term::Rel),
        relpath().prop_map(Term::Image),
    ];
    leaf.prop_recursive(3, 24, 3, |inner| {
        prop_oneof![
            (ident(), prop::collection::vec(inner.clone(), 0..3)).prop_map(|(f, a)| Term::Apply(f, a)),
            inner.clone().prop_map(|t| Term::Neg(Box::new(t))),
            (term_op(), inner.clone(), inner).prop_map(|(op, a, b)| Term::Bin(op, Box::new(a), Box::new(b))),
        ]
    })
}

fn operator() -> impl Strategy<Value = Operator> {
    prop::sample::select(Operator::ALL.to_vec())
}

/// A call whose set arguments come first, as the parser reads them, with
/// keyword arguments spliced in anywhere.
fn call(op: Operator, sets: Vec<Expr>, terms: Vec<Term>, kws: Vec<(usize, String, Term)>, slice: Option<(u64, u64)>) -> Call {
    let mut args: Vec<Arg> = sets.into_iter().map(Arg::Set).chain(terms.into_iter().map(Arg::Term)).collect();
    for (at, k, t) in kws {
        let at = at % (args.len() + 1);
        args.insert(at, Arg::Kw(k, t));
    }
    Call { op, args, slice, loc: Loc::default() }
}

fn call_strategy(inner: BoxedStrategy<Expr>, chained: bool) -> impl Strategy<Value = Call> {
    operator().prop_flat_map(move |op| {
        let n = op.set_inputs() - usize::from(chained);
        (
            Just(op),
            prop::collection::vec(inner.clone(), n..=n),
            prop::collection::vec(term(), 0..3),
            prop::collection::vec((any::<usize>(), ident(), term()), 0..2),
            prop::option::of((0u64..100, 0u64..100)),
        )
            .prop_map(|(op, sets, terms, kws, slice)| call(op, sets, terms, kws, slice))
    })
}

pub fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        ident().prop_map(|n| Expr::source(&n)),
        prop::collection::vec(any::<String>(), 0..4).prop_map(|ids| Expr::Set(ids, Loc::default())),
    ];
    leaf.prop_recursive(4, 32, 3, |inner| {
        let inner = inner.boxed();
        prop_oneof![
            call_strategy(inner.clone(), false).prop_map(Expr::Call),
            (inner.clone(), call_strategy(inner.clone(), true)).prop_map(|(r, c)| Expr::Chain(Box::new(r), c)),
            inner.prop_map(|e| Expr::Bang(Box::new(e))),
        ]
    })
}

pub fn script() -> impl Strategy<Value = Script> {
    prop::collection::vec((prop::option::of(ident()), expr()), 1..4).prop_map(|stmts| Script {
        stmts: stmts.into_iter().map(|(target, expr)| Stmt { target, expr, loc: Loc::default() }).collect(),
    })
}

fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

/// `parse(print(x)) == x`, and printing is stable on the second pass.
pub fn generated_asts_round_trip() -> Result<(), String> {
    runner(AST_CASES)
        .run(&script(), |s| {
            let text = print_script(&s);
            let back = parse_script(&text).map_err(|e| TestCaseError::fail(format!("{e} in {text:?}")))?;
            prop_assert_eq!(&back, &s, "text: {}", text);
            prop_assert_eq!(print_script(&back), text);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn repo_scripts_round_trip() -> Result<(), String> {
    for (name, src) in SCRIPTS {
        let s = parse_script(src).map_err(|e| format!("{name}: {e}"))?;
        if s.stmts.is_empty() {
            return Err(format!("{name} has no statements"));
        }
        let back = parse_script(&print_script(&s)).map_err(|e| format!("{name} reprinted: {e}"))?;
        if back != s {
            return Err(format!("{name} does not round-trip"));
        }
    }
    Ok(())
}

/// Saving and loading a session rebuilds path-set-equal states.
pub fn session_save_load() -> Result<(), String> {
    let mut s = Session::new(Arc::new(publications()));
    s.eval(SCRIPTS[2].1).map_err(|e| format!("publications.xpl: {e}"))?;
    compare_reloaded(&s)?;
    let (_, review) = case_study::reviewed()?;
    compare_reloaded(&review)
}

fn compare_reloaded(s: &Session) -> Result<(), String> {
    let saved = s.save();
    let loaded = Session::load(s.dataset().clone(), &saved).map_err(|e| format!("load: {e}"))?;
    if loaded.len() != s.len() {
        return Err(format!("{} states saved, {} loaded", s.len(), loaded.len()));
    }
    for i in 0..s.len() {
        let (a, b) = (s.extension(i).map_err(|e| e.to_string())?, loaded.extension(i).map_err(|e| e.to_string())?);
        if !a.same_paths(&b) {
            return Err(format!("s{i} differs after load"));
        }
    }
    if loaded.save() != saved {
        return Err("saving the loaded session gives different text".into());
    }
    Ok(())
}

pub const ALL: &[Check] = &[
    ("generated_asts_round_trip", generated_asts_round_trip),
    ("repo_scripts_round_trip", repo_scripts_round_trip),
    ("session_save_load", session_save_load),
];
