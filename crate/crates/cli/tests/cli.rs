use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use xplore_core::ingest::build_citation_fixture;

fn xplore(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xplore")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn script(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scripts").join(name)
}

#[test]
fn grammar_check_accepts_double_refine_in_v1() {
    let o = xplore(&["grammar", "check", "--grammar", "v1", "--expr", "refine(refine(s0))"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("accept"));
    assert!(out.lines().last().unwrap().trim() == "refine(refine(s0))");
}

#[test]
fn grammar_check_rejects_pivot_in_v1() {
    let o = xplore(&["grammar", "check", "--grammar", "v1", "--expr", "pivot(s0)"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("reject"));
}

#[test]
fn eval_of_an_empty_script_prints_nothing() {
    let f = tempfile::NamedTempFile::new().unwrap();
    let o = xplore(&["eval", "-d", "publications", "-f", f.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), "");
}

#[test]
fn review_script_prints_the_self_citation_count() {
    let truth = build_citation_fixture(1, 200).unwrap().truth;
    let path = script("review.xpl");
    let o = xplore(&["eval", "-d", "citation:1:200", "-f", path.to_str().unwrap(), "--show", "s13"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("# s13"));
    assert_eq!(lines.next(), Some(truth.self_citations.to_string().as_str()));
    assert_eq!(lines.next(), Some("# final"));
    assert_eq!(lines.next(), Some(truth.same_venue_citations.to_string().as_str()));
}

#[test]
fn eval_saves_and_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a.xpl");
    let second = dir.path().join("b.xpl");
    let saved = dir.path().join("session.xpl");
    std::fs::write(&first, "a = {p1, p2}.pivot(:Author)\n").unwrap();
    std::fs::write(&second, "b = a.pivot(:Affiliation)\n").unwrap();
    let o = xplore(&["eval", "-d", "publications", "-f", first.to_str().unwrap(), "--save", saved.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "a1\na2\n");
    let o = xplore(&[
        "eval", "-d", "publications", "-f", second.to_str().unwrap(), "--resume", saved.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), "f1\n");
}

#[test]
fn failures_exit_non_zero_with_a_message() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.xpl");
    std::fs::write(&bad, "s1 = d.refine(\n").unwrap();
    for args in [
        vec!["eval", "-d", "publications", "-f", bad.to_str().unwrap()],
        vec!["eval", "-d", "nowhere.tsv", "-f", bad.to_str().unwrap()],
        vec!["load", "nowhere.tsv"],
        vec!["grammar", "check", "--grammar", "v9", "--expr", "s0"],
        vec!["grammar", "check", "--grammar", "v1", "--expr", "refine("],
    ] {
        let o = xplore(&args);
        assert!(!o.status.success(), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"), "{args:?}");
    }
}

#[test]
fn fixture_round_trips_through_load() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("cites.tsv");
    let o = xplore(&["fixture", "citation", "--seed", "1", "--scale", "200", "-o", file.to_str().unwrap()]);
    assert!(o.status.success());
    let from_file = xplore(&["load", file.to_str().unwrap()]);
    let built = xplore(&["load", "citation:1:200"]);
    assert!(from_file.status.success());
    let fp = |o: &Output| stdout(o).lines().next().unwrap().split_whitespace().nth(1).unwrap().to_string();
    assert_eq!(fp(&from_file), fp(&built));
}

#[test]
fn profile_compare_matches_the_report() {
    let o = xplore(&["profile", "compare", "--a", "gfacet", "--b", "seco"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("gfacet vs SeCo: 3 findings\n"));
}

#[test]
fn grammar_compare_prints_a_verdict() {
    let o = xplore(&["grammar", "compare", "--a", "v1", "--b", "v2", "--depth", "3"]);
    assert!(o.status.success());
    assert!(!stdout(&o).is_empty());
}

#[test]
fn repl_evaluates_and_lists_the_trail() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_xplore"))
        .args(["repl", "-d", "publications"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"a = {p1}.pivot(:Author)\nb = a.pivot(:Nope)\n:trail\n:quit\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("1 item"));
    assert!(text.contains("a1"));
    assert!(text.contains("error: 1:7: unknown relation :Nope"));
    assert!(text.contains("[a]"));
}
