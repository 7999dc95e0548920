//! End-to-end tests of the installed binary: exit codes, output formats,
//! and the JSON/CSV shapes downstream scripts depend on.

use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_twistlab"));
    // keep the suite independent of the developer's cache
    cmd.env_remove("TWISTLAB_CACHE");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn twistlab")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).expect("json stdout")
}

#[test]
fn catalog_lists_builtin_knots() {
    let out = run(&["catalog"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for name in ["unknot", "trefoil2", "trefoil3"] {
        assert!(text.contains(name), "catalog missing {name}");
    }
}

#[test]
fn catalog_json_parses() {
    let out = run(&["catalog", "--json"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert!(v["knots"].as_array().unwrap().len() >= 3);
}

#[test]
fn hfk_text_reports_extremes() {
    let out = run(&["hfk", "--knot", "trefoil2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("Delta ="));
    assert!(text.contains("R = 1  L = -1  B = 0  genus = 1"));
}

#[test]
fn hfk_json_schema_is_pinned() {
    let out = run(&["hfk", "--knot", "trefoil2", "--format", "json"]);
    assert!(out.status.success());
    let v = json(&out);
    let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    keys.sort_unstable();
    assert_eq!(
        keys,
        vec![
            "B", "B_chain", "L", "L_chain", "N", "R", "R_chain", "dims", "genus", "k_levels",
            "knot", "m", "reported_floor", "schema", "state_count", "truncated",
        ]
    );
    assert_eq!(v["schema"], 1);
    assert_eq!(v["knot"], "trefoil2");
    assert_eq!(v["N"], 5);
    assert_eq!(v["truncated"], false);
    assert_eq!(v["R"], 1);
    assert_eq!(v["L"], -1);
    assert_eq!(v["B"], 0);
    assert_eq!(v["genus"], 1);
    let dims = v["dims"].as_array().unwrap();
    assert!(dims.contains(&serde_json::json!({"a": 1, "m_grading": 0, "dim": 1})));
}

#[test]
fn hfk_csv_lists_levels_descending() {
    let out = run(&["hfk", "--knot", "trefoil2", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines, vec!["a,m,dim", "1,0,1", "0,-1,1", "-1,-2,1"]);
}

#[test]
fn hfk_reads_knot_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("knot.json");
    let mut f = std::fs::File::create(&path).unwrap();
    write!(
        f,
        r#"{{"name":"custom","strands":2,"letters":[1,1,1],"region":{{"first_strand":1,"width":2}}}}"#
    )
    .unwrap();
    let out = run(&["hfk", "--file", path.to_str().unwrap(), "--format", "json"]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["knot"], "custom");
    assert_eq!(v["genus"], 1);
}

#[test]
fn unknown_option_is_usage_error() {
    let out = run(&["hfk", "--knot", "trefoil2", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn backwards_twist_range_is_usage_error() {
    let out = run(&["stabilize", "--knot", "unknot", "--m", "5..2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("empty twist range"));
}

#[test]
fn unknown_knot_is_a_failure() {
    let out = run(&["hfk", "--knot", "nosuchknot"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error:"));
}

#[test]
fn stabilize_stable_family_exits_zero() {
    let out = run(&[
        "stabilize", "--knot", "unknot", "--m", "0..6", "--mode", "delta-top", "--no-cache",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("stable from m = 1"));
    assert!(text.contains("verdict: stabilization observed"));
}

#[test]
fn stabilize_range_too_short_to_confirm_exits_three() {
    let out = run(&[
        "stabilize", "--knot", "unknot", "--m", "0..2", "--mode", "delta-top", "--no-cache",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("no stabilization observed"));
}

#[test]
fn stabilize_single_record_is_a_failure() {
    let out = run(&["stabilize", "--knot", "unknot", "--m", "5..5", "--no-cache"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("need at least 3 records"));
}

#[test]
fn stabilize_csv_header_is_pinned() {
    let out = run(&[
        "stabilize", "--knot", "unknot", "--m", "0..4", "--k", "2", "--no-cache", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(
        text.lines().next().unwrap(),
        "m,min_deg,max_deg,R,L,B,genus,top_dims"
    );
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn stabilize_json_reports_slopes_and_records() {
    let out = run(&[
        "stabilize", "--knot", "unknot", "--m", "0..6", "--k", "2", "--no-cache", "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["stable"], true);
    assert_eq!(v["slopes"]["slope_R"], "1");
    assert_eq!(v["slopes"]["delta_bottom_slope"], "-1");
    assert_eq!(v["slopes"]["r"], "1");
    assert_eq!(v["slopes"]["r_is_integer"], true);
    let kinds: Vec<&str> = v["reports"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["kind"].as_str().unwrap())
        .collect();
    assert_eq!(kinds, vec!["hfk-top", "delta-top", "delta-bottom"]);
    // genus of the m-th twist of the unknot family is m
    let rec = &v["records"][3];
    assert_eq!(rec["m"], 3);
    assert_eq!(rec["R"], 3);
    assert_eq!(rec["genus"], 3);
}

#[test]
fn stabilize_missing_tables_is_a_failure() {
    // the third record blows the state cap, so homology detection cannot run
    let out = run(&[
        "stabilize",
        "--knot",
        "trefoil3",
        "--m",
        "0..2",
        "--k",
        "1",
        "--mode",
        "hfk",
        "--max-states",
        "200000",
        "--no-cache",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("too shallow for m = [2]"));
}

#[test]
fn stabilize_cache_roundtrip_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let args = [
        "stabilize", "--knot", "unknot", "--m", "0..5", "--k", "2", "--format", "json",
    ];
    let first = bin()
        .args(args)
        .env("TWISTLAB_CACHE", &cache)
        .output()
        .unwrap();
    assert_eq!(first.status.code(), Some(0), "stderr: {}", stderr(&first));
    assert!(cache.is_dir(), "first run should populate the cache");
    let second = bin()
        .args(args)
        .env("TWISTLAB_CACHE", &cache)
        .output()
        .unwrap();
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(stdout(&first), stdout(&second));
}
