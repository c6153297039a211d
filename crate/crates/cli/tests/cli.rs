//! End-to-end runs of the command surface through `run` with in-memory IO.

use std::io::Cursor;

use nimlab::sg::{load_cache_file, save_cache_file, sg_table_n2};
use serde_json::Value;

struct Outcome {
    code: i32,
    out: String,
    err: String,
}

fn run_with(args: &[&str], stdin: &str) -> Outcome {
    let mut input = Cursor::new(stdin.as_bytes().to_vec());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("nimlab").chain(args.iter().copied());
    let code = nimlab_cli::run(argv, &mut input, &mut out, &mut err);
    Outcome { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn run(args: &[&str]) -> Outcome {
    run_with(args, "")
}

fn json(o: &Outcome) -> Value {
    serde_json::from_str(&o.out).unwrap_or_else(|e| panic!("{e}: {}", o.out))
}

#[test]
fn sg_across_games() {
    let cases: &[(&[&str], &str)] = &[
        (&["sg", "--pos", "0,1,1"], "0"),
        (&["sg", "--pos", "1,5,6"], "11"),
        (&["sg", "--pos", "0,3,4,5"], "12"),
        (&["sg", "--game", "nim", "--pos", "1,2,3"], "0"),
        (&["sg", "--game", "nim", "--pos", "5,9"], "12"),
        (&["sg", "--game", "moore", "--k", "2", "--pos", "1,1,1"], "0"),
        (&["sg", "--game", "conim", "--pos", "1,2"], "3"),
    ];
    for (args, want) in cases {
        let o = run(args);
        assert_eq!(o.code, 0, "{args:?}: {}", o.err);
        assert_eq!(o.out.trim(), *want, "{args:?}");
    }
}

#[test]
fn sg_bounded_and_json() {
    let o = run(&["sg", "--pos", "3,1000000,1000005", "--max", "32"]);
    assert_eq!(o.code, 0, "{}", o.err);
    let small = run(&["sg", "--pos", "3,0,5"]);
    assert_eq!(o.out, small.out);

    let o = run(&["sg", "--pos", "1,5,6", "--max", "4"]);
    assert_eq!(o.out.trim(), "> 4");

    let o = run(&["sg", "--pos", "1,5,6", "--max", "4", "--format", "json"]);
    let v = json(&o);
    let lb = v["answer"]["at_least"].as_u64().unwrap();
    assert!(lb > 4 && lb <= 11, "{lb}");
    let o = run(&["sg", "--pos", "1,5,6", "--format", "json"]);
    assert_eq!(json(&o)["answer"]["exact"], 11);
}

#[test]
fn moves_and_p_positions() {
    let o = run(&["move", "--game", "exco", "--pos", "1,2,3"]);
    assert_eq!(o.code, 0);
    assert!(o.out.contains("-> 0,2,2"), "{}", o.out);

    let o = run(&["move", "--game", "exco", "--pos", "0,4,4"]);
    assert_eq!(o.code, 1);
    assert!(o.out.contains("P-position"));

    let o = run(&["move", "--game", "nim", "--pos", "3,4"]);
    assert_eq!(o.code, 0);
    assert!(o.out.contains("3,4 -> 3,3"), "{}", o.out);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["sg"][..],
        &["sg", "--pos", "1,x"],
        &["sg", "--game", "moore", "--pos", "1,2"],
        &["sg", "--game", "chess", "--pos", "1,2"],
        &["sg", "--n", "3", "--pos", "0,1,2"],
        &["sg", "--pos", "1,2", "--config", "colour=red"],
        &["frobnicate"],
    ] {
        let o = run(args);
        assert_eq!(o.code, 2, "{args:?}: {}{}", o.out, o.err);
        assert!(!o.err.is_empty());
    }
}

#[test]
fn limit_exits_three() {
    let o = run(&["sg", "--pos", "0,400,400", "--limit", "1000"]);
    assert_eq!(o.code, 3, "{}", o.err);
    let o = run(&["sg", "--game", "conim", "--pos", "9,9,9,9", "--limit", "10"]);
    assert_eq!(o.code, 3, "{}", o.err);
}

#[test]
fn config_supplies_defaults() {
    let o = run(&["--config", "game=nim", "sg", "--pos", "5,9"]);
    assert_eq!(o.out.trim(), "12");
    let o = run(&["sg", "--config", "game=nim", "--game", "exco", "--pos", "0,1,1"]);
    assert_eq!(o.out.trim(), "0");
    let o = run(&["sg", "--config", "format=json", "--pos", "0,1,1"]);
    assert_eq!(json(&o)["answer"]["exact"], 0);
}

#[test]
fn verify_checks_pass() {
    for args in [
        &["verify", "theorem1", "--max", "4"][..],
        &["verify", "ppos", "--max", "6"],
        &["verify", "moore", "--max", "4"],
        &["verify", "axioms"],
        &["verify", "axioms", "--game", "nim", "--n", "3"],
        &["verify", "appendix", "--max", "3"],
        &["verify", "shift"],
        &["verify", "prop4", "--box", "2,16,64"],
    ] {
        let o = run(args);
        assert_eq!(o.code, 0, "{args:?}: {}{}", o.out, o.err);
        assert!(o.out.contains(": pass"), "{args:?}: {}", o.out);
    }
    let o = run(&["verify", "theorem1", "--max", "3", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["checked"], 256);
}

#[test]
fn conjecture_reports() {
    let o = run(&["conjecture", "c5", "--x1", "6", "--x2-max", "256"]);
    assert_eq!(o.code, 0, "{}", o.err);
    let v = json(&o);
    assert_eq!(v["status"], "supported");
    let th = &v["thresholds"][0];
    assert_eq!(th["pattern"], serde_json::json!([0, 0, 0, 4, 0, 2, 0, 2]));

    let o = run(&["conjecture", "c4", "--x0", "1", "--x1", "5", "--x2-max", "64"]);
    assert_eq!(o.code, 0, "{}", o.err);
    assert_eq!(json(&o)["thresholds"][0]["threshold"], 14);

    let o = run(&["conjecture", "c1", "--x0", "0..3", "--x1-pow2", "1..4", "--x2-max", "64"]);
    assert_eq!(o.code, 0, "{}", o.err);
    let v = json(&o);
    assert_eq!(v["status"], "supported");
    assert!(v["checked"].as_u64().unwrap() > 0);

    let o = run(&["conjecture", "p4", "--x0", "0..2", "--x1", "0..10", "--x2-max", "40", "--format", "human"]);
    assert_eq!(o.code, 0);
    assert!(o.out.contains("supported"));
}

#[test]
fn table_rows() {
    let o = run(&["table", "--x0", "1", "--x1", "5", "--x2", "5..7"]);
    assert_eq!(o.code, 0, "{}", o.err);
    let lines: Vec<&str> = o.out.lines().collect();
    assert_eq!(lines[0], "x2,g,u,delta");
    assert_eq!(lines.len(), 4);
    assert!(lines.contains(&"6,11,12,1"));

    let o = run(&["table", "--x0", "0", "--x1", "1", "--x2", "2..3"]);
    assert_eq!(o.out, "x2,g,u,delta\n2,3,3,0\n3,2,4,2\n");

    let o = run(&["table", "--x0", "0", "--x1", "1", "--x2", "5..3"]);
    assert_eq!(o.out, "x2,g,u,delta\n");
}

#[test]
fn engine_wins_from_an_n_position() {
    let o = run_with(&["play", "--game", "exco", "--pos", "1,2,3"], "0,1,2\n0,0,1\n");
    assert_eq!(o.code, 0, "{}", o.out);
    assert!(o.out.contains("engine: 1,2,3 -> 0,2,2"), "{}", o.out);
    assert!(o.out.contains("engine won"), "{}", o.out);
}

#[test]
fn illegal_and_malformed_moves_reprompt() {
    let script = "0,3,3\nhello\n0,1,2\n";
    let o = run_with(&["play", "--game", "exco", "--pos", "0,2,2", "--human-first"], script);
    assert!(o.out.contains("illegal move: pile x1 increased"), "{}", o.out);
    assert!(o.out.contains("could not read"), "{}", o.out);
    // 0,1,2 is legal; the engine answers and the game continues until input ends.
    assert!(o.out.contains("engine: 0,1,2 -> "), "{}", o.out);
    assert_eq!(o.code, 2);
}

#[test]
fn human_can_win() {
    let o = run_with(&["play", "--game", "nim", "--pos", "2,1", "--human-first"], "1,1\n0,0\n");
    assert_eq!(o.code, 0, "{}", o.out);
    assert!(o.out.contains("you won"), "{}", o.out);
}

#[test]
fn seeded_fallback_is_reproducible() {
    // From a P-position the engine has no winning move and falls back.
    let first_move = |seed: &str| {
        let o = run(&["play", "--pos", "0,3,3", "--seed", seed]);
        o.out.lines().find(|l| l.starts_with("engine:")).unwrap().to_string()
    };
    for seed in ["1", "7", "42"] {
        let line = first_move(seed);
        assert_eq!(line, first_move(seed));
        assert!(line == "engine: 0,3,3 -> 0,2,3" || line == "engine: 0,3,3 -> 0,3,2", "{line}");
    }
    let o = run(&["play", "--pos", "0,3,3"]);
    assert!(o.out.contains("engine: 0,3,3 -> 0,2,3"), "{}", o.out);
}

#[test]
fn cache_build_check_and_reuse() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("n2.cache");
    let p = path.to_str().unwrap();

    let o = run(&["cache", "build", "--box", "2,10,30", "--out", p]);
    assert_eq!(o.code, 0, "{}", o.err);
    let o = run(&["cache", "check", p]);
    assert_eq!(o.code, 0, "{}", o.err);
    assert!(o.out.starts_with("ok:"), "{}", o.out);

    // A query inside the box reads the file; one outside it refreshes it.
    let o = run(&["sg", "--pos", "1,5,6", "--cache", p]);
    assert_eq!(o.out.trim(), "11");
    let o = run(&["sg", "--pos", "3,12,40", "--cache", p]);
    assert_eq!(o.code, 0, "{}", o.err);
    let t = load_cache_file(&path).unwrap();
    assert!(t.covers(&[3, 12, 40]));

    let o = run(&["cache", "build", "--game", "moore", "--k", "2", "--box", "0,3,3,3", "--out", p]);
    assert_eq!(o.code, 0, "{}", o.err);
    assert_eq!(run(&["cache", "check", p]).code, 0);
}

#[test]
fn cache_check_flags_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cache");
    save_cache_file(&sg_table_n2(1, 4, 4).unwrap(), &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    // Swap the last stored value for something the recurrence cannot produce.
    let cut = text.trim_end().rfind(|c: char| !c.is_ascii_digit()).unwrap() + 1;
    let tampered = format!("{}999\n", &text[..cut]);
    std::fs::write(&path, tampered).unwrap();
    let o = run(&["cache", "check", path.to_str().unwrap()]);
    assert_ne!(o.code, 0, "{}{}", o.out, o.err);

    let o = run(&["cache", "check", dir.path().join("missing").to_str().unwrap()]);
    assert_eq!(o.code, 2);
}
