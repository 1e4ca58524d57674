mod common;

use common::*;
use livsic_cli::document::{SolutionDocument, SystemDocument};
use livsic_core::Limits;

#[test]
fn golden_transcripts_are_stable() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut mismatched = Vec::new();
    for (name, args) in CASES {
        let first = livsic(args).transcript();
        for _ in 0..2 {
            assert_eq!(livsic(args).transcript(), first, "{name}: output differs between runs");
        }
        let path = golden_path(name);
        if update {
            std::fs::write(&path, &first).unwrap();
        } else if !path.exists() || read(&path) != first {
            mismatched.push(*name);
        }
    }
    assert!(mismatched.is_empty(), "golden mismatch (rerun with UPDATE_GOLDEN=1 to refresh): {mismatched:?}");
}

#[test]
fn solve_balanced_document() {
    let run = livsic(&["solve", "tests/data/z1_balanced.json"]);
    assert_eq!(run.code, 0);
    let v = run.json();
    assert_eq!(v["alpha"]["e1"], "1/2");
    assert_eq!(v["u"]["1"], "0");
    assert_eq!(v["u"]["2"], "1");
    assert_eq!(v["certification"]["certified"], true);
}

#[test]
fn perturbed_document_has_violation() {
    let run = livsic(&["verify-vanishing", "tests/data/z1_perturbed.json", "--max-period", "4"]);
    assert_eq!(run.code, 1);
    let w = &run.json()["witness"];
    assert_eq!(w["orbit"], "1122");
    assert_eq!(w["sum"], "1/2");
}

#[test]
fn reducible_matrix_is_invalid_input() {
    let run = livsic(&["validate", "tests/data/reducible.json"]);
    assert_eq!(run.code, 2);
    assert!(run.stdout.is_empty());
    let e = run.error();
    assert_eq!(e["error"], "NotIrreducible");
    assert_eq!(e["fields"]["from"], 1);
    assert_eq!(e["fields"]["to"], 2);
}

#[test]
fn solution_documents_round_trip() {
    let limits = Limits::default();
    for (system, solution) in
        [("c2_rational.json", "solution_c2.json"), ("c2_rational.json", "solution_c2_bad.json"), ("so2_rotation.json", "solution_rotation.json")]
    {
        let doc = SystemDocument::parse(&read(&data(system)), &limits).unwrap();
        let text = read(&data(solution));
        let parsed = SolutionDocument::parse(&text, &doc.system).unwrap();
        let again = livsic_cli::document::render(&parsed.to_value(doc.system.group()));
        assert_eq!(again, text, "{solution}");
        assert_eq!(SolutionDocument::parse(&again, &doc.system).unwrap(), parsed);
    }
}

#[test]
fn out_file_matches_stdout() {
    let path = std::env::temp_dir().join(format!("livsic-out-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let run = livsic(&["solve", "tests/data/z2_generated.json", "--out", p]);
    assert_eq!(run.code, 0);
    assert_eq!(read(&path), run.stdout);
    let check = livsic(&["verify-solution", "tests/data/z2_generated.json", "--solution", p]);
    assert_eq!(check.code, 0, "{}", check.stdout);
    std::fs::remove_file(&path).ok();
}

#[test]
fn parse_errors_carry_pointers() {
    let limits = Limits::default();
    let cases = [
        (r#"{"sft": {"k": 2, "transition": [[1, 1], [1, 2]]}, "group": {"type": "cyclic", "order": 2}, "psi": ["e", "g"]}"#, "/sft/transition/1/1"),
        (r#"{"sft": {"k": 2, "transition": [[1, 1], [1, 1]]}, "group": {"type": "cyclic"}, "psi": ["e", "g"]}"#, "/group"),
        (r#"{"sft": {"k": 2, "transition": [[1, 1], [1, 1]]}, "group": {"type": "cyclic", "order": 2}, "psi": ["e"]}"#, "/psi"),
        (
            r#"{"sft": {"k": 2, "transition": [[1, 1], [1, 1]]}, "group": {"type": "cyclic", "order": 2}, "psi": ["e", "g"],
                "cocycle": {"kind": "rational", "range": 0, "values": {"1": "1/0", "2": "0"}}}"#,
            "/cocycle/values/1",
        ),
        (
            r#"{"sft": {"k": 2, "transition": [[1, 1], [1, 1]]}, "group": {"type": "table", "names": ["e", "a"], "table": [["e", "a"], ["a", "x"]]}, "psi": ["e", "a"]}"#,
            "/group/table/1/1",
        ),
        ("{", ""),
    ];
    for (text, pointer) in cases {
        let e = SystemDocument::parse(text, &limits).unwrap_err();
        assert_eq!(e.pointer.as_deref(), Some(pointer), "{text}: {e:?}");
    }
}

#[test]
fn help_and_version_exit_zero() {
    for flag in ["--help", "--version"] {
        let run = livsic(&[flag]);
        assert_eq!(run.code, 0);
        assert!(!run.stdout.is_empty());
    }
}

#[test]
fn cap_overrides_come_from_the_environment() {
    let args = ["orbits", "tests/data/c2_rational.json", "--max-period", "6"];
    assert_eq!(livsic(&args).code, 0);
    let capped = livsic_env(&args, &[("LIVSIC_MAX_PERIOD", "5")]);
    assert_eq!(capped.code, 2);
    assert_eq!(capped.error()["error"], "RangeTooLarge");
    let bad = livsic_env(&args, &[("LIVSIC_MAX_STATES", "many")]);
    assert_eq!(bad.code, 2);
    assert_eq!(bad.error()["error"], "UsageError");
}

#[test]
fn in_process_run_matches_binary() {
    for (_, args) in CASES.iter().take(6) {
        let mut argv = vec!["livsic".to_string()];
        argv.extend(args.iter().map(|s| s.to_string()));
        std::env::set_current_dir(crate_dir()).unwrap();
        let out = livsic_cli::run(&argv, |_| None);
        let bin = livsic(args);
        assert_eq!((out.code, out.stdout, out.stderr), (bin.code, bin.stdout, bin.stderr));
    }
}
