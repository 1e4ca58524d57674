#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Run {
    /// Golden-file form: exit code, then both streams.
    pub fn transcript(&self) -> String {
        format!("exit: {}\n--- stdout\n{}--- stderr\n{}", self.code, self.stdout, self.stderr)
    }

    pub fn json(&self) -> serde_json::Value {
        serde_json::from_str(&self.stdout).expect("stdout is JSON")
    }

    pub fn error(&self) -> serde_json::Value {
        serde_json::from_str(&self.stderr).expect("stderr is JSON")
    }
}

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

/// Runs the built binary from the crate directory, so document paths in
/// the output are stable.
pub fn livsic(args: &[&str]) -> Run {
    livsic_env(args, &[])
}

pub fn livsic_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_livsic"));
    cmd.current_dir(crate_dir()).args(args).env_remove("LIVSIC_MAX_STATES").env_remove("LIVSIC_MAX_PERIOD");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

/// Every documented command on the example corpus: (golden name, args).
pub const CASES: &[(&str, &[&str])] = &[
    ("validate_balanced", &["validate", "tests/data/z1_balanced.json"]),
    ("validate_klein", &["validate", "tests/data/klein_full3.json"]),
    ("validate_reducible", &["validate", "tests/data/reducible.json"]),
    ("validate_bad_psi", &["validate", "tests/data/bad_psi.json"]),
    ("transitivity_c2", &["check-transitivity", "tests/data/c2_rational.json"]),
    ("transitivity_split", &["check-transitivity", "tests/data/c2_split.json"]),
    ("transitivity_s3", &["check-transitivity", "tests/data/s3_golden.json"]),
    ("transitivity_drift", &["check-transitivity", "tests/data/z1_drift.json"]),
    ("transitivity_lattice", &["check-transitivity", "tests/data/z2_proper_lattice.json"]),
    ("transitivity_z2", &["check-transitivity", "tests/data/z2_base.json"]),
    ("orbits_c2", &["orbits", "tests/data/c2_rational.json", "--max-period", "4"]),
    ("orbits_s3_trivial", &["orbits", "tests/data/s3_golden.json", "--max-period", "7", "--trivial-only"]),
    ("orbits_z1_trivial", &["orbits", "tests/data/z1_balanced.json", "--max-period", "6", "--trivial-only"]),
    ("vanishing_balanced", &["verify-vanishing", "tests/data/z1_balanced.json", "--max-period", "8"]),
    ("vanishing_perturbed", &["verify-vanishing", "tests/data/z1_perturbed.json", "--max-period", "4"]),
    ("vanishing_rotation", &["verify-vanishing", "tests/data/so2_rotation.json", "--max-period", "8"]),
    ("vanishing_twisted", &["verify-vanishing", "tests/data/so2_twisted.json", "--max-period", "4"]),
    ("solve_balanced", &["solve", "tests/data/z1_balanced.json"]),
    ("solve_perturbed", &["solve", "tests/data/z1_perturbed.json"]),
    ("solve_c2", &["solve", "tests/data/c2_rational.json"]),
    ("solve_split", &["solve", "tests/data/c2_split.json"]),
    ("solve_z2", &["solve", "tests/data/z2_generated.json"]),
    ("solve_rotation", &["solve", "tests/data/so2_rotation.json"]),
    ("solve_twisted", &["solve", "tests/data/so2_twisted.json"]),
    ("solve_unipotent", &["solve", "tests/data/s3_unipotent.json"]),
    ("solve_klein_so2", &["solve", "tests/data/klein_so2.json"]),
    ("verify_solution_c2", &["verify-solution", "tests/data/c2_rational.json", "--solution", "tests/data/solution_c2.json"]),
    ("verify_solution_c2_bad", &["verify-solution", "tests/data/c2_rational.json", "--solution", "tests/data/solution_c2_bad.json"]),
    ("verify_solution_rotation", &["verify-solution", "tests/data/so2_rotation.json", "--solution", "tests/data/solution_rotation.json"]),
    ("generate_u_file", &["generate", "tests/data/c2_rational.json", "--u", "tests/data/u_c2.json", "--alpha", "0", "--seed", "1"]),
    ("generate_z2_random", &["generate", "tests/data/z2_base.json", "--random", "--alpha", "random", "--seed", "7", "--block-length", "2"]),
    ("generate_balanced_alpha", &["generate", "tests/data/z1_drift.json", "--u", "tests/data/u_c2.json", "--alpha", "1/2", "--seed", "2"]),
    ("generate_torsion", &["generate", "tests/data/c2_rational.json", "--random", "--alpha", "1", "--seed", "1"]),
    ("generate_so2", &["generate", "tests/data/klein_full3.json", "--random", "--kind", "matrix", "--family", "so2", "--alpha", "character:2", "--seed", "5"]),
    ("generate_unipotent", &["generate", "tests/data/s3_golden.json", "--random", "--kind", "matrix", "--family", "unipotent", "--alpha", "random", "--seed", "11"]),
    ("generate_missing_block", &["generate", "tests/data/klein_full3.json", "--u", "tests/data/u_rot.json", "--kind", "matrix", "--alpha", "identity", "--seed", "5"]),
    ("distortion_rotation", &["distortion", "tests/data/so2_rotation.json", "--depth", "6"]),
    ("distortion_diag", &["distortion", "tests/data/diag_sl2.json", "--depth", "10"]),
    ("distortion_diag_ambient", &["distortion", "tests/data/diag_sl2.json", "--depth", "6", "--ambient"]),
    ("distortion_algebra_file", &["distortion", "tests/data/diag_sl2.json", "--depth", "6", "--algebra", "tests/data/sl2_algebra.json"]),
    ("check_distortion_satisfied", &["check-distortion", "tests/data/diag_sl2.json", "--theta", "3"]),
    ("check_distortion_violated", &["check-distortion", "tests/data/diag_sl2.json", "--theta", "2"]),
    ("check_distortion_unipotent", &["check-distortion", "tests/data/s3_unipotent.json", "--theta", "0.5"]),
    ("usage_unknown_command", &["bogus"]),
    ("usage_missing_flag", &["orbits", "tests/data/c2_rational.json"]),
];

pub fn golden_path(name: &str) -> PathBuf {
    crate_dir().join("tests/golden").join(format!("{name}.txt"))
}

pub fn data(name: &str) -> PathBuf {
    crate_dir().join("tests/data").join(name)
}

pub fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}
