use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use secgroup::{Permutation, PermutationSource, Significance};
use secgroup_cli::{cmd_verify_uniformity, main_with, VerifyArgs, EXIT_FAILED, EXIT_INPUT, EXIT_OK};

const ROLES: &str = "# roles\nn = 9\nM = 2,2,1\nC[2] = {8}\nC[3] = {9}\ndummy = 8,9\nname[8] = Role B\nname[9] = Role C\n";

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["secgroup"];
    full.extend_from_slice(args);
    let code = main_with(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn dummy_roles_are_named() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "roles.txt", ROLES);
    for seed in 0..10 {
        let (code, out, _) = run(&["run", "--constraint", f.to_str().unwrap(), "--seed", &seed.to_string()]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out.lines().count(), 7);
        assert_eq!(out.matches("role Role B").count(), 1, "{out}");
        assert_eq!(out.matches("role Role C").count(), 2, "{out}");
        assert!(!out.contains("Player 8") && !out.contains("Player 9"));
    }
}

#[test]
fn two_players_pair_up() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "pair.txt", "n = 2\nM = 0,1\n");
    let (code, out, _) = run(&["run", "--constraint", f.to_str().unwrap(), "--seed", "9"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "Player 1: group {1,2}\nPlayer 2: group {1,2}\n");
}

#[test]
fn single_player_and_transcript_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "c.txt", "n = 4\nM = 0,2\n");
    let t = dir.path().join("t.txt");
    let (code, out, _) = run(&[
        "run", "--constraint", f.to_str().unwrap(), "--seed", "1", "--player", "2",
        "--transcript", t.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 1);
    assert!(out.starts_with("Player 2: group {"));
    let transcript = fs::read_to_string(&t).unwrap();
    assert!(transcript.starts_with("CREATE rows=1,2 fronts=1,2,3,4\n"));
    assert!(!transcript.contains("SECRET"));
    let parsed: secgroup::Transcript = transcript.parse().unwrap();
    assert_eq!(parsed.opened().len(), 1);
}

#[test]
fn unsafe_secrets_are_opt_in() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "c.txt", "n = 4\nM = 0,2\n");
    let (_, out, _) = run(&["run", "--constraint", f.to_str().unwrap(), "--seed", "1", "--unsafe-secrets"]);
    assert!(out.contains("SECRET sigma="));
    assert!(out.contains("SECRET grouping "));
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.txt", "n = 4\nM = 1,1\n");
    let (code, _, err) = run(&["run", "--constraint", bad.to_str().unwrap(), "--seed", "1"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("line 2"), "{err}");

    let missing = dir.path().join("nope.txt");
    let (code, _, _) = run(&["card-count", "--constraint", missing.to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);

    let good = write(dir.path(), "c.txt", "n = 4\nM = 0,2\n");
    let g = good.to_str().unwrap();
    assert_eq!(run(&["run", "--constraint", g]).0, EXIT_INPUT, "seed is required");
    assert_eq!(run(&["verify-uniformity", "--constraint", g, "--trials", "0"]).0, EXIT_INPUT);
    assert_eq!(
        run(&["verify-uniformity", "--constraint", g, "--trials", "9", "--significance", "0.2"]).0,
        EXIT_INPUT
    );
    // too few trials for the expected-count floor
    assert_eq!(run(&["verify-uniformity", "--constraint", g, "--trials", "9"]).0, EXIT_INPUT);
    assert_eq!(run(&["run", "--constraint", g, "--seed", "1", "--player", "5"]).0, EXIT_INPUT);
    let big = write(dir.path(), "big.txt", "n = 12\nM = 0,6\n");
    assert_eq!(run(&["enumerate", "--constraint", big.to_str().unwrap()]).0, EXIT_INPUT);
}

#[test]
fn verify_uniformity_passes_on_honest_runs() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "c.txt", "n = 4\nM = 0,2\n");
    let report = dir.path().join("r.txt");
    let (code, out, _) = run(&[
        "verify-uniformity", "--constraint", f.to_str().unwrap(), "--trials", "6000", "--seed", "3",
        "--report", report.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("result = pass"));
    assert_eq!(fs::read_to_string(report).unwrap(), out);
}

/// Always deals the identity, so every run produces the same grouping.
struct Stuck;

impl PermutationSource for Stuck {
    fn draw(&mut self, degree: usize) -> secgroup::Result<Permutation> {
        Ok(Permutation::identity(degree))
    }
}

#[test]
fn biased_source_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "c.txt", "n = 4\nM = 0,2\n");
    let args = VerifyArgs {
        constraint: f,
        seed: 0,
        trials: 600,
        significance: Significance::P001,
        report: None,
    };
    let mut out = Vec::new();
    let code = cmd_verify_uniformity(&args, &mut out, |_| Stuck).unwrap();
    assert_eq!(code, EXIT_FAILED);
    assert!(String::from_utf8(out).unwrap().contains("result = fail"));
}

#[test]
fn verify_independence_and_enumerate() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "c.txt", "n = 6\nM = 0,3\n");
    let (code, out, err) = run(&[
        "verify-independence", "--constraint", f.to_str().unwrap(), "--trials", "3000", "--seed", "2",
        "--player", "1",
    ]);
    assert_eq!(code, EXIT_OK, "{out}{err}");
    assert_eq!(out.matches("result = pass").count(), 2);

    let (code, out, _) = run(&["enumerate", "--constraint", f.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("valid_groupings = 15\nfibers_equal = true"));

    let (code, out, _) = run(&["card-count", "--constraint", f.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("cards = 12\nbound = 36\n"));
}

#[test]
fn binary_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "roles.txt", ROLES);
    let f = f.to_str().unwrap();
    let small = write(dir.path(), "small.txt", "n = 5\nM = 3,1\n");
    let small = small.to_str().unwrap();
    let exe = env!("CARGO_BIN_EXE_secgroup");
    let invoke = |tag: &str| {
        let t = dir.path().join(format!("t{tag}.txt"));
        let r = dir.path().join(format!("r{tag}.txt"));
        let run = Command::new(exe)
            .args(["run", "--constraint", f, "--seed", "77", "--transcript", t.to_str().unwrap()])
            .output()
            .unwrap();
        let verify = Command::new(exe)
            .args(["verify-uniformity", "--constraint", small, "--seed", "77", "--trials", "2000"])
            .args(["--report", r.to_str().unwrap()])
            .output()
            .unwrap();
        assert!(run.status.success() && verify.status.success());
        (run.stdout, fs::read(t).unwrap(), verify.stdout, fs::read(r).unwrap())
    };
    assert_eq!(invoke("a"), invoke("b"));
}
