use std::path::Path;
use std::process::{Command, Output};

use maxineq::formats::{read_json, ChainFile, InstanceFile};
use maxineq_core::inequalities::random_instance;
use serde_json::Value;

fn maxineq(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxineq"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

#[test]
fn gen_chain_two_state() {
    let dir = tempfile::tempdir().unwrap();
    let out = maxineq(dir.path(), &["gen-chain", "--model", "two-state", "--p", "0.25", "--q", "0.25"]);
    assert_eq!(code(&out), 0);
    let file: ChainFile = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(file.q, vec![vec![0.75, 0.25], vec![0.25, 0.75]]);
    assert_eq!(file.pi, Some(vec![0.5, 0.5]));
}

#[test]
fn verify_hundred_instances_pass() {
    let dir = tempfile::tempdir().unwrap();
    let out = maxineq(dir.path(), &["verify", "--id", "prop21-first", "--p", "2", "--instances", "100", "--seed", "1", "-o", "r.csv"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let mut reader = csv::Reader::from_path(dir.path().join("r.csv")).unwrap();
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        ["id", "p", "seed", "atoms", "n", "dim", "lhs", "rhs", "ratio", "constant", "pass"]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 100);
    assert!(rows.iter().all(|r| &r[0] == "prop21-first" && &r[10] == "true"));
    let meta: Value = read_json(&dir.path().join("r.csv.meta.json")).unwrap();
    assert_eq!(meta["master_seed"], 1);
    assert_eq!(meta["item_seeds"].as_array().unwrap().len(), 100);
    assert_eq!(meta["tool"], "maxineq");
    assert_eq!(meta["command_line"][1], "verify");
}

#[test]
fn check_conditions_centered_ergodic() {
    let dir = tempfile::tempdir().unwrap();
    let out = maxineq(
        dir.path(),
        &["--seed", "4", "gen-chain", "--model", "random", "--states", "12", "--family", "metropolis", "-o", "chain.json", "--observable-out", "f.json", "--centered"],
    );
    assert_eq!(code(&out), 0);
    let out = maxineq(dir.path(), &["check-conditions", "chain.json", "f.json", "-o", "cond.json"]);
    assert_eq!(code(&out), 0);
    let report: Value = read_json(&dir.path().join("cond.json")).unwrap();
    for key in ["a_bounded", "b_bounded", "c_finite", "d_finite", "e_member"] {
        assert_eq!(report[key], true, "{key}");
    }
}

#[test]
fn check_conditions_uncentered_all_false_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    maxineq(dir.path(), &["gen-chain", "--model", "lazy-ring", "--m", "5", "--laziness", "0.5", "-o", "c.json"]);
    std::fs::write(dir.path().join("f.json"), r#"{"dim":1,"values":[[1],[1],[1],[1],[1]]}"#).unwrap();
    let out = maxineq(dir.path(), &["check-conditions", "c.json", "f.json"]);
    assert_eq!(code(&out), 0);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["c_finite"], false);
    assert_eq!(report["diagnostics"]["d_integral"], "inf");
    assert_eq!(report["all_agree"], true);
}

#[test]
fn instance_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let instance = random_instance(9, 10, 6, 5, 2).unwrap();
    let path = dir.path().join("inst.json");
    maxineq::formats::write_json(&path, &InstanceFile::from_instance(&instance)).unwrap();
    let back = InstanceFile::load(&path).unwrap();
    assert_eq!(back.space.filtration(), instance.space.filtration());
    for (a, b) in back.space.space().probs().iter().zip(instance.space.space().probs()) {
        assert!((a - b).abs() <= 1e-15);
    }
    assert_eq!(back.sequence, instance.sequence);
    let out = maxineq(dir.path(), &["verify", "--instance", "inst.json", "--p", "1.5,2,3"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 16);
}

#[test]
fn malformed_inputs_exit_two_with_field() {
    let dir = tempfile::tempdir().unwrap();
    let bad = r#"{"probs":[0.5,0.5,0.0],"partitions":[[[0],[1],[2]]],"dim":1,"terms":[[[1],[2],[3]]]}"#;
    std::fs::write(dir.path().join("bad.json"), bad).unwrap();
    let out = maxineq(dir.path(), &["verify", "--instance", "bad.json"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("probs[2]"));

    std::fs::write(dir.path().join("c.json"), r#"{"states":["a","b"],"Q":[[0.5,0.6],[0.5,0.5]]}"#).unwrap();
    std::fs::write(dir.path().join("f.json"), r#"{"dim":1,"values":[[1],[-1]]}"#).unwrap();
    let out = maxineq(dir.path(), &["spectrum", "c.json", "f.json"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("Q[0]"));

    std::fs::write(dir.path().join("c.json"), "{not json").unwrap();
    assert_eq!(code(&maxineq(dir.path(), &["spectrum", "c.json", "f.json"])), 2);

    let out = maxineq(dir.path(), &["verify", "--weights", "power:abc", "--instances", "1"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("power:abc"));
}

#[test]
fn violations_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = maxineq(dir.path(), &["verify-markov", "--id", "stein", "--instances", "100", "--seed", "3"]);
    assert_eq!(code(&out), 1);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.ends_with(",false")));
}

#[test]
fn help_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = maxineq(dir.path(), &["--help"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"partitions\""));
    assert_eq!(code(&maxineq(dir.path(), &["verify", "--bogus"])), 2);
}

#[test]
fn spectrum_simulate_report_chain() {
    let dir = tempfile::tempdir().unwrap();
    maxineq(dir.path(), &["gen-chain", "--model", "two-state", "--p", "0.25", "--q", "0.25", "-o", "c.json"]);
    std::fs::write(dir.path().join("f.json"), r#"{"dim":1,"values":[[1],[-1]]}"#).unwrap();
    let out = maxineq(dir.path(), &["spectrum", "c.json", "f.json"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("lambda,mass"));
    let atom: Vec<f64> = lines.next().unwrap().split(',').map(|s| s.parse().unwrap()).collect();
    assert!((atom[0] - 0.5).abs() < 1e-12 && (atom[1] - 1.0).abs() < 1e-12);

    let out = maxineq(
        dir.path(),
        &["simulate", "c.json", "f.json", "--weights", "power:-0.5", "--trials", "40", "--horizon", "64", "-o", "d.csv", "--trajectories", "t.csv"],
    );
    assert_eq!(code(&out), 0);
    let traj = std::fs::read_to_string(dir.path().join("t.csv")).unwrap();
    assert_eq!(traj.lines().count(), 1 + 40 * 64);
    assert!(traj.starts_with("trial,k,T_k\n0,1,"));
    let diag = std::fs::read_to_string(dir.path().join("d.csv")).unwrap();
    assert_eq!(diag.lines().next(), Some("checkpoint,median_osc,q95_osc"));
    assert_eq!(diag.lines().count(), 1 + 6);

    let out = maxineq(dir.path(), &["report", "d.csv", "-o", "d.dat"]);
    assert_eq!(code(&out), 0);
    assert!(std::fs::read_to_string(dir.path().join("d.dat")).unwrap().starts_with("# checkpoint median_osc q95_osc\n1 "));

    let out = maxineq(dir.path(), &["simulate", "c.json", "f.json", "--mc", "--trials", "50", "--horizon", "3"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn tolerance_override_is_logged_and_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let out = maxineq(dir.path(), &["--tol-override", "1e-6", "verify", "--instances", "3", "-o", "r.csv"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("WARNING"));
    let meta: Value = read_json(&dir.path().join("r.csv.meta.json")).unwrap();
    assert_eq!(meta["tol_override"], true);
    assert_eq!(meta["tol"], 1e-6);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.csv", "b.csv"] {
        maxineq(dir.path(), &["verify-markov", "--seed", "11", "--instances", "20", "--id", "thm41,cor42-const", "-o", name]);
    }
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, std::fs::read(dir.path().join("b.csv")).unwrap());
}
