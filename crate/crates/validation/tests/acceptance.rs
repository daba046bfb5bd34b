//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! to stderr (uncaptured) before asserting.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use maxineq::batch::{markov_batch, markov_horizon, thread_pool, verify_batch, FiltrationBatch, MarkovBatch};
use maxineq_core::inequalities::{random_instance_within, InequalityId, MarkovCheckId, Outcome};
use maxineq_core::markov::{
    autocovariance, check_conditions, lemma45_residual, make_chain, random_chain, random_disconnected_instance,
    random_markov_instance, random_observable, spectral_measure, symmetric_eigen, verify_markov_inequality, ChainModel, MarkovInstance,
    Observable, RandomFamily, ReversibleChain,
};
use maxineq_core::seed::mix;
use maxineq_core::simulate::{as_convergence_diagnostic, dyadic_checkpoints, exact_path_max_moment, SimConfig};
use maxineq_core::weights::WeightSequence;

const MASTER: u64 = 20261014;

fn verdict(criterion: u32, pass: bool, detail: &str) {
    let line = format!("criterion {criterion:>2}: {} ({detail})\n", if pass { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().write_all(line.as_bytes());
}

/// Uniform draw in `[0, 1)` from a derived seed.
fn unit(seed: u64) -> f64 {
    (seed >> 11) as f64 / (1u64 << 53) as f64
}

fn weights_for(seed: u64, len: usize) -> WeightSequence {
    match seed % 4 {
        0 => WeightSequence::Power(-1.5 * unit(mix(seed, 1))),
        1 => WeightSequence::Constant(4.0 * unit(mix(seed, 1)) - 2.0),
        2 => WeightSequence::alternating(WeightSequence::Power(-unit(mix(seed, 1)))),
        _ => WeightSequence::Explicit((0..len).map(|j| 4.0 * unit(mix(seed, j as u64 + 2)) - 2.0).collect()),
    }
}

#[test]
fn criterion_01_decomposition_identity() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for i in 0..500 {
        let inst = random_instance_within(mix(MASTER, i), 64, 32, 3).unwrap();
        let n = inst.sequence.len();
        worst = worst.max(inst.space.decomposition_residual(&inst.sequence, n).unwrap());
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = worst <= 1e-12 && secs < 10.0;
    verdict(1, pass, &format!("max residual {worst:e} on 500 instances, {secs:.2} s"));
    assert!(pass);
}

#[test]
fn criterion_02_orthogonality_identity() {
    let mut worst: f64 = 0.0;
    for i in 0..500 {
        let inst = random_instance_within(mix(MASTER, i), 64, 32, 3).unwrap();
        let n = inst.sequence.len();
        let (lhs, rhs) = inst.space.orthogonality_gap(&inst.sequence, n).unwrap();
        worst = worst.max((lhs - rhs).abs() / (1.0 + rhs));
    }
    let pass = worst <= 1e-12;
    verdict(2, pass, &format!("max |lhs - rhs| / (1 + rhs) = {worst:e} on 500 instances"));
    assert!(pass);
}

#[test]
fn criterion_03_filtration_inequalities() {
    let start = Instant::now();
    let pool = thread_pool(0).unwrap();
    let mut checks = 0;
    let mut failures = Vec::new();
    let mut worst_ratio: f64 = 0.0;
    let families = [
        WeightSequence::Power(-0.5),
        WeightSequence::Constant(1.0),
        WeightSequence::alternating(WeightSequence::Power(-0.25)),
    ];
    for (k, weights) in families.into_iter().enumerate() {
        let batch = FiltrationBatch {
            ids: InequalityId::ALL.to_vec(),
            ps: vec![1.5, 2.0, 3.0],
            instances: 100,
            master_seed: mix(MASTER, k as u64),
            max_atoms: 64,
            max_n: 32,
            max_dim: 3,
            weights,
            tol: 1e-12,
        };
        for r in verify_batch(&pool, &batch).unwrap() {
            checks += 1;
            if r.outcome != Outcome::Skipped {
                worst_ratio = worst_ratio.max(r.lhs / (r.constant * r.rhs));
            }
            if !r.passed() {
                failures.push(format!("{} p={} seed={}", r.id, r.p, r.instance.seed));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = failures.is_empty() && secs < 60.0;
    verdict(
        3,
        pass,
        &format!("{} violations in {checks} checks, max lhs/(C rhs) {worst_ratio:.3}, {secs:.2} s", failures.len()),
    );
    assert!(pass, "{failures:?}");
}

#[test]
fn criterion_04_lemma45_identity() {
    let mut worst: f64 = 0.0;
    for i in 0..100u64 {
        let seed = mix(MASTER, i);
        let m = 2 + (mix(seed, 1) % 49) as usize;
        let n = 1 + (mix(seed, 2) % 100) as usize;
        let family = RandomFamily::ALL[(i % 3) as usize];
        let chain = random_chain(mix(seed, 3), m, family).unwrap();
        let f = random_observable(mix(seed, 4), m, 1 + (i % 2) as usize);
        let w = weights_for(mix(seed, 5), 2 * n);
        worst = worst.max(lemma45_residual(&chain, &f, &w, n).unwrap());
    }
    let pass = worst <= 1e-10;
    verdict(4, pass, &format!("max residual {worst:e} on 100 triples"));
    assert!(pass);
}

fn condition_pair(i: u64) -> MarkovInstance {
    let seed = mix(MASTER, i);
    match i % 4 {
        0 => random_markov_instance(seed, 30, 1, true).unwrap(),
        1 => random_markov_instance(seed, 30, 1, false).unwrap(),
        2 => random_disconnected_instance(seed, 30, true).unwrap(),
        _ => random_disconnected_instance(seed, 30, false).unwrap(),
    }
}

#[test]
fn criterion_05_condition_equivalence() {
    let mut disagreements = Vec::new();
    let (mut all_true, mut all_false) = (0, 0);
    for i in 0..200 {
        let pair = condition_pair(i);
        let r = check_conditions(&pair.chain, &pair.observable, 256).unwrap();
        if !r.all_agree() {
            disagreements.push((i, r.flags()));
        } else if r.a_bounded {
            all_true += 1;
        } else {
            all_false += 1;
        }
    }
    let two = make_chain(&ChainModel::TwoState { p: 0.25, q: 0.25 }).unwrap();
    let r = check_conditions(&two, &Observable::scalar(vec![1.0, -1.0]).unwrap(), 256).unwrap();
    let sigma_err = (r.c_sigma2 - 3.0).abs();
    let d_err = (r.d_integral - 2.0).abs();
    let pass = disagreements.is_empty() && all_true > 0 && all_false > 0 && sigma_err <= 1e-10 && d_err <= 1e-10 && r.flags() == [true; 5];
    verdict(
        5,
        pass,
        &format!(
            "{} disagreements on 200 pairs ({all_true} all-true, {all_false} all-false); two-state sigma^2 error {sigma_err:e}, integral error {d_err:e}",
            disagreements.len()
        ),
    );
    assert!(pass, "{disagreements:?}");
}

#[test]
fn criterion_06_stein_step_constant_free() {
    let mut violations = Vec::new();
    let mut worst: f64 = 0.0;
    for i in 0..200u64 {
        let seed = mix(MASTER, i);
        let inst = random_markov_instance(seed, 50, 1, i % 2 == 0).unwrap();
        let n = markov_horizon(seed, 128);
        let r = verify_markov_inequality(MarkovCheckId::Stein, &inst, n, None, 1e-12).unwrap();
        if r.outcome != Outcome::Skipped {
            worst = worst.max(r.lhs / r.rhs);
        }
        if !r.passed() {
            violations.push((seed, r.lhs, r.rhs));
        }
    }
    let pass = violations.is_empty();
    verdict(
        6,
        pass,
        &format!("{} of 200 instances exceed E(f Q^2 f) with constant 1, max ratio {worst:.4}", violations.len()),
    );
    assert!(pass, "constant-free maximal ergodic step violated: {:?}", &violations[..violations.len().min(5)]);
}

#[test]
fn criterion_07_chain_theorem_and_corollaries() {
    let pool = thread_pool(0).unwrap();
    let mut failures = Vec::new();
    let mut checks = 0;
    let families = [
        WeightSequence::Power(-0.5),
        WeightSequence::Constant(1.0),
        WeightSequence::alternating(WeightSequence::Power(-0.25)),
    ];
    for (k, weights) in families.into_iter().enumerate() {
        let ids = if k == 0 {
            vec![MarkovCheckId::Thm41, MarkovCheckId::Cor42Const, MarkovCheckId::Cor42Sqrt]
        } else {
            vec![MarkovCheckId::Thm41]
        };
        let batch = MarkovBatch {
            ids,
            instances: 100,
            master_seed: mix(MASTER, 100 + k as u64),
            max_states: 50,
            max_n: 128,
            dim: 1 + k,
            weights,
            tol: 1e-12,
            literal_sqrt: false,
        };
        for row in markov_batch(&pool, &batch).unwrap() {
            checks += 1;
            if row.failed() {
                failures.push(format!("{} seed={} n={}", row.id, row.seed, row.n));
            }
        }
    }
    let pass = failures.is_empty();
    verdict(7, pass, &format!("{} violations in {checks} checks on chains with m <= 50, n <= 128", failures.len()));
    assert!(pass, "{failures:?}");
}

fn generated_chains() -> Vec<(ReversibleChain, Observable)> {
    let mut out = Vec::new();
    for i in 0..200 {
        let pair = condition_pair(i);
        out.push((pair.chain, pair.observable));
    }
    for i in 0..100u64 {
        let inst = random_markov_instance(mix(MASTER, 500 + i), 50, 1 + (i % 3) as usize, i % 2 == 0).unwrap();
        out.push((inst.chain, inst.observable));
    }
    out
}

#[test]
fn criterion_08_spectral_integrity() {
    let mut parseval: f64 = 0.0;
    let mut moments: f64 = 0.0;
    let chains = generated_chains();
    for (chain, f) in &chains {
        let sm = spectral_measure(chain, f).unwrap();
        let energy = chain.inner(f, f);
        parseval = parseval.max((sm.total_mass() - energy).abs());
        for k in 0..=20 {
            moments = moments.max((sm.moment(k) - autocovariance(chain, f, k)).abs());
        }
    }
    let mut max_sweeps = 0;
    let mut jacobi_ok = true;
    for (i, m) in [50usize, 100, 150, 200].into_iter().enumerate() {
        for family in RandomFamily::ALL {
            let chain = random_chain(mix(MASTER, 900 + i as u64), m, family).unwrap();
            match symmetric_eigen(&chain.symmetrized(), m) {
                Ok(e) => max_sweeps = max_sweeps.max(e.sweeps),
                Err(_) => jacobi_ok = false,
            }
        }
    }
    let pass = parseval <= 1e-9 && moments <= 1e-9 && jacobi_ok && max_sweeps <= 100;
    verdict(
        8,
        pass,
        &format!(
            "{} chains: Parseval error {parseval:e}, moment error (k <= 20) {moments:e}; Jacobi up to m = 200 in at most {max_sweeps} sweeps",
            chains.len()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_09_monte_carlo_matches_enumeration() {
    let start = Instant::now();
    let pool = thread_pool(0).unwrap();
    let three = make_chain(&ChainModel::Metropolis {
        target: vec![0.5, 0.3, 0.2],
        proposal: vec![vec![0.2, 0.4, 0.4], vec![0.4, 0.2, 0.4], vec![0.4, 0.4, 0.2]],
    })
    .unwrap();
    let cases: Vec<(ReversibleChain, Vec<f64>, WeightSequence, usize)> = vec![
        (make_chain(&ChainModel::TwoState { p: 0.25, q: 0.25 }).unwrap(), vec![1.0, -1.0], WeightSequence::Constant(1.0), 3),
        (make_chain(&ChainModel::TwoState { p: 0.3, q: 0.1 }).unwrap(), vec![1.0, -2.0], WeightSequence::Power(-0.5), 6),
        (make_chain(&ChainModel::TwoState { p: 0.7, q: 0.6 }).unwrap(), vec![2.0, 0.5], WeightSequence::alternating(WeightSequence::Constant(1.0)), 5),
        (three.clone(), vec![1.0, -2.0, 0.5], WeightSequence::Power(-0.5), 4),
        (three.clone(), vec![0.3, 1.0, -1.5], WeightSequence::Constant(1.0), 6),
        (three, vec![1.0, 0.0, -1.0], WeightSequence::Explicit(vec![1.0, -0.5, 0.25, 2.0, -1.0, 0.5]), 6),
    ];
    let mut worst_z: f64 = 0.0;
    let mut misses = Vec::new();
    for (i, (chain, values, w, n)) in cases.iter().enumerate() {
        let f = Observable::scalar(values.clone()).unwrap();
        let exact = exact_path_max_moment(chain, &f, w, *n).unwrap();
        let config = SimConfig {
            master_seed: mix(MASTER, i as u64),
            trials: 10_000,
            horizon: *n,
            threads: 0,
        };
        let est = maxineq::batch::mc_batch(&pool, chain, &f, w, *n, &config).unwrap();
        let z = (est.estimate - exact).abs() / est.standard_error;
        worst_z = worst_z.max(z);
        if z > 3.0 {
            misses.push((i, est.estimate, exact, est.standard_error));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = misses.is_empty() && secs < 30.0;
    verdict(9, pass, &format!("{} cases, max |MC - exact| / SE = {worst_z:.2}, {secs:.2} s", cases.len()));
    assert!(pass, "{misses:?}");
}

#[test]
fn criterion_10_oscillation_diagnostic() {
    let m = 10;
    let chain = make_chain(&ChainModel::BirthDeath {
        up: vec![0.005; m - 1],
        down: vec![0.005; m - 1],
    })
    .unwrap();
    let linear = Observable::scalar((0..m).map(|i| i as f64).collect()).unwrap();
    let centered = chain.center(&linear);
    let checkpoints = dyadic_checkpoints(1 << 15);
    let pool = thread_pool(0).unwrap();
    let run = |f: &Observable, w: &WeightSequence, seed: u64| {
        let config = SimConfig {
            master_seed: seed,
            trials: 200,
            horizon: 1 << 16,
            threads: 0,
        };
        let paths = maxineq::batch::paths_batch(&pool, &chain, f, w, &config).unwrap();
        as_convergence_diagnostic(&paths, &checkpoints).unwrap()
    };
    let converging = run(&centered, &WeightSequence::Power(-0.5), mix(MASTER, 10));
    let control = run(&linear, &WeightSequence::Constant(1.0), mix(MASTER, 11));
    let tail = |t: &maxineq_core::simulate::OscillationTable| {
        t.rows[t.rows.len() - 3..].iter().map(|r| format!("{:.3e}", r.q95)).collect::<Vec<_>>().join(" > ")
    };
    let pass = converging.consistent_with_convergence && !control.consistent_with_convergence;
    verdict(
        10,
        pass,
        &format!("centered j^-1/2 q95 tail {}; control a = 1 q95 tail {}", tail(&converging), tail(&control)),
    );
    assert!(pass);
}

/// Runs the command-line front end in process with every file argument
/// resolved inside `dir`.
fn run_cli(dir: &Path, args: &[&str]) -> i32 {
    let file = |a: &str| a.ends_with(".csv") || a.ends_with(".json");
    let argv = std::iter::once("maxineq".into()).chain(args.iter().map(|&a| if file(a) { dir.join(a).into_os_string() } else { a.into() }));
    maxineq::run(argv.collect::<Vec<std::ffi::OsString>>())
}

#[test]
fn criterion_11_thread_count_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(run_cli(d, &["--seed", "7", "gen-chain", "--model", "random", "--states", "9", "-o", "c.json", "--observable-out", "f.json", "--centered"]), 0);
    let seed = MASTER.to_string();
    let mut identical = true;
    let mut compared = 0;
    let mut reference: Vec<Vec<u8>> = Vec::new();
    for threads in ["1", "2", "8"] {
        let outputs = [
            (vec!["verify", "--instances", "60", "-o"], "v.csv"),
            (vec!["verify-markov", "--instances", "40", "--dim", "2", "--literal-sqrt", "-o"], "m.csv"),
            (vec!["simulate", "c.json", "f.json", "--trials", "64", "--horizon", "512", "--trajectories", "t.csv", "-o"], "d.csv"),
            (vec!["simulate", "c.json", "f.json", "--mc", "--trials", "500", "--horizon", "20", "-o"], "mc.csv"),
        ];
        let mut files = Vec::new();
        for (args, out) in outputs {
            let name = format!("{threads}-{out}");
            let mut full = vec!["--seed", seed.as_str(), "--threads", threads];
            full.extend(args);
            full.push(&name);
            let code = run_cli(d, &full);
            assert!(code == 0 || code == 1, "{full:?} exited {code}");
            files.push(std::fs::read(d.join(&name)).unwrap());
        }
        files.push(std::fs::read(d.join("t.csv")).unwrap());
        if reference.is_empty() {
            reference = files;
        } else {
            compared += files.len();
            identical &= files == reference;
        }
    }
    let pass = identical && reference.iter().all(|f| !f.is_empty());
    verdict(11, pass, &format!("{compared} CSV outputs at 2 and 8 threads compared byte for byte against 1 thread"));
    assert!(pass);
}
