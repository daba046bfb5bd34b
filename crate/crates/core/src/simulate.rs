//! Seeded simulation of stationary reversible chains.
//!
//! Trial `i` of a run with master seed `s` draws from
//! `ChaCha8Rng::seed_from_u64(mix(s, i))` (see [`crate::seed`]), so every
//! trial is reproducible on its own and results never depend on how trials
//! are scheduled. Weighted series are realized along a trajectory as
//! `T_k = sum_{j<=k} a_j (Q^j f)(xi_j)`.

use alloc::vec::Vec;

use rand::Rng;

use crate::markov::{Observable, PowerTable, ReversibleChain};
use crate::seed::{mix, rng_for};
use crate::weights::WeightSequence;
use crate::{Error, Result};

pub const MIN_DIAGNOSTIC_TRIALS: usize = 30;
pub const MIN_MC_TRIALS: usize = 100;
/// Required stepwise decrease of the 95% oscillation quantile.
pub const DECAY_FACTOR: f64 = 1.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub master_seed: u64,
    pub trials: usize,
    pub horizon: usize,
    /// Advisory; the sequential drivers here ignore it.
    pub threads: usize,
}

impl SimConfig {
    pub fn trial_seed(&self, trial: usize) -> u64 {
        mix(self.master_seed, trial as u64)
    }
}

/// `xi_0, ..., xi_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub states: Vec<usize>,
}

/// Cumulative distributions for inverse-CDF sampling of a chain.
#[derive(Debug, Clone, PartialEq)]
pub struct Sampler {
    initial: Vec<f64>,
    rows: Vec<Vec<f64>>,
}

fn cumulative(probs: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    probs
        .iter()
        .map(|p| {
            acc += p;
            acc
        })
        .collect()
}

/// First index whose cumulative probability is `>= u`, for `u` in `(0, 1]`;
/// round-off shortfall falls back to the last index with positive mass.
fn pick(cum: &[f64], u: f64) -> usize {
    match cum.iter().position(|&c| c >= u) {
        Some(i) => i,
        None => {
            let mut last = cum.len() - 1;
            while last > 0 && cum[last] == cum[last - 1] {
                last -= 1;
            }
            last
        }
    }
}

impl Sampler {
    pub fn new(chain: &ReversibleChain) -> Self {
        Self {
            initial: cumulative(chain.pi()),
            rows: (0..chain.states()).map(|i| cumulative(chain.row(i))).collect(),
        }
    }

    pub fn trajectory(&self, n: usize, seed: u64) -> Trajectory {
        let mut rng = rng_for(seed);
        let mut draw = || 1.0 - rng.gen::<f64>();
        let mut states = Vec::with_capacity(n + 1);
        let mut x = pick(&self.initial, draw());
        states.push(x);
        for _ in 0..n {
            x = pick(&self.rows[x], draw());
            states.push(x);
        }
        Trajectory { states }
    }
}

/// Stationary trajectory of length `n + 1`.
pub fn sample_trajectory(chain: &ReversibleChain, n: usize, seed: u64) -> Trajectory {
    Sampler::new(chain).trajectory(n, seed)
}

/// `T_k` for `k = 1..=weights.len()`, reading `weights[j-1] = a_j` and
/// `Q^j f` from `table`.
pub fn series_path_with(table: &PowerTable, weights: &[f64], traj: &Trajectory) -> Result<Vec<f64>> {
    let horizon = weights.len();
    if traj.states.len() < horizon + 1 {
        return Err(Error::TrajectoryTooShort {
            len: traj.states.len(),
            horizon,
        });
    }
    if table.dim() != 1 {
        return Err(Error::InvalidObservable {
            id: "series-path",
            reason: "trajectory sums are computed for scalar observables",
        });
    }
    if table.max_power() < horizon {
        return Err(Error::IndexOutOfRange {
            what: "power table depth",
            index: horizon,
            max: table.max_power(),
        });
    }
    let mut acc = 0.0;
    Ok(weights
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let j = i + 1;
            acc += a * table.get(j).value(traj.states[j])[0];
            acc
        })
        .collect())
}

pub fn series_path(chain: &ReversibleChain, f: &Observable, w: &WeightSequence, traj: &Trajectory, horizon: usize) -> Result<Vec<f64>> {
    let table = PowerTable::new(chain, f, horizon)?;
    series_path_with(&table, &w.values(horizon)?, traj)
}

/// One trial's series path over `weights.len()` steps.
pub fn trial_path(sampler: &Sampler, table: &PowerTable, weights: &[f64], seed: u64) -> Result<Vec<f64>> {
    series_path_with(table, weights, &sampler.trajectory(weights.len(), seed))
}

/// One trial's `max_{k<=n} T_k^2`, `n = weights.len()`.
pub fn trial_max_square(sampler: &Sampler, table: &PowerTable, weights: &[f64], seed: u64) -> Result<f64> {
    Ok(trial_path(sampler, table, weights, seed)?
        .iter()
        .map(|t| t * t)
        .fold(0.0, f64::max))
}

/// `1, 2, 4, ..., <= max`.
pub fn dyadic_checkpoints(max: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut n = 1;
    while n <= max {
        out.push(n);
        n *= 2;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillationRow {
    pub checkpoint: usize,
    pub median: f64,
    pub q95: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OscillationTable {
    pub rows: Vec<OscillationRow>,
    /// The 95% quantile dropped by at least [`DECAY_FACTOR`] at each of the
    /// last two steps between the last three checkpoints (`0 -> 0` counts).
    /// A trend diagnostic, not a certificate.
    pub consistent_with_convergence: bool,
}

/// Nearest-rank quantile of sorted data: element `ceil(q N) - 1`.
pub fn nearest_rank(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    let rank = libm::ceil(q * n as f64) as usize;
    sorted[rank.clamp(1, n) - 1]
}

/// `osc(n) = max_{n<=k<=2n} |T_k - T_n|` across trials, at each checkpoint.
/// `paths[t][k-1]` holds `T_k`.
pub fn as_convergence_diagnostic(paths: &[Vec<f64>], checkpoints: &[usize]) -> Result<OscillationTable> {
    if paths.len() < MIN_DIAGNOSTIC_TRIALS {
        return Err(Error::TooFewTrials {
            needed: MIN_DIAGNOSTIC_TRIALS,
            got: paths.len(),
        });
    }
    let need = 2 * checkpoints.iter().copied().max().unwrap_or(0);
    if let Some(short) = paths.iter().find(|p| p.len() < need) {
        return Err(Error::TrajectoryTooShort {
            len: short.len(),
            horizon: need,
        });
    }
    let mut rows = Vec::with_capacity(checkpoints.len());
    for &n in checkpoints {
        if n == 0 {
            return Err(Error::IndexOutOfRange {
                what: "oscillation checkpoint",
                index: 0,
                max: need / 2,
            });
        }
        let mut osc: Vec<f64> = paths
            .iter()
            .map(|p| {
                let base = p[n - 1];
                p[n - 1..2 * n].iter().map(|t| (t - base).abs()).fold(0.0, f64::max)
            })
            .collect();
        osc.sort_by(f64::total_cmp);
        rows.push(OscillationRow {
            checkpoint: n,
            median: nearest_rank(&osc, 0.5),
            q95: nearest_rank(&osc, 0.95),
        });
    }
    let consistent_with_convergence = rows.len() >= 3
        && rows[rows.len() - 3..]
            .windows(2)
            .all(|w| w[0].q95 >= DECAY_FACTOR * w[1].q95);
    Ok(OscillationTable {
        rows,
        consistent_with_convergence,
    })
}

/// Sequential batch of series paths, trial `i` seeded by `mix(master, i)`.
pub fn simulate_paths(chain: &ReversibleChain, f: &Observable, w: &WeightSequence, config: &SimConfig) -> Result<Vec<Vec<f64>>> {
    let table = PowerTable::new(chain, f, config.horizon)?;
    let weights = w.values(config.horizon)?;
    let sampler = Sampler::new(chain);
    (0..config.trials)
        .map(|t| trial_path(&sampler, &table, &weights, config.trial_seed(t)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub standard_error: f64,
    pub trials: usize,
}

/// Mean with its jackknife standard error, reduced in index order.
pub fn summarize(values: &[f64]) -> Result<McEstimate> {
    let n = values.len();
    if n < 2 {
        return Err(Error::TooFewTrials { needed: 2, got: n });
    }
    let total: f64 = values.iter().sum();
    let estimate = total / n as f64;
    let loo: Vec<f64> = values.iter().map(|x| (total - x) / (n - 1) as f64).collect();
    let loo_mean = loo.iter().sum::<f64>() / n as f64;
    let spread: f64 = loo.iter().map(|t| (t - loo_mean) * (t - loo_mean)).sum();
    Ok(McEstimate {
        estimate,
        standard_error: libm::sqrt((n - 1) as f64 / n as f64 * spread),
        trials: n,
    })
}

/// Monte Carlo estimate of `E max_{k<=n} T_k^2`.
pub fn mc_max_moment(chain: &ReversibleChain, f: &Observable, w: &WeightSequence, n: usize, config: &SimConfig) -> Result<McEstimate> {
    if config.trials < MIN_MC_TRIALS {
        return Err(Error::TooFewTrials {
            needed: MIN_MC_TRIALS,
            got: config.trials,
        });
    }
    let table = PowerTable::new(chain, f, n)?;
    let weights = w.values(n)?;
    let sampler = Sampler::new(chain);
    let values = (0..config.trials)
        .map(|t| trial_max_square(&sampler, &table, &weights, config.trial_seed(t)))
        .collect::<Result<Vec<_>>>()?;
    summarize(&values)
}

/// Exact `E max_{k<=n} T_k^2` by enumerating all `m^{n+1}` stationary paths.
pub fn exact_path_max_moment(chain: &ReversibleChain, f: &Observable, w: &WeightSequence, n: usize) -> Result<f64> {
    let table = PowerTable::new(chain, f, n)?;
    if table.dim() != 1 {
        return Err(Error::InvalidObservable {
            id: "path-enumeration",
            reason: "trajectory sums are computed for scalar observables",
        });
    }
    let weights = w.values(n)?;
    let m = chain.states();
    // Depth-first over (state, step, probability, running sum, running max).
    let mut total = 0.0;
    let mut stack: Vec<(usize, usize, f64, f64, f64)> = (0..m).map(|x| (x, 0, chain.pi()[x], 0.0, 0.0)).collect();
    while let Some((x, step, prob, sum, best)) = stack.pop() {
        if step == n {
            total += prob * best;
            continue;
        }
        for y in 0..m {
            let q = chain.q(x, y);
            if q > 0.0 {
                let j = step + 1;
                let s = sum + weights[j - 1] * table.get(j).value(y)[0];
                stack.push((y, j, prob * q, s, best.max(s * s)));
            }
        }
    }
    Ok(total)
}

/// `T_k` recomputed termwise, for cross-checking cumulative sums.
pub fn series_path_termwise(table: &PowerTable, weights: &[f64], traj: &Trajectory) -> Vec<f64> {
    (1..=weights.len())
        .map(|k| (1..=k).map(|j| weights[j - 1] * table.get(j).value(traj.states[j])[0]).sum())
        .collect()
}
