//! Parallel batch drivers. Items are seeded by `mix(master, index)` and
//! collected in index order, so results do not depend on the thread count.

use maxineq_core::inequalities::{
    random_instance_within, verify, Instance, InequalityId, MarkovCheckId, VerificationRecord,
};
use maxineq_core::markov::{literal_sqrt_sides, random_markov_instance, verify_markov_inequality, Observable, PowerTable, ReversibleChain};
use maxineq_core::seed::mix;
use maxineq_core::simulate::{summarize, trial_max_square, trial_path, McEstimate, Sampler, SimConfig, MIN_MC_TRIALS};
use maxineq_core::weights::WeightSequence;
use maxineq_core::{Error, Result};
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

use crate::error::CliResult;
use crate::report::ReportRow;

/// `threads = 0` uses one thread per core.
pub fn thread_pool(threads: usize) -> CliResult<ThreadPool> {
    Ok(ThreadPoolBuilder::new().num_threads(threads).build()?)
}

/// `f(0), ..., f(len - 1)` evaluated on `pool`, in index order.
pub fn par_map<T, F>(pool: &ThreadPool, len: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    pool.install(|| (0..len).into_par_iter().map(f).collect())
}

/// Random filtration instances and the grid they are checked on.
#[derive(Debug, Clone, PartialEq)]
pub struct FiltrationBatch {
    pub ids: Vec<InequalityId>,
    pub ps: Vec<f64>,
    pub instances: usize,
    pub master_seed: u64,
    pub max_atoms: usize,
    pub max_n: usize,
    pub max_dim: usize,
    pub weights: WeightSequence,
    pub tol: f64,
}

impl FiltrationBatch {
    pub fn instance_seeds(&self) -> Vec<u64> {
        (0..self.instances).map(|i| mix(self.master_seed, i as u64)).collect()
    }

    /// `(id, p)` pairs in report order, skipping exponents an id does not
    /// accept.
    pub fn grid(&self) -> Vec<(InequalityId, f64)> {
        self.ids
            .iter()
            .flat_map(|&id| self.ps.iter().filter(move |&&p| id.valid_p(p)).map(move |&p| (id, p)))
            .collect()
    }
}

/// Every `(id, p)` of the grid on every instance `i`, ordered by id, then
/// p, then instance.
pub fn verify_batch(pool: &ThreadPool, batch: &FiltrationBatch) -> Result<Vec<VerificationRecord>> {
    let seeds = batch.instance_seeds();
    let instances = par_map(pool, seeds.len(), |i| {
        random_instance_within(seeds[i], batch.max_atoms, batch.max_n, batch.max_dim)
    })?;
    let grid = batch.grid();
    let per = instances.len();
    par_map(pool, grid.len() * per, |job| {
        let (id, p) = grid[job / per];
        verify_one(id, &instances[job % per], p, &batch.weights, batch.tol)
    })
}

/// One `(id, p)` check on `instance` at its full length.
pub fn verify_one(id: InequalityId, instance: &Instance, p: f64, weights: &WeightSequence, tol: f64) -> Result<VerificationRecord> {
    let w = id.needs_weights().then_some(weights);
    verify(id, instance, instance.sequence.len(), p, w, tol)
}

/// Random chain instances for the chain checks.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovBatch {
    pub ids: Vec<MarkovCheckId>,
    pub instances: usize,
    pub master_seed: u64,
    pub max_states: usize,
    pub max_n: usize,
    pub dim: usize,
    pub weights: WeightSequence,
    pub tol: f64,
    pub literal_sqrt: bool,
}

impl MarkovBatch {
    pub fn instance_seeds(&self) -> Vec<u64> {
        (0..self.instances).map(|i| mix(self.master_seed, i as u64)).collect()
    }
}

/// Label of the inspection rows for the literal `j^{1/2}` weights.
pub const LITERAL_SQRT_ID: &str = "cor42-sqrt-literal";

/// Horizon for item `seed`: `1 + mix(seed, 7) mod max_n`.
pub fn markov_horizon(seed: u64, max_n: usize) -> usize {
    1 + (mix(seed, 7) % max_n.max(1) as u64) as usize
}

/// Instance `i` of a chain batch: even indices and the sup check get a
/// centered observable; scalar-only ids get dimension 1.
pub fn markov_item(batch: &MarkovBatch, id: MarkovCheckId, i: usize) -> Result<(maxineq_core::markov::MarkovInstance, usize)> {
    let seed = mix(batch.master_seed, i as u64);
    let centered = id == MarkovCheckId::Cor44Sup || i % 2 == 0;
    let dim = if id.accepts_vector() { batch.dim } else { 1 };
    let instance = random_markov_instance(seed, batch.max_states, dim, centered)?;
    Ok((instance, markov_horizon(seed, batch.max_n)))
}

pub fn markov_batch(pool: &ThreadPool, batch: &MarkovBatch) -> Result<Vec<ReportRow>> {
    let per = batch.instances;
    let rows = par_map(pool, batch.ids.len() * per, |job| {
        let id = batch.ids[job / per];
        let (instance, n) = markov_item(batch, id, job % per)?;
        let w = (id == MarkovCheckId::Thm41).then_some(&batch.weights);
        let record = verify_markov_inequality(id, &instance, n, w, batch.tol)?;
        let mut rows = vec![ReportRow::from(&record)];
        if batch.literal_sqrt && id == MarkovCheckId::Cor42Sqrt {
            rows.push(literal_row(&instance.chain, &instance.observable, &record)?);
        }
        Ok(rows)
    })?;
    Ok(rows.into_iter().flatten().collect())
}

/// Inspection row for the literal weights next to a square-root record.
pub fn literal_row(chain: &ReversibleChain, f: &Observable, record: &VerificationRecord) -> Result<ReportRow> {
    let s = literal_sqrt_sides(chain, f, record.instance.n)?;
    Ok(ReportRow {
        id: LITERAL_SQRT_ID.to_string(),
        lhs: s.lhs,
        rhs: s.rhs,
        constant: None,
        outcome: None,
        ..ReportRow::from(record)
    })
}

/// Series paths of every trial, trial `t` seeded by `config.trial_seed(t)`.
pub fn paths_batch(pool: &ThreadPool, chain: &ReversibleChain, f: &Observable, w: &WeightSequence, config: &SimConfig) -> Result<Vec<Vec<f64>>> {
    let table = PowerTable::new(chain, f, config.horizon)?;
    let weights = w.values(config.horizon)?;
    let sampler = Sampler::new(chain);
    par_map(pool, config.trials, |t| trial_path(&sampler, &table, &weights, config.trial_seed(t)))
}

/// Parallel Monte Carlo estimate of `E max_{k<=n} T_k^2`; agrees bit for
/// bit with the sequential driver.
pub fn mc_batch(pool: &ThreadPool, chain: &ReversibleChain, f: &Observable, w: &WeightSequence, n: usize, config: &SimConfig) -> Result<McEstimate> {
    if config.trials < MIN_MC_TRIALS {
        return Err(Error::TooFewTrials {
            needed: MIN_MC_TRIALS,
            got: config.trials,
        });
    }
    let table = PowerTable::new(chain, f, n)?;
    let weights = w.values(n)?;
    let sampler = Sampler::new(chain);
    let values = par_map(pool, config.trials, |t| trial_max_square(&sampler, &table, &weights, config.trial_seed(t)))?;
    summarize(&values)
}
