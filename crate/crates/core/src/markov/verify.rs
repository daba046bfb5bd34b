use alloc::vec::Vec;

use super::chain::{random_chain, random_disconnected_chain, random_observable, Observable, RandomFamily, ReversibleChain};
use super::functionals::{max_square_functional, weighted_series_from, PowerTable};
use super::spectral::{SpectralDecomposition, UNIT_TOL};
use crate::inequalities::constants::{markov_constant, MarkovCheckId};
use crate::inequalities::record::{CheckId, InstanceDescriptor, VerificationRecord};
use crate::inequalities::verify::Sides;
use crate::seed::{mix, rng_for};
use crate::weights::{WeightSequence, WeightStats};
use crate::{Error, Result};

/// A chain with an observable, tagged with the seed that generated it.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovInstance {
    pub chain: ReversibleChain,
    pub observable: Observable,
    pub seed: u64,
}

impl MarkovInstance {
    pub fn descriptor(&self, n: usize) -> InstanceDescriptor {
        InstanceDescriptor {
            seed: self.seed,
            size: self.chain.states(),
            n,
            dim: self.observable.dim(),
        }
    }
}

/// Seeded (chain, f) pair with `2 <= m <= max_states`. The family cycles
/// through the random generators; `centered` subtracts `E_pi f`.
pub fn random_markov_instance(seed: u64, max_states: usize, dim: usize, centered: bool) -> Result<MarkovInstance> {
    use rand::Rng;
    let mut rng = rng_for(mix(seed, 0));
    let m = rng.gen_range(2..=max_states.max(2));
    let family = RandomFamily::ALL[rng.gen_range(0..RandomFamily::ALL.len())];
    let chain = random_chain(mix(seed, 1), m, family)?;
    let f = random_observable(mix(seed, 2), m, dim);
    let observable = if centered { chain.center(&f) } else { f };
    Ok(MarkovInstance { chain, observable, seed })
}

/// Seeded two-component chain with an observable; with `indicator` the
/// observable is the globally centered indicator of the first component.
pub fn random_disconnected_instance(seed: u64, max_states: usize, indicator: bool) -> Result<MarkovInstance> {
    use rand::Rng;
    let mut rng = rng_for(mix(seed, 0));
    let m = rng.gen_range(4..=max_states.max(4));
    let chain = random_disconnected_chain(mix(seed, 1), m)?;
    let f = if indicator {
        Observable::scalar((0..m).map(|i| if i < m / 2 { 1.0 } else { 0.0 }).collect())?
    } else {
        random_observable(mix(seed, 2), m, 1)
    };
    Ok(MarkovInstance {
        chain: chain.clone(),
        observable: chain.center(&f),
        seed,
    })
}

fn require_scalar(id: MarkovCheckId, f: &Observable) -> Result<()> {
    if !id.accepts_vector() && f.dim() != 1 {
        return Err(Error::InvalidObservable {
            id: id.as_str(),
            reason: "scalar observable required",
        });
    }
    Ok(())
}

/// Both sides of a chain check at horizon `n`. `weights` is used only by
/// the theorem check.
pub fn markov_sides(id: MarkovCheckId, chain: &ReversibleChain, f: &Observable, n: usize, weights: Option<&WeightSequence>) -> Result<Sides> {
    chain.check_observable(f)?;
    require_scalar(id, f)?;
    if n == 0 {
        return Err(Error::IndexOutOfRange {
            what: "chain check horizon",
            index: 0,
            max: usize::MAX,
        });
    }
    let norm2 = |table: &PowerTable, j: usize| chain.inner(table.get(j), table.get(j));
    match id {
        MarkovCheckId::Thm41 => {
            let w = weights.ok_or(Error::MissingWeights { what: id.as_str() })?;
            let stats = WeightStats::compute(w, n)?;
            let table = PowerTable::new(chain, f, 2 * n)?;
            let lhs = weighted_series_from(chain, &table, w, 2 * n)?.exact_max;
            let rhs = (1..=n)
                .map(|j| stats.b_star(j).expect("parity stats computed") * norm2(&table, j))
                .sum();
            Ok(Sides { lhs, rhs })
        }
        MarkovCheckId::Cor42Const | MarkovCheckId::Cor42Sqrt => {
            let (w, factor): (WeightSequence, fn(usize) -> f64) = if id == MarkovCheckId::Cor42Const {
                (WeightSequence::Constant(1.0), |j| j as f64)
            } else {
                (WeightSequence::Power(-0.5), |_| 1.0)
            };
            let table = PowerTable::new(chain, f, n)?;
            let lhs = weighted_series_from(chain, &table, &w, n)?.exact_max;
            let rhs = (1..=n).map(|j| factor(j) * norm2(&table, j)).sum();
            Ok(Sides { lhs, rhs })
        }
        MarkovCheckId::EstPartial => {
            let table = PowerTable::new(chain, f, 2 * n + 1)?;
            let mut running = Observable::zeros(chain.states(), 1);
            let mut partial = Vec::with_capacity(2 * n);
            for j in 1..=2 * n {
                running.add_assign(table.get(j));
                running.add_assign(table.get(j + 1));
                partial.push(running.clone());
            }
            let lhs = max_square_functional(chain, &partial);
            let signed: f64 = (1..=2 * n).map(|j| j as f64 * chain.inner(f, table.get(j))).sum();
            Ok(Sides {
                lhs,
                rhs: signed.abs() + chain.inner(f, table.get(2)),
            })
        }
        MarkovCheckId::Stein => {
            let table = PowerTable::new(chain, f, 2 * n + 1)?;
            let terms: Vec<Observable> = (1..=2 * n).map(|k| table.get(k + 1).clone()).collect();
            Ok(Sides {
                lhs: max_square_functional(chain, &terms),
                rhs: chain.inner(f, table.get(2)),
            })
        }
        MarkovCheckId::Cor44Sup => {
            let mean = chain.mean(f)[0];
            let scale = 1.0 + f.max_abs_norm();
            if mean.abs() > 1e-9 * scale {
                return Err(Error::InvalidObservable {
                    id: id.as_str(),
                    reason: "mean-zero observable required",
                });
            }
            let table = PowerTable::new(chain, f, n)?;
            let lhs = weighted_series_from(chain, &table, &WeightSequence::Power(-0.5), n)?.exact_max;
            let sm = SpectralDecomposition::new(chain)?.measure(f);
            // sum_{j>=1} E|Q^j f|^2 = int t^2 / (1 - t^2) d rho.
            let rhs = if sm.has_unit_mass() || sm.minus_one_mass() > super::spectral::MASS_TOL {
                f64::INFINITY
            } else {
                sm.atoms()
                    .iter()
                    .filter(|a| a.lambda.abs() < 1.0 - UNIT_TOL)
                    .map(|a| a.mass * a.lambda * a.lambda / (1.0 - a.lambda * a.lambda))
                    .sum()
            };
            Ok(Sides { lhs, rhs })
        }
    }
}

pub fn verify_markov_inequality(
    id: MarkovCheckId,
    instance: &MarkovInstance,
    n: usize,
    weights: Option<&WeightSequence>,
    tol: f64,
) -> Result<VerificationRecord> {
    let s = markov_sides(id, &instance.chain, &instance.observable, n, weights)?;
    Ok(VerificationRecord::new(
        CheckId::Markov(id),
        2.0,
        instance.descriptor(n),
        s.lhs,
        s.rhs,
        markov_constant(id).value,
        tol,
    ))
}

/// The square-root corollary with the literal weights `a_j = j^{1/2}`, for
/// inspection only: no constant is attached.
pub fn literal_sqrt_sides(chain: &ReversibleChain, f: &Observable, n: usize) -> Result<Sides> {
    let table = PowerTable::new(chain, f, n)?;
    let lhs = weighted_series_from(chain, &table, &WeightSequence::Power(0.5), n)?.exact_max;
    let rhs = (1..=n).map(|j| chain.inner(table.get(j), table.get(j))).sum();
    Ok(Sides { lhs, rhs })
}
