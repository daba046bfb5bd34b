use alloc::vec::Vec;

use super::constants::{traced_constant, InequalityId};
use super::instance::Instance;
use super::record::{CheckId, VerificationRecord};
use crate::finite_prob::{exact_max_moment, FilteredSpace, RandomVector};
use crate::vecmath::pow_nonneg;
use crate::weights::{WeightSequence, WeightStats};
use crate::{Error, Result};

/// Both sides of one inequality, computed exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sides {
    pub lhs: f64,
    pub rhs: f64,
}

/// `E^1 X, ..., E^n X` and the weighted partial sums `G_k = sum_{j<=k} a_j E^j X`.
struct WeightedTerms {
    conditioned: Vec<RandomVector>,
    partial: Vec<RandomVector>,
    stats: WeightStats,
}

fn weighted_terms(fs: &FilteredSpace, x: &RandomVector, w: &WeightSequence, n: usize) -> Result<WeightedTerms> {
    let stats = WeightStats::compute_basic(w, n)?;
    let conditioned = (1..=n).map(|k| fs.cond_expect(x, k)).collect::<Result<Vec<_>>>()?;
    let mut running = RandomVector::zeros(x.atoms(), x.dim());
    let mut partial = Vec::with_capacity(n);
    for (k, e) in conditioned.iter().enumerate() {
        running.add_scaled(w.eval(k + 1)?, e);
        partial.push(running.clone());
    }
    Ok(WeightedTerms {
        conditioned,
        partial,
        stats,
    })
}

fn check_horizon(fs: &FilteredSpace, n: usize, available: usize) -> Result<()> {
    if n == 0 || n > available {
        return Err(Error::IndexOutOfRange {
            what: "verification horizon (sequence length)",
            index: n,
            max: available,
        });
    }
    if fs.filtration().levels() < n {
        return Err(Error::IndexOutOfRange {
            what: "verification horizon (filtration levels)",
            index: n,
            max: fs.filtration().levels(),
        });
    }
    Ok(())
}

/// Computes both sides of `id` at horizon `n`.
pub fn sides(id: InequalityId, instance: &Instance, n: usize, p: f64, weights: Option<&WeightSequence>) -> Result<Sides> {
    let fs = &instance.space;
    let space = fs.space();
    if !id.valid_p(p) {
        traced_constant(id, p)?;
    }
    if id.needs_weights() {
        let w = weights.ok_or(Error::MissingWeights { what: id.as_str() })?;
        check_horizon(fs, n, usize::MAX)?;
        let x = instance.driver();
        let t = weighted_terms(fs, x, w, n)?;
        let scaled: Vec<RandomVector> = t
            .conditioned
            .iter()
            .enumerate()
            .map(|(k, e)| e.scaled(t.stats.s(k + 1)))
            .collect();
        let sides = match id {
            InequalityId::Cor23First => Sides {
                lhs: exact_max_moment(space, &t.partial, p)?,
                rhs: exact_max_moment(space, &scaled, p)? + space.moment(&t.partial[n - 1], p),
            },
            InequalityId::Cor23Second => {
                let mut rhs = exact_max_moment(space, &scaled, p)?;
                for i in 1..n {
                    let diff = t.conditioned[i - 1].sub(&t.conditioned[i]);
                    rhs += pow_nonneg(t.stats.s(i).abs(), p) * space.moment(&diff, p);
                }
                Sides {
                    lhs: exact_max_moment(space, &t.partial, p)?,
                    rhs,
                }
            }
            InequalityId::Dyadic => {
                let rhs = (1..=n)
                    .map(|k| {
                        pow_nonneg(t.stats.s_star(4 * k), p) / k as f64 * space.moment(&t.conditioned[k - 1], p)
                    })
                    .sum();
                Sides {
                    lhs: exact_max_moment(space, &scaled, p)?,
                    rhs,
                }
            }
            InequalityId::Cor25 => {
                let rhs = (1..=n)
                    .map(|k| t.stats.b(k) * space.moment(&t.conditioned[k - 1], 2.0))
                    .sum();
                Sides {
                    lhs: exact_max_moment(space, &t.partial, 2.0)?,
                    rhs,
                }
            }
            _ => unreachable!("weighted ids only"),
        };
        return Ok(sides);
    }

    check_horizon(fs, n, instance.sequence.len())?;
    let ps = fs.adapted_partial_sums(&instance.sequence, n)?;
    let diffs = || -> Result<Vec<RandomVector>> {
        (1..n)
            .map(|i| Ok(ps.conditioned[i - 1].sub(&fs.cond_expect(&ps.sums[i - 1], i + 1)?)))
            .collect()
    };
    let sides = match id {
        InequalityId::Prop21First => Sides {
            lhs: exact_max_moment(space, &ps.sums, p)?,
            rhs: exact_max_moment(space, &ps.conditioned, p)? + space.moment(&ps.sums[n - 1], p),
        },
        InequalityId::Prop21Second => Sides {
            lhs: exact_max_moment(space, &ps.sums, p)?,
            rhs: exact_max_moment(space, &ps.conditioned, p)?
                + diffs()?.iter().map(|d| space.moment(d, p)).sum::<f64>(),
        },
        InequalityId::RSmooth => {
            let d = diffs()?;
            let mut total = RandomVector::zeros(space.atoms(), instance.sequence.dim());
            d.iter().for_each(|v| total.add_assign(v));
            Sides {
                lhs: space.moment(&total, p),
                rhs: d.iter().map(|v| space.moment(v, p)).sum(),
            }
        }
        _ => unreachable!("unweighted ids only"),
    };
    Ok(sides)
}

/// Evaluates `id` on `instance` and judges it against the traced constant.
pub fn verify(
    id: InequalityId,
    instance: &Instance,
    n: usize,
    p: f64,
    weights: Option<&WeightSequence>,
    tol: f64,
) -> Result<VerificationRecord> {
    let constant = traced_constant(id, p)?;
    let s = sides(id, instance, n, p, weights)?;
    Ok(VerificationRecord::new(
        CheckId::Filtration(id),
        p,
        instance.descriptor(n),
        s.lhs,
        s.rhs,
        constant.value,
        tol,
    ))
}

/// Second-inequality right-hand side at `p = 2` with `sum E|P^i(S_i)|^2`
/// replaced by the telescoping `sum (E|E^i S_i|^2 - E|E^{i+1} S_i|^2)`.
pub fn prop21_second_telescoped_rhs(instance: &Instance, n: usize) -> Result<f64> {
    let fs = &instance.space;
    let space = fs.space();
    check_horizon(fs, n, instance.sequence.len())?;
    let ps = fs.adapted_partial_sums(&instance.sequence, n)?;
    let mut rhs = exact_max_moment(space, &ps.conditioned, 2.0)?;
    for i in 1..n {
        let coarse = fs.cond_expect(&ps.sums[i - 1], i + 1)?;
        rhs += space.moment(&ps.conditioned[i - 1], 2.0) - space.moment(&coarse, 2.0);
    }
    Ok(rhs)
}

/// `(E|S_{2m} - S_m|^p)^{1/p}` for each checkpoint `m`, with
/// `S_k = sum_{j<=k} a_j E^j X`. The filtration must reach `2 * max(m)`;
/// extend it with [`crate::finite_prob::DecreasingFiltration::with_constant_tail`]
/// to model a stabilizing tail.
pub fn cauchy_distances(
    fs: &FilteredSpace,
    x: &RandomVector,
    w: &WeightSequence,
    p: f64,
    checkpoints: &[usize],
) -> Result<Vec<f64>> {
    let horizon = 2 * checkpoints.iter().copied().max().unwrap_or(0);
    if horizon == 0 {
        return Ok(Vec::new());
    }
    let mut running = RandomVector::zeros(x.atoms(), x.dim());
    let mut partial = Vec::with_capacity(horizon);
    for k in 1..=horizon {
        running.add_scaled(w.eval(k)?, &fs.cond_expect(x, k)?);
        partial.push(running.clone());
    }
    Ok(checkpoints
        .iter()
        .map(|&m| {
            let d = partial[2 * m - 1].sub(&partial[m - 1]);
            libm::pow(fs.space().moment(&d, p), 1.0 / p)
        })
        .collect())
}
