use alloc::vec::Vec;

use super::chain::{Observable, ReversibleChain};
use super::functionals::{autocovariances, variance_growth_from, PowerTable};
use super::spectral::{dl_integral, SpectralDecomposition, SpectralMeasure, MASS_TOL};
use crate::{Error, Result};

/// The five equivalent variance conditions for a scalar observable, with
/// their diagnostics. Infinite quantities are `f64::INFINITY`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    /// `(n, sum_{k<=n} E_pi(f Q^k f))` on the dyadic probe grid.
    pub a_partial_sums: Vec<(usize, f64)>,
    pub a_bounded: bool,
    /// `max_n E S_n^2 / n` over the probe grid.
    pub b_sup: f64,
    /// Uniform bound `sigma^2 + 4 int |t| 1{t<0} d rho` on `E S_n^2 / n`.
    pub b_bound: f64,
    pub b_bounded: bool,
    /// `gamma_0 + 2 sum_k gamma_k` by geometric summation per atom.
    pub c_sigma2: f64,
    /// `int (1+t)/(1-t) d rho`, the cross-check for `c_sigma2`.
    pub c_sigma2_integral: f64,
    pub c_finite: bool,
    pub d_integral: f64,
    pub d_finite: bool,
    /// Mass of `f` on the kernel of `1 - Q` (constant-per-component
    /// functions), computed from the communicating classes directly.
    pub e_kernel_mass: f64,
    pub e_member: bool,
    pub unit_mass: f64,
    pub components: usize,
}

impl ConditionReport {
    pub fn flags(&self) -> [bool; 5] {
        [self.a_bounded, self.b_bounded, self.c_finite, self.d_finite, self.e_member]
    }

    pub fn all_agree(&self) -> bool {
        let f = self.flags();
        f.iter().all(|&b| b == f[0])
    }
}

/// `1, 2, 4, ...` up to `horizon`, plus `horizon` itself.
pub fn dyadic_grid(horizon: usize) -> Vec<usize> {
    let mut grid = Vec::new();
    let mut n = 1;
    while n <= horizon {
        grid.push(n);
        n *= 2;
    }
    if grid.last() != Some(&horizon) && horizon > 0 {
        grid.push(horizon);
    }
    grid
}

/// Sum over communicating classes `C` of `pi(C) |E_pi[f | C]|^2`.
pub fn kernel_projection_mass(chain: &ReversibleChain, f: &Observable) -> f64 {
    chain
        .components()
        .iter()
        .map(|class| {
            let weight: f64 = class.iter().map(|&i| chain.pi()[i]).sum();
            (0..f.dim())
                .map(|c| {
                    let s: f64 = class.iter().map(|&i| chain.pi()[i] * f.value(i)[c]).sum();
                    s * s / weight
                })
                .sum::<f64>()
        })
        .sum()
}

pub fn check_conditions(chain: &ReversibleChain, f: &Observable, probe_horizon: usize) -> Result<ConditionReport> {
    let decomposition = SpectralDecomposition::new(chain)?;
    check_conditions_with(chain, &decomposition, f, probe_horizon)
}

pub fn check_conditions_with(
    chain: &ReversibleChain,
    decomposition: &SpectralDecomposition,
    f: &Observable,
    probe_horizon: usize,
) -> Result<ConditionReport> {
    chain.check_observable(f)?;
    if f.dim() != 1 {
        return Err(Error::InvalidObservable {
            id: "check-conditions",
            reason: "the variance conditions are stated for scalar observables",
        });
    }
    let probe_horizon = probe_horizon.max(1);
    let sm: SpectralMeasure = decomposition.measure(f);
    let unit_mass = sm.unit_mass();
    let atom_free = !sm.has_unit_mass();

    let table = PowerTable::new(chain, f, probe_horizon)?;
    let gamma = autocovariances(chain, &table, probe_horizon);
    let grid = dyadic_grid(probe_horizon);

    let mut running = 0.0;
    let mut a_partial_sums = Vec::with_capacity(grid.len());
    let mut next = grid.iter().peekable();
    for (k, g) in gamma.iter().enumerate().skip(1) {
        running += g;
        if next.peek() == Some(&&k) {
            a_partial_sums.push((k, running));
            next.next();
        }
    }

    let b_sup = grid
        .iter()
        .map(|&n| variance_growth_from(&gamma, n))
        .fold(f64::NEG_INFINITY, f64::max);

    let c_sigma2 = if atom_free {
        gamma[0] + 2.0 * sm.integrate_off_unit(|t| t / (1.0 - t))
    } else {
        f64::INFINITY
    };
    let c_sigma2_integral = sm.integrate_off_unit(|t| (1.0 + t) / (1.0 - t));
    let b_bound = if atom_free {
        c_sigma2 + 4.0 * sm.negative_first_moment()
    } else {
        f64::INFINITY
    };
    let d_integral = dl_integral(&sm);
    let e_kernel_mass = kernel_projection_mass(chain, f);

    Ok(ConditionReport {
        a_partial_sums,
        a_bounded: atom_free,
        b_sup,
        b_bound,
        b_bounded: b_bound.is_finite(),
        c_sigma2,
        c_sigma2_integral,
        c_finite: c_sigma2.is_finite(),
        d_integral,
        d_finite: d_integral.is_finite(),
        e_kernel_mass,
        e_member: e_kernel_mass <= MASS_TOL,
        unit_mass,
        components: chain.components().len(),
    })
}
