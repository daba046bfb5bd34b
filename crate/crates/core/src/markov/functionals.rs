use alloc::vec::Vec;

use super::chain::{Observable, ReversibleChain};
use crate::vecmath::norm_sq;
use crate::weights::WeightSequence;
use crate::Result;

/// `f, Qf, ..., Q^K f` for one chain and observable, computed once.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerTable {
    powers: Vec<Observable>,
}

impl PowerTable {
    pub fn new(chain: &ReversibleChain, f: &Observable, max_power: usize) -> Result<Self> {
        chain.check_observable(f)?;
        let mut powers = Vec::with_capacity(max_power + 1);
        powers.push(f.clone());
        for k in 1..=max_power {
            let next = chain.apply(&powers[k - 1]);
            powers.push(next);
        }
        Ok(Self { powers })
    }

    pub fn max_power(&self) -> usize {
        self.powers.len() - 1
    }

    /// `Q^k f`; panics past the table.
    pub fn get(&self, k: usize) -> &Observable {
        &self.powers[k]
    }

    pub fn dim(&self) -> usize {
        self.powers[0].dim()
    }
}

/// `Q^k f`.
pub fn apply_power(chain: &ReversibleChain, f: &Observable, k: usize) -> Result<Observable> {
    Ok(PowerTable::new(chain, f, k)?.powers.pop().expect("table holds f"))
}

/// `E_pi <f, Q^k f>`, summed over coordinates.
pub fn autocovariance(chain: &ReversibleChain, f: &Observable, k: usize) -> f64 {
    let qk = apply_power(chain, f, k).expect("observable checked by caller");
    chain.inner(f, &qk)
}

/// `E_pi <f, Q^k f>` for `k = 0..=max_lag`.
pub fn autocovariances(chain: &ReversibleChain, table: &PowerTable, max_lag: usize) -> Vec<f64> {
    (0..=max_lag).map(|k| chain.inner(table.get(0), table.get(k))).collect()
}

/// `E S_n^2 / n` for the stationary sum `S_n = f(xi_1) + ... + f(xi_n)`:
/// `gamma_0 + (2/n) sum_{k<n} (n - k) gamma_k`.
pub fn variance_growth(chain: &ReversibleChain, f: &Observable, n: usize) -> Result<f64> {
    let table = PowerTable::new(chain, f, n.saturating_sub(1))?;
    Ok(variance_growth_from(&autocovariances(chain, &table, n.saturating_sub(1)), n))
}

/// `E S_n^2 / n` from precomputed autocovariances `gamma_0..gamma_{n-1}`.
pub fn variance_growth_from(gamma: &[f64], n: usize) -> f64 {
    let tail: f64 = (1..n).map(|k| (n - k) as f64 * gamma[k]).sum();
    gamma[0] + 2.0 * tail / n as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSeries {
    /// `g_k = sum_{j<=k} a_j Q^j f`, `k = 1..n`.
    pub partial: Vec<Observable>,
    /// `E_pi max_{k<=n} |g_k|^2`.
    pub exact_max: f64,
}

pub fn weighted_series(chain: &ReversibleChain, f: &Observable, w: &WeightSequence, n: usize) -> Result<WeightedSeries> {
    let table = PowerTable::new(chain, f, n)?;
    weighted_series_from(chain, &table, w, n)
}

pub fn weighted_series_from(
    chain: &ReversibleChain,
    table: &PowerTable,
    w: &WeightSequence,
    n: usize,
) -> Result<WeightedSeries> {
    let mut running = Observable::zeros(chain.states(), table.dim());
    let mut partial = Vec::with_capacity(n);
    for j in 1..=n {
        running.add_scaled(w.eval(j)?, table.get(j));
        partial.push(running.clone());
    }
    let exact_max = max_square_functional(chain, &partial);
    Ok(WeightedSeries { partial, exact_max })
}

/// `E_pi max_k |g_k|^2` over per-state deterministic functions; 0 for an
/// empty list.
pub fn max_square_functional(chain: &ReversibleChain, terms: &[Observable]) -> f64 {
    chain
        .pi()
        .iter()
        .enumerate()
        .map(|(i, &p)| p * terms.iter().map(|g| norm_sq(g.value(i))).fold(0.0, f64::max))
        .sum()
}

/// Max over states of
/// `|sum_{j<=2n} a_j Q^j f - sum_{j<=n} a_{2j} Q^j(Q^j f) - sum_{j<n} a_{2j+1} Q^{j+1}(Q^j f)|`.
pub fn lemma45_residual(chain: &ReversibleChain, f: &Observable, w: &WeightSequence, n: usize) -> Result<f64> {
    let table = PowerTable::new(chain, f, 2 * n)?;
    let mut lhs = Observable::zeros(chain.states(), f.dim());
    for j in 1..=2 * n {
        lhs.add_scaled(w.eval(j)?, table.get(j));
    }
    let mut rhs = Observable::zeros(chain.states(), f.dim());
    let mut inner = f.clone();
    for j in 0..=n {
        // inner = Q^j f; repeatedly apply Q to it for the outer power.
        let mut outer = inner.clone();
        for _ in 0..j {
            outer = chain.apply(&outer);
        }
        if j >= 1 {
            rhs.add_scaled(w.eval(2 * j)?, &outer);
        }
        if j < n {
            rhs.add_scaled(w.eval(2 * j + 1)?, &chain.apply(&outer));
        }
        inner = chain.apply(&inner);
    }
    Ok(lhs.sub(&rhs).max_abs_norm())
}

/// Even/odd split of the weighted maximal functional.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitFunctionals {
    /// `E_pi max_{k<=2n} |sum_{j<=k} a_j Q^j f|^2`.
    pub full: f64,
    /// `E_pi max_{k<=n} |sum_{j<=k} a_{2j} Q^{2j} f|^2`.
    pub even: f64,
    /// `E_pi max_{k<=n} |sum_{j<=k} a_{2j-1} Q^{2j-1} f|^2`.
    pub odd: f64,
}

impl SplitFunctionals {
    /// `(sqrt(even) + sqrt(odd))^2`, which dominates `full` because the
    /// per-state maxima satisfy `max|g| <= max|even| + max|odd|`.
    pub fn split_bound(&self) -> f64 {
        let s = libm::sqrt(self.even) + libm::sqrt(self.odd);
        s * s
    }
}

pub fn split_functionals(chain: &ReversibleChain, f: &Observable, w: &WeightSequence, n: usize) -> Result<SplitFunctionals> {
    let table = PowerTable::new(chain, f, 2 * n)?;
    let full = weighted_series_from(chain, &table, w, 2 * n)?.exact_max;
    let mut even = Observable::zeros(chain.states(), f.dim());
    let mut odd = Observable::zeros(chain.states(), f.dim());
    let mut even_partial = Vec::with_capacity(n);
    let mut odd_partial = Vec::with_capacity(n);
    for j in 1..=n {
        even.add_scaled(w.eval(2 * j)?, table.get(2 * j));
        odd.add_scaled(w.eval(2 * j - 1)?, table.get(2 * j - 1));
        even_partial.push(even.clone());
        odd_partial.push(odd.clone());
    }
    Ok(SplitFunctionals {
        full,
        even: max_square_functional(chain, &even_partial),
        odd: max_square_functional(chain, &odd_partial),
    })
}
