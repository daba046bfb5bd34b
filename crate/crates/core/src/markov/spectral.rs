use alloc::vec::Vec;

use super::chain::{Observable, ReversibleChain};
use super::jacobi::{symmetric_eigen, SymmetricEigen};
use crate::Result;

/// Mass above this counts as genuine.
pub const MASS_TOL: f64 = 1e-14;
/// Eigenvalues at or above `1 - UNIT_TOL` count as unit eigenvalues.
pub const UNIT_TOL: f64 = 1e-12;
/// Eigenvalues closer than this are merged into one atom.
pub const MERGE_TOL: f64 = 1e-10;
/// Clamping slack around `[-1, 1]`.
pub const CLAMP_TOL: f64 = 1e-10;

/// Eigendecomposition of the symmetrized kernel, reusable across
/// observables.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    eigen: SymmetricEigen,
    root_pi: Vec<f64>,
}

impl SpectralDecomposition {
    pub fn new(chain: &ReversibleChain) -> Result<Self> {
        let m = chain.states();
        let eigen = symmetric_eigen(&chain.symmetrized(), m)?;
        Ok(Self {
            eigen,
            root_pi: chain.pi().iter().map(|p| libm::sqrt(*p)).collect(),
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigen.values
    }

    pub fn sweeps(&self) -> usize {
        self.eigen.sweeps
    }

    pub fn off_norm(&self) -> f64 {
        self.eigen.off_norm
    }

    /// `pi`-orthonormal eigenfunction `v_k = D^{-1/2} u_k`.
    pub fn eigenfunction(&self, k: usize) -> Vec<f64> {
        self.eigen
            .vector(k)
            .iter()
            .zip(&self.root_pi)
            .map(|(u, r)| u / r)
            .collect()
    }

    /// `sum_c <f_c, v_k>_pi^2` for each eigenvector `k`.
    pub fn masses(&self, f: &Observable) -> Vec<f64> {
        let d = f.dim();
        (0..self.eigen.size)
            .map(|k| {
                let u = self.eigen.vector(k);
                (0..d)
                    .map(|c| {
                        let proj: f64 = (0..self.eigen.size)
                            .map(|x| self.root_pi[x] * f.value(x)[c] * u[x])
                            .sum();
                        proj * proj
                    })
                    .sum()
            })
            .collect()
    }

    pub fn measure(&self, f: &Observable) -> SpectralMeasure {
        SpectralMeasure::from_atoms(self.eigen.values.iter().copied().zip(self.masses(f)).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralAtom {
    pub lambda: f64,
    pub mass: f64,
}

/// Atoms of `rho_f`, sorted by `lambda` descending, with near-duplicate
/// eigenvalues merged and exactly-zero masses dropped.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpectralMeasure {
    atoms: Vec<SpectralAtom>,
}

impl SpectralMeasure {
    pub fn from_atoms(mut raw: Vec<(f64, f64)>) -> Self {
        raw.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut atoms: Vec<SpectralAtom> = Vec::new();
        let mut group_start = f64::NAN;
        let mut weighted = 0.0;
        let mut count = 0usize;
        for (lambda, mass) in raw {
            let lambda = lambda.clamp(-1.0 - CLAMP_TOL, 1.0 + CLAMP_TOL).clamp(-1.0, 1.0);
            match atoms.last_mut() {
                Some(last) if group_start - lambda <= MERGE_TOL => {
                    last.mass += mass;
                    weighted += lambda;
                    count += 1;
                    last.lambda = weighted / count as f64;
                }
                _ => {
                    group_start = lambda;
                    weighted = lambda;
                    count = 1;
                    atoms.push(SpectralAtom { lambda, mass });
                }
            }
        }
        atoms.retain(|a| a.mass > 0.0);
        Self { atoms }
    }

    pub fn atoms(&self) -> &[SpectralAtom] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }

    /// `int t^k d rho`.
    pub fn moment(&self, k: usize) -> f64 {
        self.atoms.iter().map(|a| a.mass * libm::pow(a.lambda, k as f64)).sum()
    }

    /// Mass at eigenvalues `>= 1 - 1e-12`.
    pub fn unit_mass(&self) -> f64 {
        self.atoms.iter().filter(|a| is_unit(a.lambda)).map(|a| a.mass).sum()
    }

    /// Mass at eigenvalues `<= -1 + 1e-12`.
    pub fn minus_one_mass(&self) -> f64 {
        self.atoms.iter().filter(|a| a.lambda <= -1.0 + UNIT_TOL).map(|a| a.mass).sum()
    }

    pub fn has_unit_mass(&self) -> bool {
        self.unit_mass() > MASS_TOL
    }

    /// `sum mass * h(lambda)` over atoms away from 1; `+inf` if there is
    /// genuine unit mass. Negligible unit mass is ignored.
    pub fn integrate_off_unit(&self, h: impl Fn(f64) -> f64) -> f64 {
        if self.has_unit_mass() {
            return f64::INFINITY;
        }
        self.atoms
            .iter()
            .filter(|a| !is_unit(a.lambda))
            .map(|a| a.mass * h(a.lambda))
            .sum()
    }

    /// `int |t| 1{t < 0} d rho`.
    pub fn negative_first_moment(&self) -> f64 {
        self.atoms.iter().filter(|a| a.lambda < 0.0).map(|a| -a.lambda * a.mass).sum()
    }
}

fn is_unit(lambda: f64) -> bool {
    lambda >= 1.0 - UNIT_TOL
}

/// `int 1/(1-t) d rho`, `+inf` iff some atom with mass `> 1e-14` sits at
/// `lambda >= 1 - 1e-12`.
pub fn dl_integral(sm: &SpectralMeasure) -> f64 {
    sm.integrate_off_unit(|t| 1.0 / (1.0 - t))
}

pub fn spectral_measure(chain: &ReversibleChain, f: &Observable) -> Result<SpectralMeasure> {
    chain.check_observable(f)?;
    Ok(SpectralDecomposition::new(chain)?.measure(f))
}
