//! Cyclic Jacobi eigensolver for dense symmetric matrices.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

pub const MAX_SWEEPS: usize = 100;
pub const RELATIVE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricEigen {
    pub size: usize,
    /// Eigenvalues in the order of the diagonal after the last sweep.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors, vector `k` at `vectors[k*size..(k+1)*size]`.
    pub vectors: Vec<f64>,
    pub sweeps: usize,
    /// Off-diagonal Frobenius norm at exit.
    pub off_norm: f64,
}

impl SymmetricEigen {
    pub fn vector(&self, k: usize) -> &[f64] {
        &self.vectors[k * self.size..(k + 1) * self.size]
    }
}

fn off_diagonal_norm(a: &[f64], m: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..m {
        for j in 0..m {
            if i != j {
                acc += a[i * m + j] * a[i * m + j];
            }
        }
    }
    libm::sqrt(acc)
}

/// Diagonalizes the row-major symmetric `m x m` matrix `a`. Converges when
/// the off-diagonal Frobenius norm is at most `1e-12 * |a|_F`; gives up after
/// 100 sweeps.
pub fn symmetric_eigen(a: &[f64], m: usize) -> Result<SymmetricEigen> {
    if a.len() != m * m {
        return Err(Error::DimensionMismatch {
            what: "symmetric matrix storage",
            expected: m * m,
            got: a.len(),
        });
    }
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { what: "symmetric matrix" });
    }
    let mut a = a.to_vec();
    let mut v = vec![0.0; m * m];
    for i in 0..m {
        v[i * m + i] = 1.0;
    }
    let frob = libm::sqrt(a.iter().map(|x| x * x).sum::<f64>());
    let target = RELATIVE_TOL * frob;
    let mut off = off_diagonal_norm(&a, m);
    let mut sweeps = 0;
    while off > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, residual: off });
        }
        sweeps += 1;
        for p in 0..m {
            for q in p + 1..m {
                let apq = a[p * m + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * m + q] - a[p * m + p]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + libm::sqrt(theta * theta + 1.0))
                } else {
                    -1.0 / (-theta + libm::sqrt(theta * theta + 1.0))
                };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..m {
                    let akp = a[k * m + p];
                    let akq = a[k * m + q];
                    a[k * m + p] = c * akp - s * akq;
                    a[k * m + q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let apk = a[p * m + k];
                    let aqk = a[q * m + k];
                    a[p * m + k] = c * apk - s * aqk;
                    a[q * m + k] = s * apk + c * aqk;
                }
                a[p * m + q] = 0.0;
                a[q * m + p] = 0.0;
                for k in 0..m {
                    let vkp = v[k * m + p];
                    let vkq = v[k * m + q];
                    v[k * m + p] = c * vkp - s * vkq;
                    v[k * m + q] = s * vkp + c * vkq;
                }
            }
        }
        off = off_diagonal_norm(&a, m);
    }
    let values = (0..m).map(|i| a[i * m + i]).collect();
    let mut vectors = vec![0.0; m * m];
    for k in 0..m {
        for i in 0..m {
            vectors[k * m + i] = v[i * m + k];
        }
    }
    Ok(SymmetricEigen {
        size: m,
        values,
        vectors,
        sweeps,
        off_norm: off,
    })
}
