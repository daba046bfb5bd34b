//! Weight sequences `a_j` and the partial-sum statistics derived from them.
//!
//! With `s_j = a_1 + ... + a_j` (`s_0 = 0`) and `s*_k = max_{j<=k} |s_j|`,
//! the maximal inequalities consume
//!
//! ```text
//! b_k = max( (s*_{4k})^2 / k , s_k^2 - s_{k-1}^2 )
//! ```
//!
//! and, for reversible chains, the same construction applied to the even
//! weights `a_2, a_4, ...` (`s^e`, `b^e`) and the odd weights `a_1, a_3, ...`
//! (`s^o`, `b^o`), combined as `b*_k = max(b^e_k, b^o_k)`.
//!
//! `b` up to horizon `n` reads the weights up to index `4n`; the even/odd
//! variants read up to `8n`. [`WeightStats::compute`] checks that reach up
//! front.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum WeightSequence {
    /// `a_j = c`.
    Constant(f64),
    /// `a_j = j^alpha`.
    Power(f64),
    /// `a_j = list[j - 1]`; evaluation past the end is an error.
    Explicit(Vec<f64>),
    /// `a_j = (-1)^{j+1} |m_j|` where `m_j` comes from the inner rule.
    Alternating(Box<WeightSequence>),
}

impl WeightSequence {
    pub fn alternating(inner: WeightSequence) -> Self {
        Self::Alternating(Box::new(inner))
    }

    pub fn zero() -> Self {
        Self::Constant(0.0)
    }

    /// `a_j` for `j >= 1`.
    pub fn eval(&self, j: usize) -> Result<f64> {
        if j == 0 {
            return Err(Error::IndexOutOfRange {
                what: "weight index (weights start at 1)",
                index: 0,
                max: usize::MAX,
            });
        }
        let v = match self {
            Self::Constant(c) => *c,
            Self::Power(alpha) => libm::pow(j as f64, *alpha),
            Self::Explicit(list) => *list.get(j - 1).ok_or(Error::WeightIndex { index: j, len: list.len() })?,
            Self::Alternating(inner) => {
                let m = inner.eval(j)?.abs();
                if j % 2 == 1 {
                    m
                } else {
                    -m
                }
            }
        };
        if !v.is_finite() {
            return Err(Error::NonFinite { what: "weight value" });
        }
        Ok(v)
    }

    /// `a_1..=a_len`.
    pub fn values(&self, len: usize) -> Result<Vec<f64>> {
        (1..=len).map(|j| self.eval(j)).collect()
    }

    /// How many indices this sequence can serve (`None` = unbounded).
    pub fn reach(&self) -> Option<usize> {
        match self {
            Self::Explicit(list) => Some(list.len()),
            Self::Alternating(inner) => inner.reach(),
            _ => None,
        }
    }
}

/// `s`, `s*` and `b` for one weight list. Index `k` holds the value at `k`;
/// index 0 holds the `s_0 = 0` convention.
#[derive(Debug, Clone, PartialEq)]
pub struct SumStats {
    pub s: Vec<f64>,
    pub s_star: Vec<f64>,
    pub b: Vec<f64>,
}

impl SumStats {
    /// `weights[i]` is the weight of index `i + 1`; needs `4n` of them.
    fn from_weights(weights: &[f64], n: usize) -> Self {
        let reach = 4 * n;
        debug_assert!(weights.len() >= reach);
        let mut s = Vec::with_capacity(reach + 1);
        let mut s_star = Vec::with_capacity(reach + 1);
        s.push(0.0);
        s_star.push(0.0);
        let mut acc = 0.0;
        let mut best: f64 = 0.0;
        for &a in &weights[..reach] {
            acc += a;
            best = best.max(acc.abs());
            s.push(acc);
            s_star.push(best);
        }
        let mut b = Vec::with_capacity(n + 1);
        b.push(0.0);
        for k in 1..=n {
            let dyadic = s_star[4 * k] * s_star[4 * k] / k as f64;
            let increment = s[k] * s[k] - s[k - 1] * s[k - 1];
            b.push(dyadic.max(increment));
        }
        Self { s, s_star, b }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParityStats {
    pub even: SumStats,
    pub odd: SumStats,
    /// `b*_k = max(b^e_k, b^o_k)`, index 0 unused.
    pub b_star: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightStats {
    pub n: usize,
    pub main: SumStats,
    pub parity: Option<ParityStats>,
}

impl WeightStats {
    /// Full statistics up to horizon `n`, including even/odd variants
    /// (weights read up to index `8n`).
    pub fn compute(w: &WeightSequence, n: usize) -> Result<Self> {
        Self::build(w, n, true)
    }

    /// `s`, `s*`, `b` only (weights read up to index `4n`).
    pub fn compute_basic(w: &WeightSequence, n: usize) -> Result<Self> {
        Self::build(w, n, false)
    }

    fn build(w: &WeightSequence, n: usize, parity: bool) -> Result<Self> {
        if n == 0 {
            return Err(Error::IndexOutOfRange {
                what: "weight horizon",
                index: 0,
                max: usize::MAX,
            });
        }
        let reach = if parity { 8 * n } else { 4 * n };
        if let Some(len) = w.reach() {
            if len < reach {
                return Err(Error::WeightIndex { index: reach, len });
            }
        }
        let a = w.values(reach)?;
        let main = SumStats::from_weights(&a, n);
        let parity = parity.then(|| {
            let even: Vec<f64> = a.iter().skip(1).step_by(2).copied().collect();
            let odd: Vec<f64> = a.iter().step_by(2).copied().collect();
            let even = SumStats::from_weights(&even, n);
            let odd = SumStats::from_weights(&odd, n);
            let b_star = even.b.iter().zip(&odd.b).map(|(e, o)| e.max(*o)).collect();
            ParityStats { even, odd, b_star }
        });
        Ok(Self { n, main, parity })
    }

    pub fn s(&self, k: usize) -> f64 {
        self.main.s[k]
    }

    pub fn s_star(&self, k: usize) -> f64 {
        self.main.s_star[k]
    }

    pub fn b(&self, k: usize) -> f64 {
        self.main.b[k]
    }

    pub fn b_star(&self, k: usize) -> Option<f64> {
        self.parity.as_ref().map(|p| p.b_star[k])
    }

    /// True when every weight read so far is zero.
    pub fn is_degenerate(&self) -> bool {
        self.main.s_star.last().is_some_and(|&m| m == 0.0)
            && self.parity.as_ref().map_or(true, |p| {
                p.even.s_star.last() == Some(&0.0) && p.odd.s_star.last() == Some(&0.0)
            })
    }
}
