use crate::weights::{WeightSequence, WeightStats};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Converges,
    Diverges,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Converges => "converges",
            Self::Diverges => "diverges",
            Self::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesCriterion {
    /// `sum_{k<=n} b_k E|E^k X|^2`.
    pub partial: f64,
    pub verdict: Verdict,
}

/// Block ratio at or above which dyadic block sums are read as non-summable.
const DIVERGENCE_RATIO: f64 = 0.9;

/// Evaluates `sum_k b_k m_k` up to `n`, where `m_k = E|E^k X|^2`.
///
/// The verdict is certified `Converges` when a finite bound on the tail
/// `sum_{k>n} b_k m_k` is supplied, or when `m_n = 0` (so the tail
/// vanishes). Without a certificate it is a heuristic: `Diverges` when the
/// last three ratios of consecutive dyadic block sums
/// `sum_{2^i <= k < 2^{i+1}}` are all at least `0.9` (terms decaying no
/// faster than about `1/k`), `Inconclusive` otherwise.
pub fn series_criterion_cor33(
    w: &WeightSequence,
    second_moments: &[f64],
    n: usize,
    tail_bound: Option<f64>,
) -> Result<SeriesCriterion> {
    if n == 0 || second_moments.len() < n {
        return Err(Error::IndexOutOfRange {
            what: "criterion horizon (second moments supplied)",
            index: n,
            max: second_moments.len(),
        });
    }
    for (i, &m) in second_moments[..n].iter().enumerate() {
        let increasing = i > 0 && m > second_moments[i - 1] * (1.0 + 1e-12);
        if !m.is_finite() || m < 0.0 || increasing {
            return Err(Error::MomentsNotDecreasing { index: i + 1 });
        }
    }
    let stats = WeightStats::compute_basic(w, n)?;
    let terms: alloc::vec::Vec<f64> = (1..=n).map(|k| stats.b(k) * second_moments[k - 1]).collect();
    let partial = terms.iter().sum();

    let verdict = match tail_bound {
        Some(t) if t.is_finite() && t >= 0.0 => Verdict::Converges,
        _ if second_moments[n - 1] == 0.0 => Verdict::Converges,
        _ => dyadic_trend(&terms),
    };
    Ok(SeriesCriterion { partial, verdict })
}

fn dyadic_trend(terms: &[f64]) -> Verdict {
    let mut blocks = alloc::vec::Vec::new();
    let mut start = 1;
    while 2 * start - 1 <= terms.len() {
        blocks.push(terms[start - 1..2 * start - 1].iter().sum::<f64>());
        start *= 2;
    }
    if blocks.len() < 4 {
        return Verdict::Inconclusive;
    }
    let tail = &blocks[blocks.len() - 4..];
    let sustained = tail.windows(2).all(|p| p[0] > 0.0 && p[1] >= DIVERGENCE_RATIO * p[0]);
    if sustained {
        Verdict::Diverges
    } else {
        Verdict::Inconclusive
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;

    #[test]
    fn zero_moments_converge() {
        let r = series_criterion_cor33(&WeightSequence::Constant(1.0), &vec![0.0; 10], 10, None).unwrap();
        assert_eq!(r.partial, 0.0);
        assert_eq!(r.verdict, Verdict::Converges);
    }

    #[test]
    fn geometric_moments_with_tail_bound() {
        let n = 40;
        let m: Vec<f64> = (1..=n).map(|k| libm::pow(4.0, -(k as f64))).collect();
        // b_k = 16k for constant weights; tail 16 sum_{k>n} k 4^{-k} <= 16 (n+1) 4^{-n} * 4/3 * 4/3.
        let tail = 16.0 * (n as f64 + 1.0) * libm::pow(4.0, -(n as f64)) * 16.0 / 9.0;
        let r = series_criterion_cor33(&WeightSequence::Constant(1.0), &m, n, Some(tail)).unwrap();
        assert_eq!(r.verdict, Verdict::Converges);
        // 16 sum k 4^{-k} = 16 * (1/4) / (3/4)^2 = 64/9.
        assert!((r.partial - 64.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn inverse_square_moments_diverge() {
        let n = 1024;
        let m: Vec<f64> = (1..=n).map(|k| 1.0 / (k * k) as f64).collect();
        let r = series_criterion_cor33(&WeightSequence::Constant(1.0), &m, n, None).unwrap();
        assert_eq!(r.verdict, Verdict::Diverges);
        // partials grow like 16 ln n
        let half = series_criterion_cor33(&WeightSequence::Constant(1.0), &m, n / 2, None).unwrap();
        let slope = (r.partial - half.partial) / core::f64::consts::LN_2;
        assert!((slope - 16.0).abs() < 0.5, "slope {slope}");
    }

    #[test]
    fn fast_decay_without_certificate_is_inconclusive() {
        let n = 256;
        let m: Vec<f64> = (1..=n).map(|k| libm::pow(2.0, -(k as f64))).collect();
        let r = series_criterion_cor33(&WeightSequence::Constant(1.0), &m, n, None).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn increasing_moments_rejected() {
        let e = series_criterion_cor33(&WeightSequence::Constant(1.0), &[1.0, 2.0], 2, None);
        assert_eq!(e, Err(Error::MomentsNotDecreasing { index: 2 }));
        let e = series_criterion_cor33(&WeightSequence::Constant(1.0), &[-1.0], 1, None);
        assert_eq!(e, Err(Error::MomentsNotDecreasing { index: 1 }));
    }
}
