use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::jacobi::symmetric_eigen;
use crate::finite_prob::RandomVector;
use crate::seed::rng_for;
use crate::{Error, Result};

/// `f: S -> R^dim`, stored state-major.
pub type Observable = RandomVector;

const ROW_SUM_TOL: f64 = 1e-12;
const BALANCE_TOL: f64 = 1e-10;
const STATIONARITY_TOL: f64 = 1e-10;
const PI_SUM_TOL: f64 = 1e-9;

/// A finite stationary reversible chain: kernel `Q` and stationary `pi`
/// with `pi_i Q_ij = pi_j Q_ji`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReversibleChain {
    states: usize,
    pi: Vec<f64>,
    kernel: Vec<f64>,
}

impl ReversibleChain {
    /// Validates `rows` and `pi`. When `pi` is absent it is computed from
    /// the symmetrized kernel `sqrt(Q_ij Q_ji)`, whose unit eigenvector is
    /// `sqrt(pi)`; this needs an irreducible kernel.
    pub fn new(rows: Vec<Vec<f64>>, pi: Option<Vec<f64>>) -> Result<Self> {
        let states = rows.len();
        if states == 0 {
            return Err(Error::Empty { what: "transition kernel" });
        }
        let mut kernel = Vec::with_capacity(states * states);
        for (row, values) in rows.iter().enumerate() {
            if values.len() != states {
                return Err(Error::DimensionMismatch {
                    what: "kernel row length",
                    expected: states,
                    got: values.len(),
                });
            }
            for (col, &value) in values.iter().enumerate() {
                if !value.is_finite() {
                    return Err(Error::NonFinite { what: "transition kernel" });
                }
                if value < 0.0 {
                    return Err(Error::NegativeEntry { row, col, value });
                }
            }
            let sum: f64 = values.iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::RowSum { row, sum });
            }
            kernel.extend_from_slice(values);
        }
        let pi = match pi {
            Some(pi) => normalize_pi(pi, states)?,
            None => stationary_from_symmetrizer(states, &kernel)?,
        };
        let chain = Self { states, pi, kernel };
        chain.validate()?;
        Ok(chain)
    }

    fn validate(&self) -> Result<()> {
        let m = self.states;
        for i in 0..m {
            for j in i + 1..m {
                let residual = (self.pi[i] * self.q(i, j) - self.pi[j] * self.q(j, i)).abs();
                if residual > BALANCE_TOL {
                    return Err(Error::DetailedBalance { i, j, residual });
                }
            }
        }
        let residual = (0..m)
            .map(|j| ((0..m).map(|i| self.pi[i] * self.q(i, j)).sum::<f64>() - self.pi[j]).abs())
            .fold(0.0, f64::max);
        if residual > STATIONARITY_TOL {
            return Err(Error::NotStationary { residual });
        }
        Ok(())
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn pi(&self) -> &[f64] {
        &self.pi
    }

    /// `Q(i, j)`.
    pub fn q(&self, i: usize, j: usize) -> f64 {
        self.kernel[i * self.states + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.kernel[i * self.states..(i + 1) * self.states]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.states).map(|i| self.row(i).to_vec()).collect()
    }

    /// `max_{i,j} |pi_i Q_ij - pi_j Q_ji|`.
    pub fn balance_residual(&self) -> f64 {
        let m = self.states;
        let mut worst: f64 = 0.0;
        for i in 0..m {
            for j in 0..m {
                worst = worst.max((self.pi[i] * self.q(i, j) - self.pi[j] * self.q(j, i)).abs());
            }
        }
        worst
    }

    /// `M = D^{1/2} Q D^{-1/2}`, row-major; symmetric by detailed balance.
    pub fn symmetrized(&self) -> Vec<f64> {
        let m = self.states;
        let root: Vec<f64> = self.pi.iter().map(|p| libm::sqrt(*p)).collect();
        let mut out = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                out[i * m + j] = root[i] * self.q(i, j) / root[j];
            }
        }
        // Average with the transpose to remove round-off asymmetry.
        for i in 0..m {
            for j in i + 1..m {
                let avg = 0.5 * (out[i * m + j] + out[j * m + i]);
                out[i * m + j] = avg;
                out[j * m + i] = avg;
            }
        }
        out
    }

    /// Connected components of the graph `{i ~ j : Q_ij > 0}`, each sorted.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let m = self.states;
        let mut label = vec![usize::MAX; m];
        let mut out = Vec::new();
        for start in 0..m {
            if label[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![start];
            let mut members = Vec::new();
            label[start] = id;
            while let Some(i) = stack.pop() {
                members.push(i);
                for j in 0..m {
                    if label[j] == usize::MAX && (self.q(i, j) > 0.0 || self.q(j, i) > 0.0) {
                        label[j] = id;
                        stack.push(j);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_irreducible(&self) -> bool {
        self.components().len() == 1
    }

    /// `Qf`.
    pub fn apply(&self, f: &Observable) -> Observable {
        let m = self.states;
        let d = f.dim();
        let src = f.as_slice();
        let mut out = vec![0.0; m * d];
        for i in 0..m {
            let row = self.row(i);
            let dst = &mut out[i * d..(i + 1) * d];
            for (j, &q) in row.iter().enumerate() {
                if q != 0.0 {
                    for (o, v) in dst.iter_mut().zip(&src[j * d..(j + 1) * d]) {
                        *o += q * v;
                    }
                }
            }
        }
        RandomVector::new(d, out).expect("kernel application keeps values finite")
    }

    /// `E_pi f`, per coordinate.
    pub fn mean(&self, f: &Observable) -> Vec<f64> {
        let d = f.dim();
        let mut out = vec![0.0; d];
        for (i, &p) in self.pi.iter().enumerate() {
            for (o, v) in out.iter_mut().zip(f.value(i)) {
                *o += p * v;
            }
        }
        out
    }

    /// `f - E_pi f`.
    pub fn center(&self, f: &Observable) -> Observable {
        let mean = self.mean(f);
        f.sub(&RandomVector::constant(self.states, &mean))
    }

    /// `E_pi <f, g>`.
    pub fn inner(&self, f: &Observable, g: &Observable) -> f64 {
        self.pi
            .iter()
            .enumerate()
            .map(|(i, &p)| p * f.value(i).iter().zip(g.value(i)).map(|(a, b)| a * b).sum::<f64>())
            .sum()
    }

    pub fn check_observable(&self, f: &Observable) -> Result<()> {
        if f.atoms() != self.states {
            return Err(Error::DimensionMismatch {
                what: "observable length (states)",
                expected: self.states,
                got: f.atoms(),
            });
        }
        Ok(())
    }
}

fn normalize_pi(pi: Vec<f64>, states: usize) -> Result<Vec<f64>> {
    if pi.len() != states {
        return Err(Error::DimensionMismatch {
            what: "pi length",
            expected: states,
            got: pi.len(),
        });
    }
    for (atom, &value) in pi.iter().enumerate() {
        if !value.is_finite() || value <= 0.0 {
            return Err(Error::NonPositiveProbability { atom, value });
        }
    }
    let sum: f64 = pi.iter().sum();
    if (sum - 1.0).abs() > PI_SUM_TOL {
        return Err(Error::ProbabilitySum { sum });
    }
    Ok(pi.into_iter().map(|p| p / sum).collect())
}

fn stationary_from_symmetrizer(m: usize, kernel: &[f64]) -> Result<Vec<f64>> {
    let mut s = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            s[i * m + j] = libm::sqrt(kernel[i * m + j] * kernel[j * m + i]);
        }
    }
    let eig = symmetric_eigen(&s, m)?;
    let unit = eig.values.iter().filter(|&&l| l >= 1.0 - 1e-9).count();
    if unit != 1 {
        return Err(Error::InvalidModel {
            reason: format!(
                "pi cannot be inferred: the symmetrized kernel has {unit} eigenvalues at 1 \
                 (reducible or non-reversible chain); supply pi explicitly"
            ),
        });
    }
    let top = eig
        .values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("nonempty spectrum");
    let pi: Vec<f64> = (0..m).map(|x| eig.vector(top)[x] * eig.vector(top)[x]).collect();
    if let Some((atom, &value)) = pi.iter().enumerate().find(|(_, &p)| p <= 0.0) {
        return Err(Error::NonPositiveProbability { atom, value });
    }
    let sum: f64 = pi.iter().sum();
    Ok(pi.into_iter().map(|p| p / sum).collect())
}

/// Generators of reversible chains.
#[derive(Debug, Clone, PartialEq)]
pub enum ChainModel {
    /// `Q = [[1-p, p], [q, 1-q]]`, `pi = (q, p)/(p+q)`.
    TwoState { p: f64, q: f64 },
    /// `up[i] = Q(i, i+1)`, `down[i] = Q(i+1, i)`, remaining mass on the
    /// diagonal.
    BirthDeath { up: Vec<f64>, down: Vec<f64> },
    /// Ring of `m` states holding with probability `laziness`, otherwise
    /// stepping to either neighbour.
    LazyRing { m: usize, laziness: f64 },
    /// Random walk on a symmetric non-negative weight matrix.
    WeightedGraph { weights: Vec<Vec<f64>> },
    /// Metropolis chain for `target` with a symmetric stochastic proposal.
    Metropolis { target: Vec<f64>, proposal: Vec<Vec<f64>> },
}

fn invalid(reason: alloc::string::String) -> Error {
    Error::InvalidModel { reason }
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(invalid(format!("{name} = {v} must lie in [0, 1]")));
    }
    Ok(())
}

pub fn make_chain(model: &ChainModel) -> Result<ReversibleChain> {
    match model {
        ChainModel::TwoState { p, q } => {
            check_unit("p", *p)?;
            check_unit("q", *q)?;
            let pi = if p + q > 0.0 {
                vec![q / (p + q), p / (p + q)]
            } else {
                vec![0.5, 0.5]
            };
            ReversibleChain::new(vec![vec![1.0 - p, *p], vec![*q, 1.0 - q]], Some(pi))
        }
        ChainModel::BirthDeath { up, down } => {
            if up.len() != down.len() {
                return Err(invalid(format!(
                    "birth-death rates need equal lengths (up {}, down {})",
                    up.len(),
                    down.len()
                )));
            }
            let m = up.len() + 1;
            for (i, (&u, &d)) in up.iter().zip(down).enumerate() {
                if !(u > 0.0 && d > 0.0) {
                    return Err(invalid(format!("rates at edge {i} must be positive (up {u}, down {d})")));
                }
            }
            let mut rows = vec![vec![0.0; m]; m];
            for i in 0..m {
                let u = if i + 1 < m { up[i] } else { 0.0 };
                let d = if i > 0 { down[i - 1] } else { 0.0 };
                if u + d > 1.0 + ROW_SUM_TOL {
                    return Err(invalid(format!("state {i} has outflow {} > 1", u + d)));
                }
                if i + 1 < m {
                    rows[i][i + 1] = u;
                }
                if i > 0 {
                    rows[i][i - 1] = d;
                }
                rows[i][i] = (1.0 - u - d).max(0.0);
            }
            let mut pi = vec![1.0; m];
            for i in 1..m {
                pi[i] = pi[i - 1] * up[i - 1] / down[i - 1];
            }
            let total: f64 = pi.iter().sum();
            ReversibleChain::new(rows, Some(pi.into_iter().map(|p| p / total).collect()))
        }
        ChainModel::LazyRing { m, laziness } => {
            check_unit("laziness", *laziness)?;
            let m = *m;
            if m == 0 {
                return Err(invalid("ring needs at least one state".into()));
            }
            let mut rows = vec![vec![0.0; m]; m];
            for (i, row) in rows.iter_mut().enumerate() {
                row[i] += laziness;
                let step = 1.0 - laziness;
                row[(i + 1) % m] += step / 2.0;
                row[(i + m - 1) % m] += step / 2.0;
            }
            ReversibleChain::new(rows, Some(vec![1.0 / m as f64; m]))
        }
        ChainModel::WeightedGraph { weights } => {
            let m = weights.len();
            for (i, row) in weights.iter().enumerate() {
                if row.len() != m {
                    return Err(Error::DimensionMismatch {
                        what: "weight matrix row length",
                        expected: m,
                        got: row.len(),
                    });
                }
                for (j, &w) in row.iter().enumerate() {
                    if !w.is_finite() || w < 0.0 {
                        return Err(invalid(format!("weight ({i}, {j}) = {w} must be finite and non-negative")));
                    }
                    if w != weights[j][i] {
                        return Err(Error::NonSymmetricWeights { i, j });
                    }
                }
            }
            let degree: Vec<f64> = weights.iter().map(|r| r.iter().sum()).collect();
            if let Some(i) = degree.iter().position(|&d| d <= 0.0) {
                return Err(invalid(format!("state {i} has no incident weight")));
            }
            let total: f64 = degree.iter().sum();
            let rows = weights
                .iter()
                .zip(&degree)
                .map(|(r, d)| r.iter().map(|w| w / d).collect())
                .collect();
            ReversibleChain::new(rows, Some(degree.iter().map(|d| d / total).collect()))
        }
        ChainModel::Metropolis { target, proposal } => {
            let m = target.len();
            let target = normalize_pi(target.clone(), m)?;
            if proposal.len() != m {
                return Err(Error::DimensionMismatch {
                    what: "proposal rows",
                    expected: m,
                    got: proposal.len(),
                });
            }
            for i in 0..m {
                if proposal[i].len() != m {
                    return Err(Error::DimensionMismatch {
                        what: "proposal row length",
                        expected: m,
                        got: proposal[i].len(),
                    });
                }
                let sum: f64 = proposal[i].iter().sum();
                if (sum - 1.0).abs() > ROW_SUM_TOL {
                    return Err(Error::RowSum { row: i, sum });
                }
                for j in 0..m {
                    if proposal[i][j] < 0.0 {
                        return Err(Error::NegativeEntry {
                            row: i,
                            col: j,
                            value: proposal[i][j],
                        });
                    }
                    if (proposal[i][j] - proposal[j][i]).abs() > ROW_SUM_TOL {
                        return Err(Error::NonSymmetricWeights { i, j });
                    }
                }
            }
            let mut rows = vec![vec![0.0; m]; m];
            for i in 0..m {
                let mut off = 0.0;
                for j in 0..m {
                    if i != j {
                        let accept = (target[j] / target[i]).min(1.0);
                        rows[i][j] = proposal[i][j] * accept;
                        off += rows[i][j];
                    }
                }
                rows[i][i] = 1.0 - off;
            }
            ReversibleChain::new(rows, Some(target))
        }
    }
}

/// Families used by the random generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomFamily {
    WeightedGraph,
    BirthDeath,
    Metropolis,
}

impl RandomFamily {
    pub const ALL: [RandomFamily; 3] = [Self::WeightedGraph, Self::BirthDeath, Self::Metropolis];
}

/// A seeded irreducible reversible chain on `m >= 2` states.
pub fn random_chain(seed: u64, m: usize, family: RandomFamily) -> Result<ReversibleChain> {
    if m < 2 {
        return Err(invalid(format!("random chains need at least 2 states, got {m}")));
    }
    let mut rng = rng_for(seed);
    let model = match family {
        RandomFamily::WeightedGraph => ChainModel::WeightedGraph {
            weights: random_weights(&mut rng, m, 0..m),
        },
        RandomFamily::BirthDeath => {
            // Outflow of each state stays below 1 by capping each rate at 1/2.
            let up = (0..m - 1).map(|_| rng.gen_range(0.05..0.5)).collect();
            let down = (0..m - 1).map(|_| rng.gen_range(0.05..0.5)).collect();
            ChainModel::BirthDeath { up, down }
        }
        RandomFamily::Metropolis => {
            let target: Vec<f64> = (0..m).map(|_| rng.gen_range(0.05..1.0)).collect();
            let total: f64 = target.iter().sum();
            let hold = rng.gen_range(0.0..0.5);
            let off = (1.0 - hold) / (m - 1) as f64;
            let proposal = (0..m)
                .map(|i| (0..m).map(|j| if i == j { hold } else { off }).collect())
                .collect();
            ChainModel::Metropolis {
                target: target.into_iter().map(|t| t / total).collect(),
                proposal,
            }
        }
    };
    make_chain(&model)
}

/// A seeded weighted-graph chain with two components of sizes `m / 2` and
/// `m - m / 2`.
pub fn random_disconnected_chain(seed: u64, m: usize) -> Result<ReversibleChain> {
    if m < 4 {
        return Err(invalid(format!("disconnected chains need at least 4 states, got {m}")));
    }
    let mut rng = rng_for(seed);
    let half = m / 2;
    let mut weights = vec![vec![0.0; m]; m];
    for range in [0..half, half..m] {
        let block = random_weights(&mut rng, m, range.clone());
        for i in range.clone() {
            for j in range.clone() {
                weights[i][j] = block[i][j];
            }
        }
    }
    make_chain(&ChainModel::WeightedGraph { weights })
}

/// Symmetric weights supported on `range`, with a path through the range so
/// that it is connected, plus random extra edges and self-loops.
fn random_weights<R: Rng>(rng: &mut R, m: usize, range: core::ops::Range<usize>) -> Vec<Vec<f64>> {
    let mut w = vec![vec![0.0; m]; m];
    let density = rng.gen_range(0.1..0.6);
    for i in range.clone() {
        if i + 1 < range.end {
            let v = rng.gen_range(0.1..1.0);
            w[i][i + 1] = v;
            w[i + 1][i] = v;
        }
        for j in i..range.end {
            if (j == i || j > i + 1) && rng.gen_bool(density) {
                let v = rng.gen_range(0.05..1.0);
                w[i][j] = v;
                w[j][i] = v;
            }
        }
    }
    w
}

/// A seeded observable with entries uniform on `[-2, 2]`.
pub fn random_observable(seed: u64, m: usize, dim: usize) -> Observable {
    let mut rng = rng_for(seed);
    let values = (0..m * dim).map(|_| rng.gen_range(-2.0..2.0)).collect();
    RandomVector::new(dim, values).expect("finite draws")
}
