//! Exact probability on finite sample spaces.
//!
//! A [`FiniteProbSpace`] is a list of strictly positive atom probabilities.
//! Sub-sigma-fields are partitions of the atom set, and a
//! [`DecreasingFiltration`] is a finest-first list of partitions in which
//! every level coarsens the previous one. Conditional expectation given level
//! `j` is the probability-weighted block average over partition `j`.
//!
//! Random variables take values in `R^dim` with the Euclidean norm. Levels
//! and sequence terms are indexed from 1, matching `E^1, E^2, ...` and
//! `X_1, X_2, ...`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::vecmath::{norm_pow, norm_sq};
use crate::{Error, Result};

const PROB_SUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteProbSpace {
    probs: Vec<f64>,
}

impl FiniteProbSpace {
    /// Accepts probabilities summing to 1 within `1e-9` and renormalizes them
    /// by their sum. Zero-probability atoms are rejected.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Empty { what: "probability vector" });
        }
        for (atom, &value) in probs.iter().enumerate() {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::NonPositiveProbability { atom, value });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::ProbabilitySum { sum });
        }
        Ok(Self {
            probs: probs.into_iter().map(|p| p / sum).collect(),
        })
    }

    pub fn uniform(atoms: usize) -> Result<Self> {
        if atoms == 0 {
            return Err(Error::Empty { what: "probability vector" });
        }
        Ok(Self {
            probs: vec![1.0 / atoms as f64; atoms],
        })
    }

    pub fn atoms(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// `E|X|^p`.
    pub fn moment(&self, x: &RandomVector, p: f64) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(atom, &w)| w * norm_pow(x.value(atom), p))
            .sum()
    }

    /// `E<X, Y>` for variables of equal dimension.
    pub fn inner(&self, x: &RandomVector, y: &RandomVector) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(atom, &w)| {
                let dot: f64 = x.value(atom).iter().zip(y.value(atom)).map(|(a, b)| a * b).sum();
                w * dot
            })
            .sum()
    }

    fn check_var(&self, x: &RandomVector) -> Result<()> {
        if x.atoms() != self.atoms() {
            return Err(Error::DimensionMismatch {
                what: "random vector atom count",
                expected: self.atoms(),
                got: x.atoms(),
            });
        }
        Ok(())
    }
}

/// A partition of `0..atoms` into nonempty disjoint blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl Partition {
    /// `level` only labels error messages.
    pub fn new(atoms: usize, blocks: Vec<Vec<usize>>, level: usize) -> Result<Self> {
        let mut block_of = vec![usize::MAX; atoms];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition {
                    level,
                    reason: format!("block {b} is empty"),
                });
            }
            for &atom in block {
                if atom >= atoms {
                    return Err(Error::InvalidPartition {
                        level,
                        reason: format!("block {b} names atom {atom}, but there are only {atoms} atoms"),
                    });
                }
                if block_of[atom] != usize::MAX {
                    return Err(Error::InvalidPartition {
                        level,
                        reason: format!("block {b} repeats atom {atom} (already in block {})", block_of[atom]),
                    });
                }
                block_of[atom] = b;
            }
        }
        if let Some(atom) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(Error::InvalidPartition {
                level,
                reason: format!("atom {atom} is not covered by any block"),
            });
        }
        Ok(Self { blocks, block_of })
    }

    pub fn singletons(atoms: usize) -> Self {
        Self {
            blocks: (0..atoms).map(|a| vec![a]).collect(),
            block_of: (0..atoms).collect(),
        }
    }

    pub fn trivial(atoms: usize) -> Self {
        Self {
            blocks: vec![(0..atoms).collect()],
            block_of: vec![0; atoms],
        }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, atom: usize) -> usize {
        self.block_of[atom]
    }

    pub fn atoms(&self) -> usize {
        self.block_of.len()
    }

    /// Returns the first block of `coarser` that is not a union of blocks of
    /// `self`, or `None` when `coarser` really coarsens `self`.
    fn first_non_union_block(&self, coarser: &Partition) -> Option<usize> {
        // Each fine block must land entirely inside one coarse block.
        for block in &self.blocks {
            let target = coarser.block_of[block[0]];
            if let Some(&stray) = block.iter().find(|&&a| coarser.block_of[a] != target) {
                return Some(coarser.block_of[stray]);
            }
        }
        None
    }
}

/// Finest-first sequence of partitions `F^1 ⊇ F^2 ⊇ ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecreasingFiltration {
    partitions: Vec<Partition>,
}

impl DecreasingFiltration {
    pub fn from_blocks(atoms: usize, levels: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let partitions = levels
            .into_iter()
            .enumerate()
            .map(|(i, blocks)| Partition::new(atoms, blocks, i + 1))
            .collect::<Result<Vec<_>>>()?;
        Self::new(partitions)
    }

    pub fn new(partitions: Vec<Partition>) -> Result<Self> {
        if partitions.is_empty() {
            return Err(Error::Empty { what: "filtration" });
        }
        let atoms = partitions[0].atoms();
        for (i, pair) in partitions.windows(2).enumerate() {
            if pair[1].atoms() != atoms {
                return Err(Error::InvalidPartition {
                    level: i + 2,
                    reason: format!("covers {} atoms instead of {atoms}", pair[1].atoms()),
                });
            }
            if let Some(block) = pair[0].first_non_union_block(&pair[1]) {
                return Err(Error::NotCoarsening {
                    level: i + 2,
                    block,
                    finer: i + 1,
                });
            }
        }
        Ok(Self { partitions })
    }

    /// Appends `extra` copies of the coarsest level.
    pub fn with_constant_tail(mut self, extra: usize) -> Self {
        let last = self.partitions.last().cloned().expect("filtration is nonempty");
        self.partitions.extend(core::iter::repeat(last).take(extra));
        self
    }

    pub fn levels(&self) -> usize {
        self.partitions.len()
    }

    pub fn atoms(&self) -> usize {
        self.partitions[0].atoms()
    }

    /// Partition `j`, 1-based.
    pub fn partition(&self, j: usize) -> Result<&Partition> {
        if j == 0 || j > self.partitions.len() {
            return Err(Error::IndexOutOfRange {
                what: "filtration level",
                index: j,
                max: self.partitions.len(),
            });
        }
        Ok(&self.partitions[j - 1])
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }
}

/// An `R^dim`-valued random variable, stored atom-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomVector {
    dim: usize,
    values: Vec<f64>,
}

impl RandomVector {
    /// `values` holds `atoms * dim` entries, atom-major.
    pub fn new(dim: usize, values: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Empty { what: "random vector dimension" });
        }
        if values.len() % dim != 0 || values.is_empty() {
            return Err(Error::DimensionMismatch {
                what: "random vector storage (atoms * dim)",
                expected: dim,
                got: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { what: "random vector" });
        }
        Ok(Self { dim, values })
    }

    pub fn scalar(values: Vec<f64>) -> Result<Self> {
        Self::new(1, values)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                what: "random vector row",
                expected: dim,
                got: bad.len(),
            });
        }
        Self::new(dim, rows.iter().flatten().copied().collect())
    }

    pub fn zeros(atoms: usize, dim: usize) -> Self {
        Self {
            dim,
            values: vec![0.0; atoms * dim],
        }
    }

    pub fn constant(atoms: usize, c: &[f64]) -> Self {
        Self {
            dim: c.len(),
            values: c.iter().copied().cycle().take(atoms * c.len()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> usize {
        self.values.len() / self.dim
    }

    pub fn value(&self, atom: usize) -> &[f64] {
        &self.values[atom * self.dim..(atom + 1) * self.dim]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            dim: self.dim,
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }

    pub fn add_assign(&mut self, other: &RandomVector) {
        self.values.iter_mut().zip(&other.values).for_each(|(a, b)| *a += b);
    }

    pub fn add_scaled(&mut self, c: f64, other: &RandomVector) {
        self.values.iter_mut().zip(&other.values).for_each(|(a, b)| *a += c * b);
    }

    pub fn sub(&self, other: &RandomVector) -> Self {
        Self {
            dim: self.dim,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn max_abs_norm(&self) -> f64 {
        (0..self.atoms())
            .map(|a| libm::sqrt(norm_sq(self.value(a))))
            .fold(0.0, f64::max)
    }

    /// Exact equality of stored values across each block.
    pub fn is_measurable(&self, partition: &Partition) -> Option<usize> {
        partition.blocks().iter().position(|block| {
            let first = self.value(block[0]);
            block[1..].iter().any(|&a| self.value(a) != first)
        })
    }
}

/// `X_1, ..., X_n` with `X_j` measurable w.r.t. partition `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptedSequence {
    terms: Vec<RandomVector>,
}

impl AdaptedSequence {
    pub fn new(filtration: &DecreasingFiltration, terms: Vec<RandomVector>) -> Result<Self> {
        let Some(first) = terms.first() else {
            return Err(Error::Empty { what: "adapted sequence" });
        };
        let dim = first.dim();
        for (j, term) in terms.iter().enumerate() {
            if term.dim() != dim {
                return Err(Error::DimensionMismatch {
                    what: "adapted sequence term dimension",
                    expected: dim,
                    got: term.dim(),
                });
            }
            if term.atoms() != filtration.atoms() {
                return Err(Error::DimensionMismatch {
                    what: "adapted sequence term atom count",
                    expected: filtration.atoms(),
                    got: term.atoms(),
                });
            }
            let partition = filtration.partition(j + 1)?;
            if let Some(block) = term.is_measurable(partition) {
                return Err(Error::NotAdapted { term: j + 1, block });
            }
        }
        Ok(Self { terms })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.terms[0].dim()
    }

    pub fn terms(&self) -> &[RandomVector] {
        &self.terms
    }
}

/// `S_k` and `E^k S_k` for `k = 1..n` (index `k - 1` in each list).
#[derive(Debug, Clone, PartialEq)]
pub struct PartialSums {
    pub sums: Vec<RandomVector>,
    pub conditioned: Vec<RandomVector>,
}

/// A probability space together with a decreasing filtration on it.
#[derive(Debug, Clone, PartialEq)]
pub struct FilteredSpace {
    space: FiniteProbSpace,
    filtration: DecreasingFiltration,
}

impl FilteredSpace {
    pub fn new(space: FiniteProbSpace, filtration: DecreasingFiltration) -> Result<Self> {
        if filtration.atoms() != space.atoms() {
            return Err(Error::DimensionMismatch {
                what: "filtration atom count",
                expected: space.atoms(),
                got: filtration.atoms(),
            });
        }
        Ok(Self { space, filtration })
    }

    pub fn space(&self) -> &FiniteProbSpace {
        &self.space
    }

    pub fn filtration(&self) -> &DecreasingFiltration {
        &self.filtration
    }

    pub fn into_parts(self) -> (FiniteProbSpace, DecreasingFiltration) {
        (self.space, self.filtration)
    }

    /// `E^j X`: the block-average version of `X` over partition `j`.
    pub fn cond_expect(&self, x: &RandomVector, j: usize) -> Result<RandomVector> {
        self.space.check_var(x)?;
        let partition = self.filtration.partition(j)?;
        Ok(block_average(&self.space, partition, x))
    }

    /// `P^i(X) = E^i X - E^{i+1} X`.
    pub fn reverse_mart_diff(&self, x: &RandomVector, i: usize) -> Result<RandomVector> {
        let fine = self.cond_expect(x, i)?;
        let coarse = self.cond_expect(x, i + 1)?;
        Ok(fine.sub(&coarse))
    }

    pub fn adapted_partial_sums(&self, seq: &AdaptedSequence, n: usize) -> Result<PartialSums> {
        if n == 0 || n > seq.len() {
            return Err(Error::IndexOutOfRange {
                what: "partial-sum horizon",
                index: n,
                max: seq.len(),
            });
        }
        let mut running = RandomVector::zeros(self.space.atoms(), seq.dim());
        let mut sums = Vec::with_capacity(n);
        let mut conditioned = Vec::with_capacity(n);
        for (k, term) in seq.terms()[..n].iter().enumerate() {
            running.add_assign(term);
            conditioned.push(self.cond_expect(&running, k + 1)?);
            sums.push(running.clone());
        }
        Ok(PartialSums { sums, conditioned })
    }

    /// `max_atoms |S_n - E^n S_n - sum_{i<n} P^i(S_i)|`.
    pub fn decomposition_residual(&self, seq: &AdaptedSequence, n: usize) -> Result<f64> {
        let ps = self.adapted_partial_sums(seq, n)?;
        let mut rebuilt = ps.conditioned[n - 1].clone();
        for i in 1..n {
            rebuilt.add_assign(&self.reverse_mart_diff(&ps.sums[i - 1], i)?);
        }
        Ok(ps.sums[n - 1].sub(&rebuilt).max_abs_norm())
    }

    /// Both sides of `E|sum_{i<=n} P^i(S_i)|^2 = sum_{i<=n} (E|E^i S_i|^2 - E|E^{i+1} S_i|^2)`.
    /// Level `n + 1` must exist.
    pub fn orthogonality_gap(&self, seq: &AdaptedSequence, n: usize) -> Result<(f64, f64)> {
        if self.filtration.levels() < n + 1 {
            return Err(Error::IndexOutOfRange {
                what: "filtration level (orthogonality identity needs n + 1 levels)",
                index: n + 1,
                max: self.filtration.levels(),
            });
        }
        let ps = self.adapted_partial_sums(seq, n)?;
        let mut total = RandomVector::zeros(self.space.atoms(), seq.dim());
        let mut rhs = 0.0;
        for i in 1..=n {
            let s_i = &ps.sums[i - 1];
            let fine = &ps.conditioned[i - 1];
            let coarse = self.cond_expect(s_i, i + 1)?;
            rhs += self.space.moment(fine, 2.0) - self.space.moment(&coarse, 2.0);
            total.add_assign(&fine.sub(&coarse));
        }
        Ok((self.space.moment(&total, 2.0), rhs))
    }
}

/// `sum_w P(w) (max_k |v_k(w)|)^p`, with the max over the whole list.
pub fn exact_max_moment(space: &FiniteProbSpace, vars: &[RandomVector], p: f64) -> Result<f64> {
    let Some(first) = vars.first() else {
        return Err(Error::Empty { what: "variable list" });
    };
    if !(p >= 1.0) {
        return Err(Error::InvalidExponent { p, range: "p >= 1" });
    }
    for v in vars {
        space.check_var(v)?;
        if v.dim() != first.dim() {
            return Err(Error::DimensionMismatch {
                what: "variable dimension",
                expected: first.dim(),
                got: v.dim(),
            });
        }
    }
    let total = space
        .probs()
        .iter()
        .enumerate()
        .map(|(atom, &w)| {
            let max_sq = vars.iter().map(|v| norm_sq(v.value(atom))).fold(0.0, f64::max);
            w * crate::vecmath::pow_nonneg(max_sq, p / 2.0)
        })
        .sum();
    Ok(total)
}

fn block_average(space: &FiniteProbSpace, partition: &Partition, x: &RandomVector) -> RandomVector {
    let dim = x.dim();
    let mut out = RandomVector::zeros(x.atoms(), dim);
    let mut acc = vec![0.0; dim];
    for block in partition.blocks() {
        acc.iter_mut().for_each(|a| *a = 0.0);
        let mut mass = 0.0;
        for &atom in block {
            let w = space.probs()[atom];
            mass += w;
            acc.iter_mut().zip(x.value(atom)).for_each(|(a, v)| *a += w * v);
        }
        acc.iter_mut().for_each(|a| *a /= mass);
        for &atom in block {
            out.values[atom * dim..(atom + 1) * dim].copy_from_slice(&acc);
        }
    }
    out
}
