use alloc::format;
use alloc::vec::Vec;

use rand::Rng;

use super::record::InstanceDescriptor;
use crate::finite_prob::{
    AdaptedSequence, DecreasingFiltration, FilteredSpace, FiniteProbSpace, Partition, RandomVector,
};
use crate::seed::rng_for;
use crate::{Error, Result};

/// A filtered finite space with an adapted sequence on it.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub space: FilteredSpace,
    pub sequence: AdaptedSequence,
    pub seed: u64,
}

impl Instance {
    pub fn new(space: FilteredSpace, sequence: AdaptedSequence, seed: u64) -> Self {
        Self { space, sequence, seed }
    }

    pub fn descriptor(&self, n: usize) -> InstanceDescriptor {
        InstanceDescriptor {
            seed: self.seed,
            size: self.space.space().atoms(),
            n,
            dim: self.sequence.dim(),
        }
    }

    /// The random vector driving the weighted checks: the first term.
    pub fn driver(&self) -> &RandomVector {
        &self.sequence.terms()[0]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceShape {
    pub atoms: usize,
    pub levels: usize,
    pub n: usize,
    pub dim: usize,
}

impl InstanceShape {
    /// A random shape with `n <= max_n`, `n + 1 <= atoms <= max_atoms`,
    /// `levels = n + 1` and `dim <= max_dim`.
    pub fn random<R: Rng>(rng: &mut R, max_atoms: usize, max_n: usize, max_dim: usize) -> Self {
        let max_n = max_n.min(max_atoms.saturating_sub(1)).max(1);
        let n = rng.gen_range(1..=max_n);
        let atoms = rng.gen_range((n + 1).max(2)..=max_atoms.max(n + 1).max(2));
        Self {
            atoms,
            levels: n + 1,
            n,
            dim: rng.gen_range(1..=max_dim.max(1)),
        }
    }
}

/// Deterministic random instance: positive probabilities, level 1 the
/// singletons, each further level merging one random pair of blocks, and
/// `X_j` drawn blockwise on partition `j`.
pub fn random_instance(seed: u64, atoms: usize, levels: usize, n: usize, dim: usize) -> Result<Instance> {
    if atoms < 2 {
        return Err(Error::InfeasibleShape {
            reason: format!("need at least 2 atoms, got {atoms}"),
        });
    }
    if levels < n + 1 {
        return Err(Error::InfeasibleShape {
            reason: format!("levels ({levels}) must be at least n + 1 ({})", n + 1),
        });
    }
    if levels > atoms {
        return Err(Error::InfeasibleShape {
            reason: format!("{levels} levels need {} merges but {atoms} atoms allow {}", levels - 1, atoms - 1),
        });
    }
    if n == 0 || dim == 0 {
        return Err(Error::InfeasibleShape {
            reason: format!("n and dim must be positive (n = {n}, dim = {dim})"),
        });
    }
    let mut rng = rng_for(seed);

    let raw: Vec<f64> = (0..atoms).map(|_| rng.gen_range(0.1..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let space = FiniteProbSpace::new(raw.into_iter().map(|p| p / total).collect())?;

    let mut partitions = Vec::with_capacity(levels);
    let mut blocks: Vec<Vec<usize>> = (0..atoms).map(|a| alloc::vec![a]).collect();
    partitions.push(Partition::singletons(atoms));
    for level in 2..=levels {
        let i = rng.gen_range(0..blocks.len());
        let mut j = rng.gen_range(0..blocks.len() - 1);
        if j >= i {
            j += 1;
        }
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        let taken = blocks.remove(hi);
        blocks[lo].extend(taken);
        blocks[lo].sort_unstable();
        partitions.push(Partition::new(atoms, blocks.clone(), level)?);
    }
    let filtration = DecreasingFiltration::new(partitions)?;

    let mut terms = Vec::with_capacity(n);
    for j in 1..=n {
        let partition = filtration.partition(j)?;
        let scale = rng.gen_range(0.2..2.0);
        let mut values = alloc::vec![0.0; atoms * dim];
        for block in partition.blocks() {
            let draw: Vec<f64> = (0..dim).map(|_| scale * rng.gen_range(-1.0..1.0)).collect();
            for &a in block {
                values[a * dim..(a + 1) * dim].copy_from_slice(&draw);
            }
        }
        terms.push(RandomVector::new(dim, values)?);
    }
    let sequence = AdaptedSequence::new(&filtration, terms)?;
    Ok(Instance::new(FilteredSpace::new(space, filtration)?, sequence, seed))
}

/// Shape and instance both drawn from `seed`.
pub fn random_instance_within(seed: u64, max_atoms: usize, max_n: usize, max_dim: usize) -> Result<Instance> {
    let mut rng = rng_for(crate::seed::splitmix64_finalize(seed));
    let shape = InstanceShape::random(&mut rng, max_atoms, max_n, max_dim);
    random_instance(seed, shape.atoms, shape.levels, shape.n, shape.dim)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_in_seed() {
        let a = random_instance(1, 12, 6, 5, 2).unwrap();
        let b = random_instance(1, 12, 6, 5, 2).unwrap();
        assert_eq!(a, b);
        let c = random_instance(2, 12, 6, 5, 2).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn one_merge_per_level() {
        let inst = random_instance(7, 9, 9, 8, 1).unwrap();
        let f = inst.space.filtration();
        assert_eq!(f.levels(), 9);
        assert_eq!(f.partition(9).unwrap().blocks().len(), 9 - 9 + 1);
        for j in 1..=9 {
            assert_eq!(f.partition(j).unwrap().blocks().len(), 9 - j + 1);
        }
    }

    #[test]
    fn infeasible_shapes() {
        assert!(matches!(random_instance(1, 4, 5, 4, 1), Err(Error::InfeasibleShape { .. })));
        assert!(matches!(random_instance(1, 1, 1, 0, 1), Err(Error::InfeasibleShape { .. })));
        assert!(matches!(random_instance(1, 8, 3, 3, 1), Err(Error::InfeasibleShape { .. })));
    }

    #[test]
    fn generated_sequences_are_adapted() {
        for seed in 0..50 {
            let inst = random_instance_within(seed, 64, 32, 3).unwrap();
            // Re-validating from the parts must succeed.
            AdaptedSequence::new(inst.space.filtration(), inst.sequence.terms().to_vec()).unwrap();
            assert!(inst.space.filtration().levels() > inst.sequence.len());
        }
    }
}
