//! Finite stationary reversible chains.
//!
//! The kernel is self-adjoint on `L_2(pi)`, so the symmetrized matrix
//! `D^{1/2} Q D^{-1/2}` (with `D = diag(pi)`) has a real orthonormal
//! eigenbasis `u_k`. The spectral measure of `f` puts mass
//! `<f, D^{-1/2} u_k>_pi^2` at each eigenvalue, and every quantity in the
//! variance conditions is a closed form in those atoms.

pub mod chain;
pub mod conditions;
pub mod functionals;
pub mod jacobi;
pub mod spectral;
pub mod verify;

pub use chain::{
    make_chain, random_chain, random_disconnected_chain, random_observable, ChainModel, Observable, RandomFamily,
    ReversibleChain,
};
pub use conditions::{check_conditions, check_conditions_with, dyadic_grid, kernel_projection_mass, ConditionReport};
pub use functionals::{
    apply_power, autocovariance, autocovariances, lemma45_residual, max_square_functional, split_functionals,
    variance_growth, variance_growth_from, weighted_series, weighted_series_from, PowerTable, SplitFunctionals,
    WeightedSeries,
};
pub use jacobi::{symmetric_eigen, SymmetricEigen};
pub use spectral::{dl_integral, spectral_measure, SpectralAtom, SpectralDecomposition, SpectralMeasure};
pub use verify::{
    literal_sqrt_sides, markov_sides, random_disconnected_instance, random_markov_instance, verify_markov_inequality,
    MarkovInstance,
};
