//! Exact and seeded-simulation checks of maximal inequalities for partial
//! sums of conditional expectations over decreasing filtrations, and of the
//! spectral criteria for additive functionals of reversible Markov chains.
//!
//! Everything here is allocation-only: no IO, no threads. The `maxineq`
//! crate adds file formats, parallel batch drivers and the CLI.
//!
//! Module map:
//!
//! * [`finite_prob`]: finite probability spaces, partition filtrations,
//!   conditional expectations as block averages, exact moment functionals.
//! * [`weights`]: weight sequences `a_j` and the derived `s_k`, `s*_k`, `b_k`
//!   and their even/odd variants.
//! * [`inequalities`]: proof-traced constants and the verifiers for the
//!   filtration inequalities, plus the weighted-series criterion.
//! * [`markov`]: reversible chains, Jacobi spectral decomposition, spectral
//!   measures, the equivalent variance conditions and the chain inequalities.
//! * [`simulate`]: seeded stationary trajectories, oscillation diagnostics and
//!   Monte Carlo maximal moments.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod finite_prob;
pub mod inequalities;
pub mod markov;
pub mod seed;
pub mod simulate;
pub mod weights;

pub(crate) mod vecmath;

pub use error::{Error, Result};
