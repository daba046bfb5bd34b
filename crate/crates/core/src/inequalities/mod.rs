//! Exact verification of the filtration inequalities against explicit
//! constants, and the weighted-series convergence criterion.

pub mod constants;
pub mod criterion;
pub mod instance;
pub mod record;
pub mod verify;

pub use constants::{markov_constant, traced_constant, InequalityId, MarkovCheckId, TraceStep, TracedConstant};
pub use criterion::{series_criterion_cor33, SeriesCriterion, Verdict};
pub use instance::{random_instance, random_instance_within, Instance, InstanceShape};
pub use record::{judge, CheckId, InstanceDescriptor, Outcome, VerificationRecord, DEFAULT_TOL};
pub use verify::{cauchy_distances, prop21_second_telescoped_rhs, sides, verify, Sides};
