use core::fmt;

use super::constants::{InequalityId, MarkovCheckId};

/// Default slack: `lhs <= C * rhs + tol * (1 + C * rhs)`.
pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckId {
    Filtration(InequalityId),
    Markov(MarkovCheckId),
}

impl CheckId {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Filtration(id) => id.as_str(),
            Self::Markov(id) => id.as_str(),
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    /// Both sides vanish (e.g. all-zero weights); reported as `0/0`.
    Skipped,
}

impl Outcome {
    pub fn passed(self) -> bool {
        self != Self::Fail
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Pass => "true",
            Self::Fail => "false",
            Self::Skipped => "skipped",
        }
    }
}

/// Shape of the instance a record was computed on. For chain checks `size`
/// is the number of states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceDescriptor {
    pub seed: u64,
    pub size: usize,
    pub n: usize,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationRecord {
    pub id: CheckId,
    pub p: f64,
    pub instance: InstanceDescriptor,
    pub lhs: f64,
    pub rhs: f64,
    pub constant: f64,
    pub outcome: Outcome,
}

impl VerificationRecord {
    pub fn new(id: CheckId, p: f64, instance: InstanceDescriptor, lhs: f64, rhs: f64, constant: f64, tol: f64) -> Self {
        Self {
            id,
            p,
            instance,
            lhs,
            rhs,
            constant,
            outcome: judge(lhs, rhs, constant, tol),
        }
    }

    /// `lhs / rhs`; NaN for skipped records.
    pub fn ratio(&self) -> f64 {
        if self.outcome == Outcome::Skipped {
            f64::NAN
        } else {
            self.lhs / self.rhs
        }
    }

    pub fn passed(&self) -> bool {
        self.outcome.passed()
    }
}

pub fn judge(lhs: f64, rhs: f64, constant: f64, tol: f64) -> Outcome {
    if rhs == 0.0 && lhs.abs() <= tol {
        return Outcome::Skipped;
    }
    let bound = constant * rhs;
    if lhs <= bound + tol * (1.0 + bound) {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}
