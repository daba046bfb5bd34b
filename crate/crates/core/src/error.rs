use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("probabilities must be strictly positive: atom {atom} has {value}")]
    NonPositiveProbability { atom: usize, value: f64 },
    #[error("probabilities sum to {sum}, which is not within 1e-9 of 1")]
    ProbabilitySum { sum: f64 },
    #[error("empty {what}")]
    Empty { what: &'static str },
    #[error("partition {level} is invalid: {reason}")]
    InvalidPartition { level: usize, reason: String },
    #[error("partition {level} block {block} is not a union of blocks of partition {finer}")]
    NotCoarsening {
        level: usize,
        block: usize,
        finer: usize,
    },
    #[error("index {index} out of range 1..={max} for {what}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        max: usize,
    },
    #[error("dimension mismatch: {what} (expected {expected}, got {got})")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("non-finite value in {what}")]
    NonFinite { what: &'static str },
    #[error("term {term} is not measurable w.r.t. partition {term}: block {block} carries different values")]
    NotAdapted { term: usize, block: usize },
    #[error("exponent p = {p} outside the valid range {range}")]
    InvalidExponent { p: f64, range: &'static str },
    #[error("weight index {index} beyond explicit list of length {len}")]
    WeightIndex { index: usize, len: usize },
    #[error("{what} requires weights")]
    MissingWeights { what: &'static str },
    #[error("infeasible instance shape: {reason}")]
    InfeasibleShape { reason: String },
    #[error("second moments must be non-negative and non-increasing (index {index})")]
    MomentsNotDecreasing { index: usize },
    #[error("row {row} of the kernel sums to {sum}")]
    RowSum { row: usize, sum: f64 },
    #[error("negative kernel entry Q[{row}][{col}] = {value}")]
    NegativeEntry { row: usize, col: usize, value: f64 },
    #[error("detailed balance violated at ({i}, {j}): residual {residual}")]
    DetailedBalance { i: usize, j: usize, residual: f64 },
    #[error("pi is not stationary: |piQ - pi|_inf = {residual}")]
    NotStationary { residual: f64 },
    #[error("weight matrix is not symmetric at ({i}, {j})")]
    NonSymmetricWeights { i: usize, j: usize },
    #[error("invalid chain parameters: {reason}")]
    InvalidModel { reason: String },
    #[error("Jacobi eigensolver did not converge in {sweeps} sweeps (off-diagonal norm {residual})")]
    NoConvergence { sweeps: usize, residual: f64 },
    #[error("{id} does not accept this observable: {reason}")]
    InvalidObservable { id: &'static str, reason: &'static str },
    #[error("need at least {needed} trials, got {got}")]
    TooFewTrials { needed: usize, got: usize },
    #[error("trajectory has length {len}, horizon {horizon} requested")]
    TrajectoryTooShort { len: usize, horizon: usize },
}
