use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum OcoError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("degenerate denominator in rank-1 inverse update ({0})")]
    DegenerateDenominator(f64),
    #[error("no convergence after {iters} iterations (residual {residual})")]
    NoConvergence { iters: usize, residual: f64 },
    #[error("matrix is not positive semi-definite (eigenvalue {0})")]
    NotPsd(f64),
    #[error("operation unsupported for this set kind: {0}")]
    UnsupportedSet(&'static str),
    #[error("unsupported regularizer/set combination: {0}")]
    UnsupportedCombination(&'static str),
    #[error("domain violation: {0}")]
    DomainViolation(String),
    #[error("declared interior center is not strictly interior")]
    CenterNotInterior,
    #[error("query point is on or outside the barrier boundary")]
    BoundaryViolation,
    #[error("missing convexity metadata: {0}")]
    MetadataMissing(&'static str),
    #[error("step-size rule requires metadata: {0}")]
    StepRuleRequiresMetadata(&'static str),
    #[error("empty training set")]
    EmptyTrainingSet,
    #[error("negative loss {0} fed to a nonnegative-loss algorithm")]
    NegativeLoss(f64),
    #[error("epsilon {0} outside (0, 1/2)")]
    EpsilonOutOfRange(f64),
    #[error("eta too large: eta * local dual norm of estimate = {0} > 1/4")]
    EtaTooLarge(f64),
    #[error("damped Newton failed to reach decrement tolerance")]
    NewtonNoConvergence,
    #[error("played point left the feasible set (shrinkage precondition violated)")]
    InfeasiblePlay,
    #[error("sampling matrix is singular")]
    SingularMatrix,
    #[error("nonpositive return entry {0}")]
    NonpositiveReturn(f64),
    #[error("invalid config: {0}")]
    ConfigInvalid(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, OcoError>;
