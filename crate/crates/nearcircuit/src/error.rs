use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("point set does not affinely span R^{0}")]
    NotFullRank(usize),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("binomial target is zero")]
    ZeroTarget,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("genericity check failed: {0}")]
    GenericityFailure(String),
    #[error("pivot block of the coefficient matrix is singular")]
    SingularPivot,
    #[error("sign system has no real solution")]
    SignInfeasible,
    #[error("Newton polygon is degenerate (no lower edge)")]
    DegenerateHull,
    #[error("patchworking hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("no certified parameter found up to t = 2^-{0}")]
    SearchExhausted(u32),
    #[error("construction constraint violated: {0}")]
    ConstraintViolated(String),
    #[error("perturbation did not certify the target count")]
    PerturbationExhausted,
    #[error("critical values could not be separated")]
    CriticalValueCollision,
    #[error("F and G have a common factor")]
    CommonFactor,
    #[error("configuration has even index {0}")]
    IndexNotOdd(String),
    #[error("support is not a simplex")]
    NotSimplex,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("infeasible request: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
