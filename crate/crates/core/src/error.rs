use thiserror::Error;

/// Everything that can go wrong while building spaces, operators, and reports.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (relative asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (eigenvalue {0:.3e})")]
    NotPsd(f64),

    #[error("the weight operator must be non-zero")]
    ZeroOperator,

    #[error("weight operator is ill-conditioned on its range (condition {0:.3e} > 1e8)")]
    IllConditioned(f64),

    #[error("operator is not in {0}")]
    Class(&'static str),

    #[error("range inclusion fails: the equation has no solution")]
    NoSolution,

    #[error("operator is not A-invertible (smallest compressed singular value {0:.3e})")]
    NotAInvertible(f64),

    #[error("operator is not A-normal (commutator residual {0:.3e})")]
    NotNormal(f64),

    #[error("negative exponent in polynomial monomial")]
    NegativeExponent,

    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Conditioning failures get their own exit code in the CLI.
    pub fn is_conditioning(&self) -> bool {
        matches!(self, Error::IllConditioned(_) | Error::Inconsistent(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
