use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension error in {op}: expected {expected}, found {found}")]
    Dimension {
        op: &'static str,
        expected: String,
        found: String,
    },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The eigenvector matrix is singular or too ill-conditioned to invert.
    #[error("not semi-simple (eigenvector condition {cond:e})")]
    NotSemiSimple { cond: f64 },

    #[error("Schur iteration did not converge")]
    NoConvergence,

    #[error("function undefined at {at}")]
    Domain { at: Complex64 },

    #[error("operator singular at {positions:?}; use pseudo_solve")]
    SingularOperator { positions: Vec<(usize, usize)> },

    #[error("degenerate; rotation required for cluster {cluster:?}")]
    DegenerateBase { cluster: Vec<usize> },

    #[error("first-order splitting fails: block not semi-simple for cluster {cluster:?}")]
    SplittingFailed { cluster: Vec<usize> },

    #[error("higher-order degeneracy unresolved in cluster {cluster:?}")]
    HigherOrderDegeneracy { cluster: Vec<usize> },

    #[error("matching failed at eps={eps:e}; shrink eps")]
    MatchingFailed { eps: f64 },

    #[error("normalization breakdown at eps={eps:e} for eigenvector {index}")]
    NormalizationBreakdown { eps: f64, index: usize },

    #[error("grid unsuitable: {0}")]
    GridUnsuitable(String),
}

impl Error {
    pub(crate) fn dimension(
        op: &'static str,
        expected: impl ToString,
        found: impl ToString,
    ) -> Self {
        Error::Dimension {
            op,
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}
