//! Analytic perturbation expansions for eigenvalues and eigenvectors of
//! `A(ε) = A₀ + εA₁`.
//!
//! The crate is organized bottom-up:
//!
//! * [`spectral`] holds the dense foundations: eigendecompositions with a
//!   reciprocal left basis, eigenvalue clustering, the `Diag`/Hadamard
//!   calculus, spectral projectors and analytic matrix functions.
//! * [`sylvester`] treats `X ↦ AX + XB` as an operator with an explicit
//!   spectral representation, so inverses, pseudo-inverses, null spaces and
//!   propagators all reduce to elementwise work on the `Π` table.
//! * [`perturbation`] computes the expansion terms `Λₖ`, `Vₖ` (and `W₁`) to
//!   arbitrary order, including degenerate clusters.
//! * [`oracle`] recomputes the same quantities by brute force so the
//!   expansion can be checked independently.
//!
//! All matrices are dense `nalgebra` matrices of [`Complex64`] entries.

pub mod error;
pub mod oracle;
pub mod perturbation;
pub mod spectral;
pub mod sylvester;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use oracle::{
    exact_eigencurve, finite_difference_coefficients, taylor_remainder_slopes, EigencurveSample,
    FitOptions, MatchOptions, Slope, ValidationReport,
};
pub use perturbation::{
    evaluate, expand, first_order_eigenvalues, first_order_eigenvectors, resolve_degeneracy,
    ExpansionTerms, PerturbationProblem,
};
pub use spectral::{
    apply_analytic_function, cluster_eigenvalues, diag_of, eigen_decompose,
    expand_in_reciprocal_basis, hadamard, hadamard_pseudo_inverse, spectral_projectors,
    ComplexMatrix, ComplexVector, DiagonalMatrix, EigenSystem,
};
pub use sylvester::{SolveReport, SylvesterOperator};

/// Relative scale used for default clustering and for deciding that an entry
/// of `Π` is zero.
pub const DEFAULT_RELATIVE_TOL: f64 = 1e-8;

/// Tolerance of the solvability certificate, relative to `‖Q‖_F`.
pub const DEFAULT_CERT_TOL: f64 = 1e-8;

/// Eigenvector matrices with a condition number above this are rejected as
/// not semi-simple (`1/√ε_mach`).
pub fn defect_threshold() -> f64 {
    1.0 / f64::EPSILON.sqrt()
}
