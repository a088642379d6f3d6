//! The Sylvester operator `𝓛(X) = AX + XB` in spectral form.
//!
//! With `A = VΛW*` and `B = UΓZ*`, the rank-one matrices `vᵢzⱼ*` are
//! eigen-matrices of `𝓛` with eigenvalues `Πᵢⱼ = λᵢ + γⱼ`, and
//!
//! ```text
//! 𝓛(X) = V (Π ∘ (W* X U)) Z*
//! ```
//!
//! Any function of `𝓛` acts elementwise on `Π` in these coordinates, which
//! is how the inverse, the pseudo-inverse and the propagator `e^{t𝓛}` are
//! evaluated here.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{
    check_finite, check_same_shape, check_square, eigen_decompose, is_diagonal, ComplexMatrix,
    EigenSystem,
};
use crate::{DEFAULT_CERT_TOL, DEFAULT_RELATIVE_TOL};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Frobenius inner product `⟨M, N⟩ = tr(M* N)`.
pub fn frobenius_inner(m: &ComplexMatrix, n: &ComplexMatrix) -> Complex64 {
    m.iter().zip(n.iter()).map(|(x, y)| x.conj() * y).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub x: ComplexMatrix,
    /// `‖AX + XB − Q‖_F / max(1, ‖Q‖_F)`.
    pub residual: f64,
    pub solvable: bool,
    pub violated_positions: Vec<(usize, usize)>,
    /// `cond(V)·cond(U)`; accuracy of the spectral route scales with it.
    pub cond: f64,
}

#[derive(Debug, Clone)]
pub struct SylvesterOperator {
    a: ComplexMatrix,
    b: ComplexMatrix,
    es_a: EigenSystem,
    es_b: EigenSystem,
    pi: ComplexMatrix,
    zero_tol: f64,
    zero_mask: DMatrix<bool>,
}

/// Diagonal inputs keep their natural order so that `U = I` exactly.
fn decompose_for_operator(m: &ComplexMatrix) -> Result<EigenSystem> {
    if is_diagonal(m) {
        check_finite(m)?;
        let values: Vec<Complex64> = m.diagonal().iter().copied().collect();
        Ok(EigenSystem::from_diagonal(&values, None))
    } else {
        eigen_decompose(m, None)
    }
}

fn default_zero_tol(pi: &ComplexMatrix) -> f64 {
    let scale = pi.iter().map(|z| z.norm()).fold(1.0, f64::max);
    DEFAULT_RELATIVE_TOL * scale
}

impl SylvesterOperator {
    /// Operator `X ↦ AX + XB`; `zero_tol` defaults to `1e-8·max(1, max|Πᵢⱼ|)`.
    pub fn new(a: &ComplexMatrix, b: &ComplexMatrix, zero_tol: Option<f64>) -> Result<Self> {
        check_square("SylvesterOperator::new (A)", a)?;
        check_square("SylvesterOperator::new (B)", b)?;
        let es_a = decompose_for_operator(a)?;
        let es_b = decompose_for_operator(b)?;
        Self::assemble(a.clone(), b.clone(), es_a, es_b, zero_tol)
    }

    /// Operator from precomputed eigensystems; `A` and `B` are reconstructed.
    pub fn from_eigensystems(
        es_a: EigenSystem,
        es_b: EigenSystem,
        zero_tol: Option<f64>,
    ) -> Result<Self> {
        let a = es_a.reconstruct();
        let b = es_b.reconstruct();
        Self::assemble(a, b, es_a, es_b, zero_tol)
    }

    /// The operator `X ↦ A₀X − XΛ₀` of the perturbation recursion.
    ///
    /// `Πᵢⱼ = λᵢ − λⱼ`, and an entry counts as zero exactly when `i` and `j`
    /// belong to the same eigenvalue cluster of `base`.
    pub fn perturbation(a0: &ComplexMatrix, base: &EigenSystem) -> Result<Self> {
        let n = base.n();
        check_same_shape("SylvesterOperator::perturbation", a0, n, n)?;
        let negated: Vec<Complex64> = base.lambda.iter().map(|z| -z).collect();
        let mut es_b = EigenSystem::from_diagonal(&negated, Some(base.cluster_tol));
        es_b.clusters = base.clusters.clone();
        let b = ComplexMatrix::from_diagonal(&es_b.lambda);
        let pi = ComplexMatrix::from_fn(n, n, |i, j| base.lambda[i] - base.lambda[j]);
        let label = base.cluster_labels();
        let zero_mask = DMatrix::from_fn(n, n, |i, j| label[i] == label[j]);
        Ok(Self {
            a: a0.clone(),
            b,
            es_a: base.clone(),
            es_b,
            pi,
            zero_tol: base.cluster_tol,
            zero_mask,
        })
    }

    fn assemble(
        a: ComplexMatrix,
        b: ComplexMatrix,
        es_a: EigenSystem,
        es_b: EigenSystem,
        zero_tol: Option<f64>,
    ) -> Result<Self> {
        if let Some(tol) = zero_tol {
            if !(tol >= 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "zero_tol must be >= 0, got {tol}"
                )));
            }
        }
        let pi = ComplexMatrix::from_fn(es_a.n(), es_b.n(), |i, j| es_a.lambda[i] + es_b.lambda[j]);
        let zero_tol = zero_tol.unwrap_or_else(|| default_zero_tol(&pi));
        let zero_mask = pi.map(|z| z.norm() <= zero_tol);
        Ok(Self {
            a,
            b,
            es_a,
            es_b,
            pi,
            zero_tol,
            zero_mask,
        })
    }

    pub fn a(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn b(&self) -> &ComplexMatrix {
        &self.b
    }

    pub fn es_a(&self) -> &EigenSystem {
        &self.es_a
    }

    pub fn es_b(&self) -> &EigenSystem {
        &self.es_b
    }

    /// `Πᵢⱼ = λᵢ + γⱼ`.
    pub fn pi(&self) -> &ComplexMatrix {
        &self.pi
    }

    pub fn zero_tol(&self) -> f64 {
        self.zero_tol
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.es_a.n(), self.es_b.n())
    }

    pub fn cond(&self) -> f64 {
        self.es_a.cond_v * self.es_b.cond_v
    }

    /// Positions where `Π` is treated as zero, row-major.
    pub fn zero_positions(&self) -> Vec<(usize, usize)> {
        let (n, m) = self.shape();
        (0..n)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .filter(|&(i, j)| self.zero_mask[(i, j)])
            .collect()
    }

    /// `Π†∘`: elementwise reciprocal with the zero positions kept at zero.
    pub fn pi_pseudo_inverse(&self) -> ComplexMatrix {
        self.pi
            .zip_map(&self.zero_mask, |z, zero| if zero { ZERO } else { z.inv() })
    }

    fn check_shape(&self, op: &'static str, x: &ComplexMatrix) -> Result<()> {
        let (n, m) = self.shape();
        check_same_shape(op, x, n, m)
    }

    /// Spectral coordinates `W* X U`.
    pub fn to_spectral(&self, x: &ComplexMatrix) -> ComplexMatrix {
        self.es_a.w.adjoint() * x * &self.es_b.v
    }

    /// Inverse of [`to_spectral`](Self::to_spectral): `V C Z*`.
    pub fn from_spectral(&self, coeffs: &ComplexMatrix) -> ComplexMatrix {
        &self.es_a.v * coeffs * self.es_b.w.adjoint()
    }

    /// `AX + XB`.
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_shape("SylvesterOperator::apply", x)?;
        Ok(&self.a * x + x * &self.b)
    }

    /// `V (Π ∘ (W* X U)) Z*`, the same map evaluated in eigen-coordinates.
    pub fn apply_spectral(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_shape("SylvesterOperator::apply_spectral", x)?;
        Ok(self.from_spectral(&self.pi.component_mul(&self.to_spectral(x))))
    }

    /// `𝓛*(Y) = A*Y + YB*`.
    pub fn apply_adjoint(&self, y: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_shape("SylvesterOperator::apply_adjoint", y)?;
        Ok(self.a.adjoint() * y + y * self.b.adjoint())
    }

    /// Unique solution of `AX + XB = Q`; fails when some `Πᵢⱼ` is zero.
    pub fn solve(&self, q: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_shape("SylvesterOperator::solve", q)?;
        let singular = self.zero_positions();
        if !singular.is_empty() {
            return Err(Error::SingularOperator {
                positions: singular,
            });
        }
        let coeffs = self.to_spectral(q).component_div(&self.pi);
        Ok(self.from_spectral(&coeffs))
    }

    /// `Π†∘ ∘ (W* Q U)`: spectral coordinates of `𝓛†(Q)`.
    pub fn pseudo_coefficients(&self, q: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_shape("SylvesterOperator::pseudo_coefficients", q)?;
        Ok(self.pi_pseudo_inverse().component_mul(&self.to_spectral(q)))
    }

    /// `𝓛†(Q) = V (Π†∘ ∘ (W* Q U)) Z*` together with the solvability
    /// certificate and the achieved residual.
    pub fn pseudo_solve(&self, q: &ComplexMatrix) -> Result<SolveReport> {
        let coeffs = self.pseudo_coefficients(q)?;
        let x = self.from_spectral(&coeffs);
        let (solvable, violated_positions) = self.check_solvable(q)?;
        let residual = (&self.a * &x + &x * &self.b - q).norm() / q.norm().max(1.0);
        Ok(SolveReport {
            x,
            residual,
            solvable,
            violated_positions,
            cond: self.cond(),
        })
    }

    /// Range test with the default certificate tolerance.
    pub fn check_solvable(&self, q: &ComplexMatrix) -> Result<(bool, Vec<(usize, usize)>)> {
        self.check_solvable_with(q, DEFAULT_CERT_TOL)
    }

    /// `Q` lies in the range of `𝓛` iff its spectral coordinates vanish
    /// wherever `Π` does (orthogonality to the null space of `𝓛*`).
    pub fn check_solvable_with(
        &self,
        q: &ComplexMatrix,
        cert_tol: f64,
    ) -> Result<(bool, Vec<(usize, usize)>)> {
        self.check_shape("SylvesterOperator::check_solvable", q)?;
        let coeffs = self.to_spectral(q);
        let bound = cert_tol * q.norm();
        let violated: Vec<(usize, usize)> = self
            .zero_positions()
            .into_iter()
            .filter(|&(i, j)| coeffs[(i, j)].norm() > bound)
            .collect();
        Ok((violated.is_empty(), violated))
    }

    /// Eigen-matrices `vᵢzⱼ*` for every zero position of `Π`.
    pub fn null_space_basis(&self) -> Vec<ComplexMatrix> {
        self.zero_positions()
            .into_iter()
            .map(|(i, j)| self.es_a.v.column(i) * self.es_b.w.column(j).adjoint())
            .collect()
    }

    /// `f(𝓛)(X) = V (f∘(Π) ∘ (W* X U)) Z*`.
    pub fn apply_function<F>(&self, f: F, x: &ComplexMatrix) -> Result<ComplexMatrix>
    where
        F: Fn(Complex64) -> Complex64,
    {
        self.check_shape("SylvesterOperator::apply_function", x)?;
        let mut fpi = self.pi.clone();
        for z in fpi.iter_mut() {
            let fz = f(*z);
            if !(fz.re.is_finite() && fz.im.is_finite()) {
                return Err(Error::Domain { at: *z });
            }
            *z = fz;
        }
        Ok(self.from_spectral(&fpi.component_mul(&self.to_spectral(x))))
    }

    /// Solution at time `t` of `Ẋ = AX + XB`, `X(0) = X₀`.
    pub fn propagate(&self, x0: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
        self.check_shape("SylvesterOperator::propagate", x0)?;
        let growth = self.pi.map(|z| (z * t).exp());
        Ok(self.from_spectral(&growth.component_mul(&self.to_spectral(x0))))
    }
}
