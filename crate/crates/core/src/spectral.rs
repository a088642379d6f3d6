//! Dense spectral foundations.
//!
//! Every semi-simple matrix is carried as `A = V Λ W*` with `W* = V⁻¹`, so
//! the columns of `V` and `W` form a reciprocal basis. Eigenvalues are sorted
//! by real part, then imaginary part, and grouped into clusters of
//! numerically equal values.

use std::ops::{Add, Index, Mul};

use nalgebra::linalg::Schur;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::{defect_threshold, DEFAULT_RELATIVE_TOL};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A square matrix that is zero off the diagonal, stored as its diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalMatrix {
    diag: ComplexVector,
}

impl DiagonalMatrix {
    pub fn new(diag: ComplexVector) -> Self {
        Self { diag }
    }

    pub fn from_slice(values: &[Complex64]) -> Self {
        Self::new(ComplexVector::from_column_slice(values))
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self::new(ComplexVector::from_iterator(
            values.len(),
            values.iter().map(|&x| Complex64::new(x, 0.0)),
        ))
    }

    pub fn zeros(n: usize) -> Self {
        Self::new(ComplexVector::zeros(n))
    }

    pub fn identity(n: usize) -> Self {
        Self::new(ComplexVector::from_element(n, ONE))
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn diagonal(&self) -> &ComplexVector {
        &self.diag
    }

    pub fn iter(&self) -> impl Iterator<Item = &Complex64> {
        self.diag.iter()
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&self.diag)
    }

    /// `M·D`: scales column `j` of `m` by `dⱼ`.
    pub fn right_mul(&self, m: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            m.ncols(),
            self.len(),
            "column count must match diagonal length"
        );
        let mut out = m.clone();
        for (j, mut col) in out.column_iter_mut().enumerate() {
            col *= self.diag[j];
        }
        out
    }

    /// `D·M`: scales row `i` of `m` by `dᵢ`.
    pub fn left_mul(&self, m: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            m.nrows(),
            self.len(),
            "row count must match diagonal length"
        );
        let mut out = m.clone();
        for (i, mut row) in out.row_iter_mut().enumerate() {
            row *= self.diag[i];
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(&self.diag * c)
    }

    /// Largest entry modulus (the ∞-norm of the diagonal).
    pub fn max_abs(&self) -> f64 {
        self.diag.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl Index<usize> for DiagonalMatrix {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.diag[i]
    }
}

impl Add for &DiagonalMatrix {
    type Output = DiagonalMatrix;

    fn add(self, rhs: &DiagonalMatrix) -> DiagonalMatrix {
        DiagonalMatrix::new(&self.diag + &rhs.diag)
    }
}

impl Mul for &DiagonalMatrix {
    type Output = DiagonalMatrix;

    fn mul(self, rhs: &DiagonalMatrix) -> DiagonalMatrix {
        DiagonalMatrix::new(self.diag.component_mul(&rhs.diag))
    }
}

pub(crate) fn check_square(op: &'static str, m: &ComplexMatrix) -> Result<usize> {
    if m.nrows() == 0 || m.nrows() != m.ncols() {
        return Err(Error::dimension(
            op,
            "non-empty square matrix",
            format!("{}x{}", m.nrows(), m.ncols()),
        ));
    }
    Ok(m.nrows())
}

pub(crate) fn check_same_shape(
    op: &'static str,
    m: &ComplexMatrix,
    rows: usize,
    cols: usize,
) -> Result<()> {
    if m.nrows() != rows || m.ncols() != cols {
        return Err(Error::dimension(
            op,
            format!("{rows}x{cols}"),
            format!("{}x{}", m.nrows(), m.ncols()),
        ));
    }
    Ok(())
}

pub(crate) fn check_finite(m: &ComplexMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

pub(crate) fn is_diagonal(m: &ComplexMatrix) -> bool {
    m.is_square()
        && m.iter()
            .enumerate()
            .all(|(k, z)| k % m.nrows() == k / m.nrows() || *z == ZERO)
}

/// Diagonal part of a square matrix.
pub fn diag_of(m: &ComplexMatrix) -> Result<DiagonalMatrix> {
    check_square("diag_of", m)?;
    Ok(DiagonalMatrix::new(m.diagonal()))
}

/// Elementwise product `M ∘ N`.
pub fn hadamard(m: &ComplexMatrix, n: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_same_shape("hadamard", n, m.nrows(), m.ncols())?;
    Ok(m.component_mul(n))
}

/// Elementwise reciprocal that maps entries with modulus `≤ zero_tol` to 0.
pub fn hadamard_pseudo_inverse(m: &ComplexMatrix, zero_tol: f64) -> ComplexMatrix {
    m.map(|z| if z.norm() > zero_tol { z.inv() } else { ZERO })
}

/// Default clustering scale: `1e-8 · max(1, maxᵢ|λᵢ|)`.
pub fn default_cluster_tol(lambda: &[Complex64]) -> f64 {
    let scale = lambda.iter().map(|z| z.norm()).fold(1.0, f64::max);
    DEFAULT_RELATIVE_TOL * scale
}

/// Partitions indices into groups under the transitive closure of
/// `|λᵢ − λⱼ| ≤ cluster_tol`.
///
/// Blocks are ordered by their smallest index and list members in ascending
/// index order.
pub fn cluster_eigenvalues(lambda: &[Complex64], cluster_tol: f64) -> Vec<Vec<usize>> {
    let n = lambda.len();
    let mut label = vec![usize::MAX; n];
    let mut clusters = Vec::new();
    for seed in 0..n {
        if label[seed] != usize::MAX {
            continue;
        }
        let id = clusters.len();
        label[seed] = id;
        let mut members = vec![seed];
        let mut frontier = vec![seed];
        while let Some(i) = frontier.pop() {
            for j in 0..n {
                if label[j] == usize::MAX && (lambda[i] - lambda[j]).norm() <= cluster_tol {
                    label[j] = id;
                    members.push(j);
                    frontier.push(j);
                }
            }
        }
        members.sort_unstable();
        clusters.push(members);
    }
    clusters
}

/// Eigendecomposition `A V = V Λ` with reciprocal left basis `W* = V⁻¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    pub lambda: ComplexVector,
    /// Right eigenvectors as columns.
    pub v: ComplexMatrix,
    /// Reciprocal basis: `W* V = I`.
    pub w: ComplexMatrix,
    pub clusters: Vec<Vec<usize>>,
    /// 2-norm condition number of `V`.
    pub cond_v: f64,
    pub cluster_tol: f64,
}

impl EigenSystem {
    /// Builds the eigensystem of a diagonalizable matrix from its eigenvalues
    /// and right eigenvectors, keeping the given order.
    pub fn from_eigenvectors(
        lambda: ComplexVector,
        v: ComplexMatrix,
        cluster_tol: Option<f64>,
    ) -> Result<Self> {
        let n = lambda.len();
        check_same_shape("EigenSystem::from_eigenvectors", &v, n, n)?;
        let cond_v = condition_number(&v);
        if !(cond_v <= defect_threshold()) {
            return Err(Error::NotSemiSimple { cond: cond_v });
        }
        let w_star = v.clone().lu().try_inverse().ok_or(Error::NotSemiSimple {
            cond: f64::INFINITY,
        })?;
        let cluster_tol = cluster_tol.unwrap_or_else(|| default_cluster_tol(lambda.as_slice()));
        let clusters = cluster_eigenvalues(lambda.as_slice(), cluster_tol);
        Ok(Self {
            lambda,
            v,
            w: w_star.adjoint(),
            clusters,
            cond_v,
            cluster_tol,
        })
    }

    /// Eigensystem of `diag(values)` with `V = W = I`, in the given order.
    pub fn from_diagonal(values: &[Complex64], cluster_tol: Option<f64>) -> Self {
        let n = values.len();
        let cluster_tol = cluster_tol.unwrap_or_else(|| default_cluster_tol(values));
        Self {
            lambda: ComplexVector::from_column_slice(values),
            v: ComplexMatrix::identity(n, n),
            w: ComplexMatrix::identity(n, n),
            clusters: cluster_eigenvalues(values, cluster_tol),
            cond_v: 1.0,
            cluster_tol,
        }
    }

    pub fn n(&self) -> usize {
        self.lambda.len()
    }

    pub fn w_star(&self) -> ComplexMatrix {
        self.w.adjoint()
    }

    pub fn lambda_diag(&self) -> DiagonalMatrix {
        DiagonalMatrix::new(self.lambda.clone())
    }

    /// Cluster id of every eigenvalue index.
    pub fn cluster_labels(&self) -> Vec<usize> {
        let mut label = vec![0; self.n()];
        for (id, members) in self.clusters.iter().enumerate() {
            for &i in members {
                label[i] = id;
            }
        }
        label
    }

    pub fn is_degenerate(&self) -> bool {
        self.clusters.iter().any(|c| c.len() > 1)
    }

    /// `V Λ W*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.lambda_diag().right_mul(&self.v) * self.w_star()
    }
}

/// `σ_max / σ_min`, or infinity for a singular matrix.
pub(crate) fn condition_number(m: &ComplexMatrix) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.max();
    let min = sv.min();
    if min > 0.0 {
        max / min
    } else {
        f64::INFINITY
    }
}

/// Scales each column to unit 2-norm and rotates its phase so the first
/// entry of (near-)maximal modulus is real and positive.
pub(crate) fn normalize_columns(v: &mut ComplexMatrix) {
    for mut col in v.column_iter_mut() {
        let norm = col.norm();
        if norm == 0.0 {
            continue;
        }
        let peak = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let at = col
            .iter()
            .position(|z| z.norm() >= peak * (1.0 - 1e-10))
            .unwrap_or(0);
        let pivot = col[at];
        let phase = pivot.conj() / pivot.norm();
        col *= phase / Complex64::new(norm, 0.0);
        col[at] = Complex64::new(pivot.norm() / norm, 0.0);
    }
}

fn eigen_order(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Eigendecomposition of a semi-simple matrix.
///
/// Eigenvectors come from back-substitution on the complex Schur form.
/// Inside a cluster the Schur vectors are kept as the eigenbasis; the
/// eigenvalue equation is checked on those rows, so a non-trivial Jordan
/// block is reported as [`Error::NotSemiSimple`] instead of producing a
/// spurious basis.
pub fn eigen_decompose(a: &ComplexMatrix, cluster_tol: Option<f64>) -> Result<EigenSystem> {
    let n = check_square("eigen_decompose", a)?;
    check_finite(a)?;
    if is_diagonal(a) {
        // Exact: no iteration needed, but the ordering contract still applies.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| eigen_order(&a[(i, i)], &a[(j, j)]));
        let values: Vec<Complex64> = order.iter().map(|&i| a[(i, i)]).collect();
        let v = ComplexMatrix::from_fn(n, n, |r, c| if r == order[c] { ONE } else { ZERO });
        let tol = cluster_tol.unwrap_or_else(|| default_cluster_tol(&values));
        return Ok(EigenSystem {
            lambda: ComplexVector::from_vec(values.clone()),
            w: v.clone(),
            v,
            clusters: cluster_eigenvalues(&values, tol),
            cond_v: 1.0,
            cluster_tol: tol,
        });
    }

    let schur =
        Schur::try_new(a.clone(), f64::EPSILON, 1000 * n.max(10)).ok_or(Error::NoConvergence)?;
    let (q, t) = schur.unpack();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eigen_order(&t[(i, i)], &t[(j, j)]));
    let sorted: Vec<Complex64> = order.iter().map(|&i| t[(i, i)]).collect();
    let tol = cluster_tol.unwrap_or_else(|| default_cluster_tol(&sorted));
    let clusters = cluster_eigenvalues(&sorted, tol);

    // cluster label per Schur position
    let mut label = vec![0; n];
    for (id, members) in clusters.iter().enumerate() {
        for &pos in members {
            label[order[pos]] = id;
        }
    }

    let y = triangular_eigenvectors(&t, &label)?;
    let mut v_schur = q * y;
    normalize_columns(&mut v_schur);
    let v = ComplexMatrix::from_fn(n, n, |r, c| v_schur[(r, order[c])]);

    let cond_v = condition_number(&v);
    if !(cond_v <= defect_threshold()) {
        return Err(Error::NotSemiSimple { cond: cond_v });
    }
    let w_star = v.clone().lu().try_inverse().ok_or(Error::NotSemiSimple {
        cond: f64::INFINITY,
    })?;

    Ok(EigenSystem {
        lambda: ComplexVector::from_vec(sorted),
        v,
        w: w_star.adjoint(),
        clusters,
        cond_v,
        cluster_tol: tol,
    })
}

/// Right eigenvectors of an upper triangular `t`, one per column.
fn triangular_eigenvectors(t: &ComplexMatrix, label: &[usize]) -> Result<ComplexMatrix> {
    let n = t.nrows();
    let tnorm = t.norm().max(f64::MIN_POSITIVE);
    let small = f64::EPSILON * tnorm;
    let defect_tol = f64::EPSILON.sqrt() * tnorm;
    let mut y = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let tkk = t[(k, k)];
        y[(k, k)] = ONE;
        for i in (0..k).rev() {
            let s: Complex64 = (i + 1..=k).map(|j| t[(i, j)] * y[(j, k)]).sum();
            if label[i] == label[k] {
                // Same eigenvalue: row i of (T − t_kk I) y = 0 must hold
                // with any value of y_i, otherwise the block is a Jordan block.
                let scale = (i + 1..=k).map(|j| y[(j, k)].norm()).fold(0.0, f64::max);
                if s.norm() > defect_tol * scale {
                    return Err(Error::NotSemiSimple {
                        cond: f64::INFINITY,
                    });
                }
            } else {
                let mut d = t[(i, i)] - tkk;
                if d.norm() < small {
                    d = Complex64::new(small, 0.0);
                }
                y[(i, k)] = -s / d;
            }
        }
    }
    Ok(y)
}

/// Oblique projectors `Pᵢ = vᵢ wᵢ*` onto the individual eigen-directions.
pub fn spectral_projectors(es: &EigenSystem) -> Vec<ComplexMatrix> {
    (0..es.n())
        .map(|i| es.v.column(i) * es.w.column(i).adjoint())
        .collect()
}

/// `f(A) = Σᵢ f(λᵢ) Pᵢ`.
pub fn apply_analytic_function<F>(es: &EigenSystem, f: F) -> Result<ComplexMatrix>
where
    F: Fn(Complex64) -> Complex64,
{
    let mut values = ComplexVector::zeros(es.n());
    for (out, &lambda) in values.iter_mut().zip(es.lambda.iter()) {
        let fx = f(lambda);
        if !(fx.re.is_finite() && fx.im.is_finite()) {
            return Err(Error::Domain { at: lambda });
        }
        *out = fx;
    }
    Ok(DiagonalMatrix::new(values).right_mul(&es.v) * es.w_star())
}

/// Coefficients `cᵢ = ⟨wᵢ, x⟩` of `x` in the eigenbasis, so `x = Σ cᵢ vᵢ`.
pub fn expand_in_reciprocal_basis(x: &ComplexVector, es: &EigenSystem) -> Result<ComplexVector> {
    if x.len() != es.n() {
        return Err(Error::dimension(
            "expand_in_reciprocal_basis",
            es.n(),
            x.len(),
        ));
    }
    Ok(es.w.adjoint() * x)
}
