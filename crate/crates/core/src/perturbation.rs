//! Expansion terms of `A(ε) = A₀ + εA₁`.
//!
//! With `A(ε)V(ε) = V(ε)Λ(ε)`, `V(ε) = Σ εᵏVₖ` and `Λ(ε) = Σ εᵏΛₖ`, the
//! eigenvectors are normalized by `W₀*V₀ = I` and `Diag(W₀*Vₖ) = 0` for
//! `k ≥ 1` (each `vᵢ(ε)` has unit component along `v₀ᵢ`). Under that
//! normalization the terms are unique and follow from
//!
//! ```text
//! Λₖ = Diag(W₀* A₁ Vₖ₋₁)
//! Vₖ = V₀ (Π†∘ ∘ W₀*(Σᵢ₌₁ᵏ⁻¹ VᵢΛₖ₋ᵢ − A₁Vₖ₋₁))
//! ```
//!
//! where `Πᵢⱼ = λ₀ᵢ − λ₀ⱼ`. Repeated eigenvalues of `A₀` first get their
//! eigenbasis rotated so that the cluster blocks of `W₀*A₁V₀` are diagonal.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{
    check_finite, check_same_shape, check_square, diag_of, eigen_decompose, normalize_columns,
    ComplexMatrix, DiagonalMatrix, EigenSystem,
};
use crate::sylvester::SylvesterOperator;

/// Off-diagonal entries of a cluster block of `W₀*A₁V₀` above this fraction
/// of `‖W₀*A₁V₀‖_F` mean the base has not been rotated.
const ROTATION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationProblem {
    pub a0: ComplexMatrix,
    pub a1: ComplexMatrix,
    /// `None` selects `1e-8·max(1, maxᵢ|λ₀ᵢ|)`.
    pub cluster_tol: Option<f64>,
    pub order: usize,
}

impl PerturbationProblem {
    pub fn new(a0: ComplexMatrix, a1: ComplexMatrix, order: usize) -> Result<Self> {
        let n = check_square("PerturbationProblem (A0)", &a0)?;
        check_same_shape("PerturbationProblem (A1)", &a1, n, n)?;
        check_finite(&a0)?;
        check_finite(&a1)?;
        if order < 1 {
            return Err(Error::InvalidArgument(
                "expansion order must be >= 1".into(),
            ));
        }
        Ok(Self {
            a0,
            a1,
            cluster_tol: None,
            order,
        })
    }

    pub fn with_cluster_tol(mut self, cluster_tol: f64) -> Self {
        self.cluster_tol = Some(cluster_tol);
        self
    }

    pub fn n(&self) -> usize {
        self.a0.nrows()
    }

    /// `A₀ + εA₁`.
    pub fn matrix_at(&self, eps: f64) -> ComplexMatrix {
        &self.a0 + &self.a1 * Complex64::new(eps, 0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionTerms {
    /// `Λ₀, V₀, W₀`, rotated inside degenerate clusters.
    pub base: EigenSystem,
    /// `Λ₀ … Λ_K`, indexed by order.
    pub lambda: Vec<DiagonalMatrix>,
    /// `V₀ … V_K`, indexed by order.
    pub v: Vec<ComplexMatrix>,
    pub w1: ComplexMatrix,
    /// One flag per cluster of `base`: whether its basis was rotated.
    pub rotated: Vec<bool>,
}

impl ExpansionTerms {
    pub fn order(&self) -> usize {
        self.lambda.len() - 1
    }

    /// `‖A₀Vₖ + A₁Vₖ₋₁ − Σᵢ₌₀ᵏ VᵢΛₖ₋ᵢ‖_F`, the defect of the order-`k`
    /// coefficient equation.
    pub fn order_residual(&self, a0: &ComplexMatrix, a1: &ComplexMatrix, k: usize) -> f64 {
        assert!(k >= 1 && k <= self.order());
        let mut r = a0 * &self.v[k] + a1 * &self.v[k - 1];
        for i in 0..=k {
            r -= self.lambda[k - i].right_mul(&self.v[i]);
        }
        r.norm()
    }

    /// `maxᵢ |(W₀*Vₖ)ᵢᵢ|`.
    pub fn normalization_defect(&self, k: usize) -> f64 {
        let wv = self.base.w_star() * &self.v[k];
        let target = if k == 0 { 1.0 } else { 0.0 };
        wv.diagonal()
            .iter()
            .map(|z| (z - Complex64::new(target, 0.0)).norm())
            .fold(0.0, f64::max)
    }
}

/// `W₀* A₁ V₀`.
fn coupling(es0: &EigenSystem, a1: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_same_shape("perturbation (A1)", a1, es0.n(), es0.n())?;
    Ok(es0.w_star() * a1 * &es0.v)
}

fn require_rotated(es0: &EigenSystem, m: &ComplexMatrix) -> Result<()> {
    let bound = ROTATION_TOL * m.norm();
    for cluster in es0.clusters.iter().filter(|c| c.len() > 1) {
        let mixed = cluster
            .iter()
            .any(|&i| cluster.iter().any(|&j| i != j && m[(i, j)].norm() > bound));
        if mixed {
            return Err(Error::DegenerateBase {
                cluster: cluster.clone(),
            });
        }
    }
    Ok(())
}

/// `Λ₁ = Diag(W₀*A₁V₀)`, i.e. `λ₁ᵢ = w₀ᵢ*A₁v₀ᵢ`.
///
/// A base with repeated eigenvalues is accepted only once its cluster
/// blocks of `W₀*A₁V₀` are diagonal (see [`resolve_degeneracy`]).
pub fn first_order_eigenvalues(es0: &EigenSystem, a1: &ComplexMatrix) -> Result<DiagonalMatrix> {
    let m = coupling(es0, a1)?;
    require_rotated(es0, &m)?;
    diag_of(&m)
}

/// Minimum-norm solutions of the first-order Sylvester equations:
/// `V₁ = −V₀(Π†∘ ∘ W₀*A₁V₀)` and `W₁* = (Π†∘ ∘ W₀*A₁V₀)W₀*`.
///
/// Returns `(V₁, W₁)`.
pub fn first_order_eigenvectors(
    es0: &EigenSystem,
    a1: &ComplexMatrix,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let m = coupling(es0, a1)?;
    require_rotated(es0, &m)?;
    let op = SylvesterOperator::perturbation(&es0.reconstruct(), es0)?;
    let coeffs = op.pi_pseudo_inverse().component_mul(&m);
    let v1 = -(&es0.v * &coeffs);
    let w1 = &es0.w * coeffs.adjoint();
    Ok((v1, w1))
}

/// Rotates the eigenbasis inside every repeated-eigenvalue cluster so that
/// the cluster blocks of `W₀*A₁V₀` become diagonal.
///
/// Returns the rotated eigensystem and `Λ₁`. Inside a cluster `Λ₁` holds the
/// eigenvalues of the block, ordered by descending real part, then
/// descending imaginary part; columns of `V₀` follow that order.
pub fn resolve_degeneracy(
    es0: &EigenSystem,
    a1: &ComplexMatrix,
) -> Result<(EigenSystem, DiagonalMatrix)> {
    let m = coupling(es0, a1)?;
    let mut lambda1 = m.diagonal();
    if !es0.is_degenerate() {
        return Ok((es0.clone(), DiagonalMatrix::new(lambda1)));
    }

    let mut v = es0.v.clone();
    for cluster in es0.clusters.iter().filter(|c| c.len() > 1) {
        let size = cluster.len();
        let block = ComplexMatrix::from_fn(size, size, |r, c| m[(cluster[r], cluster[c])]);
        let split = eigen_decompose(&block, None).map_err(|e| match e {
            Error::NotSemiSimple { .. } => Error::SplittingFailed {
                cluster: cluster.clone(),
            },
            other => other,
        })?;
        if split.is_degenerate() {
            return Err(Error::HigherOrderDegeneracy {
                cluster: cluster.clone(),
            });
        }

        let old = ComplexMatrix::from_fn(v.nrows(), size, |r, c| v[(r, cluster[c])]);
        let mut rotated = old * &split.v;
        normalize_columns(&mut rotated);
        for (slot, &col) in cluster.iter().enumerate() {
            let src = size - 1 - slot;
            v.set_column(col, &rotated.column(src));
            lambda1[col] = split.lambda[src];
        }
    }

    let base = EigenSystem::from_eigenvectors(es0.lambda.clone(), v, Some(es0.cluster_tol))?;
    Ok((base, DiagonalMatrix::new(lambda1)))
}

/// Computes `Λ₀…Λ_K`, `V₀…V_K` and `W₁`.
///
/// Inside a degenerate cluster the coefficients `(W₀*Vₖ)ᵢⱼ`, `i ≠ j`, lie in
/// the null space of the order-`k` equation; they are fixed by solvability
/// of the order-`k+1` equation, which requires the cluster block of its
/// right-hand side to vanish.
pub fn expand(problem: &PerturbationProblem) -> Result<ExpansionTerms> {
    if problem.order < 1 {
        return Err(Error::InvalidArgument(
            "expansion order must be >= 1".into(),
        ));
    }
    let n = check_square("expand (A0)", &problem.a0)?;
    check_same_shape("expand (A1)", &problem.a1, n, n)?;

    let es0 = eigen_decompose(&problem.a0, problem.cluster_tol)?;
    let (base, lambda1) = resolve_degeneracy(&es0, &problem.a1)?;
    let op = SylvesterOperator::perturbation(&problem.a0, &base)?;
    let a1 = &problem.a1;
    let w0_star = base.w_star();
    let m = &w0_star * a1 * &base.v;
    let degenerate: Vec<&Vec<usize>> = base.clusters.iter().filter(|c| c.len() > 1).collect();

    let mut lambda = vec![base.lambda_diag(), lambda1];
    let mut v = vec![base.v.clone()];
    // coeffs[k] = W₀*Vₖ
    let mut coeffs = vec![ComplexMatrix::identity(n, n)];

    for k in 1..=problem.order {
        if k > 1 {
            lambda.push(diag_of(&(&w0_star * a1 * &v[k - 1]))?);
        }
        // The boxed recursion also carries V₀Λₖ on the right-hand side; its
        // spectral coordinates W₀*V₀Λₖ = Λₖ are diagonal, where Π†∘ is zero.
        let mut rhs = -(a1 * &v[k - 1]);
        for i in 1..k {
            rhs += lambda[k - i].right_mul(&v[i]);
        }
        let mut ck = op.pseudo_coefficients(&rhs)?;

        for cluster in &degenerate {
            fill_cluster_block(&mut ck, cluster, &m, &coeffs, &lambda, k);
        }

        v.push(op.from_spectral(&ck));
        coeffs.push(ck);
    }

    // W₁* = −(W₀*V₁)W₀*, so W₀*V₁ + W₁*V₀ = 0.
    let w1 = -(&base.w * coeffs[1].adjoint());
    let rotated = base.clusters.iter().map(|c| c.len() > 1).collect();

    Ok(ExpansionTerms {
        base,
        lambda,
        v,
        w1,
        rotated,
    })
}

/// Within-cluster off-diagonal coefficients of order `k`:
///
/// `cₖ[i,j] (λ₁ⱼ − λ₁ᵢ) = Σ_{l∉c} M[i,l] cₖ[l,j] − Σᵢ'₌₁ᵏ⁻¹ cᵢ'[i,j] λ_{k+1−i', j}`
fn fill_cluster_block(
    ck: &mut ComplexMatrix,
    cluster: &[usize],
    m: &ComplexMatrix,
    coeffs: &[ComplexMatrix],
    lambda: &[DiagonalMatrix],
    k: usize,
) {
    let n = m.nrows();
    let outside: Vec<usize> = (0..n).filter(|l| !cluster.contains(l)).collect();
    let mut block = Vec::with_capacity(cluster.len() * cluster.len());
    for &i in cluster {
        for &j in cluster {
            if i == j {
                continue;
            }
            let mut num: Complex64 = outside.iter().map(|&l| m[(i, l)] * ck[(l, j)]).sum();
            for (ip, c) in coeffs.iter().enumerate().take(k).skip(1) {
                num -= c[(i, j)] * lambda[k + 1 - ip][j];
            }
            block.push(((i, j), num / (lambda[1][j] - lambda[1][i])));
        }
    }
    for ((i, j), value) in block {
        ck[(i, j)] = value;
    }
}

/// Partial sums `Σₖ εᵏΛₖ` and `Σₖ εᵏVₖ`.
pub fn evaluate(terms: &ExpansionTerms, eps: f64) -> (DiagonalMatrix, ComplexMatrix) {
    let e = Complex64::new(eps, 0.0);
    let top = terms.order();
    let mut lam = terms.lambda[top].clone();
    let mut v = terms.v[top].clone();
    for k in (0..top).rev() {
        lam = &lam.scale(e) + &terms.lambda[k];
        v = v * e + &terms.v[k];
    }
    (lam, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn real(rows: usize, cols: usize, data: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_row_iterator(rows, cols, data.iter().map(|&x| c(x)))
    }

    fn max_abs(m: &ComplexMatrix) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn diag_close(d: &DiagonalMatrix, expected: &[f64], tol: f64) -> bool {
        d.len() == expected.len()
            && d.iter()
                .zip(expected)
                .all(|(z, &e)| (z - c(e)).norm() <= tol)
    }

    fn swap() -> ComplexMatrix {
        real(2, 2, &[0.0, 1.0, 1.0, 0.0])
    }

    #[test]
    fn first_order_eigenvalues_examples() {
        let es = eigen_decompose(&real(2, 2, &[1.0, 0.0, 0.0, 2.0]), None).unwrap();
        assert!(diag_close(
            &first_order_eigenvalues(&es, &swap()).unwrap(),
            &[0.0, 0.0],
            0.0
        ));
        let zero = ComplexMatrix::zeros(2, 2);
        assert!(diag_close(
            &first_order_eigenvalues(&es, &zero).unwrap(),
            &[0.0, 0.0],
            0.0
        ));

        let es = eigen_decompose(&real(2, 2, &[1.0, 1.0, 0.0, 2.0]), None).unwrap();
        let a1 = real(2, 2, &[0.0, 0.0, 1.0, 0.0]);
        let l1 = first_order_eigenvalues(&es, &a1).unwrap();
        assert!(diag_close(&l1, &[-1.0, 1.0], 1e-14), "{l1:?}");
    }

    #[test]
    fn first_order_requires_rotation() {
        let es = eigen_decompose(&ComplexMatrix::identity(2, 2), None).unwrap();
        assert!(matches!(
            first_order_eigenvalues(&es, &swap()),
            Err(Error::DegenerateBase { .. })
        ));
        assert!(matches!(
            first_order_eigenvectors(&es, &swap()),
            Err(Error::DegenerateBase { .. })
        ));
        // A₁ diagonal: the block is already diagonal, no rotation needed
        let l1 = first_order_eigenvalues(&es, &real(2, 2, &[3.0, 0.0, 0.0, 7.0])).unwrap();
        assert!(diag_close(&l1, &[3.0, 7.0], 0.0));
    }

    #[test]
    fn first_order_eigenvectors_examples() {
        let es = eigen_decompose(&real(2, 2, &[1.0, 0.0, 0.0, 2.0]), None).unwrap();
        let (v1, w1) = first_order_eigenvectors(&es, &swap()).unwrap();
        assert_eq!(v1, real(2, 2, &[0.0, 1.0, -1.0, 0.0]));
        assert!(max_abs(&(es.w_star() * &v1 + w1.adjoint() * &es.v)) == 0.0);

        let (v1, w1) = first_order_eigenvectors(&es, &ComplexMatrix::zeros(2, 2)).unwrap();
        assert_eq!(v1, ComplexMatrix::zeros(2, 2));
        assert_eq!(w1, ComplexMatrix::zeros(2, 2));
    }

    #[test]
    fn first_order_eigenvectors_non_hermitian() {
        let a0 = real(2, 2, &[1.0, 1.0, 0.0, 2.0]);
        let a1 = real(2, 2, &[0.0, 0.0, 1.0, 0.0]);
        let es = eigen_decompose(&a0, None).unwrap();
        let (v1, w1) = first_order_eigenvectors(&es, &a1).unwrap();
        // V₀ has unit columns here, so column j is scaled by ‖v₀ⱼ‖ relative to
        // the hand computation with V₀ = [[1,1],[0,1]], V₁ = [[-1,-1],[-1,0]].
        assert!(
            max_abs(&(&v1 - real(2, 2, &[-1.0, -S, -1.0, 0.0]))) < 1e-15,
            "{v1}"
        );

        let l1 = first_order_eigenvalues(&es, &a1).unwrap();
        // A₀V₁ − V₁Λ₀ = V₀Λ₁ − A₁V₀
        let lhs = &a0 * &v1 - es.lambda_diag().right_mul(&v1);
        let rhs = l1.right_mul(&es.v) - &a1 * &es.v;
        assert!(max_abs(&(lhs - rhs)) < 1e-14);
        // W₁*A₀ − Λ₀W₁* = Λ₁W₀* − W₀*A₁
        let w1s = w1.adjoint();
        let lhs = &w1s * &a0 - es.lambda_diag().left_mul(&w1s);
        let rhs = l1.left_mul(&es.w_star()) - es.w_star() * &a1;
        assert!(max_abs(&(lhs - rhs)) < 1e-14);
        assert!((es.w_star() * &v1)
            .diagonal()
            .iter()
            .all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn resolve_identity_with_swap() {
        let es = eigen_decompose(&ComplexMatrix::identity(2, 2), None).unwrap();
        let (base, l1) = resolve_degeneracy(&es, &swap()).unwrap();
        assert!(diag_close(&l1, &[1.0, -1.0], 1e-15));
        assert!(
            max_abs(&(&base.v - real(2, 2, &[S, S, S, -S]))) < 1e-15,
            "{}",
            base.v
        );
        assert!(max_abs(&(base.w_star() * &base.v - ComplexMatrix::identity(2, 2))) < 1e-15);
    }

    #[test]
    fn resolve_diagonal_block_keeps_basis() {
        let es = eigen_decompose(&ComplexMatrix::identity(2, 2), None).unwrap();
        let a1 = real(2, 2, &[3.0, 0.0, 0.0, 7.0]);
        let (base, l1) = resolve_degeneracy(&es, &a1).unwrap();
        // descending order inside the cluster
        assert!(diag_close(&l1, &[7.0, 3.0], 0.0));
        assert_eq!(base.v, real(2, 2, &[0.0, 1.0, 1.0, 0.0]));
    }

    #[test]
    fn resolve_touches_only_the_cluster() {
        let a0 = real(3, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 5.0]);
        let a1 = real(3, 3, &[0.0, 1.0, 0.3, 1.0, 0.0, -0.2, 0.3, -0.2, 0.5]);
        let es = eigen_decompose(&a0, None).unwrap();
        let (base, l1) = resolve_degeneracy(&es, &a1).unwrap();
        assert_eq!(base.v.column(2), es.v.column(2));
        assert!(diag_close(&l1, &[1.0, -1.0, 0.5], 1e-15));
        assert!(max_abs(&(&a0 * &base.v - base.lambda_diag().right_mul(&base.v))) < 1e-15);
        // the rotated cluster block is diagonal
        let m = base.w_star() * &a1 * &base.v;
        assert!(m[(0, 1)].norm() < 1e-15 && m[(1, 0)].norm() < 1e-15);
    }

    #[test]
    fn resolve_errors() {
        let es = eigen_decompose(&ComplexMatrix::identity(2, 2), None).unwrap();
        let nilpotent = real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(
            resolve_degeneracy(&es, &nilpotent),
            Err(Error::SplittingFailed { .. })
        ));
        let scalar = real(2, 2, &[3.0, 0.0, 0.0, 3.0]);
        assert!(matches!(
            resolve_degeneracy(&es, &scalar),
            Err(Error::HigherOrderDegeneracy { .. })
        ));
    }

    #[test]
    fn expand_distinct_golden() {
        let p = PerturbationProblem::new(real(2, 2, &[1.0, 0.0, 0.0, 2.0]), swap(), 2).unwrap();
        let t = expand(&p).unwrap();
        assert_eq!(t.order(), 2);
        assert!(diag_close(&t.lambda[1], &[0.0, 0.0], 1e-15));
        assert!(diag_close(&t.lambda[2], &[-1.0, 1.0], 1e-15));
        assert!(max_abs(&(&t.v[1] - real(2, 2, &[0.0, 1.0, -1.0, 0.0]))) < 1e-15);
        assert!(max_abs(&t.v[2]) < 1e-15);
        assert_eq!(t.rotated, vec![false, false]);
    }

    #[test]
    fn expand_degenerate_exact_linear() {
        let p = PerturbationProblem::new(ComplexMatrix::identity(2, 2), swap(), 3).unwrap();
        let t = expand(&p).unwrap();
        assert!(diag_close(&t.lambda[1], &[1.0, -1.0], 1e-15));
        for k in 2..=3 {
            assert!(t.lambda[k].max_abs() < 1e-15);
        }
        for k in 1..=3 {
            assert!(max_abs(&t.v[k]) < 1e-15);
        }
        assert_eq!(t.rotated, vec![true]);
    }

    #[test]
    fn expand_with_zero_perturbation() {
        let a0 = real(3, 3, &[2.0, 1.0, 0.0, 0.0, -1.0, 3.0, 1.0, 0.0, 4.0]);
        let p = PerturbationProblem::new(a0, ComplexMatrix::zeros(3, 3), 4).unwrap();
        let t = expand(&p).unwrap();
        for k in 1..=4 {
            assert_eq!(t.lambda[k].max_abs(), 0.0);
            assert_eq!(max_abs(&t.v[k]), 0.0);
        }
    }

    #[test]
    fn expand_rejects_bad_problems() {
        let i2 = ComplexMatrix::identity(2, 2);
        assert!(matches!(
            PerturbationProblem::new(i2.clone(), i2.clone(), 0),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            PerturbationProblem::new(i2.clone(), ComplexMatrix::identity(3, 3), 1),
            Err(Error::Dimension { .. })
        ));
        let jordan = real(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        let p = PerturbationProblem::new(jordan, i2.clone(), 1).unwrap();
        assert!(matches!(expand(&p), Err(Error::NotSemiSimple { .. })));
        let p = PerturbationProblem::new(i2.clone(), i2 * c(2.0), 1).unwrap();
        assert!(matches!(
            expand(&p),
            Err(Error::HigherOrderDegeneracy { .. })
        ));
    }

    #[test]
    fn degenerate_higher_orders_satisfy_coefficient_equations() {
        let a0 = real(3, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 3.0]);
        let a1 = real(3, 3, &[0.2, 0.5, 0.7, 0.5, -0.1, 0.4, 0.7, 0.4, 0.3]);
        let p = PerturbationProblem::new(a0.clone(), a1.clone(), 4).unwrap();
        let t = expand(&p).unwrap();
        for k in 1..=4 {
            assert!(t.order_residual(&a0, &a1, k) < 1e-13, "k={k}");
            assert!(t.normalization_defect(k) < 1e-15);
        }
        // the first-order pair condition holds with the corrected W₁
        let pair = t.base.w_star() * &t.v[1] + t.w1.adjoint() * &t.base.v;
        assert!(pair.norm() < 1e-14);
    }

    #[test]
    fn evaluate_examples() {
        let p = PerturbationProblem::new(ComplexMatrix::identity(2, 2), swap(), 1).unwrap();
        let t = expand(&p).unwrap();
        let (l, v) = evaluate(&t, 0.0);
        assert_eq!(l, t.lambda[0]);
        assert_eq!(v, t.v[0]);
        for eps in [0.3, -2.0, 10.0] {
            let (l, _) = evaluate(&t, eps);
            assert!(diag_close(&l, &[1.0 + eps, 1.0 - eps], 1e-14));
        }

        let p = PerturbationProblem::new(real(2, 2, &[1.0, 0.0, 0.0, 2.0]), swap(), 3).unwrap();
        let t = expand(&p).unwrap();
        let (lp, vp) = evaluate(&t, 0.2);
        let (lm, vm) = evaluate(&t, -0.2);
        let even_l = &(&lp + &lm).scale(c(0.5));
        let expected_l = &t.lambda[0] + &t.lambda[2].scale(c(0.04));
        assert!(diag_close(
            even_l,
            &expected_l.iter().map(|z| z.re).collect::<Vec<_>>(),
            1e-15
        ));
        let even_v = (vp + vm) * c(0.5);
        assert!(max_abs(&(even_v - (&t.v[0] + &t.v[2] * c(0.04)))) < 1e-15);
    }
}
