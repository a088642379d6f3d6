//! Brute-force reference values for checking expansions.
//!
//! Nothing here uses the recursion in [`crate::perturbation`]: eigencurves
//! come from a fresh eigendecomposition of `A₀ + εA₁` at each sample, and
//! expansion coefficients are recovered by least-squares polynomial fits.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::perturbation::{evaluate, ExpansionTerms, PerturbationProblem};
use crate::spectral::{
    check_same_shape, eigen_decompose, ComplexMatrix, ComplexVector, DiagonalMatrix, EigenSystem,
};

/// Errors below this are treated as round-off: the expansion is exact there.
pub const EXACT_FLOOR: f64 = 1e-14;

/// Slopes must reach `K + SLOPE_MARGIN` for an order-`K` expansion.
pub const SLOPE_MARGIN: f64 = 0.9;

#[derive(Debug, Clone, PartialEq)]
pub struct MatchOptions {
    /// Two candidate eigenvalues whose distances to a prediction differ by
    /// at most this are ambiguous. `None` selects `1e-10·max(1, max|pred|)`.
    pub matching_tol: Option<f64>,
    /// `|w₀ᵢ*vᵢ(ε)| ≤ breakdown_tol·‖w₀ᵢ‖·‖vᵢ(ε)‖` is a normalization breakdown.
    pub breakdown_tol: f64,
}

impl Default for MatchOptions {
    fn default() -> Self {
        Self {
            matching_tol: None,
            breakdown_tol: 1e-8,
        }
    }
}

/// Exact eigenpairs of `A₀ + εA₁`, paired with the base ordering and scaled
/// so that `w₀ᵢ*vᵢ(ε) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigencurveSample {
    pub eps: f64,
    pub lambda: ComplexVector,
    pub v: ComplexMatrix,
}

pub fn exact_eigencurve(
    problem: &PerturbationProblem,
    base: &EigenSystem,
    eps: f64,
) -> Result<EigencurveSample> {
    exact_eigencurve_with(problem, base, eps, &MatchOptions::default())
}

pub fn exact_eigencurve_with(
    problem: &PerturbationProblem,
    base: &EigenSystem,
    eps: f64,
    options: &MatchOptions,
) -> Result<EigencurveSample> {
    let n = base.n();
    check_same_shape("exact_eigencurve (A0)", &problem.a0, n, n)?;
    check_same_shape("exact_eigencurve (A1)", &problem.a1, n, n)?;
    if !eps.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "eps must be finite, got {eps}"
        )));
    }
    if eps == 0.0 {
        return Ok(EigencurveSample {
            eps,
            lambda: base.lambda.clone(),
            v: base.v.clone(),
        });
    }

    // Λ₀ + εΛ₁ separates degenerate clusters, which Λ₀ alone cannot.
    let w0_star = base.w_star();
    let first = (&w0_star * &problem.a1 * &base.v).diagonal();
    let predicted: Vec<Complex64> = (0..n).map(|i| base.lambda[i] + first[i] * eps).collect();

    let sample = eigen_decompose(&problem.matrix_at(eps), None)?;
    if sample.is_degenerate() {
        return Err(Error::MatchingFailed { eps });
    }
    let tol = options
        .matching_tol
        .unwrap_or_else(|| 1e-10 * predicted.iter().map(|z| z.norm()).fold(1.0, f64::max));
    let assignment = match_eigenvalues(&predicted, sample.lambda.as_slice(), tol)
        .ok_or(Error::MatchingFailed { eps })?;

    let mut lambda = ComplexVector::zeros(n);
    let mut v = ComplexMatrix::zeros(n, n);
    for (i, &j) in assignment.iter().enumerate() {
        let column = sample.v.column(j);
        let overlap = w0_star.row(i).transpose().dot(&column);
        let bound = options.breakdown_tol * base.w.column(i).norm() * column.norm();
        if overlap.norm() <= bound {
            return Err(Error::NormalizationBreakdown { eps, index: i });
        }
        lambda[i] = sample.lambda[j];
        v.set_column(i, &(column / overlap));
    }
    Ok(EigencurveSample { eps, lambda, v })
}

/// Greedy one-to-one nearest assignment `predicted[i] → candidates[result[i]]`.
///
/// Fails when a prediction has two candidates at nearly equal distance, or
/// when it would not receive its nearest candidate.
fn match_eigenvalues(
    predicted: &[Complex64],
    candidates: &[Complex64],
    matching_tol: f64,
) -> Option<Vec<usize>> {
    let n = predicted.len();
    let mut pairs = Vec::with_capacity(n * n);
    for (i, p) in predicted.iter().enumerate() {
        let mut dist: Vec<(f64, usize)> = candidates
            .iter()
            .enumerate()
            .map(|(j, c)| ((p - c).norm(), j))
            .collect();
        dist.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        if n > 1 && dist[1].0 - dist[0].0 <= matching_tol {
            return None;
        }
        pairs.extend(dist.into_iter().map(|(d, j)| (d, i, j)));
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut assigned = vec![usize::MAX; n];
    let mut taken = vec![false; n];
    let mut first_choice = vec![usize::MAX; n];
    for &(_, i, j) in &pairs {
        if first_choice[i] == usize::MAX {
            first_choice[i] = j;
        }
    }
    for (_, i, j) in pairs {
        if assigned[i] == usize::MAX && !taken[j] {
            assigned[i] = j;
            taken[j] = true;
        }
    }
    (assigned == first_choice).then_some(assigned)
}

/// Fitted log-log slope of a remainder sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Slope {
    Fitted(f64),
    /// Fewer than two errors rise above the noise floor.
    Exact,
}

impl Slope {
    pub fn passes(&self, order: usize) -> bool {
        match *self {
            Slope::Exact => true,
            Slope::Fitted(s) => s >= order as f64 + SLOPE_MARGIN,
        }
    }

    pub fn value(&self) -> Option<f64> {
        match *self {
            Slope::Exact => None,
            Slope::Fitted(s) => Some(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub order: usize,
    pub eps_grid: Vec<f64>,
    /// `‖λ_exact(ε) − λ_expansion(ε)‖_∞` per grid point.
    pub lambda_errors: Vec<f64>,
    /// `‖V_exact(ε) − V_expansion(ε)‖_F` per grid point.
    pub vector_errors: Vec<f64>,
    /// Errors at or below this level are rounding noise and do not enter the
    /// slope fit: `max(EXACT_FLOOR, 10n·u·cond(V₀)·(‖A₀‖_F + ε‖A₁‖_F))`.
    pub noise_floor: Vec<f64>,
    pub slope_lambda: Slope,
    pub slope_vector: Slope,
    pub pass: bool,
}

/// `points` log-spaced values from `min` to `max`, inclusive.
pub fn log_grid(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if !(min > 0.0 && min < max && max.is_finite()) || points < 2 {
        return Err(Error::GridUnsuitable(format!(
            "need 0 < min < max and at least 2 points, got [{min}, {max}] x {points}"
        )));
    }
    let (lo, hi) = (min.ln(), max.ln());
    let step = (hi - lo) / (points - 1) as f64;
    Ok((0..points)
        .map(|k| match k {
            0 => min,
            k if k == points - 1 => max,
            k => (lo + step * k as f64).exp(),
        })
        .collect())
}

/// 8 log-spaced points in `[1e-3, 1e-1]`.
pub fn default_grid() -> Vec<f64> {
    log_grid(1e-3, 1e-1, 8).expect("static grid")
}

/// `0, ±h, ±2h, …, ±points_per_side·h`, ascending.
pub fn symmetric_grid(h: f64, points_per_side: usize) -> Vec<f64> {
    let m = points_per_side as i64;
    (-m..=m).map(|j| j as f64 * h).collect()
}

/// Least-squares slope of `log(err)` against `log(ε)` over points whose
/// error exceeds the matching entry of `floor`.
fn fit_slope(eps: &[f64], errors: &[f64], floor: &[f64]) -> Slope {
    let pts: Vec<(f64, f64)> = eps
        .iter()
        .zip(errors)
        .zip(floor)
        .filter(|((_, &e), &f)| e > f)
        .map(|((&x, &e), _)| (x.ln(), e.ln()))
        .collect();
    if pts.len() < 2 {
        return Slope::Exact;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Slope::Fitted(sxy / sxx)
}

/// Remainder of the truncated expansion against exact eigencurves, with
/// fitted log-log slopes. An order-`K` expansion passes when both slopes
/// reach `K + 0.9`.
pub fn taylor_remainder_slopes(
    problem: &PerturbationProblem,
    terms: &ExpansionTerms,
    eps_grid: &[f64],
) -> Result<ValidationReport> {
    if eps_grid.len() < 4 {
        return Err(Error::GridUnsuitable(format!(
            "need at least 4 points, got {}",
            eps_grid.len()
        )));
    }
    if let Some(bad) = eps_grid.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
        return Err(Error::GridUnsuitable(format!(
            "eps values must be positive, got {bad}"
        )));
    }
    let mut lambda_errors = Vec::with_capacity(eps_grid.len());
    let mut vector_errors = Vec::with_capacity(eps_grid.len());
    let mut noise_floor = Vec::with_capacity(eps_grid.len());
    let (n0, n1) = (problem.a0.norm(), problem.a1.norm());
    let p = 10.0 * problem.a0.nrows() as f64;
    for &eps in eps_grid {
        // Backward-error level of the reference eigensolver at this ε.
        noise_floor.push(EXACT_FLOOR.max(p * f64::EPSILON * terms.base.cond_v * (n0 + eps * n1)));
        let exact = exact_eigencurve(problem, &terms.base, eps)?;
        let (lam, v) = evaluate(terms, eps);
        let lerr = (&exact.lambda - lam.diagonal())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        lambda_errors.push(lerr);
        vector_errors.push((&exact.v - v).norm());
    }
    let order = terms.order();
    let slope_lambda = fit_slope(eps_grid, &lambda_errors, &noise_floor);
    let slope_vector = fit_slope(eps_grid, &vector_errors, &noise_floor);
    Ok(ValidationReport {
        order,
        eps_grid: eps_grid.to_vec(),
        lambda_errors,
        vector_errors,
        noise_floor,
        pass: slope_lambda.passes(order) && slope_vector.passes(order),
        slope_lambda,
        slope_vector,
    })
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FitOptions {
    /// Polynomial degree; `None` selects `min(k + 5, points − 1)`.
    pub degree: Option<usize>,
}

/// Largest acceptable condition number of the scaled Vandermonde matrix.
const MAX_FIT_COND: f64 = 1e10;

/// Recovers `Λₖ` and `Vₖ` by fitting polynomials in `ε` to exact eigencurve
/// samples (normalized with `w₀ᵢ*vᵢ(ε) = 1`).
pub fn finite_difference_coefficients(
    problem: &PerturbationProblem,
    base: &EigenSystem,
    k: usize,
    eps_grid: &[f64],
) -> Result<(DiagonalMatrix, ComplexMatrix)> {
    finite_difference_coefficients_with(problem, base, k, eps_grid, &FitOptions::default())
}

pub fn finite_difference_coefficients_with(
    problem: &PerturbationProblem,
    base: &EigenSystem,
    k: usize,
    eps_grid: &[f64],
    options: &FitOptions,
) -> Result<(DiagonalMatrix, ComplexMatrix)> {
    let points = eps_grid.len();
    if points < k + 2 {
        return Err(Error::GridUnsuitable(format!(
            "order {k} needs at least {} points, got {points}",
            k + 2
        )));
    }
    let degree = options.degree.unwrap_or((k + 5).min(points - 1));
    if degree < k + 1 || degree >= points {
        return Err(Error::GridUnsuitable(format!(
            "degree {degree} incompatible with order {k} and {points} points"
        )));
    }
    let scale = eps_grid.iter().map(|e| e.abs()).fold(0.0, f64::max);
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::GridUnsuitable(
            "grid must contain a nonzero finite eps".into(),
        ));
    }

    let vander = DMatrix::from_fn(points, degree + 1, |r, c| {
        Complex64::new((eps_grid[r] / scale).powi(c as i32), 0.0)
    });
    let svd = vander.svd(true, true);
    let sv = &svd.singular_values;
    if !(sv.min() > 0.0 && sv.max() / sv.min() <= MAX_FIT_COND) {
        return Err(Error::GridUnsuitable(
            "ill-conditioned Vandermonde fit".into(),
        ));
    }

    let n = base.n();
    let mut data = ComplexMatrix::zeros(points, n + n * n);
    for (r, &eps) in eps_grid.iter().enumerate() {
        let sample = exact_eigencurve(problem, base, eps)?;
        for i in 0..n {
            data[(r, i)] = sample.lambda[i];
        }
        for (idx, z) in sample.v.iter().enumerate() {
            data[(r, n + idx)] = *z;
        }
    }
    let fit = svd
        .solve(&data, 0.0)
        .map_err(|e| Error::GridUnsuitable(e.to_string()))?;
    let unscale = Complex64::new(scale.powi(-(k as i32)), 0.0);
    let row = fit.row(k) * unscale;

    let lambda = DiagonalMatrix::new(ComplexVector::from_iterator(n, row.iter().take(n).copied()));
    let v = ComplexMatrix::from_iterator(n, n, row.iter().skip(n).copied());
    Ok((lambda, v))
}
