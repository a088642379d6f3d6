#![allow(dead_code)]

use pertexp::{Complex64, ComplexMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn real(rows: usize, cols: usize, data: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |r, k| c(data[r * cols + k], 0.0))
}

pub fn normal(rng: &mut Rng64) -> f64 {
    rng.sample(StandardNormal)
}

pub fn gaussian(rng: &mut Rng64, rows: usize, cols: usize, complex: bool) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re = normal(rng);
        let im = if complex { normal(rng) } else { 0.0 };
        c(re, im)
    })
}

pub fn cond2(m: &ComplexMatrix) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    sv.max() / sv.min()
}

pub fn spectral_norm(m: &ComplexMatrix) -> f64 {
    m.clone().svd(false, false).singular_values.max()
}

pub fn min_separation(values: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            best = best.min((values[i] - values[j]).norm());
        }
    }
    best
}

/// Eigenvalues in `[-2, 2]` (or the square `[-2, 2]²` when complex) with
/// pairwise distance at least `sep`.
pub fn separated_values(rng: &mut Rng64, n: usize, sep: f64, complex: bool) -> Vec<Complex64> {
    loop {
        let values: Vec<Complex64> = (0..n)
            .map(|_| {
                let im = if complex {
                    rng.random_range(-2.0..2.0)
                } else {
                    0.0
                };
                c(rng.random_range(-2.0..2.0), im)
            })
            .collect();
        if min_separation(&values) >= sep {
            return values;
        }
    }
}

/// Random basis with 2-norm condition number at most `max_cond`.
pub fn conditioned_basis(rng: &mut Rng64, n: usize, max_cond: f64, complex: bool) -> ComplexMatrix {
    loop {
        let v = gaussian(rng, n, n, complex);
        if cond2(&v) <= max_cond {
            return v;
        }
    }
}

pub fn unitary(rng: &mut Rng64, n: usize, complex: bool) -> ComplexMatrix {
    gaussian(rng, n, n, complex).qr().q()
}

pub fn diag(values: &[Complex64]) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(values))
}

/// `V diag(values) V⁻¹`.
pub fn similar(v: &ComplexMatrix, values: &[Complex64]) -> ComplexMatrix {
    let inv = v.clone().try_inverse().expect("basis is invertible");
    v * diag(values) * inv
}

pub struct RandomProblem {
    pub a0: ComplexMatrix,
    pub a1: ComplexMatrix,
    pub separation: f64,
    pub complex: bool,
}

/// Diagonalizable `A₀` with eigenvalue separation ≥ 0.1 and `cond(V₀) ≤ 1e3`;
/// `A₁` is scaled so that `‖V₀⁻¹A₁V₀‖₂` is half the smallest eigenvalue gap.
pub fn random_problem(rng: &mut Rng64) -> RandomProblem {
    let n = rng.random_range(3..=6);
    let complex = rng.random_bool(0.5);
    let values = separated_values(rng, n, 0.1, complex);
    let v = conditioned_basis(rng, n, 1e3, complex);
    let a0 = similar(&v, &values);
    let raw = gaussian(rng, n, n, complex);
    let inv = v.clone().try_inverse().unwrap();
    let coupling = spectral_norm(&(&inv * &raw * &v));
    let separation = min_separation(&values);
    let a1 = raw * c(0.5 * separation / coupling, 0.0);
    RandomProblem {
        a0,
        a1,
        separation,
        complex,
    }
}

pub fn ensemble(seed: u64, count: usize) -> Vec<RandomProblem> {
    let mut r = rng(seed);
    (0..count).map(|_| random_problem(&mut r)).collect()
}

pub fn max_row_sum(m: &ComplexMatrix) -> f64 {
    m.row_iter()
        .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
