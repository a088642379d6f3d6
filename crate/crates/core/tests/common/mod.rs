#![allow(dead_code)]

use pertexp::{Complex64, ComplexMatrix, ComplexVector};
use proptest::collection::vec;
use proptest::prelude::*;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn cond2(m: &ComplexMatrix) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    sv.max() / sv.min()
}

pub fn diag(values: &[Complex64]) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&ComplexVector::from_column_slice(values))
}

pub fn entries(rows: usize, cols: usize, scale: f64) -> impl Strategy<Value = ComplexMatrix> {
    vec((-1.0f64..1.0, -1.0f64..1.0), rows * cols).prop_map(move |v| {
        ComplexMatrix::from_fn(rows, cols, |r, k| {
            let (re, im) = v[r * cols + k];
            c(scale * re, scale * im)
        })
    })
}

pub fn real_entries(rows: usize, cols: usize, scale: f64) -> impl Strategy<Value = ComplexMatrix> {
    vec(-1.0f64..1.0, rows * cols).prop_map(move |v| {
        ComplexMatrix::from_fn(rows, cols, |r, k| c(scale * v[r * cols + k], 0.0))
    })
}

/// Eigenvalues whose real parts are increasing with steps in `[0.1, 1]`.
pub fn spread_values(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    (-2.0f64..0.0, vec((0.1f64..1.0, -1.0f64..1.0), n)).prop_map(|(start, steps)| {
        let mut re = start;
        steps
            .into_iter()
            .map(|(step, im)| {
                re += step;
                c(re, im)
            })
            .collect()
    })
}

/// A diagonalizable matrix `V diag(λ) V⁻¹` with `V = I + 0.4·G` and
/// eigenvalue separation at least 0.1.
#[derive(Debug, Clone)]
pub struct Diagonalizable {
    pub a: ComplexMatrix,
    pub values: Vec<Complex64>,
    pub v: ComplexMatrix,
}

pub fn diagonalizable(n: usize) -> impl Strategy<Value = Diagonalizable> {
    (spread_values(n), entries(n, n, 0.4)).prop_filter_map(
        "ill-conditioned basis",
        move |(values, g)| {
            let v = ComplexMatrix::identity(n, n) + g;
            if cond2(&v) > 1e2 {
                return None;
            }
            let inv = v.clone().try_inverse()?;
            let a = &v * diag(&values) * inv;
            Some(Diagonalizable { a, values, v })
        },
    )
}

pub fn sized_diagonalizable(lo: usize, hi: usize) -> impl Strategy<Value = Diagonalizable> {
    (lo..=hi).prop_flat_map(diagonalizable)
}

/// `(A₀, A₁)` with `A₀` diagonalizable and `A₁` small relative to the gaps.
pub fn perturbation_pair(
    lo: usize,
    hi: usize,
) -> impl Strategy<Value = (ComplexMatrix, ComplexMatrix)> {
    (lo..=hi)
        .prop_flat_map(|n| (diagonalizable(n), entries(n, n, 0.05)).prop_map(|(d, a1)| (d.a, a1)))
}

/// Unitary factor of a random complex matrix.
pub fn unitary(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    entries(n, n, 1.0).prop_filter_map("rank deficient", move |g| {
        if cond2(&g) > 1e6 {
            return None;
        }
        Some(g.qr().q())
    })
}

pub fn real_orthogonal(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    real_entries(n, n, 1.0).prop_filter_map("rank deficient", move |g| {
        if cond2(&g) > 1e6 {
            return None;
        }
        Some(g.qr().q())
    })
}

pub fn max_row_sum(m: &ComplexMatrix) -> f64 {
    m.row_iter()
        .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}
