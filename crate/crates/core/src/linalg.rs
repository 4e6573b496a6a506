//! Dense complex linear algebra kernels shared by the operator and
//! superoperator layers.
//!
//! General eigenproblems go to LAPACK; everything else is nalgebra. The
//! matrix exponential is a plain scaling-and-squaring Taylor evaluation.

use lax::layout::MatrixLayout;
use lax::Lapack;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Eigenpairs of a general complex matrix. Column `k` of `vectors` has unit
/// 2-norm and belongs to `values[k]`.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<C64>,
    pub vectors: DMatrix<C64>,
}

impl EigenDecomposition {
    pub fn vector(&self, k: usize) -> DVector<C64> {
        self.vectors.column(k).into_owned()
    }

    /// `‖A v_k − λ_k v_k‖₂` for every pair.
    pub fn residuals(&self, a: &DMatrix<C64>) -> Vec<f64> {
        let av = a * &self.vectors;
        (0..self.values.len())
            .map(|k| {
                let v = self.vectors.column(k);
                (av.column(k) - v * self.values[k]).norm() / v.norm().max(f64::MIN_POSITIVE)
            })
            .collect()
    }

    /// 2-norm condition number of the eigenvector matrix; infinite when it
    /// is numerically singular (defective input).
    pub fn condition_number(&self) -> f64 {
        if self.vectors.is_empty() {
            return 1.0;
        }
        let sv = self.vectors.clone().svd(false, false).singular_values;
        let max = sv.max();
        let min = sv.min();
        if min <= 0.0 {
            f64::INFINITY
        } else {
            max / min
        }
    }
}

/// Full eigen-decomposition of a square complex matrix (LAPACK `zgeev`).
pub fn eig(a: &DMatrix<C64>, label: &str) -> Result<EigenDecomposition> {
    let (values, vectors) = geev(a, true, label)?;
    let n = a.nrows();
    let mut vectors = DMatrix::from_column_slice(n, n, &vectors);
    for mut col in vectors.column_iter_mut() {
        let norm = col.norm();
        if norm > 0.0 {
            col /= C64::new(norm, 0.0);
        }
    }
    Ok(EigenDecomposition { values, vectors })
}

/// Eigenvalues only.
pub fn eigenvalues(a: &DMatrix<C64>, label: &str) -> Result<Vec<C64>> {
    geev(a, false, label).map(|(values, _)| values)
}

fn geev(a: &DMatrix<C64>, vectors: bool, label: &str) -> Result<(Vec<C64>, Vec<C64>)> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::NotSquare {
            rows: n,
            cols: a.ncols(),
        });
    }
    let failure = || Error::EigenFailure {
        label: label.to_string(),
    };
    if n == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    if a.iter().any(|z| !z.is_finite()) {
        return Err(failure());
    }
    let mut work = a.clone();
    let layout = MatrixLayout::F {
        col: n as i32,
        lda: n as i32,
    };
    let (values, vecs) = C64::eig(vectors, layout, work.as_mut_slice()).map_err(|_| failure())?;
    if values.iter().any(|v| !v.is_finite()) {
        return Err(failure());
    }
    Ok((values, vecs))
}

/// Spectral decomposition of a Hermitian matrix, eigenvalues ascending.
/// Only the Hermitian part `(A + A†)/2` is used.
pub fn hermitian_eig(a: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let n = a.nrows();
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    let h = (a + a.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

pub fn singular_values(a: &DMatrix<C64>) -> DVector<f64> {
    if a.is_empty() {
        return DVector::zeros(0);
    }
    a.clone().svd(false, false).singular_values
}

/// Largest singular value.
pub fn spectral_norm(a: &DMatrix<C64>) -> f64 {
    singular_values(a).iter().copied().fold(0.0, f64::max)
}

fn one_norm(a: &DMatrix<C64>) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Taylor degree used after scaling. With `‖A/2^s‖₁ ≤ 1/2` the truncation
/// term is below `0.5^17/17! ≈ 2e−20`, well under double precision.
const EXPM_TAYLOR_DEGREE: usize = 16;
const EXPM_SCALED_NORM: f64 = 0.5;

/// Matrix exponential by scaling and squaring.
pub fn expm(a: &DMatrix<C64>) -> DMatrix<C64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm requires a square matrix");
    let norm = one_norm(a);
    let squarings = if norm > EXPM_SCALED_NORM {
        (norm / EXPM_SCALED_NORM).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a * C64::new(0.5f64.powi(squarings), 0.0);

    // Horner: I + A(I + A/2(I + A/3(...)))
    let identity = DMatrix::<C64>::identity(n, n);
    let mut acc = identity.clone();
    for k in (1..=EXPM_TAYLOR_DEGREE).rev() {
        acc = &identity + (&scaled * acc) * C64::new(1.0 / k as f64, 0.0);
    }
    for _ in 0..squarings {
        acc = &acc * &acc;
    }
    acc
}

/// `A^p` by binary powering.
pub fn matrix_power(a: &DMatrix<C64>, mut p: usize) -> DMatrix<C64> {
    let n = a.nrows();
    let mut result = DMatrix::<C64>::identity(n, n);
    let mut base = a.clone();
    while p > 0 {
        if p & 1 == 1 {
            result = &result * &base;
        }
        p >>= 1;
        if p > 0 {
            base = &base * &base;
        }
    }
    result
}
