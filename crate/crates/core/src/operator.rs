//! Dense operators on a `d`-dimensional Hilbert space and the bracket, norm
//! and positivity primitives built on them.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{ensure_dim, Error, Result};
use crate::linalg::{self, C64};

/// Relative tolerance of the global tolerance policy.
pub const REL_TOL: f64 = 1e-9;
/// Absolute floor of the global tolerance policy.
pub const ABS_TOL: f64 = 1e-12;
/// Hermiticity bound for operators tagged Hermitian by a producer.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Relative-with-floor tolerance: `max(rel · max(1, scale), abs)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rel: REL_TOL,
            abs: ABS_TOL,
        }
    }
}

impl Tolerance {
    pub fn new(rel: f64) -> Self {
        Self { rel, abs: ABS_TOL }
    }

    pub fn scaled(&self, scale: f64) -> f64 {
        (self.rel * scale.max(1.0)).max(self.abs)
    }
}

pub(crate) fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// A square complex matrix acting on a `dim`-dimensional Hilbert space.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    m: DMatrix<C64>,
}

impl Operator {
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        Ok(Self { m })
    }

    pub(crate) fn from_matrix_unchecked(m: DMatrix<C64>) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        Self { m }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            m: DMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            m: DMatrix::identity(dim, dim),
        }
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self {
            m: DMatrix::from_fn(dim, dim, f),
        }
    }

    /// Row-major entries; `entries.len()` must be a perfect square.
    pub fn from_row_slice(entries: &[C64]) -> Result<Self> {
        let dim = (entries.len() as f64).sqrt().round() as usize;
        if dim * dim != entries.len() {
            return Err(Error::InvalidInput(format!(
                "{} entries do not form a square matrix",
                entries.len()
            )));
        }
        Ok(Self {
            m: DMatrix::from_row_slice(dim, dim, entries),
        })
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let v = DVector::from_iterator(diag.len(), diag.iter().map(|&x| c(x)));
        Self {
            m: DMatrix::from_diagonal(&v),
        }
    }

    /// `|i⟩⟨j|` in dimension `dim`.
    pub fn ket_bra(dim: usize, i: usize, j: usize) -> Self {
        let mut m = DMatrix::zeros(dim, dim);
        m[(i, j)] = c(1.0);
        Self { m }
    }

    /// `|ψ⟩⟨φ|`.
    pub fn outer(psi: &DVector<C64>, phi: &DVector<C64>) -> Self {
        Self {
            m: psi * phi.adjoint(),
        }
    }

    pub fn pauli_x() -> Self {
        Self::from_row_slice(&[c(0.0), c(1.0), c(1.0), c(0.0)]).unwrap()
    }

    pub fn pauli_y() -> Self {
        let i = C64::i();
        Self::from_row_slice(&[c(0.0), -i, i, c(0.0)]).unwrap()
    }

    pub fn pauli_z() -> Self {
        Self::diagonal(&[1.0, -1.0])
    }

    /// Lowering operator `|0⟩⟨1|` with `|0⟩` the ground state.
    pub fn sigma_minus() -> Self {
        Self::ket_bra(2, 0, 1)
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.m
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.m[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self { m: self.m.adjoint() }
    }

    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.m.norm()
    }

    pub fn spectral_norm(&self) -> f64 {
        linalg::spectral_norm(&self.m)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { m: &self.m * s }
    }

    /// `‖A − A†‖_F`.
    pub fn hermitian_residual(&self) -> f64 {
        (&self.m - self.m.adjoint()).norm()
    }

    /// Hermiticity under the producer invariant
    /// `‖A − A†‖_F ≤ 1e−12 · max(1, ‖A‖_F)`.
    pub fn is_hermitian(&self) -> bool {
        self.hermitian_residual() <= HERMITIAN_TOL * self.frobenius_norm().max(1.0)
    }

    /// `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self {
            m: (&self.m + self.m.adjoint()) * c(0.5),
        }
    }

    /// Column-stacking vectorization: entry `(r, c)` lands at `r + c·d`.
    pub fn vectorize(&self) -> DVector<C64> {
        DVector::from_column_slice(self.m.as_slice())
    }

    pub fn unvectorize(dim: usize, v: &DVector<C64>) -> Result<Self> {
        ensure_dim(dim * dim, v.len())?;
        Ok(Self {
            m: DMatrix::from_column_slice(dim, dim, v.as_slice()),
        })
    }

    pub fn mul_checked(&self, other: &Self) -> Result<Self> {
        ensure_dim(self.dim(), other.dim())?;
        Ok(self * other)
    }

    /// Real eigenvalues (ascending) and eigenvectors of the Hermitian part.
    pub fn eigh(&self) -> (Vec<f64>, DMatrix<C64>) {
        linalg::hermitian_eig(&self.m)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.m
            .iter()
            .zip(other.m.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl<'a> Add<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn add(self, rhs: &'a Operator) -> Operator {
        Operator { m: &self.m + &rhs.m }
    }
}

impl Add for Operator {
    type Output = Operator;
    fn add(self, rhs: Operator) -> Operator {
        Operator { m: self.m + rhs.m }
    }
}

impl<'a> Sub<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn sub(self, rhs: &'a Operator) -> Operator {
        Operator { m: &self.m - &rhs.m }
    }
}

impl Sub for Operator {
    type Output = Operator;
    fn sub(self, rhs: Operator) -> Operator {
        Operator { m: self.m - rhs.m }
    }
}

impl<'a> Mul<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn mul(self, rhs: &'a Operator) -> Operator {
        Operator { m: &self.m * &rhs.m }
    }
}

impl Mul for Operator {
    type Output = Operator;
    fn mul(self, rhs: Operator) -> Operator {
        Operator { m: self.m * rhs.m }
    }
}

impl Mul<C64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: C64) -> Operator {
        Operator { m: &self.m * rhs }
    }
}

impl Mul<f64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: f64) -> Operator {
        Operator { m: &self.m * c(rhs) }
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        Operator { m: -&self.m }
    }
}

/// `[A, B] = AB − BA`.
pub fn commutator(a: &Operator, b: &Operator) -> Result<Operator> {
    ensure_dim(a.dim(), b.dim())?;
    Ok(Operator {
        m: &a.m * &b.m - &b.m * &a.m,
    })
}

/// `{A, B} = AB + BA`.
pub fn anticommutator(a: &Operator, b: &Operator) -> Result<Operator> {
    ensure_dim(a.dim(), b.dim())?;
    Ok(Operator {
        m: &a.m * &b.m + &b.m * &a.m,
    })
}

/// Hilbert-Schmidt inner product `Tr(A†B)`.
pub fn hs_inner(a: &Operator, b: &Operator) -> Result<C64> {
    ensure_dim(a.dim(), b.dim())?;
    Ok(a.m.dotc(&b.m))
}

/// Sum of singular values.
pub fn trace_norm(a: &Operator) -> f64 {
    linalg::singular_values(&a.m).sum()
}

/// Split a Hermitian operator into positive and negative spectral parts,
/// `A = Q₊ − Q₋` with `Q± ⪰ 0` and `Q₊Q₋ = 0`. Eigenvalues within
/// `1e−12 · max(1, ‖A‖_F)` of zero are assigned to `Q₊`.
pub fn spectral_split(a: &Operator) -> Result<(Operator, Operator)> {
    let scale = a.frobenius_norm();
    let residual = a.hermitian_residual();
    if residual > Tolerance::default().scaled(scale) {
        return Err(Error::NotHermitian { residual });
    }
    let zero_tol = ABS_TOL * scale.max(1.0);
    let (values, vectors) = a.eigh();
    let d = a.dim();
    let mut plus = DMatrix::<C64>::zeros(d, d);
    let mut minus = DMatrix::<C64>::zeros(d, d);
    for (k, &lambda) in values.iter().enumerate() {
        let v = vectors.column(k);
        let proj = v * v.adjoint();
        if lambda >= -zero_tol {
            plus += proj * c(lambda);
        } else {
            minus += proj * c(-lambda);
        }
    }
    Ok((Operator { m: plus }, Operator { m: minus }))
}

/// Positivity verdict with its evidence.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PsdWitness {
    pub is_psd: bool,
    /// Smallest eigenvalue of the Hermitian part.
    pub min_eigenvalue: f64,
    /// `‖A − A†‖_F`.
    pub hermitian_residual: f64,
}

/// Positive-semidefiniteness test: Hermitian within `tol` and
/// `λ_min((A + A†)/2) ≥ −tol`.
pub fn is_psd(a: &Operator, tol: f64) -> PsdWitness {
    let hermitian_residual = a.hermitian_residual();
    let (values, _) = a.eigh();
    let min_eigenvalue = values.first().copied().unwrap_or(0.0);
    PsdWitness {
        is_psd: hermitian_residual <= tol && min_eigenvalue >= -tol,
        min_eigenvalue,
        hermitian_residual,
    }
}
