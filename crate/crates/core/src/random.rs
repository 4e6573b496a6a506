//! Seeded random operators.
//!
//! All draws come from ChaCha8, a counter-based stream cipher generator, so
//! a seed reproduces the same operators on every platform.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::operator::{c, Operator};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RandomKind {
    /// `(G + G†)/2` for a complex Ginibre matrix `G`.
    Hermitian,
    /// Haar-distributed, from the QR factorization of a Ginibre matrix with
    /// the phases of `diag(R)` absorbed into `Q`.
    Unitary,
    /// `GG†/Tr(GG†)`.
    Density,
    /// Complex Gaussian entries with `E|z|² = 1`.
    General,
}

/// Deterministic stream of random operators.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn gaussian(&mut self) -> C64 {
        let re: f64 = self.rng.sample(StandardNormal);
        let im: f64 = self.rng.sample(StandardNormal);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }

    fn ginibre(&mut self, dim: usize) -> DMatrix<C64> {
        // column-major fill order is part of the determinism contract
        let mut m = DMatrix::zeros(dim, dim);
        for col in 0..dim {
            for row in 0..dim {
                m[(row, col)] = self.gaussian();
            }
        }
        m
    }

    pub fn operator(&mut self, dim: usize, kind: RandomKind) -> Result<Operator> {
        if dim < 1 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        let g = self.ginibre(dim);
        let m = match kind {
            RandomKind::General => g,
            RandomKind::Hermitian => (&g + g.adjoint()) * c(0.5),
            RandomKind::Density => {
                let p = &g * g.adjoint();
                let tr = p.trace().re;
                p * c(1.0 / tr)
            }
            RandomKind::Unitary => {
                let qr = g.qr();
                let r = qr.r();
                let mut q = qr.q();
                for k in 0..dim {
                    let rkk = r[(k, k)];
                    let phase = if rkk.norm() > 0.0 {
                        rkk / rkk.norm()
                    } else {
                        c(1.0)
                    };
                    let mut col = q.column_mut(k);
                    col *= phase;
                }
                q
            }
        };
        Ok(Operator::from_matrix_unchecked(m))
    }

    /// Haar-random orthonormal basis, returned as the unitary whose columns
    /// are the basis vectors.
    pub fn basis(&mut self, dim: usize) -> Result<Operator> {
        self.operator(dim, RandomKind::Unitary)
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }
}

/// One operator drawn from a fresh stream seeded with `seed`.
pub fn random_instance(dim: usize, kind: RandomKind, seed: u64) -> Result<Operator> {
    Sampler::new(seed).operator(dim, kind)
}
