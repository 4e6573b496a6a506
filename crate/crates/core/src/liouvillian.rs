//! Lindblad generators and their superoperator matrices.
//!
//! Superoperators use column-stacking vectorization throughout, so that
//! `vec(AXB) = (Bᵀ ⊗ A) vec(X)`.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{ensure_dim, Error, Result};
use crate::linalg::C64;
use crate::operator::{c, Operator, HERMITIAN_TOL};

pub const VECTORIZATION: &str = "column-stacking";

/// How the jump terms enter the generator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorForm {
    /// `L_k ρ L_k† − ½{L_k†L_k, ρ}`.
    #[default]
    Lindblad,
    /// `−L_k ρ L_k† − ½{L_k†L_k, ρ}`. Not a valid generator; used as a
    /// negative control for the certification checks.
    SignFlippedJump,
}

impl GeneratorForm {
    pub(crate) fn jump_sign(self) -> f64 {
        match self {
            GeneratorForm::Lindblad => 1.0,
            GeneratorForm::SignFlippedJump => -1.0,
        }
    }
}

/// Hamiltonian plus jump operators, taken exactly as given.
#[derive(Clone, Debug)]
pub struct LindbladModel {
    label: String,
    hamiltonian: Operator,
    jump_ops: Vec<Operator>,
    form: GeneratorForm,
}

impl LindbladModel {
    pub fn new(label: impl Into<String>, hamiltonian: Operator, jump_ops: Vec<Operator>) -> Result<Self> {
        let dim = hamiltonian.dim();
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        let residual = hamiltonian.hermitian_residual();
        if residual > HERMITIAN_TOL * hamiltonian.frobenius_norm().max(1.0) {
            return Err(Error::NotHermitian { residual });
        }
        for l in &jump_ops {
            ensure_dim(dim, l.dim())?;
        }
        Ok(Self {
            label: label.into(),
            hamiltonian,
            jump_ops,
            form: GeneratorForm::Lindblad,
        })
    }

    pub fn with_form(mut self, form: GeneratorForm) -> Self {
        self.form = form;
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    pub fn hamiltonian(&self) -> &Operator {
        &self.hamiltonian
    }

    pub fn jump_ops(&self) -> &[Operator] {
        &self.jump_ops
    }

    pub fn form(&self) -> GeneratorForm {
        self.form
    }

    /// `Σ_k L_k†L_k`.
    pub fn dissipation_sum(&self) -> Operator {
        let d = self.dim();
        let mut acc = DMatrix::<C64>::zeros(d, d);
        for l in &self.jump_ops {
            acc += l.matrix().adjoint() * l.matrix();
        }
        Operator::from_matrix_unchecked(acc)
    }

    /// `L(R) = −i[H, R] + Σ_k (L_k R L_k† − ½{L_k†L_k, R})`.
    pub fn apply(&self, r: &Operator) -> Result<Operator> {
        ensure_dim(self.dim(), r.dim())?;
        let h = self.hamiltonian.matrix();
        let rm = r.matrix();
        let mi = C64::new(0.0, -1.0);
        let mut out = (h * rm - rm * h) * mi;
        let s = c(self.form.jump_sign());
        for l in &self.jump_ops {
            let lm = l.matrix();
            let ld = lm.adjoint();
            let ldl = &ld * lm;
            out += (lm * rm * &ld) * s;
            out -= (&ldl * rm + rm * &ldl) * c(0.5);
        }
        Ok(Operator::from_matrix_unchecked(out))
    }

    /// `L†(A) = i[H, A] + Σ_k (L_k† A L_k − ½{L_k†L_k, A})`.
    pub fn apply_adjoint(&self, a: &Operator) -> Result<Operator> {
        ensure_dim(self.dim(), a.dim())?;
        let h = self.hamiltonian.matrix();
        let am = a.matrix();
        let mut out = (h * am - am * h) * C64::i();
        let s = c(self.form.jump_sign());
        for l in &self.jump_ops {
            let lm = l.matrix();
            let ld = lm.adjoint();
            let ldl = &ld * lm;
            out += (&ld * am * lm) * s;
            out -= (&ldl * am + am * &ldl) * c(0.5);
        }
        Ok(Operator::from_matrix_unchecked(out))
    }

    /// Matrix of `L` (forward) or `L†` (adjoint). Both are assembled
    /// directly from their Kronecker formulas; neither is derived from the
    /// other.
    pub fn superoperator(&self, direction: Direction) -> Superoperator {
        let d = self.dim();
        let id = DMatrix::<C64>::identity(d, d);
        let h = self.hamiltonian.matrix();
        let s = c(self.form.jump_sign());
        let matrix = match direction {
            Direction::Forward => {
                let mut m = (id.kronecker(h) - h.transpose().kronecker(&id)) * C64::new(0.0, -1.0);
                for l in &self.jump_ops {
                    let lm = l.matrix();
                    let ldl = lm.adjoint() * lm;
                    m += lm.conjugate().kronecker(lm) * s;
                    m -= (id.kronecker(&ldl) + ldl.transpose().kronecker(&id)) * c(0.5);
                }
                m
            }
            Direction::Adjoint => {
                let mut m = (id.kronecker(h) - h.transpose().kronecker(&id)) * C64::i();
                for l in &self.jump_ops {
                    let lm = l.matrix();
                    let ld = lm.adjoint();
                    let ldl = &ld * lm;
                    m += lm.transpose().kronecker(&ld) * s;
                    m -= (id.kronecker(&ldl) + ldl.transpose().kronecker(&id)) * c(0.5);
                }
                m
            }
        };
        Superoperator {
            dim: d,
            matrix,
            direction,
            label: self.label.clone(),
        }
    }

    /// `[L⁽⁰⁾, L⁽¹⁾, …, L⁽ᴷ⁾]` with `L⁽⁰⁾ = −i[H,·] − ½Σ{L_k†L_k, ·}` and
    /// `L⁽ᵏ⁾ = L_k · L_k†`; the components sum to the forward generator.
    pub fn split_components(&self) -> Vec<Superoperator> {
        let d = self.dim();
        let id = DMatrix::<C64>::identity(d, d);
        let h = self.hamiltonian.matrix();
        let gamma = self.dissipation_sum();
        let g = gamma.matrix();
        let l0 = (id.kronecker(h) - h.transpose().kronecker(&id)) * C64::new(0.0, -1.0)
            - (id.kronecker(g) + g.transpose().kronecker(&id)) * c(0.5);
        let s = c(self.form.jump_sign());
        let mut parts = vec![Superoperator {
            dim: d,
            matrix: l0,
            direction: Direction::Forward,
            label: format!("{}:L0", self.label),
        }];
        for (k, l) in self.jump_ops.iter().enumerate() {
            let lm = l.matrix();
            parts.push(Superoperator {
                dim: d,
                matrix: lm.conjugate().kronecker(lm) * s,
                direction: Direction::Forward,
                label: format!("{}:L{}", self.label, k + 1),
            });
        }
        parts
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Adjoint,
}

/// A `d² × d²` matrix acting on column-stacked operators.
#[derive(Clone, Debug)]
pub struct Superoperator {
    dim: usize,
    matrix: DMatrix<C64>,
    direction: Direction,
    label: String,
}

impl Superoperator {
    pub fn from_matrix(
        dim: usize,
        matrix: DMatrix<C64>,
        direction: Direction,
        label: impl Into<String>,
    ) -> Result<Self> {
        ensure_dim(dim * dim, matrix.nrows())?;
        ensure_dim(dim * dim, matrix.ncols())?;
        Ok(Self {
            dim,
            matrix,
            direction,
            label: label.into(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn convention(&self) -> &'static str {
        VECTORIZATION
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.norm()
    }

    pub fn apply(&self, r: &Operator) -> Result<Operator> {
        ensure_dim(self.dim, r.dim())?;
        Operator::unvectorize(self.dim, &(&self.matrix * r.vectorize()))
    }

    /// `‖vec(𝟙)† S‖₂`, zero for a trace-annihilating forward generator.
    pub fn trace_annihilation_residual(&self) -> f64 {
        let one = Operator::identity(self.dim).vectorize();
        (one.adjoint() * &self.matrix).norm()
    }
}
