//! Algebraic certification of eigenvalue non-positivity directly from the
//! Lindblad form.
//!
//! Three ingredients are checked numerically:
//!
//! * positivity of the off-diagonal elements `⟨j|L(|i⟩⟨i|)|j⟩`, `i ≠ j`, in
//!   any orthonormal basis (a Kossakowski condition);
//! * the operator ordering `L†(A†A) ⪰ L†(A†)A + A†L†(A)`, whose gap is the
//!   sum of squares `Σ_k [L_k, A]†[L_k, A]`;
//! * the chain that combines them for every eigenpair `L†(A) = λA`:
//!   with `A†A = Σ a_i |i⟩⟨i|` normalized to `1 = a₁ ≥ a₂ ≥ … ≥ 0`,
//!   `2 Re λ ≤ g := ⟨1|L†(A†A)|1⟩ ≤ ⟨1|L†(𝟙)|1⟩ = 0`.

use serde::Serialize;

use crate::error::{ensure_dim, Error, Result};
use crate::linalg::{self, C64};
use crate::liouvillian::{Direction, LindbladModel};
use crate::operator::{is_psd, Operator};
use crate::random::Sampler;
use crate::verify::Check;

/// Orthonormality bound for caller-supplied bases.
pub const BASIS_TOL: f64 = 1e-10;
/// Bound on the imaginary part of a Kossakowski element.
pub const REALNESS_TOL: f64 = 1e-11;
/// Eigenvectors with Frobenius norm below this are rejected.
pub const EIGENVECTOR_FLOOR: f64 = 1e-12;

/// `⟨j|L(|i⟩⟨i|)|j⟩` evaluated through the generator, with the closed form
/// `s·Σ_k |⟨j|L_k|i⟩|² − δ_ij ⟨i|Σ_k L_k†L_k|i⟩` alongside (`s = −1` for the
/// sign-flipped control, `+1` otherwise).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MatrixElement {
    pub value: f64,
    pub imaginary: f64,
    pub closed_form: f64,
}

fn check_basis(basis: &Operator) -> Result<()> {
    let d = basis.dim();
    let err = (&basis.adjoint() * basis - Operator::identity(d)).frobenius_norm();
    if err > BASIS_TOL {
        return Err(Error::InvalidInput(format!(
            "basis is not orthonormal (‖U†U − 𝟙‖_F = {err:.3e})"
        )));
    }
    Ok(())
}

fn element_unchecked(model: &LindbladModel, basis: &Operator, i: usize, j: usize) -> Result<MatrixElement> {
    let ket_i = basis.matrix().column(i).into_owned();
    let ket_j = basis.matrix().column(j).into_owned();
    let image = model.apply(&Operator::outer(&ket_i, &ket_i))?;
    let z = (ket_j.adjoint() * image.matrix() * &ket_j)[(0, 0)];

    let sign = model.form().jump_sign();
    let mut closed = 0.0;
    for l in model.jump_ops() {
        closed += sign * (ket_j.adjoint() * l.matrix() * &ket_i)[(0, 0)].norm_sqr();
    }
    if i == j {
        closed -= (ket_i.adjoint() * model.dissipation_sum().matrix() * &ket_i)[(0, 0)].re;
    }
    Ok(MatrixElement {
        value: z.re,
        imaginary: z.im,
        closed_form: closed,
    })
}

/// Kossakowski matrix element in the basis given by the columns of the
/// unitary `basis`.
pub fn kossakowski_element(
    model: &LindbladModel,
    basis: &Operator,
    i: usize,
    j: usize,
) -> Result<MatrixElement> {
    ensure_dim(model.dim(), basis.dim())?;
    check_basis(basis)?;
    let d = basis.dim();
    if i >= d || j >= d {
        return Err(Error::InvalidInput(format!(
            "basis index out of range: ({i}, {j}) in dimension {d}"
        )));
    }
    element_unchecked(model, basis, i, j)
}

/// Minimum off-diagonal Kossakowski element over the computational basis and
/// `bases` Haar-random bases. Passes iff the minimum is `≥ −tol` and every
/// element is real within [`REALNESS_TOL`].
pub fn kossakowski_check(model: &LindbladModel, bases: usize, seed: u64, tol: f64) -> Result<Check> {
    let d = model.dim();
    let mut sampler = Sampler::new(seed);
    let mut min = f64::INFINITY;
    let mut at = (0usize, 0usize, 0usize);
    let mut max_imag = 0.0f64;
    let mut max_closed_form_dev = 0.0f64;
    for b in 0..=bases {
        let basis = if b == 0 {
            Operator::identity(d)
        } else {
            sampler.basis(d)?
        };
        for i in 0..d {
            for j in 0..d {
                let e = element_unchecked(model, &basis, i, j)?;
                max_imag = max_imag.max(e.imaginary.abs());
                max_closed_form_dev = max_closed_form_dev.max((e.value - e.closed_form).abs());
                if i != j && e.value < min {
                    min = e.value;
                    at = (b, i, j);
                }
            }
        }
    }
    if d < 2 {
        min = 0.0;
    }
    let passed = min >= -tol && max_imag <= REALNESS_TOL;
    let mut check = Check::with_verdict("lemma1.kossakowski", passed, (-min).max(0.0), tol)
        .witness("min_element", min)
        .witness("basis", at.0 as f64)
        .witness("i", at.1 as f64)
        .witness("j", at.2 as f64)
        .witness("max_imaginary", max_imag)
        .witness("closed_form_deviation", max_closed_form_dev)
        .witness("bases", (bases + 1) as f64);
    if !passed {
        check = check.note(format!(
            "basis {} element (i={}, j={}) = {:.6e}",
            at.0, at.1, at.2, min
        ));
    }
    Ok(check)
}

/// `D(A) = L†(A†A) − L†(A†)A − A†L†(A)`.
pub fn dissipation_operator(model: &LindbladModel, a: &Operator) -> Result<Operator> {
    ensure_dim(model.dim(), a.dim())?;
    let ad = a.adjoint();
    let lhs = model.apply_adjoint(&(&ad * a))?;
    let t1 = &model.apply_adjoint(&ad)? * a;
    let t2 = &ad * &model.apply_adjoint(a)?;
    Ok(&(&lhs - &t1) - &t2)
}

/// `Σ_k (L_kA − AL_k)†(L_kA − AL_k)`.
pub fn dissipation_sum_of_squares(model: &LindbladModel, a: &Operator) -> Result<Operator> {
    ensure_dim(model.dim(), a.dim())?;
    let d = model.dim();
    let mut acc = Operator::zeros(d);
    for l in model.jump_ops() {
        let comm = &(l * a) - &(a * l);
        acc = acc + &comm.adjoint() * &comm;
    }
    Ok(acc)
}

/// Passes iff `D(A)` equals its sum-of-squares form within
/// `tol · max(1, ‖D‖_F, ‖SOS‖_F)` and both are PSD at that tolerance.
pub fn dissipation_sos_check(model: &LindbladModel, a: &Operator, tol: f64) -> Result<Check> {
    let dop = dissipation_operator(model, a)?;
    let sos = dissipation_sum_of_squares(model, a)?;
    let scale = dop.frobenius_norm().max(sos.frobenius_norm()).max(1.0);
    let identity_residual = (&dop - &sos).frobenius_norm() / scale;
    let scaled_tol = tol * scale;
    let psd_d = is_psd(&dop, scaled_tol);
    let psd_s = is_psd(&sos, scaled_tol);
    let passed = identity_residual <= tol && psd_d.is_psd && psd_s.is_psd;
    Ok(
        Check::with_verdict("lemma2.dissipation_ordering", passed, identity_residual, tol)
            .witness("min_eigenvalue_d", psd_d.min_eigenvalue)
            .witness("min_eigenvalue_sos", psd_s.min_eigenvalue)
            .witness("d_frobenius", dop.frobenius_norm()),
    )
}

/// One eigenpair of `L†` pushed through the non-positivity chain.
#[derive(Clone, Debug, Serialize)]
pub struct ProofChainRecord {
    pub eigenvalue: C64,
    /// `A` rescaled so the largest eigenvalue of `A†A` is one.
    #[serde(skip)]
    pub eigenvector: Operator,
    /// Eigenvalues of `A†A`, descending, `a₁ = 1`.
    pub a_spectrum: Vec<f64>,
    /// `g = ⟨1|L†(A†A)|1⟩`.
    pub bound_value: f64,
    pub bound_imaginary: f64,
    /// `g − 2 Re λ`; non-negative when the bound holds.
    pub margin: f64,
    /// `‖L†(A) − λA‖_F / ‖A‖_F`.
    pub eigen_residual: f64,
    /// `‖L†(A†) − λ*A†‖_F / ‖A‖_F`.
    pub conjugate_residual: f64,
    /// `|a₁ − 1|`.
    pub normalization_residual: f64,
    /// `Σ_i a_i ⟨1|L†(|i⟩⟨i|)|1⟩`, equal to `g`.
    pub weighted_sum: f64,
    /// `Σ_i ⟨1|L†(|i⟩⟨i|)|1⟩ = ⟨1|L†(𝟙)|1⟩`, zero by trace conservation.
    pub unweighted_sum: f64,
    /// `min_{i>1} ⟨1|L†(|i⟩⟨i|)|1⟩`, non-negative by the Kossakowski
    /// condition.
    pub min_offdiagonal: f64,
    pub passed: bool,
}

/// Run the non-positivity chain on every eigenpair of the adjoint
/// generator. Eigenpairs come from the superoperator matrix; every
/// inequality is evaluated with operator-level `apply_adjoint`.
pub fn proof_chain_check(model: &LindbladModel, tol: f64) -> Result<Vec<ProofChainRecord>> {
    let d = model.dim();
    let adjoint = model.superoperator(Direction::Adjoint);
    let decomposition = linalg::eig(adjoint.matrix(), adjoint.label())?;
    let mut records = Vec::with_capacity(decomposition.values.len());
    for (k, &lambda) in decomposition.values.iter().enumerate() {
        let raw = Operator::unvectorize(d, &decomposition.vector(k))?;
        if raw.frobenius_norm() < EIGENVECTOR_FLOOR {
            return Err(Error::DegenerateEigenvector { eigenvalue: lambda });
        }
        records.push(chain_record(model, lambda, &raw, tol)?);
    }
    Ok(records)
}

/// The chain for a single eigenpair `L†(A) = λA`.
pub fn chain_record(model: &LindbladModel, lambda: C64, a: &Operator, tol: f64) -> Result<ProofChainRecord> {
    let d = model.dim();
    let gram = &a.adjoint() * a;
    let (values, vectors) = gram.eigh();
    let top = *values.last().expect("dimension ≥ 1");
    if top.is_nan() || top <= 0.0 || top.sqrt() < EIGENVECTOR_FLOOR {
        return Err(Error::DegenerateEigenvector { eigenvalue: lambda });
    }

    let a = a * (1.0 / top.sqrt());
    let norm = a.frobenius_norm();
    let image = model.apply_adjoint(&a)?;
    let eigen_residual = (&image - &(&a * lambda)).frobenius_norm() / norm;
    let a_dag = a.adjoint();
    let image_dag = model.apply_adjoint(&a_dag)?;
    let conjugate_residual = (&image_dag - &(&a_dag * lambda.conj())).frobenius_norm() / norm;

    let a_spectrum: Vec<f64> = values.iter().rev().map(|v| v / top).collect();
    let normalization_residual = (a_spectrum[0] - 1.0).abs();
    let kets: Vec<_> = (0..d).rev().map(|i| vectors.column(i).into_owned()).collect();
    let top_ket = &kets[0];

    let p = &a_dag * &a;
    let lp = model.apply_adjoint(&p)?;
    let g = (top_ket.adjoint() * lp.matrix() * top_ket)[(0, 0)];

    let mut weighted_sum = 0.0;
    let mut unweighted_sum = 0.0;
    let mut min_offdiagonal = f64::INFINITY;
    for (i, ket) in kets.iter().enumerate() {
        let li = model.apply_adjoint(&Operator::outer(ket, ket))?;
        let e = (top_ket.adjoint() * li.matrix() * top_ket)[(0, 0)].re;
        weighted_sum += a_spectrum[i] * e;
        unweighted_sum += e;
        if i > 0 {
            min_offdiagonal = min_offdiagonal.min(e);
        }
    }
    if d < 2 {
        min_offdiagonal = 0.0;
    }

    let two_re = 2.0 * lambda.re;
    let passed = two_re <= g.re + tol && g.re <= tol;
    Ok(ProofChainRecord {
        eigenvalue: lambda,
        eigenvector: a,
        a_spectrum,
        bound_value: g.re,
        bound_imaginary: g.im,
        margin: g.re - two_re,
        eigen_residual,
        conjugate_residual,
        normalization_residual,
        weighted_sum,
        unweighted_sum,
        min_offdiagonal,
        passed,
    })
}

/// Collapse chain records into one check; the residual is the worst of
/// `2 Re λ − g` and `g`.
pub fn proof_chain_summary(records: &[ProofChainRecord], tol: f64) -> Check {
    let worst = records
        .iter()
        .map(|r| (-r.margin).max(r.bound_value))
        .fold(f64::NEG_INFINITY, f64::max);
    let failures = records.iter().filter(|r| !r.passed).count();
    let max_eigen_residual = records.iter().map(|r| r.eigen_residual).fold(0.0, f64::max);
    Check::with_verdict("proof_chain", failures == 0, worst, tol)
        .witness("records", records.len() as f64)
        .witness("failures", failures as f64)
        .witness("max_eigen_residual", max_eigen_residual)
}
