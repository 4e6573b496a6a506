//! Eigen-analysis of superoperators: spectrum classification, dissipative
//! gap, steady states, and the non-positivity and adjoint-pairing checks.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, EigenDecomposition, C64};
use crate::liouvillian::{Direction, LindbladModel, Superoperator};
use crate::operator::{c, is_psd, Operator, PsdWitness, REL_TOL};
use crate::verify::Check;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenClass {
    /// `|λ| ≤ tol`.
    Zero,
    /// `|Re λ| ≤ tol < |λ|`.
    Imaginary,
    Decaying,
}

impl EigenClass {
    pub fn classify(lambda: C64, tol: f64) -> Self {
        if lambda.norm() <= tol {
            EigenClass::Zero
        } else if lambda.re.abs() <= tol {
            EigenClass::Imaginary
        } else {
            EigenClass::Decaying
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EigenClass::Zero => "zero",
            EigenClass::Imaginary => "imaginary",
            EigenClass::Decaying => "decaying",
        }
    }
}

impl fmt::Display for EigenClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A Hermitian element of the zero eigenspace, trace-normalized when its
/// trace is non-negligible. Positivity is reported, not enforced.
#[derive(Clone, Debug)]
pub struct SteadyCandidate {
    pub state: Operator,
    pub eigenvalue: C64,
    pub trace_normalized: bool,
    pub psd: PsdWitness,
}

#[derive(Clone, Debug)]
pub struct SpectrumReport {
    pub label: String,
    pub direction: Direction,
    /// Sorted by descending real part, then descending imaginary part.
    pub eigenvalues: Vec<C64>,
    pub classes: Vec<EigenClass>,
    pub gap: Option<f64>,
    pub steady_candidates: Vec<SteadyCandidate>,
    /// `‖S v − λ v‖₂ / ‖v‖₂` per eigenpair.
    pub residuals: Vec<f64>,
    pub tolerance_used: f64,
    pub frobenius_norm: f64,
    /// Condition number of the eigenvector matrix; large values flag
    /// (near-)defective spectra.
    pub eigenvector_condition: f64,
}

impl SpectrumReport {
    pub fn max_real_part(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|l| l.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn count(&self, class: EigenClass) -> usize {
        self.classes.iter().filter(|&&c| c == class).count()
    }
}

/// Classification threshold `1e−9 · max(1, ‖S‖_F)`.
pub fn default_tolerance(s: &Superoperator) -> f64 {
    REL_TOL * s.frobenius_norm().max(1.0)
}

fn descending(a: &C64, b: &C64) -> Ordering {
    b.re.total_cmp(&a.re).then_with(|| b.im.total_cmp(&a.im))
}

fn sorted_order(values: &[C64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| descending(&values[i], &values[j]));
    order
}

/// Full eigen-decomposition of `S`, classified against `tol`.
pub fn eigenspectrum(s: &Superoperator, tol: f64) -> Result<SpectrumReport> {
    let decomposition = linalg::eig(s.matrix(), s.label())?;
    let residuals_raw = decomposition.residuals(s.matrix());
    let order = sorted_order(&decomposition.values);
    let eigenvalues: Vec<C64> = order.iter().map(|&k| decomposition.values[k]).collect();
    let residuals = order.iter().map(|&k| residuals_raw[k]).collect();
    let classes: Vec<EigenClass> = eigenvalues
        .iter()
        .map(|&l| EigenClass::classify(l, tol))
        .collect();
    let steady_candidates = match s.direction() {
        Direction::Forward => steady_from_decomposition(s.dim(), &decomposition, &order, tol),
        Direction::Adjoint => Vec::new(),
    };
    let mut report = SpectrumReport {
        label: s.label().to_string(),
        direction: s.direction(),
        eigenvalues,
        classes,
        gap: None,
        steady_candidates,
        residuals,
        tolerance_used: tol,
        frobenius_norm: s.frobenius_norm(),
        eigenvector_condition: decomposition.condition_number(),
    };
    report.gap = dissipative_gap(&report);
    Ok(report)
}

/// `Δ = −max Re λ` over decaying eigenvalues; absent when there are none.
pub fn dissipative_gap(report: &SpectrumReport) -> Option<f64> {
    report
        .eigenvalues
        .iter()
        .zip(&report.classes)
        .filter(|(_, &class)| class == EigenClass::Decaying)
        .map(|(l, _)| l.re)
        .max_by(f64::total_cmp)
        .map(|re| -re)
}

/// Passes iff `max_n Re λ_n ≤ tol`; the maximal real part is the residual.
pub fn verify_nonpositivity(report: &SpectrumReport, tol: f64) -> Check {
    let max_re = report.max_real_part();
    Check::upper_bound("nonpositivity", max_re, tol)
        .witness("eigenvalue_count", report.eigenvalues.len() as f64)
}

/// Passes iff some eigenvalue has `|λ| ≤ tol`.
pub fn verify_zero_eigenvalue(report: &SpectrumReport, tol: f64) -> Check {
    let min_abs = report
        .eigenvalues
        .iter()
        .map(|l| l.norm())
        .fold(f64::INFINITY, f64::min);
    Check::upper_bound("zero_eigenvalue", min_abs, tol)
        .witness("zero_count", report.count(EigenClass::Zero) as f64)
}

fn hermitize_kernel_vector(x: &Operator) -> Operator {
    // Pick the phase maximizing ‖Herm(e^{iθ}X)‖, i.e. e^{2iθ} = conj(w)/|w|
    // with w = Tr(X X); otherwise e^{iπ/2}·ρ would Hermitize to zero.
    let w = (x.matrix() * x.matrix()).trace();
    let phase = if w.norm() > 0.0 {
        (w.conj() / w.norm()).sqrt()
    } else {
        c(1.0)
    };
    x.scale(phase).hermitian_part()
}

fn steady_from_decomposition(
    dim: usize,
    decomposition: &EigenDecomposition,
    order: &[usize],
    tol: f64,
) -> Vec<SteadyCandidate> {
    order
        .iter()
        .filter(|&&k| decomposition.values[k].norm() <= tol)
        .map(|&k| {
            let x = Operator::unvectorize(dim, &decomposition.vector(k)).expect("d² eigenvector");
            let mut state = hermitize_kernel_vector(&x);
            let tr = state.trace().re;
            let trace_normalized = tr.abs() > tol;
            if trace_normalized {
                state = &state * (1.0 / tr);
            }
            let psd = is_psd(&state, tol.max(1e-12));
            SteadyCandidate {
                state,
                eigenvalue: decomposition.values[k],
                trace_normalized,
                psd,
            }
        })
        .collect()
}

/// Steady-state candidates from the zero eigenspace of a forward generator.
pub fn steady_states(s: &Superoperator, tol: f64) -> Result<Vec<SteadyCandidate>> {
    if s.direction() != Direction::Forward {
        return Err(Error::InvalidInput(
            "steady states require the forward generator".into(),
        ));
    }
    let decomposition = linalg::eig(s.matrix(), s.label())?;
    let order = sorted_order(&decomposition.values);
    let candidates = steady_from_decomposition(s.dim(), &decomposition, &order, tol);
    if candidates.is_empty() {
        return Err(Error::Certification(format!(
            "{}: no eigenvalue within {tol:.3e} of zero; not a Lindblad generator at this tolerance",
            s.label()
        )));
    }
    Ok(candidates)
}

/// Greedy nearest-neighbour matching of two multisets. Returns the largest
/// matched distance, or `None` when the sizes differ.
pub fn match_multisets(a: &[C64], b: &[C64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for x in a {
        let (best, dist) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))?;
        used[best] = true;
        worst = worst.max(dist);
    }
    Some(worst)
}

/// Checks that the adjoint generator's spectrum is the complex conjugate of
/// the forward spectrum, as it must be in finite dimension.
pub fn adjoint_pairing_check(model: &LindbladModel, tol: f64) -> Result<Check> {
    let forward = model.superoperator(Direction::Forward);
    let adjoint = model.superoperator(Direction::Adjoint);
    let fwd: Vec<C64> = linalg::eigenvalues(forward.matrix(), forward.label())?
        .into_iter()
        .map(|l| l.conj())
        .collect();
    let adj = linalg::eigenvalues(adjoint.matrix(), adjoint.label())?;
    let worst = match_multisets(&adj, &fwd).unwrap_or(f64::INFINITY);
    Ok(Check::upper_bound("adjoint_pairing", worst, tol).witness("eigenvalue_count", adj.len() as f64))
}
