//! Built-in models with analytically known behaviour.
//!
//! Conventions: `|0⟩` is the ground state and `σ⁻ = |0⟩⟨1|`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liouvillian::{Direction, LindbladModel};
use crate::operator::{c, Operator};
use crate::random::{RandomKind, Sampler};
use crate::spectral::{default_tolerance, eigenspectrum, verify_nonpositivity};
use crate::verify::{Check, VerificationReport};

/// Named model with its parameters. Serialized as
/// `{"name": "...", "parameters": {...}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(
    tag = "name",
    content = "parameters",
    rename_all = "snake_case",
    deny_unknown_fields
)]
pub enum ModelSpec {
    AmplitudeDamping { gamma: f64 },
    Dephasing { gamma: f64 },
    DrivenQubit { omega: f64, gamma: f64 },
    UnitaryOnly { spectrum: Vec<f64> },
    BosonicPump { gamma: f64, cutoff: usize },
    Random { dim: usize, jumps: usize, seed: u64 },
}

impl ModelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::AmplitudeDamping { .. } => "amplitude_damping",
            ModelSpec::Dephasing { .. } => "dephasing",
            ModelSpec::DrivenQubit { .. } => "driven_qubit",
            ModelSpec::UnitaryOnly { .. } => "unitary_only",
            ModelSpec::BosonicPump { .. } => "bosonic_pump",
            ModelSpec::Random { .. } => "random",
        }
    }

    /// Hilbert-space dimension of the built model.
    pub fn dim(&self) -> usize {
        match self {
            ModelSpec::AmplitudeDamping { .. }
            | ModelSpec::Dephasing { .. }
            | ModelSpec::DrivenQubit { .. } => 2,
            ModelSpec::UnitaryOnly { spectrum } => spectrum.len(),
            ModelSpec::BosonicPump { cutoff, .. } => *cutoff,
            ModelSpec::Random { dim, .. } => *dim,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let rate = |name: &str, v: f64| -> Result<()> {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidInput(format!(
                    "{name} must be a finite rate ≥ 0, got {v}"
                )))
            }
        };
        match self {
            ModelSpec::AmplitudeDamping { gamma } | ModelSpec::Dephasing { gamma } => rate("gamma", *gamma),
            ModelSpec::DrivenQubit { omega, gamma } => {
                rate("omega", *omega)?;
                rate("gamma", *gamma)
            }
            ModelSpec::UnitaryOnly { spectrum } => {
                if spectrum.is_empty() {
                    return Err(Error::InvalidInput("spectrum must be non-empty".into()));
                }
                if spectrum.iter().any(|e| !e.is_finite()) {
                    return Err(Error::InvalidInput("spectrum entries must be finite".into()));
                }
                Ok(())
            }
            ModelSpec::BosonicPump { gamma, cutoff } => {
                rate("gamma", *gamma)?;
                if *cutoff < 2 {
                    return Err(Error::InvalidInput(format!(
                        "Fock cutoff must be ≥ 2, got {cutoff}"
                    )));
                }
                Ok(())
            }
            ModelSpec::Random { dim, .. } => {
                if *dim < 1 {
                    return Err(Error::InvalidInput("dim must be ≥ 1".into()));
                }
                Ok(())
            }
        }
    }
}

/// Truncated creation operator: `b†|n⟩ = √(n+1)|n+1⟩` for `n < N−1` and
/// `b†|N−1⟩ = 0`.
pub fn truncated_creation(cutoff: usize) -> Operator {
    Operator::from_fn(cutoff, |r, col| {
        if r == col + 1 {
            c((r as f64).sqrt())
        } else {
            c(0.0)
        }
    })
}

/// Truncated annihilation operator, the adjoint of [`truncated_creation`].
pub fn truncated_annihilation(cutoff: usize) -> Operator {
    truncated_creation(cutoff).adjoint()
}

/// Random model: Gaussian Hermitian `H` and `K` Gaussian jump operators
/// scaled by `1/√d`, all drawn from one seeded stream.
pub fn random_model(dim: usize, jumps: usize, seed: u64) -> Result<LindbladModel> {
    let mut sampler = Sampler::new(seed);
    let h = sampler.operator(dim, RandomKind::Hermitian)?;
    let scale = 1.0 / (dim as f64).sqrt();
    let ls = (0..jumps)
        .map(|_| sampler.operator(dim, RandomKind::General).map(|l| &l * scale))
        .collect::<Result<Vec<_>>>()?;
    LindbladModel::new(format!("random(d={dim}, K={jumps}, seed={seed})"), h, ls)
}

pub fn build(spec: &ModelSpec) -> Result<LindbladModel> {
    spec.validate()?;
    match spec {
        ModelSpec::AmplitudeDamping { gamma } => LindbladModel::new(
            format!("amplitude_damping(gamma={gamma})"),
            Operator::zeros(2),
            vec![&Operator::sigma_minus() * gamma.sqrt()],
        ),
        ModelSpec::Dephasing { gamma } => LindbladModel::new(
            format!("dephasing(gamma={gamma})"),
            Operator::zeros(2),
            vec![&Operator::pauli_z() * gamma.sqrt()],
        ),
        ModelSpec::DrivenQubit { omega, gamma } => LindbladModel::new(
            format!("driven_qubit(omega={omega}, gamma={gamma})"),
            &Operator::pauli_x() * *omega,
            vec![&Operator::sigma_minus() * gamma.sqrt()],
        ),
        ModelSpec::UnitaryOnly { spectrum } => LindbladModel::new(
            format!("unitary_only({spectrum:?})"),
            Operator::diagonal(spectrum),
            vec![],
        ),
        ModelSpec::BosonicPump { gamma, cutoff } => LindbladModel::new(
            format!("bosonic_pump(gamma={gamma}, cutoff={cutoff})"),
            Operator::zeros(*cutoff),
            vec![&truncated_creation(*cutoff) * gamma.sqrt()],
        ),
        ModelSpec::Random { dim, jumps, seed } => random_model(*dim, *jumps, *seed),
    }
}

/// Residual `R = L†(b) − (γ/2) b` of the untruncated eigenrelation, split
/// into the interior block (levels `0..=N−3`) and the boundary.
#[derive(Clone, Debug)]
pub struct PumpResidual {
    pub residual: Operator,
    pub interior_norm: f64,
    pub boundary_norm: f64,
}

pub fn pump_residual(gamma: f64, cutoff: usize) -> Result<PumpResidual> {
    let model = build(&ModelSpec::BosonicPump { gamma, cutoff })?;
    let b = truncated_annihilation(cutoff);
    let residual = &model.apply_adjoint(&b)? - &(&b * (gamma / 2.0));
    let interior = cutoff.saturating_sub(2);
    let mut interior_sq = 0.0;
    let mut total_sq = 0.0;
    for r in 0..cutoff {
        for col in 0..cutoff {
            let v = residual.get(r, col).norm_sqr();
            total_sq += v;
            if r < interior && col < interior {
                interior_sq += v;
            }
        }
    }
    Ok(PumpResidual {
        residual,
        interior_norm: interior_sq.sqrt(),
        boundary_norm: (total_sq - interior_sq).max(0.0).sqrt(),
    })
}

/// The infinite-dimensional eigenrelation `L†(b) = (γ/2) b` holds on Fock
/// levels `0..=N−3` of the truncated pump, while the truncated generator
/// still has no eigenvalue with positive real part.
pub fn pump_boundary_analysis(gamma: f64, cutoff: usize, tol: f64) -> Result<VerificationReport> {
    if cutoff < 4 {
        return Err(Error::InvalidInput(format!(
            "pump analysis needs cutoff ≥ 4, got {cutoff}"
        )));
    }
    let pr = pump_residual(gamma, cutoff)?;
    let model = build(&ModelSpec::BosonicPump { gamma, cutoff })?;
    let s = model.superoperator(Direction::Forward);
    let spectrum = eigenspectrum(&s, default_tolerance(&s))?;

    let mut report = VerificationReport::new(model.label());
    report.push(
        Check::upper_bound("pump.interior_eigenrelation", pr.interior_norm, tol)
            .witness("boundary_residual", pr.boundary_norm)
            .witness("cutoff", cutoff as f64),
    );
    let np = verify_nonpositivity(&spectrum, tol);
    report.push(Check {
        name: "pump.truncated_nonpositivity".into(),
        ..np
    });
    Ok(report)
}

/// Diagonal entries (populations) of a density matrix.
pub fn populations(rho: &Operator) -> Vec<f64> {
    (0..rho.dim()).map(|k| rho.get(k, k).re).collect()
}
