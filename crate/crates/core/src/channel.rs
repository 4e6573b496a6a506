//! Quantum channels generated by a Lindbladian: the exact semigroup
//! `exp(L t)`, its Lie–Trotter/Kraus approximation, and the CPTP,
//! contractivity and unit-disk certifications.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{ensure_dim, Error, Result};
use crate::linalg::{self, C64};
use crate::liouvillian::{Direction, GeneratorForm, LindbladModel, Superoperator};
use crate::operator::{c, is_psd, trace_norm, Operator};
use crate::random::{RandomKind, Sampler};
use crate::spectral::match_multisets;
use crate::verify::{Check, VerificationReport};

/// Anything that maps operators linearly and has a transfer matrix in the
/// column-stacking convention.
pub trait Channel {
    fn dim(&self) -> usize;

    fn apply(&self, rho: &Operator) -> Result<Operator>;

    /// `d² × d²` matrix `M` with `vec(E(X)) = M vec(X)`.
    fn transfer_matrix(&self) -> DMatrix<C64>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelSource {
    ExactExponential,
    Trotter,
    /// Hand-built map (identity, negative controls).
    Explicit,
}

#[derive(Clone, Debug)]
pub struct ChannelMatrix {
    dim: usize,
    matrix: DMatrix<C64>,
    time: f64,
    source: ChannelSource,
}

impl ChannelMatrix {
    pub fn from_matrix(dim: usize, matrix: DMatrix<C64>, time: f64, source: ChannelSource) -> Result<Self> {
        ensure_dim(dim * dim, matrix.nrows())?;
        ensure_dim(dim * dim, matrix.ncols())?;
        if time.is_nan() || time < 0.0 {
            return Err(Error::InvalidInput(format!(
                "channel time must be ≥ 0, got {time}"
            )));
        }
        Ok(Self {
            dim,
            matrix,
            time,
            source,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            matrix: DMatrix::identity(dim * dim, dim * dim),
            time: 0.0,
            source: ChannelSource::Explicit,
        }
    }

    /// `X ↦ Xᵀ`: positive and trace preserving but not completely positive.
    pub fn transpose_map(dim: usize) -> Self {
        let n = dim * dim;
        let mut m = DMatrix::zeros(n, n);
        for r in 0..dim {
            for col in 0..dim {
                m[(col + r * dim, r + col * dim)] = c(1.0);
            }
        }
        Self {
            dim,
            matrix: m,
            time: 0.0,
            source: ChannelSource::Explicit,
        }
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn source(&self) -> ChannelSource {
        self.source
    }

    pub fn eigenvalues(&self) -> Result<Vec<C64>> {
        linalg::eigenvalues(&self.matrix, "channel")
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ChannelMatrix) -> Result<ChannelMatrix> {
        ensure_dim(self.dim, other.dim)?;
        Ok(ChannelMatrix {
            dim: self.dim,
            matrix: &self.matrix * &other.matrix,
            time: self.time + other.time,
            source: self.source,
        })
    }
}

impl Channel for ChannelMatrix {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, rho: &Operator) -> Result<Operator> {
        ensure_dim(self.dim, rho.dim())?;
        Operator::unvectorize(self.dim, &(&self.matrix * rho.vectorize()))
    }

    fn transfer_matrix(&self) -> DMatrix<C64> {
        self.matrix.clone()
    }
}

/// `exp(S t)` for a forward generator matrix.
pub fn exact_channel(s: &Superoperator, t: f64) -> Result<ChannelMatrix> {
    if s.direction() != Direction::Forward {
        return Err(Error::InvalidInput(
            "exact channel needs the forward generator".into(),
        ));
    }
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidInput(format!(
            "time must be finite and ≥ 0, got {t}"
        )));
    }
    let matrix = linalg::expm(&(s.matrix() * c(t)));
    Ok(ChannelMatrix {
        dim: s.dim(),
        matrix,
        time: t,
        source: ChannelSource::ExactExponential,
    })
}

/// One factor of a Trotter substep, given by its Kraus family.
#[derive(Clone, Debug)]
pub struct KrausFactor {
    pub label: String,
    pub ops: Vec<Operator>,
}

impl KrausFactor {
    fn apply(&self, rho: &DMatrix<C64>) -> DMatrix<C64> {
        let d = rho.nrows();
        let mut out = DMatrix::zeros(d, d);
        for k in &self.ops {
            let km = k.matrix();
            out += km * rho * km.adjoint();
        }
        out
    }

    fn transfer_matrix(&self) -> DMatrix<C64> {
        let d = self.ops.first().map_or(0, Operator::dim);
        let mut m = DMatrix::zeros(d * d, d * d);
        for k in &self.ops {
            m += k.matrix().conjugate().kronecker(k.matrix());
        }
        m
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TrotterMetadata {
    pub steps: usize,
    pub dt: f64,
    pub time: f64,
    /// Taylor order `M_k` used for each jump factor.
    pub taylor_orders: Vec<usize>,
    /// `‖E_sub†(𝟙) − 𝟙‖_F` for one substep.
    pub substep_tp_residual: f64,
    /// Same for the full `N`-step channel.
    pub tp_residual: f64,
    pub source: String,
}

/// Lie–Trotter channel kept as per-substep Kraus factor lists. A substep is
/// the product `e^{L⁰Δt} e^{L¹Δt} ⋯ e^{Lᴷ Δt}`, so `factors[K]` acts first.
#[derive(Clone, Debug)]
pub struct KrausChannel {
    dim: usize,
    factors: Vec<KrausFactor>,
    metadata: TrotterMetadata,
}

impl KrausChannel {
    pub fn factors(&self) -> &[KrausFactor] {
        &self.factors
    }

    pub fn metadata(&self) -> &TrotterMetadata {
        &self.metadata
    }

    pub fn apply_substep(&self, rho: &Operator) -> Result<Operator> {
        ensure_dim(self.dim, rho.dim())?;
        let mut m = rho.matrix().clone();
        for f in self.factors.iter().rev() {
            m = f.apply(&m);
        }
        Operator::new(m)
    }

    pub fn substep_matrix(&self) -> DMatrix<C64> {
        let n = self.dim * self.dim;
        self.factors
            .iter()
            .fold(DMatrix::identity(n, n), |acc, f| acc * f.transfer_matrix())
    }

    pub fn to_channel_matrix(&self) -> ChannelMatrix {
        ChannelMatrix {
            dim: self.dim,
            matrix: self.transfer_matrix(),
            time: self.metadata.time,
            source: ChannelSource::Trotter,
        }
    }

    /// Multiply out the full Kraus list if it has at most `max_ops`
    /// operators.
    pub fn flatten(&self, max_ops: usize) -> Option<Vec<Operator>> {
        let per_step = self
            .factors
            .iter()
            .try_fold(1usize, |acc, f| acc.checked_mul(f.ops.len()))?;
        let total = (0..self.metadata.steps).try_fold(1usize, |acc, _| acc.checked_mul(per_step))?;
        if total > max_ops {
            return None;
        }
        let mut substep = vec![Operator::identity(self.dim)];
        for f in &self.factors {
            substep = substep
                .iter()
                .flat_map(|a| f.ops.iter().map(move |k| a * k))
                .collect();
        }
        let mut full = vec![Operator::identity(self.dim)];
        for _ in 0..self.metadata.steps {
            full = full
                .iter()
                .flat_map(|a| substep.iter().map(move |k| a * k))
                .collect();
        }
        Some(full)
    }
}

impl Channel for KrausChannel {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, rho: &Operator) -> Result<Operator> {
        let mut r = rho.clone();
        for _ in 0..self.metadata.steps {
            r = self.apply_substep(&r)?;
        }
        Ok(r)
    }

    fn transfer_matrix(&self) -> DMatrix<C64> {
        linalg::matrix_power(&self.substep_matrix(), self.metadata.steps)
    }
}

/// Smallest `M` with `(‖L‖₂² Δt)^{M+1}/(M+1)! < tol`.
pub fn taylor_order(norm_sq_dt: f64, tol: f64) -> usize {
    let mut m = 0usize;
    // term = x^{m+1}/(m+1)!
    let mut term = norm_sq_dt;
    while term >= tol {
        m += 1;
        term *= norm_sq_dt / (m + 1) as f64;
    }
    m
}

/// Lie–Trotter product of the split generator with Kraus factors
/// `V = exp(−iHΔt − ½Σ L_k†L_k Δt)` and `{L_k^m √(Δt^m/m!)}_{m ≤ M_k}`.
pub fn trotter_channel(model: &LindbladModel, t: f64, steps: usize, tol: f64) -> Result<KrausChannel> {
    if model.form() != GeneratorForm::Lindblad {
        return Err(Error::InvalidInput(
            "Kraus factorization requires a generator in Lindblad form".into(),
        ));
    }
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidInput(format!(
            "time must be finite and ≥ 0, got {t}"
        )));
    }
    if steps < 1 {
        return Err(Error::InvalidInput(
            "at least one Trotter step is required".into(),
        ));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidInput(
            "Taylor truncation tolerance must be positive".into(),
        ));
    }
    let d = model.dim();
    let dt = t / steps as f64;

    let generator =
        model.hamiltonian().matrix() * C64::new(0.0, -dt) - model.dissipation_sum().matrix() * c(0.5 * dt);
    let v = Operator::new(linalg::expm(&generator))?;
    let mut factors = vec![KrausFactor {
        label: "V".into(),
        ops: vec![v],
    }];

    let mut taylor_orders = Vec::with_capacity(model.jump_ops().len());
    for (k, l) in model.jump_ops().iter().enumerate() {
        let bound = l.spectral_norm().powi(2) * dt;
        let order = taylor_order(bound, tol);
        let mut ops = Vec::with_capacity(order + 1);
        let mut power = Operator::identity(d);
        let mut weight = 1.0f64; // Δt^m / m!
        let mut used = 0;
        for m in 0..=order {
            if m > 0 {
                power = &power * l;
                weight *= dt / m as f64;
                if power.frobenius_norm() == 0.0 {
                    break;
                }
            }
            ops.push(&power * weight.sqrt());
            used = m;
        }
        taylor_orders.push(used);
        factors.push(KrausFactor {
            label: format!("L{}", k + 1),
            ops,
        });
    }

    let mut channel = KrausChannel {
        dim: d,
        factors,
        metadata: TrotterMetadata {
            steps,
            dt,
            time: t,
            taylor_orders,
            substep_tp_residual: 0.0,
            tp_residual: 0.0,
            source: model.label().to_string(),
        },
    };
    channel.metadata.substep_tp_residual = tp_residual(d, &channel.substep_matrix());
    channel.metadata.tp_residual = tp_residual(d, &channel.transfer_matrix());
    Ok(channel)
}

/// `‖vec(𝟙)† M − vec(𝟙)†‖₂`, the Frobenius norm of `E†(𝟙) − 𝟙`.
pub fn tp_residual(dim: usize, m: &DMatrix<C64>) -> f64 {
    let one = Operator::identity(dim).vectorize();
    (one.adjoint() * m - one.adjoint()).norm()
}

/// Choi matrix `Σ_ij E(|i⟩⟨j|) ⊗ |i⟩⟨j|`, evaluated by applying the channel
/// to each matrix unit.
pub fn choi_matrix(channel: &impl Channel) -> Result<Operator> {
    let d = channel.dim();
    let mut choi = DMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            let image = channel.apply(&Operator::ket_bra(d, i, j))?;
            for a in 0..d {
                for b in 0..d {
                    choi[(a * d + i, b * d + j)] = image.get(a, b);
                }
            }
        }
    }
    Operator::new(choi)
}

/// Choi matrix by reshuffling a transfer matrix:
/// `C[(a,i),(b,j)] = M[a + b·d, i + j·d]`.
pub fn choi_from_transfer(dim: usize, m: &DMatrix<C64>) -> Result<Operator> {
    ensure_dim(dim * dim, m.nrows())?;
    let mut choi = DMatrix::zeros(dim * dim, dim * dim);
    for a in 0..dim {
        for b in 0..dim {
            for i in 0..dim {
                for j in 0..dim {
                    choi[(a * dim + i, b * dim + j)] = m[(a + b * dim, i + j * dim)];
                }
            }
        }
    }
    Operator::new(choi)
}

/// Choi matrix of `X ↦ Σ_m K_m X K_m†` as `Σ_m w_m w_m†` with
/// `w_m[a·d + i] = (K_m)_{ai}`, a row-major reshuffle of `vec(K_m)`.
pub fn choi_from_kraus(ops: &[Operator]) -> Result<Operator> {
    let d = ops
        .first()
        .map(Operator::dim)
        .ok_or_else(|| Error::InvalidInput("empty Kraus list".into()))?;
    let mut choi = DMatrix::zeros(d * d, d * d);
    for k in ops {
        ensure_dim(d, k.dim())?;
        let w = DVector::from_iterator(
            d * d,
            (0..d)
                .flat_map(|a| (0..d).map(move |i| (a, i)))
                .map(|(a, i)| k.get(a, i)),
        );
        choi += &w * w.adjoint();
    }
    Operator::new(choi)
}

/// `Tr_out(C) = Σ_ij Tr E(|i⟩⟨j|) |i⟩⟨j|`, the identity for a
/// trace-preserving map.
pub fn choi_partial_trace(dim: usize, choi: &Operator) -> Operator {
    Operator::from_fn(dim, |i, j| {
        (0..dim).map(|a| choi.get(a * dim + i, a * dim + j)).sum()
    })
}

/// Complete positivity (Choi matrix PSD) and trace preservation (partial
/// trace of the Choi matrix equals 𝟙), each within `tol`.
pub fn verify_cptp(channel: &impl Channel, tol: f64) -> Result<VerificationReport> {
    let d = channel.dim();
    let choi = choi_matrix(channel)?;
    let psd = is_psd(&choi, tol);
    let tp = (choi_partial_trace(d, &choi) - Operator::identity(d)).frobenius_norm();
    let mut report = VerificationReport::new("cptp");
    report.push(
        Check::with_verdict(
            "cptp.complete_positivity",
            psd.is_psd,
            (-psd.min_eigenvalue).max(0.0),
            tol,
        )
        .witness("choi_min_eigenvalue", psd.min_eigenvalue)
        .witness("choi_hermitian_residual", psd.hermitian_residual),
    );
    report.push(Check::upper_bound("cptp.trace_preservation", tp, tol));
    Ok(report)
}

/// `‖E(ρ) − E(σ)‖₁ − ‖ρ − σ‖₁`.
pub fn contraction_gap(channel: &impl Channel, rho: &Operator, sigma: &Operator) -> Result<f64> {
    let before = trace_norm(&(rho - sigma));
    let after = trace_norm(&(&channel.apply(rho)? - &channel.apply(sigma)?));
    Ok(after - before)
}

/// Trace-distance contractivity on `pairs` random density pairs.
pub fn contractivity_check(channel: &impl Channel, pairs: usize, seed: u64, tol: f64) -> Result<Check> {
    let d = channel.dim();
    let mut sampler = Sampler::new(seed);
    let mut worst = f64::NEG_INFINITY;
    let mut worst_index = 0;
    let mut strict = 0usize;
    for p in 0..pairs {
        let rho = sampler.operator(d, RandomKind::Density)?;
        let sigma = sampler.operator(d, RandomKind::Density)?;
        let gap = contraction_gap(channel, &rho, &sigma)?;
        if gap < -1e-12 {
            strict += 1;
        }
        if gap > worst {
            worst = gap;
            worst_index = p;
        }
    }
    if pairs == 0 {
        worst = 0.0;
    }
    Ok(Check::upper_bound("contractivity", worst, tol)
        .witness("pairs", pairs as f64)
        .witness("worst_pair", worst_index as f64)
        .witness("strictly_contracted", strict as f64))
}

/// Channel eigenvalues lie in the unit disk; when the generator is given,
/// `{e^{λt}}` must also match the channel spectrum.
pub fn channel_disk_check(
    channel: &ChannelMatrix,
    tol: f64,
    generator: Option<&Superoperator>,
) -> Result<VerificationReport> {
    let eps = channel.eigenvalues()?;
    let max_mod = eps.iter().map(|e| e.norm()).fold(0.0, f64::max);
    let mut report = VerificationReport::new("channel_spectrum");
    report.push(Check::upper_bound("channel.unit_disk", max_mod - 1.0, tol).witness("max_modulus", max_mod));
    if let Some(s) = generator {
        ensure_dim(channel.dim, s.dim())?;
        let lambdas = linalg::eigenvalues(s.matrix(), s.label())?;
        let exp: Vec<C64> = lambdas.iter().map(|l| (l * channel.time).exp()).collect();
        let worst = match_multisets(&exp, &eps).unwrap_or(f64::INFINITY);
        report.push(Check::upper_bound("channel.log_consistency", worst, tol));
    }
    Ok(report)
}
