use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use liouville_core::channel::{self, Channel};
use liouville_core::lemmas::{self, ProofChainRecord};
use liouville_core::operator::trace_norm;
use liouville_core::spectral::{self, SpectrumReport};
use liouville_core::{
    Check, Direction, LindbladModel, Operator, RandomKind, Sampler, Superoperator, VerificationReport,
};
use serde::Serialize;

use crate::model_file::load_model;
use crate::state::parse_rho0;
use crate::{ChannelArgs, CliError, EvolveArgs, SpectrumArgs, VerifyArgs};

/// Non-positivity slack, relative to `max(1, ‖S‖_F)`.
const NONPOSITIVITY_REL: f64 = 1e-8;
const KOSSAKOWSKI_TOL: f64 = 1e-10;
const SOS_TOL: f64 = 1e-11;
const CHAIN_TOL: f64 = 1e-9;
const CPTP_TOL: f64 = 1e-9;
const CONTRACTIVITY_TOL: f64 = 1e-10;
const DISK_TOL: f64 = 1e-9;

/// Fixed-width scientific notation, 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_output(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(content.as_bytes())
            .map_err(|e| CliError::input(format!("cannot write to stdout: {e}"))),
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn core<T>(r: liouville_core::Result<T>) -> Result<T, CliError> {
    r.map_err(CliError::from_core)
}

fn check_tol(override_tol: Option<f64>, default: f64) -> Result<f64, CliError> {
    match override_tol {
        Some(t) if !(t.is_finite() && t >= 0.0) => {
            Err(CliError::input(format!("--tol must be ≥ 0, got {t}")))
        }
        Some(t) => Ok(t),
        None => Ok(default),
    }
}

fn channel_time(t: f64) -> Result<f64, CliError> {
    if t.is_finite() && t >= 0.0 {
        Ok(t)
    } else {
        Err(CliError::input(format!("--t must be a finite time ≥ 0, got {t}")))
    }
}

/// A suite that errors out numerically is recorded as a failed check.
fn or_failed(name: &str, r: liouville_core::Result<Check>) -> Check {
    r.unwrap_or_else(|e| Check::with_verdict(name, false, f64::INFINITY, 0.0).note(e.to_string()))
}

pub fn spectrum_csv(report: &SpectrumReport) -> String {
    let mut csv = String::from("index,re,im,class,residual\n");
    for (k, (l, class)) in report.eigenvalues.iter().zip(&report.classes).enumerate() {
        writeln!(
            csv,
            "{k},{},{},{class},{}",
            num(l.re),
            num(l.im),
            num(report.residuals[k])
        )
        .unwrap();
    }
    csv
}

#[derive(Serialize)]
struct SpectrumSummary<'a> {
    model: &'a str,
    dim: usize,
    eigenvalue_count: usize,
    gap: Option<f64>,
    steady_state_count: usize,
    max_real_part: f64,
    tolerance: f64,
    eigenvector_condition: f64,
    vectorization: &'static str,
}

pub fn spectrum(args: &SpectrumArgs) -> Result<bool, CliError> {
    let model = load_model(&args.model)?;
    let s = model.superoperator(Direction::Forward);
    let tol = check_tol(args.tol, spectral::default_tolerance(&s))?;
    let report = core(spectral::eigenspectrum(&s, tol))?;
    let csv = spectrum_csv(&report);
    let summary = json(&SpectrumSummary {
        model: model.label(),
        dim: model.dim(),
        eigenvalue_count: report.eigenvalues.len(),
        gap: report.gap,
        steady_state_count: report.steady_candidates.len(),
        max_real_part: report.max_real_part(),
        tolerance: tol,
        eigenvector_condition: report.eigenvector_condition,
        vectorization: s.convention(),
    });
    write_output(args.out.as_deref(), &csv)?;
    if args.out.is_some() {
        write_output(None, &summary)?;
    } else {
        eprint!("{summary}");
    }
    Ok(true)
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    model: &'a str,
    dim: usize,
    seed: u64,
    passed: bool,
    checks: &'a [Check],
    #[serde(skip_serializing_if = "Option::is_none")]
    proof_chain: Option<&'a [ProofChainRecord]>,
}

fn spectral_checks(
    model: &LindbladModel,
    s: &Superoperator,
    tol: Option<f64>,
) -> Result<Vec<Check>, CliError> {
    let scale = s.frobenius_norm().max(1.0);
    let report = core(spectral::eigenspectrum(s, spectral::default_tolerance(s)))?;
    let np_tol = check_tol(tol, NONPOSITIVITY_REL * scale)?;
    let zero_tol = check_tol(tol, report.tolerance_used)?;
    let mut checks = vec![
        spectral::verify_nonpositivity(&report, np_tol),
        spectral::verify_zero_eigenvalue(&report, zero_tol),
        or_failed("adjoint_pairing", spectral::adjoint_pairing_check(model, np_tol)),
    ];
    if let Some(gap) = report.gap {
        checks[0] = checks[0].clone().witness("gap", gap);
    }
    Ok(checks)
}

/// Worst of several runs of the same check: the first failure, otherwise
/// the largest residual.
fn worst_of(name: &str, checks: Vec<Check>) -> Check {
    let count = checks.len();
    let worst = checks
        .iter()
        .find(|c| !c.passed)
        .or_else(|| checks.iter().max_by(|a, b| a.residual.total_cmp(&b.residual)))
        .cloned()
        .unwrap_or_else(|| Check::upper_bound(name, 0.0, 0.0));
    Check {
        name: name.to_string(),
        ..worst
    }
    .witness("samples", count as f64)
}

pub fn verify(args: &VerifyArgs) -> Result<bool, CliError> {
    let model = load_model(&args.model)?;
    let t = channel_time(args.t)?;
    let none = !(args.lemma1 || args.lemma2 || args.chain || args.cptp || args.contractivity);
    let all = args.all || none;
    let s = model.superoperator(Direction::Forward);

    let mut report = VerificationReport::new(model.label());
    for c in spectral_checks(&model, &s, args.tol)? {
        report.push(c);
    }
    if all || args.lemma1 {
        let tol = check_tol(args.tol, KOSSAKOWSKI_TOL)?;
        report.push(or_failed(
            "lemma1.kossakowski",
            lemmas::kossakowski_check(&model, args.bases, args.seed, tol),
        ));
    }
    if all || args.lemma2 {
        let tol = check_tol(args.tol, SOS_TOL)?;
        let mut sampler = Sampler::new(args.seed);
        let mut operators = vec![Operator::identity(model.dim())];
        for _ in 0..args.samples {
            operators.push(core(sampler.operator(model.dim(), RandomKind::General))?);
        }
        let checks = operators
            .iter()
            .map(|a| {
                or_failed(
                    "lemma2.dissipation_ordering",
                    lemmas::dissipation_sos_check(&model, a, tol),
                )
            })
            .collect();
        report.push(worst_of("lemma2.dissipation_ordering", checks));
    }
    let mut records = None;
    if all || args.chain {
        let tol = check_tol(args.tol, CHAIN_TOL)?;
        match lemmas::proof_chain_check(&model, tol) {
            Ok(r) => {
                report.push(lemmas::proof_chain_summary(&r, tol));
                records = Some(r);
            }
            Err(e) => report.push(or_failed("proof_chain", Err(e))),
        }
    }
    if all || args.cptp || args.contractivity {
        let e = core(channel::exact_channel(&s, t))?;
        if all || args.cptp {
            let tol = check_tol(args.tol, CPTP_TOL)?;
            match channel::verify_cptp(&e, tol) {
                Ok(r) => report.extend(r),
                Err(err) => report.push(or_failed("cptp", Err(err))),
            }
        }
        if all || args.contractivity {
            let tol = check_tol(args.tol, CONTRACTIVITY_TOL)?;
            report.push(or_failed(
                "contractivity",
                channel::contractivity_check(&e, args.pairs, args.seed, tol),
            ));
        }
    }

    let passed = report.all_passed();
    let out = json(&VerifyOutput {
        model: model.label(),
        dim: model.dim(),
        seed: args.seed,
        passed,
        checks: &report.checks,
        proof_chain: records.as_deref(),
    });
    write_output(args.out.as_deref(), &out)?;
    eprint!("{report}");
    Ok(passed)
}

fn unique_steady_state(s: &Superoperator) -> Result<Option<Operator>, CliError> {
    let report = core(spectral::eigenspectrum(s, spectral::default_tolerance(s)))?;
    Ok(match report.steady_candidates.as_slice() {
        [only] if only.trace_normalized && only.psd.is_psd => Some(only.state.clone()),
        _ => None,
    })
}

/// Trajectory rows `time, p_0..p_{d−1}, trace distance to the steady state,
/// trace-norm distance between the Trotter and exact states`.
pub fn trajectory_csv(
    model: &LindbladModel,
    rho0: &Operator,
    t: f64,
    steps: usize,
    taylor_tol: f64,
) -> Result<String, CliError> {
    let d = model.dim();
    let s = model.superoperator(Direction::Forward);
    let steady = unique_steady_state(&s)?;

    let mut csv = String::from("time");
    for k in 0..d {
        write!(csv, ",p{k}").unwrap();
    }
    csv.push_str(",trace_distance_to_steady,trotter_error\n");

    let row = |csv: &mut String, time: f64, rho: &Operator, exact: &Operator| {
        write!(csv, "{}", num(time)).unwrap();
        for k in 0..d {
            write!(csv, ",{}", num(rho.get(k, k).re)).unwrap();
        }
        match &steady {
            Some(ss) => write!(csv, ",{}", num(0.5 * trace_norm(&(rho - ss)))).unwrap(),
            None => csv.push(','),
        }
        writeln!(csv, ",{}", num(trace_norm(&(rho - exact)))).unwrap();
    };

    if t == 0.0 {
        row(&mut csv, 0.0, rho0, rho0);
        return Ok(csv);
    }
    let trotter = core(channel::trotter_channel(model, t, steps, taylor_tol))?;
    let exact_step = core(channel::exact_channel(&s, trotter.metadata().dt))?;
    let mut rho = rho0.clone();
    let mut exact = rho0.clone();
    row(&mut csv, 0.0, &rho, &exact);
    for k in 1..=steps {
        rho = core(trotter.apply_substep(&rho))?;
        exact = core(exact_step.apply(&exact))?;
        row(&mut csv, t * k as f64 / steps as f64, &rho, &exact);
    }
    Ok(csv)
}

pub fn evolve(args: &EvolveArgs) -> Result<bool, CliError> {
    let model = load_model(&args.model)?;
    let t = channel_time(args.t)?;
    if args.steps == 0 {
        return Err(CliError::input("--steps must be ≥ 1"));
    }
    if !(args.taylor_tol > 0.0 && args.taylor_tol.is_finite()) {
        return Err(CliError::input("--taylor-tol must be > 0"));
    }
    let rho0 = parse_rho0(&args.rho0, model.dim())?;
    let csv = trajectory_csv(&model, &rho0, t, args.steps, args.taylor_tol)?;
    write_output(args.out.as_deref(), &csv)?;
    Ok(true)
}

#[derive(Serialize)]
struct ChannelOutput<'a> {
    model: &'a str,
    time: f64,
    seed: u64,
    passed: bool,
    checks: &'a [Check],
}

pub fn channel(args: &ChannelArgs) -> Result<bool, CliError> {
    let model = load_model(&args.model)?;
    let t = channel_time(args.t)?;
    let s = model.superoperator(Direction::Forward);
    let e = core(channel::exact_channel(&s, t))?;

    let mut report = VerificationReport::new(format!("{} at t={t}", model.label()));
    match channel::verify_cptp(&e, check_tol(args.tol, CPTP_TOL)?) {
        Ok(r) => report.extend(r),
        Err(err) => report.push(or_failed("cptp", Err(err))),
    }
    match channel::channel_disk_check(&e, check_tol(args.tol, DISK_TOL)?, Some(&s)) {
        Ok(r) => report.extend(r),
        Err(err) => report.push(or_failed("channel.unit_disk", Err(err))),
    }
    report.push(or_failed(
        "contractivity",
        channel::contractivity_check(&e, args.pairs, args.seed, check_tol(args.tol, CONTRACTIVITY_TOL)?),
    ));

    let passed = report.all_passed();
    let out = json(&ChannelOutput {
        model: model.label(),
        time: t,
        seed: args.seed,
        passed,
        checks: &report.checks,
    });
    write_output(args.out.as_deref(), &out)?;
    eprint!("{report}");
    Ok(passed)
}
