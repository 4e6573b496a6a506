//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use liouville_core::channel::{self, Channel, ChannelMatrix};
use liouville_core::lemmas;
use liouville_core::models::{self, ModelSpec};
use liouville_core::operator::is_psd;
use liouville_core::spectral::{self, SpectrumReport};
use liouville_core::{Direction, GeneratorForm, LindbladModel, Operator, RandomKind, Sampler, C64};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn build(spec: ModelSpec) -> LindbladModel {
    models::build(&spec).expect("valid builtin")
}

/// Deterministic sweep over d ∈ {2..5}, K ∈ {1, 2, 3}.
fn sweep_model(i: usize, seed_base: u64) -> LindbladModel {
    let d = 2 + i % 4;
    let k = 1 + (i / 4) % 3;
    models::random_model(d, k, seed_base + i as u64).expect("random model")
}

fn spectrum(m: &LindbladModel) -> SpectrumReport {
    let s = m.superoperator(Direction::Forward);
    spectral::eigenspectrum(&s, spectral::default_tolerance(&s)).expect("eigensolver")
}

fn scale(r: &SpectrumReport) -> f64 {
    r.frobenius_norm.max(1.0)
}

/// Non-positivity at `1e−8·max(1, ‖S‖_F)` and an eigenvalue within the
/// classification tolerance of zero.
fn nonpositive_with_zero(r: &SpectrumReport) -> Result<(), String> {
    let max_re = r.max_real_part();
    ensure(max_re <= 1e-8 * scale(r), || {
        format!("{}: max Re λ = {max_re:e}", r.label)
    })?;
    let min_abs = r
        .eigenvalues
        .iter()
        .map(|l| l.norm())
        .fold(f64::INFINITY, f64::min);
    ensure(min_abs <= r.tolerance_used, || {
        format!("{}: min |λ| = {min_abs:e}", r.label)
    })
}

fn c1_nonpositivity_sweep() -> Outcome {
    let start = Instant::now();
    let mut worst = f64::NEG_INFINITY;
    for i in 0..300 {
        let r = spectrum(&sweep_model(i, 0));
        nonpositive_with_zero(&r)?;
        worst = worst.max(r.max_real_part() / scale(&r));
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 30.0, || format!("sweep took {secs:.1}s"))?;
    Ok(format!(
        "300 models, max Re λ/max(1,‖S‖) = {worst:.2e}, {secs:.2}s"
    ))
}

fn c2_exact_spectra() -> Outcome {
    let cases = [
        (
            ModelSpec::AmplitudeDamping { gamma: 1.0 },
            vec![0.0, -0.5, -0.5, -1.0],
        ),
        (ModelSpec::Dephasing { gamma: 1.0 }, vec![0.0, 0.0, -2.0, -2.0]),
    ];
    for (spec, expected) in cases {
        let r = spectrum(&build(spec));
        let expected: Vec<C64> = expected.into_iter().map(|x| C64::new(x, 0.0)).collect();
        let d = spectral::match_multisets(&r.eigenvalues, &expected).unwrap();
        ensure(d <= 1e-10, || format!("{}: distance {d:e}", r.label))?;
    }
    let r = spectrum(&build(ModelSpec::UnitaryOnly {
        spectrum: vec![1.0, -1.0],
    }));
    let expected = [
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 2.0),
        C64::new(0.0, -2.0),
    ];
    let d = spectral::match_multisets(&r.eigenvalues, &expected).unwrap();
    ensure(d <= 1e-10, || format!("unitary_only: distance {d:e}"))?;
    let max_abs_re = r.eigenvalues.iter().map(|l| l.re.abs()).fold(0.0, f64::max);
    ensure(max_abs_re <= 1e-12, || {
        format!("unitary_only: |Re λ| = {max_abs_re:e}")
    })?;
    Ok("amplitude damping, dephasing and unitary spectra reproduced".into())
}

fn c3_gap() -> Outcome {
    let ad = spectrum(&build(ModelSpec::AmplitudeDamping { gamma: 1.0 })).gap;
    let dp = spectrum(&build(ModelSpec::Dephasing { gamma: 1.0 })).gap;
    let un = spectrum(&build(ModelSpec::UnitaryOnly {
        spectrum: vec![1.0, -1.0],
    }))
    .gap;
    ensure(ad.is_some_and(|g| (g - 0.5).abs() <= 1e-10), || {
        format!("amplitude damping gap {ad:?}")
    })?;
    ensure(dp.is_some_and(|g| (g - 2.0).abs() <= 1e-10), || {
        format!("dephasing gap {dp:?}")
    })?;
    ensure(un.is_none(), || format!("unitary gap {un:?}"))?;
    Ok(format!("Δ = {:.12}, {:.12}, absent", ad.unwrap(), dp.unwrap()))
}

fn c4_kossakowski() -> Outcome {
    let mut min = f64::INFINITY;
    let mut max_imag = 0.0f64;
    for i in 0..100 {
        let m = sweep_model(i, 1000);
        let c = lemmas::kossakowski_check(&m, 10, i as u64, 1e-10).map_err(|e| e.to_string())?;
        let elem = c.witness["min_element"];
        let imag = c.witness["max_imaginary"];
        ensure(elem >= -1e-10, || format!("{}: {c}", m.label()))?;
        ensure(imag <= 1e-11, || {
            format!("{}: imaginary part {imag:e}", m.label())
        })?;
        ensure(c.passed, || format!("{}: {c}", m.label()))?;
        min = min.min(elem);
        max_imag = max_imag.max(imag);
    }
    let control = build(ModelSpec::AmplitudeDamping { gamma: 1.0 }).with_form(GeneratorForm::SignFlippedJump);
    let c = lemmas::kossakowski_check(&control, 10, 0, 1e-10).map_err(|e| e.to_string())?;
    ensure(!c.passed, || "sign-flipped control passed".into())?;
    Ok(format!(
        "min off-diagonal element {min:.3e}, max imaginary {max_imag:.1e}; control min {:.3e}",
        c.witness["min_element"]
    ))
}

fn c5_dissipation_ordering() -> Outcome {
    let mut sampler = Sampler::new(5);
    let mut worst_identity = 0.0f64;
    for i in 0..100 {
        let m = sweep_model(i, 2000);
        let a = sampler
            .operator(m.dim(), RandomKind::General)
            .map_err(|e| e.to_string())?;
        let c = lemmas::dissipation_sos_check(&m, &a, 1e-11).map_err(|e| e.to_string())?;
        let min_eig = c.witness["min_eigenvalue_d"];
        let d_norm = c.witness["d_frobenius"];
        ensure(min_eig >= -1e-10 * d_norm.max(1.0), || {
            format!("{}: min eigenvalue of D(A) {min_eig:e}", m.label())
        })?;
        ensure(c.residual <= 1e-11, || {
            format!("{}: identity residual {:e}", m.label(), c.residual)
        })?;
        worst_identity = worst_identity.max(c.residual);
    }
    let gamma = 1.0;
    let ad = build(ModelSpec::AmplitudeDamping { gamma });
    let d = lemmas::dissipation_operator(&ad, &Operator::pauli_z()).map_err(|e| e.to_string())?;
    let expected = &Operator::ket_bra(2, 1, 1) * (4.0 * gamma);
    let dev = d.max_abs_diff(&expected);
    ensure(dev <= 1e-12, || format!("D(σz) deviates by {dev:e}"))?;
    Ok(format!(
        "100 pairs, worst identity residual {worst_identity:.2e}; D(σz) fixture within {dev:.1e}"
    ))
}

fn builtin_specs() -> Vec<ModelSpec> {
    vec![
        ModelSpec::AmplitudeDamping { gamma: 1.0 },
        ModelSpec::Dephasing { gamma: 1.0 },
        ModelSpec::DrivenQubit {
            omega: 1.0,
            gamma: 0.5,
        },
        ModelSpec::UnitaryOnly {
            spectrum: vec![1.0, -1.0],
        },
        ModelSpec::BosonicPump {
            gamma: 1.0,
            cutoff: 20,
        },
        ModelSpec::Random {
            dim: 4,
            jumps: 2,
            seed: 7,
        },
    ]
}

fn c6_proof_chain() -> Outcome {
    let mut models: Vec<LindbladModel> = (0..100).map(|i| sweep_model(i, 3000)).collect();
    models.extend(builtin_specs().into_iter().map(build));
    let mut records = 0usize;
    let mut worst_margin = f64::INFINITY;
    let mut worst_g = f64::NEG_INFINITY;
    for m in &models {
        let rs = lemmas::proof_chain_check(m, 1e-9).map_err(|e| format!("{}: {e}", m.label()))?;
        ensure(rs.len() == m.dim() * m.dim(), || {
            format!("{}: {} records", m.label(), rs.len())
        })?;
        for r in &rs {
            let two_re = 2.0 * r.eigenvalue.re;
            ensure(two_re <= r.bound_value + 1e-9, || {
                format!(
                    "{}: λ = {}, 2Re λ = {two_re:e} > g = {:e}",
                    m.label(),
                    r.eigenvalue,
                    r.bound_value
                )
            })?;
            ensure(r.bound_value <= 1e-9, || {
                format!("{}: g = {:e}", m.label(), r.bound_value)
            })?;
            ensure(r.passed, || {
                format!("{}: record for λ = {} failed", m.label(), r.eigenvalue)
            })?;
            worst_margin = worst_margin.min(r.bound_value - two_re);
            worst_g = worst_g.max(r.bound_value);
        }
        records += rs.len();
    }
    Ok(format!(
        "{} models, {records} records, min(g − 2Re λ) = {worst_margin:.2e}, max g = {worst_g:.2e}",
        models.len()
    ))
}

fn exact(m: &LindbladModel, t: f64) -> ChannelMatrix {
    channel::exact_channel(&m.superoperator(Direction::Forward), t).expect("exact channel")
}

fn c7_cptp() -> Outcome {
    let mut min_choi = f64::INFINITY;
    let mut max_tp = 0.0f64;
    for i in 0..50 {
        let m = sweep_model(i, 4000);
        for t in [0.1, 1.0, 10.0] {
            let r = channel::verify_cptp(&exact(&m, t), 1e-9).map_err(|e| e.to_string())?;
            let cp = r.get("cptp.complete_positivity").unwrap();
            let tp = r.get("cptp.trace_preservation").unwrap();
            let min_eig = cp.witness["choi_min_eigenvalue"];
            ensure(min_eig >= -1e-9, || {
                format!("{} t={t}: Choi min eigenvalue {min_eig:e}", m.label())
            })?;
            ensure(tp.residual <= 1e-9, || {
                format!("{} t={t}: TP residual {:e}", m.label(), tp.residual)
            })?;
            min_choi = min_choi.min(min_eig);
            max_tp = max_tp.max(tp.residual);
        }
    }
    let transpose = channel::choi_matrix(&ChannelMatrix::transpose_map(2)).map_err(|e| e.to_string())?;
    let control = is_psd(&transpose, 1e-9).min_eigenvalue;
    ensure(control <= -1.0 + 1e-9, || {
        format!("transpose map Choi min eigenvalue {control}")
    })?;
    Ok(format!("150 channels, min Choi eigenvalue {min_choi:.2e}, max TP residual {max_tp:.2e}; transpose control {control}"))
}

fn cli_bin() -> &'static str {
    env!("CARGO_BIN_EXE_liouville")
}

fn models_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("models")
}

fn run_cli(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(cli_bin())
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    let code = out.status.code().ok_or("terminated by signal")?;
    Ok((code, String::from_utf8_lossy(&out.stdout).into_owned()))
}

struct Trajectory {
    header: Vec<String>,
    rows: Vec<Vec<f64>>,
}

fn evolve_csv(model: &str, t: f64, steps: usize, rho0: &str) -> Result<Trajectory, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = dir.path().join("trajectory.csv");
    let path = models_dir().join(model);
    let (code, _) = run_cli(&[
        "evolve",
        path.to_str().unwrap(),
        "--t",
        &t.to_string(),
        "--steps",
        &steps.to_string(),
        "--rho0",
        rho0,
        "--out",
        out.to_str().unwrap(),
    ])?;
    ensure(code == 0, || format!("evolve exited {code}"))?;
    let text = std::fs::read_to_string(&out).map_err(|e| e.to_string())?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .unwrap_or_default()
        .split(',')
        .map(String::from)
        .collect();
    let rows = lines
        .map(|l| {
            l.split(',')
                .map(|x| x.parse::<f64>().unwrap_or(f64::NAN))
                .collect()
        })
        .collect();
    Ok(Trajectory { header, rows })
}

fn column(tr: &Trajectory, name: &str) -> Result<usize, String> {
    tr.header
        .iter()
        .position(|h| h == name)
        .ok_or(format!("missing column {name}"))
}

fn c8_trotter() -> Outcome {
    let m = build(ModelSpec::AmplitudeDamping { gamma: 1.0 });
    let reference = exact(&m, 1.0);
    let excited = Operator::ket_bra(2, 1, 1);
    let target = (-1.0f64).exp();
    let mut errors = Vec::new();
    for n in [16usize, 32, 64, 128, 256, 512] {
        let k = channel::trotter_channel(&m, 1.0, n, 1e-12).map_err(|e| e.to_string())?;
        let e = (k.transfer_matrix() - reference.matrix()).norm();
        let p1 = k.apply(&excited).map_err(|e| e.to_string())?.get(1, 1).re;
        ensure((p1 - target).abs() <= e + 1e-10, || {
            format!("N={n}: population {p1} vs e^-1, error {e:e}")
        })?;
        errors.push(e);
    }
    let ratios: Vec<f64> = errors.windows(2).map(|w| w[0] / w[1]).collect();
    for (n, r) in [16, 32, 64, 128, 256].iter().zip(&ratios) {
        ensure((1.8..=2.2).contains(r), || format!("e({n})/e({}) = {r}", 2 * n))?;
    }

    let tr = evolve_csv("amplitude_damping.json", 1.0, 100, "basis:1")?;
    let last = tr.rows.last().ok_or("empty trajectory")?;
    let p1 = last[column(&tr, "p1")?];
    let err = last[column(&tr, "trotter_error")?];
    ensure((p1 - target).abs() <= err + 1e-10, || {
        format!("cli: population {p1}, error {err:e}")
    })?;
    let ratio_text: Vec<String> = ratios.iter().map(|r| format!("{r:.4}")).collect();
    Ok(format!(
        "ratios [{}]; cli p1(1) − e^-1 = {:.1e}",
        ratio_text.join(", "),
        p1 - target
    ))
}

fn c9_contractivity() -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    for i in 0..20 {
        let m = sweep_model(i, 5000);
        let c =
            channel::contractivity_check(&exact(&m, 1.0), 50, i as u64, 1e-10).map_err(|e| e.to_string())?;
        ensure(c.residual <= 1e-10, || format!("{}: {c}", m.label()))?;
        worst = worst.max(c.residual);
    }
    let tr = evolve_csv("amplitude_damping.json", 1.0, 99, "basis:1")?;
    ensure(tr.rows.len() == 100, || format!("{} grid points", tr.rows.len()))?;
    let col = column(&tr, "trace_distance_to_steady")?;
    let dist: Vec<f64> = tr.rows.iter().map(|r| r[col]).collect();
    for (k, w) in dist.windows(2).enumerate() {
        ensure(w[1] <= w[0], || {
            format!("trace distance increases at point {}: {} → {}", k + 1, w[0], w[1])
        })?;
    }
    Ok(format!(
        "1000 pairs, max ‖E(ρ)−E(ρ′)‖₁ − ‖ρ−ρ′‖₁ = {worst:.2e}; trajectory monotone over 100 points"
    ))
}

fn c10_unit_disk() -> Outcome {
    let mut max_mod = 0.0f64;
    for i in 0..50 {
        let m = sweep_model(i, 4000);
        for t in [0.1, 1.0, 10.0] {
            for z in exact(&m, t).eigenvalues().map_err(|e| e.to_string())? {
                max_mod = max_mod.max(z.norm());
            }
        }
    }
    ensure(max_mod <= 1.0 + 1e-9, || format!("max |μ| = {max_mod}"))?;
    let ad = exact(&build(ModelSpec::AmplitudeDamping { gamma: 1.0 }), 1.0);
    let h = (-0.5f64).exp();
    let expected = [
        C64::new(1.0, 0.0),
        C64::new(h, 0.0),
        C64::new(h, 0.0),
        C64::new((-1.0f64).exp(), 0.0),
    ];
    let d = spectral::match_multisets(&ad.eigenvalues().map_err(|e| e.to_string())?, &expected).unwrap();
    ensure(d <= 1e-9, || {
        format!("amplitude damping channel spectrum off by {d:e}")
    })?;
    Ok(format!(
        "max |μ| = {max_mod:.15}; amplitude damping multiset within {d:.1e}"
    ))
}

fn c11_bosonic_pump() -> Outcome {
    let pr = models::pump_residual(1.0, 20).map_err(|e| e.to_string())?;
    ensure(pr.interior_norm <= 1e-10, || {
        format!("interior residual {:e}", pr.interior_norm)
    })?;
    let r = spectrum(&build(ModelSpec::BosonicPump {
        gamma: 1.0,
        cutoff: 20,
    }));
    nonpositive_with_zero(&r)?;
    Ok(format!(
        "interior residual {:.1e}, boundary residual {:.3}, max Re λ = {:.2e}",
        pr.interior_norm,
        pr.boundary_norm,
        r.max_real_part()
    ))
}

fn c12_cli_contract() -> Outcome {
    let dir = models_dir();
    let builtins = [
        "amplitude_damping.json",
        "dephasing.json",
        "driven_qubit.json",
        "unitary_only.json",
        "bosonic_pump.json",
        "random.json",
    ];
    for name in builtins {
        let (code, _) = run_cli(&["verify", "--all", dir.join(name).to_str().unwrap()])?;
        ensure(code == 0, || format!("verify --all {name} exited {code}"))?;
    }
    let (code, _) = run_cli(&["verify", "--all", dir.join("sign_flipped.json").to_str().unwrap()])?;
    ensure(code == 1, || format!("sign-flipped control exited {code}"))?;

    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let never = tmp.path().join("never.csv");
    let (code, _) = run_cli(&[
        "spectrum",
        dir.join("malformed.json").to_str().unwrap(),
        "--out",
        never.to_str().unwrap(),
    ])?;
    ensure(code == 2, || format!("malformed file exited {code}"))?;
    ensure(!never.exists(), || "output file created on input error".into())?;

    let runs: Vec<Vec<u8>> = (0..2)
        .map(|k| {
            let out = tmp.path().join(format!("spectrum{k}.csv"));
            let (code, _) = run_cli(&[
                "spectrum",
                dir.join("random.json").to_str().unwrap(),
                "--out",
                out.to_str().unwrap(),
            ])?;
            ensure(code == 0, || format!("spectrum exited {code}"))?;
            std::fs::read(&out).map_err(|e| e.to_string())
        })
        .collect::<Result<_, _>>()?;
    ensure(runs[0] == runs[1], || "spectrum CSV differs between runs".into())?;
    ensure(runs[0].starts_with(b"index,re,im,class,residual\n"), || {
        "unexpected CSV header".into()
    })?;
    Ok(format!(
        "{} builtins exit 0, control exits 1, malformed exits 2, spectrum CSV stable",
        builtins.len()
    ))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("non-positivity sweep", c1_nonpositivity_sweep),
        ("exact spectra", c2_exact_spectra),
        ("dissipative gap", c3_gap),
        ("Kossakowski positivity", c4_kossakowski),
        ("dissipation ordering", c5_dissipation_ordering),
        ("eigenvalue proof chain", c6_proof_chain),
        ("CPTP exact channels", c7_cptp),
        ("Trotter convergence", c8_trotter),
        ("contractivity", c9_contractivity),
        ("unit disk", c10_unit_disk),
        ("bosonic pump truncation", c11_bosonic_pump),
        ("CLI contract", c12_cli_contract),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.2}s): {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2}s): {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
