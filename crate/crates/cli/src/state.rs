//! Initial-state specifications for `evolve`.

use std::path::Path;

use liouville_core::operator::is_psd;
use liouville_core::{Operator, RandomKind, Sampler};

use crate::model_file::{parse_matrix, Matrix};
use crate::CliError;

pub const STATE_TOL: f64 = 1e-9;

/// `basis:K`, `maximally_mixed`, `random:SEED`, or a path to a JSON matrix.
pub fn parse_rho0(spec: &str, dim: usize) -> Result<Operator, CliError> {
    let rho = if let Some(k) = spec.strip_prefix("basis:") {
        let k: usize = k
            .parse()
            .map_err(|_| CliError::input(format!("bad basis index in '{spec}'")))?;
        if k >= dim {
            return Err(CliError::input(format!(
                "basis index {k} out of range for dim {dim}"
            )));
        }
        Operator::ket_bra(dim, k, k)
    } else if spec == "maximally_mixed" {
        &Operator::identity(dim) * (1.0 / dim as f64)
    } else if let Some(seed) = spec.strip_prefix("random:") {
        let seed: u64 = seed
            .parse()
            .map_err(|_| CliError::input(format!("bad seed in '{spec}'")))?;
        Sampler::new(seed)
            .operator(dim, RandomKind::Density)
            .map_err(CliError::from_core)?
    } else {
        let path = Path::new(spec);
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::input(format!(
                "rho0 '{spec}' is not a known state and cannot be read: {e}"
            ))
        })?;
        let m: Matrix =
            serde_json::from_str(&text).map_err(|e| CliError::input(format!("invalid rho0 matrix: {e}")))?;
        parse_matrix(&m, dim, "rho0")?
    };
    validate_density(&rho)?;
    Ok(rho)
}

fn validate_density(rho: &Operator) -> Result<(), CliError> {
    if rho.hermitian_residual() > STATE_TOL {
        return Err(CliError::input("rho0 is not Hermitian"));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
        return Err(CliError::input(format!("rho0 has trace {tr}, expected 1")));
    }
    let w = is_psd(rho, STATE_TOL);
    if !w.is_psd {
        return Err(CliError::input(format!(
            "rho0 is not positive semidefinite (min eigenvalue {:.3e})",
            w.min_eigenvalue
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_states() {
        let b = parse_rho0("basis:1", 3).unwrap();
        assert_eq!(b.get(1, 1).re, 1.0);
        let mm = parse_rho0("maximally_mixed", 4).unwrap();
        assert!((mm.get(2, 2).re - 0.25).abs() < 1e-15);
        let r1 = parse_rho0("random:3", 2).unwrap();
        assert_eq!(r1, parse_rho0("random:3", 2).unwrap());
    }

    #[test]
    fn invalid_states_rejected() {
        for spec in ["basis:2", "basis:x", "random:-1", "/nonexistent/rho.json", "pure"] {
            assert_eq!(parse_rho0(spec, 2).unwrap_err().exit_code(), 2, "{spec}");
        }
    }

    #[test]
    fn matrix_file_is_validated() {
        let dir = std::env::temp_dir().join(format!("liouville-rho-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let good = dir.join("good.json");
        std::fs::write(&good, "[[[0.5,0],[0,0.5]],[[0,-0.5],[0.5,0]]]").unwrap();
        assert!(parse_rho0(good.to_str().unwrap(), 2).is_ok());
        let neg = dir.join("neg.json");
        std::fs::write(&neg, "[[[1.5,0],[0,0]],[[0,0],[-0.5,0]]]").unwrap();
        assert!(parse_rho0(neg.to_str().unwrap(), 2).is_err());
        std::fs::remove_dir_all(&dir).ok();
    }
}
