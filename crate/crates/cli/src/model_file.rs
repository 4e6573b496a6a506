//! Model files: JSON, complex scalars as `[re, im]`, matrices as row-major
//! nested arrays.
//!
//! ```json
//! {"builtin": {"name": "amplitude_damping", "parameters": {"gamma": 1.0}}}
//! {"explicit": {"dim": 2, "hamiltonian": [[[0,0],[0,0]],[[0,0],[0,0]]], "lindblad_ops": []}}
//! ```

use std::path::Path;

use liouville_core::models::{self, ModelSpec};
use liouville_core::{GeneratorForm, LindbladModel, Operator, C64};
use serde::Deserialize;

use crate::CliError;

/// Hermiticity accepted on load, relative to `max(1, ‖H‖_F)`.
pub const LOAD_HERMITIAN_TOL: f64 = 1e-9;

pub type Matrix = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelFile {
    Builtin(ModelSpec),
    Explicit(ExplicitModel),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitModel {
    #[serde(default)]
    pub label: Option<String>,
    pub dim: usize,
    pub hamiltonian: Matrix,
    pub lindblad_ops: Vec<Matrix>,
    #[serde(default)]
    pub form: FileForm,
}

#[derive(Clone, Copy, Debug, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FileForm {
    #[default]
    Lindblad,
    SignFlippedJump,
}

impl From<FileForm> for GeneratorForm {
    fn from(f: FileForm) -> Self {
        match f {
            FileForm::Lindblad => GeneratorForm::Lindblad,
            FileForm::SignFlippedJump => GeneratorForm::SignFlippedJump,
        }
    }
}

/// Square matrix of the given dimension from nested `[re, im]` rows.
pub fn parse_matrix(m: &Matrix, dim: usize, what: &str) -> Result<Operator, CliError> {
    if m.len() != dim {
        return Err(CliError::input(format!(
            "{what}: expected {dim} rows, found {}",
            m.len()
        )));
    }
    let mut entries = Vec::with_capacity(dim * dim);
    for (r, row) in m.iter().enumerate() {
        if row.len() != dim {
            return Err(CliError::input(format!(
                "{what}: row {r} has {} entries, expected {dim}",
                row.len()
            )));
        }
        for z in row {
            if !z[0].is_finite() || !z[1].is_finite() {
                return Err(CliError::input(format!("{what}: non-finite entry in row {r}")));
            }
            entries.push(C64::new(z[0], z[1]));
        }
    }
    Operator::from_row_slice(&entries).map_err(|e| CliError::input(format!("{what}: {e}")))
}

impl ExplicitModel {
    pub fn build(&self) -> Result<LindbladModel, CliError> {
        if self.dim == 0 {
            return Err(CliError::input("dim must be ≥ 1"));
        }
        let h = parse_matrix(&self.hamiltonian, self.dim, "hamiltonian")?;
        let residual = h.hermitian_residual();
        if residual > LOAD_HERMITIAN_TOL * h.frobenius_norm().max(1.0) {
            return Err(CliError::input(format!(
                "hamiltonian is not Hermitian (‖H − H†‖_F = {residual:.3e})"
            )));
        }
        let jumps = self
            .lindblad_ops
            .iter()
            .enumerate()
            .map(|(k, m)| parse_matrix(m, self.dim, &format!("lindblad_ops[{k}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let label = self
            .label
            .clone()
            .unwrap_or_else(|| format!("explicit(d={})", self.dim));
        let model = LindbladModel::new(label, h.hermitian_part(), jumps).map_err(CliError::from_core)?;
        Ok(model.with_form(self.form.into()))
    }
}

pub fn parse_model(text: &str) -> Result<LindbladModel, CliError> {
    let file: ModelFile =
        serde_json::from_str(text).map_err(|e| CliError::input(format!("invalid model file: {e}")))?;
    match file {
        ModelFile::Builtin(spec) => models::build(&spec).map_err(CliError::from_core),
        ModelFile::Explicit(m) => m.build(),
    }
}

pub fn load_model(path: &Path) -> Result<LindbladModel, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    parse_model(&text)
}
