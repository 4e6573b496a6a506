//! Fixtures shared by the benchmarks.

use liouville_core::models::{self, ModelSpec};
use liouville_core::LindbladModel;

/// Random model of dimension `d` with `k` jump operators and a fixed seed.
pub fn random_fixture(d: usize, k: usize) -> LindbladModel {
    models::random_model(d, k, 0x5eed).expect("valid dimensions")
}

pub fn pump_fixture(cutoff: usize) -> LindbladModel {
    models::build(&ModelSpec::BosonicPump { gamma: 1.0, cutoff }).expect("valid cutoff")
}

pub const DIMENSIONS: [usize; 3] = [2, 4, 8];
