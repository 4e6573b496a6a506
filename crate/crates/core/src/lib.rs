//! Lindblad generators, their spectra and the quantum channels they generate.
//!
//! Operators are dense complex matrices; superoperators act on column-stacked
//! vectorizations, `vec(A X B) = (Bᵀ ⊗ A) vec(X)`.

pub mod channel;
pub mod error;
pub mod lemmas;
pub mod linalg;
pub mod liouvillian;
pub mod models;
pub mod operator;
pub mod random;
pub mod spectral;
pub mod verify;

pub use channel::{Channel, ChannelMatrix, ChannelSource, KrausChannel, TrotterMetadata};
pub use error::{Error, Result};
pub use lemmas::ProofChainRecord;
pub use linalg::C64;
pub use liouvillian::{Direction, GeneratorForm, LindbladModel, Superoperator};
pub use models::ModelSpec;
pub use operator::{Operator, PsdWitness, Tolerance, ABS_TOL, HERMITIAN_TOL, REL_TOL};
pub use random::{RandomKind, Sampler};
pub use spectral::{EigenClass, SpectrumReport, SteadyCandidate};
pub use verify::{Check, VerificationReport};
