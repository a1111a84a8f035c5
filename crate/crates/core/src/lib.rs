//! Stabilizer codes from low-depth brickwork Clifford circuits, with exact
//! tensor-network maximum-likelihood decoding.

pub mod clifford;
pub mod code;
pub mod error;
pub mod experiments;
pub mod gf2;
pub mod noise;
pub mod oracle;
pub mod pauli;
pub mod rng;
pub mod tn;

pub use clifford::{CliffordCircuit, Layer, SingleQubitClifford};
pub use code::{generate_code, CodeParams, StabilizerCode, Variant};
pub use error::{Error, Result};
pub use noise::{depolarizing, NoiseModel, Syndrome};
pub use pauli::{Pauli, PauliString};
