//! Tensor-network coset probabilities and marginal maximum-likelihood
//! decoding.

pub mod chain;
pub mod decode;
pub mod grid;
pub mod layout;

pub use chain::contract_tanner_chain;
pub use decode::{coset_probability, decode_marginal, Backend, DecodeResult, Decoder, LogicalClass, TIE_TOLERANCE};
pub use grid::{contract, contract_clamped, ContractOptions, Contraction, DEFAULT_MAX_WIDTH};
pub use layout::{Cell, CheckTensor, ProbabilityTensor, TnLayout};
