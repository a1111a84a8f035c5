//! Monte Carlo studies: failure profiles, bulk rates, threshold fits,
//! correlations and depth scaling.
//!
//! Trial `i` of a run with master seed `S` uses `derive_seed(S, i)`; the
//! code is drawn from that seed's code stream and the error from its noise
//! stream. Seeds do not depend on `p`, so points along a sweep share random
//! numbers, and results do not depend on how trials are scheduled.

mod correlate;
mod fit;
mod sweep;

pub use correlate::{correlations, correlation_curve, CorrelationPoint, FailureRecord};
pub use fit::{
    crossing_point, crossing_points, decay_fit, threshold_fit, threshold_fit_with, Crossing, DecayFit,
    FitOptions, FitPoint, ThresholdFit,
};
pub use sweep::{
    alpha_depth, alpha_scaling, bulk_indices, bulk_rate, failure_profile, run_point, run_trials, AlphaPoint,
    CodeSampling, FailureProfile, SweepPoint,
};

use crate::code::StabilizerCode;
use crate::error::Result;
use crate::noise::{sample_error, syndrome, NoiseModel};
use crate::pauli::PauliString;
use crate::rng::{stream, NOISE_STREAM};
use crate::tn::Decoder;

/// Failure bits of one trial for a code with `k` logical qubits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialOutcome {
    pub seed: u64,
    pub failures: Vec<bool>,
}

impl TrialOutcome {
    pub fn any_failure(&self) -> bool {
        self.failures.iter().any(|&b| b)
    }
}

/// Bit `j` is set when `correction · error` anticommutes with either
/// encoded logical of qubit `j`.
pub fn logical_failures(code: &StabilizerCode, correction: &PauliString, error: &PauliString) -> Result<Vec<bool>> {
    let residual = correction.product(error)?;
    Ok((0..code.k)
        .map(|j| {
            !code.logical_x[j].commutes_unchecked(&residual) || !code.logical_z[j].commutes_unchecked(&residual)
        })
        .collect())
}

/// Decodes a known error and reports per-qubit failures.
pub fn decode_error(decoder: &Decoder, noise: &NoiseModel, error: &PauliString) -> Result<Vec<bool>> {
    let s = syndrome(decoder.code(), error)?;
    let result = decoder.decode(&s, noise)?;
    logical_failures(decoder.code(), &result.correction, error)
}

/// Samples an error from the noise stream of `seed`, decodes it and
/// reports per-qubit failures.
pub fn run_trial(code: &StabilizerCode, noise: &NoiseModel, seed: u64) -> Result<TrialOutcome> {
    let decoder = Decoder::new(code)?;
    run_trial_with(&decoder, noise, seed)
}

pub fn run_trial_with(decoder: &Decoder, noise: &NoiseModel, seed: u64) -> Result<TrialOutcome> {
    let mut rng = stream(seed, NOISE_STREAM);
    let error = sample_error(noise, decoder.code().n_phys, &mut rng);
    Ok(TrialOutcome {
        seed,
        failures: decode_error(decoder, noise, &error)?,
    })
}
