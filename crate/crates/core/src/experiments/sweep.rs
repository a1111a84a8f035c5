use rayon::prelude::*;

use crate::code::{generate_code, CodeParams, StabilizerCode, Variant};
use crate::error::{Error, Result};
use crate::noise::{depolarizing, NoiseModel};
use crate::rng::{derive_seed, stream, CODE_STREAM};
use crate::tn::Decoder;

use super::{run_trial_with, TrialOutcome};

/// Where each trial's code comes from.
#[derive(Clone, Debug)]
pub enum CodeSampling {
    /// A new code per trial, drawn from the trial seed.
    Fresh,
    /// One code for every trial.
    Fixed(StabilizerCode),
}

impl CodeSampling {
    pub fn name(&self) -> &'static str {
        match self {
            CodeSampling::Fresh => "fresh",
            CodeSampling::Fixed(_) => "fixed",
        }
    }
}

/// Trial outcomes in trial-index order plus the count of trials dropped
/// for exceeding a resource cap.
#[derive(Clone, Debug)]
pub struct TrialBatch {
    pub outcomes: Vec<TrialOutcome>,
    pub invalid: usize,
}

pub fn run_trials(
    params: &CodeParams,
    noise: &NoiseModel,
    trials: usize,
    master_seed: u64,
    sampling: &CodeSampling,
) -> Result<TrialBatch> {
    params.validate()?;
    let fixed_decoder = match sampling {
        CodeSampling::Fixed(code) => Some(Decoder::new(code)?),
        CodeSampling::Fresh => None,
    };
    let results: Vec<Result<Option<TrialOutcome>>> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let seed = derive_seed(master_seed, i);
            let outcome = match &fixed_decoder {
                Some(dec) => run_trial_with(dec, noise, seed),
                None => {
                    let trial_params = CodeParams { seed, ..*params };
                    let code = generate_code(&trial_params, &mut stream(seed, CODE_STREAM))?;
                    Decoder::new(&code).and_then(|dec| run_trial_with(&dec, noise, seed))
                }
            };
            match outcome {
                Ok(o) => Ok(Some(o)),
                Err(e) if e.is_resource() => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect();
    let mut batch = TrialBatch {
        outcomes: Vec::with_capacity(trials),
        invalid: 0,
    };
    for r in results {
        match r? {
            Some(o) => batch.outcomes.push(o),
            None => batch.invalid += 1,
        }
    }
    Ok(batch)
}

/// Logical qubits at least `4d` sites from both chain ends.
pub fn bulk_indices(positions: &[usize], n_phys: usize, depth: usize) -> Vec<usize> {
    let margin = 4 * depth;
    positions
        .iter()
        .enumerate()
        .filter(|&(_, &p)| p >= margin && n_phys - 1 - p >= margin)
        .map(|(i, _)| i)
        .collect()
}

/// Per-logical-qubit failure counts over a batch of trials.
#[derive(Clone, Debug, PartialEq)]
pub struct FailureProfile {
    pub positions: Vec<usize>,
    pub n_phys: usize,
    pub depth: usize,
    pub trials: usize,
    pub invalid: usize,
    pub failures: Vec<u64>,
    pub any_failures: u64,
}

impl FailureProfile {
    pub fn from_outcomes(positions: Vec<usize>, n_phys: usize, depth: usize, batch: &TrialBatch) -> Self {
        let mut failures = vec![0u64; positions.len()];
        let mut any = 0;
        for o in &batch.outcomes {
            for (c, &b) in failures.iter_mut().zip(&o.failures) {
                *c += b as u64;
            }
            any += o.any_failure() as u64;
        }
        FailureProfile {
            positions,
            n_phys,
            depth,
            trials: batch.outcomes.len(),
            invalid: batch.invalid,
            failures,
            any_failures: any,
        }
    }

    pub fn k(&self) -> usize {
        self.positions.len()
    }

    pub fn rate(&self, j: usize) -> f64 {
        self.failures[j] as f64 / self.trials as f64
    }

    pub fn stderr(&self, j: usize) -> f64 {
        binomial_stderr(self.rate(j), self.trials as f64)
    }

    /// Logical index scaled to `[0, 1)`.
    pub fn x(&self, j: usize) -> f64 {
        j as f64 / self.k() as f64
    }

    pub fn any_rate(&self) -> f64 {
        self.any_failures as f64 / self.trials as f64
    }
}

pub(crate) fn binomial_stderr(p: f64, n: f64) -> f64 {
    if n > 0.0 {
        (p * (1.0 - p) / n).sqrt()
    } else {
        f64::NAN
    }
}

/// Pooled bulk failure rate and its binomial standard error over
/// `trials × bulk qubits` samples.
pub fn bulk_rate(profile: &FailureProfile) -> Result<(f64, f64)> {
    let bulk = bulk_indices(&profile.positions, profile.n_phys, profile.depth);
    if bulk.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "no logical qubit lies {} sites from both ends of {} qubits",
            4 * profile.depth,
            profile.n_phys
        )));
    }
    if profile.trials == 0 {
        return Err(Error::InvalidParameter("no valid trials".into()));
    }
    let fails: u64 = bulk.iter().map(|&j| profile.failures[j]).sum();
    let samples = (profile.trials * bulk.len()) as f64;
    let rate = fails as f64 / samples;
    Ok((rate, binomial_stderr(rate, samples)))
}

pub fn failure_profile(
    params: &CodeParams,
    p: f64,
    trials: usize,
    master_seed: u64,
    sampling: &CodeSampling,
) -> Result<FailureProfile> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let noise = depolarizing(p)?;
    let batch = run_trials(params, &noise, trials, master_seed, sampling)?;
    let (positions, n_phys) = match sampling {
        CodeSampling::Fresh => (params.logical_positions(), params.n_phys()),
        CodeSampling::Fixed(code) => (code.logical_positions.clone(), code.n_phys),
    };
    Ok(FailureProfile::from_outcomes(positions, n_phys, params.depth, &batch))
}

/// One row of a threshold sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    pub rate_inverse: usize,
    pub depth: usize,
    pub n: usize,
    pub n_phys: usize,
    pub p: f64,
    pub trials: usize,
    pub invalid: usize,
    pub failures_bulk: u64,
    pub bulk_qubits: usize,
    pub failures_any: u64,
    pub variant: Variant,
    pub seed: u64,
    pub profile: Vec<u64>,
}

impl SweepPoint {
    pub fn rate(&self) -> f64 {
        1.0 / self.rate_inverse as f64
    }

    pub fn p_l_prime(&self) -> f64 {
        self.failures_bulk as f64 / (self.trials * self.bulk_qubits) as f64
    }

    pub fn stderr(&self) -> f64 {
        binomial_stderr(self.p_l_prime(), (self.trials * self.bulk_qubits) as f64)
    }

    pub fn p_l(&self) -> f64 {
        self.failures_any as f64 / self.trials as f64
    }
}

pub fn run_point(
    params: &CodeParams,
    p: f64,
    trials: usize,
    master_seed: u64,
    sampling: &CodeSampling,
) -> Result<SweepPoint> {
    let profile = failure_profile(params, p, trials, master_seed, sampling)?;
    bulk_rate(&profile)?;
    let bulk = bulk_indices(&profile.positions, profile.n_phys, profile.depth);
    Ok(SweepPoint {
        rate_inverse: params.rate_inverse,
        depth: params.depth,
        n: params.n,
        n_phys: profile.n_phys,
        p,
        trials: profile.trials,
        invalid: profile.invalid,
        failures_bulk: bulk.iter().map(|&j| profile.failures[j]).sum(),
        bulk_qubits: bulk.len(),
        failures_any: profile.any_failures,
        variant: params.variant,
        seed: master_seed,
        profile: profile.failures,
    })
}

/// `d = round(log2(r n) / alpha)`, at least 1.
pub fn alpha_depth(rate_inverse: usize, n: usize, alpha: f64) -> usize {
    let k = (n / rate_inverse).max(1) as f64;
    ((k.log2() / alpha).round() as usize).max(1)
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlphaPoint {
    pub alpha: f64,
    pub n: usize,
    pub depth: usize,
    pub n_phys: usize,
    pub trials: usize,
    pub invalid: usize,
    pub failures_any: u64,
}

impl AlphaPoint {
    pub fn p_l(&self) -> f64 {
        self.failures_any as f64 / self.trials as f64
    }

    pub fn stderr(&self) -> f64 {
        binomial_stderr(self.p_l(), self.trials as f64)
    }
}

/// Any-qubit failure rate against system size with depth tied to
/// `log2 k / alpha`.
#[allow(clippy::too_many_arguments)]
pub fn alpha_scaling(
    rate_inverse: usize,
    p: f64,
    alphas: &[f64],
    ns: &[usize],
    trials: usize,
    master_seed: u64,
    variant: Variant,
) -> Result<Vec<AlphaPoint>> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let noise = depolarizing(p)?;
    let mut out = Vec::new();
    for &alpha in alphas {
        if !(alpha > 0.0) {
            return Err(Error::InvalidParameter(format!("alpha = {alpha} must be positive")));
        }
        for &n in ns {
            let depth = alpha_depth(rate_inverse, n, alpha);
            let params = CodeParams::new(n, rate_inverse, depth, variant, master_seed)?;
            let batch = run_trials(&params, &noise, trials, master_seed, &CodeSampling::Fresh)?;
            out.push(AlphaPoint {
                alpha,
                n,
                depth,
                n_phys: params.n_phys(),
                trials: batch.outcomes.len(),
                invalid: batch.invalid,
                failures_any: batch.outcomes.iter().filter(|o| o.any_failure()).count() as u64,
            });
        }
    }
    Ok(out)
}
