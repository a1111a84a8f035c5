use std::collections::BTreeMap;

use crate::code::CodeParams;
use crate::error::{Error, Result};
use crate::noise::depolarizing;

use super::sweep::{run_trials, CodeSampling};

/// Per-trial failure bits with the pre-encoding positions of the logical
/// qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct FailureRecord {
    pub positions: Vec<usize>,
    pub rate_inverse: usize,
    pub depth: usize,
    pub trials: Vec<Vec<bool>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationPoint {
    /// Physical distance between the two logical qubits before encoding.
    pub separation: usize,
    /// Separation in logical-index units, `separation · r`.
    pub x: f64,
    /// `x / (r d)`.
    pub x_norm: f64,
    pub conditional: f64,
    pub marginal: f64,
    /// `P(2 | 1) - P(2)`.
    pub value: f64,
    /// Delete-a-group jackknife standard error.
    pub stderr: f64,
    /// Trials in which qubit 1 failed, summed over pairs.
    pub conditioning_events: u64,
    pub low_statistics: bool,
}

/// Fewer conditioning events than this flags a point.
pub const MIN_CONDITIONING_EVENTS: u64 = 30;
const JACKKNIFE_GROUPS: usize = 20;

#[derive(Clone, Copy, Default)]
struct Counts {
    n1: u64,
    n12: u64,
    n2: u64,
    samples: u64,
}

impl Counts {
    fn value(&self) -> Option<(f64, f64)> {
        if self.n1 == 0 || self.samples == 0 {
            return None;
        }
        let cond = self.n12 as f64 / self.n1 as f64;
        let marg = self.n2 as f64 / self.samples as f64;
        Some((cond, marg))
    }
}

/// Ordered pairs `(1, 2)` grouped by physical separation, with per-trial
/// counts accumulated into `groups` buckets.
fn tally(record: &FailureRecord, groups: usize) -> BTreeMap<usize, Vec<Counts>> {
    let k = record.positions.len();
    let mut pairs: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for a in 0..k {
        for b in 0..k {
            if a != b {
                let sep = record.positions[a].abs_diff(record.positions[b]);
                pairs.entry(sep).or_default().push((a, b));
            }
        }
    }
    let mut out = BTreeMap::new();
    for (sep, list) in pairs {
        let mut buckets = vec![Counts::default(); groups];
        for (t, bits) in record.trials.iter().enumerate() {
            let c = &mut buckets[t % groups];
            for &(a, b) in &list {
                c.n1 += bits[a] as u64;
                c.n12 += (bits[a] && bits[b]) as u64;
                c.n2 += bits[b] as u64;
                c.samples += 1;
            }
        }
        out.insert(sep, buckets);
    }
    out
}

fn sum(counts: &[Counts], skip: Option<usize>) -> Counts {
    counts
        .iter()
        .enumerate()
        .filter(|&(i, _)| Some(i) != skip)
        .fold(Counts::default(), |acc, (_, c)| Counts {
            n1: acc.n1 + c.n1,
            n12: acc.n12 + c.n12,
            n2: acc.n2 + c.n2,
            samples: acc.samples + c.samples,
        })
}

/// Conditional-minus-marginal failure probability against separation.
pub fn correlation_curve(record: &FailureRecord) -> Result<Vec<CorrelationPoint>> {
    if record.positions.len() < 2 {
        return Err(Error::InvalidParameter("correlations need at least two logical qubits".into()));
    }
    if let Some(bad) = record.trials.iter().find(|t| t.len() != record.positions.len()) {
        return Err(Error::DimensionMismatch {
            expected: record.positions.len(),
            found: bad.len(),
        });
    }
    let r = 1.0 / record.rate_inverse as f64;
    let groups = JACKKNIFE_GROUPS.min(record.trials.len()).max(1);
    let mut out = Vec::new();
    for (sep, buckets) in tally(record, groups) {
        let total = sum(&buckets, None);
        let (conditional, marginal) = total.value().unwrap_or((f64::NAN, f64::NAN));
        let value = conditional - marginal;
        let leave_out: Vec<f64> = (0..groups)
            .filter_map(|g| sum(&buckets, Some(g)).value().map(|(c, m)| c - m))
            .collect();
        let stderr = if leave_out.len() >= 2 {
            let g = leave_out.len() as f64;
            let mean = leave_out.iter().sum::<f64>() / g;
            ((g - 1.0) / g * leave_out.iter().map(|v| (v - mean).powi(2)).sum::<f64>()).sqrt()
        } else {
            f64::NAN
        };
        let x = sep as f64 * r;
        out.push(CorrelationPoint {
            separation: sep,
            x,
            x_norm: x / (r * record.depth as f64),
            conditional,
            marginal,
            value,
            stderr,
            conditioning_events: total.n1,
            low_statistics: total.n1 < MIN_CONDITIONING_EVENTS || leave_out.len() < groups,
        });
    }
    Ok(out)
}

/// Runs fresh-code trials and returns the failure record and its curve.
pub fn correlations(
    params: &CodeParams,
    p: f64,
    trials: usize,
    master_seed: u64,
) -> Result<(FailureRecord, Vec<CorrelationPoint>)> {
    if params.k() < 2 {
        return Err(Error::InvalidParameter("correlations need k >= 2".into()));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let batch = run_trials(params, &depolarizing(p)?, trials, master_seed, &CodeSampling::Fresh)?;
    let record = FailureRecord {
        positions: params.logical_positions(),
        rate_inverse: params.rate_inverse,
        depth: params.depth,
        trials: batch.outcomes.into_iter().map(|o| o.failures).collect(),
    };
    let curve = correlation_curve(&record)?;
    Ok((record, curve))
}
