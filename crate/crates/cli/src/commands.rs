use std::fs;

use brickwork_qec::code::{generate_code, CodeParams, StabilizerCode};
use brickwork_qec::experiments::{
    alpha_scaling, correlations, crossing_points, decay_fit, failure_profile, run_point, threshold_fit_with,
    CodeSampling, FitOptions, FitPoint, FailureProfile,
};
use brickwork_qec::noise::{depolarizing, hashing_rate, hashing_threshold, Syndrome};
use brickwork_qec::rng::{stream, CODE_STREAM};
use brickwork_qec::tn::{ContractOptions, Decoder};
use brickwork_qec::experiments::bulk_indices;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::output::{csv_with_manifest, emit, emit_side_manifest, json_text, Manifest};
use crate::{
    AlphaArgs, CliError, CorrelateArgs, DecayArgs, DecodeArgs, FitArgs, GenArgs, HashingArgs, MeasureArg,
    ProfileArgs, SamplingArg, SweepArgs,
};

fn read_text(path: &std::path::Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn sampling(mode: SamplingArg, params: &CodeParams) -> Result<CodeSampling, CliError> {
    Ok(match mode {
        SamplingArg::Fresh => CodeSampling::Fresh,
        SamplingArg::Fixed => CodeSampling::Fixed(generate_code(params, &mut stream(params.seed, CODE_STREAM))?),
    })
}

pub fn gen(a: &GenArgs) -> Result<(), CliError> {
    let manifest = Manifest::start("gen", a, Some(a.seed));
    let params = CodeParams::new(a.n, a.rate, a.depth, a.variant.into(), a.seed)?;
    let code = generate_code(&params, &mut stream(a.seed, CODE_STREAM))?;
    emit(a.out.as_deref(), &code.to_string())?;
    emit_side_manifest(
        a.out.as_deref(),
        &manifest.finish(json!({ "n_phys": code.n_phys, "k": code.k, "checks": code.num_checks() })),
    )
}

pub fn decode(a: &DecodeArgs) -> Result<(), CliError> {
    let manifest = Manifest::start("decode", a, None);
    let code: StabilizerCode = read_text(&a.code)?.parse()?;
    let s: Syndrome = a.syndrome.parse()?;
    let noise = depolarizing(a.p)?;
    let options = ContractOptions { max_width: a.max_width };
    let result = Decoder::with_options(&code, options, a.backend.into())?.decode(&s, &noise)?;
    let classes: Vec<String> = result.classes.iter().map(|c| c.to_string()).collect();
    let value = json!({
        "correction": result.correction.to_string(),
        "classes": classes,
        "log_probs": result.log_probs,
        "manifest": manifest.finish(json!({})),
    });
    emit(a.out.as_deref(), &json_text(&value)?)
}

#[derive(Serialize, Deserialize)]
struct SweepRow {
    r: f64,
    d: usize,
    n: usize,
    n_phys: usize,
    p: f64,
    trials: usize,
    failures_bulk: u64,
    bulk_qubits: usize,
    #[serde(rename = "p_L_prime")]
    p_l_prime: f64,
    stderr: f64,
    #[serde(rename = "p_L")]
    p_l: f64,
    variant: String,
    seed: u64,
}

const TRIALS_NOTE: &str = "desk-scale default is 20000 trials per point; publication-scale sweeps used at least 200000";

pub fn sweep(a: &SweepArgs) -> Result<(), CliError> {
    let manifest = Manifest::start("sweep", a, Some(a.seed));
    let mut rows = Vec::new();
    let mut invalid = 0;
    for &d in &a.depths {
        let params = CodeParams::new(a.n, a.rate, d, a.variant.into(), a.seed)?;
        let mode = sampling(a.sampling, &params)?;
        for &p in &a.ps {
            let pt = run_point(&params, p, a.trials, a.seed, &mode)?;
            eprintln!("d={d} p={p} p_L'={:.5} ({} invalid)", pt.p_l_prime(), pt.invalid);
            invalid += pt.invalid;
            rows.push(SweepRow {
                r: pt.rate(),
                d,
                n: pt.n,
                n_phys: pt.n_phys,
                p,
                trials: pt.trials,
                failures_bulk: pt.failures_bulk,
                bulk_qubits: pt.bulk_qubits,
                p_l_prime: pt.p_l_prime(),
                stderr: pt.stderr(),
                p_l: pt.p_l(),
                variant: pt.variant.to_string(),
                seed: pt.seed,
            });
        }
    }
    let m = manifest.finish(json!({
        "sampling": mode_name(a.sampling),
        "invalid_trials": invalid,
        "trials_note": TRIALS_NOTE,
    }));
    emit(a.out.as_deref(), &csv_with_manifest(&m, &rows)?)
}

fn mode_name(mode: SamplingArg) -> &'static str {
    match mode {
        SamplingArg::Fresh => "fresh",
        SamplingArg::Fixed => "fixed",
    }
}

fn read_sweep(path: &std::path::Path) -> Result<Vec<SweepRow>, CliError> {
    let text = read_text(path)?;
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    reader
        .deserialize()
        .collect::<Result<Vec<SweepRow>, _>>()
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn measure(row: &SweepRow, m: MeasureArg) -> f64 {
    match m {
        MeasureArg::PLPrime => row.p_l_prime,
        MeasureArg::PL => row.p_l,
    }
}

pub fn fit(a: &FitArgs) -> Result<(), CliError> {
    let manifest = Manifest::start("fit", a, Some(a.seed));
    let rows = read_sweep(&a.input)?;
    let points: Vec<FitPoint> = rows
        .iter()
        .map(|r| FitPoint {
            p: r.p,
            d: r.d as f64,
            y: measure(r, a.measure),
        })
        .collect();
    let fit = threshold_fit_with(
        &points,
        &FitOptions {
            bootstrap: a.bootstrap,
            seed: a.seed,
        },
    )?;
    let pmin = points.iter().map(|q| q.p).fold(f64::INFINITY, f64::min);
    let pmax = points.iter().map(|q| q.p).fold(f64::NEG_INFINITY, f64::max);
    let crossings: Vec<_> = crossing_points(&points, a.lo.unwrap_or(pmin), a.hi.unwrap_or(pmax))
        .iter()
        .map(|c| json!({ "d_a": c.d_a, "d_b": c.d_b, "p": c.p }))
        .collect();
    let value = json!({
        "p_c": fit.p_c,
        "p_c_err": fit.p_c_err,
        "nu": fit.nu,
        "nu_err": fit.nu_err,
        "A": fit.a,
        "B": fit.b,
        "C": fit.c,
        "A_err": fit.a_err,
        "B_err": fit.b_err,
        "C_err": fit.c_err,
        "residual": fit.residual,
        "bootstrap": fit.bootstrap,
        "points": points.len(),
        "crossings": crossings,
        "manifest": manifest.finish(json!({})),
    });
    emit(a.out.as_deref(), &json_text(&value)?)
}

pub fn decay(a: &DecayArgs) -> Result<(), CliError> {
    let manifest = Manifest::start("decay", a, None);
    let rows = read_sweep(&a.input)?;
    let mut points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| (r.p - a.p).abs() <= 1e-9 * a.p.abs().max(1.0))
        .map(|r| (r.d as f64, measure(r, a.measure)))
        .collect();
    points.sort_by(|x, y| x.0.total_cmp(&y.0));
    let fit = decay_fit(&points)?;
    let value = json!({
        "slope": fit.slope,
        "intercept": fit.intercept,
        "r2": fit.r2,
        "excluded": fit.excluded,
        "points": points,
        "manifest": manifest.finish(json!({})),
    });
    emit(a.out.as_deref(), &json_text(&value)?)
}

#[derive(Serialize)]
struct CorrelationRow {
    separation: usize,
    x: f64,
    x_norm: f64,
    conditional: f64,
    marginal: f64,
    value: f64,
    stderr: f64,
    conditioning_events: u64,
    low_statistics: bool,
}

pub fn correlate(a: &CorrelateArgs) -> Result<(), CliError> {
    let manifest = Manifest::start("correlate", a, Some(a.seed));
    let params = CodeParams::new(a.n, a.rate, a.depth, a.variant.into(), a.seed)?;
    let (record, curve) = correlations(&params, a.p, a.trials, a.seed)?;
    let rows: Vec<CorrelationRow> = curve
        .into_iter()
        .map(|c| CorrelationRow {
            separation: c.separation,
            x: c.x,
            x_norm: c.x_norm,
            conditional: c.conditional,
            marginal: c.marginal,
            value: c.value,
            stderr: c.stderr,
            conditioning_events: c.conditioning_events,
            low_statistics: c.low_statistics,
        })
        .collect();
    let m = manifest.finish(json!({ "valid_trials": record.trials.len(), "invalid_trials": a.trials - record.trials.len() }));
    emit(a.out.as_deref(), &csv_with_manifest(&m, &rows)?)
}

#[derive(Serialize)]
struct ProfileRow {
    index: usize,
    x: f64,
    position: usize,
    failures: u64,
    trials: usize,
    rate: f64,
    stderr: f64,
    bulk: bool,
}

fn profile_rows(profile: &FailureProfile) -> Vec<ProfileRow> {
    let bulk = bulk_indices(&profile.positions, profile.n_phys, profile.depth);
    (0..profile.k())
        .map(|j| ProfileRow {
            index: j,
            x: profile.x(j),
            position: profile.positions[j],
            failures: profile.failures[j],
            trials: profile.trials,
            rate: profile.rate(j),
            stderr: profile.stderr(j),
            bulk: bulk.contains(&j),
        })
        .collect()
}

pub fn profile(a: &ProfileArgs) -> Result<(), CliError> {
    let manifest = Manifest::start("profile", a, Some(a.seed));
    let params = CodeParams::new(a.n, a.rate, a.depth, a.variant.into(), a.seed)?;
    let mode = sampling(a.sampling, &params)?;
    let profile = failure_profile(&params, a.p, a.trials, a.seed, &mode)?;
    let m = manifest.finish(json!({
        "n_phys": profile.n_phys,
        "invalid_trials": profile.invalid,
        "any_failure_rate": profile.any_rate(),
    }));
    emit(a.out.as_deref(), &csv_with_manifest(&m, &profile_rows(&profile))?)
}

#[derive(Serialize)]
struct AlphaRow {
    alpha: f64,
    n: usize,
    d: usize,
    n_phys: usize,
    trials: usize,
    failures_any: u64,
    #[serde(rename = "p_L")]
    p_l: f64,
    stderr: f64,
}

pub fn alpha(a: &AlphaArgs) -> Result<(), CliError> {
    let manifest = Manifest::start("alpha", a, Some(a.seed));
    let points = alpha_scaling(a.rate, a.p, &a.alphas, &a.ns, a.trials, a.seed, a.variant.into())?;
    let invalid: usize = points.iter().map(|q| q.invalid).sum();
    let rows: Vec<AlphaRow> = points
        .iter()
        .map(|q| AlphaRow {
            alpha: q.alpha,
            n: q.n,
            d: q.depth,
            n_phys: q.n_phys,
            trials: q.trials,
            failures_any: q.failures_any,
            p_l: q.p_l(),
            stderr: q.stderr(),
        })
        .collect();
    let m = manifest.finish(json!({ "invalid_trials": invalid }));
    emit(a.out.as_deref(), &csv_with_manifest(&m, &rows)?)
}

pub fn hashing(a: &HashingArgs) -> Result<(), CliError> {
    let manifest = Manifest::start("hashing", a, None);
    let value = match (a.rate, a.p) {
        (Some(r), _) => hashing_threshold(r)?,
        (None, Some(p)) => hashing_rate(&depolarizing(p)?),
        (None, None) => return Err(CliError::Usage("one of --rate or --p is required".into())),
    };
    emit(None, &format!("{value:.6}\n"))?;
    emit_side_manifest(None, &manifest.finish(json!({})))
}
