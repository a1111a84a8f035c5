//! Finite-size scaling fit `p_L' = A + B x + C x^2` with
//! `x = (p - p_c) d^{1/nu}`, curve crossings and exponential decay fits.

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::rng::stream;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitPoint {
    pub p: f64,
    pub d: f64,
    pub y: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitOptions {
    pub bootstrap: usize,
    pub seed: u64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            bootstrap: 1000,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThresholdFit {
    pub p_c: f64,
    pub nu: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Bootstrap standard deviations; NaN when no resample succeeded.
    pub p_c_err: f64,
    pub nu_err: f64,
    pub a_err: f64,
    pub b_err: f64,
    pub c_err: f64,
    /// Sum of squared residuals.
    pub residual: f64,
    pub bootstrap: usize,
}

/// Solves the 3x3 system `m v = r` by partial pivoting.
fn solve3(mut m: [[f64; 3]; 3], mut r: [f64; 3]) -> Option<[f64; 3]> {
    let scale = m.iter().flatten().fold(0.0f64, |a, &b| a.max(b.abs()));
    if scale == 0.0 {
        return None;
    }
    for col in 0..3 {
        let piv = (col..3).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[piv][col].abs() < 1e-13 * scale {
            return None;
        }
        m.swap(col, piv);
        r.swap(col, piv);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..3 {
                m[row][k] -= f * m[col][k];
            }
            r[row] -= f * r[col];
        }
    }
    let mut v = [0.0; 3];
    for row in (0..3).rev() {
        let s: f64 = (row + 1..3).map(|k| m[row][k] * v[k]).sum();
        v[row] = (r[row] - s) / m[row][row];
    }
    Some(v)
}

/// Least-squares quadratic `y ≈ a + b x + c x^2`; `x` is rescaled
/// internally for conditioning. Returns the coefficients and the residual.
fn quadratic_lls(xs: &[f64], ys: &[f64]) -> Option<([f64; 3], f64)> {
    let s = xs.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    if s == 0.0 || !s.is_finite() {
        return None;
    }
    let mut m = [[0.0; 3]; 3];
    let mut r = [0.0; 3];
    for (&x, &y) in xs.iter().zip(ys) {
        let u = x / s;
        let phi = [1.0, u, u * u];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += phi[i] * phi[j];
            }
            r[i] += phi[i] * y;
        }
    }
    let v = solve3(m, r)?;
    let coef = [v[0], v[1] / s, v[2] / (s * s)];
    let res = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| (y - coef[0] - coef[1] * x - coef[2] * x * x).powi(2))
        .sum();
    Some((coef, res))
}

fn scaled_x(points: &[FitPoint], p_c: f64, nu: f64) -> Vec<f64> {
    points.iter().map(|q| (q.p - p_c) * q.d.powf(1.0 / nu)).collect()
}

/// Residual of the best `(A, B, C)` at fixed `(p_c, ln nu)`.
fn profile_residual(points: &[FitPoint], ys: &[f64], theta: [f64; 2]) -> f64 {
    let nu = theta[1].exp();
    quadratic_lls(&scaled_x(points, theta[0], nu), ys).map_or(f64::INFINITY, |(_, r)| r)
}

fn nelder_mead(f: impl Fn([f64; 2]) -> f64, start: [f64; 2], step: [f64; 2]) -> [f64; 2] {
    let mut simplex = [start, [start[0] + step[0], start[1]], [start[0], start[1] + step[1]]];
    let mut values = simplex.map(&f);
    for _ in 0..4000 {
        let mut order = [0, 1, 2];
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.map(|i| simplex[i]);
        values = order.map(|i| values[i]);
        let size = (1..3)
            .map(|i| (simplex[i][0] - simplex[0][0]).abs().max((simplex[i][1] - simplex[0][1]).abs()))
            .fold(0.0, f64::max);
        if size < 1e-13 {
            break;
        }
        let centroid = [(simplex[0][0] + simplex[1][0]) / 2.0, (simplex[0][1] + simplex[1][1]) / 2.0];
        let along = |t: f64| [centroid[0] + t * (simplex[2][0] - centroid[0]), centroid[1] + t * (simplex[2][1] - centroid[1])];
        let reflected = along(-1.0);
        let fr = f(reflected);
        if fr < values[0] {
            let expanded = along(-2.0);
            let fe = f(expanded);
            if fe < fr {
                simplex[2] = expanded;
                values[2] = fe;
            } else {
                simplex[2] = reflected;
                values[2] = fr;
            }
        } else if fr < values[1] {
            simplex[2] = reflected;
            values[2] = fr;
        } else {
            let contracted = if fr < values[2] { along(-0.5) } else { along(0.5) };
            let fc = f(contracted);
            if fc < values[2].min(fr) {
                simplex[2] = contracted;
                values[2] = fc;
            } else {
                for i in 1..3 {
                    simplex[i] = [
                        (simplex[0][0] + simplex[i][0]) / 2.0,
                        (simplex[0][1] + simplex[i][1]) / 2.0,
                    ];
                    values[i] = f(simplex[i]);
                }
            }
        }
    }
    let best = (0..3).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap_or(0);
    simplex[best]
}

fn check_design(points: &[FitPoint]) -> Result<()> {
    let mut ds: Vec<f64> = points.iter().map(|q| q.d).collect();
    ds.sort_by(f64::total_cmp);
    ds.dedup();
    if ds.len() < 2 {
        return Err(Error::InvalidParameter("threshold fit needs at least two depths".into()));
    }
    for &d in &ds {
        let mut ps: Vec<f64> = points.iter().filter(|q| q.d == d).map(|q| q.p).collect();
        ps.sort_by(f64::total_cmp);
        ps.dedup();
        if ps.len() < 3 {
            return Err(Error::InvalidParameter(format!("depth {d} has fewer than three p values")));
        }
    }
    Ok(())
}

/// `(p_c, nu, A, B, C, residual)` from a grid search then simplex descent
/// confined to a box around the grid, or from descent alone when `start`
/// is given.
fn fit_once(points: &[FitPoint], start: Option<[f64; 2]>) -> Option<([f64; 5], f64)> {
    let ys: Vec<f64> = points.iter().map(|q| q.y).collect();
    let (pmin, pmax) = points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), q| (a.min(q.p), b.max(q.p)));
    let span = (pmax - pmin).max(1e-6);
    let (pc_lo, pc_hi) = (pmin - 0.25 * span, pmin + 1.25 * span);
    let (nu_lo, nu_hi) = ((0.2f64).ln(), (5.0f64).ln());
    let f = |t: [f64; 2]| {
        if t[0] < pc_lo || t[0] > pc_hi || t[1] < nu_lo - 1.0 || t[1] > nu_hi + 1.0 {
            return f64::INFINITY;
        }
        profile_residual(points, &ys, t)
    };
    let start = match start {
        Some(s) => s,
        None => {
            let mut best = ([pmin, 0.0], f64::INFINITY);
            for i in 0..=80 {
                let pc = pc_lo + (pc_hi - pc_lo) * i as f64 / 80.0;
                for j in 0..=40 {
                    let ln_nu = nu_lo + (nu_hi - nu_lo) * j as f64 / 40.0;
                    let v = f([pc, ln_nu]);
                    if v < best.1 {
                        best = ([pc, ln_nu], v);
                    }
                }
            }
            best.0
        }
    };
    let theta = nelder_mead(f, start, [0.02 * span, 0.05]);
    let nu = theta[1].exp();
    let (coef, res) = quadratic_lls(&scaled_x(points, theta[0], nu), &ys)?;
    Some(([theta[0], nu, coef[0], coef[1], coef[2]], res))
}

pub fn threshold_fit(points: &[FitPoint]) -> Result<ThresholdFit> {
    threshold_fit_with(points, &FitOptions::default())
}

/// Least-squares fit of `(p_c, nu, A, B, C)` with bootstrap errors from
/// resampling data points with replacement.
pub fn threshold_fit_with(points: &[FitPoint], options: &FitOptions) -> Result<ThresholdFit> {
    check_design(points)?;
    let (best, residual) =
        fit_once(points, None).ok_or_else(|| Error::Degenerate("singular design matrix in threshold fit".into()))?;

    let mut rng = stream(options.seed, 2);
    let mut samples: Vec<[f64; 5]> = Vec::with_capacity(options.bootstrap);
    let start = [best[0], best[1].ln()];
    for _ in 0..options.bootstrap {
        let resample: Vec<FitPoint> = (0..points.len()).map(|_| points[rng.gen_range(0..points.len())]).collect();
        if check_design(&resample).is_err() {
            continue;
        }
        if let Some((v, _)) = fit_once(&resample, Some(start)) {
            if v.iter().all(|x| x.is_finite()) {
                samples.push(v);
            }
        }
    }
    let sd = |i: usize| -> f64 {
        if samples.len() < 2 {
            return f64::NAN;
        }
        let m = samples.iter().map(|s| s[i]).sum::<f64>() / samples.len() as f64;
        (samples.iter().map(|s| (s[i] - m).powi(2)).sum::<f64>() / (samples.len() - 1) as f64).sqrt()
    };
    Ok(ThresholdFit {
        p_c: best[0],
        nu: best[1],
        a: best[2],
        b: best[3],
        c: best[4],
        p_c_err: sd(0),
        nu_err: sd(1),
        a_err: sd(2),
        b_err: sd(3),
        c_err: sd(4),
        residual,
        bootstrap: samples.len(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Crossing {
    pub d_a: f64,
    pub d_b: f64,
    pub p: Option<f64>,
}

/// Points of a curve used for the local refit around a crossing.
const LOCAL_POINTS: usize = 5;

/// Difference of quadratic fits `a - b` as coefficients in `p - center`.
fn difference_fit(a: &[(f64, f64)], b: &[(f64, f64)], center: f64) -> Option<[f64; 3]> {
    let fit = |c: &[(f64, f64)]| {
        let xs: Vec<f64> = c.iter().map(|q| q.0 - center).collect();
        let ys: Vec<f64> = c.iter().map(|q| q.1).collect();
        quadratic_lls(&xs, &ys).map(|(coef, _)| coef)
    };
    let (ca, cb) = (fit(a)?, fit(b)?);
    Some([ca[0] - cb[0], ca[1] - cb[1], ca[2] - cb[2]])
}

/// Real roots of `c0 + c1 x + c2 x^2`, each with its slope.
fn quadratic_roots(c: [f64; 3]) -> Vec<(f64, f64)> {
    let scale = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return Vec::new();
    }
    let xs = if c[2].abs() <= 1e-14 * scale {
        if c[1] == 0.0 {
            Vec::new()
        } else {
            vec![-c[0] / c[1]]
        }
    } else {
        let disc = c[1] * c[1] - 4.0 * c[2] * c[0];
        if disc < 0.0 {
            Vec::new()
        } else {
            let q = -0.5 * (c[1] + c[1].signum() * disc.sqrt());
            if q == 0.0 {
                vec![0.0]
            } else {
                vec![q / c[2], c[0] / q]
            }
        }
    };
    xs.into_iter().map(|x| (x, (c[1] + 2.0 * c[2] * x).abs())).collect()
}

fn nearest(curve: &[(f64, f64)], at: f64) -> Vec<(f64, f64)> {
    let mut c = curve.to_vec();
    c.sort_by(|u, v| (u.0 - at).abs().total_cmp(&(v.0 - at).abs()));
    c.truncate(LOCAL_POINTS);
    c
}

/// Where two `(p, y)` curves cross inside `[lo, hi]`. Quadratic fits to
/// the whole curves locate the steepest crossing; the estimate is then
/// refined by refitting on the points nearest to it.
pub fn crossing_point(a: &[(f64, f64)], b: &[(f64, f64)], lo: f64, hi: f64) -> Option<f64> {
    let mid = 0.5 * (lo + hi);
    let inside = |x: f64| x >= lo && x <= hi;
    let mut est = quadratic_roots(difference_fit(a, b, mid)?)
        .into_iter()
        .map(|(x, s)| (x + mid, s))
        .filter(|&(p, _)| inside(p))
        .max_by(|u, v| u.1.total_cmp(&v.1))?
        .0;
    for _ in 0..20 {
        let Some(coef) = difference_fit(&nearest(a, est), &nearest(b, est), est) else {
            break;
        };
        let Some(next) = quadratic_roots(coef)
            .into_iter()
            .map(|(x, _)| x + est)
            .filter(|&p| inside(p))
            .min_by(|u, v| (u - est).abs().total_cmp(&(v - est).abs()))
        else {
            break;
        };
        let done = (next - est).abs() < 1e-12;
        est = next;
        if done {
            break;
        }
    }
    Some(est)
}

/// Crossings for every pair of depths present in `points`.
pub fn crossing_points(points: &[FitPoint], lo: f64, hi: f64) -> Vec<Crossing> {
    let mut ds: Vec<f64> = points.iter().map(|q| q.d).collect();
    ds.sort_by(f64::total_cmp);
    ds.dedup();
    let curve = |d: f64| -> Vec<(f64, f64)> { points.iter().filter(|q| q.d == d).map(|q| (q.p, q.y)).collect() };
    let mut out = Vec::new();
    for i in 0..ds.len() {
        for j in i + 1..ds.len() {
            out.push(Crossing {
                d_a: ds[i],
                d_b: ds[j],
                p: crossing_point(&curve(ds[i]), &curve(ds[j]), lo, hi),
            });
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecayFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    /// Depths dropped because no failure was observed.
    pub excluded: Vec<f64>,
}

/// Linear regression of `ln y` on `d`.
pub fn decay_fit(points: &[(f64, f64)]) -> Result<DecayFit> {
    if points.len() < 3 {
        return Err(Error::InvalidParameter("decay fit needs at least three depths".into()));
    }
    let (kept, dropped): (Vec<&(f64, f64)>, Vec<&(f64, f64)>) = points.iter().partition(|q| q.1 > 0.0);
    if kept.len() < 2 {
        return Err(Error::Degenerate("fewer than two depths with observed failures".into()));
    }
    let n = kept.len() as f64;
    let xs: Vec<f64> = kept.iter().map(|q| q.0).collect();
    let ys: Vec<f64> = kept.iter().map(|q| q.1.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Degenerate("all depths equal".into()));
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(DecayFit {
        slope,
        intercept: my - slope * mx,
        r2,
        excluded: dropped.iter().map(|q| q.0).collect(),
    })
}
