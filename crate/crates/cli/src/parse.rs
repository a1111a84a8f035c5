//! Value parsers for numeric lists, `a:b:step` ranges and rates.

use brickwork_qec::code::CodeParams;

fn number<T: std::str::FromStr>(s: &str) -> Result<T, String> {
    s.trim().parse().map_err(|_| format!("not a number: {s:?}"))
}

/// Rounds away accumulated float noise so that range points print cleanly.
fn tidy(x: f64) -> f64 {
    (x * 1e9).round() / 1e9
}

/// `a:b:step` (inclusive of `a`, exclusive of `b`) or a comma list.
pub fn float_values(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [a, b, step] => {
            let (a, b, step): (f64, f64, f64) = (number(a)?, number(b)?, number(step)?);
            if !(step > 0.0) || !a.is_finite() || !b.is_finite() {
                return Err(format!("bad range {s:?}: step must be positive"));
            }
            let mut out = Vec::new();
            let mut i = 0u32;
            loop {
                let x = a + step * f64::from(i);
                if x >= b - step * 1e-9 {
                    break;
                }
                out.push(tidy(x));
                i += 1;
            }
            if out.is_empty() {
                return Err(format!("range {s:?} is empty"));
            }
            Ok(out)
        }
        [_] => s.split(',').map(number).collect(),
        _ => Err(format!("bad range {s:?}: expected a:b:step")),
    }
}

pub fn int_values(s: &str) -> Result<Vec<usize>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [a, b, step] => {
            let (a, b, step): (usize, usize, usize) = (number(a)?, number(b)?, number(step)?);
            if step == 0 {
                return Err(format!("bad range {s:?}: step must be positive"));
            }
            let out: Vec<usize> = (a..b).step_by(step).collect();
            if out.is_empty() {
                return Err(format!("range {s:?} is empty"));
            }
            Ok(out)
        }
        [_] => s.split(',').map(number).collect(),
        _ => Err(format!("bad range {s:?}: expected a:b:step")),
    }
}

/// A rate written as a decimal (`0.2`) or a fraction (`1/5`), returned as
/// the integer `1/r`.
pub fn rate_inverse(s: &str) -> Result<usize, String> {
    let r = match s.split_once('/') {
        Some((num, den)) => number::<f64>(num)? / number::<f64>(den)?,
        None => number(s)?,
    };
    CodeParams::rate_inverse_from(r).map_err(|e| e.to_string())
}

pub fn rate(s: &str) -> Result<f64, String> {
    let r: f64 = match s.split_once('/') {
        Some((num, den)) => number::<f64>(num)? / number::<f64>(den)?,
        None => number(s)?,
    };
    if !(r > 0.0 && r < 1.0) {
        return Err(format!("rate {s:?} must lie in (0, 1)"));
    }
    Ok(r)
}

pub fn positive(s: &str) -> Result<usize, String> {
    match number::<usize>(s)? {
        0 => Err("must be at least 1".into()),
        v => Ok(v),
    }
}
