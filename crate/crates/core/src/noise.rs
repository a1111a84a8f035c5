//! IID Pauli noise, syndromes, pure errors and the hashing bound.

use std::fmt;
use std::str::FromStr;

use rand::Rng as _;

use crate::code::StabilizerCode;
use crate::error::{Error, Result};
use crate::gf2::PureErrorSolver;
use crate::pauli::{Pauli, PauliString};
use crate::rng::Rng;

/// Single-site Pauli channel, applied independently to every qubit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseModel {
    pub p_i: f64,
    pub p_x: f64,
    pub p_y: f64,
    pub p_z: f64,
}

impl NoiseModel {
    pub fn new(p_i: f64, p_x: f64, p_y: f64, p_z: f64) -> Result<Self> {
        let m = NoiseModel { p_i, p_x, p_y, p_z };
        let probs = m.probabilities();
        if probs.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::InvalidParameter(format!("probabilities {probs:?} out of range")));
        }
        if (probs.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("probabilities {probs:?} do not sum to 1")));
        }
        Ok(m)
    }

    /// `(p_I, p_X, p_Y, p_Z)`.
    pub fn probabilities(&self) -> [f64; 4] {
        [self.p_i, self.p_x, self.p_y, self.p_z]
    }

    #[inline]
    pub fn prob(&self, p: Pauli) -> f64 {
        match p {
            Pauli::I => self.p_i,
            Pauli::X => self.p_x,
            Pauli::Y => self.p_y,
            Pauli::Z => self.p_z,
        }
    }

    /// Probabilities indexed by the two-bit code `x | z << 1`.
    #[inline]
    pub fn by_code(&self) -> [f64; 4] {
        [self.p_i, self.p_x, self.p_z, self.p_y]
    }

    pub fn error_probability(&self) -> f64 {
        self.p_x + self.p_y + self.p_z
    }
}

pub fn depolarizing(p: f64) -> Result<NoiseModel> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("depolarizing p = {p} outside [0, 1]")));
    }
    Ok(NoiseModel {
        p_i: 1.0 - p,
        p_x: p / 3.0,
        p_y: p / 3.0,
        p_z: p / 3.0,
    })
}

pub fn sample_error(noise: &NoiseModel, n: usize, rng: &mut Rng) -> PauliString {
    let mut e = PauliString::identity(n);
    let (cx, cy) = (noise.p_x, noise.p_x + noise.p_y);
    let total = noise.error_probability();
    for j in 0..n {
        let u: f64 = rng.gen();
        if u < total {
            let p = if u < cx {
                Pauli::X
            } else if u < cy {
                Pauli::Y
            } else {
                Pauli::Z
            };
            e.set(j, p);
        }
    }
    e
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Syndrome(pub Vec<bool>);

impl Syndrome {
    pub fn zeros(len: usize) -> Self {
        Syndrome(vec![false; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Syndrome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse {
                    line: 0,
                    message: format!("syndrome bit {other:?}"),
                }),
            })
            .collect::<Result<Vec<_>>>()
            .map(Syndrome)
    }
}

pub fn syndrome(code: &StabilizerCode, e: &PauliString) -> Result<Syndrome> {
    if e.len() != code.n_phys {
        return Err(Error::DimensionMismatch {
            expected: code.n_phys,
            found: e.len(),
        });
    }
    Ok(Syndrome(
        code.checks.iter().map(|g| !g.commutes_unchecked(e)).collect(),
    ))
}

/// Canonical operator with the given syndrome. For repeated use on one code,
/// build a [`PureErrorSolver`] once instead.
pub fn pure_error(code: &StabilizerCode, s: &Syndrome) -> Result<PauliString> {
    PureErrorSolver::new(&code.checks)?.solve(s.bits())
}

/// Shannon entropy in bits with `0 log 0 = 0`.
pub fn entropy_bits(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

/// `1 - H(p_I, p_X, p_Y, p_Z)`; negative values are returned as is.
pub fn hashing_rate(noise: &NoiseModel) -> f64 {
    1.0 - entropy_bits(&noise.probabilities())
}

/// Depolarizing probability at which the hashing rate equals `r`, by
/// bisection on `[0, 3/4]`.
pub fn hashing_threshold(r: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidParameter(format!("rate {r} outside (0, 1)")));
    }
    let rate = |p: f64| hashing_rate(&depolarizing(p).expect("p in range"));
    // The hashing rate falls monotonically from 1 at p = 0 to -1 at p = 3/4.
    let (mut lo, mut hi) = (0.0f64, 0.75f64);
    if (rate(lo) - r) * (rate(hi) - r) > 0.0 {
        return Err(Error::InvalidParameter(format!("no hashing threshold for rate {r}")));
    }
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if rate(mid) > r {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{build_initial_code, encode, sample_circuit_standard};
    use crate::rng::stream;

    #[test]
    fn depolarizing_examples() {
        assert_eq!(depolarizing(0.0).unwrap().probabilities(), [1.0, 0.0, 0.0, 0.0]);
        let m = depolarizing(0.3).unwrap();
        for (a, b) in m.probabilities().iter().zip([0.7, 0.1, 0.1, 0.1]) {
            assert!((a - b).abs() < 1e-15);
        }
        let m = depolarizing(1.0).unwrap();
        assert_eq!(m.p_i, 0.0);
        assert!((m.p_y - 1.0 / 3.0).abs() < 1e-15);
        assert!(depolarizing(-0.1).is_err());
        assert!(depolarizing(1.1).is_err());
        assert!(NoiseModel::new(0.5, 0.5, 0.5, 0.0).is_err());
    }

    #[test]
    fn by_code_matches_bits() {
        let m = NoiseModel::new(0.4, 0.3, 0.2, 0.1).unwrap();
        for p in Pauli::ALL {
            assert_eq!(m.by_code()[p.code()], m.prob(p));
        }
    }

    #[test]
    fn sampling_frequencies() {
        let mut rng = stream(1, 1);
        assert!(sample_error(&depolarizing(0.0).unwrap(), 1000, &mut rng).is_identity());
        let n = 100_000;
        let e = sample_error(&depolarizing(0.1).unwrap(), n, &mut rng);
        let frac = e.weight() as f64 / n as f64;
        assert!((frac - 0.1).abs() < 0.005, "{frac}");
        let mut counts = [0usize; 4];
        for p in e.iter() {
            counts[p as usize] += 1;
        }
        let nontrivial = e.weight() as f64;
        for p in Pauli::NON_IDENTITY {
            let f = counts[p as usize] as f64 / nontrivial;
            assert!((f - 1.0 / 3.0).abs() < 0.02, "{p}: {f}");
        }
    }

    #[test]
    fn syndrome_and_pure_error() {
        let mut rng = stream(4, 0);
        for _ in 0..100 {
            let base = build_initial_code(8, 2, &mut rng).unwrap();
            let code = encode(&base, &sample_circuit_standard(8, 2, &mut rng)).unwrap();
            let zero = syndrome(&code, &PauliString::identity(8)).unwrap();
            assert!(zero.bits().iter().all(|&b| !b));
            assert!(pure_error(&code, &zero).unwrap().is_identity());

            let mut stab = PauliString::identity(8);
            for (i, g) in code.checks.iter().enumerate() {
                if i % 2 == 0 {
                    stab.mul_assign(g).unwrap();
                }
            }
            assert!(syndrome(&code, &stab).unwrap().bits().iter().all(|&b| !b));

            let e = sample_error(&depolarizing(0.3).unwrap(), 8, &mut rng);
            let s = syndrome(&code, &e).unwrap();
            let f = pure_error(&code, &s).unwrap();
            assert_eq!(syndrome(&code, &f).unwrap(), s);
            let fe = f.product(&e).unwrap();
            assert!(code.checks.iter().all(|g| g.commutes_with(&fe).unwrap()));

            let e2 = sample_error(&depolarizing(0.3).unwrap(), 8, &mut rng);
            let s2 = syndrome(&code, &e2).unwrap();
            let s12 = syndrome(&code, &e.product(&e2).unwrap()).unwrap();
            let xor: Vec<bool> = s.bits().iter().zip(s2.bits()).map(|(a, b)| a ^ b).collect();
            assert_eq!(s12.bits(), &xor[..]);
        }
        let code = build_initial_code(4, 1, &mut rng).unwrap();
        assert!(syndrome(&code, &PauliString::identity(3)).is_err());
    }

    #[test]
    fn hashing_rate_examples() {
        assert_eq!(hashing_rate(&depolarizing(0.0).unwrap()), 1.0);
        let uniform = NoiseModel::new(0.25, 0.25, 0.25, 0.25).unwrap();
        assert!((hashing_rate(&uniform) + 1.0).abs() < 1e-15);
        let r = hashing_rate(&depolarizing(0.13854).unwrap());
        assert!((r - 0.2).abs() < 5e-4, "{r}");
    }

    #[test]
    fn hashing_threshold_round_trip() {
        for r in [0.05, 0.1, 0.2, 0.25, 1.0 / 3.0, 0.5, 0.9] {
            let p = hashing_threshold(r).unwrap();
            assert!((hashing_rate(&depolarizing(p).unwrap()) - r).abs() < 1e-6);
        }
        assert!(hashing_threshold(0.0).is_err());
        assert!(hashing_threshold(1.0).is_err());
    }

    #[test]
    fn syndrome_text() {
        let s: Syndrome = "0110".parse().unwrap();
        assert_eq!(s.bits(), &[false, true, true, false]);
        assert_eq!(s.to_string(), "0110");
        assert!("01a".parse::<Syndrome>().is_err());
    }
}
