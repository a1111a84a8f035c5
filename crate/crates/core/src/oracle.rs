//! Brute-force references for coset probabilities and global ML decoding.
//! Every routine enumerates exactly and refuses instances above its cap.

use crate::code::StabilizerCode;
use crate::error::{Error, Result};
use crate::noise::{syndrome, NoiseModel, Syndrome};
use crate::pauli::{Pauli, PauliString};
use crate::tn::decode::{argmax_class, LogicalClass, TIE_TOLERANCE};

/// Largest generator count for a single coset enumeration.
pub const MAX_GROUP_GENERATORS: usize = 24;
pub const MAX_ML_LOGICALS: usize = 6;
pub const MAX_ML_CHECKS: usize = 20;
/// Largest qubit count for enumerating the full error space.
pub const MAX_ERROR_SPACE_QUBITS: usize = 10;

fn check_cap(what: &'static str, actual: usize, cap: usize) -> Result<()> {
    if actual > cap {
        return Err(Error::Resource { what, actual, cap });
    }
    Ok(())
}

fn check_len(n: usize, op: &PauliString) -> Result<()> {
    if op.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: op.len(),
        });
    }
    Ok(())
}

pub fn error_probability(e: &PauliString, noise: &NoiseModel) -> f64 {
    e.iter().map(|p| noise.prob(p)).product()
}

/// `Σ_σ p(f Π g_i^{σ_i})`, each subset product built from scratch.
pub fn brute_group_sum(gens: &[PauliString], f: &PauliString, noise: &NoiseModel) -> Result<f64> {
    check_cap("group generators", gens.len(), MAX_GROUP_GENERATORS)?;
    for g in gens {
        check_len(f.len(), g)?;
    }
    let mut total = 0.0;
    for mask in 0u64..1 << gens.len() {
        let mut e = f.clone();
        for (i, g) in gens.iter().enumerate() {
            if mask >> i & 1 == 1 {
                e.mul_assign_unchecked(g);
            }
        }
        total += error_probability(&e, noise);
    }
    Ok(total)
}

/// Same sum as [`brute_group_sum`], visiting subsets in Gray-code order so
/// that consecutive elements differ by one generator.
pub fn brute_group_sum_gray(gens: &[PauliString], f: &PauliString, noise: &NoiseModel) -> Result<f64> {
    check_cap("group generators", gens.len(), MAX_GROUP_GENERATORS)?;
    for g in gens {
        check_len(f.len(), g)?;
    }
    let mut e = f.clone();
    let mut total = error_probability(&e, noise);
    for step in 1u64..1 << gens.len() {
        e.mul_assign_unchecked(&gens[step.trailing_zeros() as usize]);
        total += error_probability(&e, noise);
    }
    Ok(total)
}

/// `p(f_L G)` over the code's checks.
pub fn brute_coset_probability(code: &StabilizerCode, f_l: &PauliString, noise: &NoiseModel) -> Result<f64> {
    check_len(code.n_phys, f_l)?;
    brute_group_sum(&code.checks, f_l, noise)
}

fn class_operator(code: &StabilizerCode, index: usize) -> PauliString {
    let mut op = PauliString::identity(code.n_phys);
    for j in 0..code.k {
        let (x, z) = LogicalClass::from_index(index >> (2 * j)).bits();
        op.mul_assign_unchecked(&code.logical_operator(j, x, z));
    }
    op
}

/// Coset probabilities `p(f L_c G)` for all `4^k` joint classes `c`, indexed
/// by `Σ_j class_j · 4^j`.
pub fn coset_table(code: &StabilizerCode, f: &PauliString, noise: &NoiseModel) -> Result<Vec<f64>> {
    check_cap("logical qubits", code.k, MAX_ML_LOGICALS)?;
    check_cap("checks", code.num_checks(), MAX_ML_CHECKS)?;
    check_len(code.n_phys, f)?;
    (0..1usize << (2 * code.k))
        .map(|c| {
            let f_l = f.product(&class_operator(code, c))?;
            brute_group_sum(&code.checks, &f_l, noise)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct BruteMl {
    pub pure_error: PauliString,
    /// Joint argmax, first in index order among near-ties.
    pub classes: Vec<LogicalClass>,
    pub table: Vec<f64>,
    pub correction: PauliString,
}

pub fn brute_ml_decode(code: &StabilizerCode, s: &Syndrome, noise: &NoiseModel) -> Result<BruteMl> {
    let f = crate::noise::pure_error(code, s)?;
    let table = coset_table(code, &f, noise)?;
    let max = table.iter().copied().fold(0.0, f64::max);
    let best = table
        .iter()
        .position(|&v| v >= max * (1.0 - TIE_TOLERANCE))
        .unwrap_or(0);
    let classes = (0..code.k)
        .map(|j| LogicalClass::from_index(best >> (2 * j)))
        .collect();
    let correction = f.product(&class_operator(code, best))?;
    Ok(BruteMl {
        pure_error: f,
        classes,
        table,
        correction,
    })
}

/// Per-qubit marginals of [`coset_table`], indexed by [`LogicalClass::index`].
pub fn brute_marginals(code: &StabilizerCode, f: &PauliString, noise: &NoiseModel) -> Result<Vec<[f64; 4]>> {
    let table = coset_table(code, f, noise)?;
    let mut out = vec![[0.0; 4]; code.k];
    for (c, &v) in table.iter().enumerate() {
        for (j, row) in out.iter_mut().enumerate() {
            row[(c >> (2 * j)) & 3] += v;
        }
    }
    Ok(out)
}

/// Marginal classes chosen from [`brute_marginals`] with the I < X < Z < Y
/// tie order.
pub fn brute_marginal_classes(code: &StabilizerCode, s: &Syndrome, noise: &NoiseModel) -> Result<Vec<LogicalClass>> {
    let f = crate::noise::pure_error(code, s)?;
    Ok(brute_marginals(code, &f, noise)?.iter().map(argmax_class).collect())
}

/// Total probability of all Pauli errors producing syndrome `s`.
pub fn total_syndrome_probability(code: &StabilizerCode, s: &Syndrome, noise: &NoiseModel) -> Result<f64> {
    let n = code.n_phys;
    check_cap("qubits", n, MAX_ERROR_SPACE_QUBITS)?;
    let mut total = 0.0;
    for word in 0u64..1 << (2 * n) {
        let paulis: Vec<Pauli> = (0..n).map(|j| Pauli::from_code((word >> (2 * j)) as usize & 3)).collect();
        let e = PauliString::from_paulis(&paulis);
        if syndrome(code, &e)? == *s {
            total += error_probability(&e, noise);
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::depolarizing;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn single_check_two_terms() {
        let noise = depolarizing(0.3).unwrap();
        let v = brute_group_sum(&[ps("Z")], &ps("X"), &noise).unwrap();
        assert!((v - 0.2).abs() < 1e-15);
    }

    #[test]
    fn independent_z_sites() {
        let noise = NoiseModel::new(0.5, 0.2, 0.1, 0.2).unwrap();
        let gens: Vec<PauliString> = (0..5).map(|j| PauliString::single(5, j, Pauli::Z)).collect();
        let v = brute_group_sum(&gens, &PauliString::identity(5), &noise).unwrap();
        assert!((v - 0.7f64.powi(5)).abs() < 1e-15);
    }

    #[test]
    fn gray_matches_direct() {
        let noise = NoiseModel::new(0.6, 0.2, 0.15, 0.05).unwrap();
        let gens = vec![ps("XZZXI"), ps("IXZZX"), ps("XIXZZ"), ps("ZXIXZ"), ps("YYIII")];
        let f = ps("ZIYIX");
        let a = brute_group_sum(&gens, &f, &noise).unwrap();
        let b = brute_group_sum_gray(&gens, &f, &noise).unwrap();
        assert!((a - b).abs() <= 1e-14 * a.abs());
    }

    #[test]
    fn caps_are_errors() {
        let noise = depolarizing(0.1).unwrap();
        let gens = vec![ps("Z"); MAX_GROUP_GENERATORS + 1];
        assert!(brute_group_sum(&gens, &ps("I"), &noise).unwrap_err().is_resource());
        assert!(brute_group_sum_gray(&gens, &ps("I"), &noise).unwrap_err().is_resource());
    }
}
