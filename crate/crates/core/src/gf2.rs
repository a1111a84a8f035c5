//! GF(2) elimination on symplectic check matrices.

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};

/// Dense GF(2) row packed into words.
#[derive(Clone, Debug, PartialEq, Eq)]
struct BitRow(Vec<u64>);

impl BitRow {
    fn zeros(len: usize) -> Self {
        BitRow(vec![0; len.div_ceil(64)])
    }

    #[inline]
    fn get(&self, i: usize) -> bool {
        (self.0[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    fn flip(&mut self, i: usize) {
        self.0[i / 64] ^= 1 << (i % 64);
    }

    #[inline]
    fn xor(&mut self, other: &BitRow) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a ^= b;
        }
    }
}

/// Row `[z | x]` of a check, so that `row · [f_x | f_z]` is the symplectic
/// product with `f`.
fn swapped_row(g: &PauliString) -> BitRow {
    let n = g.len();
    let mut row = BitRow::zeros(2 * n);
    for (j, p) in g.iter().enumerate() {
        let (x, z) = p.bits();
        if z {
            row.flip(j);
        }
        if x {
            row.flip(n + j);
        }
    }
    row
}

/// Reduced row echelon form with pivots chosen left to right. Returns the
/// pivot columns and, per reduced row, which original rows were combined.
fn reduce(rows: &mut [BitRow], width: usize) -> (Vec<usize>, Vec<BitRow>) {
    let m = rows.len();
    let mut combos: Vec<BitRow> = (0..m)
        .map(|i| {
            let mut r = BitRow::zeros(m);
            r.flip(i);
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..width {
        if next == m {
            break;
        }
        let Some(p) = (next..m).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(next, p);
        combos.swap(next, p);
        let (pivot_row, pivot_combo) = (rows[next].clone(), combos[next].clone());
        for r in 0..m {
            if r != next && rows[r].get(col) {
                rows[r].xor(&pivot_row);
                combos[r].xor(&pivot_combo);
            }
        }
        pivots.push(col);
        next += 1;
    }
    (pivots, combos)
}

/// GF(2) rank of the symplectic rows of `ops`.
pub fn rank(ops: &[PauliString]) -> usize {
    let Some(first) = ops.first() else { return 0 };
    let mut rows: Vec<BitRow> = ops.iter().map(swapped_row).collect();
    reduce(&mut rows, 2 * first.len()).0.len()
}

/// Pure errors ("destabilizers") for a fixed set of independent checks:
/// `basis[i]` anticommutes with check `i` only. The basis comes from one
/// elimination with left-to-right pivots over the `[x | z]` columns of the
/// unknown, so the pure error of a syndrome is deterministic.
#[derive(Clone, Debug)]
pub struct PureErrorSolver {
    n: usize,
    basis: Vec<PauliString>,
}

impl PureErrorSolver {
    pub fn new(checks: &[PauliString]) -> Result<Self> {
        let n = checks.first().map_or(0, |g| g.len());
        if let Some(bad) = checks.iter().find(|g| g.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        let m = checks.len();
        let mut rows: Vec<BitRow> = checks.iter().map(swapped_row).collect();
        let (pivots, combos) = reduce(&mut rows, 2 * n);
        if pivots.len() != m {
            return Err(Error::InconsistentSyndrome);
        }
        // R = E H with R in RREF. f with f[pivot_r] = (E s)_r solves H f = s,
        // so the pure error for unit syndrome e_i sets pivot_r wherever E[r][i] = 1.
        let mut basis = vec![PauliString::identity(n); m];
        for (r, &col) in pivots.iter().enumerate() {
            for (i, b) in basis.iter_mut().enumerate() {
                if combos[r].get(i) {
                    let site = col % n;
                    let (mut x, mut z) = b.get(site).bits();
                    if col < n {
                        x ^= true;
                    } else {
                        z ^= true;
                    }
                    b.set(site, Pauli::from_bits(x, z));
                }
            }
        }
        Ok(PureErrorSolver { n, basis })
    }

    pub fn basis(&self) -> &[PauliString] {
        &self.basis
    }

    pub fn solve(&self, syndrome: &[bool]) -> Result<PauliString> {
        if syndrome.len() != self.basis.len() {
            return Err(Error::DimensionMismatch {
                expected: self.basis.len(),
                found: syndrome.len(),
            });
        }
        let mut f = PauliString::identity(self.n);
        for (b, &s) in self.basis.iter().zip(syndrome) {
            if s {
                f.mul_assign_unchecked(b);
            }
        }
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn rank_detects_dependence() {
        assert_eq!(rank(&[ps("XX"), ps("ZZ")]), 2);
        assert_eq!(rank(&[ps("XX"), ps("ZZ"), ps("YY")]), 2);
        assert_eq!(rank(&[ps("XI"), ps("YI"), ps("ZI")]), 2);
        assert_eq!(rank(&[]), 0);
    }

    #[test]
    fn destabilizers_are_dual() {
        let checks = vec![ps("XXXX"), ps("ZZZZ"), ps("XZIY")];
        let solver = PureErrorSolver::new(&checks).unwrap();
        for (i, t) in solver.basis().iter().enumerate() {
            for (j, g) in checks.iter().enumerate() {
                assert_eq!(g.symplectic_product(t).unwrap() == 1, i == j);
            }
        }
        assert!(solver.solve(&[false; 3]).unwrap().is_identity());
        assert!(solver.solve(&[false; 2]).is_err());
        assert!(PureErrorSolver::new(&[ps("XX"), ps("XX")]).is_err());
    }
}
