//! Pauli operators in binary symplectic form.
//!
//! A single-qubit Pauli is a bit pair `(x, z)` with `I = (0,0)`, `X = (1,0)`,
//! `Y = (1,1)` and `Z = (0,1)`. An n-qubit [`PauliString`] packs the x and z
//! bits into 64-bit words. Phases are not part of a `PauliString`; where a
//! sign matters it is carried next to the string.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    pub const NON_IDENTITY: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    #[inline]
    pub fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    #[inline]
    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    /// Two-bit code `x | z << 1`, used to index per-site probability tables.
    #[inline]
    pub fn code(self) -> usize {
        let (x, z) = self.bits();
        x as usize | (z as usize) << 1
    }

    #[inline]
    pub fn from_code(code: usize) -> Pauli {
        Pauli::from_bits(code & 1 == 1, code & 2 == 2)
    }

    #[inline]
    pub fn is_identity(self) -> bool {
        self == Pauli::I
    }

    /// Product ignoring phase.
    #[inline]
    pub fn mul(self, other: Pauli) -> Pauli {
        Pauli::from_code(self.code() ^ other.code())
    }

    /// `self * other = i^k * result`; returns `(result, k mod 4)`.
    pub fn mul_with_phase(self, other: Pauli) -> (Pauli, u8) {
        use Pauli::*;
        let k = match (self, other) {
            (X, Y) | (Y, Z) | (Z, X) => 1,
            (Y, X) | (Z, Y) | (X, Z) => 3,
            _ => 0,
        };
        (self.mul(other), k)
    }

    #[inline]
    pub fn anticommutes(self, other: Pauli) -> bool {
        let (ax, az) = self.bits();
        let (bx, bz) = other.bits();
        (ax & bz) ^ (az & bx)
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_symbol(c: char) -> Option<Pauli> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// An n-qubit Pauli operator, phase discarded.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        let w = words_for(n);
        PauliString {
            n,
            x: vec![0; w],
            z: vec![0; w],
        }
    }

    pub fn single(n: usize, site: usize, p: Pauli) -> Self {
        let mut s = Self::identity(n);
        s.set(site, p);
        s
    }

    pub fn from_paulis(paulis: &[Pauli]) -> Self {
        let mut s = Self::identity(paulis.len());
        for (j, &p) in paulis.iter().enumerate() {
            s.set(j, p);
        }
        s
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, j: usize) -> Pauli {
        debug_assert!(j < self.n);
        let (w, b) = (j / 64, j % 64);
        Pauli::from_bits((self.x[w] >> b) & 1 == 1, (self.z[w] >> b) & 1 == 1)
    }

    #[inline]
    pub fn set(&mut self, j: usize, p: Pauli) {
        assert!(j < self.n, "site {j} out of range for {} qubits", self.n);
        let (w, b) = (j / 64, j % 64);
        let (x, z) = p.bits();
        self.x[w] = (self.x[w] & !(1 << b)) | ((x as u64) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | ((z as u64) << b);
    }

    pub fn iter(&self) -> impl Iterator<Item = Pauli> + '_ {
        (0..self.n).map(move |j| self.get(j))
    }

    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    /// `[first, last]` non-identity sites, `None` for the identity.
    pub fn support_interval(&self) -> Option<(usize, usize)> {
        let occupied: Vec<u64> = self.x.iter().zip(&self.z).map(|(x, z)| x | z).collect();
        let first_word = occupied.iter().position(|&w| w != 0)?;
        let last_word = occupied.iter().rposition(|&w| w != 0)?;
        let first = first_word * 64 + occupied[first_word].trailing_zeros() as usize;
        let last = last_word * 64 + 63 - occupied[last_word].leading_zeros() as usize;
        Some((first, last))
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&j| !self.get(j).is_identity()).collect()
    }

    fn check_len(&self, other: &PauliString) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    /// 0 if the operators commute, 1 if they anticommute.
    pub fn symplectic_product(&self, other: &PauliString) -> Result<u8> {
        self.check_len(other)?;
        Ok(self.commutes_unchecked(other) as u8 ^ 1)
    }

    pub fn commutes_with(&self, other: &PauliString) -> Result<bool> {
        self.check_len(other)?;
        Ok(self.commutes_unchecked(other))
    }

    #[inline]
    pub(crate) fn commutes_unchecked(&self, other: &PauliString) -> bool {
        let mut acc = 0u32;
        for w in 0..self.x.len() {
            acc ^= ((self.x[w] & other.z[w]) ^ (self.z[w] & other.x[w])).count_ones();
        }
        acc & 1 == 0
    }

    /// In-place product, phase discarded.
    pub fn mul_assign(&mut self, other: &PauliString) -> Result<()> {
        self.check_len(other)?;
        self.mul_assign_unchecked(other);
        Ok(())
    }

    #[inline]
    pub(crate) fn mul_assign_unchecked(&mut self, other: &PauliString) {
        for w in 0..self.x.len() {
            self.x[w] ^= other.x[w];
            self.z[w] ^= other.z[w];
        }
    }

    pub fn product(&self, other: &PauliString) -> Result<PauliString> {
        let mut out = self.clone();
        out.mul_assign(other)?;
        Ok(out)
    }

    /// Copy with `extra` sites removed from (negative) or appended to
    /// (positive) each end, the new sites carrying identity.
    pub fn resized(&self, left: isize, right: isize) -> PauliString {
        let new_n = (self.n as isize + left + right).max(0) as usize;
        let mut out = PauliString::identity(new_n);
        for j in 0..self.n {
            let target = j as isize + left;
            if target >= 0 && (target as usize) < new_n {
                out.set(target as usize, self.get(j));
            }
        }
        out
    }

    /// Symplectic row `[x | z]` as booleans, length `2n`.
    pub fn symplectic_bits(&self) -> Vec<bool> {
        let mut v = Vec::with_capacity(2 * self.n);
        v.extend(self.iter().map(|p| p.bits().0));
        v.extend(self.iter().map(|p| p.bits().1));
        v
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in self.iter() {
            write!(f, "{}", p.symbol())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let paulis = s
            .trim()
            .chars()
            .map(|c| {
                Pauli::from_symbol(c).ok_or_else(|| Error::Parse {
                    line: 0,
                    message: format!("unexpected character {c:?} in Pauli string"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PauliString::from_paulis(&paulis))
    }
}
