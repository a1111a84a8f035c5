//! Single-qubit Cliffords, the iSWAP gate, and layered brickwork circuits
//! acting on [`PauliString`]s by conjugation.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};

/// A single-qubit Clifford modulo global phase, described by where it sends
/// `X` and `Z` under conjugation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SingleQubitClifford {
    pub id: u8,
    pub image_of_x: Pauli,
    pub image_of_z: Pauli,
    pub x_negated: bool,
    pub z_negated: bool,
}

pub const NUM_SINGLE_CLIFFORDS: usize = 24;

const IMAGE_PAIRS: [(Pauli, Pauli); 6] = [
    (Pauli::X, Pauli::Z),
    (Pauli::Z, Pauli::X),
    (Pauli::X, Pauli::Y),
    (Pauli::Y, Pauli::X),
    (Pauli::Y, Pauli::Z),
    (Pauli::Z, Pauli::Y),
];

impl SingleQubitClifford {
    /// Element `id` of the fixed enumeration: `id / 4` selects the image pair,
    /// `id % 4` the two sign bits. Id 0 is the identity and id 4 exchanges X
    /// and Z.
    pub fn from_id(id: u8) -> Self {
        assert!((id as usize) < NUM_SINGLE_CLIFFORDS, "clifford id {id} out of range");
        let (image_of_x, image_of_z) = IMAGE_PAIRS[id as usize / 4];
        SingleQubitClifford {
            id,
            image_of_x,
            image_of_z,
            x_negated: id & 1 == 1,
            z_negated: id & 2 == 2,
        }
    }

    fn lookup(image_of_x: Pauli, image_of_z: Pauli, x_negated: bool, z_negated: bool) -> Self {
        let pair = IMAGE_PAIRS
            .iter()
            .position(|&p| p == (image_of_x, image_of_z))
            .expect("images of X and Z must be distinct non-identity Paulis");
        Self::from_id((pair * 4) as u8 | x_negated as u8 | (z_negated as u8) << 1)
    }

    /// `C P C^dagger = (-1)^sign * image`.
    pub fn conjugate(&self, p: Pauli) -> (Pauli, bool) {
        match p {
            Pauli::I => (Pauli::I, false),
            Pauli::X => (self.image_of_x, self.x_negated),
            Pauli::Z => (self.image_of_z, self.z_negated),
            Pauli::Y => {
                // Y = iXZ, so C Y C^dagger = i (sx Px)(sz Pz) = i^(1+k) sx sz R.
                let (r, k) = self.image_of_x.mul_with_phase(self.image_of_z);
                debug_assert!(k % 2 == 1);
                (r, self.x_negated ^ self.z_negated ^ (k == 1))
            }
        }
    }

    /// The element that applies `self` first and then `next`.
    pub fn then(&self, next: &SingleQubitClifford) -> SingleQubitClifford {
        let (px, sx) = self.conjugate(Pauli::X);
        let (pz, sz) = self.conjugate(Pauli::Z);
        let (qx, tx) = next.conjugate(px);
        let (qz, tz) = next.conjugate(pz);
        Self::lookup(qx, qz, sx ^ tx, sz ^ tz)
    }

    pub fn inverse(&self) -> SingleQubitClifford {
        enumerate_single_cliffords()
            .into_iter()
            .find(|c| self.then(c).id == 0)
            .expect("group elements are invertible")
    }
}

pub fn enumerate_single_cliffords() -> Vec<SingleQubitClifford> {
    (0..NUM_SINGLE_CLIFFORDS as u8).map(SingleQubitClifford::from_id).collect()
}

/// Per-id action table on Pauli codes, ignoring signs.
fn clifford_action() -> &'static [[Pauli; 4]; NUM_SINGLE_CLIFFORDS] {
    static TABLE: OnceLock<[[Pauli; 4]; NUM_SINGLE_CLIFFORDS]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [[Pauli::I; 4]; NUM_SINGLE_CLIFFORDS];
        for (id, row) in t.iter_mut().enumerate() {
            let c = SingleQubitClifford::from_id(id as u8);
            for p in Pauli::ALL {
                row[p as usize] = c.conjugate(p).0;
            }
        }
        t
    })
}

#[inline]
pub(crate) fn apply_single(id: u8, p: Pauli) -> Pauli {
    clifford_action()[id as usize][p as usize]
}

use Pauli::{I, X, Y, Z};

/// `iSWAP (a ⊗ b) iSWAP^dagger = (-1)^neg (a' ⊗ b')`, indexed by `[a][b]`
/// in `I, X, Y, Z` order, with `a` on the lower-index qubit.
/// Derived by conjugating with the unitary `[[1,0,0,0],[0,0,i,0],[0,i,0,0],[0,0,0,1]]`;
/// `iswap_table_matches_matrix_oracle` recomputes it from matrices.
const ISWAP_TABLE: [[(Pauli, Pauli, bool); 4]; 4] = [
    [(I, I, false), (Y, Z, false), (X, Z, true), (Z, I, false)],
    [(Z, Y, false), (X, X, false), (Y, X, false), (I, Y, false)],
    [(Z, X, true), (X, Y, false), (Y, Y, false), (I, X, true)],
    [(I, Z, false), (Y, I, false), (X, I, true), (Z, Z, false)],
];

pub fn conjugate_by_iswap(a: Pauli, b: Pauli) -> (Pauli, Pauli, bool) {
    ISWAP_TABLE[a as usize][b as usize]
}

fn iswap_inverse_table() -> &'static [[(Pauli, Pauli, bool); 4]; 4] {
    static TABLE: OnceLock<[[(Pauli, Pauli, bool); 4]; 4]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [[(I, I, false); 4]; 4];
        for a in Pauli::ALL {
            for b in Pauli::ALL {
                let (c, d, neg) = conjugate_by_iswap(a, b);
                t[c as usize][d as usize] = (a, b, neg);
            }
        }
        t
    })
}

/// Inverse of [`conjugate_by_iswap`]: conjugation by `iSWAP^dagger`.
pub fn conjugate_by_iswap_inverse(a: Pauli, b: Pauli) -> (Pauli, Pauli, bool) {
    iswap_inverse_table()[a as usize][b as usize]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Layer {
    /// iSWAPs on `(p, p+1), (p+2, p+3), ...` for parity `p`.
    TwoQubit { parity: u8 },
    /// One single-qubit Clifford id per qubit.
    SingleQubit(Vec<u8>),
}

/// Nearest-neighbour pairs of a brickwork layer with open boundaries.
pub fn brick_pairs(n: usize, parity: u8) -> impl Iterator<Item = (usize, usize)> {
    (parity as usize..n.saturating_sub(1))
        .step_by(2)
        .map(|i| (i, i + 1))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordCircuit {
    n: usize,
    layers: Vec<Layer>,
}

impl CliffordCircuit {
    pub fn empty(n: usize) -> Self {
        CliffordCircuit { n, layers: Vec::new() }
    }

    pub fn from_layers(n: usize, layers: Vec<Layer>) -> Result<Self> {
        let mut c = Self::empty(n);
        for l in layers {
            c.push(l)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, layer: Layer) -> Result<()> {
        match &layer {
            Layer::TwoQubit { parity } if *parity > 1 => {
                return Err(Error::InvalidParameter(format!("layer parity {parity}")))
            }
            Layer::SingleQubit(ids) => {
                if ids.len() != self.n {
                    return Err(Error::DimensionMismatch {
                        expected: self.n,
                        found: ids.len(),
                    });
                }
                if let Some(bad) = ids.iter().find(|&&g| g as usize >= NUM_SINGLE_CLIFFORDS) {
                    return Err(Error::InvalidParameter(format!("clifford id {bad}")));
                }
            }
            _ => {}
        }
        self.layers.push(layer);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// Number of two-qubit layers.
    pub fn depth(&self) -> usize {
        self.layers
            .iter()
            .filter(|l| matches!(l, Layer::TwoQubit { .. }))
            .count()
    }

    fn check_n(&self, p: &PauliString) -> Result<()> {
        if p.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: p.len(),
            });
        }
        Ok(())
    }

    /// `U p U^dagger` with the accumulated sign.
    pub fn conjugate_signed(&self, p: &PauliString) -> Result<(PauliString, bool)> {
        self.check_n(p)?;
        let mut out = p.clone();
        let mut neg = false;
        for layer in &self.layers {
            neg ^= apply_layer(&mut out, layer, false);
        }
        Ok((out, neg))
    }

    pub fn conjugate(&self, p: &PauliString) -> Result<PauliString> {
        self.conjugate_signed(p).map(|(s, _)| s)
    }

    /// `U^dagger p U`, sign included.
    pub fn conjugate_inverse_signed(&self, p: &PauliString) -> Result<(PauliString, bool)> {
        self.check_n(p)?;
        let mut out = p.clone();
        let mut neg = false;
        for layer in self.layers.iter().rev() {
            neg ^= apply_layer(&mut out, layer, true);
        }
        Ok((out, neg))
    }
}

pub(crate) fn apply_layer(p: &mut PauliString, layer: &Layer, inverse: bool) -> bool {
    let mut neg = false;
    match layer {
        Layer::TwoQubit { parity } => {
            for (a, b) in brick_pairs(p.len(), *parity) {
                let (pa, pb) = (p.get(a), p.get(b));
                if pa.is_identity() && pb.is_identity() {
                    continue;
                }
                let (qa, qb, s) = if inverse {
                    conjugate_by_iswap_inverse(pa, pb)
                } else {
                    conjugate_by_iswap(pa, pb)
                };
                p.set(a, qa);
                p.set(b, qb);
                neg ^= s;
            }
        }
        Layer::SingleQubit(ids) => {
            for (j, &id) in ids.iter().enumerate() {
                let pj = p.get(j);
                if pj.is_identity() {
                    continue;
                }
                let c = SingleQubitClifford::from_id(id);
                let c = if inverse { c.inverse() } else { c };
                let (q, s) = c.conjugate(pj);
                p.set(j, q);
                neg ^= s;
            }
        }
    }
    neg
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;
    use std::collections::HashSet;

    type M = Vec<Vec<C>>;

    fn pauli_matrix(p: Pauli) -> M {
        let o = C::new(0.0, 0.0);
        let l = C::new(1.0, 0.0);
        let i = C::new(0.0, 1.0);
        match p {
            Pauli::I => vec![vec![l, o], vec![o, l]],
            Pauli::X => vec![vec![o, l], vec![l, o]],
            Pauli::Y => vec![vec![o, -i], vec![i, o]],
            Pauli::Z => vec![vec![l, o], vec![o, -l]],
        }
    }

    fn mul(a: &M, b: &M) -> M {
        let n = a.len();
        (0..n)
            .map(|r| (0..n).map(|c| (0..n).map(|k| a[r][k] * b[k][c]).sum()).collect())
            .collect()
    }

    fn dagger(a: &M) -> M {
        let n = a.len();
        (0..n).map(|r| (0..n).map(|c| a[c][r].conj()).collect()).collect()
    }

    fn kron(a: &M, b: &M) -> M {
        let (n, m) = (a.len(), b.len());
        (0..n * m)
            .map(|r| (0..n * m).map(|c| a[r / m][c / m] * b[r % m][c % m]).collect())
            .collect()
    }

    /// Hilbert-Schmidt overlap normalized so a signed Pauli gives +-1.
    fn overlap(a: &M, b: &M) -> C {
        let n = a.len();
        let mut t = C::new(0.0, 0.0);
        for r in 0..n {
            for c in 0..n {
                t += a[r][c].conj() * b[r][c];
            }
        }
        t / n as f64
    }

    fn iswap_matrix() -> M {
        let o = C::new(0.0, 0.0);
        let l = C::new(1.0, 0.0);
        let i = C::new(0.0, 1.0);
        vec![
            vec![l, o, o, o],
            vec![o, o, i, o],
            vec![o, i, o, o],
            vec![o, o, o, l],
        ]
    }

    /// Oracle: identify `U (a⊗b) U^dagger` against all 16 signed Pauli pairs.
    fn oracle_iswap(a: Pauli, b: Pauli) -> (Pauli, Pauli, bool) {
        let u = iswap_matrix();
        let conj = mul(&mul(&u, &kron(&pauli_matrix(a), &pauli_matrix(b))), &dagger(&u));
        for c in Pauli::ALL {
            for d in Pauli::ALL {
                let t = overlap(&kron(&pauli_matrix(c), &pauli_matrix(d)), &conj);
                if (t.norm() - 1.0).abs() < 1e-9 {
                    assert!(t.im.abs() < 1e-9);
                    return (c, d, t.re < 0.0);
                }
            }
        }
        panic!("not a Pauli");
    }

    #[test]
    fn iswap_table_matches_matrix_oracle() {
        for a in Pauli::ALL {
            for b in Pauli::ALL {
                assert_eq!(conjugate_by_iswap(a, b), oracle_iswap(a, b), "{a}{b}");
            }
        }
    }

    #[test]
    fn iswap_examples() {
        assert_eq!(conjugate_by_iswap(I, I), (I, I, false));
        assert_eq!(conjugate_by_iswap(Z, I), (I, Z, false));
        assert_eq!(conjugate_by_iswap(X, I), oracle_iswap(X, I));
    }

    #[test]
    fn iswap_table_is_permutation() {
        let images: HashSet<_> = Pauli::ALL
            .iter()
            .flat_map(|&a| Pauli::ALL.iter().map(move |&b| conjugate_by_iswap(a, b)))
            .map(|(c, d, _)| (c, d))
            .collect();
        assert_eq!(images.len(), 16);
        for a in Pauli::ALL {
            for b in Pauli::ALL {
                let (c, d, s) = conjugate_by_iswap(a, b);
                let (e, f, t) = conjugate_by_iswap_inverse(c, d);
                assert_eq!((e, f), (a, b));
                assert_eq!(s, t);
            }
        }
    }

    /// Oracle: close {H, S} as 2x2 unitaries modulo phase, then read off the
    /// conjugation images of X and Z.
    fn matrix_clifford_group() -> Vec<(Pauli, bool, Pauli, bool)> {
        let h = {
            let s = C::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            vec![vec![s, s], vec![s, -s]]
        };
        let s = vec![
            vec![C::new(1.0, 0.0), C::new(0.0, 0.0)],
            vec![C::new(0.0, 0.0), C::new(0.0, 1.0)],
        ];
        let images = |u: &M| {
            let read = |p: Pauli| {
                let m = mul(&mul(u, &pauli_matrix(p)), &dagger(u));
                for q in Pauli::NON_IDENTITY {
                    let t = overlap(&pauli_matrix(q), &m);
                    if (t.norm() - 1.0).abs() < 1e-9 {
                        return (q, t.re < 0.0);
                    }
                }
                panic!("not Clifford");
            };
            let (px, sx) = read(Pauli::X);
            let (pz, sz) = read(Pauli::Z);
            (px, sx, pz, sz)
        };
        let id = pauli_matrix(Pauli::I);
        let mut seen = vec![images(&id)];
        let mut frontier = vec![id];
        while let Some(u) = frontier.pop() {
            for g in [&h, &s] {
                let v = mul(g, &u);
                let key = images(&v);
                if !seen.contains(&key) {
                    seen.push(key);
                    frontier.push(v);
                }
            }
        }
        seen
    }

    #[test]
    fn single_cliffords_match_matrix_group() {
        let oracle = matrix_clifford_group();
        assert_eq!(oracle.len(), 24);
        let ours: Vec<_> = enumerate_single_cliffords()
            .iter()
            .map(|c| (c.image_of_x, c.x_negated, c.image_of_z, c.z_negated))
            .collect();
        let a: HashSet<_> = oracle.iter().copied().collect();
        let b: HashSet<_> = ours.iter().copied().collect();
        assert_eq!(a, b);
        let oracle_y = oracle.iter().filter(|e| e.0 == Pauli::Y).count();
        assert_eq!(oracle_y, 8);
        assert_eq!(
            enumerate_single_cliffords()
                .iter()
                .filter(|c| c.image_of_x == Pauli::Y)
                .count(),
            8
        );
    }

    #[test]
    fn single_clifford_basics() {
        let all = enumerate_single_cliffords();
        let id = all[0];
        assert_eq!((id.image_of_x, id.image_of_z), (X, Z));
        let h = all[4];
        assert_eq!((h.image_of_x, h.image_of_z), (Z, X));
        for c in &all {
            assert_ne!(c.image_of_x, c.image_of_z);
            assert!(c.image_of_x.anticommutes(c.image_of_z));
            assert_eq!(c.then(&c.inverse()).id, 0);
        }
        let ids: HashSet<u8> = all.iter().map(|c| c.id).collect();
        assert_eq!(ids.len(), 24);
        for a in &all {
            for b in &all {
                let ab = a.then(b);
                for p in Pauli::ALL {
                    let (q, s) = a.conjugate(p);
                    let (r, t) = b.conjugate(q);
                    assert_eq!(ab.conjugate(p), (r, s ^ t));
                }
            }
        }
    }

    #[test]
    fn y_image_matches_matrix_conjugation() {
        // Check the Y rule against explicit matrices for every element.
        let oracle = matrix_clifford_group();
        assert_eq!(oracle.len(), 24);
        for c in enumerate_single_cliffords() {
            let (py, sy) = c.conjugate(Y);
            // Y = i X Z: image = i (sx Px)(sz Pz).
            let px = pauli_matrix(c.image_of_x);
            let pz = pauli_matrix(c.image_of_z);
            let sign = |neg: bool| if neg { -1.0 } else { 1.0 };
            let m: M = mul(&px, &pz)
                .into_iter()
                .map(|row| {
                    row.into_iter()
                        .map(|v| v * C::new(0.0, 1.0) * sign(c.x_negated) * sign(c.z_negated))
                        .collect()
                })
                .collect();
            let t = overlap(&pauli_matrix(py), &m);
            assert!((t.re - sign(sy)).abs() < 1e-9, "id {}", c.id);
        }
    }

    #[test]
    fn brick_pairs_open_boundary() {
        assert_eq!(brick_pairs(4, 0).collect::<Vec<_>>(), vec![(0, 1), (2, 3)]);
        assert_eq!(brick_pairs(5, 1).collect::<Vec<_>>(), vec![(1, 2), (3, 4)]);
        assert_eq!(brick_pairs(5, 0).collect::<Vec<_>>(), vec![(0, 1), (2, 3)]);
        assert_eq!(brick_pairs(1, 0).count(), 0);
    }

    #[test]
    fn circuit_conjugation_examples() {
        let p: PauliString = "ZI".parse().unwrap();
        assert_eq!(CliffordCircuit::empty(2).conjugate(&p).unwrap(), p);
        let c = CliffordCircuit::from_layers(2, vec![Layer::TwoQubit { parity: 0 }]).unwrap();
        assert_eq!(c.conjugate(&p).unwrap().to_string(), "IZ");
        assert!(c.conjugate(&"ZII".parse().unwrap()).is_err());
        assert!(CliffordCircuit::from_layers(2, vec![Layer::SingleQubit(vec![0])]).is_err());
        assert!(CliffordCircuit::from_layers(2, vec![Layer::SingleQubit(vec![0, 24])]).is_err());
    }
}
