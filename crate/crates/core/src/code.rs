//! Stabilizer codes built from a trivial product code by a brickwork
//! Clifford encoding circuit.
//!
//! The pipeline is [`build_initial_code`] → [`pad_boundary`] → one of
//! [`sample_circuit_standard`] / [`sample_circuit_greedy`] → [`encode`];
//! [`generate_code`] runs it end to end from [`CodeParams`].

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rand::Rng as _;

use crate::clifford::{
    apply_layer, apply_single, brick_pairs, conjugate_by_iswap, CliffordCircuit, Layer,
    NUM_SINGLE_CLIFFORDS,
};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};
use crate::rng::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Variant {
    #[default]
    Standard,
    Greedy,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Standard => "standard",
            Variant::Greedy => "greedy",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Variant::Standard),
            "greedy" => Ok(Variant::Greedy),
            other => Err(Error::InvalidParameter(format!("unknown variant {other:?}"))),
        }
    }
}

/// Bookkeeping carried alongside a code; not used by decoding.
#[derive(Clone, Debug, PartialEq)]
pub struct CodeMeta {
    pub depth: usize,
    pub rate: f64,
    pub variant: Variant,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilizerCode {
    pub n_phys: usize,
    pub k: usize,
    pub checks: Vec<PauliString>,
    pub logical_x: Vec<PauliString>,
    pub logical_z: Vec<PauliString>,
    /// Pre-encoding single-site home of each logical qubit.
    pub logical_positions: Vec<usize>,
    pub meta: CodeMeta,
}

impl StabilizerCode {
    pub fn num_checks(&self) -> usize {
        self.checks.len()
    }

    /// Checks followed by `logical_x` then `logical_z`.
    pub fn all_generators(&self) -> impl Iterator<Item = &PauliString> {
        self.checks
            .iter()
            .chain(&self.logical_x)
            .chain(&self.logical_z)
    }

    /// Encoded logical operator for class bits `(x, z)` of qubit `j`.
    pub fn logical_operator(&self, j: usize, x: bool, z: bool) -> PauliString {
        let mut op = PauliString::identity(self.n_phys);
        if x {
            op.mul_assign_unchecked(&self.logical_x[j]);
        }
        if z {
            op.mul_assign_unchecked(&self.logical_z[j]);
        }
        op
    }

    /// Checks every structural invariant: dimensions, commutation relations
    /// and GF(2) independence of the checks.
    pub fn validate(&self) -> Result<()> {
        let expect_len = |what: &str, got: usize, want: usize| {
            if got != want {
                Err(Error::InvalidParameter(format!("{what}: expected {want}, found {got}")))
            } else {
                Ok(())
            }
        };
        if self.k == 0 || self.k >= self.n_phys {
            return Err(Error::InvalidParameter(format!(
                "k = {} with n_phys = {}",
                self.k, self.n_phys
            )));
        }
        expect_len("checks", self.checks.len(), self.n_phys - self.k)?;
        expect_len("logical_x", self.logical_x.len(), self.k)?;
        expect_len("logical_z", self.logical_z.len(), self.k)?;
        expect_len("logical_positions", self.logical_positions.len(), self.k)?;
        for g in self.all_generators() {
            expect_len("operator length", g.len(), self.n_phys)?;
        }
        for (i, a) in self.checks.iter().enumerate() {
            for b in &self.checks[i + 1..] {
                if !a.commutes_unchecked(b) {
                    return Err(Error::InvalidParameter(format!("checks {a} and {b} anticommute")));
                }
            }
            for l in self.logical_x.iter().chain(&self.logical_z) {
                if !a.commutes_unchecked(l) {
                    return Err(Error::InvalidParameter(format!(
                        "check {a} anticommutes with logical {l}"
                    )));
                }
            }
        }
        for i in 0..self.k {
            for j in 0..self.k {
                let xz = self.logical_x[i].commutes_unchecked(&self.logical_z[j]);
                if xz != (i != j) {
                    return Err(Error::InvalidParameter(format!(
                        "logical X{i} / Z{j} commutation is wrong"
                    )));
                }
                if i < j
                    && (!self.logical_x[i].commutes_unchecked(&self.logical_x[j])
                        || !self.logical_z[i].commutes_unchecked(&self.logical_z[j]))
                {
                    return Err(Error::InvalidParameter(format!(
                        "logicals {i} and {j} anticommute"
                    )));
                }
            }
        }
        if crate::gf2::rank(&self.checks) != self.checks.len() {
            return Err(Error::InvalidParameter("checks are linearly dependent".into()));
        }
        Ok(())
    }
}

/// Parameters of a padded, encoded code. The rate is stored as its integer
/// inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodeParams {
    pub n: usize,
    pub rate_inverse: usize,
    pub depth: usize,
    pub variant: Variant,
    pub seed: u64,
}

impl CodeParams {
    pub fn new(n: usize, rate_inverse: usize, depth: usize, variant: Variant, seed: u64) -> Result<Self> {
        let p = CodeParams {
            n,
            rate_inverse,
            depth,
            variant,
            seed,
        };
        p.validate()?;
        Ok(p)
    }

    /// Accepts a fractional rate only when `1/r` is an integer.
    pub fn rate_inverse_from(r: f64) -> Result<usize> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidParameter(format!("rate {r} must lie in (0, 1)")));
        }
        let inv = 1.0 / r;
        let rounded = inv.round();
        if (inv - rounded).abs() > 1e-9 * inv {
            return Err(Error::InvalidParameter(format!("1/r = {inv} is not an integer")));
        }
        Ok(rounded as usize)
    }

    pub fn validate(&self) -> Result<()> {
        if self.rate_inverse < 2 {
            return Err(Error::InvalidParameter(format!("1/r = {} must be at least 2", self.rate_inverse)));
        }
        if self.n == 0 || !self.n.is_multiple_of(self.rate_inverse) {
            return Err(Error::InvalidParameter(format!(
                "n = {} is not a positive multiple of 1/r = {}",
                self.n, self.rate_inverse
            )));
        }
        if self.depth == 0 {
            return Err(Error::InvalidParameter("depth must be at least 1".into()));
        }
        let (left, right) = padding_split(self.rate_inverse, self.depth);
        if self.n as isize + left + right <= self.k() as isize {
            return Err(Error::InvalidParameter("padding leaves no stabilizer qubits".into()));
        }
        Ok(())
    }

    pub fn rate(&self) -> f64 {
        1.0 / self.rate_inverse as f64
    }

    pub fn k(&self) -> usize {
        self.n / self.rate_inverse
    }

    /// `n + 4d - 1/r + 1`.
    pub fn n_phys(&self) -> usize {
        (self.n as isize + 4 * self.depth as isize - self.rate_inverse as isize + 1) as usize
    }

    /// Logical positions of the padded code, before encoding.
    pub fn logical_positions(&self) -> Vec<usize> {
        let (left, _) = padding_split(self.rate_inverse, self.depth);
        initial_positions(self.n, self.k())
            .into_iter()
            .map(|p| (p as isize + left) as usize)
            .collect()
    }
}

fn initial_positions(n: usize, k: usize) -> Vec<usize> {
    // floor((j + 1/2) n / k)
    (0..k).map(|j| (2 * j + 1) * n / (2 * k)).collect()
}

/// Sites added at the (left, right) ends; negative values trim. The left
/// share puts the first logical exactly `2d` sites from the left end, which
/// leaves the last one `2d` from the right end as well.
fn padding_split(rate_inverse: usize, depth: usize) -> (isize, isize) {
    let total = 4 * depth as isize - rate_inverse as isize + 1;
    let left = 2 * depth as isize - (rate_inverse / 2) as isize;
    (left, total - left)
}

fn random_check_pauli(rng: &mut Rng) -> Pauli {
    Pauli::NON_IDENTITY[rng.gen_range(0..3)]
}

/// Trivial code: `k` evenly spaced logical sites carrying `X`/`Z` logicals,
/// a uniformly random single-site check on every other site.
pub fn build_initial_code(n: usize, k: usize, rng: &mut Rng) -> Result<StabilizerCode> {
    if k == 0 || k >= n {
        return Err(Error::InvalidParameter(format!("need 1 <= k < n, got k = {k}, n = {n}")));
    }
    let positions = initial_positions(n, k);
    let mut is_logical = vec![false; n];
    for &p in &positions {
        is_logical[p] = true;
    }
    let checks = (0..n)
        .filter(|&i| !is_logical[i])
        .map(|i| PauliString::single(n, i, random_check_pauli(rng)))
        .collect();
    Ok(StabilizerCode {
        n_phys: n,
        k,
        checks,
        logical_x: positions.iter().map(|&p| PauliString::single(n, p, Pauli::X)).collect(),
        logical_z: positions.iter().map(|&p| PauliString::single(n, p, Pauli::Z)).collect(),
        logical_positions: positions,
        meta: CodeMeta {
            depth: 0,
            rate: k as f64 / n as f64,
            variant: Variant::Standard,
            seed: 0,
        },
    })
}

fn single_site(p: &PauliString) -> Option<usize> {
    match p.support_interval() {
        Some((a, b)) if a == b => Some(a),
        _ => None,
    }
}

/// Adds `4d - 1/r + 1` single-site random checks at the chain ends (trimming
/// stabilizer sites when that count is negative). Requires an unencoded code.
pub fn pad_boundary(
    code: &StabilizerCode,
    depth: usize,
    rate_inverse: usize,
    rng: &mut Rng,
) -> Result<StabilizerCode> {
    if rate_inverse == 0 {
        return Err(Error::InvalidParameter("1/r must be positive".into()));
    }
    let total = 4 * depth as isize - rate_inverse as isize + 1;
    let new_n = code.n_phys as isize + total;
    if new_n <= code.k as isize {
        return Err(Error::InvalidParameter(format!(
            "padded size {new_n} leaves no stabilizer qubits"
        )));
    }
    let first = *code
        .logical_positions
        .iter()
        .min()
        .ok_or_else(|| Error::InvalidParameter("code has no logical qubits".into()))?;
    let left = 2 * depth as isize - first as isize;
    let right = total - left;
    let last = *code.logical_positions.iter().max().unwrap();
    if right < 0 && (last as isize) >= code.n_phys as isize + right {
        return Err(Error::InvalidParameter("trimming would remove a logical qubit".into()));
    }
    let new_n = new_n as usize;

    let mut check_at: Vec<Option<Pauli>> = vec![None; new_n];
    for g in &code.checks {
        let site = single_site(g)
            .ok_or_else(|| Error::InvalidParameter("pad_boundary needs an unencoded code".into()))?;
        let target = site as isize + left;
        if target >= 0 && (target as usize) < new_n {
            check_at[target as usize] = Some(g.get(site));
        }
    }
    let positions: Vec<usize> = code
        .logical_positions
        .iter()
        .map(|&p| (p as isize + left) as usize)
        .collect();
    let mut is_logical = vec![false; new_n];
    for &p in &positions {
        is_logical[p] = true;
    }
    let original = (left.max(0) as usize)..((code.n_phys as isize + left).min(new_n as isize) as usize);
    let mut checks = Vec::with_capacity(new_n - code.k);
    for site in 0..new_n {
        if is_logical[site] {
            continue;
        }
        let pauli = match check_at[site] {
            Some(p) => p,
            None if original.contains(&site) => {
                return Err(Error::InvalidParameter("logical positions do not cover every unchecked site".into()))
            }
            None => random_check_pauli(rng),
        };
        checks.push(PauliString::single(new_n, site, pauli));
    }
    Ok(StabilizerCode {
        n_phys: new_n,
        k: code.k,
        checks,
        logical_x: code.logical_x.iter().map(|l| l.resized(left, right)).collect(),
        logical_z: code.logical_z.iter().map(|l| l.resized(left, right)).collect(),
        logical_positions: positions,
        meta: CodeMeta {
            rate: 1.0 / rate_inverse as f64,
            ..code.meta.clone()
        },
    })
}

fn random_single_layer(n: usize, rng: &mut Rng) -> Layer {
    Layer::SingleQubit(
        (0..n)
            .map(|_| rng.gen_range(0..NUM_SINGLE_CLIFFORDS as u8))
            .collect(),
    )
}

/// `d` iSWAP layers of alternating parity starting at 0, each followed by a
/// layer of uniformly random single-qubit Cliffords.
pub fn sample_circuit_standard(n_phys: usize, depth: usize, rng: &mut Rng) -> CliffordCircuit {
    let mut layers = Vec::with_capacity(2 * depth);
    for l in 0..depth {
        layers.push(Layer::TwoQubit { parity: (l % 2) as u8 });
        layers.push(random_single_layer(n_phys, rng));
    }
    CliffordCircuit::from_layers(n_phys, layers).expect("well-formed layers")
}

/// `WEIGHT[c1][c2][a][b]`: weight of `iSWAP (C1 a C1^† ⊗ C2 b C2^†) iSWAP^†`.
fn pair_weight_table() -> &'static Vec<[[[u8; 4]; 4]; NUM_SINGLE_CLIFFORDS]> {
    static TABLE: OnceLock<Vec<[[[u8; 4]; 4]; NUM_SINGLE_CLIFFORDS]>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (0..NUM_SINGLE_CLIFFORDS as u8)
            .map(|c1| {
                let mut row = [[[0u8; 4]; 4]; NUM_SINGLE_CLIFFORDS];
                for (c2, entry) in row.iter_mut().enumerate() {
                    for a in Pauli::ALL {
                        for b in Pauli::ALL {
                            let (x, y, _) =
                                conjugate_by_iswap(apply_single(c1, a), apply_single(c2 as u8, b));
                            entry[a as usize][b as usize] =
                                !x.is_identity() as u8 + !y.is_identity() as u8;
                        }
                    }
                }
                row
            })
            .collect()
    })
}

/// Single-qubit layer preceding an iSWAP layer of the given parity, chosen
/// pair by pair to maximize the summed post-iSWAP weight of `ops`. Ties and
/// idle qubits are resolved uniformly at random.
fn greedy_single_layer(ops: &[PauliString], n: usize, parity: u8, rng: &mut Rng) -> Vec<u8> {
    let weights = pair_weight_table();
    let mut ids: Vec<u8> = (0..n)
        .map(|_| rng.gen_range(0..NUM_SINGLE_CLIFFORDS as u8))
        .collect();
    let mut best = Vec::with_capacity(NUM_SINGLE_CLIFFORDS * NUM_SINGLE_CLIFFORDS);
    for (a, b) in brick_pairs(n, parity) {
        let mut counts = [[0u32; 4]; 4];
        for op in ops {
            counts[op.get(a) as usize][op.get(b) as usize] += 1;
        }
        counts[0][0] = 0;
        let mut best_score = 0u32;
        best.clear();
        for c1 in 0..NUM_SINGLE_CLIFFORDS {
            for c2 in 0..NUM_SINGLE_CLIFFORDS {
                let w = &weights[c1][c2];
                let mut score = 0u32;
                for pa in 0..4 {
                    for pb in 0..4 {
                        score += counts[pa][pb] * w[pa][pb] as u32;
                    }
                }
                if score > best_score || best.is_empty() {
                    best_score = score;
                    best.clear();
                }
                if score == best_score {
                    best.push((c1 as u8, c2 as u8));
                }
            }
        }
        let (c1, c2) = best[rng.gen_range(0..best.len())];
        ids[a] = c1;
        ids[b] = c2;
    }
    ids
}

/// Greedy variant: resamples the initial checks from `{X, Y}` and picks each
/// single-qubit layer that precedes an iSWAP layer to maximize the total
/// weight of checks and logical generators after that layer. The final
/// single-qubit layer, which precedes no iSWAP, stays uniformly random.
///
/// Returns the code with resampled checks together with the circuit.
pub fn sample_circuit_greedy(
    code: &StabilizerCode,
    depth: usize,
    rng: &mut Rng,
) -> Result<(StabilizerCode, CliffordCircuit)> {
    let mut code = code.clone();
    for g in code.checks.iter_mut() {
        let site = single_site(g)
            .ok_or_else(|| Error::InvalidParameter("greedy sampling needs an unencoded code".into()))?;
        g.set(site, if rng.gen_bool(0.5) { Pauli::X } else { Pauli::Y });
    }
    let n = code.n_phys;
    let mut ops: Vec<PauliString> = code.all_generators().cloned().collect();
    let mut layers = Vec::with_capacity(2 * depth);
    for l in 0..depth {
        let parity = (l % 2) as u8;
        if l > 0 {
            let single = Layer::SingleQubit(greedy_single_layer(&ops, n, parity, rng));
            for op in ops.iter_mut() {
                apply_layer(op, &single, false);
            }
            layers.push(single);
        }
        let two = Layer::TwoQubit { parity };
        for op in ops.iter_mut() {
            apply_layer(op, &two, false);
        }
        layers.push(two);
    }
    if depth > 0 {
        layers.push(random_single_layer(n, rng));
    }
    Ok((code, CliffordCircuit::from_layers(n, layers)?))
}

/// Conjugates every check and logical generator by `circuit`.
pub fn encode(code: &StabilizerCode, circuit: &CliffordCircuit) -> Result<StabilizerCode> {
    if circuit.n() != code.n_phys {
        return Err(Error::DimensionMismatch {
            expected: code.n_phys,
            found: circuit.n(),
        });
    }
    let conj = |ops: &[PauliString]| -> Result<Vec<PauliString>> {
        ops.iter().map(|g| circuit.conjugate(g)).collect()
    };
    Ok(StabilizerCode {
        n_phys: code.n_phys,
        k: code.k,
        checks: conj(&code.checks)?,
        logical_x: conj(&code.logical_x)?,
        logical_z: conj(&code.logical_z)?,
        logical_positions: code.logical_positions.clone(),
        meta: CodeMeta {
            depth: code.meta.depth + circuit.depth(),
            ..code.meta.clone()
        },
    })
}

/// Full pipeline for `params`, drawing everything from `rng`.
pub fn generate_code(params: &CodeParams, rng: &mut Rng) -> Result<StabilizerCode> {
    params.validate()?;
    let initial = build_initial_code(params.n, params.k(), rng)?;
    let padded = pad_boundary(&initial, params.depth, params.rate_inverse, rng)?;
    let (base, circuit) = match params.variant {
        Variant::Standard => {
            let c = sample_circuit_standard(padded.n_phys, params.depth, rng);
            (padded, c)
        }
        Variant::Greedy => sample_circuit_greedy(&padded, params.depth, rng)?,
    };
    let mut code = encode(&base, &circuit)?;
    code.meta = CodeMeta {
        depth: params.depth,
        rate: params.rate(),
        variant: params.variant,
        seed: params.seed,
    };
    Ok(code)
}

impl fmt::Display for StabilizerCode {
    /// Text format: header `n_phys k d r variant seed`, a `P:` line of
    /// logical positions, then `C:`, `LX:` and `LZ:` operator lines.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} {} {} {} {} {}",
            self.n_phys, self.k, self.meta.depth, self.meta.rate, self.meta.variant, self.meta.seed
        )?;
        let positions: Vec<String> = self.logical_positions.iter().map(|p| p.to_string()).collect();
        writeln!(f, "P:{}", positions.join(" "))?;
        for g in &self.checks {
            writeln!(f, "C:{g}")?;
        }
        for l in &self.logical_x {
            writeln!(f, "LX:{l}")?;
        }
        for l in &self.logical_z {
            writeln!(f, "LZ:{l}")?;
        }
        Ok(())
    }
}

impl FromStr for StabilizerCode {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let perr = |line: usize, message: String| Error::Parse { line, message };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (_, header) = lines.next().ok_or_else(|| perr(1, "empty input".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 6 {
            return Err(perr(1, format!("expected 6 header fields, found {}", fields.len())));
        }
        let num = |s: &str, what: &str| -> Result<u64> {
            s.parse().map_err(|_| perr(1, format!("bad {what} {s:?}")))
        };
        let n_phys = num(fields[0], "n_phys")? as usize;
        let k = num(fields[1], "k")? as usize;
        let depth = num(fields[2], "depth")? as usize;
        let rate: f64 = fields[3].parse().map_err(|_| perr(1, format!("bad rate {:?}", fields[3])))?;
        let variant: Variant = fields[4].parse().map_err(|e: Error| perr(1, e.to_string()))?;
        let seed = num(fields[5], "seed")?;

        let mut code = StabilizerCode {
            n_phys,
            k,
            checks: Vec::new(),
            logical_x: Vec::new(),
            logical_z: Vec::new(),
            logical_positions: Vec::new(),
            meta: CodeMeta {
                depth,
                rate,
                variant,
                seed,
            },
        };
        let mut saw_positions = false;
        for (no, line) in lines {
            if line.is_empty() {
                continue;
            }
            let (tag, body) = line
                .split_once(':')
                .ok_or_else(|| perr(no, "missing line tag".into()))?;
            if tag == "P" {
                code.logical_positions = body
                    .split_whitespace()
                    .map(|s| s.parse().map_err(|_| perr(no, format!("bad position {s:?}"))))
                    .collect::<Result<_>>()?;
                saw_positions = true;
                continue;
            }
            let op: PauliString = body.parse().map_err(|e: Error| perr(no, e.to_string()))?;
            if op.len() != n_phys {
                return Err(perr(no, format!("operator has {} sites, expected {n_phys}", op.len())));
            }
            match tag {
                "C" => code.checks.push(op),
                "LX" => code.logical_x.push(op),
                "LZ" => code.logical_z.push(op),
                other => return Err(perr(no, format!("unknown tag {other:?}"))),
            }
        }
        if !saw_positions {
            return Err(perr(2, "missing P: line".into()));
        }
        code.validate()?;
        Ok(code)
    }
}
