//! Marginal maximum-likelihood decoding.
//!
//! For logical qubit `j` the four coset probabilities are
//! `p(f L_c G_j)` with `G_j` generated by the checks and every logical
//! operator except those of `j`. All `4k` of them come from one layout over
//! checks and logicals: fixing the sigma wires of `lx_j` and `lz_j` to
//! `(c_x, c_z)` and summing over everything else gives exactly the class-`c`
//! term. One forward and one backward sweep are shared by all qubits; each
//! qubit then only absorbs a single row between the two stored boundaries.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::code::StabilizerCode;
use crate::error::{Error, Result};
use crate::gf2::PureErrorSolver;
use crate::noise::{NoiseModel, Syndrome};
use crate::pauli::PauliString;
use crate::tn::chain::contract_tanner_chain;
use crate::tn::grid::{contract, BoundaryState, ContractOptions, Direction, Sweeper};
use crate::tn::layout::TnLayout;

/// Logical class of one encoded qubit, in tie-break order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LogicalClass {
    I,
    X,
    Z,
    Y,
}

impl LogicalClass {
    pub const ALL: [LogicalClass; 4] = [LogicalClass::I, LogicalClass::X, LogicalClass::Z, LogicalClass::Y];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> LogicalClass {
        Self::ALL[i & 3]
    }

    /// Whether the class contains `lx` and `lz` respectively.
    pub fn bits(self) -> (bool, bool) {
        match self {
            LogicalClass::I => (false, false),
            LogicalClass::X => (true, false),
            LogicalClass::Z => (false, true),
            LogicalClass::Y => (true, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> LogicalClass {
        match (x, z) {
            (false, false) => LogicalClass::I,
            (true, false) => LogicalClass::X,
            (false, true) => LogicalClass::Z,
            (true, true) => LogicalClass::Y,
        }
    }

    pub fn symbol(self) -> char {
        ['I', 'X', 'Z', 'Y'][self.index()]
    }
}

impl fmt::Display for LogicalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Log-domain gap below which two classes count as tied. Symmetric noise
/// makes some cosets exactly equal, and different contraction orders round
/// them differently.
pub const TIE_TOLERANCE: f64 = 1e-10;

/// First class, in I < X < Z < Y order, within [`TIE_TOLERANCE`] of the
/// maximum. NaN never wins.
pub(crate) fn argmax_class(values: &[f64; 4]) -> LogicalClass {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return LogicalClass::I;
    }
    let tol = TIE_TOLERANCE * max.abs().max(1.0);
    let best = values.iter().position(|&v| v >= max - tol).unwrap_or(0);
    LogicalClass::from_index(best)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Backend {
    /// Row-sweep grid contraction with shared boundaries.
    #[default]
    Grid,
    /// Tanner chain, one contraction per class.
    Chain,
    /// Brute-force enumeration.
    Brute,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Grid => "grid",
            Backend::Chain => "chain",
            Backend::Brute => "brute",
        })
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grid" => Ok(Backend::Grid),
            "chain" => Ok(Backend::Chain),
            "brute" => Ok(Backend::Brute),
            other => Err(Error::InvalidParameter(format!("unknown backend {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeResult {
    pub pure_error: PauliString,
    pub classes: Vec<LogicalClass>,
    /// Natural-log coset probabilities per qubit, indexed by
    /// [`LogicalClass::index`].
    pub log_probs: Vec<[f64; 4]>,
    pub correction: PauliString,
}

/// `ln p(f_L G)` for the group generated by the code's checks and `extra`.
pub fn coset_probability(
    code: &StabilizerCode,
    f_l: &PauliString,
    noise: &NoiseModel,
    extra: &[PauliString],
) -> Result<f64> {
    coset_probability_with(code, f_l, noise, extra, &ContractOptions::default())
}

pub fn coset_probability_with(
    code: &StabilizerCode,
    f_l: &PauliString,
    noise: &NoiseModel,
    extra: &[PauliString],
    options: &ContractOptions,
) -> Result<f64> {
    let gens: Vec<PauliString> = code.checks.iter().chain(extra).cloned().collect();
    let layout = TnLayout::build(gens, code.n_phys)?;
    Ok(contract(&layout, f_l, noise, options)?.ln_value)
}

/// Logical operators of every qubit other than `j`.
fn other_logicals(code: &StabilizerCode, j: usize) -> Vec<PauliString> {
    (0..code.k)
        .filter(|&i| i != j)
        .flat_map(|i| [code.logical_x[i].clone(), code.logical_z[i].clone()])
        .collect()
}

/// Decoder for one code. Holds the layout over checks and logicals and the
/// pure-error basis; cheap to reuse across syndromes.
pub struct Decoder<'a> {
    code: &'a StabilizerCode,
    layout: TnLayout,
    solver: PureErrorSolver,
    centers: Vec<usize>,
    options: ContractOptions,
    backend: Backend,
}

impl<'a> Decoder<'a> {
    pub fn new(code: &'a StabilizerCode) -> Result<Self> {
        Self::with_options(code, ContractOptions::default(), Backend::Grid)
    }

    pub fn with_options(code: &'a StabilizerCode, options: ContractOptions, backend: Backend) -> Result<Self> {
        let gens: Vec<PauliString> = code.all_generators().cloned().collect();
        let layout = TnLayout::build(gens, code.n_phys)?;
        let solver = PureErrorSolver::new(&code.checks)?;
        let m = code.num_checks();
        let mut centers = Vec::with_capacity(code.k);
        for j in 0..code.k {
            let (a, b) = (layout.span(m + j), layout.span(m + code.k + j));
            let (lo, hi) = (a.0.max(b.0), a.1.min(b.1));
            if lo > hi {
                return Err(Error::Degenerate(format!("logical pair {j} has disjoint supports")));
            }
            let q = (lo..=hi).min_by_key(|&q| (layout.active_at(q), q)).expect("non-empty range");
            centers.push(q);
        }
        Ok(Decoder {
            code,
            layout,
            solver,
            centers,
            options,
            backend,
        })
    }

    pub fn code(&self) -> &StabilizerCode {
        self.code
    }

    pub fn layout(&self) -> &TnLayout {
        &self.layout
    }

    /// Widest set of simultaneously open wires in the shared layout.
    pub fn boundary_width(&self) -> usize {
        (0..self.layout.n_rows())
            .map(|q| self.layout.active_at(q))
            .max()
            .unwrap_or(0)
    }

    pub fn pure_error(&self, s: &Syndrome) -> Result<PauliString> {
        self.solver.solve(s.bits())
    }

    pub fn decode(&self, s: &Syndrome, noise: &NoiseModel) -> Result<DecodeResult> {
        let f = self.pure_error(s)?;
        let log_probs = match self.backend {
            Backend::Grid => self.marginals_cached(&f, noise)?,
            Backend::Chain => self.marginals_uncached(&f, noise, Backend::Chain)?,
            Backend::Brute => crate::oracle::brute_marginals(self.code, &f, noise)?
                .into_iter()
                .map(|row| row.map(f64::ln))
                .collect(),
        };
        Ok(self.finish(f, log_probs))
    }

    /// Same marginals as [`Decoder::decode`] computed with one independent
    /// contraction per class.
    pub fn decode_uncached(&self, s: &Syndrome, noise: &NoiseModel) -> Result<DecodeResult> {
        let f = self.pure_error(s)?;
        let log_probs = self.marginals_uncached(&f, noise, Backend::Grid)?;
        Ok(self.finish(f, log_probs))
    }

    fn finish(&self, f: PauliString, log_probs: Vec<[f64; 4]>) -> DecodeResult {
        let classes: Vec<LogicalClass> = log_probs.iter().map(argmax_class).collect();
        let mut correction = f.clone();
        for (j, c) in classes.iter().enumerate() {
            let (x, z) = c.bits();
            correction.mul_assign_unchecked(&self.code.logical_operator(j, x, z));
        }
        DecodeResult {
            pure_error: f,
            classes,
            log_probs,
            correction,
        }
    }

    fn marginals_uncached(&self, f: &PauliString, noise: &NoiseModel, backend: Backend) -> Result<Vec<[f64; 4]>> {
        let mut out = Vec::with_capacity(self.code.k);
        for j in 0..self.code.k {
            let extra = other_logicals(self.code, j);
            let mut row = [0.0; 4];
            for c in LogicalClass::ALL {
                let (x, z) = c.bits();
                let f_l = f.product(&self.code.logical_operator(j, x, z))?;
                row[c.index()] = match backend {
                    Backend::Chain => contract_tanner_chain(self.code, &f_l, noise, &extra, &self.options)?.ln_value,
                    _ => coset_probability_with(self.code, &f_l, noise, &extra, &self.options)?,
                };
            }
            out.push(row);
        }
        Ok(out)
    }

    fn marginals_cached(&self, f: &PauliString, noise: &NoiseModel) -> Result<Vec<[f64; 4]>> {
        let sweeper = Sweeper::new(&self.layout, f, noise, &self.options)?;
        let n = self.layout.n_rows();
        let mut wanted = vec![false; n];
        for &q in &self.centers {
            wanted[q] = true;
        }

        // forward[q]: rows < q absorbed; backward[q]: rows > q absorbed.
        let mut forward: HashMap<usize, BoundaryState> = HashMap::new();
        let mut state = BoundaryState::new();
        for q in 0..n {
            if wanted[q] {
                forward.insert(q, state.clone());
            }
            sweeper.absorb(&mut state, q, Direction::Down)?;
        }
        let mut backward: HashMap<usize, BoundaryState> = HashMap::new();
        let mut state = BoundaryState::new();
        for q in (0..n).rev() {
            if wanted[q] {
                backward.insert(q, state.clone());
            }
            sweeper.absorb(&mut state, q, Direction::Up)?;
        }

        let m = self.code.num_checks();
        let k = self.code.k;
        let mut out = Vec::with_capacity(k);
        for (j, &q) in self.centers.iter().enumerate() {
            let (gx, gz) = (m + j, m + k + j);
            let mut mid = forward[&q].clone();
            sweeper.open_and_weigh(&mut mid, q, Direction::Down)?;
            for &g in self.layout.closing(q) {
                if g != gx && g != gz {
                    mid.sum_out(g);
                }
            }
            out.push(join(&mid, &backward[&q], gx, gz));
        }
        Ok(out)
    }
}

/// Contracts a middle state with the opposite boundary, keeping the sigma
/// bits of `gx` and `gz` open. Returns `ln` of the four class sums.
fn join(mid: &BoundaryState, back: &BoundaryState, gx: usize, gz: usize) -> [f64; 4] {
    // target(idx) = back_index << 2 | class_bits, built byte by byte
    let target_bit = |g: usize| -> usize {
        let class_bit = if g == gx {
            1
        } else if g == gz {
            2
        } else {
            0
        };
        let back_bit = match back.slots.iter().position(|&s| s == g) {
            Some(b) => 4 << b,
            None => {
                assert!(class_bit != 0, "wire missing from boundary");
                0
            }
        };
        class_bit | back_bit
    };
    let bit_targets: Vec<usize> = mid.slots.iter().map(|&g| target_bit(g)).collect();
    let tables: Vec<Vec<usize>> = bit_targets
        .chunks(8)
        .map(|chunk| {
            (0..1usize << chunk.len())
                .map(|byte| {
                    chunk
                        .iter()
                        .enumerate()
                        .filter(|&(b, _)| byte >> b & 1 == 1)
                        .fold(0, |acc, (_, &t)| acc | t)
                })
                .collect()
        })
        .collect();

    let mut sums = [0.0f64; 4];
    for (idx, &a) in mid.amps.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        let mut t = 0;
        for (c, table) in tables.iter().enumerate() {
            t |= table[(idx >> (8 * c)) & 0xff];
        }
        sums[t & 3] += a * back.amps[t >> 2];
    }
    let base = mid.ln_scale + back.ln_scale;
    sums.map(|s| if s > 0.0 { base + s.ln() } else { f64::NEG_INFINITY })
}

/// Marginal decoding with the grid backend.
pub fn decode_marginal(code: &StabilizerCode, s: &Syndrome, noise: &NoiseModel) -> Result<DecodeResult> {
    Decoder::new(code)?.decode(s, noise)
}
