//! Exact row-sweep contraction of a [`TnLayout`].
//!
//! The boundary state after a row is indexed by the sigma bits of the
//! vertical wires cut by the boundary. Absorbing a row opens the wires
//! starting there (all-ones top terminators), pushes the horizontal
//! `(i_x, i_z)` wire through the row's `T^P` tensors left to right, closes it
//! with the row's probability tensor, then sums out wires ending at the row
//! (all-ones bottom terminators). Because the horizontal wire enters each row
//! fixed to zero and every `T^P` is a controlled XOR, its value at the
//! probability tensor is the parity of the controlling sigma bits; the row is
//! absorbed in one pass over the state using those parities.
//!
//! After every row the state is divided by its largest entry and the log of
//! that factor is accumulated, so long chains do not underflow. Individual
//! entries stay in linear scale and may be exactly zero.

use crate::error::{Error, Result};
use crate::noise::NoiseModel;
use crate::pauli::PauliString;
use crate::tn::layout::{ProbabilityTensor, TnLayout};

pub const DEFAULT_MAX_WIDTH: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ContractOptions {
    /// Largest number of open sigma wires a boundary state may carry.
    pub max_width: usize,
}

impl Default for ContractOptions {
    fn default() -> Self {
        ContractOptions {
            max_width: DEFAULT_MAX_WIDTH,
        }
    }
}

/// Result of a contraction: `ln` of the value and the widest boundary seen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Contraction {
    pub ln_value: f64,
    pub max_width: usize,
}

impl Contraction {
    pub fn value(&self) -> f64 {
        self.ln_value.exp()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Direction {
    /// Rows in increasing order; wires open at their first row.
    Down,
    /// Rows in decreasing order; wires open at their last row.
    Up,
}

/// Boundary state between two rows.
#[derive(Clone, Debug)]
pub(crate) struct BoundaryState {
    /// Generator id carried by each bit of the index, low bit first.
    pub slots: Vec<usize>,
    pub amps: Vec<f64>,
    pub ln_scale: f64,
}

impl BoundaryState {
    pub fn new() -> Self {
        BoundaryState {
            slots: Vec::new(),
            amps: vec![1.0],
            ln_scale: 0.0,
        }
    }

    pub fn width(&self) -> usize {
        self.slots.len()
    }

    fn slot_of(&self, g: usize) -> Option<usize> {
        self.slots.iter().position(|&s| s == g)
    }

    fn open(&mut self, g: usize, clamp: Option<bool>, cap: usize) -> Result<()> {
        if self.slots.len() + 1 > cap {
            return Err(Error::Resource {
                what: "boundary width",
                actual: self.slots.len() + 1,
                cap,
            });
        }
        let half = self.amps.len();
        self.amps.extend_from_within(..);
        match clamp {
            Some(true) => self.amps[..half].fill(0.0),
            Some(false) => self.amps[half..].fill(0.0),
            None => {}
        }
        self.slots.push(g);
        Ok(())
    }

    pub fn sum_out(&mut self, g: usize) {
        let b = self.slot_of(g).expect("closing a wire that is not open");
        let low = 1usize << b;
        let new_len = self.amps.len() / 2;
        let mut out = Vec::with_capacity(new_len);
        for hi in (0..self.amps.len()).step_by(2 * low) {
            for lo in 0..low {
                out.push(self.amps[hi + lo] + self.amps[hi + low + lo]);
            }
        }
        self.amps = out;
        self.slots.remove(b);
    }

    /// Multiplies in the probability tensor of `row` given the horizontal
    /// wire parity masks.
    fn apply_row_factor(&mut self, mask_x: usize, mask_z: usize, p: &ProbabilityTensor) {
        let e = p.entries;
        if mask_x == 0 && mask_z == 0 {
            let f = e[0];
            self.amps.iter_mut().for_each(|a| *a *= f);
            return;
        }
        for (idx, a) in self.amps.iter_mut().enumerate() {
            let h = ((idx & mask_x).count_ones() & 1) as usize
                | (((idx & mask_z).count_ones() & 1) as usize) << 1;
            *a *= e[h];
        }
    }

    fn rescale(&mut self) {
        let max = self.amps.iter().fold(0.0f64, |m, &a| m.max(a));
        if max > 0.0 && max.is_finite() {
            let inv = 1.0 / max;
            self.amps.iter_mut().for_each(|a| *a *= inv);
            self.ln_scale += max.ln();
        }
    }

    pub fn ln_total(&self) -> f64 {
        let s: f64 = self.amps.iter().sum();
        if s > 0.0 {
            self.ln_scale + s.ln()
        } else {
            f64::NEG_INFINITY
        }
    }
}

/// Sweep machinery over one layout and one `f_L`.
pub(crate) struct Sweeper<'a> {
    pub layout: &'a TnLayout,
    pub probs: Vec<ProbabilityTensor>,
    pub cap: usize,
    pub clamps: Option<&'a [Option<bool>]>,
}

impl<'a> Sweeper<'a> {
    pub fn new(
        layout: &'a TnLayout,
        f_l: &PauliString,
        noise: &NoiseModel,
        options: &ContractOptions,
    ) -> Result<Self> {
        if f_l.len() != layout.n_rows() {
            return Err(Error::DimensionMismatch {
                expected: layout.n_rows(),
                found: f_l.len(),
            });
        }
        let probs = (0..layout.n_rows())
            .map(|j| ProbabilityTensor::new(j, noise, f_l.get(j)))
            .collect();
        Ok(Sweeper {
            layout,
            probs,
            cap: options.max_width,
            clamps: None,
        })
    }

    fn clamp(&self, g: usize) -> Option<bool> {
        self.clamps.and_then(|c| c[g])
    }

    pub fn entering(&self, row: usize, dir: Direction) -> &'a [usize] {
        match dir {
            Direction::Down => self.layout.opening(row),
            Direction::Up => self.layout.closing(row),
        }
    }

    pub fn leaving(&self, row: usize, dir: Direction) -> &'a [usize] {
        match dir {
            Direction::Down => self.layout.closing(row),
            Direction::Up => self.layout.opening(row),
        }
    }

    /// Opens the wires entering at `row` and multiplies in the row.
    pub fn open_and_weigh(&self, state: &mut BoundaryState, row: usize, dir: Direction) -> Result<()> {
        for &g in self.entering(row, dir) {
            state.open(g, self.clamp(g), self.cap)?;
        }
        let (mut mask_x, mut mask_z) = (0usize, 0usize);
        for cell in self.layout.row(row) {
            let b = state.slot_of(cell.generator).expect("row tensor on a closed wire");
            let (x, z) = cell.kind.bits();
            mask_x |= (x as usize) << b;
            mask_z |= (z as usize) << b;
        }
        state.apply_row_factor(mask_x, mask_z, &self.probs[row]);
        Ok(())
    }

    pub fn absorb(&self, state: &mut BoundaryState, row: usize, dir: Direction) -> Result<()> {
        self.open_and_weigh(state, row, dir)?;
        for &g in self.leaving(row, dir) {
            state.sum_out(g);
        }
        state.rescale();
        Ok(())
    }

    pub fn run(&self, dir: Direction) -> Result<Contraction> {
        let mut state = BoundaryState::new();
        let mut max_width = 0;
        let rows: Box<dyn Iterator<Item = usize>> = match dir {
            Direction::Down => Box::new(0..self.layout.n_rows()),
            Direction::Up => Box::new((0..self.layout.n_rows()).rev()),
        };
        for row in rows {
            self.open_and_weigh(&mut state, row, dir)?;
            max_width = max_width.max(state.width());
            for &g in self.leaving(row, dir) {
                state.sum_out(g);
            }
            state.rescale();
        }
        debug_assert!(state.slots.is_empty());
        Ok(Contraction {
            ln_value: state.ln_total(),
            max_width,
        })
    }
}

/// Exact value of the network with the probability tensors permuted by
/// `f_l`, i.e. the coset probability `p(f_l G)` for the group generated by
/// the layout's generators.
pub fn contract(
    layout: &TnLayout,
    f_l: &PauliString,
    noise: &NoiseModel,
    options: &ContractOptions,
) -> Result<Contraction> {
    Sweeper::new(layout, f_l, noise, options)?.run(Direction::Down)
}

/// Like [`contract`], with the sigma wire of generator `g` fixed to
/// `clamps[g]` wherever that is `Some`.
pub fn contract_clamped(
    layout: &TnLayout,
    f_l: &PauliString,
    noise: &NoiseModel,
    clamps: &[Option<bool>],
    options: &ContractOptions,
) -> Result<Contraction> {
    if clamps.len() != layout.generators().len() {
        return Err(Error::DimensionMismatch {
            expected: layout.generators().len(),
            found: clamps.len(),
        });
    }
    let mut sweeper = Sweeper::new(layout, f_l, noise, options)?;
    sweeper.clamps = Some(clamps);
    sweeper.run(Direction::Down)
}
