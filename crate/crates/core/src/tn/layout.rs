use crate::error::{Error, Result};
use crate::noise::NoiseModel;
use crate::pauli::{Pauli, PauliString};

/// Logic-circuit tensor `T^P` placed where a generator acts as `P`.
///
/// Indices are `(i_x, i_z)` on the left, `(j_x, j_z)` on the right and the
/// vertical `sigma_u`, `sigma_d`. The entry is 1 exactly when the vertical
/// bits agree and the left pair equals the right pair XOR `sigma * P`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckTensor {
    pub kind: Pauli,
}

impl CheckTensor {
    pub fn new(kind: Pauli) -> Result<Self> {
        if kind.is_identity() {
            return Err(Error::InvalidParameter("check tensors need a non-identity Pauli".into()));
        }
        Ok(CheckTensor { kind })
    }

    pub fn entry(&self, left: (bool, bool), right: (bool, bool), sigma_u: bool, sigma_d: bool) -> u8 {
        if sigma_u != sigma_d {
            return 0;
        }
        let (px, pz) = self.kind.bits();
        let flip = (px & sigma_u, pz & sigma_u);
        (left == (right.0 ^ flip.0, right.1 ^ flip.1)) as u8
    }
}

/// Per-site probability vector, indexed by the incoming `(i_x, i_z)` code
/// and permuted by the action of `f_L` on the site.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbabilityTensor {
    pub site: usize,
    pub entries: [f64; 4],
}

impl ProbabilityTensor {
    pub fn new(site: usize, noise: &NoiseModel, f_site: Pauli) -> Self {
        let base = noise.by_code();
        let shift = f_site.code();
        let mut entries = [0.0; 4];
        for (h, e) in entries.iter_mut().enumerate() {
            *e = base[h ^ shift];
        }
        ProbabilityTensor { site, entries }
    }

    #[inline]
    pub fn entry(&self, i_x: bool, i_z: bool) -> f64 {
        self.entries[i_x as usize | (i_z as usize) << 1]
    }
}

/// A `T^P` tensor at one grid position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cell {
    pub column: usize,
    pub generator: usize,
    pub kind: Pauli,
}

/// The two-dimensional network: one row per qubit, one column slot per
/// generator. Each generator's vertical wire spans `[first, last]` of its
/// support in its column, terminated above and below by all-ones vectors;
/// every row starts from a fixed-zero terminator on the left and ends in a
/// [`ProbabilityTensor`] on the right.
#[derive(Clone, Debug)]
pub struct TnLayout {
    n_rows: usize,
    generators: Vec<PauliString>,
    spans: Vec<(usize, usize)>,
    columns: Vec<usize>,
    num_columns: usize,
    rows: Vec<Vec<Cell>>,
    opening: Vec<Vec<usize>>,
    closing: Vec<Vec<usize>>,
}

impl TnLayout {
    /// Sorts generators by their first support row and assigns each to the
    /// lowest column whose previous occupant ends above it (first fit).
    pub fn build(generators: Vec<PauliString>, n_rows: usize) -> Result<Self> {
        let mut spans = Vec::with_capacity(generators.len());
        for g in &generators {
            if g.len() != n_rows {
                return Err(Error::DimensionMismatch {
                    expected: n_rows,
                    found: g.len(),
                });
            }
            let span = g
                .support_interval()
                .ok_or_else(|| Error::InvalidParameter("identity generator in layout".into()))?;
            spans.push(span);
        }
        let mut order: Vec<usize> = (0..generators.len()).collect();
        order.sort_by_key(|&i| (spans[i].0, i));

        let mut columns = vec![0; generators.len()];
        // last occupied row per column
        let mut column_end: Vec<usize> = Vec::new();
        for &g in &order {
            let (first, last) = spans[g];
            match column_end.iter().position(|&end| end < first) {
                Some(c) => {
                    columns[g] = c;
                    column_end[c] = last;
                }
                None => {
                    columns[g] = column_end.len();
                    column_end.push(last);
                }
            }
        }

        let mut rows = vec![Vec::new(); n_rows];
        let mut opening = vec![Vec::new(); n_rows];
        let mut closing = vec![Vec::new(); n_rows];
        for &g in &order {
            let (first, last) = spans[g];
            opening[first].push(g);
            closing[last].push(g);
            for (row, cells) in rows.iter_mut().enumerate().take(last + 1).skip(first) {
                let kind = generators[g].get(row);
                if !kind.is_identity() {
                    cells.push(Cell {
                        column: columns[g],
                        generator: g,
                        kind,
                    });
                }
            }
        }
        for cells in rows.iter_mut() {
            cells.sort_by_key(|c| c.column);
        }
        Ok(TnLayout {
            n_rows,
            generators,
            spans,
            columns,
            num_columns: column_end.len(),
            rows,
            opening,
            closing,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn num_columns(&self) -> usize {
        self.num_columns
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    pub fn span(&self, g: usize) -> (usize, usize) {
        self.spans[g]
    }

    pub fn column(&self, g: usize) -> usize {
        self.columns[g]
    }

    /// Tensors of a row, left to right.
    pub fn row(&self, row: usize) -> &[Cell] {
        &self.rows[row]
    }

    /// Generators whose vertical wire starts at `row`.
    pub fn opening(&self, row: usize) -> &[usize] {
        &self.opening[row]
    }

    /// Generators whose vertical wire ends at `row`.
    pub fn closing(&self, row: usize) -> &[usize] {
        &self.closing[row]
    }

    /// Number of vertical wires passing through `row`.
    pub fn active_at(&self, row: usize) -> usize {
        self.spans
            .iter()
            .filter(|&&(a, b)| a <= row && row <= b)
            .count()
    }
}
