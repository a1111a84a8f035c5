//! Tanner-graph network collapsed to a one-dimensional chain.
//!
//! Each check is a delta tensor over the sigma bits of the qubits it touches;
//! splitting the deltas along the chain leaves one matrix per qubit whose
//! bond at cut `j | j+1` carries the sigma bits of generators supported on
//! both sides. Matrix entries are the site probability of
//! `f_L · Π g_i^{sigma_i}` restricted to that site, summed over generators
//! confined to the site.

use std::collections::HashMap;

use crate::code::StabilizerCode;
use crate::error::{Error, Result};
use crate::noise::NoiseModel;
use crate::pauli::{Pauli, PauliString};
use crate::tn::grid::{ContractOptions, Contraction};

struct SiteMatrix {
    /// `(left, right, value)` with indices over the left and right bonds.
    entries: Vec<(usize, usize, f64)>,
    right_dim: usize,
}

fn site_matrix(
    gens: &[PauliString],
    local: &[usize],
    left: &[usize],
    right: &[usize],
    site: usize,
    f_site: Pauli,
    noise: &NoiseModel,
) -> SiteMatrix {
    let left_bit: Vec<Option<usize>> = local.iter().map(|g| left.iter().position(|x| x == g)).collect();
    let right_bit: Vec<Option<usize>> = local.iter().map(|g| right.iter().position(|x| x == g)).collect();
    let mut acc: HashMap<(usize, usize), f64> = HashMap::new();
    for assign in 0usize..1 << local.len() {
        let mut p = f_site;
        let (mut l, mut r) = (0usize, 0usize);
        for (b, &g) in local.iter().enumerate() {
            if assign >> b & 1 == 1 {
                p = p.mul(gens[g].get(site));
                if let Some(i) = left_bit[b] {
                    l |= 1 << i;
                }
                if let Some(i) = right_bit[b] {
                    r |= 1 << i;
                }
            }
        }
        *acc.entry((l, r)).or_insert(0.0) += noise.prob(p);
    }
    let mut entries: Vec<(usize, usize, f64)> = acc.into_iter().map(|((l, r), v)| (l, r, v)).collect();
    entries.sort_by_key(|&(l, r, _)| (l, r));
    SiteMatrix {
        entries,
        right_dim: 1 << right.len(),
    }
}

/// `p(f_L G)` for the group generated by the checks and `extra`, computed
/// on the Tanner chain. The cap in `options` bounds the number of sigma bits
/// enumerated at a single site.
pub fn contract_tanner_chain(
    code: &StabilizerCode,
    f_l: &PauliString,
    noise: &NoiseModel,
    extra: &[PauliString],
    options: &ContractOptions,
) -> Result<Contraction> {
    let n = code.n_phys;
    if f_l.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: f_l.len(),
        });
    }
    let gens: Vec<PauliString> = code.checks.iter().chain(extra).cloned().collect();
    let mut spans = Vec::with_capacity(gens.len());
    for g in &gens {
        if g.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: g.len(),
            });
        }
        spans.push(
            g.support_interval()
                .ok_or_else(|| Error::InvalidParameter("identity generator in chain".into()))?,
        );
    }
    let bond = |j: usize| -> Vec<usize> {
        (0..gens.len())
            .filter(|&g| spans[g].0 <= j && j < spans[g].1)
            .collect()
    };

    let mut v = vec![1.0f64];
    let mut ln_scale = 0.0;
    let mut left: Vec<usize> = Vec::new();
    let mut max_width = 0;
    for j in 0..n {
        let local: Vec<usize> = (0..gens.len())
            .filter(|&g| spans[g].0 <= j && j <= spans[g].1)
            .collect();
        if local.len() > options.max_width {
            return Err(Error::Resource {
                what: "chain site width",
                actual: local.len(),
                cap: options.max_width,
            });
        }
        max_width = max_width.max(local.len());
        let right = if j + 1 < n { bond(j) } else { Vec::new() };
        let m = site_matrix(&gens, &local, &left, &right, j, f_l.get(j), noise);
        let mut next = vec![0.0f64; m.right_dim];
        for &(l, r, val) in &m.entries {
            next[r] += v[l] * val;
        }
        let max = next.iter().fold(0.0f64, |a, &b| a.max(b));
        if max > 0.0 {
            next.iter_mut().for_each(|x| *x /= max);
            ln_scale += max.ln();
        }
        v = next;
        left = right;
    }
    let total = v[0];
    Ok(Contraction {
        ln_value: if total > 0.0 { ln_scale + total.ln() } else { f64::NEG_INFINITY },
        max_width,
    })
}
