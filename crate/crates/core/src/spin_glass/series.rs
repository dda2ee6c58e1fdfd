//! High-temperature series: zero-parity subgraphs grouped by edge count.
//!
//! Subgraphs are generated weight by weight, each weight class in
//! lexicographic order of edge indices, and kept when every vertex has even
//! degree. The sign of a kept subgraph is `(-1)^{b·w}`.

use super::{Evaluation, SpinGlass};
use crate::error::{Error, Result};
use crate::gf2::Gf2Vector;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesExpansion<S> {
    /// `c_k = Σ_{|b| = k, Ab = 0} (-1)^{b·w}` for `k = 0..=order`.
    pub coefficients: Vec<i64>,
    /// `2^{|V|} Θ Σ_{j <= k} c_j λ^j` for `k = 0..=order`.
    pub partial_sums: Vec<S>,
    /// The full sum, present once the order reaches `|E|`.
    pub exact: Option<S>,
    /// Number of subgraphs examined.
    pub terms: u128,
}

impl<S: Clone> SeriesExpansion<S> {
    pub fn evaluation(&self) -> Option<Evaluation<S>> {
        self.exact.clone().map(|value| Evaluation {
            value,
            terms: self.terms,
            kernel_dim: None,
        })
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

/// Advances `idx` to the next `k`-subset of `0..n` in lexicographic order.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
        return false;
    };
    idx[i] += 1;
    for j in i + 1..k {
        idx[j] = idx[j - 1] + 1;
    }
    true
}

pub fn partition_series<S: Scalar>(inst: &SpinGlass<S>, max_order: usize, cap: u64) -> Result<SeriesExpansion<S>> {
    let g = inst.graph();
    let m = g.num_edges();
    let order = max_order.min(m);
    let terms = (0..=order).fold(0u128, |acc, k| acc.saturating_add(binomial(m, k)));
    if terms > u128::from(cap) {
        return Err(Error::CapExceeded {
            what: "series subgraph enumeration",
            required: terms,
            cap,
        });
    }
    let prefactor = inst.prefactor()?;
    let w = inst.bonds().bits();
    let mut coefficients = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let mut idx: Vec<usize> = (0..k).collect();
        let mut c = 0i64;
        loop {
            let mut alpha = Gf2Vector::zeros(g.num_vertices());
            let mut sign = false;
            for &e in &idx {
                let (i, j) = g.edges()[e];
                alpha.flip(i);
                alpha.flip(j);
                sign ^= w.get(e);
            }
            if alpha.is_zero() {
                c += if sign { -1 } else { 1 };
            }
            if !next_combination(&mut idx, m) {
                break;
            }
        }
        coefficients.push(c);
    }

    // With y = 1 the truncated prefix of the counts is the partial sum.
    let lambda = inst.lambda();
    let partial_sums: Vec<S> = (0..=order)
        .map(|k| prefactor.clone() * S::weighted_power_sum(&coefficients[..=k], lambda, &S::one()))
        .collect();
    let exact = (max_order >= m).then(|| partial_sums[order].clone());
    Ok(SeriesExpansion {
        coefficients,
        partial_sums,
        exact,
        terms,
    })
}
