//! Subgraph expansion: `W(s) = Θ Σ_b λ^{|b|} (-1)^{α^b·s + b·w}` and its sum over `s`.
//!
//! These paths scan every subgraph `b ⊆ E` (and, for `Z`, every spin
//! configuration) without using the parity collapse, so they are only meant
//! for small graphs where they validate the cycle-space form.

use super::{Evaluation, SpinConfig, SpinGlass};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::qwgt::{contract_counts, ORACLE_MAX_BITS};
use crate::scalar::Scalar;

/// Largest `|V| + |E|` the double transform accepts.
pub const FOURIER_MAX_BITS: usize = 30;

/// Two-bit vertex mask of every edge; requires `|V| <= 64`.
fn edge_masks(g: &Graph) -> Vec<u64> {
    g.edges().iter().map(|&(i, j)| (1u64 << i) | (1u64 << j)).collect()
}

fn word_of(bits: &crate::gf2::Gf2Vector) -> u64 {
    bits.words().first().copied().unwrap_or(0)
}

/// Visits every subgraph in Gray-code order with its parity mask, weight and `b·w`.
fn for_each_subgraph(g: &Graph, w: u64, mut visit: impl FnMut(u64, usize, bool)) {
    let masks = edge_masks(g);
    let (mut alpha, mut b, mut bw) = (0u64, 0u64, false);
    visit(alpha, 0, false);
    for i in 1u64..(1u64 << masks.len()) {
        let e = i.trailing_zeros() as usize;
        alpha ^= masks[e];
        b ^= 1 << e;
        bw ^= (w >> e) & 1 == 1;
        visit(alpha, b.count_ones() as usize, bw);
    }
}

/// Boltzmann weight of one configuration, as a sum over all `2^{|E|}` subgraphs.
pub fn boltzmann_weight_fourier<S: Scalar>(inst: &SpinGlass<S>, s: &SpinConfig) -> Result<S> {
    let g = inst.graph();
    if g.num_edges() > ORACLE_MAX_BITS {
        return Err(Error::OracleTooLarge {
            what: "subgraph expansion of a Boltzmann weight",
            required_bits: g.num_edges(),
            limit_bits: ORACLE_MAX_BITS,
        });
    }
    if s.len() != g.num_vertices() {
        return Err(Error::mismatch("spin configuration", g.num_vertices(), s.len()));
    }
    if g.num_vertices() > 64 {
        return Err(Error::OracleTooLarge {
            what: "subgraph expansion of a Boltzmann weight",
            required_bits: g.num_vertices(),
            limit_bits: 64,
        });
    }
    let spins = word_of(&s.0);
    let mut counts = vec![0i64; g.num_edges() + 1];
    for_each_subgraph(g, word_of(inst.bonds().bits()), |alpha, weight, bw| {
        let negative = ((alpha & spins).count_ones() & 1 == 1) ^ bw;
        counts[weight] += if negative { -1 } else { 1 };
    });
    Ok(inst.theta()? * contract_counts(&counts, inst.lambda(), &S::one()))
}

/// `Z = Θ Σ_s Σ_b λ^{|b|} (-1)^{α^b·s + b·w}`, evaluated term by term.
pub fn partition_double_transform<S: Scalar>(inst: &SpinGlass<S>) -> Result<Evaluation<S>> {
    let g = inst.graph();
    let bits = g.num_vertices() + g.num_edges();
    if bits > FOURIER_MAX_BITS {
        return Err(Error::OracleTooLarge {
            what: "double Walsh-Hadamard sum",
            required_bits: bits,
            limit_bits: FOURIER_MAX_BITS,
        });
    }
    let configs = 1u64 << g.num_vertices();
    let mut counts = vec![0i64; g.num_edges() + 1];
    for_each_subgraph(g, word_of(inst.bonds().bits()), |alpha, weight, bw| {
        let spin_sum: i64 = (0..configs)
            .map(|s| if (alpha & s).count_ones() & 1 == 1 { -1 } else { 1 })
            .sum();
        counts[weight] += if bw { -spin_sum } else { spin_sum };
    });
    Ok(Evaluation {
        value: inst.theta()? * contract_counts(&counts, inst.lambda(), &S::one()),
        terms: 1u128 << bits,
        kernel_dim: None,
    })
}
