//! Uniform-magnitude magnetic field `-Σ_i B_i σ_i` with `|B_i| = |J|`.
//!
//! The field is absorbed into bonds to an extra always-up spin. Summing the
//! augmented graph over both values of that spin counts every configuration
//! twice (the two sectors are related by a global flip), so the field
//! partition function is half the augmented one.

use super::direct::{bond_terms, check_direct_guard, energy_histogram, sum_histogram};
use super::kernel::partition_kernel;
use super::{Evaluation, SpinGlass};
use crate::error::{Error, Result};
use crate::gf2::Gf2Vector;
use crate::scalar::Scalar;

/// Field signs (`0` for `B_i = +J`, `1` for `B_i = -J`) from field values in units of `J`.
/// Only `B_i = ±1` is expressible with ±J bonds.
pub fn field_signs_from_values(values: &[f64]) -> Result<Gf2Vector> {
    let bits = values
        .iter()
        .enumerate()
        .map(|(i, &b)| {
            if b == 1.0 {
                Ok(false)
            } else if b == -1.0 {
                Ok(true)
            } else {
                Err(Error::NotReducible {
                    reason: format!("field at vertex {i} is {b} J; only |B_i| = |J| is supported"),
                })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Gf2Vector::from_bools(&bits))
}

/// `Z_B = Z(G + star) / 2`, evaluated by cycle-space enumeration on the augmented graph.
pub fn partition_with_field<S: Scalar>(
    inst: &SpinGlass<S>,
    field_signs: &Gf2Vector,
    cap: u64,
) -> Result<Evaluation<S>> {
    let (graph, bonds) = inst.graph().augment_star(inst.bonds(), field_signs)?;
    let augmented = inst.with_graph(graph, bonds)?;
    let eval = partition_kernel(&augmented, cap)?;
    Ok(Evaluation {
        value: eval.value / S::from_i64(2),
        ..eval
    })
}

/// `Σ_σ exp[-β(H(σ) - Σ_i B_i σ_i)]` with `B_i = (-1)^{field_signs_i} J`, summed directly.
pub fn partition_direct_with_field<S: Scalar>(inst: &SpinGlass<S>, field_signs: &Gf2Vector) -> Result<Evaluation<S>> {
    let g = inst.graph();
    if field_signs.len() != g.num_vertices() {
        return Err(Error::mismatch("field signs", g.num_vertices(), field_signs.len()));
    }
    check_direct_guard(g.num_vertices())?;
    let fields: Vec<i64> = field_signs.iter().map(|f| if f { -1 } else { 1 }).collect();
    let bonds = g.num_edges() + g.num_vertices();
    let hist = energy_histogram(g.num_vertices(), &bond_terms(g, inst.bonds()), &fields, bonds as i64);
    Ok(Evaluation {
        value: sum_histogram(inst, &hist, bonds)?,
        terms: 1u128 << g.num_vertices(),
        kernel_dim: None,
    })
}
