use super::direct::partition_direct;
use super::{Evaluation, SpinGlass, DIRECT_MAX_SPINS};
use crate::error::{Error, Result};
use crate::gf2::{KernelEnumerator, SignSource};
use crate::qwgt::{contract_counts, dg, qwgt_kernel, QwgtInstance};
use crate::scalar::Scalar;

/// `Z = 2^{|V|} Θ Σ_{b : Ab = 0} λ^{|b|} (-1)^{b·w}`, enumerating the cycle space only.
pub fn partition_kernel<S: Scalar>(inst: &SpinGlass<S>, cap: u64) -> Result<Evaluation<S>> {
    let prefactor = inst.prefactor()?;
    let basis = inst.graph().cycle_basis();
    let enumerator = KernelEnumerator::new(&basis)
        .with_dot(inst.bonds().bits())?
        .with_cap(cap);
    let counts = enumerator.signed_weight_counts(SignSource::Dot)?;
    Ok(Evaluation {
        value: prefactor * contract_counts(&counts, inst.lambda(), &S::one()),
        terms: u128::from(enumerator.total()?),
        kernel_dim: Some(basis.dim()),
    })
}

/// Both sides of `(1-λ²)^{|E|/2} / 2^{|V|} · Z(w) = S(A_inc, dg(w), λ, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bridge<S> {
    /// `Z / (2^{|V|} Θ)`.
    pub lhs: S,
    /// The QWGT evaluated by the kernel engine.
    pub rhs: S,
    /// Method that produced `Z` on the left-hand side.
    pub lhs_method: &'static str,
}

pub fn qwgt_bridge<S: Scalar>(inst: &SpinGlass<S>, cap: u64) -> Result<Bridge<S>> {
    let g = inst.graph();
    let prefactor = inst.prefactor()?;
    let (z, lhs_method) = if g.num_vertices() <= DIRECT_MAX_SPINS {
        (partition_direct(inst)?.value, "direct")
    } else {
        (partition_kernel(inst, cap)?.value, "kernel")
    };
    let qwgt = QwgtInstance::new(g.incidence_matrix(), dg(inst.bonds().bits()), inst.lambda().clone(), S::one())?;
    Ok(Bridge {
        lhs: z / prefactor,
        rhs: qwgt_kernel(&qwgt, cap)?,
        lhs_method,
    })
}

/// `Z_± = 2^{|V|} Θ Σ_{b : Ab = 0} (±λ)^{|b|}` for all-ferro (`+`) or all-antiferro (`-`) bonds.
pub fn partition_uniform<S: Scalar>(inst: &SpinGlass<S>, cap: u64) -> Result<Evaluation<S>> {
    let antiferro = inst.bonds().uniform().ok_or_else(|| {
        let bits = inst.bonds().bits();
        let edge = (1..bits.len()).find(|&e| bits.get(e) != bits.get(0)).unwrap_or(0);
        Error::NonUniform { edge }
    })?;
    let prefactor = inst.prefactor()?;
    let basis = inst.graph().cycle_basis();
    let enumerator = KernelEnumerator::new(&basis).with_cap(cap);
    let counts = enumerator.signed_weight_counts(SignSource::Unsigned)?;
    let x = if antiferro {
        -inst.lambda().clone()
    } else {
        inst.lambda().clone()
    };
    Ok(Evaluation {
        value: prefactor * contract_counts(&counts, &x, &S::one()),
        terms: u128::from(enumerator.total()?),
        kernel_dim: Some(basis.dim()),
    })
}
