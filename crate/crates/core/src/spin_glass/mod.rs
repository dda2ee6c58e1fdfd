//! Partition function of the ±J Ising spin glass `H = -Σ_e J q_e σ_i σ_j`.
//!
//! Every evaluation path lives here: the direct Gibbs sum, the subgraph
//! (Walsh-Hadamard) expansion of single weights and of `Z`, the cycle-space
//! sum over zero-parity subgraphs, the weight-ordered high-temperature series,
//! the uniform-bond specializations, the star-augmented field case, and the
//! bridge to the QWGT engine `S(A_inc, dg(w), λ, 1)`.
//!
//! Couplings are given either as `βJ` (real or complex) or directly as
//! `λ = tanh(βJ)`. With `βJ` the prefactor is `2^{|V|} cosh(βJ)^{|E|}`; with
//! `λ` alone it is `2^{|V|} (1-λ²)^{-|E|/2}`, which is exact in rational mode
//! whenever the half-integer power is rational.

mod direct;
mod field;
mod fourier;
mod kernel;
mod series;

pub use direct::{energy, gibbs_probability, partition_direct, DIRECT_MAX_SPINS};
pub use field::{field_signs_from_values, partition_direct_with_field, partition_with_field};
pub use fourier::{boltzmann_weight_fourier, partition_double_transform, FOURIER_MAX_BITS};
pub use kernel::{partition_kernel, partition_uniform, qwgt_bridge, Bridge};
pub use series::{partition_series, SeriesExpansion};

use crate::error::{Error, Result};
use crate::gf2::Gf2Vector;
use crate::graph::{BondConfig, Graph};
use crate::scalar::{Analytic, Scalar};

/// A computed partition function together with bookkeeping for reports.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation<S> {
    pub value: S,
    /// Number of summands visited.
    pub terms: u128,
    pub kernel_dim: Option<usize>,
}

/// Binary spin configuration, `s_i = (1 - σ_i) / 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpinConfig(pub Gf2Vector);

impl SpinConfig {
    /// `σ_i = (-1)^{s_i}`.
    pub fn spin(&self, i: usize) -> i64 {
        if self.0.get(i) {
            -1
        } else {
            1
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// The data `(G, w, coupling)` of one spin-glass evaluation.
#[derive(Clone)]
pub struct SpinGlass<S> {
    graph: Graph,
    bonds: BondConfig,
    lambda: S,
    beta_j: Option<S>,
    cosh_beta_j: Option<S>,
    exp_fn: Option<fn(&S) -> S>,
}

impl<S: Scalar> std::fmt::Debug for SpinGlass<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpinGlass")
            .field("graph", &self.graph)
            .field("bonds", &self.bonds)
            .field("lambda", &self.lambda)
            .field("beta_j", &self.beta_j)
            .finish()
    }
}

pub fn lambda_of<S: Analytic>(beta_j: &S) -> S {
    beta_j.tanh()
}

/// `Θ = cosh(βJ)^{num_edges}`.
pub fn theta_of<S: Analytic>(beta_j: &S, num_edges: usize) -> S {
    beta_j.cosh().pow(num_edges)
}

impl<S: Scalar> SpinGlass<S> {
    /// Coupling given as `λ` only. Domain checks on `λ` happen when a prefactor is needed.
    pub fn from_lambda(graph: Graph, bonds: BondConfig, lambda: S) -> Result<Self> {
        graph.check_edge_vector(bonds.bits(), "bond configuration")?;
        Ok(Self {
            graph,
            bonds,
            lambda,
            beta_j: None,
            cosh_beta_j: None,
            exp_fn: None,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn bonds(&self) -> &BondConfig {
        &self.bonds
    }

    pub fn lambda(&self) -> &S {
        &self.lambda
    }

    pub fn beta_j(&self) -> Option<&S> {
        self.beta_j.as_ref()
    }

    /// Same coupling on another graph and bond configuration.
    pub fn with_graph(&self, graph: Graph, bonds: BondConfig) -> Result<Self> {
        graph.check_edge_vector(bonds.bits(), "bond configuration")?;
        Ok(Self {
            graph,
            bonds,
            ..self.clone()
        })
    }

    pub fn with_bonds(&self, bonds: BondConfig) -> Result<Self> {
        self.with_graph(self.graph.clone(), bonds)
    }

    /// `cosh(βJ)^{bonds}`, or `(1-λ²)^{-bonds/2}` when only `λ` is known.
    pub(crate) fn theta_for(&self, bonds: usize) -> Result<S> {
        if let Some(c) = &self.cosh_beta_j {
            if c.is_zero() {
                return Err(Error::BranchSingular {
                    reason: "cosh(βJ) = 0".into(),
                });
            }
            return Ok(c.pow(bonds));
        }
        let u = S::one() - self.lambda.clone() * self.lambda.clone();
        match u.real_value() {
            Some(r) if r <= 0.0 => {
                return Err(Error::ZeroTemperature {
                    lambda: self.lambda.to_literal().to_string(),
                })
            }
            None if u.is_zero() => {
                return Err(Error::BranchSingular {
                    reason: "1 - λ² = 0".into(),
                })
            }
            _ => {}
        }
        let mut denom = u.pow(bonds / 2);
        if bonds % 2 == 1 {
            let root = u.sqrt().ok_or_else(|| Error::Inexact {
                reason: format!(
                    "(1 - λ²)^(1/2) is irrational for λ = {}; use a real coupling",
                    self.lambda.to_literal()
                ),
            })?;
            denom = denom * root;
        }
        Ok(S::one() / denom)
    }

    /// `Θ = cosh(βJ)^{|E|}`.
    pub fn theta(&self) -> Result<S> {
        self.theta_for(self.graph.num_edges())
    }

    /// `2^{|V|} Θ`, the factor between `Z` and the reduced cycle-space sum.
    pub fn prefactor(&self) -> Result<S> {
        Ok(power_of_two::<S>(self.graph.num_vertices()) * self.theta()?)
    }

    /// `exp(-βJ h)` for an integer energy `h` (in units of `J`) over `bonds` couplings.
    pub(crate) fn boltzmann_factor(&self, h: i64, bonds: usize) -> Result<S> {
        if let (Some(exp), Some(bj)) = (self.exp_fn, &self.beta_j) {
            return Ok(exp(&(S::from_i64(-h) * bj.clone())));
        }
        // exp(βJ) = Θ₁(1+λ), exp(-βJ) = Θ₁(1-λ) with Θ₁ = cosh(βJ).
        let unsat = (bonds as i64 + h) / 2;
        let sat = bonds as i64 - unsat;
        let plus = S::one() + self.lambda.clone();
        let minus = S::one() - self.lambda.clone();
        Ok(self.theta_for(bonds)? * plus.pow(sat as usize) * minus.pow(unsat as usize))
    }
}

impl<S: Analytic> SpinGlass<S> {
    /// Coupling given as `βJ`; `λ = tanh(βJ)` and `cosh(βJ)` are derived from it.
    pub fn from_beta_j(graph: Graph, bonds: BondConfig, beta_j: S) -> Result<Self> {
        let mut inst = Self::from_lambda(graph, bonds, lambda_of(&beta_j))?;
        inst.cosh_beta_j = Some(beta_j.cosh());
        inst.exp_fn = Some(<S as Analytic>::exp);
        inst.beta_j = Some(beta_j);
        Ok(inst)
    }
}

pub(crate) fn power_of_two<S: Scalar>(k: usize) -> S {
    S::from_i64(2).pow(k)
}
