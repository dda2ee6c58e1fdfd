//! Kauffman bracket at `q = 2` through the two-state Potts model.
//!
//! Crossing signs `b_ij = ±1` on the edges of a dual lattice give complex
//! Potts couplings `βJ_ij = ln(-A^{-4 b_ij})` (principal branch). For two
//! states `δ_{s_i,s_j} = (1 + σ_i σ_j)/2`, so
//! `Z_Potts(2, {βJ_e}) = exp(½ Σ_e βJ_e) · Z_Ising({βJ_e / 2})`. Because
//! `tanh` has period `iπ`, the halved couplings share one `λ` up to sign; the
//! signs become the bond vector `w` and the Ising sum is the QWGT
//! `S(A_inc, dg(w), λ, 1)` with complex `λ`. The result is the bracket only up
//! to the normalisation constant `c(A, {b_ij})`, which is not computed.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::Gf2Vector;
use crate::graph::{BondConfig, Graph};
use crate::qwgt::{dg, kernel_counts, pairwise_sum, ORACLE_MAX_BITS};
use crate::scalar::{exact_complex, exact_mul, exact_powers, exact_to_complex, Complex64, Rational, Scalar};

/// Tolerance used to match halved couplings to `±λ`.
const MATCH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    #[serde(rename = "h")]
    Horizontal,
    #[serde(rename = "v")]
    Vertical,
}

/// Dual-lattice graph with one converted crossing sign `b_ij` per edge.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossingAssignment {
    lattice: Graph,
    crossing_sign: Vec<i8>,
    orientation: Vec<Orientation>,
}

fn check_signs(signs: &[i8]) -> Result<()> {
    match signs.iter().position(|&b| b != 1 && b != -1) {
        Some(e) => Err(Error::Parse(format!("crossing {e} is {}, expected +1 or -1", signs[e]))),
        None => Ok(()),
    }
}

impl CrossingAssignment {
    /// From raw diagram crossing values `b_k`: `b_ij = -b_k` on vertical edges, `b_k` on horizontal ones.
    pub fn from_raw(lattice: Graph, raw: &[i8], orientation: Vec<Orientation>) -> Result<Self> {
        check_signs(raw)?;
        let converted = raw
            .iter()
            .zip(&orientation)
            .map(|(&b, o)| match o {
                Orientation::Horizontal => b,
                Orientation::Vertical => -b,
            })
            .collect();
        Self::from_converted(lattice, converted, orientation)
    }

    /// From already-converted edge signs `b_ij`.
    pub fn from_converted(lattice: Graph, crossing_sign: Vec<i8>, orientation: Vec<Orientation>) -> Result<Self> {
        let m = lattice.num_edges();
        if crossing_sign.len() != m {
            return Err(Error::mismatch("crossing signs", m, crossing_sign.len()));
        }
        if orientation.len() != m {
            return Err(Error::mismatch("edge orientations", m, orientation.len()));
        }
        check_signs(&crossing_sign)?;
        Ok(Self {
            lattice,
            crossing_sign,
            orientation,
        })
    }

    pub fn lattice(&self) -> &Graph {
        &self.lattice
    }

    pub fn crossing_signs(&self) -> &[i8] {
        &self.crossing_sign
    }

    pub fn orientation(&self) -> &[Orientation] {
        &self.orientation
    }

    /// The raw `b_k` values this assignment was built from.
    pub fn raw_signs(&self) -> Vec<i8> {
        self.crossing_sign
            .iter()
            .zip(&self.orientation)
            .map(|(&b, o)| if *o == Orientation::Vertical { -b } else { b })
            .collect()
    }
}

/// The Kauffman polynomial variable `A` (never zero).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KauffmanVariable(Complex64);

impl KauffmanVariable {
    pub fn new(a: Complex64) -> Result<Self> {
        if a == Complex64::new(0.0, 0.0) {
            return Err(Error::ZeroKauffmanVariable);
        }
        Ok(Self(a))
    }

    pub fn on_unit_circle(angle: f64) -> Self {
        Self(Complex64::from_polar(1.0, angle))
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }
}

/// `q = (A² + A^{-2})²`.
pub fn q_of_a(a: &KauffmanVariable) -> Complex64 {
    let a2 = a.0 * a.0;
    let s = a2 + a2.inv();
    s * s
}

/// The four values `±[(q^{1/2} ± (q-4)^{1/2}) / 2]^{1/2}`, principal roots throughout.
/// Candidates whose round trip through [`q_of_a`] misses `q` are dropped.
pub fn a_of_q(q: Complex64) -> Vec<Complex64> {
    let sq = q.sqrt();
    let sq4 = (q - 4.0).sqrt();
    let mut roots = Vec::with_capacity(4);
    for inner in [(sq + sq4) / 2.0, (sq - sq4) / 2.0] {
        let r = inner.sqrt();
        roots.push(r);
        roots.push(-r);
    }
    roots.retain(|&r| {
        KauffmanVariable::new(r)
            .map(|a| (q_of_a(&a) - q).norm() <= 1e-9 * q.norm().max(1.0))
            .unwrap_or(false)
    });
    roots
}

/// Per-edge couplings `βJ_ij = ln(-A^{-4 b_ij})`, principal logarithm, in lattice edge order.
pub fn kauffman_couplings(a: &KauffmanVariable, cfg: &CrossingAssignment) -> Vec<Complex64> {
    let a4 = a.0.powi(4);
    cfg.crossing_sign
        .iter()
        .map(|&b| {
            let base = if b > 0 { a4.inv() } else { a4 };
            (-base).ln()
        })
        .collect()
}

/// Largest number of distinct aligned-count patterns that are summed exactly.
const EXACT_PATTERN_LIMIT: usize = 1 << 12;

/// `Σ_s exp(Σ_e βJ_e δ_{s_i, s_j})` over all two-state configurations.
///
/// Configurations are first grouped by how many aligned edges carry each
/// distinct coupling value; the grouped sum `Σ count · Π_j exp(βJ_j)^{n_j}`
/// is then evaluated in exact arithmetic on the rounded `exp(βJ_j)` when the
/// number of groups is small. Summing `2^{|V|}` unit-modulus terms in floating
/// point instead loses most digits whenever the result is close to zero.
pub fn potts_q2_direct(g: &Graph, couplings: &[Complex64]) -> Result<Complex64> {
    if couplings.len() != g.num_edges() {
        return Err(Error::mismatch("Potts couplings", g.num_edges(), couplings.len()));
    }
    if g.num_vertices() > ORACLE_MAX_BITS {
        return Err(Error::OracleTooLarge {
            what: "direct Potts sum",
            required_bits: g.num_vertices(),
            limit_bits: ORACLE_MAX_BITS,
        });
    }
    let mut values: Vec<Complex64> = Vec::new();
    let mut multiplicity: Vec<usize> = Vec::new();
    let class: Vec<usize> = couplings
        .iter()
        .map(|c| match values.iter().position(|v| v == c) {
            Some(j) => {
                multiplicity[j] += 1;
                j
            }
            None => {
                values.push(*c);
                multiplicity.push(1);
                values.len() - 1
            }
        })
        .collect();

    // Mixed-radix code of the per-value aligned counts.
    let mut radix = Vec::with_capacity(values.len());
    let mut span = 1u128;
    for &m in &multiplicity {
        radix.push(span);
        span = match span.checked_mul(m as u128 + 1) {
            Some(s) => s,
            None => return Ok(potts_q2_float(g, couplings)),
        };
    }
    let mut histogram: HashMap<u128, i64> = HashMap::new();
    for s in 0u64..(1u64 << g.num_vertices()) {
        let key: u128 = g
            .edges()
            .iter()
            .zip(&class)
            .filter(|((i, j), _)| (s >> i) & 1 == (s >> j) & 1)
            .map(|(_, &c)| radix[c])
            .sum();
        *histogram.entry(key).or_default() += 1;
    }
    let mut patterns: Vec<(u128, i64)> = histogram.into_iter().collect();
    patterns.sort_unstable();
    let counts_of = |key: u128| {
        multiplicity
            .iter()
            .zip(&radix)
            .map(move |(&m, &r)| ((key / r) % (m as u128 + 1)) as usize)
    };
    let weights: Vec<Complex64> = values.iter().map(|v| v.exp()).collect();

    let exact_weights: Option<Vec<_>> = weights.iter().map(|&u| exact_complex(u)).collect();
    if let (true, Some(exact_weights)) = (patterns.len() <= EXACT_PATTERN_LIMIT, exact_weights) {
        let powers: Vec<_> = exact_weights
            .iter()
            .zip(&multiplicity)
            .map(|(u, &m)| exact_powers(u, m))
            .collect();
        let mut total = (Rational::zero(), Rational::zero());
        for &(key, count) in &patterns {
            let mut term = (Rational::from_integer(BigInt::from(count)), Rational::zero());
            for (j, n) in counts_of(key).enumerate() {
                if n > 0 {
                    term = exact_mul(&term, &powers[j][n]);
                }
            }
            total.0 += term.0;
            total.1 += term.1;
        }
        if let Some(z) = exact_to_complex(&total) {
            return Ok(z);
        }
    }
    let terms: Vec<Complex64> = patterns
        .iter()
        .map(|&(key, count)| {
            counts_of(key)
                .zip(&weights)
                .fold(Complex64::new(count as f64, 0.0), |acc, (n, u)| acc * u.powu(n as u32))
        })
        .collect();
    Ok(pairwise_sum(&terms))
}

/// Plain floating-point sum, one exponential per configuration.
fn potts_q2_float(g: &Graph, couplings: &[Complex64]) -> Complex64 {
    let terms: Vec<Complex64> = (0u64..(1u64 << g.num_vertices()))
        .map(|s| {
            let exponent: Complex64 = g
                .edges()
                .iter()
                .zip(couplings)
                .filter(|((i, j), _)| (s >> i) & 1 == (s >> j) & 1)
                .map(|(_, c)| *c)
                .sum();
            exponent.exp()
        })
        .collect();
    pairwise_sum(&terms)
}

/// A two-state Potts model rewritten as a ±J Ising model with uniform `λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingReduction {
    pub bonds: BondConfig,
    pub lambda: Complex64,
    /// The reference Ising coupling `βJ₊ / 2`.
    pub half_coupling: Complex64,
    /// `exp(½ Σ_e βJ_e)` times the `±1` factors `cosh(βJ_e/2) / cosh(±βJ₊/2)`
    /// picked up when a halved coupling sits `iπ` away from `±βJ₊/2`.
    pub prefactor: Complex64,
}

/// Reduction with the first edge's coupling as the `w = 0` reference.
pub fn potts2_to_ising(couplings: &[Complex64]) -> Result<IsingReduction> {
    let reference = couplings.first().copied().unwrap_or_default();
    potts2_to_ising_with_reference(couplings, reference)
}

pub fn potts2_to_ising_with_reference(couplings: &[Complex64], reference: Complex64) -> Result<IsingReduction> {
    let half_ref = reference / 2.0;
    let cosh_ref = half_ref.cosh();
    if cosh_ref.norm() < MATCH_TOL {
        return Err(Error::BranchSingular {
            reason: format!("cosh(βJ/2) = 0 for reference coupling {reference}"),
        });
    }
    let lambda = half_ref.tanh();
    let scale = lambda.norm().max(1.0);
    let mut w = Gf2Vector::zeros(couplings.len());
    let mut sign = 1.0f64;
    for (e, c) in couplings.iter().enumerate() {
        let half = c / 2.0;
        let ch = half.cosh();
        if ch.norm() < MATCH_TOL {
            return Err(Error::BranchSingular {
                reason: format!("cosh(βJ/2) = 0 on edge {e} (βJ = {c})"),
            });
        }
        let t = half.tanh();
        if (t - lambda).norm() <= MATCH_TOL * scale {
            // w_e = 0
        } else if (t + lambda).norm() <= MATCH_TOL * scale {
            w.set(e, true);
        } else {
            return Err(Error::NotReducible {
                reason: format!("edge {e}: tanh(βJ/2) = {t} is not ±{lambda}"),
            });
        }
        let ratio = ch / cosh_ref;
        if (ratio.norm() - 1.0).abs() > 1e-6 || ratio.im.abs() > 1e-6 {
            return Err(Error::NotReducible {
                reason: format!("edge {e}: cosh ratio {ratio} is not ±1"),
            });
        }
        if ratio.re < 0.0 {
            sign = -sign;
        }
    }
    let half_sum: Complex64 = couplings.iter().sum::<Complex64>() / 2.0;
    Ok(IsingReduction {
        bonds: BondConfig(w),
        lambda,
        half_coupling: half_ref,
        prefactor: half_sum.exp() * sign,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct KauffmanEvaluation {
    /// `Z_Potts(q = 2)`, equal to the bracket up to `c(A, {b_ij})`.
    pub value: Complex64,
    pub q: Complex64,
    pub reduction: IsingReduction,
    /// The QWGT `S(A_inc, dg(w), λ, 1)`.
    pub qwgt: Complex64,
    pub kernel_dim: usize,
    pub terms: u64,
}

impl KauffmanEvaluation {
    /// Always true: the normalisation constant is not computed.
    pub const BRACKET_UP_TO_CONSTANT: bool = true;
}

/// `Z_Potts(2) = prefactor · 2^{|V|} cosh(βJ₊/2)^{|E|} · S(A_inc, dg(w), λ, 1)`.
pub fn kauffman_q2_via_qwgt(a: &KauffmanVariable, cfg: &CrossingAssignment, cap: u64) -> Result<KauffmanEvaluation> {
    let couplings = kauffman_couplings(a, cfg);
    let plus_coupling = (-a.0.powi(4).inv()).ln();
    let reduction = potts2_to_ising_with_reference(&couplings, plus_coupling)?;
    let g = cfg.lattice();
    let counts = kernel_counts(&g.incidence_matrix(), &dg(reduction.bonds.bits()), cap)?;
    let qwgt = counts.evaluate(&reduction.lambda, &Complex64::new(1.0, 0.0));
    let ising_prefactor = Complex64::new(2.0, 0.0).powi(g.num_vertices() as i32)
        * Scalar::pow(&reduction.half_coupling.cosh(), g.num_edges());
    Ok(KauffmanEvaluation {
        value: reduction.prefactor * ising_prefactor * qwgt,
        q: q_of_a(a),
        reduction,
        qwgt,
        kernel_dim: counts.kernel_dim,
        terms: counts.terms,
    })
}
