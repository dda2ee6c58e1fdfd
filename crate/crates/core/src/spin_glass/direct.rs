use super::{Evaluation, SpinConfig, SpinGlass};
use crate::error::{Error, Result};
use crate::graph::{BondConfig, Graph};
use crate::qwgt::pairwise_sum;
use crate::scalar::Scalar;

/// Largest `|V|` the direct Gibbs sum accepts.
pub const DIRECT_MAX_SPINS: usize = 24;

/// `H / J = -Σ_e q_e σ_i σ_j`.
pub fn energy<S: Scalar>(inst: &SpinGlass<S>, s: &SpinConfig) -> Result<i64> {
    bond_energy(inst.graph(), inst.bonds(), s)
}

pub(crate) fn bond_energy(graph: &Graph, bonds: &BondConfig, s: &SpinConfig) -> Result<i64> {
    if s.len() != graph.num_vertices() {
        return Err(Error::mismatch("spin configuration", graph.num_vertices(), s.len()));
    }
    Ok(-graph
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &(i, j))| bonds.sign(e) * s.spin(i) * s.spin(j))
        .sum::<i64>())
}

pub(crate) fn check_direct_guard(num_vertices: usize) -> Result<()> {
    if num_vertices > DIRECT_MAX_SPINS {
        return Err(Error::OracleTooLarge {
            what: "direct spin sum",
            required_bits: num_vertices,
            limit_bits: DIRECT_MAX_SPINS,
        });
    }
    Ok(())
}

/// Histogram of `H/J` over all `2^{|V|}` configurations, indexed by `H/J + offset`.
pub(crate) fn energy_histogram(
    num_vertices: usize,
    terms: &[(usize, usize, i64)],
    fields: &[i64],
    offset: i64,
) -> Vec<u64> {
    let mut hist = vec![0u64; 2 * offset as usize + 1];
    for word in 0u64..(1u64 << num_vertices) {
        let spin = |i: usize| 1 - 2 * ((word >> i) & 1) as i64;
        let mut h = 0i64;
        for &(i, j, q) in terms {
            h -= q * spin(i) * spin(j);
        }
        for (i, &f) in fields.iter().enumerate() {
            h -= f * spin(i);
        }
        hist[(h + offset) as usize] += 1;
    }
    hist
}

pub(crate) fn bond_terms(graph: &Graph, bonds: &BondConfig) -> Vec<(usize, usize, i64)> {
    graph
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &(i, j))| (i, j, bonds.sign(e)))
        .collect()
}

/// Weighted sum of a histogram produced with `bonds` unit couplings.
pub(crate) fn sum_histogram<S: Scalar>(inst: &SpinGlass<S>, hist: &[u64], bonds: usize) -> Result<S> {
    let offset = bonds as i64;
    let terms = hist
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(idx, &c)| Ok(S::from_i64(c as i64) * inst.boltzmann_factor(idx as i64 - offset, bonds)?))
        .collect::<Result<Vec<S>>>()?;
    Ok(pairwise_sum(&terms))
}

/// `Z = Σ_σ exp(-βH(σ))` over all `2^{|V|}` configurations.
pub fn partition_direct<S: Scalar>(inst: &SpinGlass<S>) -> Result<Evaluation<S>> {
    let g = inst.graph();
    check_direct_guard(g.num_vertices())?;
    let offset = g.num_edges() as i64;
    let hist = energy_histogram(g.num_vertices(), &bond_terms(g, inst.bonds()), &[], offset);
    Ok(Evaluation {
        value: sum_histogram(inst, &hist, g.num_edges())?,
        terms: 1u128 << g.num_vertices(),
        kernel_dim: None,
    })
}

/// `P(s) = exp(-βH(s)) / Z`.
pub fn gibbs_probability<S: Scalar>(inst: &SpinGlass<S>, s: &SpinConfig) -> Result<S> {
    let h = energy(inst, s)?;
    let z = partition_direct(inst)?.value;
    Ok(inst.boltzmann_factor(h, inst.graph().num_edges())? / z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::Gf2Vector;
    use crate::scalar::Rational;

    const LN2: f64 = std::f64::consts::LN_2;

    fn spins(s: &str) -> SpinConfig {
        SpinConfig(Gf2Vector::parse_bits(s).unwrap())
    }

    fn triangle(w: &str, bj: f64) -> SpinGlass<f64> {
        SpinGlass::from_beta_j(Graph::cycle(3), BondConfig(Gf2Vector::parse_bits(w).unwrap()), bj).unwrap()
    }

    #[test]
    fn energy_examples() {
        let edge = SpinGlass::from_beta_j(Graph::path(2), BondConfig::ferromagnetic(1), 1.0f64).unwrap();
        assert_eq!(energy(&edge, &spins("00")).unwrap(), -1);
        assert_eq!(energy(&edge, &spins("01")).unwrap(), 1);
        assert_eq!(energy(&triangle("111", 1.0), &spins("000")).unwrap(), 3);
        assert!(energy(&edge, &spins("000")).is_err());
    }

    #[test]
    fn direct_examples() {
        let edge = SpinGlass::from_beta_j(Graph::path(2), BondConfig::ferromagnetic(1), LN2).unwrap();
        assert!((partition_direct(&edge).unwrap().value - 5.0).abs() < 1e-13);
        assert!((partition_direct(&triangle("000", LN2)).unwrap().value - 19.0).abs() < 1e-12);
        assert!((partition_direct(&triangle("111", LN2)).unwrap().value - 12.25).abs() < 1e-12);
    }

    #[test]
    fn direct_rational_from_lambda() {
        let lambda = Rational::new(3.into(), 5.into());
        let ferro = SpinGlass::from_lambda(Graph::cycle(3), BondConfig::ferromagnetic(3), lambda.clone()).unwrap();
        assert_eq!(partition_direct(&ferro).unwrap().value, Rational::from_integer(19.into()));
        let anti = SpinGlass::from_lambda(Graph::cycle(3), BondConfig::antiferromagnetic(3), lambda).unwrap();
        assert_eq!(partition_direct(&anti).unwrap().value, Rational::new(49.into(), 4.into()));
    }

    #[test]
    fn direct_guard() {
        let big = SpinGlass::from_beta_j(Graph::path(25), BondConfig::ferromagnetic(24), 0.3f64).unwrap();
        assert!(matches!(partition_direct(&big), Err(Error::OracleTooLarge { .. })));
    }

    #[test]
    fn gibbs_examples() {
        let edge = SpinGlass::from_beta_j(Graph::path(2), BondConfig::ferromagnetic(1), LN2).unwrap();
        assert!((gibbs_probability(&edge, &spins("00")).unwrap() - 0.4).abs() < 1e-14);

        let hot = SpinGlass::from_lambda(Graph::cycle(3), BondConfig(Gf2Vector::parse_bits("010").unwrap()), Rational::from_integer(0.into()))
            .unwrap();
        for word in 0..8 {
            let s = SpinConfig(Gf2Vector::from_word(word, 3));
            assert_eq!(gibbs_probability(&hot, &s).unwrap(), Rational::new(1.into(), 8.into()));
        }

        let inst = triangle("011", 0.7);
        let mut total = 0.0;
        for word in 0..8u64 {
            let s = SpinConfig(Gf2Vector::from_word(word, 3));
            let flipped = SpinConfig(Gf2Vector::from_word(!word & 7, 3));
            let p = gibbs_probability(&inst, &s).unwrap();
            assert!((p - gibbs_probability(&inst, &flipped).unwrap()).abs() < 1e-15);
            total += p;
        }
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_graphs() {
        let empty = SpinGlass::from_beta_j(Graph::new(0, vec![]).unwrap(), BondConfig::ferromagnetic(0), 0.5f64).unwrap();
        assert_eq!(partition_direct(&empty).unwrap().value, 1.0);
        let isolated = SpinGlass::from_beta_j(Graph::new(4, vec![]).unwrap(), BondConfig::ferromagnetic(0), 0.5f64).unwrap();
        assert_eq!(partition_direct(&isolated).unwrap().value, 16.0);
    }
}
