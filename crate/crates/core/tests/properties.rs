use proptest::prelude::*;
use qwgt_lab::gf2::{Gf2Vector, DEFAULT_CAP};
use qwgt_lab::graph::{BondConfig, Graph};
use qwgt_lab::knot::{a_of_q, q_of_a, KauffmanVariable};
use qwgt_lab::scalar::{Complex64, Rational};
use qwgt_lab::spin_glass::{gibbs_probability, partition_kernel, partition_series, SpinConfig, SpinGlass};

fn multigraph(max_v: usize, max_e: usize) -> impl Strategy<Value = Graph> {
    (2..=max_v).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 1..n), 0..=max_e).prop_map(move |pairs| {
            let edges = pairs.into_iter().map(|(i, d)| (i, (i + d) % n)).collect();
            Graph::new(n, edges).unwrap()
        })
    })
}

fn with_bonds(max_v: usize, max_e: usize) -> impl Strategy<Value = (Graph, Gf2Vector)> {
    multigraph(max_v, max_e).prop_flat_map(|g| {
        let m = g.num_edges();
        (Just(g), prop::collection::vec(any::<bool>(), m).prop_map(|b| Gf2Vector::from_bools(&b)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gibbs_probabilities_sum_to_one((g, w) in with_bonds(8, 14), bj in 0.05f64..2.0) {
        let n = g.num_vertices();
        let inst = SpinGlass::from_beta_j(g, BondConfig(w), bj).unwrap();
        let total: f64 = (0..1u64 << n)
            .map(|s| gibbs_probability(&inst, &SpinConfig(Gf2Vector::from_word(s, n))).unwrap())
            .sum();
        prop_assert!((total - 1.0).abs() <= 1e-12, "sum {}", total);
    }

    #[test]
    fn relabelling_vertices_preserves_z((g, w) in with_bonds(9, 16), seed in any::<u64>()) {
        let n = g.num_vertices();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut state = seed;
        for i in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (state >> 33) as usize % (i + 1));
        }
        let lambda = Rational::new(5.into(), 13.into());
        let inst = SpinGlass::from_lambda(g.clone(), BondConfig(w.clone()), lambda).unwrap();
        let relabelled = inst.with_graph(g.relabel(&perm).unwrap(), BondConfig(w)).unwrap();
        prop_assert_eq!(
            partition_kernel(&inst, DEFAULT_CAP).unwrap().value,
            partition_kernel(&relabelled, DEFAULT_CAP).unwrap().value
        );
    }

    #[test]
    fn series_partial_sums_reach_exact_value((g, w) in with_bonds(7, 12)) {
        let lambda = Rational::new(8.into(), 17.into());
        let inst = SpinGlass::from_lambda(g.clone(), BondConfig(w), lambda).unwrap();
        let exact = partition_kernel(&inst, DEFAULT_CAP).unwrap().value;
        let s = partition_series(&inst, g.num_edges() + 3, DEFAULT_CAP).unwrap();
        prop_assert_eq!(s.partial_sums.last().unwrap(), &exact);
        prop_assert_eq!(s.exact.as_ref(), Some(&exact));
        // Each truncation adds exactly the next order's terms.
        let full = partition_series(&inst, g.num_edges(), DEFAULT_CAP).unwrap();
        for k in 0..=g.num_edges() {
            let shorter = partition_series(&inst, k, DEFAULT_CAP).unwrap();
            prop_assert_eq!(&shorter.partial_sums[k], &full.partial_sums[k]);
            prop_assert_eq!(shorter.exact.is_some(), k == g.num_edges());
        }
    }

    #[test]
    fn roots_of_q_round_trip(re in -8.0f64..8.0, im in -8.0f64..8.0) {
        let q = Complex64::new(re, im);
        let roots = a_of_q(q);
        prop_assert_eq!(roots.len(), 4);
        for r in roots {
            let back = q_of_a(&KauffmanVariable::new(r).unwrap());
            prop_assert!((back - q).norm() <= 1e-12 * q.norm().max(1.0), "{} -> {}", q, back);
        }
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let g = Graph::torus(4);
    let w = Gf2Vector::from_word(0x5a5a_3c3c, 32);
    let inst = SpinGlass::from_beta_j(g, BondConfig(w), 0.73f64).unwrap();
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| partition_kernel(&inst, DEFAULT_CAP).unwrap().value)
    };
    let one = run(1);
    for threads in [2, 3, 8] {
        assert_eq!(run(threads).to_bits(), one.to_bits());
    }
}
