use ncdeg_core::apps::{
    brute_bipartite, brute_matroid_intersection, build_edmonds, build_matroid_intersection, build_tutte, random,
    BipartiteInstance,
};
use ncdeg_core::degdet::{
    deg_subdet, hungarian_deg_det, optimize_q, random_feasible_dual, symmetric_hungarian, verify_profile, ProfileInput,
};
use ncdeg_core::mvsp::Solver;
use ncdeg_core::ratfunc::Degree;
use ncdeg_core::scalar::{rng_from_seed, ExactRational, Fp};
use proptest::prelude::*;

fn bipartite_instance() -> impl Strategy<Value = BipartiteInstance> {
    (1usize..=4)
        .prop_flat_map(|n| {
            let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
            (Just(n), proptest::sample::subsequence(cells.clone(), 0..=cells.len()), proptest::collection::vec(-6i64..=6, n * n))
        })
        .prop_map(|(n, edges, w)| {
            let weights = w[..edges.len()].to_vec();
            BipartiteInstance { n, edges, weights }
        })
}

fn big() -> Fp {
    Fp::new(65521).unwrap()
}

/// `Delta_{l-1} + Delta_{l+1} <= 2 Delta_l` wherever the values are finite,
/// and the finite values form a prefix.
fn concave(values: &[Degree]) -> bool {
    let fin: Vec<i64> = values.iter().map_while(|v| v.finite()).collect();
    values[fin.len()..].iter().all(|v| !v.is_finite()) && fin.windows(3).all(|w| w[0] + w[2] <= 2 * w[1])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hungarian_equals_brute_force(inst in bipartite_instance(), seed in any::<u64>()) {
        let a = build_edmonds(big(), &inst).unwrap();
        let prof = hungarian_deg_det(&a, &Solver::default(), &mut rng_from_seed(seed)).unwrap();
        for l in 0..=inst.n {
            prop_assert_eq!(prof.values[l], brute_bipartite(&inst, l).unwrap(), "ell = {}", l);
        }
        prop_assert!(prof.within_bound());
        prop_assert!(concave(&prof.values));
    }

    #[test]
    fn general_and_hungarian_agree(inst in bipartite_instance(), seed in any::<u64>()) {
        let a = build_edmonds(big(), &inst).unwrap();
        let h = hungarian_deg_det(&a, &Solver::default(), &mut rng_from_seed(seed)).unwrap();
        let g = deg_subdet(&a.to_rational(), &Solver::default(), &mut rng_from_seed(seed)).unwrap();
        prop_assert_eq!(&h.values, &g.values);
        prop_assert!(g.within_bound());
        let rational = a.to_rational();
        let rep = verify_profile(&g, ProfileInput::General(&rational), 4, &mut rng_from_seed(seed));
        prop_assert!(rep.ok, "{:?}", rep.issues);
    }

    #[test]
    fn weak_duality(inst in bipartite_instance(), seed in any::<u64>(), spread in 1i64..=12) {
        let a = build_edmonds(big(), &inst).unwrap();
        let mut rng = rng_from_seed(seed);
        let prof = hungarian_deg_det(&a, &Solver::default(), &mut rng).unwrap();
        for _ in 0..8 {
            let d = random_feasible_dual(&a, spread, &mut rng);
            for l in 0..=inst.n {
                if let Degree::Finite(v) = prof.values[l] {
                    prop_assert!(ExactRational::from_int(v) <= d.objective(l));
                }
            }
        }
    }

    #[test]
    fn optimize_q_is_a_maximizer(inst in bipartite_instance(), seed in any::<u64>()) {
        let a = build_edmonds(big(), &inst).unwrap();
        let mut rng = rng_from_seed(seed);
        let prof = hungarian_deg_det(&a, &Solver::default(), &mut rng).unwrap();
        for l in 0..=prof.rank() {
            let u = optimize_q(&a, l, &Solver::default(), &mut rng).unwrap();
            prop_assert_eq!(u.iter().sum::<i64>(), l as i64);
            prop_assert!(u.iter().all(|&x| x == 0 || x == 1));
            let value: i64 = u.iter().zip(&inst.weights).map(|(x, w)| x * w).sum();
            prop_assert_eq!(Degree::Finite(value), prof.values[l]);
        }
    }

    #[test]
    fn symmetric_matches_general_hungarian(seed in any::<u64>(), n in 2usize..=5) {
        let mut rng = rng_from_seed(seed);
        let g = random::graph(&mut rng, n, 0.6, (-5, 5));
        let a = build_tutte(Fp::new(7).unwrap(), &g).unwrap();
        let s = symmetric_hungarian(&a, &Solver::default(), &mut rng).unwrap();
        let h = hungarian_deg_det(&a, &Solver::default(), &mut rng).unwrap();
        prop_assert_eq!(&s.values, &h.values);
        prop_assert!(concave(&s.values));
    }

    #[test]
    fn matroid_intersection_equals_brute_force(seed in any::<u64>(), n in 1usize..=3, m in 1usize..=5) {
        let f = Fp::new(5).unwrap();
        let mut rng = rng_from_seed(seed);
        let inst = random::matroid_pair(&mut rng, f, n, m, (-5, 5));
        let a = build_matroid_intersection(f, &inst).unwrap();
        let prof = hungarian_deg_det(&a, &Solver::default(), &mut rng).unwrap();
        for l in 0..=n {
            prop_assert_eq!(prof.values[l], brute_matroid_intersection(f, &inst, l).unwrap(), "ell = {}", l);
        }
    }
}

#[test]
fn empty_instance() {
    let inst = BipartiteInstance { n: 3, edges: vec![], weights: vec![] };
    let a = build_edmonds(big(), &inst).unwrap();
    let prof = hungarian_deg_det(&a, &Solver::default(), &mut rng_from_seed(0)).unwrap();
    assert_eq!(prof.finite_values(), vec![Some(0), None, None, None]);
    assert!(prof.neg_inf.is_some());
}
