use crate::apps::{brute_bipartite, build_edmonds, build_tutte, random, GraphInstance};
use crate::degdet::{hungarian_deg_det, symmetric_hungarian, verify_profile, ProfileInput};
use crate::mvsp::{nc_rank, Solver};
use crate::ratfunc::Degree;
use crate::scalar::{derived_rng, Fp};
use crate::symbolic::{delta_ell_oracle, Substitution};

fn k3(p: u64) -> crate::symbolic::WeightedSymbolicMatrix {
    let g = GraphInstance { n: 3, edges: vec![(0, 1), (0, 2), (1, 2)], weights: vec![1, 1, 1] };
    build_tutte(Fp::new(p).expect("prime"), &g).expect("valid graph")
}

fn k3_gap(seed: u64) -> bool {
    let a = k3(65521);
    let mut rng = derived_rng(seed, 0);
    let rank = (0..4).map(|_| a.base.shrink(&Substitution::random(a.field(), 3, &mut rng)).map_or(0, |m| m.rank())).max();
    rank == Some(2) && nc_rank(&a.base, 8, &mut rng) == 3
}

fn k3_profile(seed: u64) -> bool {
    let a = k3(5);
    let mut rng = derived_rng(seed, 1);
    let Ok(prof) = symmetric_hungarian(&a, &Solver::default(), &mut rng) else { return false };
    let comm = delta_ell_oracle(&a, 3, 8, &mut rng);
    prof.finite_values() == vec![Some(0), Some(1), Some(2), Some(3)] && comm == Ok(Degree::NegInf)
}

fn bipartite_matches_brute(seed: u64) -> bool {
    let f = Fp::new(65521).expect("prime");
    (0..20u64).all(|i| {
        let mut rng = derived_rng(seed, 100 + i);
        let inst = random::bipartite(&mut rng, 1 + i as usize % 5, 0.5, (-10, 10));
        let Ok(a) = build_edmonds(f, &inst) else { return false };
        let Ok(prof) = hungarian_deg_det(&a, &Solver::default(), &mut rng) else { return false };
        let closed = verify_profile(&prof, ProfileInput::Weighted(&a), 4, &mut rng).ok;
        closed && (0..=inst.n).all(|l| brute_bipartite(&inst, l).ok() == Some(prof.values[l]))
    })
}

/// Small end-to-end checks; each entry is `(name, passed)`.
pub fn run(seed: u64) -> Vec<(String, bool)> {
    vec![
        ("K3 Tutte matrix: rank 2, nc-rank 3".to_string(), k3_gap(seed)),
        ("K3 over GF(5): Delta_3 = 3, delta_3 = -inf".to_string(), k3_profile(seed)),
        ("bipartite profiles equal brute force and verify".to_string(), bipartite_matches_brute(seed)),
    ]
}
