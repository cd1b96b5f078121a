use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use itertools::Itertools;
use rayon::prelude::*;

use super::{FrWitness, MvspError, Subspace};
use crate::scalar::{Fp, Mat};
use crate::symbolic::SymbolicMatrix;

pub const DEFAULT_SUBSPACE_CAP: usize = 5000;

/// Number of subspaces of GF(q)^n (sum of Gaussian binomials).
pub fn count_subspaces(q: u64, n: usize) -> u128 {
    let q = q as u128;
    let mut total = 0u128;
    for k in 0..=n {
        let mut num = 1u128;
        let mut den = 1u128;
        for i in 0..k {
            num = num.saturating_mul(q.saturating_pow((n - i) as u32).saturating_sub(1));
            den = den.saturating_mul(q.saturating_pow((i + 1) as u32).saturating_sub(1));
        }
        if num == u128::MAX {
            return u128::MAX;
        }
        total = total.saturating_add(num / den);
    }
    total
}

/// Every subspace of GF(p)^n as a reduced echelon basis, ordered by dimension
/// and then lexicographically. Cached per `(p, n)`.
pub fn all_subspaces(field: Fp, n: usize, cap: usize) -> Result<Arc<Vec<Subspace>>, MvspError> {
    let needed = count_subspaces(field.p(), n);
    if needed > cap as u128 {
        return Err(MvspError::EnumerationCapExceeded { needed, cap });
    }
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize), Arc<Vec<Subspace>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&(field.p(), n)) {
        return Ok(v.clone());
    }
    let q = field.p();
    let mut out = Vec::with_capacity(needed as usize);
    for k in 0..=n {
        for pivots in (0..n).combinations(k) {
            let free: Vec<(usize, usize)> =
                (0..k).flat_map(|r| ((pivots[r] + 1)..n).filter(|c| !pivots.contains(c)).map(move |c| (r, c))).collect();
            let total = q.pow(free.len() as u32);
            for code in 0..total {
                let mut m = Mat::zeros(field, k, n);
                for (r, &c) in pivots.iter().enumerate() {
                    m.set(r, c, 1);
                }
                let mut x = code;
                for &(r, c) in &free {
                    m.set(r, c, x % q);
                    x /= q;
                }
                out.push(Subspace { basis: m });
            }
        }
    }
    out.sort_by_key(|s| s.encoding());
    let arc = Arc::new(out);
    cache.lock().unwrap().insert((field.p(), n), arc.clone());
    Ok(arc)
}

/// Result of the exhaustive MVSP search.
#[derive(Clone, Debug)]
pub struct ExhaustiveResult {
    pub witness: FrWitness,
    pub u: Subspace,
    pub v: Subspace,
    /// `2n - dim U - dim V`, the nc-rank.
    pub value: usize,
    /// Every optimal `U` met during the search (only when requested).
    pub optimal_us: Vec<Subspace>,
}

/// Minimize `2n - dim U - dim V` over pairs with `A_k(U, V) = 0` by trying
/// every `U`; for each, the largest admissible `V` is a kernel.
///
/// With `want_dominant` the optimum with the largest `U` is returned (it is
/// unique and contains every optimal `U`); otherwise the lexicographically
/// first optimal `U`.
pub fn mvsp_exhaustive(a: &SymbolicMatrix, want_dominant: bool, cap: usize) -> Result<ExhaustiveResult, MvspError> {
    mvsp_exhaustive_impl(a, want_dominant, cap, false)
}

pub(crate) fn mvsp_exhaustive_impl(
    a: &SymbolicMatrix,
    want_dominant: bool,
    cap: usize,
    collect: bool,
) -> Result<ExhaustiveResult, MvspError> {
    let a = a.padded_square();
    let n = a.n();
    let f = a.field();
    let subspaces = all_subspaces(f, n, cap)?;
    let stacked_rank = |u: &Subspace| -> usize {
        if u.dim() == 0 {
            return 0;
        }
        let mut st = Mat::zeros(f, 0, n);
        for ak in a.terms() {
            st = st.vstack(&u.basis().mul(ak));
        }
        st.rank()
    };
    // value(U) = n - dim U + rank(stack U A_k)
    let values: Vec<usize> = subspaces.par_iter().map(|u| n - u.dim() + stacked_rank(u)).collect();
    let best = *values.iter().min().expect("at least the zero subspace");
    let optimal: Vec<usize> = (0..subspaces.len()).filter(|&i| values[i] == best).collect();
    let pick = if want_dominant {
        let maxdim = optimal.iter().map(|&i| subspaces[i].dim()).max().unwrap();
        let top: Vec<usize> = optimal.iter().copied().filter(|&i| subspaces[i].dim() == maxdim).collect();
        assert_eq!(top.len(), 1, "dominant optimum must be unique");
        top[0]
    } else {
        optimal[0]
    };
    let u = subspaces[pick].clone();
    let v = if u.dim() == 0 {
        Subspace::full(f, n)
    } else {
        let mut st = Mat::zeros(f, 0, n);
        for ak in a.terms() {
            st = st.vstack(&u.basis().mul(ak));
        }
        Subspace::span(&st.kernel())
    };
    let witness = FrWitness::from_subspaces(&u, &v);
    debug_assert_eq!(witness.value(), best);
    let optimal_us = if collect { optimal.iter().map(|&i| subspaces[i].clone()).collect() } else { vec![] };
    Ok(ExhaustiveResult { witness, u, v, value: best, optimal_us })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3(p: u64) -> SymbolicMatrix {
        let f = Fp::new(p).unwrap();
        SymbolicMatrix::from_triples(
            f,
            3,
            3,
            &[vec![(0, 1, 1), (1, 0, -1)], vec![(0, 2, 1), (2, 0, -1)], vec![(1, 2, 1), (2, 1, -1)]],
        )
    }

    #[test]
    fn subspace_counts() {
        assert_eq!(count_subspaces(2, 3), 16);
        assert_eq!(count_subspaces(3, 4), 212);
        let f = Fp::new(3).unwrap();
        assert_eq!(all_subspaces(f, 4, 5000).unwrap().len(), 212);
        let f2 = Fp::new(65521).unwrap();
        assert!(matches!(all_subspaces(f2, 3, 5000), Err(MvspError::EnumerationCapExceeded { .. })));
    }

    #[test]
    fn k3_over_gf2() {
        let a = k3(2);
        let res = mvsp_exhaustive(&a, true, 5000).unwrap();
        assert_eq!(res.value, 3);
        assert_eq!(res.u.dim(), 3);
        assert_eq!(res.v.dim(), 0);
        assert!(res.witness.verify(&a));
    }

    #[test]
    fn zero_and_identity() {
        let f = Fp::new(3).unwrap();
        let zero = SymbolicMatrix::from_triples(f, 3, 3, &[vec![]]);
        let res = mvsp_exhaustive(&zero, true, 5000).unwrap();
        assert_eq!((res.value, res.u.dim(), res.v.dim()), (0, 3, 3));
        let id = SymbolicMatrix::from_triples(f, 3, 3, &[vec![(0, 0, 1), (1, 1, 1), (2, 2, 1)]]);
        let res = mvsp_exhaustive(&id, true, 5000).unwrap();
        assert_eq!((res.value, res.u.dim(), res.v.dim()), (3, 3, 0));
    }

    #[test]
    fn dominant_contains_every_optimum() {
        let f = Fp::new(3).unwrap();
        let a = SymbolicMatrix::from_triples(f, 3, 3, &[vec![(0, 0, 1)], vec![(0, 1, 1), (1, 2, 1)]]);
        let res = mvsp_exhaustive_impl(&a, true, 5000, true).unwrap();
        assert!(res.optimal_us.len() > 1);
        for u in &res.optimal_us {
            assert!(res.u.contains(u));
        }
    }

    #[test]
    fn skew_dominant_has_u_containing_v() {
        for p in [2, 3, 5] {
            let a = k3(p);
            let res = mvsp_exhaustive(&a, true, 5000).unwrap();
            assert!(res.u.contains(&res.v));
        }
    }
}
