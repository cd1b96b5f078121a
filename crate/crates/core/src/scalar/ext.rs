use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;

use super::Field;

const ZERO: u32 = u32::MAX;

/// GF(q^k) with elements stored as discrete logs of a primitive element.
/// Addition goes through a Zech-logarithm table.
///
/// Only used internally: random substitution over GF(2) or GF(3) fails far too
/// often, so the randomized routines draw from an extension of the instance field.
#[derive(Debug)]
pub struct ExtField {
    q: u64,
    k: u32,
    order: u64,
    /// exp[i] = packed base-q digits of x^i
    exp: Vec<u32>,
    /// log[v] for packed v != 0
    log: Vec<u32>,
    /// zech[i] = log(1 + x^i), or ZERO
    zech: Vec<u32>,
    half: u32,
}

impl ExtField {
    /// Smallest extension of GF(q) with at least `min_order` elements.
    pub fn with_min_order(q: u64, min_order: u64) -> Arc<ExtField> {
        static CACHE: OnceLock<Mutex<HashMap<(u64, u64), Arc<ExtField>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap();
        guard
            .entry((q, min_order))
            .or_insert_with(|| {
                let mut k = 1u32;
                while q.pow(k) < min_order {
                    k += 1;
                }
                Arc::new(ExtField::new(q, k))
            })
            .clone()
    }

    pub fn new(q: u64, k: u32) -> ExtField {
        assert!(super::is_prime(q));
        let order = q.pow(k);
        assert!(order < (1 << 24), "extension field too large");
        let m = (order - 1) as usize;
        let (exp, log) = primitive_tables(q, k, order);
        let mut zech = vec![ZERO; m];
        for (i, z) in zech.iter_mut().enumerate() {
            // 1 + x^i: add 1 to digit 0
            let v = exp[i] as u64;
            let d0 = v % q;
            let w = v - d0 + (d0 + 1) % q;
            if w != 0 {
                *z = log[w as usize];
            }
        }
        let half = if q == 2 { 0 } else { (m / 2) as u32 };
        ExtField { q, k, order, exp, log, zech, half }
    }

    pub fn base(&self) -> u64 {
        self.q
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    /// Packed base-q digit representation of an element.
    pub fn to_packed(&self, a: u32) -> u64 {
        if a == ZERO {
            0
        } else {
            self.exp[a as usize] as u64
        }
    }

    pub fn from_packed(&self, v: u64) -> u32 {
        if v == 0 {
            ZERO
        } else {
            self.log[v as usize]
        }
    }

    #[inline]
    fn m(&self) -> u32 {
        (self.order - 1) as u32
    }
}

fn primitive_tables(q: u64, k: u32, order: u64) -> (Vec<u32>, Vec<u32>) {
    let m = (order - 1) as usize;
    let ku = k as usize;
    // candidate monic f = x^k + sum c_i x^i, c_0 != 0
    let mut coeffs = vec![0u64; ku];
    let mut idx: u64 = 0;
    loop {
        idx += 1;
        let mut t = idx;
        for c in coeffs.iter_mut() {
            *c = t % q;
            t /= q;
        }
        assert!(t == 0, "no primitive polynomial found");
        if coeffs[0] == 0 {
            continue;
        }
        let mut exp = vec![0u32; m];
        let mut log = vec![u32::MAX; order as usize];
        let mut cur = vec![0u64; ku];
        cur[0] = 1;
        let mut ok = true;
        for i in 0..m {
            let packed = cur.iter().rev().fold(0u64, |acc, &d| acc * q + d);
            if i > 0 && packed == 1 {
                ok = false;
                break;
            }
            exp[i] = packed as u32;
            log[packed as usize] = i as u32;
            // cur *= x mod f
            let top = cur[ku - 1];
            for j in (1..ku).rev() {
                cur[j] = cur[j - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for j in 0..ku {
                    cur[j] = (cur[j] + (q - top) * coeffs[j]) % q;
                }
            }
        }
        if ok {
            let packed = cur.iter().rev().fold(0u64, |acc, &d| acc * q + d);
            if packed == 1 {
                return (exp, log);
            }
        }
    }
}

impl Field for ExtField {
    type Elem = u32;

    #[inline]
    fn zero(&self) -> u32 {
        ZERO
    }
    #[inline]
    fn one(&self) -> u32 {
        0
    }
    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        if a == ZERO {
            return b;
        }
        if b == ZERO {
            return a;
        }
        let m = self.m();
        let d = if b >= a { b - a } else { b + m - a };
        let z = self.zech[d as usize];
        if z == ZERO {
            return ZERO;
        }
        let s = a as u64 + z as u64;
        (s % m as u64) as u32
    }
    #[inline]
    fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }
    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        if a == ZERO || b == ZERO {
            return ZERO;
        }
        ((a as u64 + b as u64) % self.m() as u64) as u32
    }
    #[inline]
    fn neg(&self, a: u32) -> u32 {
        if a == ZERO {
            return ZERO;
        }
        ((a as u64 + self.half as u64) % self.m() as u64) as u32
    }
    fn inv(&self, a: u32) -> Option<u32> {
        if a == ZERO {
            None
        } else {
            Some((self.m() - a) % self.m())
        }
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        let v = rng.gen_range(0..self.order);
        if v == 0 {
            ZERO
        } else {
            (v - 1) as u32
        }
    }
    fn embed(&self, v: u64) -> u32 {
        self.from_packed(v % self.q)
    }
    fn order(&self) -> u64 {
        self.order
    }
    fn element(&self, idx: u64) -> u32 {
        let idx = idx % self.order;
        if idx == 0 {
            ZERO
        } else {
            (idx - 1) as u32
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rng_from_seed, Fp};

    #[test]
    fn small_extension_axioms() {
        for (q, k) in [(2u64, 4u32), (3, 3), (5, 2)] {
            let f = ExtField::new(q, k);
            let mut rng = rng_from_seed(q);
            for _ in 0..2000 {
                let a = f.random(&mut rng);
                let b = f.random(&mut rng);
                let c = f.random(&mut rng);
                assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                assert_eq!(f.add(a, f.neg(a)), f.zero());
                if a != f.zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
                }
            }
        }
    }

    #[test]
    fn prime_subfield_embeds() {
        let f = ExtField::new(5, 3);
        let p = Fp::new(5).unwrap();
        for a in 0..5 {
            for b in 0..5 {
                assert_eq!(f.add(f.embed(a), f.embed(b)), f.embed(p.add(a, b)));
                assert_eq!(f.mul(f.embed(a), f.embed(b)), f.embed(p.mul(a, b)));
            }
        }
    }

    #[test]
    fn picks_large_enough_degree() {
        let f = ExtField::with_min_order(2, 1 << 15);
        assert_eq!(f.degree(), 15);
        let g = ExtField::with_min_order(3, 1 << 15);
        assert_eq!(g.degree(), 10);
    }
}
