//! Finite-field and exact-rational scalars, plus dense linear algebra over them.

mod elem;
mod ext;
mod field;
pub mod matrix;
mod rational;

pub use elem::{ff_inv, random_elem, FieldElem};
pub use ext::ExtField;
pub use field::{Field, Fp};
pub use matrix::Mat;
pub use rational::ExactRational;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Default prime used when an instance does not name one.
pub const DEFAULT_PRIME: u64 = 65521;

/// The RNG used throughout the crate.
pub type Rng = ChaCha8Rng;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("attempted to invert zero")]
    ZeroInversion,
    #[error("{0} is not a prime below 2^32")]
    NotPrime(u64),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(u64, u64),
}

/// Seeded RNG for a top-level call.
pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream derived from a seed, used to keep parallel work deterministic.
pub fn derived_rng(seed: u64, stream: u64) -> Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
