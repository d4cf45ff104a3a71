//! Fully classical protocols: randomized equality tests, the one-bit
//! correlated-coin simulation, and the zero-communication faking strategy.

pub mod epr;
pub mod equality;
pub mod fake;
pub mod field;

pub use epr::{agreement_density, extension_weight_violations, EprInputs, EprOneBit};
pub use equality::{
    fingerprint_collision_count, shared_randomness_verdict_counts, EqualityVerdict,
    FingerprintEquality, SharedRandomnessEquality,
};
pub use fake::{fake_dj_agreement_counts, FakeDj};
pub use field::{is_prime, smallest_prime_above, Fp};
