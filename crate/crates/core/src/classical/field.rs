//! Prime search and prime-field evaluation for the fingerprint protocol.
//!
//! Sizes stay at desk scale (p below ten million), so deterministic trial
//! division and 64-bit modular arithmetic are exact and fast enough.

use crate::error::{Error, Result};

/// Largest prime the search will return.
pub const PRIME_SEARCH_CAP: u64 = 10_000_000;

/// Deterministic trial division up to √n.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// The smallest prime strictly larger than `t`. There is always one no
/// larger than 2t; that is verified on the way out rather than assumed.
pub fn smallest_prime_above(t: f64) -> Result<u64> {
    if !t.is_finite() || t < 1.0 {
        return Err(Error::Argument(format!("threshold {t} must be at least 1")));
    }
    if t > PRIME_SEARCH_CAP as f64 / 2.0 {
        return Err(Error::Capacity(format!(
            "prime search above {t} exceeds the cap of {PRIME_SEARCH_CAP}"
        )));
    }
    let mut candidate = t.floor() as u64 + 1;
    while !is_prime(candidate) {
        candidate += 1;
    }
    if candidate as f64 > 2.0 * t {
        return Err(Error::Internal(format!(
            "found {candidate}, beyond twice the threshold {t}"
        )));
    }
    Ok(candidate)
}

/// The field of integers modulo a prime `p`.
#[derive(Debug, Clone, Copy)]
pub struct Fp {
    p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Argument(format!("{p} is not prime")));
        }
        Ok(Fp { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Bits needed to write one field element: ⌈lg p⌉.
    pub fn element_bits(&self) -> usize {
        (64 - (self.p - 1).leading_zeros()) as usize
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        // p stays below 2^24-ish at desk scale, so the product fits u64
        (a * b) % self.p
    }

    /// Evaluates c₀ + c₁w + c₂w² + ⋯ by Horner's rule.
    pub fn eval_poly(&self, coeffs: &[u64], w: u64) -> u64 {
        let w = w % self.p;
        coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| self.add(self.mul(acc, w), c % self.p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: sieve of Eratosthenes.
    fn sieve(limit: usize) -> Vec<bool> {
        let mut prime = vec![true; limit + 1];
        prime[0] = false;
        if limit >= 1 {
            prime[1] = false;
        }
        let mut i = 2;
        while i * i <= limit {
            if prime[i] {
                let mut j = i * i;
                while j <= limit {
                    prime[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        prime
    }

    #[test]
    fn smallest_prime_examples() {
        assert_eq!(smallest_prime_above(4.0).unwrap(), 5);
        assert_eq!(smallest_prime_above(64.0).unwrap(), 67);
        assert_eq!(smallest_prime_above(1.0).unwrap(), 2);
        assert_eq!(smallest_prime_above(2.5).unwrap(), 3);
    }

    #[test]
    fn smallest_prime_matches_a_sieve_exhaustively() {
        let table = sieve(4096);
        for t in 1..2000u64 {
            let p = smallest_prime_above(t as f64).unwrap() as usize;
            assert!(table[p], "{p} not prime");
            for (q, &is_p) in table.iter().enumerate().take(p).skip(t as usize + 1) {
                assert!(!is_p, "skipped prime {q} above {t}");
            }
            assert!(p as u64 <= 2 * t, "{p} > 2·{t}");
        }
    }

    #[test]
    fn smallest_prime_rejects_bad_thresholds() {
        assert!(matches!(smallest_prime_above(0.5), Err(Error::Argument(_))));
        assert!(matches!(smallest_prime_above(1e9), Err(Error::Capacity(_))));
    }

    #[test]
    fn element_bits_counts_representation_width() {
        assert_eq!(Fp::new(67).unwrap().element_bits(), 7);
        assert_eq!(Fp::new(2).unwrap().element_bits(), 1);
        assert_eq!(Fp::new(257).unwrap().element_bits(), 9);
    }

    #[test]
    fn horner_matches_schoolbook_evaluation() {
        let field = Fp::new(67).unwrap();
        let coeffs = [1u64, 0, 1, 1, 0, 1];
        for w in 0..67 {
            // naive power accumulation as the independent route
            let mut expected = 0u64;
            let mut power = 1u64;
            for &c in &coeffs {
                expected = (expected + c * power) % 67;
                power = power * w % 67;
            }
            assert_eq!(field.eval_poly(&coeffs, w), expected);
        }
    }
}
