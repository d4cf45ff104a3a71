//! Faking the matching-outputs relation without communication.
//!
//! With k shared random strings t_1..t_k, the parties output the inner
//! products a_i = x·t_i and b_i = y·t_i. Equal inputs always match; inputs
//! at distance n/2 are caught with a ≠ b only when some t_i separates them,
//! so they escape detection with probability exactly 2^−k.

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::runtime::{run_with_setup, Protocol, Runtime, SetupSpec, SharedSetup};

/// The inner-product faking strategy for the matching-outputs relation.
#[derive(Debug, Clone)]
pub struct FakeDj {
    /// Input length; a power of two, n = 2^k.
    pub n: usize,
    /// Output length and shared-string count.
    pub k: usize,
}

impl Protocol for FakeDj {
    type AliceIn = BitString;
    type BobIn = BitString;
    type AliceOut = BitString;
    type BobOut = BitString;

    fn name(&self) -> &'static str {
        "dj-fake"
    }

    fn setup_spec(&self) -> SetupSpec {
        SetupSpec {
            bit_strings: self.k,
            bit_string_len: self.n,
            ..SetupSpec::default()
        }
    }

    fn validate(&self, x: &BitString, y: &BitString) -> Result<()> {
        if self.k == 0 || self.n == 0 {
            return Err(Error::Argument("need positive n and k".into()));
        }
        if x.len() != self.n || y.len() != self.n {
            return Err(Error::Argument(format!(
                "inputs must both have length {}",
                self.n
            )));
        }
        Ok(())
    }

    fn promise(&self, x: &BitString, y: &BitString) -> Option<bool> {
        let delta = x.hamming_distance(y).ok()?;
        Some(delta == 0 || delta == self.n / 2)
    }

    fn zero_communication(&self) -> bool {
        true
    }

    fn main(
        &self,
        rt: &mut Runtime,
        x: &BitString,
        y: &BitString,
    ) -> Result<(BitString, BitString)> {
        if rt.shared_bit_strings().len() != self.k
            || rt.shared_bit_strings().iter().any(|t| t.len() != self.n)
        {
            return Err(Error::Argument(format!(
                "setup must hold exactly {} shared strings of length {}",
                self.k, self.n
            )));
        }
        let mut a = BitString::zeros(0);
        let mut b = BitString::zeros(0);
        for i in 0..self.k {
            let t = rt.shared_bit_string(i)?.clone();
            a.push(x.inner_product(&t)?);
            b.push(y.inner_product(&t)?);
        }
        Ok((a, b))
    }
}

/// Exhaustively enumerates all 2^(n·k) draws of the shared strings, running
/// the protocol against each; returns (draws with a = b, total draws).
pub fn fake_dj_agreement_counts(x: &BitString, y: &BitString, k: usize) -> Result<(u64, u64)> {
    let n = x.len();
    if n * k > 24 {
        return Err(Error::Capacity(format!(
            "enumerating 2^{} setups is beyond the desk-scale bound",
            n * k
        )));
    }
    let protocol = FakeDj { n, k };
    let total = 1u64 << (n * k);
    let mut matches = 0u64;
    for draw in 0..total {
        let strings: Vec<BitString> = (0..k)
            .map(|i| BitString::from_index(((draw >> (i * n)) & ((1 << n) - 1)) as usize, n))
            .collect();
        let outcome = run_with_setup(&protocol, x, y, SharedSetup::with_bits(strings), 0)?;
        if outcome.a == outcome.b {
            matches += 1;
        }
    }
    Ok((matches, total))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn equal_inputs_always_match() {
        let x = bs("0110");
        let (matches, total) = fake_dj_agreement_counts(&x, &x, 2).unwrap();
        assert_eq!(matches, total);
    }

    /// Oracle: per-string agreement is x·t = y·t ⟺ (x⊕y)·t = 0, which for
    /// x ≠ y holds for exactly half of all strings; k independent strings
    /// multiply. Computed here by direct counting, independent of the
    /// protocol path.
    #[test]
    fn agreement_fraction_matches_independent_count() {
        let x = bs("0000");
        let y = bs("0011");
        let diff = x.xor(&y).unwrap();
        let n = 4;
        let per_string = (0..(1usize << n))
            .filter(|&t| BitString::from_index(t, n).inner_product(&diff).unwrap() == 0)
            .count() as u64;
        assert_eq!(per_string, 8); // half of 16

        let (matches, total) = fake_dj_agreement_counts(&x, &y, 2).unwrap();
        assert_eq!(total, 256);
        assert_eq!(matches, per_string * per_string);
        assert_eq!(matches, 64); // fraction 1/4 = 2^-2
    }

    #[test]
    fn detection_escape_goes_down_as_two_to_minus_k() {
        // distance n/2 pair at n = 8: exact escape fraction 2^-k where the
        // 2^(nk) draws are enumerable, seeded sampling at k = 3
        let x = bs("00000000");
        let y = bs("00001111");
        for k in 1..=2usize {
            let (matches, total) = fake_dj_agreement_counts(&x, &y, k).unwrap();
            assert_eq!(matches, total >> k, "k={k}");
        }

        let protocol = FakeDj { n: 8, k: 3 };
        let trials = 100_000u64;
        let mut matches = 0u64;
        for seed in 0..trials {
            let outcome = crate::runtime::run(&protocol, &x, &y, seed).unwrap();
            if outcome.a == outcome.b {
                matches += 1;
            }
        }
        let expected = 0.125;
        let se = (expected * (1.0 - expected) / trials as f64).sqrt();
        let estimate = matches as f64 / trials as f64;
        assert!(
            (estimate - expected).abs() <= 5.0 * se,
            "k=3: {estimate} vs {expected}"
        );
    }

    #[test]
    fn protocol_uses_no_communication_and_records_promise() {
        let protocol = FakeDj { n: 4, k: 2 };
        let outcome = crate::runtime::run(&protocol, &bs("0000"), &bs("0011"), 99).unwrap();
        assert_eq!(outcome.channel.classical_bits_sent(), 0);
        assert_eq!(outcome.channel.qubits_sent(), 0);
        assert_eq!(outcome.promise, Some(true)); // Δ = 2 = n/2
        let off = crate::runtime::run(&protocol, &bs("0000"), &bs("0111"), 99).unwrap();
        assert_eq!(off.promise, Some(false)); // Δ = 3
    }

    #[test]
    fn shape_mismatch_is_an_argument_error() {
        let protocol = FakeDj { n: 4, k: 2 };
        let setup = SharedSetup::with_bits(vec![bs("0101")]);
        assert!(matches!(
            run_with_setup(&protocol, &bs("0000"), &bs("0011"), setup, 0),
            Err(Error::Argument(_))
        ));
    }
}
