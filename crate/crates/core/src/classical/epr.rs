//! Classical one-bit simulation of the entangled correlated-coin task on
//! the restricted input range (0, 1).
//!
//! Shared setup: a uniform bit c and a uniform real r in (0,1). Alice
//! outputs a = c and sends the single bit `[r < x]`. Knowing y and r, that
//! bit tells Bob whether r lies between the two inputs; if it does not he
//! outputs b = c, otherwise he flips to 1−c with probability sin(2|y−r|).
//! Integrating over r gives P(a=b) = ½ + ½cos(2(y−x)) = cos²(x−y), the
//! same correlation the entangled measurement produces, at the cost of one
//! classical bit.

use rand::Rng;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::runtime::{PartyId, Protocol, Runtime, SetupSpec};

/// Angle pair for the restricted simulation; both strictly inside (0, 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EprInputs {
    pub x: f64,
    pub y: f64,
}

impl EprInputs {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        for v in [x, y] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::Argument(format!(
                    "input {v} must lie strictly inside (0, 1)"
                )));
            }
        }
        Ok(EprInputs { x, y })
    }
}

/// The one-bit simulation as a runnable protocol.
#[derive(Debug, Clone, Default)]
pub struct EprOneBit;

impl Protocol for EprOneBit {
    type AliceIn = f64;
    type BobIn = f64;
    type AliceOut = u8;
    type BobOut = u8;

    fn name(&self) -> &'static str {
        "epr-classical"
    }

    fn setup_spec(&self) -> SetupSpec {
        SetupSpec {
            bit_strings: 1,
            bit_string_len: 1,
            reals: vec![(0.0, 1.0)],
            ..SetupSpec::default()
        }
    }

    fn validate(&self, x: &f64, y: &f64) -> Result<()> {
        EprInputs::new(*x, *y).map(|_| ())
    }

    fn main(&self, rt: &mut Runtime, x: &f64, y: &f64) -> Result<(u8, u8)> {
        let c = rt.shared_bit_string(0)?.bit(0);
        let r = rt.shared_real(0)?;

        // Alice: output the shared coin, tell Bob on which side of her
        // input the shared real fell.
        let a = c;
        let r_below_x = r < *x;
        rt.send_bits(PartyId::Alice, &BitString::from_bits(&[r_below_x as u8])?)?;

        // Bob: r lies between the inputs exactly when it is below one and
        // not the other. (Ties r = x or r = y carry zero probability for a
        // continuous draw; they follow the transmitted predicate.)
        let message = rt.recv_bits(PartyId::Bob)?;
        let between = (message.bit(0) == 1) != (r < *y);
        let b = if between {
            let flip_probability = (2.0 * (y - r).abs()).sin();
            if rt.rng(PartyId::Bob).gen::<f64>() < flip_probability {
                1 - c
            } else {
                c
            }
        } else {
            c
        };
        Ok((a, b))
    }
}

/// Conditional agreement probability of the protocol given that the shared
/// real landed at `r`: 1 outside the open interval between the inputs,
/// 1 − sin(2|y−r|) inside. Integrating this density over r ∈ (0,1) is the
/// quadrature route to P(a=b).
pub fn agreement_density(x: f64, y: f64, r: f64) -> f64 {
    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
    if r > lo && r < hi {
        1.0 - (2.0 * (y - r).abs()).sin()
    } else {
        1.0
    }
}

/// A point where the sin-based flip weight leaves [0, 1].
#[derive(Debug, Clone, Copy)]
pub struct WeightViolation {
    pub x: f64,
    pub y: f64,
    pub r: f64,
    pub weight: f64,
}

/// Diagnostic for widening the input range to (0, `upper`): scans a grid of
/// input pairs and interval points and reports everywhere the flip weight
/// sin(2|y−r|) stops being a probability. Empty for `upper` ≤ 1; decidedly
/// not empty once the range approaches π. No repair is attempted.
pub fn extension_weight_violations(upper: f64, steps: usize) -> Result<Vec<WeightViolation>> {
    if !upper.is_finite() || upper <= 0.0 || steps < 2 {
        return Err(Error::Argument(
            "need a positive range and at least 2 steps".into(),
        ));
    }
    let mut violations = Vec::new();
    let grid = |i: usize| (i + 1) as f64 * upper / (steps + 1) as f64;
    for ix in 0..steps {
        for iy in 0..steps {
            let (x, y) = (grid(ix), grid(iy));
            let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
            for ir in 0..steps {
                let r = lo + (hi - lo) * (ir + 1) as f64 / (steps + 1) as f64;
                let weight = (2.0 * (y - r).abs()).sin();
                if !(0.0..=1.0).contains(&weight) {
                    violations.push(WeightViolation { x, y, r, weight });
                }
            }
        }
    }
    Ok(violations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::runtime::{run, run_with_setup, SharedSetup};

    /// Explicit setup with a chosen coin and real.
    fn setup_with(c: u8, r: f64) -> SharedSetup {
        SharedSetup {
            shared_reals: vec![r],
            ..SharedSetup::with_bits(vec![BitString::from_bits(&[c]).unwrap()])
        }
    }

    #[test]
    fn equal_inputs_agree_for_every_draw() {
        for c in [0u8, 1] {
            for i in 1..40 {
                let r = i as f64 / 40.0;
                let outcome =
                    run_with_setup(&EprOneBit, &0.37, &0.37, setup_with(c, r), 5).unwrap();
                assert_eq!(outcome.a, outcome.b);
                assert_eq!(outcome.a, c);
            }
        }
    }

    #[test]
    fn outside_the_interval_bob_copies_the_coin() {
        for c in [0u8, 1] {
            for r in [0.05, 0.95] {
                let outcome = run_with_setup(&EprOneBit, &0.3, &0.6, setup_with(c, r), 5).unwrap();
                assert_eq!(outcome.a, c);
                assert_eq!(outcome.b, c);
            }
        }
    }

    #[test]
    fn exactly_one_classical_bit_is_sent() {
        let outcome = run(&EprOneBit, &0.2, &0.7, 42).unwrap();
        assert_eq!(outcome.channel.classical_bits_sent(), 1);
        assert_eq!(outcome.channel.qubits_sent(), 0);
    }

    #[test]
    fn inputs_outside_the_open_interval_are_rejected() {
        for (x, y) in [(0.0, 0.5), (0.5, 1.0), (-0.1, 0.5), (0.5, 1.7)] {
            assert!(matches!(
                run(&EprOneBit, &x, &y, 0),
                Err(Error::Argument(_))
            ));
        }
    }

    #[test]
    fn monte_carlo_agreement_matches_cosine_squared() {
        // oracle: cos²(x−y) evaluated numerically
        let (x, y) = (0.2f64, 0.7f64);
        let expected = (x - y).cos().powi(2);
        assert!((expected - 0.770151).abs() < 1e-6);

        let trials = 1_000_000u64;
        let mut agree = 0u64;
        for trial in 0..trials {
            let outcome = run(&EprOneBit, &x, &y, trial).unwrap();
            if outcome.a == outcome.b {
                agree += 1;
            }
        }
        let estimate = agree as f64 / trials as f64;
        assert!(
            (estimate - expected).abs() < 0.002,
            "{estimate} vs {expected}"
        );
    }

    #[test]
    fn alice_marginal_is_exactly_uniform_over_the_coin() {
        // a = c by construction: average over both coin values is 1/2
        let mut zeros = 0;
        for c in [0u8, 1] {
            let outcome = run_with_setup(&EprOneBit, &0.4, &0.8, setup_with(c, 0.5), 9).unwrap();
            if outcome.a == 0 {
                zeros += 1;
            }
        }
        assert_eq!(zeros, 1);
    }

    #[test]
    fn density_is_one_outside_and_dips_inside() {
        assert_eq!(agreement_density(0.3, 0.6, 0.1), 1.0);
        assert_eq!(agreement_density(0.3, 0.6, 0.9), 1.0);
        let inside = agreement_density(0.3, 0.6, 0.45);
        assert!((inside - (1.0 - (2.0f64 * 0.15).sin())).abs() < 1e-15);
        // symmetric in the input order
        assert!((agreement_density(0.6, 0.3, 0.45) - (1.0 - (2.0f64 * 0.15).sin())).abs() < 1e-12);
    }

    #[test]
    fn widened_range_produces_weight_violations_but_the_restricted_range_none() {
        assert!(extension_weight_violations(1.0, 12).unwrap().is_empty());
        let bad = extension_weight_violations(std::f64::consts::PI, 12).unwrap();
        assert!(!bad.is_empty());
        assert!(bad.iter().all(|v| v.weight < 0.0 || v.weight > 1.0));
    }
}
