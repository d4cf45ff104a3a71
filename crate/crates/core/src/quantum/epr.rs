//! The correlated-coin task with one shared entangled pair and zero
//! communication.
//!
//! Each party measures its half of |Φ⁺⟩ at its private angle, realized as a
//! rotation by the negated angle followed by a computational-basis
//! measurement. The exact joint distribution puts cos²(x−y) on matching
//! outcomes with uniform marginals, and the run checks that distribution
//! before sampling from it.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::runtime::{PartyId, Protocol, Runtime, SetupSpec};
use crate::sim::{OutcomeDistribution, StateVector};

/// Tolerance for the agreement probability against cos²(x−y).
pub const AGREEMENT_TOL: f64 = 1e-9;

/// Tolerance for the uniform marginals.
pub const MARGINAL_TOL: f64 = 1e-12;

/// The entangled protocol; inputs are angles in [0, π].
#[derive(Debug, Clone, Default)]
pub struct EprTaskQuantum;

fn check_angle(v: f64) -> Result<()> {
    if !(0.0..=PI).contains(&v) {
        return Err(Error::Argument(format!("angle {v} outside [0, π]")));
    }
    Ok(())
}

/// Exact joint outcome distribution of measuring the shared pair at angles
/// (x, y), straight from the state vector.
pub fn epr_exact_distribution(x: f64, y: f64) -> Result<OutcomeDistribution> {
    check_angle(x)?;
    check_angle(y)?;
    let mut state = StateVector::new_entangled_pairs(1)?;
    state.apply_rotation(0, x)?;
    state.apply_rotation(1, y)?;
    Ok(state.outcome_distribution())
}

/// Exact P(a = b) for angles (x, y), from the state path.
pub fn epr_exact_agreement(x: f64, y: f64) -> Result<f64> {
    let dist = epr_exact_distribution(x, y)?;
    Ok(dist.probability(0b00) + dist.probability(0b11))
}

impl Protocol for EprTaskQuantum {
    type AliceIn = f64;
    type BobIn = f64;
    type AliceOut = u8;
    type BobOut = u8;

    fn name(&self) -> &'static str {
        "epr-quantum"
    }

    fn setup_spec(&self) -> SetupSpec {
        SetupSpec {
            ebits: 1,
            ..SetupSpec::default()
        }
    }

    fn validate(&self, x: &f64, y: &f64) -> Result<()> {
        check_angle(*x)?;
        check_angle(*y)
    }

    fn zero_communication(&self) -> bool {
        true
    }

    fn main(&self, rt: &mut Runtime, x: &f64, y: &f64) -> Result<(u8, u8)> {
        // measure at angle θ = rotate by −θ, then read the basis outcome
        rt.apply_rotation(PartyId::Alice, 0, *x)?;
        rt.apply_rotation(PartyId::Bob, 1, *y)?;

        // exactness check on the joint distribution before any sampling
        let dist = rt
            .state_distribution()
            .ok_or_else(|| Error::Internal("entangled state missing".into()))?;
        let agreement = dist.probability(0b00) + dist.probability(0b11);
        let expected = (x - y).cos().powi(2);
        if (agreement - expected).abs() > AGREEMENT_TOL {
            return Err(Error::Internal(format!(
                "agreement {agreement} deviates from cos²(x−y) = {expected}"
            )));
        }
        let alice_zero = dist.probability(0b00) + dist.probability(0b01);
        let bob_zero = dist.probability(0b00) + dist.probability(0b10);
        if (alice_zero - 0.5).abs() > MARGINAL_TOL || (bob_zero - 0.5).abs() > MARGINAL_TOL {
            return Err(Error::Internal(format!(
                "marginals ({alice_zero}, {bob_zero}) drifted from 1/2"
            )));
        }

        let a = rt.measure_owned(PartyId::Alice)?.bit(0);
        let b = rt.measure_owned(PartyId::Bob)?.bit(0);
        Ok((a, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::runtime::run;

    #[test]
    fn equal_angles_agree_with_certainty() {
        for x in [0.0, 0.4, PI / 2.0, PI] {
            assert!((epr_exact_agreement(x, x).unwrap() - 1.0).abs() < 1e-12);
            let outcome = run(&EprTaskQuantum, &x, &x, 7).unwrap();
            assert_eq!(outcome.a, outcome.b);
        }
    }

    #[test]
    fn right_angle_separation_always_disagrees() {
        let agreement = epr_exact_agreement(0.3, 0.3 + PI / 2.0).unwrap();
        assert!(agreement.abs() < 1e-12);
        for seed in 0..20 {
            let outcome = run(&EprTaskQuantum, &0.3, &(0.3 + PI / 2.0), seed).unwrap();
            assert_ne!(outcome.a, outcome.b);
        }
    }

    #[test]
    fn quarter_turn_gives_even_odds() {
        // from the exact 4-entry distribution: cos²(π/4) = 1/2
        let agreement = epr_exact_agreement(PI / 4.0 + 0.2, 0.2).unwrap();
        assert!((agreement - 0.5).abs() < 1e-9);
    }

    #[test]
    fn grid_matches_cosine_squared_with_uniform_marginals() {
        for i in 0..5 {
            for j in 0..5 {
                let x = i as f64 * PI / 4.0;
                let y = j as f64 * PI / 4.0;
                let dist = epr_exact_distribution(x, y).unwrap();
                let agreement = dist.probability(0) + dist.probability(3);
                assert!(
                    (agreement - (x - y).cos().powi(2)).abs() < AGREEMENT_TOL,
                    "x={x} y={y}"
                );
                let ma = dist.probability(0) + dist.probability(1);
                let mb = dist.probability(0) + dist.probability(2);
                assert!((ma - 0.5).abs() < MARGINAL_TOL);
                assert!((mb - 0.5).abs() < MARGINAL_TOL);
            }
        }
    }

    #[test]
    fn no_communication_is_used() {
        let outcome = run(&EprTaskQuantum, &0.9, &2.1, 11).unwrap();
        assert_eq!(outcome.channel.classical_bits_sent(), 0);
        assert_eq!(outcome.channel.qubits_sent(), 0);
    }

    #[test]
    fn out_of_range_angles_are_rejected() {
        assert!(matches!(
            run(&EprTaskQuantum, &-0.1, &0.5, 0),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            run(&EprTaskQuantum, &0.1, &3.5, 0),
            Err(Error::Argument(_))
        ));
    }
}
