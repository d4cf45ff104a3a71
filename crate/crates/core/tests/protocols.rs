//! Cross-module integration: protocols driven through the public runner,
//! checked against the exact state-vector routes and the relation tables.

use qcc_core::bits::BitString;
use qcc_core::classical::{EqualityVerdict, FakeDj};
use qcc_core::error::Error;
use qcc_core::quantum::{
    dj_qubit_protocol, dj_qubit_zero_probability, epr_exact_distribution, DjInstance,
    EprTaskQuantum,
};
use qcc_core::runtime::{run, PartyId, Protocol, Runtime, SetupSpec};
use qcc_core::search::TaskSpec;
use qcc_core::seed::derive_seed;

fn bs(s: &str) -> BitString {
    s.parse().unwrap()
}

/// Sampled outcomes of the entangled correlated-coin protocol follow its
/// exact joint distribution.
#[test]
fn epr_quantum_samples_match_the_exact_distribution() {
    let (x, y) = (0.7, 1.9);
    let dist = epr_exact_distribution(x, y).unwrap();
    let trials = 20_000u64;
    let mut counts = [0u64; 4];
    for trial in 0..trials {
        let outcome = run(&EprTaskQuantum, &x, &y, derive_seed(3, "epr-int", trial)).unwrap();
        counts[((outcome.a as usize) << 1) | outcome.b as usize] += 1;
    }
    for (j, &count) in counts.iter().enumerate() {
        let p = dist.probability(j);
        let se = (p * (1.0 - p) / trials as f64).sqrt().max(1e-9);
        let observed = count as f64 / trials as f64;
        assert!(
            (observed - p).abs() <= 5.0 * se,
            "joint outcome {j}: {observed} vs {p}"
        );
    }
}

/// The qubit-transmission verdict always agrees with the exact
/// zero-outcome probability computed on a fresh register.
#[test]
fn qubit_protocol_agrees_with_its_exact_route() {
    let cases = [
        ("10110100", "10110100"),
        ("10110100", "01001000"),
        ("11111111", "00001111"),
        ("00000000", "10101010"),
    ];
    for (xs, ys) in cases {
        let instance = DjInstance::new(3, bs(xs), bs(ys)).unwrap();
        let zero = dj_qubit_zero_probability(&instance).unwrap();
        for seed in 0..10 {
            let outcome = dj_qubit_protocol(&instance, seed).unwrap();
            if zero == 1.0 {
                assert_eq!(outcome.b, EqualityVerdict::Equal);
            }
            if zero == 0.0 {
                assert_eq!(outcome.b, EqualityVerdict::Different);
            }
            assert_eq!(outcome.channel.qubits_sent(), 3);
        }
    }
}

/// Faking-strategy outputs, pushed through the relation table, satisfy it
/// exactly when the outputs coincide on the diagonal and never force a
/// false match at distance n/2.
#[test]
fn faking_outputs_feed_the_relation_table() {
    let task = TaskSpec::dj(2).unwrap();
    let protocol = FakeDj { n: 4, k: 2 };
    let x = bs("0110");
    let y = bs("0101"); // distance 2 = n/2
    let mut violations = 0u32;
    let trials = 512;
    for seed in 0..trials {
        let outcome = run(&protocol, &x, &y, seed).unwrap();
        let ok = task.relation(
            x.to_index(),
            y.to_index(),
            outcome.a.to_index(),
            outcome.b.to_index(),
        );
        if !ok {
            violations += 1;
        }
        assert_eq!(outcome.channel.classical_bits_sent(), 0);
    }
    // caught with probability 2^-k = 1/4; five-sigma band around 128/512
    let expected = trials as f64 * 0.25;
    let sd = (trials as f64 * 0.25 * 0.75).sqrt();
    assert!(
        (violations as f64 - expected).abs() <= 5.0 * sd,
        "{violations} violations"
    );
}

/// A protocol that breaks the qubit-ownership rule is stopped by the
/// runner with an ownership violation naming the offending qubit.
struct StealsAQubit;

impl Protocol for StealsAQubit {
    type AliceIn = ();
    type BobIn = ();
    type AliceOut = ();
    type BobOut = ();

    fn name(&self) -> &'static str {
        "steals-a-qubit"
    }

    fn setup_spec(&self) -> SetupSpec {
        SetupSpec {
            ebits: 1,
            ..SetupSpec::default()
        }
    }

    fn main(&self, rt: &mut Runtime, _x: &(), _y: &()) -> qcc_core::error::Result<((), ())> {
        // Bob's half is qubit 1; Alice has no business touching it
        rt.apply_hadamard(PartyId::Alice, &[1])?;
        Ok(((), ()))
    }
}

#[test]
fn ownership_violations_surface_through_the_runner() {
    let err = run(&StealsAQubit, &(), &(), 0).unwrap_err();
    assert!(matches!(
        err,
        Error::OwnershipViolation {
            party: PartyId::Alice,
            qubit: 1,
            ..
        }
    ));
}

/// Transcripts of a qubit-transmission run serialize to one JSON object
/// per event with the counters threaded through.
#[test]
fn transcripts_serialize_with_running_counters() {
    let instance = DjInstance::new(1, bs("10"), bs("10")).unwrap();
    let outcome = dj_qubit_protocol(&instance, 9).unwrap();
    let jsonl = outcome.transcript.to_jsonl();
    let lines: Vec<&str> = jsonl.lines().collect();
    assert_eq!(lines.len(), outcome.transcript.events().len());
    assert!(lines.iter().any(|l| l.contains("\"kind\":\"send_qubits\"")));
    // the final event carries the closing counter values
    let last: serde_json::Value = serde_json::from_str(lines.last().unwrap()).unwrap();
    assert_eq!(last["counters"]["qubits"], 1);
    assert_eq!(last["counters"]["bits"], 0);
}
