//! Named verification checks with pinned bounds.
//!
//! Every check computes a measured value, holds it against a bound fixed
//! here in code, and records the route that produced the number
//! (exact enumeration, exact rational arithmetic, state-vector computation,
//! Monte Carlo sampling, quadrature, or strategy search). The `verify`
//! subcommand groups them into suites; the acceptance test target runs the
//! same functions and additionally holds each V-check to its time budget.

use std::f64::consts::PI;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use qcc_core::bits::BitString;
use qcc_core::classical::{
    extension_weight_violations, fake_dj_agreement_counts, fingerprint_collision_count,
    shared_randomness_verdict_counts, EprOneBit, EqualityVerdict, FingerprintEquality,
};
use qcc_core::error::{Error, Result};
use qcc_core::quantum::{
    dj_joint_distribution, dj_pseudo_telepathy, dj_qubit_protocol, dj_qubit_zero_probability,
    epr_exact_distribution, promise_pairs, qubit_budget, DjInstance,
};
use qcc_core::runtime::run;
use qcc_core::search::{
    best_bounded_comm, best_zero_comm, chsh_feasibility, deterministic_strategies,
    evaluate_strategy, facet_patterns, verify_dj_coloring, ChshCertificate, CorrelationVector,
    TaskSpec,
};
use qcc_core::seed::{derive_rng, derive_seed};
use qcc_core::sim::StateVector;

use crate::experiment::{run_experiment, ExperimentConfig, InputSpec, Params};
use crate::quadrature::epr_agreement_by_quadrature;
use crate::report::SeedSource;

/// Which `verify` suite a check belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Classical,
    Quantum,
    Search,
    Harness,
}

impl Suite {
    pub fn parse(name: &str) -> Result<Option<Suite>> {
        match name {
            "all" => Ok(None),
            "classical" => Ok(Some(Suite::Classical)),
            "quantum" => Ok(Some(Suite::Quantum)),
            "search" => Ok(Some(Suite::Search)),
            other => Err(Error::Argument(format!(
                "unknown suite {other:?}; expected all, classical, quantum, or search"
            ))),
        }
    }
}

struct Outcome {
    measured: f64,
    bound: f64,
    pass: bool,
    detail: String,
}

/// A finished check with its timing.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub id: &'static str,
    pub name: &'static str,
    pub method: &'static str,
    pub suite: Suite,
    pub measured: f64,
    pub bound: f64,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
    pub budget_seconds: f64,
}

impl CheckResult {
    /// One pass/fail line for terminal output.
    pub fn line(&self) -> String {
        format!(
            "{} [{}] {} ({}): {} [measured {:e} vs bound {:e}] [{:.2}s of {:.0}s]",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.method,
            self.detail,
            self.measured,
            self.bound,
            self.seconds,
            self.budget_seconds,
        )
    }
}

pub struct CheckDef {
    pub id: &'static str,
    pub name: &'static str,
    pub method: &'static str,
    pub suite: Suite,
    pub budget_seconds: f64,
    run: fn(u64) -> Result<Outcome>,
}

impl CheckDef {
    pub fn execute(&self, seed: u64) -> Result<CheckResult> {
        let start = Instant::now();
        let outcome = (self.run)(seed)?;
        Ok(CheckResult {
            id: self.id,
            name: self.name,
            method: self.method,
            suite: self.suite,
            measured: outcome.measured,
            bound: outcome.bound,
            pass: outcome.pass,
            detail: outcome.detail,
            seconds: start.elapsed().as_secs_f64(),
            budget_seconds: self.budget_seconds,
        })
    }
}

/// The registry, in reporting order.
pub const CHECKS: &[CheckDef] = &[
    CheckDef {
        id: "V01",
        name: "dj-telepathy-exactness",
        method: "state-vector",
        suite: Suite::Quantum,
        budget_seconds: 60.0,
        run: check_dj_telepathy_exactness,
    },
    CheckDef {
        id: "V02",
        name: "dj-qubit-exactness",
        method: "state-vector",
        suite: Suite::Quantum,
        budget_seconds: 10.0,
        run: check_dj_qubit_exactness,
    },
    CheckDef {
        id: "V03",
        name: "epr-quantum-grid",
        method: "state-vector",
        suite: Suite::Quantum,
        budget_seconds: 5.0,
        run: check_epr_quantum_grid,
    },
    CheckDef {
        id: "V04",
        name: "epr-classical-simulation",
        method: "monte-carlo",
        suite: Suite::Classical,
        budget_seconds: 120.0,
        run: check_epr_classical_simulation,
    },
    CheckDef {
        id: "V05",
        name: "shared-randomness-equality",
        method: "exact-enumeration",
        suite: Suite::Classical,
        budget_seconds: 30.0,
        run: check_shared_randomness_exact,
    },
    CheckDef {
        id: "V06",
        name: "fingerprint-soundness",
        method: "exact-enumeration",
        suite: Suite::Classical,
        budget_seconds: 10.0,
        run: check_fingerprint_soundness,
    },
    CheckDef {
        id: "V07",
        name: "fake-dj-detection-rate",
        method: "exact-enumeration",
        suite: Suite::Classical,
        budget_seconds: 30.0,
        run: check_fake_dj_exact,
    },
    CheckDef {
        id: "V08",
        name: "chsh-separation",
        method: "exact-rational",
        suite: Suite::Search,
        budget_seconds: 1.0,
        run: check_chsh_separation,
    },
    CheckDef {
        id: "V09",
        name: "dj-zero-comm-search",
        method: "search",
        suite: Suite::Search,
        budget_seconds: 60.0,
        run: check_dj_zero_comm_search,
    },
    CheckDef {
        id: "V10",
        name: "grover-schedule",
        method: "monte-carlo",
        suite: Suite::Quantum,
        budget_seconds: 120.0,
        run: check_grover_schedule,
    },
    CheckDef {
        id: "V11",
        name: "report-determinism",
        method: "byte-compare",
        suite: Suite::Harness,
        budget_seconds: 120.0,
        run: check_report_determinism,
    },
    CheckDef {
        id: "M01",
        name: "measurement-consistency",
        method: "monte-carlo",
        suite: Suite::Quantum,
        budget_seconds: 60.0,
        run: check_measurement_consistency,
    },
    CheckDef {
        id: "M02",
        name: "epr-classical-marginals",
        method: "monte-carlo",
        suite: Suite::Classical,
        budget_seconds: 60.0,
        run: check_epr_marginals,
    },
    CheckDef {
        id: "M03",
        name: "one-sided-error",
        method: "exact-enumeration",
        suite: Suite::Classical,
        budget_seconds: 60.0,
        run: check_one_sided_error,
    },
    CheckDef {
        id: "M04",
        name: "two-bit-parity-optimum-study",
        method: "search",
        suite: Suite::Search,
        budget_seconds: 60.0,
        run: check_cvdnt_study,
    },
    CheckDef {
        id: "M05",
        name: "bounded-search-monotonicity",
        method: "search",
        suite: Suite::Search,
        budget_seconds: 60.0,
        run: check_bounded_monotonicity,
    },
    CheckDef {
        id: "M06",
        name: "fake-dj-relation-witness",
        method: "exact-enumeration",
        suite: Suite::Search,
        budget_seconds: 60.0,
        run: check_fake_dj_relation_witness,
    },
    CheckDef {
        id: "M07",
        name: "dj-separation-witness",
        method: "search",
        suite: Suite::Search,
        budget_seconds: 60.0,
        run: check_dj_separation_witness,
    },
    CheckDef {
        id: "M08",
        name: "extension-weight-diagnostic",
        method: "exact-enumeration",
        suite: Suite::Classical,
        budget_seconds: 60.0,
        run: check_extension_diagnostic,
    },
];

/// Runs one suite (or all of them) and returns the results in order.
pub fn run_suite(suite: Option<Suite>, seed: u64) -> Result<Vec<CheckResult>> {
    CHECKS
        .iter()
        .filter(|def| suite.map(|s| def.suite == s).unwrap_or(true))
        .map(|def| def.execute(seed))
        .collect()
}

fn random_half_mask<R: Rng>(rng: &mut R, n: usize) -> BitString {
    let mut mask = vec![0u8; n];
    let mut flipped = 0;
    while flipped < n / 2 {
        let i = rng.gen_range(0..n);
        if mask[i] == 0 {
            mask[i] = 1;
            flipped += 1;
        }
    }
    BitString::from_bits(&mask).expect("binary mask")
}

/// Zero forbidden-outcome mass on every promise pair, exhaustively at
/// k ≤ 2 and over 1000 sampled pairs at k = 3; channel counters zero on
/// every executed run.
fn check_dj_telepathy_exactness(seed: u64) -> Result<Outcome> {
    let mut max_mass = 0f64;
    let mut channel_clean = true;
    let mut pairs = 0u64;

    let mut audit = |instance: &DjInstance| -> Result<()> {
        let dist = dj_joint_distribution(instance)?;
        max_mass = max_mass.max(qcc_core::quantum::forbidden_mass(instance, &dist));
        let outcome = dj_pseudo_telepathy(instance, derive_seed(seed, "dj-exact", pairs))?;
        channel_clean &=
            outcome.channel.classical_bits_sent() == 0 && outcome.channel.qubits_sent() == 0;
        pairs += 1;
        Ok(())
    };

    for k in 1..=2usize {
        for (x, y) in promise_pairs(k) {
            audit(&DjInstance::new(k, x, y)?)?;
        }
    }
    let mut rng = derive_rng(seed, "dj-exact-k3");
    for _ in 0..1000 {
        let x = BitString::random(&mut rng, 8);
        let y = if rng.gen::<bool>() {
            x.clone()
        } else {
            x.xor(&random_half_mask(&mut rng, 8))?
        };
        audit(&DjInstance::new(3, x, y)?)?;
    }

    Ok(Outcome {
        measured: max_mass,
        bound: 1e-12,
        pass: max_mass < 1e-12 && channel_clean,
        detail: format!(
            "max forbidden-outcome mass {max_mass:.3e} over {pairs} promise pairs \
             (12 at k=1, 112 at k=2, 1000 sampled at k=3); all channel counters zero: {channel_clean}"
        ),
    })
}

/// Verdict correctness probability exactly 1 on every promise pair at
/// k = 2, with exactly k qubits sent per run.
fn check_dj_qubit_exactness(seed: u64) -> Result<Outcome> {
    let mut min_correct = f64::INFINITY;
    let mut qubits_ok = true;
    for (run_index, (x, y)) in promise_pairs(2).into_iter().enumerate() {
        let instance = DjInstance::new(2, x, y)?;
        let zero = dj_qubit_zero_probability(&instance)?;
        let correct = if instance.x == instance.y {
            zero
        } else {
            1.0 - zero
        };
        min_correct = min_correct.min(correct);
        let outcome =
            dj_qubit_protocol(&instance, derive_seed(seed, "dj-qubit", run_index as u64))?;
        qubits_ok &=
            outcome.channel.qubits_sent() == 2 && outcome.channel.classical_bits_sent() == 0;
        let verdict_correct = (instance.x == instance.y) == (outcome.b == EqualityVerdict::Equal);
        qubits_ok &= verdict_correct;
    }
    Ok(Outcome {
        measured: min_correct,
        bound: 1.0,
        pass: min_correct == 1.0 && qubits_ok,
        detail: format!(
            "min exact verdict-correctness probability {min_correct} over 112 promise pairs at k=2; \
             2 qubits and 0 classical bits per run: {qubits_ok}"
        ),
    })
}

/// Exact joint distributions on a 25-point angle grid over [0,π]²:
/// agreement within 1e-9 of cos²(x−y), marginals within 1e-12 of 1/2.
fn check_epr_quantum_grid(_seed: u64) -> Result<Outcome> {
    let mut max_dev = 0f64;
    let mut max_marginal_dev = 0f64;
    for i in 0..5 {
        for j in 0..5 {
            let x = i as f64 * PI / 4.0;
            let y = j as f64 * PI / 4.0;
            let dist = epr_exact_distribution(x, y)?;
            let agreement = dist.probability(0b00) + dist.probability(0b11);
            max_dev = max_dev.max((agreement - (x - y).cos().powi(2)).abs());
            let ma = dist.probability(0b00) + dist.probability(0b01);
            let mb = dist.probability(0b00) + dist.probability(0b10);
            max_marginal_dev = max_marginal_dev.max((ma - 0.5).abs()).max((mb - 0.5).abs());
        }
    }
    Ok(Outcome {
        measured: max_dev,
        bound: 1e-9,
        pass: max_dev < 1e-9 && max_marginal_dev < 1e-12,
        detail: format!(
            "max |P(a=b) − cos²(x−y)| = {max_dev:.3e} over 25 grid points; \
             max marginal deviation {max_marginal_dev:.3e} (bound 1e-12)"
        ),
    })
}

/// Twenty-pair Monte Carlo at 10⁶ trials per pair against cos²(x−y), one
/// classical bit per run, plus quadrature of the agreement density against
/// ½ + ½cos(2(y−x)) within 1e-9.
fn check_epr_classical_simulation(seed: u64) -> Result<Outcome> {
    let trials = 1_000_000u64;
    let mut max_sigma = 0f64;
    let mut max_quadrature_dev = 0f64;
    let mut one_bit = true;
    let mut pair_index = 0u64;
    for i in 0..4 {
        for j in 0..5 {
            let x = (i + 1) as f64 / 5.0;
            let y = (j + 1) as f64 / 6.0;
            let exact = (x - y).cos().powi(2);

            let mut agree = 0u64;
            for trial in 0..trials {
                let outcome = run(
                    &EprOneBit,
                    &x,
                    &y,
                    derive_seed(seed, &format!("epr-mc-{pair_index}"), trial),
                )?;
                if outcome.a == outcome.b {
                    agree += 1;
                }
                one_bit &= outcome.channel.classical_bits_sent() == 1
                    && outcome.channel.qubits_sent() == 0;
            }
            let estimate = agree as f64 / trials as f64;
            let se = (exact * (1.0 - exact) / trials as f64).sqrt();
            max_sigma = max_sigma.max((estimate - exact).abs() / se);

            let quadrature = epr_agreement_by_quadrature(x, y);
            let closed_form = 0.5 + 0.5 * (2.0 * (y - x)).cos();
            max_quadrature_dev = max_quadrature_dev
                .max((quadrature - closed_form).abs())
                .max((quadrature - exact).abs());
            pair_index += 1;
        }
    }
    Ok(Outcome {
        measured: max_sigma,
        bound: 5.0,
        pass: max_sigma <= 5.0 && max_quadrature_dev < 1e-9 && one_bit,
        detail: format!(
            "max Monte Carlo deviation {max_sigma:.2}σ over 20 pairs × 10⁶ trials; \
             exactly 1 bit per run: {one_bit}; quadrature vs ½+½cos(2(y−x)) within {max_quadrature_dev:.3e}"
        ),
    })
}

/// Exhaustive enumeration of every shared-string draw at (n,m) ∈
/// {(3,1),(3,2),(4,2)}: false-Equal rate exactly 2^−m on every unequal
/// pair, and never a false Different on equal pairs.
fn check_shared_randomness_exact(_seed: u64) -> Result<Outcome> {
    let mut worst_deviation = 0u64;
    let mut cases = 0u64;
    for (n, m) in [(3usize, 1usize), (3, 2), (4, 2)] {
        for xv in 0..(1usize << n) {
            for yv in 0..(1usize << n) {
                let x = BitString::from_index(xv, n);
                let y = BitString::from_index(yv, n);
                let (equal, total) = shared_randomness_verdict_counts(&x, &y, m)?;
                let expected = if xv == yv { total } else { total >> m };
                worst_deviation = worst_deviation.max(equal.abs_diff(expected));
                cases += 1;
            }
        }
    }
    Ok(Outcome {
        measured: worst_deviation as f64,
        bound: 0.0,
        pass: worst_deviation == 0,
        detail: format!(
            "false-Equal count deviates from exactly 2^-m·draws by {worst_deviation} \
             across {cases} input pairs at (n,m) ∈ {{(3,1),(3,2),(4,2)}}; equal inputs never flagged"
        ),
    })
}

/// At n = 16, ε = 1/4 the field is F₆₇; over 100 random unequal pairs the
/// exact collision fraction stays below ε and root counts below n.
fn check_fingerprint_soundness(seed: u64) -> Result<Outcome> {
    let protocol = FingerprintEquality {
        n: 16,
        epsilon: 0.25,
    };
    let p = protocol.modulus()?;
    let mut max_fraction = 0f64;
    let mut max_roots = 0usize;
    let mut rng = derive_rng(seed, "fingerprint-pairs");
    for _ in 0..100 {
        let x = BitString::random(&mut rng, 16);
        let mut y = BitString::random(&mut rng, 16);
        while y == x {
            y = BitString::random(&mut rng, 16);
        }
        let roots = fingerprint_collision_count(&x, &y, p)?;
        max_roots = max_roots.max(roots);
        max_fraction = max_fraction.max(roots as f64 / p as f64);
    }
    let pass = p == 67 && p as f64 <= 2.0 * 64.0 && max_fraction < 0.25 && max_roots <= 15;
    Ok(Outcome {
        measured: max_fraction,
        bound: 0.25,
        pass,
        detail: format!(
            "modulus {p} (≤ 2·n/ε = 128); max exact collision fraction {max_fraction:.4} \
             over 100 random unequal pairs; max roots {max_roots} ≤ 15"
        ),
    })
}

/// Exhaustive detection-escape rates for the faking strategy: exactly
/// 2^−k at distance n/2 and exactly 1 on equal inputs, at
/// (n,k) ∈ {(4,1),(4,2),(8,1)}.
fn check_fake_dj_exact(_seed: u64) -> Result<Outcome> {
    let mut worst_deviation = 0u64;
    let mut cases = 0u64;
    for (n, k) in [(2usize, 1usize), (4, 1), (4, 2), (8, 1)] {
        let x = BitString::zeros(n);
        // every distance-n/2 partner of the all-zero string
        for mask in 0..(1usize << n) {
            if mask.count_ones() as usize != n / 2 {
                continue;
            }
            let y = BitString::from_index(mask, n);
            let (matches, total) = fake_dj_agreement_counts(&x, &y, k)?;
            worst_deviation = worst_deviation.max(matches.abs_diff(total >> k));
            cases += 1;
        }
        // a non-zero base point as well
        let x2 = BitString::from_index(0b0110 % (1 << n), n);
        let y2 = x2.xor(&BitString::from_index((1 << (n / 2)) - 1, n))?;
        let (matches, total) = fake_dj_agreement_counts(&x2, &y2, k)?;
        worst_deviation = worst_deviation.max(matches.abs_diff(total >> k));
        // equal inputs always agree
        let (matches_eq, total_eq) = fake_dj_agreement_counts(&x, &x, k)?;
        worst_deviation = worst_deviation.max(matches_eq.abs_diff(total_eq));
        cases += 2;
    }
    Ok(Outcome {
        measured: worst_deviation as f64,
        bound: 0.0,
        pass: worst_deviation == 0,
        detail: format!(
            "escape counts deviate from exactly 2^-k·draws by {worst_deviation} across \
             {cases} cases at (n,k) ∈ {{(2,1),(4,1),(4,2),(8,1)}}"
        ),
    })
}

/// The restricted correlated-coin correlations violate the local polytope
/// at S = 5/2 exactly, all 16 deterministic strategies cap at S = 2, and
/// the entangled protocol reproduces the required vector to 1e-9.
fn check_chsh_separation(_seed: u64) -> Result<Outcome> {
    let required = CorrelationVector::epr_restricted();
    let report = chsh_feasibility(&required)?;
    let five_halves = BigRational::new(BigInt::from(5), BigInt::from(2));
    let mut pass = !report.feasible && report.max_chsh == five_halves;
    pass &= matches!(
        report.certificate,
        ChshCertificate::ViolatedInequality { .. }
    );

    // exhaustive deterministic maximum
    let mut deterministic_max = i64::MIN;
    for strategy in deterministic_strategies() {
        let correlators = strategy.correlators();
        for pattern in facet_patterns() {
            let s: i64 = pattern.iter().zip(&correlators).map(|(p, e)| p * e).sum();
            deterministic_max = deterministic_max.max(s);
        }
    }
    pass &= deterministic_max == 2;

    // the quantum side achieves the required agreements
    let settings = [
        (0.0, 0.0),
        (0.0, 5.0 * PI / 6.0),
        (PI / 6.0, 0.0),
        (PI / 6.0, 5.0 * PI / 6.0),
    ];
    let mut max_quantum_dev = 0f64;
    for ((x, y), required) in settings.iter().zip(required.agreements()) {
        let dist = epr_exact_distribution(*x, *y)?;
        let agreement = dist.probability(0b00) + dist.probability(0b11);
        let target = *required.numer() as f64 / *required.denom() as f64;
        max_quantum_dev = max_quantum_dev.max((agreement - target).abs());
    }
    pass &= max_quantum_dev < 1e-9;

    Ok(Outcome {
        measured: 2.5,
        bound: 2.0,
        pass,
        detail: format!(
            "required correlations infeasible with facet value 5/2 > 2; exhaustive \
             deterministic maximum {deterministic_max}; entangled protocol matches the \
             required agreements within {max_quantum_dev:.3e}"
        ),
    })
}

/// Perfect zero-communication strategies exist, are found, and verify at
/// input lengths 2 and 4.
fn check_dj_zero_comm_search(_seed: u64) -> Result<Outcome> {
    let mut min_success = f64::INFINITY;
    let mut pass = true;
    let mut details = Vec::new();
    for k in [1usize, 2] {
        let task = TaskSpec::dj(k)?;
        let result = best_zero_comm(&task)?;
        let (success, worst, counts) = evaluate_strategy(&task, &result.strategy);
        min_success = min_success.min(success);
        pass &= result.perfect && worst == 1.0 && counts.0 == counts.1;
        pass &= verify_dj_coloring(k, &result.strategy.alice_map);
        details.push(format!(
            "n={}: perfect strategy over {} promise pairs",
            1 << k,
            counts.1
        ));
    }
    // perfection is decided by exact pair counts; the float sum of 112
    // uniform weights only lands near 1
    Ok(Outcome {
        measured: min_success,
        bound: 1.0,
        pass: pass && (min_success - 1.0).abs() < 1e-9,
        detail: details.join("; "),
    })
}

/// Distributed search at n = 32 with a single planted common day: found in
/// at least two thirds of 200 seeded runs, never an invalid day, qubit
/// traffic within the hard per-run ceiling.
fn check_grover_schedule(seed: u64) -> Result<Outcome> {
    let n = 32usize;
    let mut x = BitString::zeros(n);
    let mut y = BitString::zeros(n);
    x.set(16, 1);
    y.set(16, 1); // day 17 is the only common free day
    x.set(2, 1); // each side has one extra free day of its own
    y.set(28, 1);

    let instance = qcc_core::quantum::ScheduleInstance::new(x.clone(), y.clone())?;
    let runs = 200u64;
    let mut hits = 0u64;
    let mut invalid = 0u64;
    let mut max_qubits = 0u64;
    let budget = qubit_budget(n, 15);
    let mut within_budget = true;
    for i in 0..runs {
        let outcome = qcc_core::quantum::distributed_grover_schedule(
            &instance,
            derive_seed(seed, "grover", i),
        )?;
        if let Some(day) = outcome.a {
            if x.bit(day - 1) == 1 && y.bit(day - 1) == 1 {
                hits += 1;
            } else {
                invalid += 1;
            }
        }
        max_qubits = max_qubits.max(outcome.channel.qubits_sent());
        within_budget &= outcome.channel.qubits_sent() <= budget;
    }
    let rate = hits as f64 / runs as f64;
    let constant = max_qubits as f64 / ((n as f64).sqrt() * (n as f64).log2());
    Ok(Outcome {
        measured: rate,
        bound: 2.0 / 3.0,
        pass: rate >= 2.0 / 3.0 && invalid == 0 && within_budget,
        detail: format!(
            "planted day found in {hits}/{runs} runs; invalid days returned: {invalid}; \
             max qubits sent {max_qubits} ≤ ceiling {budget}; empirical constant \
             d = {constant:.2} in d·√n·lg n"
        ),
    })
}

/// Byte-identical reports when an experiment is repeated with the same
/// seed, across protocols and formats.
fn check_report_determinism(seed: u64) -> Result<Outcome> {
    let configs = vec![
        ExperimentConfig {
            protocol: "epr-classical".into(),
            inputs: InputSpec::Grid { nx: 2, ny: 2 },
            trials: 2000,
            seed,
            params: Params::default(),
            format: None,
            sigma: 5.0,
        },
        ExperimentConfig {
            protocol: "dj-telepathy".into(),
            inputs: InputSpec::Exhaustive,
            trials: 3,
            seed,
            params: Params::default(),
            format: None,
            sigma: 5.0,
        },
        ExperimentConfig {
            protocol: "grover-schedule".into(),
            inputs: InputSpec::Explicit(vec!["00100100:00100001".into()]),
            trials: 5,
            seed,
            params: Params::default(),
            format: None,
            sigma: 5.0,
        },
        ExperimentConfig {
            protocol: "equality-fingerprint".into(),
            inputs: InputSpec::Explicit(vec!["1011001110001111:1011001110001110".into()]),
            trials: 200,
            seed,
            params: Params::default(),
            format: None,
            sigma: 5.0,
        },
    ];
    let mut mismatches = 0u64;
    for config in &configs {
        let one = run_experiment(config, SeedSource::Cli)?;
        let two = run_experiment(config, SeedSource::Cli)?;
        if one.to_csv() != two.to_csv() || one.to_json() != two.to_json() {
            mismatches += 1;
        }
    }
    Ok(Outcome {
        measured: mismatches as f64,
        bound: 0.0,
        pass: mismatches == 0,
        detail: format!(
            "{} configurations re-run with identical seeds; byte mismatches: {mismatches}",
            configs.len()
        ),
    })
}

/// Seeded sampling of a skewed state agrees with its exact distribution
/// within five standard errors per basis state.
fn check_measurement_consistency(seed: u64) -> Result<Outcome> {
    let mut state = StateVector::zero_state(2)?;
    state.apply_hadamard(&[0])?;
    state.apply_rotation(1, 0.9)?;
    let dist = state.outcome_distribution();
    let trials = 100_000u64;
    let mut counts = [0u64; 4];
    let mut rng = derive_rng(seed, "measurement-consistency");
    for _ in 0..trials {
        counts[state.measure_all(&mut rng).to_index()] += 1;
    }
    let mut max_sigma = 0f64;
    for (j, &count) in counts.iter().enumerate() {
        let p = dist.probability(j);
        let se = (p * (1.0 - p) / trials as f64).sqrt().max(1e-12);
        max_sigma = max_sigma.max((count as f64 / trials as f64 - p).abs() / se);
    }
    Ok(Outcome {
        measured: max_sigma,
        bound: 5.0,
        pass: max_sigma <= 5.0,
        detail: format!(
            "max per-basis-state deviation {max_sigma:.2}σ over {trials} seeded samples"
        ),
    })
}

/// Output marginals of the one-bit simulation: Alice's bit is the shared
/// coin (uniform by construction), Bob's is uniform within sampling error.
fn check_epr_marginals(seed: u64) -> Result<Outcome> {
    let trials = 100_000u64;
    let mut max_sigma = 0f64;
    for (pair, (x, y)) in [(0.25, 0.7), (0.6, 0.2), (0.45, 0.5)]
        .into_iter()
        .enumerate()
    {
        let mut a_zero = 0u64;
        let mut b_zero = 0u64;
        for trial in 0..trials {
            let outcome = run(
                &EprOneBit,
                &x,
                &y,
                derive_seed(seed, &format!("epr-marginal-{pair}"), trial),
            )?;
            if outcome.a == 0 {
                a_zero += 1;
            }
            if outcome.b == 0 {
                b_zero += 1;
            }
        }
        let se = (0.25f64 / trials as f64).sqrt();
        max_sigma = max_sigma.max((a_zero as f64 / trials as f64 - 0.5).abs() / se);
        max_sigma = max_sigma.max((b_zero as f64 / trials as f64 - 0.5).abs() / se);
    }
    Ok(Outcome {
        measured: max_sigma,
        bound: 5.0,
        pass: max_sigma <= 5.0,
        detail: format!(
            "max marginal deviation {max_sigma:.2}σ from 1/2 over 3 input pairs × {trials} trials"
        ),
    })
}

/// Equal inputs are never declared Different: exhaustive over all shared
/// strings at small sizes, seeded over the fingerprint's random point.
fn check_one_sided_error(seed: u64) -> Result<Outcome> {
    let mut false_differents = 0u64;
    for n in 1..=3usize {
        for m in 1..=2usize {
            for xv in 0..(1usize << n) {
                let x = BitString::from_index(xv, n);
                let (equal, total) = shared_randomness_verdict_counts(&x, &x, m)?;
                false_differents += total - equal;
            }
        }
    }
    let protocol = FingerprintEquality {
        n: 16,
        epsilon: 0.25,
    };
    let mut rng = derive_rng(seed, "one-sided");
    for i in 0..500 {
        let x = BitString::random(&mut rng, 16);
        let outcome = run(&protocol, &x, &x, derive_seed(seed, "one-sided-run", i))?;
        if outcome.b == EqualityVerdict::Different {
            false_differents += 1;
        }
    }
    Ok(Outcome {
        measured: false_differents as f64,
        bound: 0.0,
        pass: false_differents == 0,
        detail: format!(
            "false Different verdicts on equal inputs: {false_differents} \
             (exhaustive shared-string draws at n ≤ 3, m ≤ 2, plus 500 seeded fingerprint runs)"
        ),
    })
}

/// Exact two-bit-budget optima for the two-bit parity task under both
/// studied distributions, flagging which (if either) lands on 7/9. The
/// reference value is reported, not asserted.
fn check_cvdnt_study(_seed: u64) -> Result<Outcome> {
    let uniform = best_bounded_comm(&TaskSpec::cvdnt(false)?, 2)?;
    let nonzero = best_bounded_comm(&TaskSpec::cvdnt(true)?, 2)?;
    let describe =
        |label: &str, result: &qcc_core::search::BoundedSearchResult| match result.exact_count {
            Some((num, den)) => format!("{label}: {num}/{den}"),
            None => format!("{label}: {:.6}", result.success),
        };
    let matches_seven_ninths = nonzero.exact_count == Some((7, 9));
    let uniform_matches = uniform
        .exact_count
        .map(|(num, den)| 9 * num == 7 * den)
        .unwrap_or(false);
    Ok(Outcome {
        measured: nonzero.success,
        bound: 7.0 / 9.0,
        pass: true, // a study: optima are reported and flagged, not asserted
        detail: format!(
            "{}; {}; equals 7/9 under nonzero-inputs distribution: {matches_seven_ninths}; \
             under uniform: {uniform_matches}",
            describe("uniform over 16 pairs", &uniform),
            describe("uniform over 9 nonzero pairs", &nonzero),
        ),
    })
}

/// Bounded-communication optima never decrease with budget.
fn check_bounded_monotonicity(_seed: u64) -> Result<Outcome> {
    let tasks = [
        TaskSpec::equality(1)?,
        TaskSpec::equality_receiver(1)?,
        TaskSpec::cvdnt(false)?,
        TaskSpec::cvdnt(true)?,
    ];
    let mut min_step = f64::INFINITY;
    for task in &tasks {
        let mut last = -1.0;
        for budget in 0..=2usize {
            let result = best_bounded_comm(task, budget)?;
            min_step = min_step.min(result.success - last);
            last = result.success;
        }
    }
    Ok(Outcome {
        measured: min_step,
        bound: 0.0,
        pass: min_step >= -1e-12,
        detail: format!(
            "smallest success increment across budgets 0..2 on 4 tasks: {min_step:.3e} (never negative)"
        ),
    })
}

/// The faking strategy, judged by the relation table itself, violates the
/// relation on exactly a 2^−k fraction of shared-string draws at distance
/// n/2 (and never on equal inputs).
fn check_fake_dj_relation_witness(_seed: u64) -> Result<Outcome> {
    let mut worst_deviation = 0u64;
    for k in [1usize, 2] {
        let n = 1usize << k;
        let task = TaskSpec::dj(k)?;
        let x = BitString::zeros(n);
        let y = BitString::from_index((1 << (n / 2)) - 1, n); // distance n/2
        let total = 1u64 << (n * k);
        let mut violations = 0u64;
        for draw in 0..total {
            let strings: Vec<BitString> = (0..k)
                .map(|i| BitString::from_index(((draw >> (i * n)) & ((1 << n) - 1)) as usize, n))
                .collect();
            let mut a = 0usize;
            let mut b = 0usize;
            for t in &strings {
                a = (a << 1) | x.inner_product(t)? as usize;
                b = (b << 1) | y.inner_product(t)? as usize;
            }
            if !task.relation(x.to_index(), y.to_index(), a, b) {
                violations += 1;
            }
        }
        worst_deviation = worst_deviation.max(violations.abs_diff(total >> k));
    }
    Ok(Outcome {
        measured: worst_deviation as f64,
        bound: 0.0,
        pass: worst_deviation == 0,
        detail: format!(
            "relation-table violations deviate from exactly 2^-k·draws by {worst_deviation} at k ∈ {{1,2}}"
        ),
    })
}

/// At n = 4 the perfect classical strategy and the entangled protocol are
/// certified against the identical relation predicate.
fn check_dj_separation_witness(_seed: u64) -> Result<Outcome> {
    let task = TaskSpec::dj(2)?;
    let search = best_zero_comm(&task)?;
    let (_, worst, counts) = evaluate_strategy(&task, &search.strategy);
    let strategy_perfect = worst == 1.0 && counts == (112, 112);

    let mut max_mass = 0f64;
    for (xi, yi) in task.support() {
        let x = BitString::from_index(xi, 4);
        let y = BitString::from_index(yi, 4);
        let instance = DjInstance::new(2, x, y)?;
        let dist = dj_joint_distribution(&instance)?;
        let mass = dist.mass_where(|j| !task.relation(xi, yi, j >> 2, j & 0b11));
        max_mass = max_mass.max(mass);
    }
    Ok(Outcome {
        measured: max_mass,
        bound: 1e-12,
        pass: strategy_perfect && max_mass < 1e-12,
        detail: format!(
            "classical strategy perfect on all 112 promise pairs: {strategy_perfect}; \
             entangled protocol's forbidden mass vs the same predicate: {max_mass:.3e}"
        ),
    })
}

/// The sin-based flip weight is a probability on the restricted range and
/// stops being one when the range widens toward π. Diagnostic only; no
/// repair is implemented.
fn check_extension_diagnostic(_seed: u64) -> Result<Outcome> {
    let restricted = extension_weight_violations(1.0, 16)?;
    let widened = extension_weight_violations(PI, 16)?;
    let worst = widened
        .iter()
        .map(|v| v.weight)
        .fold(0.0f64, |acc, w| if w < acc { w } else { acc });
    Ok(Outcome {
        measured: restricted.len() as f64,
        bound: 0.0,
        pass: restricted.is_empty() && !widened.is_empty(),
        detail: format!(
            "weight violations on (0,1): {}; on (0,π): {} (most negative weight {worst:.3}); \
             no repair attempted",
            restricted.len(),
            widened.len()
        ),
    })
}
