//! The experiment driver: runs any registered protocol over explicit,
//! gridded, exhaustive, or randomly drawn inputs, with seeded per-trial
//! streams and exact reference values wherever a protocol exposes them.

use std::f64::consts::PI;

use rand::Rng;
use serde::Deserialize;

use qcc_core::bits::BitString;
use qcc_core::classical::{
    fingerprint_collision_count, EprOneBit, EqualityVerdict, FakeDj, FingerprintEquality,
    SharedRandomnessEquality,
};
use qcc_core::error::{Error, Result};
use qcc_core::quantum::{
    dj_joint_distribution, dj_qubit_zero_probability, forbidden_mass, promise_pairs, DjInstance,
    DjPseudoTelepathy, DjQubitProtocol, EprTaskQuantum, GroverSchedule,
};
use qcc_core::runtime::{run, Channel, Protocol, ProtocolOutcome};
use qcc_core::seed::{derive_rng, derive_seed};

use crate::report::{EstimateRow, Report, ReportHeader, SeedSource};

/// Per-protocol knobs with desk-scale defaults.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(default)]
pub struct Params {
    /// Fingerprint error bound.
    pub eps: f64,
    /// Shared strings for the inner-product equality test.
    pub m: usize,
    /// Output length for the matching-outputs protocols.
    pub k: usize,
    /// Input length for generated inputs.
    pub n: usize,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            eps: 0.25,
            m: 2,
            k: 2,
            n: 4,
        }
    }
}

/// Where the inputs of an experiment come from.
#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputSpec {
    /// Explicit input identifiers, e.g. "0101:0110" or "0.2:0.7".
    Explicit(Vec<String>),
    /// A grid over the protocol's two-real input domain.
    Grid { nx: usize, ny: usize },
    /// Every input pair the protocol's domain admits at desk scale.
    Exhaustive,
    /// Seeded uniform draws from the input domain.
    Random { count: usize },
}

/// A full experiment description; the JSON config file maps onto this.
#[derive(Debug, Clone, Deserialize)]
pub struct ExperimentConfig {
    pub protocol: String,
    pub inputs: InputSpec,
    pub trials: u64,
    pub seed: u64,
    #[serde(default)]
    pub params: Params,
    /// Output format preference ("csv" or "json") carried by config files;
    /// the command line may override it.
    #[serde(default)]
    pub format: Option<String>,
    /// Pass-rule width in standard errors. Defaults to 5; any override is
    /// recorded in the report header, so a loosened rule is never silent.
    #[serde(default = "default_sigma")]
    pub sigma: f64,
}

fn default_sigma() -> f64 {
    5.0
}

/// Parsed input pair for one run.
#[derive(Debug, Clone)]
pub enum ProtocolInput {
    Bits(BitString, BitString),
    Angles(f64, f64),
}

/// The protocol registry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProtocolKind {
    FingerprintEquality,
    SharedRandomnessEquality,
    EprClassical,
    FakeDj,
    EprQuantum,
    DjTelepathy,
    DjQubit,
    GroverSchedule,
}

pub const REGISTRY: &[(ProtocolKind, &str, &str)] = &[
    (
        ProtocolKind::FingerprintEquality,
        "equality-fingerprint",
        "equality via a random polynomial evaluation over a prime field (2⌈lg p⌉ bits)",
    ),
    (
        ProtocolKind::SharedRandomnessEquality,
        "equality-shared-randomness",
        "equality via m inner products against shared random strings (m bits)",
    ),
    (
        ProtocolKind::EprClassical,
        "epr-classical",
        "one-bit classical simulation of the correlated-coin task on (0,1) inputs",
    ),
    (
        ProtocolKind::FakeDj,
        "dj-fake",
        "zero-communication inner-product faking of the matching-outputs relation",
    ),
    (
        ProtocolKind::EprQuantum,
        "epr-quantum",
        "correlated coins from one shared pair measured at private angles, zero communication",
    ),
    (
        ProtocolKind::DjTelepathy,
        "dj-telepathy",
        "matching-outputs relation with k shared pairs and zero communication",
    ),
    (
        ProtocolKind::DjQubit,
        "dj-qubit",
        "promise equality with k transmitted qubits",
    ),
    (
        ProtocolKind::GroverSchedule,
        "grover-schedule",
        "distributed search scheduling over a shuttled register",
    ),
];

impl ProtocolKind {
    pub fn from_name(name: &str) -> Result<ProtocolKind> {
        REGISTRY
            .iter()
            .find(|(_, n, _)| *n == name)
            .map(|(kind, _, _)| *kind)
            .ok_or_else(|| Error::Argument(format!("unknown protocol {name:?}")))
    }

    pub fn name(self) -> &'static str {
        REGISTRY
            .iter()
            .find(|(kind, _, _)| *kind == self)
            .map(|(_, n, _)| *n)
            .expect("registered")
    }

    fn takes_angles(self) -> bool {
        matches!(self, ProtocolKind::EprClassical | ProtocolKind::EprQuantum)
    }

    /// Parses "left:right" into the protocol's input type.
    pub fn parse_input(self, text: &str) -> Result<ProtocolInput> {
        let (left, right) = text
            .split_once(':')
            .ok_or_else(|| Error::Argument(format!("input {text:?} is not of the form L:R")))?;
        if self.takes_angles() {
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Argument(format!("bad angle {s:?}")))
            };
            Ok(ProtocolInput::Angles(parse(left)?, parse(right)?))
        } else {
            Ok(ProtocolInput::Bits(
                left.trim().parse()?,
                right.trim().parse()?,
            ))
        }
    }

    /// Expands an input specification into (identifier, input) pairs.
    pub fn inputs_for(
        self,
        spec: &InputSpec,
        params: &Params,
        seed: u64,
    ) -> Result<Vec<(String, ProtocolInput)>> {
        match spec {
            InputSpec::Explicit(ids) => {
                if ids.is_empty() {
                    return Err(Error::Argument("no inputs given".into()));
                }
                ids.iter()
                    .map(|id| Ok((id.clone(), self.parse_input(id)?)))
                    .collect()
            }
            InputSpec::Grid { nx, ny } => {
                if !self.takes_angles() {
                    return Err(Error::Argument(format!(
                        "{} takes bit strings; grids apply to the angle protocols",
                        self.name()
                    )));
                }
                if *nx < 1 || *ny < 1 {
                    return Err(Error::Argument("grid must be at least 1×1".into()));
                }
                let mut inputs = Vec::with_capacity(nx * ny);
                for i in 0..*nx {
                    for j in 0..*ny {
                        let (x, y) = match self {
                            // interior points of the open square (0,1)²
                            ProtocolKind::EprClassical => (
                                (i + 1) as f64 / (*nx + 1) as f64,
                                (j + 1) as f64 / (*ny + 1) as f64,
                            ),
                            // inclusive grid over [0,π]²
                            _ => (
                                if *nx == 1 {
                                    0.0
                                } else {
                                    i as f64 * PI / (*nx - 1) as f64
                                },
                                if *ny == 1 {
                                    0.0
                                } else {
                                    j as f64 * PI / (*ny - 1) as f64
                                },
                            ),
                        };
                        inputs.push((format!("{x}:{y}"), ProtocolInput::Angles(x, y)));
                    }
                }
                Ok(inputs)
            }
            InputSpec::Exhaustive => self.exhaustive_inputs(params),
            InputSpec::Random { count } => self.random_inputs(params, *count, seed),
        }
    }

    fn exhaustive_inputs(self, params: &Params) -> Result<Vec<(String, ProtocolInput)>> {
        let pair_id = |x: &BitString, y: &BitString| format!("{x}:{y}");
        match self {
            ProtocolKind::DjTelepathy | ProtocolKind::DjQubit | ProtocolKind::FakeDj => {
                if params.k > 2 {
                    return Err(Error::Capacity(
                        "exhaustive promise enumeration is desk-scale only up to k = 2".into(),
                    ));
                }
                Ok(promise_pairs(params.k)
                    .into_iter()
                    .map(|(x, y)| (pair_id(&x, &y), ProtocolInput::Bits(x, y)))
                    .collect())
            }
            ProtocolKind::FingerprintEquality | ProtocolKind::SharedRandomnessEquality => {
                let n = params.n;
                if n > 5 {
                    return Err(Error::Capacity(
                        "exhaustive input pairs are desk-scale only up to n = 5".into(),
                    ));
                }
                let mut inputs = Vec::new();
                for xv in 0..(1usize << n) {
                    for yv in 0..(1usize << n) {
                        let x = BitString::from_index(xv, n);
                        let y = BitString::from_index(yv, n);
                        inputs.push((pair_id(&x, &y), ProtocolInput::Bits(x, y)));
                    }
                }
                Ok(inputs)
            }
            _ => Err(Error::Argument(format!(
                "{} has no exhaustive input enumeration",
                self.name()
            ))),
        }
    }

    fn random_inputs(
        self,
        params: &Params,
        count: usize,
        seed: u64,
    ) -> Result<Vec<(String, ProtocolInput)>> {
        if count == 0 {
            return Err(Error::Argument("need at least one random input".into()));
        }
        let mut rng = derive_rng(seed, "experiment-inputs");
        let mut inputs = Vec::with_capacity(count);
        for _ in 0..count {
            let input = match self {
                ProtocolKind::EprClassical => {
                    let draw = |rng: &mut _| loop {
                        let v: f64 = Rng::gen(rng);
                        if v > 0.0 {
                            return v;
                        }
                    };
                    ProtocolInput::Angles(draw(&mut rng), draw(&mut rng))
                }
                ProtocolKind::EprQuantum => {
                    ProtocolInput::Angles(rng.gen::<f64>() * PI, rng.gen::<f64>() * PI)
                }
                ProtocolKind::DjTelepathy | ProtocolKind::DjQubit | ProtocolKind::FakeDj => {
                    // stay on the promise: equal inputs or distance n/2
                    let n = 1usize << params.k;
                    let x = BitString::random(&mut rng, n);
                    let y = if rng.gen::<bool>() {
                        x.clone()
                    } else {
                        let mut mask = vec![0u8; n];
                        let mut flipped = 0;
                        while flipped < n / 2 {
                            let i = rng.gen_range(0..n);
                            if mask[i] == 0 {
                                mask[i] = 1;
                                flipped += 1;
                            }
                        }
                        x.xor(&BitString::from_bits(&mask)?)?
                    };
                    ProtocolInput::Bits(x, y)
                }
                ProtocolKind::GroverSchedule => {
                    let n = params.n.next_power_of_two().max(2);
                    ProtocolInput::Bits(
                        BitString::random(&mut rng, n),
                        BitString::random(&mut rng, n),
                    )
                }
                _ => {
                    let n = params.n;
                    ProtocolInput::Bits(
                        BitString::random(&mut rng, n),
                        BitString::random(&mut rng, n),
                    )
                }
            };
            let id = match &input {
                ProtocolInput::Bits(x, y) => format!("{x}:{y}"),
                ProtocolInput::Angles(x, y) => format!("{x}:{y}"),
            };
            inputs.push((id, input));
        }
        Ok(inputs)
    }

    /// Exact success probability for this input, when the protocol admits
    /// one at desk scale.
    pub fn exact_value(self, input: &ProtocolInput, params: &Params) -> Result<Option<f64>> {
        Ok(match (self, input) {
            (ProtocolKind::EprClassical, ProtocolInput::Angles(x, y))
            | (ProtocolKind::EprQuantum, ProtocolInput::Angles(x, y)) => {
                Some((x - y).cos().powi(2))
            }
            (ProtocolKind::DjTelepathy, ProtocolInput::Bits(x, y)) => {
                let k = derive_k(x)?;
                let instance = DjInstance::new(k, x.clone(), y.clone())?;
                let dist = dj_joint_distribution(&instance)?;
                Some(1.0 - forbidden_mass(&instance, &dist))
            }
            (ProtocolKind::DjQubit, ProtocolInput::Bits(x, y)) => {
                let k = derive_k(x)?;
                let instance = DjInstance::new(k, x.clone(), y.clone())?;
                let zero = dj_qubit_zero_probability(&instance)?;
                Some(if x == y { zero } else { 1.0 - zero })
            }
            (ProtocolKind::FakeDj, ProtocolInput::Bits(x, y)) => {
                if x == y {
                    Some(1.0)
                } else {
                    // any difference halves per-string agreement
                    Some(0.5f64.powi(params.k as i32))
                }
            }
            (ProtocolKind::FingerprintEquality, ProtocolInput::Bits(x, y)) => {
                let protocol = FingerprintEquality {
                    n: x.len(),
                    epsilon: params.eps,
                };
                let p = protocol.modulus()?;
                let roots = fingerprint_collision_count(x, y, p)?;
                Some(if x == y {
                    1.0
                } else {
                    1.0 - roots as f64 / p as f64
                })
            }
            (ProtocolKind::SharedRandomnessEquality, ProtocolInput::Bits(x, y)) => {
                Some(if x == y {
                    1.0
                } else {
                    1.0 - 0.5f64.powi(params.m as i32)
                })
            }
            (ProtocolKind::GroverSchedule, _) => None,
            _ => return Err(Error::Argument("input type mismatch".into())),
        })
    }

    /// Runs one seeded trial; returns whether the protocol-specific success
    /// event occurred, plus the channel use.
    pub fn run_trial(
        self,
        input: &ProtocolInput,
        params: &Params,
        seed: u64,
    ) -> Result<TrialRecord> {
        match (self, input) {
            (ProtocolKind::EprClassical, ProtocolInput::Angles(x, y)) => {
                let outcome = run(&EprOneBit, x, y, seed)?;
                TrialRecord::from_outcome(outcome.a == outcome.b, &EprOneBit, &outcome)
            }
            (ProtocolKind::EprQuantum, ProtocolInput::Angles(x, y)) => {
                let protocol = EprTaskQuantum;
                let outcome = run(&protocol, x, y, seed)?;
                TrialRecord::from_outcome(outcome.a == outcome.b, &protocol, &outcome)
            }
            (ProtocolKind::DjTelepathy, ProtocolInput::Bits(x, y)) => {
                let k = derive_k(x)?;
                let protocol = DjPseudoTelepathy { k };
                let outcome = run(&protocol, x, y, seed)?;
                let instance = DjInstance::new(k, x.clone(), y.clone())?;
                let success = instance.relation_holds(&outcome.a, &outcome.b);
                TrialRecord::from_outcome(success, &protocol, &outcome)
            }
            (ProtocolKind::DjQubit, ProtocolInput::Bits(x, y)) => {
                let k = derive_k(x)?;
                let protocol = DjQubitProtocol { k };
                let outcome = run(&protocol, x, y, seed)?;
                let success = (x == y) == (outcome.b == EqualityVerdict::Equal);
                TrialRecord::from_outcome(success, &protocol, &outcome)
            }
            (ProtocolKind::FakeDj, ProtocolInput::Bits(x, y)) => {
                let protocol = FakeDj {
                    n: x.len(),
                    k: params.k,
                };
                let outcome = run(&protocol, x, y, seed)?;
                let success = outcome.a == outcome.b;
                TrialRecord::from_outcome(success, &protocol, &outcome)
            }
            (ProtocolKind::FingerprintEquality, ProtocolInput::Bits(x, y)) => {
                let protocol = FingerprintEquality {
                    n: x.len(),
                    epsilon: params.eps,
                };
                let outcome = run(&protocol, x, y, seed)?;
                let correct = (x == y) == (outcome.b == EqualityVerdict::Equal);
                TrialRecord::from_outcome(correct, &protocol, &outcome)
            }
            (ProtocolKind::SharedRandomnessEquality, ProtocolInput::Bits(x, y)) => {
                let protocol = SharedRandomnessEquality {
                    n: x.len(),
                    m: params.m,
                };
                let outcome = run(&protocol, x, y, seed)?;
                let correct = (x == y) == (outcome.b == EqualityVerdict::Equal);
                TrialRecord::from_outcome(correct, &protocol, &outcome)
            }
            (ProtocolKind::GroverSchedule, ProtocolInput::Bits(x, y)) => {
                let protocol = GroverSchedule::default();
                let outcome = run(&protocol, x, y, seed)?;
                let exists = (0..x.len()).any(|i| x.bit(i) == 1 && y.bit(i) == 1);
                let success = match outcome.a {
                    Some(day) => x.bit(day - 1) == 1 && y.bit(day - 1) == 1,
                    None => !exists,
                };
                TrialRecord::from_outcome(success, &protocol, &outcome)
            }
            _ => Err(Error::Argument("input type mismatch".into())),
        }
    }
}

fn derive_k(x: &BitString) -> Result<usize> {
    if !x.len().is_power_of_two() || x.len() < 2 {
        return Err(Error::Argument(format!(
            "input length {} is not a power of two",
            x.len()
        )));
    }
    Ok(x.len().trailing_zeros() as usize)
}

/// One trial's result with its audited channel use.
#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub success: bool,
    pub channel: Channel,
    pub ebits: u64,
}

impl TrialRecord {
    fn from_outcome<P: Protocol, A, B>(
        success: bool,
        protocol: &P,
        outcome: &ProtocolOutcome<A, B>,
    ) -> Result<TrialRecord> {
        // counters must equal what the event log says, recomputed cold
        let (bits, qubits) = outcome.transcript.recount();
        if bits != outcome.channel.classical_bits_sent() || qubits != outcome.channel.qubits_sent()
        {
            return Err(Error::Internal(
                "channel counters diverge from the transcript".into(),
            ));
        }
        Ok(TrialRecord {
            success,
            channel: outcome.channel,
            ebits: protocol.setup_spec().ebits as u64,
        })
    }
}

/// Runs a full experiment: every input, `trials` seeded runs each.
pub fn run_experiment(config: &ExperimentConfig, seed_source: SeedSource) -> Result<Report> {
    if config.trials == 0 {
        return Err(Error::Argument("trials must be at least 1".into()));
    }
    if !config.sigma.is_finite() || config.sigma <= 0.0 {
        return Err(Error::Argument("sigma must be positive".into()));
    }
    let kind = ProtocolKind::from_name(&config.protocol)?;
    let inputs = kind.inputs_for(&config.inputs, &config.params, config.seed)?;

    let mut rows = Vec::with_capacity(inputs.len());
    for (input_id, input) in &inputs {
        let mut successes = 0u64;
        let mut resources: Option<TrialRecord> = None;
        for trial in 0..config.trials {
            let trial_seed = derive_seed(config.seed, input_id, trial);
            let record = kind.run_trial(input, &config.params, trial_seed)?;
            if record.success {
                successes += 1;
            }
            if resources.is_none() {
                resources = Some(record);
            }
        }
        let resources = resources.expect("at least one trial");
        let exact = kind.exact_value(input, &config.params)?;
        rows.push(EstimateRow::build(
            kind.name(),
            input_id.clone(),
            config.trials,
            successes,
            exact,
            config.sigma,
            resources.channel.classical_bits_sent(),
            resources.channel.qubits_sent(),
            resources.ebits,
        ));
    }

    Ok(Report {
        header: ReportHeader {
            protocol: config.protocol.clone(),
            seed: config.seed,
            seed_source,
            trials: config.trials,
            sigma: config.sigma,
        },
        rows,
    })
}
