//! The matching-outputs relation on 2^k-bit inputs, solved two ways:
//! with k shared pairs and zero communication, and in the qubit-transmission
//! model with k sent qubits.
//!
//! The relation: on equal inputs the k-bit outputs must match; on inputs at
//! Hamming distance n/2 they must differ; off that promise anything goes.
//! Phase oracles load the inputs into signs, the Walsh–Hadamard transform
//! turns sign agreement into basis alignment, and the algebra leaves zero
//! probability on every forbidden output pair.

use crate::bits::BitString;
use crate::classical::EqualityVerdict;
use crate::error::{Error, Result};
use crate::runtime::{run, PartyId, Protocol, ProtocolOutcome, Runtime, SetupSpec};
use crate::sim::{OutcomeDistribution, SignVector, StateVector};

/// Forbidden outcome mass must stay below this on promise inputs.
pub const FORBIDDEN_MASS_TOL: f64 = 1e-12;

/// One instance of the relation: k, n = 2^k, and the two inputs.
#[derive(Debug, Clone)]
pub struct DjInstance {
    pub k: usize,
    pub x: BitString,
    pub y: BitString,
}

impl DjInstance {
    pub fn new(k: usize, x: BitString, y: BitString) -> Result<Self> {
        if k == 0 {
            return Err(Error::Argument("k must be at least 1".into()));
        }
        let n = 1usize << k;
        if x.len() != n || y.len() != n {
            return Err(Error::Argument(format!(
                "inputs must have length {n} = 2^{k}"
            )));
        }
        Ok(DjInstance { k, x, y })
    }

    pub fn n(&self) -> usize {
        1 << self.k
    }

    /// Δ(x, y) ∈ {0, n/2}. Recorded with each run, never enforced.
    pub fn promise_holds(&self) -> bool {
        let delta = self.x.hamming_distance(&self.y).expect("equal lengths");
        delta == 0 || delta == self.n() / 2
    }

    /// Whether the relation accepts outputs (a, b) for these inputs.
    pub fn relation_holds(&self, a: &BitString, b: &BitString) -> bool {
        let delta = self.x.hamming_distance(&self.y).expect("equal lengths");
        if delta == 0 {
            a == b
        } else if delta == self.n() / 2 {
            a != b
        } else {
            true
        }
    }
}

/// All ordered input pairs satisfying the promise at a given k.
pub fn promise_pairs(k: usize) -> Vec<(BitString, BitString)> {
    let n = 1usize << k;
    let mut pairs = Vec::new();
    for xv in 0..(1usize << n) {
        let x = BitString::from_index(xv, n);
        for yv in 0..(1usize << n) {
            let y = BitString::from_index(yv, n);
            let delta = x.hamming_distance(&y).unwrap();
            if delta == 0 || delta == n / 2 {
                pairs.push((x.clone(), y));
            }
        }
    }
    pairs
}

/// Zero-communication protocol backed by k shared pairs.
#[derive(Debug, Clone)]
pub struct DjPseudoTelepathy {
    pub k: usize,
}

impl DjPseudoTelepathy {
    fn check_inputs(&self, x: &BitString, y: &BitString) -> Result<()> {
        DjInstance::new(self.k, x.clone(), y.clone()).map(|_| ())
    }
}

impl Protocol for DjPseudoTelepathy {
    type AliceIn = BitString;
    type BobIn = BitString;
    type AliceOut = BitString;
    type BobOut = BitString;

    fn name(&self) -> &'static str {
        "dj-telepathy"
    }

    fn setup_spec(&self) -> SetupSpec {
        SetupSpec {
            ebits: self.k,
            ..SetupSpec::default()
        }
    }

    fn validate(&self, x: &BitString, y: &BitString) -> Result<()> {
        self.check_inputs(x, y)
    }

    fn promise(&self, x: &BitString, y: &BitString) -> Option<bool> {
        DjInstance::new(self.k, x.clone(), y.clone())
            .ok()
            .map(|i| i.promise_holds())
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
        let k = self.k;
        if rt.ebits() != k {
            return Err(Error::Argument(format!(
                "setup provides {} shared pairs, need {k}",
                rt.ebits()
            )));
        }
        let alice_reg: Vec<usize> = (0..k).collect();
        let bob_reg: Vec<usize> = (k..2 * k).collect();

        rt.apply_phase_oracle(PartyId::Alice, &alice_reg, &SignVector::from_bit_string(x))?;
        rt.apply_phase_oracle(PartyId::Bob, &bob_reg, &SignVector::from_bit_string(y))?;
        rt.apply_hadamard(PartyId::Alice, &alice_reg)?;
        rt.apply_hadamard(PartyId::Bob, &bob_reg)?;

        // on-promise exactness: zero mass on forbidden output pairs
        let instance = DjInstance::new(k, x.clone(), y.clone())?;
        if instance.promise_holds() {
            let dist = rt
                .state_distribution()
                .ok_or_else(|| Error::Internal("entangled state missing".into()))?;
            let forbidden = forbidden_mass(&instance, &dist);
            if forbidden > FORBIDDEN_MASS_TOL {
                return Err(Error::Internal(format!(
                    "forbidden outcome mass {forbidden} on a promise input"
                )));
            }
        }

        let a = rt.measure_owned(PartyId::Alice)?;
        let b = rt.measure_owned(PartyId::Bob)?;
        Ok((a, b))
    }
}

/// Probability mass the joint distribution places on output pairs the
/// relation forbids for this instance.
pub fn forbidden_mass(instance: &DjInstance, dist: &OutcomeDistribution) -> f64 {
    let k = instance.k;
    dist.mass_where(|j| {
        let a = BitString::from_index(j >> k, k);
        let b = BitString::from_index(j & ((1 << k) - 1), k);
        !instance.relation_holds(&a, &b)
    })
}

/// Exact pre-measurement joint distribution of the zero-communication
/// protocol, computed on a fresh register without any runtime.
pub fn dj_joint_distribution(instance: &DjInstance) -> Result<OutcomeDistribution> {
    let k = instance.k;
    let mut state = StateVector::new_entangled_pairs(k)?;
    let alice_reg: Vec<usize> = (0..k).collect();
    let bob_reg: Vec<usize> = (k..2 * k).collect();
    state.apply_phase_oracle(&alice_reg, &SignVector::from_bit_string(&instance.x))?;
    state.apply_phase_oracle(&bob_reg, &SignVector::from_bit_string(&instance.y))?;
    state.apply_hadamard(&alice_reg)?;
    state.apply_hadamard(&bob_reg)?;
    Ok(state.outcome_distribution())
}

/// Runs the zero-communication protocol on an instance.
pub fn dj_pseudo_telepathy(
    instance: &DjInstance,
    seed: u64,
) -> Result<ProtocolOutcome<BitString, BitString>> {
    run(
        &DjPseudoTelepathy { k: instance.k },
        &instance.x,
        &instance.y,
        seed,
    )
}

/// Qubit-transmission protocol: Alice loads her input's signs onto a k-qubit
/// register in uniform superposition and ships it; Bob loads his signs,
/// transforms, and measures. Outcome 0^k means the signs cancelled, i.e. equal
/// inputs; on-promise the verdict is exact because the 0^k amplitude is
/// (n − 2Δ)/n, which is ±1 at Δ = 0 and 0 at Δ = n/2.
#[derive(Debug, Clone)]
pub struct DjQubitProtocol {
    pub k: usize,
}

impl Protocol for DjQubitProtocol {
    type AliceIn = BitString;
    type BobIn = BitString;
    type AliceOut = ();
    type BobOut = EqualityVerdict;

    fn name(&self) -> &'static str {
        "dj-qubit"
    }

    fn setup_spec(&self) -> SetupSpec {
        // no prior entanglement in this model
        SetupSpec::default()
    }

    fn validate(&self, x: &BitString, y: &BitString) -> Result<()> {
        DjInstance::new(self.k, x.clone(), y.clone()).map(|_| ())
    }

    fn promise(&self, x: &BitString, y: &BitString) -> Option<bool> {
        DjInstance::new(self.k, x.clone(), y.clone())
            .ok()
            .map(|i| i.promise_holds())
    }

    fn main(
        &self,
        rt: &mut Runtime,
        x: &BitString,
        y: &BitString,
    ) -> Result<((), EqualityVerdict)> {
        let k = self.k;
        let register: Vec<usize> = (0..k).collect();

        rt.prepare_register(PartyId::Alice, k)?;
        rt.apply_hadamard(PartyId::Alice, &register)?;
        rt.apply_phase_oracle(PartyId::Alice, &register, &SignVector::from_bit_string(x))?;
        rt.send_qubits(PartyId::Alice, &register)?;

        rt.apply_phase_oracle(PartyId::Bob, &register, &SignVector::from_bit_string(y))?;
        rt.apply_hadamard(PartyId::Bob, &register)?;
        let outcome = rt.measure_owned(PartyId::Bob)?;
        let verdict = if outcome.to_index() == 0 {
            EqualityVerdict::Equal
        } else {
            EqualityVerdict::Different
        };
        Ok(((), verdict))
    }
}

/// Exact probability the qubit protocol measures 0^k, from the state path.
pub fn dj_qubit_zero_probability(instance: &DjInstance) -> Result<f64> {
    let k = instance.k;
    let register: Vec<usize> = (0..k).collect();
    let mut state = StateVector::zero_state(k)?;
    state.apply_hadamard(&register)?;
    state.apply_phase_oracle(&register, &SignVector::from_bit_string(&instance.x))?;
    state.apply_phase_oracle(&register, &SignVector::from_bit_string(&instance.y))?;
    state.apply_hadamard(&register)?;
    Ok(state.outcome_distribution().probability(0))
}

/// Runs the qubit-transmission protocol on an instance.
pub fn dj_qubit_protocol(
    instance: &DjInstance,
    seed: u64,
) -> Result<ProtocolOutcome<(), EqualityVerdict>> {
    run(
        &DjQubitProtocol { k: instance.k },
        &instance.x,
        &instance.y,
        seed,
    )
}
