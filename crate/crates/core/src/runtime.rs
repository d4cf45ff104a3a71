//! Two-party protocol execution under strict resource accounting.
//!
//! A run has two phases. The initialization phase establishes everything the
//! parties may share before seeing inputs (random bit strings, random reals,
//! entangled pairs), and none of it is billed to the channel. The main phase
//! alternates local computation with metered communication: classical bits
//! through [`Runtime::send_bits`], qubits through [`Runtime::send_qubits`]
//! with an ownership transfer. Local quantum operations are allowed only on
//! qubits the acting party currently holds; that ownership check is the
//! no-signalling guard. Every event lands in an ordered transcript, and the
//! whole run is a pure function of (protocol, inputs, master seed).

use std::collections::VecDeque;
use std::fmt;

use rand_chacha::ChaCha12Rng;
use serde::Serialize;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::seed::derive_rng;
use crate::sim::{OutcomeDistribution, SignVector, StateVector};

/// Exactly two parties exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PartyId {
    Alice,
    Bob,
}

impl PartyId {
    pub fn other(self) -> PartyId {
        match self {
            PartyId::Alice => PartyId::Bob,
            PartyId::Bob => PartyId::Alice,
        }
    }
}

impl fmt::Display for PartyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartyId::Alice => write!(f, "alice"),
            PartyId::Bob => write!(f, "bob"),
        }
    }
}

/// What a protocol asks to have established before inputs arrive.
#[derive(Debug, Clone, Default)]
pub struct SetupSpec {
    /// Number of shared uniform bit strings.
    pub bit_strings: usize,
    /// Length of each shared bit string.
    pub bit_string_len: usize,
    /// Shared uniform reals, one per listed open interval. A continuous
    /// variable is approximated at f64 precision (53 random bits), which
    /// shifts events of probability around 2⁻⁵³ and nothing measurable here.
    pub reals: Vec<(f64, f64)>,
    /// Number of shared entangled pairs.
    pub ebits: usize,
}

/// Everything established in the initialization phase.
#[derive(Debug, Clone)]
pub struct SharedSetup {
    pub shared_bits: Vec<BitString>,
    pub shared_reals: Vec<f64>,
    pub entangled_state: Option<StateVector>,
    /// Holder of each qubit of `entangled_state`.
    pub ownership: Vec<PartyId>,
    /// Count of shared pairs backing `entangled_state`.
    pub ebits: usize,
}

impl SharedSetup {
    pub fn empty() -> Self {
        SharedSetup {
            shared_bits: Vec::new(),
            shared_reals: Vec::new(),
            entangled_state: None,
            ownership: Vec::new(),
            ebits: 0,
        }
    }

    /// A setup holding exactly the given shared bit strings.
    pub fn with_bits(shared_bits: Vec<BitString>) -> Self {
        SharedSetup {
            shared_bits,
            ..SharedSetup::empty()
        }
    }
}

/// Draws a `SharedSetup` as a deterministic function of `(spec, seed)`.
/// With k entangled pairs the first party holds qubits 0..k (the high-order
/// half of the basis index) and the second party holds k..2k.
pub fn setup(spec: &SetupSpec, seed: u64) -> Result<SharedSetup> {
    use rand::Rng;
    let mut rng = derive_rng(seed, "setup");
    let shared_bits = (0..spec.bit_strings)
        .map(|_| BitString::random(&mut rng, spec.bit_string_len))
        .collect();
    let mut shared_reals = Vec::with_capacity(spec.reals.len());
    for &(lo, hi) in &spec.reals {
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(Error::Argument(format!("empty interval ({lo}, {hi})")));
        }
        // open interval: reject the 0.0 endpoint of the [0,1) sampler
        let mut u: f64 = rng.gen();
        while u == 0.0 {
            u = rng.gen();
        }
        shared_reals.push(lo + u * (hi - lo));
    }
    let (entangled_state, ownership) = if spec.ebits > 0 {
        let state = StateVector::new_entangled_pairs(spec.ebits)?;
        let mut ownership = vec![PartyId::Alice; 2 * spec.ebits];
        for slot in ownership.iter_mut().skip(spec.ebits) {
            *slot = PartyId::Bob;
        }
        (Some(state), ownership)
    } else {
        (None, Vec::new())
    };
    Ok(SharedSetup {
        shared_bits,
        shared_reals,
        entangled_state,
        ownership,
        ebits: spec.ebits,
    })
}

/// Monotone counters for main-phase traffic, tallied per direction.
/// Initialization never touches these.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Channel {
    pub bits_alice_to_bob: u64,
    pub bits_bob_to_alice: u64,
    pub qubits_alice_to_bob: u64,
    pub qubits_bob_to_alice: u64,
}

impl Channel {
    pub fn classical_bits_sent(&self) -> u64 {
        self.bits_alice_to_bob + self.bits_bob_to_alice
    }

    pub fn qubits_sent(&self) -> u64 {
        self.qubits_alice_to_bob + self.qubits_bob_to_alice
    }

    fn add_bits(&mut self, from: PartyId, n: u64) {
        match from {
            PartyId::Alice => self.bits_alice_to_bob += n,
            PartyId::Bob => self.bits_bob_to_alice += n,
        }
    }

    fn add_qubits(&mut self, from: PartyId, n: u64) {
        match from {
            PartyId::Alice => self.qubits_alice_to_bob += n,
            PartyId::Bob => self.qubits_bob_to_alice += n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    SendBits,
    SendQubits,
    LocalOp,
    Measure,
    Output,
}

/// Counter values after the event.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CounterSnapshot {
    pub bits: u64,
    pub qubits: u64,
}

/// One transcript entry.
#[derive(Debug, Clone, Serialize)]
pub struct Event {
    pub step: usize,
    pub actor: PartyId,
    pub kind: EventKind,
    pub payload_bits: u64,
    pub counters: CounterSnapshot,
}

/// Ordered event log of one run.
#[derive(Debug, Clone, Default)]
pub struct Transcript {
    events: Vec<Event>,
}

impl Transcript {
    pub fn events(&self) -> &[Event] {
        &self.events
    }

    /// Newline-delimited JSON, one object per event.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for event in &self.events {
            out.push_str(&serde_json::to_string(event).expect("transcript events serialize"));
            out.push('\n');
        }
        out
    }

    /// Recomputes (classical bits, qubits) from the event log alone, for
    /// cross-checking against the channel counters.
    pub fn recount(&self) -> (u64, u64) {
        let mut bits = 0;
        let mut qubits = 0;
        for event in &self.events {
            match event.kind {
                EventKind::SendBits => bits += event.payload_bits,
                EventKind::SendQubits => qubits += event.payload_bits,
                _ => {}
            }
        }
        (bits, qubits)
    }
}

/// Outputs, resource counts, and the event log of one protocol execution.
#[derive(Debug, Clone)]
pub struct ProtocolOutcome<A, B = A> {
    pub a: A,
    pub b: B,
    pub channel: Channel,
    pub transcript: Transcript,
    /// Whether the protocol's promise held on this input, when it has one.
    /// Recorded, never enforced: off-promise inputs still execute.
    pub promise: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Init,
    Main,
}

/// Execution context for one run. All communication and every local quantum
/// operation goes through here so the accounting and ownership invariants
/// cannot be bypassed.
pub struct Runtime {
    shared_bits: Vec<BitString>,
    shared_reals: Vec<f64>,
    ebits: usize,
    phase: Phase,
    channel: Channel,
    transcript: Transcript,
    state: Option<StateVector>,
    ownership: Vec<PartyId>,
    measured: Option<BitString>,
    inbox_alice: VecDeque<BitString>,
    inbox_bob: VecDeque<BitString>,
    rng_alice: ChaCha12Rng,
    rng_bob: ChaCha12Rng,
    rng_measure: ChaCha12Rng,
}

impl Runtime {
    /// Builds a runtime in the initialization phase from an established
    /// setup. Party and measurement streams derive from the master seed.
    pub fn new(setup: SharedSetup, seed: u64) -> Self {
        Runtime {
            shared_bits: setup.shared_bits,
            shared_reals: setup.shared_reals,
            ebits: setup.ebits,
            phase: Phase::Init,
            channel: Channel::default(),
            transcript: Transcript::default(),
            state: setup.entangled_state,
            ownership: setup.ownership,
            measured: None,
            inbox_alice: VecDeque::new(),
            inbox_bob: VecDeque::new(),
            rng_alice: derive_rng(seed, "alice"),
            rng_bob: derive_rng(seed, "bob"),
            rng_measure: derive_rng(seed, "measure"),
        }
    }

    /// Ends the initialization phase; billed communication may start.
    pub fn begin_main(&mut self) {
        self.phase = Phase::Main;
    }

    fn require_main(&self, what: &str) -> Result<()> {
        if self.phase != Phase::Main {
            return Err(Error::ProtocolMisuse(format!(
                "{what} attempted during the initialization phase"
            )));
        }
        Ok(())
    }

    fn log(&mut self, actor: PartyId, kind: EventKind, payload_bits: u64) {
        let step = self.transcript.events.len();
        self.transcript.events.push(Event {
            step,
            actor,
            kind,
            payload_bits,
            counters: CounterSnapshot {
                bits: self.channel.classical_bits_sent(),
                qubits: self.channel.qubits_sent(),
            },
        });
    }

    pub fn shared_bit_string(&self, i: usize) -> Result<&BitString> {
        self.shared_bits
            .get(i)
            .ok_or_else(|| Error::Argument(format!("setup holds no shared bit string {i}")))
    }

    pub fn shared_bit_strings(&self) -> &[BitString] {
        &self.shared_bits
    }

    pub fn shared_real(&self, i: usize) -> Result<f64> {
        self.shared_reals
            .get(i)
            .copied()
            .ok_or_else(|| Error::Argument(format!("setup holds no shared real {i}")))
    }

    pub fn ebits(&self) -> usize {
        self.ebits
    }

    /// The party's private random stream, derived from the master seed.
    pub fn rng(&mut self, party: PartyId) -> &mut ChaCha12Rng {
        match party {
            PartyId::Alice => &mut self.rng_alice,
            PartyId::Bob => &mut self.rng_bob,
        }
    }

    /// Transmits classical bits; the counter grows by exactly the payload
    /// length and the payload lands in the receiver's inbox.
    pub fn send_bits(&mut self, from: PartyId, payload: &BitString) -> Result<()> {
        self.require_main("send_bits")?;
        self.channel.add_bits(from, payload.len() as u64);
        self.log(from, EventKind::SendBits, payload.len() as u64);
        match from.other() {
            PartyId::Alice => self.inbox_alice.push_back(payload.clone()),
            PartyId::Bob => self.inbox_bob.push_back(payload.clone()),
        }
        Ok(())
    }

    /// Takes the oldest pending message for `to`. Erroring on an empty inbox
    /// is what keeps protocol code from acting on data not yet received.
    pub fn recv_bits(&mut self, to: PartyId) -> Result<BitString> {
        let inbox = match to {
            PartyId::Alice => &mut self.inbox_alice,
            PartyId::Bob => &mut self.inbox_bob,
        };
        inbox
            .pop_front()
            .ok_or_else(|| Error::ProtocolMisuse(format!("{to} has no pending message")))
    }

    /// Transfers the listed qubits to the other party.
    pub fn send_qubits(&mut self, from: PartyId, qubits: &[usize]) -> Result<()> {
        self.require_main("send_qubits")?;
        self.check_owned(from, qubits)?;
        for &q in qubits {
            self.ownership[q] = from.other();
        }
        self.channel.add_qubits(from, qubits.len() as u64);
        self.log(from, EventKind::SendQubits, qubits.len() as u64);
        Ok(())
    }

    fn check_owned(&self, party: PartyId, qubits: &[usize]) -> Result<()> {
        for &q in qubits {
            if q >= self.ownership.len() {
                return Err(Error::Argument(format!("no qubit {q} in play")));
            }
            if self.ownership[q] != party {
                return Err(Error::OwnershipViolation {
                    party,
                    qubit: q,
                    step: self.transcript.events.len(),
                });
            }
        }
        Ok(())
    }

    /// Creates a fresh all-zero register fully held by `party`. Only one
    /// register is in play at a time.
    pub fn prepare_register(&mut self, party: PartyId, num_qubits: usize) -> Result<()> {
        self.require_main("prepare_register")?;
        if self.state.is_some() {
            return Err(Error::ProtocolMisuse(
                "a quantum register is already in play".into(),
            ));
        }
        self.state = Some(StateVector::zero_state(num_qubits)?);
        self.ownership = vec![party; num_qubits];
        self.measured = None;
        self.log(party, EventKind::LocalOp, num_qubits as u64);
        Ok(())
    }

    /// Drops the register; the caller must hold all of it.
    pub fn discard_register(&mut self, party: PartyId) -> Result<()> {
        if self.state.is_none() {
            return Err(Error::ProtocolMisuse("no register to discard".into()));
        }
        let all: Vec<usize> = (0..self.ownership.len()).collect();
        self.check_owned(party, &all)?;
        self.state = None;
        self.ownership.clear();
        self.measured = None;
        self.log(party, EventKind::LocalOp, 0);
        Ok(())
    }

    fn gate_target(&mut self, party: PartyId, qubits: &[usize]) -> Result<&mut StateVector> {
        self.require_main("local quantum operation")?;
        if self.measured.is_some() {
            return Err(Error::ProtocolMisuse(
                "register was already measured".into(),
            ));
        }
        self.check_owned(party, qubits)?;
        self.log(party, EventKind::LocalOp, qubits.len() as u64);
        self.state
            .as_mut()
            .ok_or_else(|| Error::ProtocolMisuse("no quantum register in play".into()))
    }

    pub fn apply_hadamard(&mut self, party: PartyId, qubits: &[usize]) -> Result<()> {
        self.gate_target(party, qubits)?.apply_hadamard(qubits)
    }

    pub fn apply_phase_oracle(
        &mut self,
        party: PartyId,
        register: &[usize],
        signs: &SignVector,
    ) -> Result<()> {
        self.gate_target(party, register)?
            .apply_phase_oracle(register, signs)
    }

    pub fn apply_xor_oracle(
        &mut self,
        party: PartyId,
        register: &[usize],
        target: usize,
        toggles: &BitString,
    ) -> Result<()> {
        let mut touched = register.to_vec();
        touched.push(target);
        self.gate_target(party, &touched)?
            .apply_xor_oracle(register, target, toggles)
    }

    pub fn apply_rotation(&mut self, party: PartyId, qubit: usize, angle: f64) -> Result<()> {
        self.gate_target(party, &[qubit])?
            .apply_rotation(qubit, angle)
    }

    /// Qubits currently held by `party`, in ascending index order.
    pub fn owned_qubits(&self, party: PartyId) -> Vec<usize> {
        self.ownership
            .iter()
            .enumerate()
            .filter(|(_, &owner)| owner == party)
            .map(|(q, _)| q)
            .collect()
    }

    /// Measures the qubits `party` holds, in the computational basis. The
    /// joint outcome is sampled once from the full register (that single
    /// sample is what carries the correlations); each party then reads off
    /// its own slice. Local operations after measurement are rejected.
    pub fn measure_owned(&mut self, party: PartyId) -> Result<BitString> {
        self.require_main("measure")?;
        let state = self
            .state
            .as_ref()
            .ok_or_else(|| Error::ProtocolMisuse("no quantum register in play".into()))?;
        let owned = self.owned_qubits(party);
        if owned.is_empty() {
            return Err(Error::ProtocolMisuse(format!("{party} holds no qubits")));
        }
        if self.measured.is_none() {
            self.measured = Some(state.measure_all(&mut self.rng_measure));
        }
        let joint = self.measured.as_ref().expect("sample just stored");
        let mut bits = BitString::zeros(0);
        for &q in &owned {
            bits.push(joint.bit(q));
        }
        self.log(party, EventKind::Measure, owned.len() as u64);
        Ok(bits)
    }

    /// Exact Born-rule probabilities of the register currently in play.
    /// Simulator introspection: used for exactness checks and reporting,
    /// never as information available to a party.
    pub fn state_distribution(&self) -> Option<OutcomeDistribution> {
        self.state.as_ref().map(|s| s.outcome_distribution())
    }

    pub fn channel(&self) -> &Channel {
        &self.channel
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    fn log_outputs(&mut self) {
        self.log(PartyId::Alice, EventKind::Output, 0);
        self.log(PartyId::Bob, EventKind::Output, 0);
    }
}

/// A runnable two-party protocol description. Implementations declare what
/// the initialization phase must provide and drive the main phase through
/// the [`Runtime`].
pub trait Protocol {
    type AliceIn;
    type BobIn;
    type AliceOut;
    type BobOut;

    /// Registry name, as exposed on the command line.
    fn name(&self) -> &'static str;

    /// What to establish before inputs arrive.
    fn setup_spec(&self) -> SetupSpec;

    /// Input validation; runs before any setup is drawn.
    fn validate(&self, _x: &Self::AliceIn, _y: &Self::BobIn) -> Result<()> {
        Ok(())
    }

    /// Promise predicate, if the task has one.
    fn promise(&self, _x: &Self::AliceIn, _y: &Self::BobIn) -> Option<bool> {
        None
    }

    /// Protocols that must never touch the channel declare it here; the
    /// runner enforces the claim on every outcome.
    fn zero_communication(&self) -> bool {
        false
    }

    /// The main phase.
    fn main(
        &self,
        rt: &mut Runtime,
        x: &Self::AliceIn,
        y: &Self::BobIn,
    ) -> Result<(Self::AliceOut, Self::BobOut)>;
}

/// Executes initialization then the main phase; the outcome is a pure
/// function of `(protocol, x, y, seed)`.
pub fn run<P: Protocol>(
    protocol: &P,
    x: &P::AliceIn,
    y: &P::BobIn,
    seed: u64,
) -> Result<ProtocolOutcome<P::AliceOut, P::BobOut>> {
    protocol.validate(x, y)?;
    let setup = setup(&protocol.setup_spec(), seed)?;
    run_with_setup(protocol, x, y, setup, seed)
}

/// Like [`run`] but with an explicitly supplied setup, which is what lets
/// tests enumerate every possible draw of the shared randomness.
pub fn run_with_setup<P: Protocol>(
    protocol: &P,
    x: &P::AliceIn,
    y: &P::BobIn,
    setup: SharedSetup,
    seed: u64,
) -> Result<ProtocolOutcome<P::AliceOut, P::BobOut>> {
    protocol.validate(x, y)?;
    let mut rt = Runtime::new(setup, seed);
    rt.begin_main();
    let (a, b) = protocol.main(&mut rt, x, y)?;
    rt.log_outputs();
    let outcome = ProtocolOutcome {
        a,
        b,
        channel: rt.channel,
        transcript: rt.transcript,
        promise: protocol.promise(x, y),
    };
    if protocol.zero_communication()
        && (outcome.channel.classical_bits_sent() > 0 || outcome.channel.qubits_sent() > 0)
    {
        return Err(Error::Internal(format!(
            "{} is declared zero-communication but used the channel",
            protocol.name()
        )));
    }
    Ok(outcome)
}
