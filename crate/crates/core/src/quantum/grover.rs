//! Distributed search for a common free day: a shuttled Grover register
//! over the bitwise AND of the two calendars.
//!
//! The register is ⌈lg n⌉ index qubits plus one marking qubit. One oracle
//! call costs a round trip: Alice toggles the mark from her calendar, ships
//! the register, Bob phase-flips on (mark ∧ his calendar) and ships it back,
//! Alice untoggles. Net effect: a phase flip exactly on days both are free,
//! for 2(⌈lg n⌉+1) transmitted qubits per call. Diffusion is local to Alice.
//!
//! Nobody knows how many common days exist, so each round runs a freshly
//! randomized iteration count, measures, and lets both parties check the
//! candidate: the collapsed register is shipped once so Bob reads the same
//! day, then the two calendar bits cross the channel for verification. A
//! returned day is therefore always valid; after ⌈3 lg n⌉ fruitless rounds
//! the answer is None.

use rand::Rng;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::runtime::{run, PartyId, Protocol, ProtocolOutcome, Runtime, SetupSpec};
use crate::sim::SignVector;

/// A pair of engagement calendars; bit i−1 set means free on day i.
#[derive(Debug, Clone)]
pub struct ScheduleInstance {
    pub x: BitString,
    pub y: BitString,
}

impl ScheduleInstance {
    pub fn new(x: BitString, y: BitString) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::Argument("calendars must have equal length".into()));
        }
        if x.len() < 2 || !x.len().is_power_of_two() {
            return Err(Error::Argument(format!(
                "calendar length {} must be a power of two (and at least 2)",
                x.len()
            )));
        }
        Ok(ScheduleInstance { x, y })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }
}

/// Either a day i with 1 ≤ i ≤ n on which both calendars are free, or None.
pub type ScheduleAnswer = Option<usize>;

/// The shuttled-register search protocol.
#[derive(Debug, Clone, Default)]
pub struct GroverSchedule {
    /// Override for the number of rounds; defaults to ⌈3 lg n⌉.
    pub rounds: Option<usize>,
}

impl GroverSchedule {
    fn round_count(&self, q: usize) -> usize {
        self.rounds.unwrap_or(3 * q.max(1))
    }
}

/// Index value encoded by the first `q` bits of a measured register.
fn candidate_index(bits: &BitString, q: usize) -> usize {
    (0..q).fold(0, |acc, i| (acc << 1) | bits.bit(i) as usize)
}

/// Hard ceiling on transmitted qubits for a full run on n days: every round
/// costs at most (2⌈√n⌉ + 1) transfers of the (⌈lg n⌉+1)-qubit register.
pub fn qubit_budget(n: usize, rounds: usize) -> u64 {
    let q = n.trailing_zeros() as usize;
    let jmax = (n as f64).sqrt().ceil() as u64;
    rounds as u64 * (2 * jmax + 1) * (q as u64 + 1)
}

impl Protocol for GroverSchedule {
    type AliceIn = BitString;
    type BobIn = BitString;
    type AliceOut = ScheduleAnswer;
    type BobOut = ScheduleAnswer;

    fn name(&self) -> &'static str {
        "grover-schedule"
    }

    fn setup_spec(&self) -> SetupSpec {
        SetupSpec::default()
    }

    fn validate(&self, x: &BitString, y: &BitString) -> Result<()> {
        ScheduleInstance::new(x.clone(), y.clone()).map(|_| ())
    }

    fn main(
        &self,
        rt: &mut Runtime,
        x: &BitString,
        y: &BitString,
    ) -> Result<(ScheduleAnswer, ScheduleAnswer)> {
        let n = x.len();
        let q = n.trailing_zeros() as usize;
        let width = q + 1;
        let mark = q;
        let index_reg: Vec<usize> = (0..q).collect();
        let all: Vec<usize> = (0..width).collect();
        let jmax = (n as f64).sqrt().ceil() as usize;

        // Bob's conditional phase on (mark ∧ y_i), over the ordered register
        // (index qubits, then mark): value (z << 1) | m.
        let bob_signs = SignVector::new(
            (0..(1usize << width))
                .map(|v| {
                    if v & 1 == 1 && y.bit(v >> 1) == 1 {
                        -1
                    } else {
                        1
                    }
                })
                .collect(),
        )?;
        // inversion about the mean: flip every index state except |0…0⟩
        let diffusion_signs =
            SignVector::new((0..n).map(|z| if z == 0 { 1 } else { -1 }).collect())?;

        for _round in 0..self.round_count(q) {
            let iterations = rt.rng(PartyId::Alice).gen_range(1..=jmax);

            rt.prepare_register(PartyId::Alice, width)?;
            rt.apply_hadamard(PartyId::Alice, &index_reg)?;
            for _ in 0..iterations {
                // distributed oracle: toggle, ship, phase, ship back, untoggle
                rt.apply_xor_oracle(PartyId::Alice, &index_reg, mark, x)?;
                rt.send_qubits(PartyId::Alice, &all)?;
                rt.apply_phase_oracle(PartyId::Bob, &all, &bob_signs)?;
                rt.send_qubits(PartyId::Bob, &all)?;
                rt.apply_xor_oracle(PartyId::Alice, &index_reg, mark, x)?;
                // diffusion, local to Alice
                rt.apply_hadamard(PartyId::Alice, &index_reg)?;
                rt.apply_phase_oracle(PartyId::Alice, &index_reg, &diffusion_signs)?;
                rt.apply_hadamard(PartyId::Alice, &index_reg)?;
            }

            let alice_bits = rt.measure_owned(PartyId::Alice)?;
            if alice_bits.bit(mark) != 0 {
                return Err(Error::Internal("marking qubit left toggled".into()));
            }
            let candidate = candidate_index(&alice_bits, q);

            // ship the collapsed register so Bob reads the same candidate
            rt.send_qubits(PartyId::Alice, &all)?;
            let bob_bits = rt.measure_owned(PartyId::Bob)?;
            if candidate_index(&bob_bits, q) != candidate {
                return Err(Error::Internal("candidate mismatch across parties".into()));
            }

            // verification: two classical bits, one in each direction
            rt.send_bits(PartyId::Alice, &BitString::from_bits(&[x.bit(candidate)])?)?;
            let x_bit = rt.recv_bits(PartyId::Bob)?.bit(0);
            rt.send_bits(PartyId::Bob, &BitString::from_bits(&[y.bit(candidate)])?)?;
            let y_bit = rt.recv_bits(PartyId::Alice)?.bit(0);

            let alice_accepts = x.bit(candidate) == 1 && y_bit == 1;
            let bob_accepts = x_bit == 1 && y.bit(candidate) == 1;
            if alice_accepts != bob_accepts {
                return Err(Error::Internal("verification verdicts diverged".into()));
            }
            rt.discard_register(PartyId::Bob)?;
            if alice_accepts {
                let day = candidate + 1;
                return Ok((Some(day), Some(day)));
            }
        }
        Ok((None, None))
    }
}

/// Runs the search on an instance.
pub fn distributed_grover_schedule(
    instance: &ScheduleInstance,
    seed: u64,
) -> Result<ProtocolOutcome<ScheduleAnswer, ScheduleAnswer>> {
    run(&GroverSchedule::default(), &instance.x, &instance.y, seed)
}
