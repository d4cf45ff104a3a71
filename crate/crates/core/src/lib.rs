//! Two-party communication protocols under strict resource accounting.
//!
//! The crate simulates the three settings in which a distributed relation can
//! be attacked: plain classical communication, qubit transmission, and prior
//! entanglement with little or no communication. Everything is deterministic
//! given a master seed, and every channel use is metered, so the quantitative
//! claims about each protocol (error rates, correlation values, bit and qubit
//! counts) can be checked by exact computation, exhaustive enumeration, or
//! seeded Monte Carlo.
//!
//! Module map:
//! - [`sim`]: dense state-vector simulation of small qubit registers;
//! - [`runtime`]: two-party execution: shared setup, channel accounting,
//!   qubit ownership, transcripts;
//! - [`classical`]: equality fingerprinting, shared-randomness equality,
//!   the one-bit correlated-coin simulation, and the zero-communication
//!   faking strategy;
//! - [`quantum`]: the entangled correlated-coin task, the matching-outputs
//!   pseudo-telepathy protocol, the k-qubit promise-equality protocol, and
//!   distributed search scheduling;
//! - [`search`]: exhaustive classical baselines: zero-communication
//!   strategies, bounded-communication protocol trees, and exact
//!   local-polytope feasibility.

pub mod bits;
pub mod classical;
pub mod error;
pub mod quantum;
pub mod runtime;
pub mod search;
pub mod seed;
pub mod sim;

pub use bits::BitString;
pub use error::{Error, Result};
pub use runtime::{Channel, PartyId, Protocol, ProtocolOutcome, SharedSetup, Transcript};
pub use sim::{OutcomeDistribution, SignVector, StateVector};
