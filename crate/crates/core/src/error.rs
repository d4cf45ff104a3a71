//! Error type shared by all modules.

use thiserror::Error;

use crate::runtime::PartyId;

#[derive(Debug, Error)]
pub enum Error {
    /// A requested size is beyond the configured desk-scale bound.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// A caller-supplied value is malformed or out of domain.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A protocol step was attempted out of phase or out of turn.
    #[error("protocol misuse: {0}")]
    ProtocolMisuse(String),

    /// A party touched a qubit it does not currently hold. This is the
    /// no-signalling guard: local operations may only act on owned qubits.
    #[error("{party} does not own qubit {qubit} at step {step}")]
    OwnershipViolation {
        party: PartyId,
        qubit: usize,
        step: usize,
    },

    /// An internal exactness check failed; indicates a bug, not bad input.
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
