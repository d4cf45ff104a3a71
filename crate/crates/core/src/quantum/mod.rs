//! Protocols that use entanglement or qubit transmission: the entangled
//! correlated-coin task, the matching-outputs relation in both the
//! zero-communication and qubit-transmission models, and distributed
//! search scheduling.

pub mod dj;
pub mod epr;
pub mod grover;

pub use dj::{
    dj_joint_distribution, dj_pseudo_telepathy, dj_qubit_protocol, dj_qubit_zero_probability,
    forbidden_mass, promise_pairs, DjInstance, DjPseudoTelepathy, DjQubitProtocol,
};
pub use epr::{epr_exact_agreement, epr_exact_distribution, EprTaskQuantum};
pub use grover::{
    distributed_grover_schedule, qubit_budget, GroverSchedule, ScheduleAnswer, ScheduleInstance,
};
