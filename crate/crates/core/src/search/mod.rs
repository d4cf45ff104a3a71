//! Brute-force classical baselines: zero-communication strategies,
//! bounded-communication protocol trees, and exact local-polytope
//! feasibility. This is the module that certifies, at exhaustively
//! searchable sizes, what classical parties cannot do.

pub mod bounded;
pub mod chsh;
pub mod task;
pub mod zero_comm;

pub use bounded::{best_bounded_comm, evaluate_tree, BoundedSearchResult, ProtocolTree, TreeNode};
pub use chsh::{
    chsh_feasibility, deterministic_strategies, facet_patterns, parse_ratio, ChshCertificate,
    ChshReport, CorrelationVector, DeterministicStrategy,
};
pub use task::{InputDistribution, TaskSpec};
pub use zero_comm::{
    best_zero_comm, dj_coloring, evaluate_strategy, verify_dj_coloring, ColoringOutcome,
    LocalStrategy, StrategySearchResult,
};
