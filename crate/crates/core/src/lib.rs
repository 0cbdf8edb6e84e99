//! Generalized binary search on explicit finite hypothesis spaces.
//!
//! Instances are materialized outcome matrices. The crate runs the greedy
//! splitting algorithm against simulated or interactive oracles, computes
//! the structural constants that control its query cost (minimal `k` for
//! the k-neighborly graph, the coherence parameter, split-neighborly edge
//! values and the resulting `α*`, `β`, `λ`), and checks the derived worst
//! and average cost bounds against exhaustive runs and an exact
//! optimal-decision-tree search.

pub mod analysis;
pub mod cli;
pub mod engine;
pub mod families;
pub mod instance;
pub mod persistence;
pub mod rational;
pub mod version_space;

pub use engine::{run_all_oracles, run_gbs, CostStats, Transcript};
pub use instance::{validate_instance, Instance, InstanceError, RawInstance};
pub use rational::Rational;
pub use version_space::{best_split_test, delta_set, restrict, split_probability, VersionSpace};
