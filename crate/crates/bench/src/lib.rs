//! Seeded experiment runner: builds instances, runs every algorithm per
//! trial, and aggregates trajectories into CSV tables.

pub mod config;
pub mod experiments;
pub mod fixtures;
pub mod results;
pub mod runner;

pub use config::{ExperimentConfig, ExperimentKind};
pub use fixtures::{verify_fixtures, FixtureReport};
pub use results::ResultTable;
pub use runner::{run_experiment, write_outputs};
