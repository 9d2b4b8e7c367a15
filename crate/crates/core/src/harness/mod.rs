//! Configuration, sweeps, CSV output and the acceptance checks.

pub mod acceptance;
pub mod config;
pub mod sweep;

pub use acceptance::{run_acceptance, AcceptanceConfig, AcceptanceReport, CriterionResult};
pub use config::RunConfig;
pub use sweep::{run_sweep, SweepResult, SweepRow, SweepSpec, SweepVariable};
