//! Configuration-driven experiment runner.

pub mod config;
pub mod report;
pub mod runner;

pub use config::{Command, ExperimentConfig, SurveyMode};
pub use runner::{exit_code, run, Outcome, EXIT_CHECK_FAILED, EXIT_CONFIG_INVALID, EXIT_INFRASTRUCTURE, EXIT_PASS};

/// Environment variable naming the default output directory.
pub const OUT_ENV: &str = "F2_ERGODIC_OUT";
