//! Host generators, configuration and the batch commands behind the CLI.

pub mod commands;
pub mod config;
pub mod hosts;
pub mod output;

pub use commands::{
    ak_verdict, cmd_akprob, cmd_diagnostics, cmd_hitting, cmd_sprinkle, cmd_threshold, static_probabilities, Command,
    Verdict,
};
pub use config::{ExperimentConfig, RawConfig};
pub use hosts::{is_prime, quadratic_residues, target_degree, HostFamily, Scaling};
pub use output::{fmt_f64, Cell, Table};
