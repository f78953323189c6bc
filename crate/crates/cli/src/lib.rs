//! Experiment harness for `memres`: presets, configs, the train/evaluate
//! pipeline and the figure tables. The `memres` binary is a thin clap layer
//! over this crate.

pub mod commands;
pub mod config;
pub mod experiment;
pub mod presets;
pub mod reproduce;

use memres::bifurcation::BifurcationError;
use memres::readout::ReadoutError;
use memres::reservoir::ReservoirError;
use memres::tasks::TaskError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags, config or missing inputs; exit code 2.
    #[error("{0}")]
    Config(String),
    /// A run that started but did not succeed; exit code 1.
    #[error("{0}")]
    Experiment(String),
    #[error(transparent)]
    Bifurcation(#[from] BifurcationError),
    #[error(transparent)]
    Reservoir(#[from] ReservoirError),
    #[error(transparent)]
    Readout(#[from] ReadoutError),
    #[error(transparent)]
    Task(#[from] TaskError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            _ => 1,
        }
    }
}
