//! Batch front-end for the guidance library: scenario configs in, CSV logs
//! and reports out. The binary exposes four subcommands — `run`, `field`,
//! `validate`, `tune` — all driven by the same flat TOML scenario format.

pub mod commands;
pub mod config;
pub mod output;

/// Exit codes, one per failure class.
pub mod exit_code {
    /// A check ran and did not pass (validation violation, unsatisfied tune).
    pub const CHECK_FAILED: i32 = 1;
    /// The config file could not be parsed.
    pub const CONFIG_PARSE: i32 = 2;
    /// The config parsed but failed validation.
    pub const CONFIG_INVALID: i32 = 3;
    /// The simulation hit a controller singularity.
    pub const RUNTIME_SINGULARITY: i32 = 4;
    /// Filesystem trouble.
    pub const IO: i32 = 5;
}

/// Environment variable that re-roots relative output directories.
pub const OUTPUT_ROOT_ENV: &str = "GVF_OUTPUT_ROOT";

#[derive(thiserror::Error, Debug)]
pub enum CliError {
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("config validation error: {0}")]
    Validation(String),
    #[error("runtime singularity: {0}")]
    Singularity(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::CheckFailed(_) => exit_code::CHECK_FAILED,
            CliError::Parse(_) => exit_code::CONFIG_PARSE,
            CliError::Validation(_) => exit_code::CONFIG_INVALID,
            CliError::Singularity(_) => exit_code::RUNTIME_SINGULARITY,
            CliError::Io(_) => exit_code::IO,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
