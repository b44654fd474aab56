//! Configuration parsing, command drivers and serialization for the
//! `losmimo` binary.

pub mod commands;
pub mod config;
pub mod output;
pub mod validate;

use thiserror::Error;

pub use config::{ConfigError, RunConfig, Settings};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Settings(#[from] ConfigError),
    #[error("{0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(losmimo::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl From<losmimo::Error> for CliError {
    fn from(e: losmimo::Error) -> Self {
        match e {
            losmimo::Error::InvalidConfig(_)
            | losmimo::Error::SeriesDivergent { .. }
            | losmimo::Error::NotEnoughMoments { .. } => CliError::Config(e.to_string()),
            other => CliError::Numerical(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => EXIT_NUMERICAL,
            CliError::Settings(_) | CliError::Config(_) | CliError::Io { .. } => EXIT_CONFIG,
        }
    }
}

/// Reads a config file and layers `flags` (key, value) over it.
pub fn resolve(config_path: Option<&std::path::Path>, flags: &[(&str, String)]) -> Result<RunConfig, CliError> {
    let mut settings = match config_path {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Read {
                path: path.display().to_string(),
                msg: e.to_string(),
            })?;
            Settings::from_config_text(&text)?
        }
        None => Settings::default(),
    };
    for (key, value) in flags {
        settings.set(key, value.clone())?;
    }
    Ok(RunConfig::from_settings(&settings)?)
}
