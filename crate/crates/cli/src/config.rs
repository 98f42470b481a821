//! Run configuration: defaults for horizons, precision, workers and the
//! output format. Loaded from the TOML file named by `TORIC_AF_CONFIG`;
//! unknown keys are rejected.

use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Text,
    Dot,
    Csv,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Default step/tail horizon for expansions and searches.
    #[serde(default = "defaults::horizon")]
    pub horizon: usize,
    /// Decimal precision (in bits) used when text output prints
    /// approximate values of exact reals.
    #[serde(default = "defaults::precision_bits")]
    pub precision_bits: u32,
    /// Default state horizon for periodicity detection.
    #[serde(default = "defaults::periodicity_horizon")]
    pub periodicity_horizon: usize,
    /// Default worker count for the sampler.
    #[serde(default = "defaults::workers")]
    pub workers: usize,
    #[serde(default = "defaults::output_format")]
    pub output_format: OutputFormat,
}

mod defaults {
    use super::OutputFormat;

    pub fn horizon() -> usize {
        256
    }

    pub fn precision_bits() -> u32 {
        64
    }

    pub fn periodicity_horizon() -> usize {
        10_000
    }

    pub fn workers() -> usize {
        1
    }

    pub fn output_format() -> OutputFormat {
        OutputFormat::Json
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            horizon: defaults::horizon(),
            precision_bits: defaults::precision_bits(),
            periodicity_horizon: defaults::periodicity_horizon(),
            workers: defaults::workers(),
            output_format: defaults::output_format(),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.horizon == 0 {
            return Err("horizon must be positive".into());
        }
        if self.precision_bits == 0 {
            return Err("precision_bits must be positive".into());
        }
        if self.periodicity_horizon == 0 {
            return Err("periodicity_horizon must be positive".into());
        }
        if self.workers == 0 {
            return Err("workers must be positive".into());
        }
        Ok(())
    }

    /// Loads from the file named by `TORIC_AF_CONFIG`, if set.
    pub fn load_from_env() -> Result<Self, String> {
        let Some(path) = std::env::var_os("TORIC_AF_CONFIG") else {
            return Ok(RunConfig::default());
        };
        let text = std::fs::read_to_string(&path)
            .map_err(|e| format!("cannot read config {path:?}: {e}"))?;
        let config: RunConfig =
            toml::from_str(&text).map_err(|e| format!("bad config {path:?}: {e}"))?;
        config.validate()?;
        Ok(config)
    }
}
