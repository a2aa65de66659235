//! Run settings: built-in defaults, overridden by a `key = value` file,
//! overridden in turn by command-line flags.

use std::path::Path;

use serde::{Deserialize, Serialize};
use udconsist_core::{KernelParams, SamplingConfig};

pub const DEFAULT_TOKEN: &str = "NNNN";
pub const DEFAULT_PARSER_TIMEOUT: f64 = 600.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Config {
    pub sampling: SamplingConfig,
    pub kernel: KernelParams,
    pub token: String,
    pub parser_cmd: Option<String>,
    pub parser_timeout: f64,
    pub parser_env: Vec<String>,
    pub workers: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            sampling: SamplingConfig::default(),
            kernel: KernelParams::default(),
            token: DEFAULT_TOKEN.to_string(),
            parser_cmd: None,
            parser_timeout: DEFAULT_PARSER_TIMEOUT,
            parser_env: Vec::new(),
            workers: 1,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("{origin}: line {line} is not `key = value`")]
    Syntax { origin: String, line: usize },
    #[error("{origin}: unknown key {key:?}")]
    UnknownKey { origin: String, key: String },
    #[error("{origin}: bad value {value:?} for {key}")]
    Value {
        origin: String,
        key: String,
        value: String,
    },
    #[error("{0}")]
    Invalid(String),
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, ConfigError> {
        let mut c = Config::default();
        c.apply_file(path)?;
        Ok(c)
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.display().to_string(),
            source,
        })?;
        self.apply_str(&text, &path.display().to_string())
    }

    /// Applies `key = value` lines. Blank lines and `#` comments are skipped.
    pub fn apply_str(&mut self, text: &str, origin: &str) -> Result<(), ConfigError> {
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                origin: origin.to_string(),
                line: i + 1,
            })?;
            self.set(k.trim(), v.trim(), origin)?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str, origin: &str) -> Result<(), ConfigError> {
        let bad = || ConfigError::Value {
            origin: origin.to_string(),
            key: key.to_string(),
            value: value.to_string(),
        };
        fn num<T: std::str::FromStr>(
            v: &str,
            bad: impl Fn() -> ConfigError,
        ) -> Result<T, ConfigError> {
            v.parse().map_err(|_| bad())
        }
        let s = &mut self.sampling;
        match key {
            "eval_seed" => s.eval_seed = num(value, bad)?,
            "train_seed" => s.train_seed = num(value, bad)?,
            "eval_count" => s.eval_count = num(value, bad)?,
            "train_count" => s.train_count = num(value, bad)?,
            "oversample" => s.oversample = num(value, bad)?,
            "lo" => s.lo = num(value, bad)?,
            "hi" => s.hi = num(value, bad)?,
            "lambda" => self.kernel.lambda = num(value, bad)?,
            "mu" => self.kernel.mu = num(value, bad)?,
            "tolerance" => self.kernel.tolerance = num(value, bad)?,
            "token" => self.token = value.to_string(),
            "parser_cmd" => self.parser_cmd = Some(value.to_string()),
            "parser_timeout" => self.parser_timeout = num(value, bad)?,
            "parser_env" => self.parser_env.push(value.to_string()),
            "workers" => self.workers = num(value, bad)?,
            _ => {
                return Err(ConfigError::UnknownKey {
                    origin: origin.to_string(),
                    key: key.to_string(),
                })
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |e: &dyn std::fmt::Display| ConfigError::Invalid(e.to_string());
        self.sampling.validate().map_err(|e| invalid(&e))?;
        self.kernel.validate().map_err(|e| invalid(&e))?;
        if self.workers == 0 {
            return Err(ConfigError::Invalid("workers must be at least 1".into()));
        }
        if !(self.parser_timeout > 0.0 && self.parser_timeout.is_finite()) {
            return Err(ConfigError::Invalid(
                "parser_timeout must be positive".into(),
            ));
        }
        Ok(())
    }
}
