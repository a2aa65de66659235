//! Run manifests: everything needed to replay a run, written before any
//! other output.

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use udconsist_core::{KernelParams, SamplingConfig};

use crate::runner::ParserSpec;

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputRecord {
    pub split: String,
    pub path: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub command: String,
    pub sampling: SamplingConfig,
    pub kernel: KernelParams,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub parser: Option<ParserSpec>,
    pub workers: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub token: Option<String>,
    pub inputs: Vec<InputRecord>,
    pub output: String,
    pub eval_numbers: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub train_numbers: Option<Vec<u32>>,
    pub started_unix: u64,
}

pub fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

impl RunManifest {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes") + "\n"
    }

    pub fn read(path: &Path) -> std::io::Result<RunManifest> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(std::io::Error::other)
    }
}
