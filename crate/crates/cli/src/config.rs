use std::fmt::Display;
use std::path::Path;

use netconfound::experiments::{ExperimentConfig, ExperimentKind};

/// Failure carrying the process exit code: 1 for configuration, 2 at run time.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn config(msg: impl Display) -> Self {
        Self { code: 1, message: msg.to_string() }
    }

    pub fn runtime(msg: impl Display) -> Self {
        Self { code: 2, message: msg.to_string() }
    }
}

/// Parses `key = value` lines; blank lines and `#` comments are ignored.
pub fn parse_flat(text: &str) -> Result<Vec<(String, String)>, Failure> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Failure::config(format!("config line {}: expected `key = value`", k + 1)))?;
        out.push((key.trim().to_string(), value.trim().to_string()));
    }
    Ok(out)
}

/// Defaults, then the file, then flags.
pub fn resolve(
    kind: ExperimentKind,
    seed: u64,
    file: Option<&Path>,
    flags: &[(&str, Option<String>)],
) -> Result<ExperimentConfig, Failure> {
    let mut cfg = ExperimentConfig::new(kind, seed);
    if let Some(path) = file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))?;
        for (key, value) in parse_flat(&text)? {
            if key == "kind" && value != kind.to_string() {
                return Err(Failure::config(format!("config file is for `{value}`, not `{kind}`")));
            }
            cfg.set(&key, &value).map_err(Failure::config)?;
        }
    }
    cfg.seed = seed;
    for (key, value) in flags {
        if let Some(v) = value {
            cfg.set(key, v).map_err(Failure::config)?;
        }
    }
    cfg.validate().map_err(Failure::config)?;
    Ok(cfg)
}

pub fn opt<T: ToString>(v: &Option<T>) -> Option<String> {
    v.as_ref().map(ToString::to_string)
}
