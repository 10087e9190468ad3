//! Run settings: defaults, then a `key = value` file, then command-line flags.

use clap::ArgMatches;
use eulerfan::fv2d::config::CONFIG_KEYS;
use eulerfan::fv2d::RunConfig;
use eulerfan::Error;
use std::fmt;
use std::path::Path;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERICAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(m: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: m.into() }
    }

    pub fn data(m: impl Into<String>) -> Self {
        Self { code: EXIT_DATA, message: m.into() }
    }

    pub fn numerical(m: impl Into<String>) -> Self {
        Self { code: EXIT_NUMERICAL, message: m.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Config(_) | Error::Domain(_) | Error::Unsupported(_) => EXIT_USAGE,
            Error::Data(_) | Error::Io(_) | Error::EmptyRegion(_) => EXIT_DATA,
            Error::NoConvergence { .. }
            | Error::DtUnderflow { .. }
            | Error::Inadmissible { .. }
            | Error::Vacuum(_)
            | Error::VacuumExceeded(_)
            | Error::Setup(_) => EXIT_NUMERICAL,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::data(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// `(key, value)` pairs of a config file. `#` starts a comment.
pub fn parse_config_text(text: &str) -> CliResult<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::usage(format!("config line {}: expected key = value", n + 1)));
        };
        let k = k.trim();
        if !CONFIG_KEYS.contains(&k) {
            return Err(CliError::usage(format!("config line {}: unknown key '{k}'", n + 1)));
        }
        out.push((k.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Effective configuration with precedence flag > file > default.
pub fn load(m: &ArgMatches) -> CliResult<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = m.get_one::<String>("config") {
        let text = std::fs::read_to_string(Path::new(path)).map_err(|e| CliError::usage(format!("{path}: {e}")))?;
        for (k, v) in parse_config_text(&text)? {
            cfg.set(&k, &v).map_err(|e| CliError::usage(e.to_string()))?;
        }
    }
    for key in CONFIG_KEYS {
        if let Some(v) = m.get_one::<String>(key) {
            cfg.set(key, v).map_err(|e| CliError::usage(e.to_string()))?;
        }
    }
    Ok(cfg)
}

pub fn config_json(cfg: &RunConfig) -> serde_json::Value {
    let mut map = serde_json::Map::new();
    for (k, v) in cfg.to_pairs() {
        map.insert(k, serde_json::Value::String(v));
    }
    serde_json::Value::Object(map)
}

/// Shortest round-trip formatting used in every CSV.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn parse_list(s: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse::<f64>().map_err(|_| CliError::usage(format!("'{p}' is not a number"))))
        .collect()
}

pub fn write_text(path: &str, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::data(format!("{path}: {e}")))
}
