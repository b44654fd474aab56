//! Run configuration.
//!
//! A config file is a flat list of `key = value` lines; `#` starts a
//! comment line. Keys are the long flag names without the leading dashes
//! (`snr-db`, `spacing-over-lambda`, ...; underscores are accepted too).
//! Command-line flags are layered over the file, so a flag always wins.

use std::collections::BTreeMap;
use std::path::PathBuf;

use losmimo::capacity::db_to_linear;
use losmimo::geometry::ArrayConfig;
use thiserror::Error;

/// Upper limit on grid and list lengths, so hostile input cannot ask for
/// unbounded allocations.
pub const MAX_LIST_LEN: usize = 10_000;

pub const KEYS: &[&str] = &[
    "nr",
    "nt",
    "spacing-over-lambda",
    "snr-db",
    "snr",
    "samples",
    "seed",
    "terms",
    "outage",
    "strict-convergence",
    "out",
    "format",
    "workers",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("key `{key}` given twice (line {line})")]
    DuplicateKey { key: String, line: usize },
    #[error("invalid value for `{key}`: {msg}")]
    InvalidValue { key: String, msg: String },
    #[error("could not read config file {path}: {msg}")]
    Read { path: String, msg: String },
}

fn invalid(key: &str, msg: impl Into<String>) -> ConfigError {
    ConfigError::InvalidValue {
        key: key.to_string(),
        msg: msg.into(),
    }
}

pub fn normalize_key(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('_', "-")
}

/// Parses config-file text into `(key, value)` pairs in file order.
pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>, ConfigError> {
    let mut pairs: Vec<(String, String)> = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, value) = trimmed.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line,
            msg: "expected `key = value`".into(),
        })?;
        let key = normalize_key(key);
        if key.is_empty() {
            return Err(ConfigError::Syntax {
                line,
                msg: "empty key".into(),
            });
        }
        if !KEYS.contains(&key.as_str()) {
            return Err(ConfigError::UnknownKey(key));
        }
        if pairs.iter().any(|(k, _)| *k == key) {
            return Err(ConfigError::DuplicateKey { key, line });
        }
        pairs.push((key, unquote(value.trim()).to_string()));
    }
    Ok(pairs)
}

fn unquote(value: &str) -> &str {
    for q in ['"', '\''] {
        if value.len() >= 2 && value.starts_with(q) && value.ends_with(q) {
            return &value[1..value.len() - 1];
        }
    }
    value
}

/// Layered key/value settings: later layers override earlier ones.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn from_config_text(text: &str) -> Result<Self, ConfigError> {
        let mut settings = Self::default();
        for (k, v) in parse_config_text(text)? {
            settings.set(&k, v)?;
        }
        Ok(settings)
    }

    /// Sets one key. `snr` and `snr-db` are alternatives, so setting one
    /// clears the other.
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<(), ConfigError> {
        let key = normalize_key(key);
        if !KEYS.contains(&key.as_str()) {
            return Err(ConfigError::UnknownKey(key));
        }
        match key.as_str() {
            "snr" => {
                self.values.remove("snr-db");
            }
            "snr-db" => {
                self.values.remove("snr");
            }
            _ => {}
        }
        self.values.insert(key, value.into());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnrUnit {
    Db,
    Linear,
}

/// SNR points as typed plus their linear values, ascending in `rho`.
#[derive(Debug, Clone, PartialEq)]
pub struct SnrGrid {
    pub unit: SnrUnit,
    pub rho: Vec<f64>,
}

impl SnrGrid {
    pub fn parse(text: &str, unit: SnrUnit) -> Result<Self, String> {
        let values = parse_grid(text)?;
        let rho: Vec<f64> = match unit {
            SnrUnit::Linear => values,
            SnrUnit::Db => values.into_iter().map(db_to_linear).collect(),
        };
        if let Some(r) = rho.iter().find(|r| !(r.is_finite() && **r >= 0.0)) {
            return Err(format!("SNR {r} is not a finite non-negative linear value"));
        }
        Ok(Self { unit, rho })
    }
}

/// Parses `a,b,c` and `start:step:stop` items (inclusive ranges), in any
/// mix. The result is sorted ascending without duplicates.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim) {
        if item.is_empty() {
            return Err("empty list item".into());
        }
        if item.contains(':') {
            let parts: Vec<&str> = item.split(':').collect();
            let [start, step, stop] = parts[..] else {
                return Err(format!("range `{item}` must be start:step:stop"));
            };
            let start = parse_finite(start)?;
            let step = parse_finite(step)?;
            let stop = parse_finite(stop)?;
            if step <= 0.0 {
                return Err(format!("range step must be positive in `{item}`"));
            }
            if stop < start {
                return Err(format!("range `{item}` ends before it starts"));
            }
            let span = ((stop - start) / step + 1e-9).floor();
            if !(span.is_finite() && span < MAX_LIST_LEN as f64) {
                return Err(format!("range `{item}` has too many points"));
            }
            let count = span as usize + 1;
            out.extend((0..count).map(|i| start + i as f64 * step));
        } else {
            out.push(parse_finite(item)?);
        }
        if out.len() > MAX_LIST_LEN {
            return Err(format!("more than {MAX_LIST_LEN} points"));
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    Ok(out)
}

fn parse_finite(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("`{}` is not a number", s.trim()))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{}` is not finite", s.trim()))
    }
}

/// Comma-separated outage levels in `(0, 1)`; empty or `none` means none.
pub fn parse_levels(text: &str) -> Result<Vec<f64>, String> {
    let trimmed = text.trim();
    if trimmed.is_empty() || trimmed.eq_ignore_ascii_case("none") {
        return Ok(Vec::new());
    }
    let mut levels = Vec::new();
    for item in trimmed.split(',') {
        let q = parse_finite(item)?;
        if !(q > 0.0 && q < 1.0) {
            return Err(format!("outage level {q} outside (0, 1)"));
        }
        levels.push(q);
        if levels.len() > MAX_LIST_LEN {
            return Err(format!("more than {MAX_LIST_LEN} levels"));
        }
    }
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    Ok(levels)
}

fn parse_bool(key: &str, s: &str) -> Result<bool, ConfigError> {
    match s.trim().to_ascii_lowercase().as_str() {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        other => Err(invalid(key, format!("`{other}` is not a boolean"))),
    }
}

fn parse_int<T: std::str::FromStr>(key: &str, s: &str) -> Result<T, ConfigError> {
    s.trim()
        .parse()
        .map_err(|_| invalid(key, format!("`{}` is not a valid integer", s.trim())))
}

/// Fully resolved settings for `simulate` and `moments`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub n_r: usize,
    pub n_t: usize,
    pub spacing_over_lambda: f64,
    pub snr: SnrGrid,
    pub samples: u64,
    pub seed: u64,
    pub terms: usize,
    pub outage: Vec<f64>,
    pub strict_convergence: bool,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub workers: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n_r: 64,
            n_t: 64,
            spacing_over_lambda: 0.5,
            snr: SnrGrid::parse("0.05:0.05:1.0", SnrUnit::Linear).expect("static grid"),
            samples: 10_000,
            seed: 0,
            terms: 3,
            outage: vec![0.1, 0.5],
            strict_convergence: false,
            out: None,
            format: OutputFormat::Csv,
            workers: None,
        }
    }
}

impl RunConfig {
    pub fn from_settings(settings: &Settings) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        for (key, value) in &settings.values {
            let key = key.as_str();
            match key {
                "nr" => cfg.n_r = parse_int(key, value)?,
                "nt" => cfg.n_t = parse_int(key, value)?,
                "spacing-over-lambda" => {
                    cfg.spacing_over_lambda = parse_finite(value).map_err(|m| invalid(key, m))?
                }
                "snr-db" => cfg.snr = SnrGrid::parse(value, SnrUnit::Db).map_err(|m| invalid(key, m))?,
                "snr" => cfg.snr = SnrGrid::parse(value, SnrUnit::Linear).map_err(|m| invalid(key, m))?,
                "samples" => cfg.samples = parse_int(key, value)?,
                "seed" => cfg.seed = parse_int(key, value)?,
                "terms" => cfg.terms = parse_int(key, value)?,
                "outage" => cfg.outage = parse_levels(value).map_err(|m| invalid(key, m))?,
                "strict-convergence" => cfg.strict_convergence = parse_bool(key, value)?,
                "out" => cfg.out = (!value.trim().is_empty()).then(|| PathBuf::from(value.trim())),
                "format" => {
                    cfg.format = match value.trim().to_ascii_lowercase().as_str() {
                        "csv" => OutputFormat::Csv,
                        "json" => OutputFormat::Json,
                        other => return Err(invalid(key, format!("unknown format `{other}`"))),
                    }
                }
                "workers" => {
                    let n: usize = parse_int(key, value)?;
                    if n == 0 {
                        return Err(invalid(key, "worker count must be positive"));
                    }
                    cfg.workers = Some(n);
                }
                other => return Err(ConfigError::UnknownKey(other.to_string())),
            }
        }
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<(), ConfigError> {
        self.array().map_err(|e| invalid("nr/nt/spacing-over-lambda", e.to_string()))?;
        if self.samples < 2 {
            return Err(invalid("samples", "need at least 2 samples"));
        }
        if !(1..=6).contains(&self.terms) {
            return Err(invalid("terms", "series terms must be in 1..=6"));
        }
        if self.snr.rho.is_empty() {
            return Err(invalid("snr", "SNR grid is empty"));
        }
        if self.strict_convergence {
            if let Some(r) = self.snr.rho.iter().find(|r| **r > 1.0) {
                return Err(invalid(
                    "strict-convergence",
                    format!("SNR {r} (linear) exceeds 1, where the capacity series diverges"),
                ));
            }
        }
        Ok(())
    }

    pub fn array(&self) -> losmimo::Result<ArrayConfig> {
        ArrayConfig::with_spacing_over_lambda(self.n_r, self.n_t, self.spacing_over_lambda)
    }
}
