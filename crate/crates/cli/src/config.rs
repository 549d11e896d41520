//! Flat `key = value` configuration files.
//!
//! Lines are `key = value`; `#` starts a comment and blank lines are ignored.
//! Values may be wrapped in double quotes. A file describes one scenario, or
//! a sweep when `sweep.axis` and `sweep.points` are both present.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use tgi_core::{
    DetectorConfig, DividerMode, Estimator, GateProfile, IntensityDistribution, Message,
    NoiseConfig, NoiseKind, OpticalMode, QuantumConfig, Scenario, SimError, SourceConfig,
    SweepAxis, SweepSpec, TimeGrid,
};

/// Recognized keys with their defaults (`None` marks a required key).
pub const KEYS: &[(&str, Option<&str>)] = &[
    ("mode", None),
    ("message", None),
    ("bit_depth", Some("1")),
    ("bins_per_symbol", Some("5")),
    ("source.distribution", Some("exponential")),
    ("source.mean", Some("1.0")),
    ("detector.w", Some("100")),
    ("detector.p", Some("0.5")),
    ("noise.kind", Some("none")),
    ("noise.na_ratio", Some("0")),
    ("noise.optical_mode", Some("budget")),
    ("n", None),
    ("replicates", Some("20")),
    ("seed", Some("42")),
    ("calibration.n", Some("10000")),
    ("divider.mode", Some("midpoint")),
    ("divider.delta", Some("0.05")),
    ("quantum.pair_prob", Some("0.1")),
    ("quantum.eta_idler", Some("0.6")),
    ("quantum.eta_signal", Some("0.2")),
    ("quantum.dark_idler", Some("1e-5")),
    ("quantum.dark_signal", Some("1e-5")),
    ("gate_profile.path", Some("none")),
    ("sweep.axis", Some("none")),
    ("sweep.points", Some("none")),
];

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    fn at(line: Option<usize>, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq)]
pub enum Config {
    Scenario(Scenario),
    Sweep(SweepSpec),
}

impl Config {
    pub fn base(&self) -> &Scenario {
        match self {
            Config::Scenario(s) => s,
            Config::Sweep(spec) => &spec.base,
        }
    }

    pub fn set_seed(&mut self, seed: u64) {
        match self {
            Config::Scenario(s) => s.master_seed = seed,
            Config::Sweep(spec) => spec.base.master_seed = seed,
        }
    }
}

struct Entry {
    line: Option<usize>,
    value: String,
}

struct Document {
    entries: BTreeMap<&'static str, Entry>,
}

impl Document {
    fn lex(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = strip_comment(raw).trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| {
                ConfigError::at(
                    Some(line),
                    format!("expected `key = value`, got `{content}`"),
                )
            })?;
            let key = key.trim();
            let &(known, _) = KEYS
                .iter()
                .find(|(k, _)| *k == key)
                .ok_or_else(|| ConfigError::at(Some(line), format!("unknown key `{key}`")))?;
            let value = unquote(value.trim())
                .map_err(|m| ConfigError::at(Some(line), format!("{key}: {m}")))?;
            let previous = entries.insert(
                known,
                Entry {
                    line: Some(line),
                    value,
                },
            );
            if let Some(prev) = previous {
                return Err(ConfigError::at(
                    Some(line),
                    format!(
                        "duplicate key `{key}` (first set on line {})",
                        prev.line.unwrap_or(0)
                    ),
                ));
            }
        }
        for &(key, default) in KEYS {
            match (entries.contains_key(key), default) {
                (true, _) => {}
                (false, Some(d)) => {
                    entries.insert(
                        key,
                        Entry {
                            line: None,
                            value: d.to_string(),
                        },
                    );
                }
                (false, None) => {
                    return Err(ConfigError::at(
                        None,
                        format!("missing required key `{key}`"),
                    ))
                }
            }
        }
        Ok(Self { entries })
    }

    fn entry(&self, key: &str) -> &Entry {
        &self.entries[key]
    }

    fn line(&self, key: &str) -> Option<usize> {
        self.entries.get(key).and_then(|e| e.line)
    }

    fn str(&self, key: &str) -> &str {
        &self.entry(key).value
    }

    fn is_set(&self, key: &str) -> bool {
        self.str(key) != "none"
    }

    fn get<V: std::str::FromStr>(&self, key: &str, what: &str) -> Result<V, ConfigError> {
        let e = self.entry(key);
        e.value.parse().map_err(|_| {
            ConfigError::at(e.line, format!("{key}: expected {what}, got `{}`", e.value))
        })
    }

    /// Attributes a core error to the key that names it, else to `key`.
    fn sim<V>(&self, key: &str, r: Result<V, SimError>) -> Result<V, ConfigError> {
        r.map_err(|err| match err {
            SimError::InvalidParameter { name, .. } => {
                ConfigError::at(self.line(name), err.to_string())
            }
            other => ConfigError::at(self.line(key), format!("{key}: {other}")),
        })
    }
}

fn strip_comment(line: &str) -> &str {
    let mut quoted = false;
    for (i, ch) in line.char_indices() {
        match ch {
            '"' => quoted = !quoted,
            '#' if !quoted => return &line[..i],
            _ => {}
        }
    }
    line
}

fn unquote(value: &str) -> Result<String, String> {
    match value.strip_prefix('"') {
        Some(rest) => rest
            .strip_suffix('"')
            .filter(|inner| !inner.contains('"'))
            .map(str::to_string)
            .ok_or_else(|| "unterminated quoted value".to_string()),
        None if value.is_empty() => Err("empty value".into()),
        None => Ok(value.to_string()),
    }
}

/// Parses and validates a configuration; relative paths resolve against the
/// current directory.
pub fn parse_config(text: &str) -> Result<Config, ConfigError> {
    parse_config_in(text, Path::new("."))
}

/// Like [`parse_config`], resolving relative paths against `base`.
pub fn parse_config_in(text: &str, base: &Path) -> Result<Config, ConfigError> {
    let doc = Document::lex(text)?;

    let mode: Estimator = doc.get("mode", "ctgi|cdtgi|qtgi|qdtgi")?;
    let bit_depth: u32 = doc.get("bit_depth", "an integer")?;
    let message = doc.sim("message", Message::parse(doc.str("message"), bit_depth))?;
    let bins_per_symbol: usize = doc.get("bins_per_symbol", "a positive integer")?;
    let grid = doc.sim(
        "bins_per_symbol",
        TimeGrid::new(bins_per_symbol, message.len()),
    )?;

    let distribution: IntensityDistribution = doc.get(
        "source.distribution",
        "exponential|uniform|gaussian-truncated",
    )?;
    let source = doc.sim(
        "source.mean",
        SourceConfig::new(distribution, doc.get("source.mean", "a number")?),
    )?;

    let kind: NoiseKind = doc.get("noise.kind", "none|optical|electrical")?;
    let optical_mode: OpticalMode = doc.get("noise.optical_mode", "budget|per_bin")?;
    let noise = doc.sim(
        "noise.na_ratio",
        NoiseConfig::new(kind, doc.get("noise.na_ratio", "a number")?, optical_mode),
    )?;

    let gate = if doc.is_set("gate_profile.path") {
        let path: PathBuf = base.join(doc.str("gate_profile.path"));
        let text = std::fs::read_to_string(&path).map_err(|e| {
            ConfigError::at(
                doc.line("gate_profile.path"),
                format!("gate_profile.path: {}: {e}", path.display()),
            )
        })?;
        Some(doc.sim("gate_profile.path", GateProfile::parse(&text))?)
    } else {
        None
    };
    let w: u32 = doc.get("detector.w", "an integer")?;
    let p: f64 = doc.get("detector.p", "a number")?;
    let detector = doc.sim("detector.w", DetectorConfig::new(w, p, noise, gate))?;

    let quantum = if mode.is_quantum() {
        Some(doc.sim(
            "quantum.pair_prob",
            QuantumConfig::new(
                doc.get("quantum.pair_prob", "a probability")?,
                doc.get("quantum.eta_idler", "a probability")?,
                doc.get("quantum.eta_signal", "a probability")?,
                doc.get("quantum.dark_idler", "a probability")?,
                doc.get("quantum.dark_signal", "a probability")?,
            ),
        )?)
    } else {
        None
    };

    let divider_mode = match doc.str("divider.mode") {
        "midpoint" => DividerMode::Midpoint,
        "randomized" => DividerMode::Randomized {
            delta: doc.get("divider.delta", "a number")?,
        },
        other => {
            return Err(ConfigError::at(
                doc.line("divider.mode"),
                format!("divider.mode: expected midpoint|randomized, got `{other}`"),
            ))
        }
    };

    let scenario = Scenario {
        mode,
        grid,
        message,
        source,
        quantum,
        detector,
        n: doc.get("n", "a positive integer")?,
        replicates: doc.get("replicates", "a positive integer")?,
        master_seed: doc.get("seed", "an unsigned integer")?,
        divider_mode,
        calibration_shots: doc.get("calibration.n", "a positive integer")?,
    };
    if let Err(e) = scenario.validate() {
        let key = if matches!(e, SimError::GateProfile(_)) {
            "gate_profile.path"
        } else {
            "n"
        };
        return doc.sim(key, Err(e));
    }

    match (doc.is_set("sweep.axis"), doc.is_set("sweep.points")) {
        (false, false) => Ok(Config::Scenario(scenario)),
        (true, true) => {
            let axis: SweepAxis = doc.get("sweep.axis", "n|w|p|na_optical|na_electrical")?;
            let points = doc
                .str("sweep.points")
                .split(',')
                .map(|p| {
                    p.trim().parse::<f64>().map_err(|_| {
                        ConfigError::at(
                            doc.line("sweep.points"),
                            format!("sweep.points: `{}` is not a number", p.trim()),
                        )
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let spec = SweepSpec::new(scenario, axis, points).map_err(|e| {
                ConfigError::at(doc.line("sweep.points"), format!("sweep.points: {e}"))
            })?;
            Ok(Config::Sweep(spec))
        }
        (true, false) => Err(ConfigError::at(
            doc.line("sweep.axis"),
            "sweep.axis needs sweep.points",
        )),
        (false, true) => Err(ConfigError::at(
            doc.line("sweep.points"),
            "sweep.points needs sweep.axis",
        )),
    }
}
