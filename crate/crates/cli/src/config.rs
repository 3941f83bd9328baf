//! Line-oriented `key = value` experiment files.
//!
//! ```text
//! # Example 1
//! n = 4
//! d1 = 0.09
//! P = 9000, 5000, 2000, 12000
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use conflict_triad::{AmountState, ClassifierSettings, RegInput, TriadConfig, TriadParams};
use thiserror::Error;

pub const DEFAULT_STEPS: usize = 2000;

const KEYS: [&str; 18] = [
    "n",
    "d1",
    "d2",
    "d3",
    "a",
    "b",
    "c",
    "P",
    "R",
    "Q",
    "steps",
    "reg-input",
    "fix-tol",
    "cyc-tol",
    "window",
    "max-period",
    "tail-fraction",
    "output",
];

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid config: {0}")]
    Validation(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub triad: TriadConfig,
    pub steps: usize,
    pub settings: ClassifierSettings,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(triad: TriadConfig, steps: usize) -> Self {
        Self {
            triad,
            steps,
            settings: ClassifierSettings::default(),
            output: None,
        }
    }

    /// Renders the config in the file format; `parse_config` reads it back
    /// to an equal value.
    pub fn to_file_string(&self) -> String {
        let mut s = String::new();
        let t = &self.triad;
        let join = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(", ");
        writeln!(s, "n = {}", t.n()).unwrap();
        for (name, value) in t.params.named() {
            writeln!(s, "{name} = {value}").unwrap();
        }
        writeln!(s, "P = {}", join(t.initial.p())).unwrap();
        writeln!(s, "R = {}", join(t.initial.r())).unwrap();
        writeln!(s, "Q = {}", join(t.initial.q())).unwrap();
        writeln!(s, "steps = {}", self.steps).unwrap();
        writeln!(s, "reg-input = {}", t.reg_input.name()).unwrap();
        let c = &self.settings;
        writeln!(s, "fix-tol = {}", c.fix_tol).unwrap();
        writeln!(s, "cyc-tol = {}", c.cyc_tol).unwrap();
        writeln!(s, "window = {}", c.window).unwrap();
        writeln!(s, "max-period = {}", c.max_period).unwrap();
        writeln!(s, "tail-fraction = {}", c.tail_fraction).unwrap();
        if let Some(out) = &self.output {
            writeln!(s, "output = {}", out.display()).unwrap();
        }
        s
    }
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}

struct Entry {
    line: usize,
    value: String,
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut entries: HashMap<&'static str, Entry> = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Parse {
            line,
            message: format!("expected `key = value`, found `{content}`"),
        })?;
        let key = key.trim();
        let key = KEYS
            .iter()
            .find(|k| **k == key)
            .copied()
            .ok_or_else(|| ConfigError::Parse {
                line,
                message: format!("unknown key `{key}`"),
            })?;
        let value = value.trim().to_string();
        if value.is_empty() {
            return Err(ConfigError::Parse {
                line,
                message: format!("missing value for `{key}`"),
            });
        }
        if let Some(prev) = entries.insert(key, Entry { line, value }) {
            return Err(ConfigError::Parse {
                line,
                message: format!("duplicate key `{key}` (first on line {})", prev.line),
            });
        }
    }
    build(&entries)
}

fn scalar<T: std::str::FromStr>(
    entries: &HashMap<&'static str, Entry>,
    key: &str,
) -> Result<Option<T>, ConfigError> {
    entries
        .get(key)
        .map(|e| {
            e.value.parse().map_err(|_| ConfigError::Parse {
                line: e.line,
                message: format!("cannot parse `{}` for `{key}`", e.value),
            })
        })
        .transpose()
}

fn required<T: std::str::FromStr>(
    entries: &HashMap<&'static str, Entry>,
    key: &str,
) -> Result<T, ConfigError> {
    scalar(entries, key)?.ok_or_else(|| ConfigError::Validation(format!("missing key `{key}`")))
}

fn array(entries: &HashMap<&'static str, Entry>, key: &str) -> Result<Vec<f64>, ConfigError> {
    let e = entries
        .get(key)
        .ok_or_else(|| ConfigError::Validation(format!("missing key `{key}`")))?;
    e.value
        .split(',')
        .map(|item| {
            item.trim().parse::<f64>().map_err(|_| ConfigError::Parse {
                line: e.line,
                message: format!("cannot parse `{}` in `{key}`", item.trim()),
            })
        })
        .collect()
}

fn invalid(e: impl std::fmt::Display) -> ConfigError {
    ConfigError::Validation(e.to_string())
}

fn build(entries: &HashMap<&'static str, Entry>) -> Result<ExperimentConfig, ConfigError> {
    let n: usize = required(entries, "n")?;
    let p = array(entries, "P")?;
    let r = array(entries, "R")?;
    let q = array(entries, "Q")?;
    for (name, v) in [("P", &p), ("R", &r), ("Q", &q)] {
        if v.len() != n {
            return Err(ConfigError::Validation(format!(
                "`{name}` has {} values but n = {n}",
                v.len()
            )));
        }
    }
    let params = TriadParams {
        d1: required(entries, "d1")?,
        d2: required(entries, "d2")?,
        d3: required(entries, "d3")?,
        a: required(entries, "a")?,
        b: required(entries, "b")?,
        c: required(entries, "c")?,
    };
    params.validate().map_err(invalid)?;
    let initial = AmountState::new(p, r, q).map_err(invalid)?;

    let reg_input = match entries.get("reg-input") {
        None => RegInput::default(),
        Some(e) => match e.value.as_str() {
            "pre" => RegInput::Pre,
            "post" => RegInput::Post,
            other => {
                return Err(ConfigError::Parse {
                    line: e.line,
                    message: format!("reg-input must be `pre` or `post`, found `{other}`"),
                })
            }
        },
    };
    let triad = TriadConfig::new(params, initial)
        .map_err(invalid)?
        .with_reg_input(reg_input);

    let steps = scalar(entries, "steps")?.unwrap_or(DEFAULT_STEPS);
    if steps == 0 {
        return Err(ConfigError::Validation("steps must be at least 1".into()));
    }
    let d = ClassifierSettings::default();
    let settings = ClassifierSettings {
        fix_tol: scalar(entries, "fix-tol")?.unwrap_or(d.fix_tol),
        cyc_tol: scalar(entries, "cyc-tol")?.unwrap_or(d.cyc_tol),
        window: scalar(entries, "window")?.unwrap_or(d.window),
        max_period: scalar(entries, "max-period")?.unwrap_or(d.max_period),
        tail_fraction: scalar(entries, "tail-fraction")?.unwrap_or(d.tail_fraction),
    };
    settings.validate().map_err(invalid)?;
    let output = entries.get("output").map(|e| PathBuf::from(&e.value));
    Ok(ExperimentConfig {
        triad,
        steps,
        settings,
        output,
    })
}
