use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::dynamics::Step;
use crate::engine::Model;
use crate::error::{Error, Result};
use crate::graph::{ComponentMode, EdgeFormat};
use crate::seeding::Strategy;

/// Largest start delay of the good campaign, as a fraction of the horizon.
pub const MAX_DELAY_FRACTION: f64 = 0.75;

/// Upper end of the uniform quiescence-time distribution.
pub const TAU_MAX: f64 = 5.0;

/// Settings of one experiment.
///
/// Read from a flat `key = value` file; `#` starts a comment and keys may use
/// `-` or `_`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub dataset: PathBuf,
    pub format: Option<EdgeFormat>,
    pub mode: ComponentMode,
    pub model: Model,
    pub strategy: Strategy,
    pub strategy_b: Option<Strategy>,
    pub k: usize,
    pub delta: f64,
    pub lambda: f64,
    pub delay_fraction: f64,
    pub runs: usize,
    pub master_seed: u64,
    pub prob_a: f64,
    pub output: PathBuf,
    /// Fixed horizon; by default it is derived per run.
    pub horizon: Option<Step>,
    pub newcomer_inverted: bool,
    /// Rank weight-based strategies on the weights of this run only.
    pub fixed_seeds_from_run: Option<usize>,
    /// Also write one event trace per run.
    pub traces: bool,
}

const KEYS: &[&str] = &[
    "dataset",
    "format",
    "mode",
    "model",
    "strategy",
    "strategy_b",
    "k",
    "delta",
    "lambda",
    "delay_fraction",
    "runs",
    "master_seed",
    "prob_a",
    "output",
    "horizon",
    "newcomer_inverted",
    "fixed_seeds_from_run",
    "traces",
];

fn normalize_key(key: &str) -> String {
    key.trim().trim_start_matches("--").replace('-', "_").to_ascii_lowercase()
}

/// Reads `key = value` lines into a map, rejecting unknown keys.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
        insert(&mut map, key, value.trim())?;
    }
    Ok(map)
}

fn insert(map: &mut BTreeMap<String, String>, key: &str, value: &str) -> Result<()> {
    let key = normalize_key(key);
    if !KEYS.contains(&key.as_str()) {
        return Err(Error::Config(format!(
            "unknown key '{key}'; valid keys: {}",
            KEYS.join(", ")
        )));
    }
    map.insert(key, value.to_string());
    Ok(())
}

fn take<T>(map: &mut BTreeMap<String, String>, key: &str) -> Result<Option<T>>
where
    T: FromStr,
    T::Err: Display,
{
    map.remove(key)
        .map(|v| {
            v.parse::<T>()
                .map_err(|e| Error::Config(format!("key '{key}': cannot parse '{v}': {e}")))
        })
        .transpose()
}

fn required<T>(map: &mut BTreeMap<String, String>, key: &str) -> Result<T>
where
    T: FromStr,
    T::Err: Display,
{
    take(map, key)?.ok_or_else(|| Error::Config(format!("missing required key '{key}'")))
}

fn parse_mode(s: &str) -> Result<ComponentMode> {
    match s {
        "full" => Ok(ComponentMode::Full),
        "lcc" => Ok(ComponentMode::Lcc),
        other => Err(Error::Config(format!("mode '{other}' must be full or lcc"))),
    }
}

fn parse_bool(s: &str) -> std::result::Result<bool, String> {
    match s {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => Err(format!("'{other}' is not a boolean")),
    }
}

impl ExperimentConfig {
    /// Builds a config from key/value pairs, applying defaults.
    pub fn from_pairs(mut map: BTreeMap<String, String>) -> Result<Self> {
        let dataset: PathBuf = required(&mut map, "dataset")?;
        let mode = match map.remove("mode") {
            Some(m) => parse_mode(&m)?,
            None => default_mode(&dataset),
        };
        let format: Option<EdgeFormat> = take(&mut map, "format")?;
        let bool_key = |map: &mut BTreeMap<String, String>, key: &str| -> Result<bool> {
            map.remove(key)
                .map(|v| parse_bool(&v).map_err(|e| Error::Config(format!("key '{key}': {e}"))))
                .transpose()
                .map(|b| b.unwrap_or(false))
        };
        let cfg = ExperimentConfig {
            format,
            mode,
            model: required(&mut map, "model")?,
            strategy: required(&mut map, "strategy")?,
            strategy_b: take(&mut map, "strategy_b")?,
            k: required(&mut map, "k")?,
            delta: take(&mut map, "delta")?.unwrap_or(0.0),
            lambda: take(&mut map, "lambda")?.unwrap_or(0.0),
            delay_fraction: take(&mut map, "delay_fraction")?.unwrap_or(0.0),
            runs: take(&mut map, "runs")?.unwrap_or(1000),
            master_seed: take(&mut map, "master_seed")?.unwrap_or(0),
            prob_a: take(&mut map, "prob_a")?.unwrap_or(1.0),
            output: take(&mut map, "output")?.unwrap_or_else(|| PathBuf::from("out")),
            horizon: take(&mut map, "horizon")?,
            newcomer_inverted: bool_key(&mut map, "newcomer_inverted")?,
            fixed_seeds_from_run: take(&mut map, "fixed_seeds_from_run")?,
            traces: bool_key(&mut map, "traces")?,
            dataset,
        };
        debug_assert!(map.is_empty());
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_pairs(parse_pairs(text)?)
    }

    /// Reads a config file and applies `overrides` on top. Relative paths in
    /// the file are taken relative to the file's directory.
    pub fn load(path: &Path, overrides: &[(String, String)]) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut map = parse_pairs(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        for key in ["dataset", "output"] {
            if let Some(v) = map.get_mut(key) {
                let p = Path::new(v.as_str());
                if p.is_relative() {
                    *v = base.join(p).to_string_lossy().into_owned();
                }
            }
        }
        for (key, value) in overrides {
            insert(&mut map, key, value)?;
        }
        Self::from_pairs(map)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.runs < 1 {
            return fail("runs must be at least 1".into());
        }
        if self.k < 1 {
            return fail("k must be at least 1".into());
        }
        if !(0.0..=MAX_DELAY_FRACTION).contains(&self.delay_fraction) {
            return fail(format!(
                "delay_fraction {} outside [0, {MAX_DELAY_FRACTION}]",
                self.delay_fraction
            ));
        }
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return fail(format!("delta {} must be >= 0", self.delta));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return fail(format!("lambda {} must be >= 0", self.lambda));
        }
        if !(0.0..=1.0).contains(&self.prob_a) {
            return fail(format!("prob_a {} outside [0, 1]", self.prob_a));
        }
        if self.model.is_competitive() && self.strategy_b.is_none() {
            return fail(format!("model {} needs strategy_b", self.model));
        }
        if self.horizon == Some(0) {
            return fail("horizon must be at least 1".into());
        }
        if let Some(r) = self.fixed_seeds_from_run {
            if r >= self.runs {
                return fail(format!("fixed_seeds_from_run {r} not below runs {}", self.runs));
            }
        }
        Ok(())
    }

    /// The config as `key = value` lines, readable by [`ExperimentConfig::parse`].
    pub fn to_pairs(&self) -> Vec<(&'static str, String)> {
        let mut out = vec![
            ("dataset", self.dataset.display().to_string()),
            ("mode", mode_name(self.mode).to_string()),
            ("model", self.model.to_string()),
            ("strategy", self.strategy.to_string()),
            ("k", self.k.to_string()),
            ("delta", self.delta.to_string()),
            ("lambda", self.lambda.to_string()),
            ("delay_fraction", self.delay_fraction.to_string()),
            ("runs", self.runs.to_string()),
            ("master_seed", self.master_seed.to_string()),
            ("prob_a", self.prob_a.to_string()),
            ("output", self.output.display().to_string()),
            ("newcomer_inverted", self.newcomer_inverted.to_string()),
            ("traces", self.traces.to_string()),
        ];
        if let Some(f) = self.format {
            out.push(("format", format_name(f).to_string()));
        }
        if let Some(s) = self.strategy_b {
            out.push(("strategy_b", s.to_string()));
        }
        if let Some(h) = self.horizon {
            out.push(("horizon", h.to_string()));
        }
        if let Some(r) = self.fixed_seeds_from_run {
            out.push(("fixed_seeds_from_run", r.to_string()));
        }
        out
    }
}

/// Signed multigraphs of edit conflicts are used whole; others are reduced
/// to their largest strongly connected component.
pub fn default_mode(dataset: &Path) -> ComponentMode {
    let name = dataset
        .file_name()
        .map(|n| n.to_string_lossy().to_ascii_lowercase())
        .unwrap_or_default();
    if name.contains("conflict") {
        ComponentMode::Full
    } else {
        ComponentMode::Lcc
    }
}

fn mode_name(mode: ComponentMode) -> &'static str {
    match mode {
        ComponentMode::Full => "full",
        ComponentMode::Lcc => "lcc",
    }
}

fn format_name(format: EdgeFormat) -> &'static str {
    match format {
        EdgeFormat::SnapSigned => "snap-signed",
        EdgeFormat::KonectTimestamped => "konect-timestamped",
    }
}
