//! Experiment configuration: a flat key = value manifest file merged with
//! command-line flags. Flags win over the file, the file wins over
//! defaults; the worker count can also come from `BP4M_WORKERS`.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::json;

use bp4m::decoders::{DecoderConfig, DecoderVariant, Schedule, WeightRule};
use bp4m::PriorMode;

use crate::error::{CliError, Result};

/// Environment variable consulted for the worker count when neither the
/// `--workers` flag nor the config file sets one.
pub const WORKERS_ENV: &str = "BP4M_WORKERS";

/// Raw manifest contents. List-valued keys are comma-separated strings so
/// the file stays a flat key = value document.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub decoders: Option<String>,
    pub schedule: Option<String>,
    pub distances: Option<String>,
    pub p_start: Option<f64>,
    pub p_stop: Option<f64>,
    pub p_step: Option<f64>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub prior_mode: Option<String>,
    pub literal_prior_freeze: Option<bool>,
    pub weight_rule: Option<String>,
    pub out: Option<String>,
}

pub fn load_file(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text)
        .map_err(|e| CliError::Config(format!("bad config {}: {e}", path.display())))
}

/// Sweep flag values, all optional; `None` defers to the config file and
/// then to the defaults.
#[derive(Debug, Default)]
pub struct SweepOverrides {
    pub decoders: Option<Vec<String>>,
    pub schedule: Option<String>,
    pub distances: Option<Vec<usize>>,
    pub p_start: Option<f64>,
    pub p_stop: Option<f64>,
    pub p_step: Option<f64>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub prior_mode: Option<String>,
    pub literal_prior_freeze: Option<bool>,
    pub weight_rule: Option<String>,
    pub out: Option<PathBuf>,
}

/// Fully resolved sweep configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub decoders: Vec<DecoderVariant>,
    pub schedule: Schedule,
    pub distances: Vec<usize>,
    pub p_values: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
    pub prior_mode: PriorMode,
    pub literal_prior_freeze: bool,
    pub weight_rule: WeightRule,
    pub out: PathBuf,
}

impl RunConfig {
    pub fn decoder_configs(&self) -> Vec<DecoderConfig<f64>> {
        self.decoders
            .iter()
            .map(|&variant| DecoderConfig {
                variant,
                schedule: self.schedule,
                prior_mode: self.prior_mode,
                literal_prior_freeze: self.literal_prior_freeze,
                weight_rule: self.weight_rule,
                ..DecoderConfig::default()
            })
            .collect()
    }

    /// Config echo for the JSON summary.
    pub fn echo(&self) -> serde_json::Value {
        json!({
            "decoders": self.decoders.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            "schedule": self.schedule.to_string(),
            "distances": self.distances,
            "p_values": self.p_values,
            "trials": self.trials,
            "seed": self.seed,
            "workers": self.workers,
            "prior_mode": self.prior_mode.to_string(),
            "literal_prior_freeze": self.literal_prior_freeze,
            "weight_rule": self.weight_rule.to_string(),
            "out": self.out.display().to_string(),
        })
    }
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|e| CliError::Config(format!("bad {what} entry '{s}': {e}")))
        })
        .collect()
}

/// Inclusive arithmetic grid from `start` to `stop`. Each point is rounded
/// to nine decimals so accumulated float error cannot leak into cell keys.
pub fn p_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !step.is_finite() || step <= 0.0 {
        return Err(CliError::Config(format!("p_step must be positive, got {step}")));
    }
    if !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(CliError::Config(format!(
            "bad p range [{start}, {stop}]"
        )));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    let mut ps = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let p = ((start + i as f64 * step) * 1e9).round() / 1e9;
        if p <= stop + 1e-9 {
            ps.push(p);
        }
    }
    if ps.is_empty() {
        return Err(CliError::Config("empty p grid".into()));
    }
    Ok(ps)
}

fn env_workers() -> Result<Option<usize>> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => v
            .parse()
            .map(Some)
            .map_err(|e| CliError::Config(format!("bad {WORKERS_ENV} value '{v}': {e}"))),
        Err(_) => Ok(None),
    }
}

/// Merge defaults, manifest and flags into a validated configuration.
pub fn resolve(file: FileConfig, flags: SweepOverrides) -> Result<RunConfig> {
    let decoder_names: Vec<String> = match (flags.decoders, file.decoders) {
        (Some(v), _) => v,
        (None, Some(s)) => s.split(',').map(|x| x.trim().to_string()).collect(),
        (None, None) => vec!["bp4m".to_string()],
    };
    let mut decoders = Vec::new();
    for name in &decoder_names {
        let d: DecoderVariant = name.parse()?;
        if !decoders.contains(&d) {
            decoders.push(d);
        }
    }
    if decoders.is_empty() {
        return Err(CliError::Config("no decoders selected".into()));
    }

    let schedule: Schedule = flags
        .schedule
        .or(file.schedule)
        .unwrap_or_else(|| "log_n".to_string())
        .parse()?;

    let mut distances = match (flags.distances, file.distances) {
        (Some(v), _) => v,
        (None, Some(s)) => parse_list(&s, "distance")?,
        (None, None) => vec![3, 5],
    };
    distances.sort_unstable();
    distances.dedup();
    if distances.is_empty() {
        return Err(CliError::Config("no distances selected".into()));
    }

    let p_start = flags.p_start.or(file.p_start).unwrap_or(0.08);
    let p_stop = flags.p_stop.or(file.p_stop).unwrap_or(0.18);
    let p_step = flags.p_step.or(file.p_step).unwrap_or(0.01);
    let p_values = p_grid(p_start, p_stop, p_step)?;

    let trials = flags.trials.or(file.trials).unwrap_or(1000);
    if trials == 0 {
        return Err(CliError::Config("trials must be at least 1".into()));
    }

    let workers = match flags.workers {
        Some(w) => w,
        None => env_workers()?.or(file.workers).unwrap_or(0),
    };

    let prior_mode: PriorMode = flags
        .prior_mode
        .or(file.prior_mode)
        .unwrap_or_else(|| "marginal".to_string())
        .parse()?;
    let literal_prior_freeze = flags
        .literal_prior_freeze
        .or(file.literal_prior_freeze)
        .unwrap_or(false);
    let weight_rule: WeightRule = flags
        .weight_rule
        .or(file.weight_rule)
        .unwrap_or_else(|| "matching_weight".to_string())
        .parse()?;

    let out = flags
        .out
        .or(file.out.map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("sweep.csv"));

    Ok(RunConfig {
        decoders,
        schedule,
        distances,
        p_values,
        trials,
        seed: flags.seed.or(file.seed).unwrap_or(0),
        workers,
        prior_mode,
        literal_prior_freeze,
        weight_rule,
        out,
    })
}
