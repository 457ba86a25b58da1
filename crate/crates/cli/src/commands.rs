//! The three subcommands: `sweep`, `threshold`, and `decode-one`.

use std::path::PathBuf;

use clap::Args;

use bp4m::code::syndrome;
use bp4m::decoders::{DecoderConfig, DecoderVariant, Schedule, WeightRule};
use bp4m::decoding_graph::{var_kind, VarId, VarKind};
use bp4m::harness::{estimate_threshold, sweep, CodeTables, SweepPlan, ThresholdRequest};
use bp4m::code::logical_failure;
use bp4m::noise::{marginal_flip_rate, sample_depolarizing, trial_rng};
use bp4m::{build_decoding_graph, decode, ErrorPattern, Pauli, PriorMode};

use crate::config::{load_file, resolve, FileConfig, RunConfig, SweepOverrides};
use crate::error::{CliError, Result};
use crate::rows::{
    read_csv, rows_to_sweep, write_csv, CrossingJson, CsvRow, JsonRow, PseudoThresholdJson,
    SweepSummary, ThresholdEntryJson, ThresholdReport,
};

pub const BUILD_ID: &str = env!("BP4M_BUILD_ID");

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Flat key = value manifest; every flag below overrides it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Comma-separated decoders: mwpm, bp4m, bp4mf, bp4m+m.
    #[arg(long, value_delimiter = ',')]
    pub decoders: Option<Vec<String>>,
    /// Iteration schedule: log_n, sqrt_n or fixed_T.
    #[arg(long)]
    pub schedule: Option<String>,
    /// Comma-separated odd code distances.
    #[arg(long, value_delimiter = ',')]
    pub distances: Option<Vec<usize>>,
    #[arg(long)]
    pub p_start: Option<f64>,
    #[arg(long)]
    pub p_stop: Option<f64>,
    #[arg(long)]
    pub p_step: Option<f64>,
    /// Monte Carlo trials per (decoder, d, p) cell.
    #[arg(long)]
    pub trials: Option<u64>,
    /// Master seed; every trial derives its own stream from it.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (0 = one per CPU); BP4M_WORKERS is consulted when
    /// unset.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Prior mode: marginal (2p/3) or literal (p).
    #[arg(long)]
    pub prior_mode: Option<String>,
    /// Freeze prior messages at one half.
    #[arg(long)]
    pub literal_prior_freeze: Option<bool>,
    /// Candidate ranking: matching_weight or residual_qubits.
    #[arg(long)]
    pub weight_rule: Option<String>,
    /// Output CSV path; the JSON summary lands next to it as .json.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl SweepArgs {
    fn into_config(self) -> Result<RunConfig> {
        let file = match &self.config {
            Some(path) => load_file(path)?,
            None => FileConfig::default(),
        };
        let overrides = SweepOverrides {
            decoders: self.decoders,
            schedule: self.schedule,
            distances: self.distances,
            p_start: self.p_start,
            p_stop: self.p_stop,
            p_step: self.p_step,
            trials: self.trials,
            seed: self.seed,
            workers: self.workers,
            prior_mode: self.prior_mode,
            literal_prior_freeze: self.literal_prior_freeze,
            weight_rule: self.weight_rule,
            out: self.out,
        };
        resolve(file, overrides)
    }
}

pub fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let cfg = args.into_config()?;
    let plan = SweepPlan {
        distances: cfg.distances.clone(),
        p_values: cfg.p_values.clone(),
        configs: cfg.decoder_configs(),
        trials: cfg.trials,
        master_seed: cfg.seed,
    };
    let result = sweep(&plan, cfg.workers)?;

    let rows: Vec<CsvRow> = result.cells.iter().map(CsvRow::from_cell).collect();
    write_csv(&cfg.out, &rows)?;

    let summary = SweepSummary {
        build_id: BUILD_ID.to_string(),
        config: cfg.echo(),
        rows: result.cells.iter().map(JsonRow::from_cell).collect(),
    };
    let json_path = cfg.out.with_extension("json");
    let text = serde_json::to_string_pretty(&summary)
        .map_err(|e| CliError::Io(format!("cannot serialize summary: {e}")))?;
    std::fs::write(&json_path, text + "\n")
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", json_path.display())))?;

    println!(
        "wrote {} cells to {} (summary: {})",
        rows.len(),
        cfg.out.display(),
        json_path.display()
    );
    Ok(())
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    /// Sweep CSV produced by the sweep subcommand.
    #[arg(long)]
    pub csv: PathBuf,
    /// Restrict to one decoder (default: every decoder in the file).
    #[arg(long)]
    pub decoder: Option<String>,
    /// Restrict to one schedule.
    #[arg(long)]
    pub schedule: Option<String>,
    /// Distances to use (default: every distance present).
    #[arg(long, value_delimiter = ',')]
    pub distances: Option<Vec<usize>>,
    /// Bootstrap replicates for the confidence interval.
    #[arg(long, default_value_t = 200)]
    pub resamples: usize,
    #[arg(long, default_value_t = 0)]
    pub bootstrap_seed: u64,
    /// Report path (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn cmd_threshold(args: ThresholdArgs) -> Result<()> {
    let rows = read_csv(&args.csv)?;
    let data = rows_to_sweep(&rows)?;

    let decoder_filter: Option<DecoderVariant> =
        args.decoder.as_deref().map(str::parse).transpose()?;
    let schedule_filter: Option<Schedule> =
        args.schedule.as_deref().map(str::parse).transpose()?;

    let mut groups: Vec<(DecoderVariant, Schedule)> = Vec::new();
    for c in &data.cells {
        if decoder_filter.is_some_and(|d| d != c.decoder) {
            continue;
        }
        if schedule_filter.is_some_and(|s| s != c.schedule) {
            continue;
        }
        if !groups.contains(&(c.decoder, c.schedule)) {
            groups.push((c.decoder, c.schedule));
        }
    }
    if groups.is_empty() {
        return Err(CliError::Config(format!(
            "no rows in {} match the decoder/schedule selection",
            args.csv.display()
        )));
    }

    let mut entries = Vec::new();
    for (decoder, schedule) in groups {
        let req = ThresholdRequest {
            decoder,
            schedule,
            distances: args.distances.clone().unwrap_or_default(),
            resamples: args.resamples,
            bootstrap_seed: args.bootstrap_seed,
        };
        let est = estimate_threshold(&data, &req)?;
        entries.push(ThresholdEntryJson {
            decoder: decoder.to_string(),
            schedule: schedule.to_string(),
            crossings: est
                .crossings
                .iter()
                .map(|c| CrossingJson {
                    d_low: c.d_low,
                    d_high: c.d_high,
                    crossing: c.crossing,
                })
                .collect(),
            estimate: est.estimate,
            ci_low: est.ci_low,
            ci_high: est.ci_high,
            pseudo_thresholds: est
                .pseudo_thresholds
                .iter()
                .map(|&(d, crossing)| PseudoThresholdJson { d, crossing })
                .collect(),
            out_of_range: est.out_of_range,
        });
    }

    let report = ThresholdReport {
        build_id: BUILD_ID.to_string(),
        csv: args.csv.display().to_string(),
        entries,
    };
    let text = serde_json::to_string_pretty(&report)
        .map_err(|e| CliError::Io(format!("cannot serialize report: {e}")))?;
    match &args.out {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?,
        None => println!("{text}"),
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct DecodeOneArgs {
    /// Code distance (odd).
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    /// Physical depolarizing rate.
    #[arg(long, default_value_t = 0.1)]
    pub p: f64,
    #[arg(long, default_value = "bp4m")]
    pub decoder: String,
    #[arg(long, default_value = "log_n")]
    pub schedule: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Trial index within the seed's stream.
    #[arg(long, default_value_t = 0)]
    pub trial: u64,
    #[arg(long, default_value = "marginal")]
    pub prior_mode: String,
    #[arg(long, default_value_t = false)]
    pub literal_prior_freeze: bool,
    #[arg(long, default_value = "matching_weight")]
    pub weight_rule: String,
}

fn var_name(s: usize, v: VarId) -> String {
    match var_kind(s, v) {
        VarKind::Pair(a, b) => format!("v({a},{b})"),
        VarKind::Boundary(i) => format!("u({i})"),
    }
}

fn selection_text(s: usize, selected: &[VarId]) -> String {
    if selected.is_empty() {
        return "(none)".to_string();
    }
    selected
        .iter()
        .map(|&v| var_name(s, v))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn cmd_decode_one(args: DecodeOneArgs) -> Result<()> {
    let decoder: DecoderVariant = args.decoder.parse()?;
    let schedule: Schedule = args.schedule.parse()?;
    let prior_mode: PriorMode = args.prior_mode.parse()?;
    let weight_rule: WeightRule = args.weight_rule.parse()?;
    if !(0.0..1.0).contains(&args.p) {
        return Err(CliError::Config(format!(
            "p must be in [0, 1), got {}",
            args.p
        )));
    }
    let flip_rate = marginal_flip_rate(args.p, prior_mode);
    if args.p > 0.0 && !(0.0..0.5).contains(&flip_rate) {
        return Err(CliError::Config(format!(
            "p = {} maps to edge flip rate {flip_rate} outside (0, 0.5)",
            args.p
        )));
    }

    let tables = CodeTables::surface(args.d)?;
    let code = &tables.code;
    let mut rng = trial_rng(args.seed, args.trial);
    let sample = sample_depolarizing(code.n_qubits(), args.p, &mut rng)?;

    let cfg = DecoderConfig::<f64> {
        variant: decoder,
        schedule,
        prior_mode,
        literal_prior_freeze: args.literal_prior_freeze,
        weight_rule,
        record_trace: true,
        ..DecoderConfig::default()
    };

    println!(
        "instance: d={} n={} decoder={decoder} schedule={schedule} p={} seed={} trial={}",
        args.d,
        code.n_qubits(),
        args.p,
        args.seed,
        args.trial
    );
    println!(
        "sampled error: X/Y flips on {:?}, Z/Y flips on {:?}",
        sample.x_part.flipped_qubits(),
        sample.z_part.flipped_qubits()
    );

    let mut any_fail = false;
    for (checks, part, label) in [
        (Pauli::X, &sample.z_part, "X checks vs Z-type flips"),
        (Pauli::Z, &sample.x_part, "Z checks vs X-type flips"),
    ] {
        println!("\nsector: {label}");
        let metric = match checks {
            Pauli::X => &tables.x_checks,
            Pauli::Z => &tables.z_checks,
        };
        let syn = syndrome(code, part, checks)?;
        println!(
            "  syndrome: {} detection events at checks {:?}",
            syn.weight(),
            syn.unsatisfied()
        );
        if syn.is_trivial() {
            let empty = ErrorPattern::zeros(code.n_qubits());
            let fail = logical_failure(code, part, &empty, checks)?;
            any_fail |= fail;
            println!("  trivial syndrome; empty candidate");
            println!(
                "  sector verdict: {}",
                if fail { "logical failure" } else { "success" }
            );
            continue;
        }
        let g = build_decoding_graph::<f64>(&syn, metric, flip_rate)?;
        let s = g.s();
        println!("  decoding graph: s={s}, {} edge variables", g.n_vars());
        for line in g.edge_list_text().lines() {
            println!("    {line}");
        }
        let out = decode(&g, metric, &cfg);
        if let Some(trace) = &out.trace {
            println!("  iterations: {}", out.iterations_run);
            for t in trace {
                println!(
                    "    t={} converged={} selected={} weight={}",
                    t.iteration,
                    t.converged,
                    selection_text(s, &t.selected),
                    t.weight
                );
            }
        }
        let c = &out.candidate;
        println!(
            "  candidate: source={} iteration={} weight={} edges={}",
            c.source,
            c.iteration,
            c.weight,
            selection_text(s, &c.selected)
        );
        println!("  correction qubits: {:?}", c.e_hat.flipped_qubits());
        if out.mwpm_invoked && decoder == DecoderVariant::Bp4mPlusM {
            println!("  exact-matching fallback was invoked");
        }
        let fail = logical_failure(code, part, &c.e_hat, checks)?;
        any_fail |= fail;
        println!(
            "  sector verdict: {}",
            if fail { "logical failure" } else { "success" }
        );
    }

    println!(
        "\noverall verdict: {}",
        if any_fail {
            "logical failure"
        } else {
            "success"
        }
    );
    Ok(())
}
