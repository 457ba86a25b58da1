//! Monte Carlo experiment engine: run seeded trials, aggregate logical error
//! rates, convergence rates and timing per sweep cell, and estimate
//! thresholds from the aggregated curves.
//!
//! Trials are embarrassingly parallel and counter-seeded, so every aggregate
//! except wall time is bit-identical across runs and worker counts.

use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use std::time::Instant;

use crate::code::{build_surface_code, logical_failure, syndrome, CodeSpec, ErrorPattern, Pauli};
use crate::decoders::{decode, DecoderConfig, DecoderVariant, Schedule};
use crate::decoding_graph::{build_decoding_graph, precompute_metric, MetricTable};
use crate::error::{Error, Result};
use crate::noise::{marginal_flip_rate, sample_depolarizing, trial_rng};
use crate::real::Real;

/// A code together with the precomputed metric tables for both check types.
/// Building this once per distance keeps the per-trial path free of
/// all-pairs shortest-path work.
#[derive(Debug, Clone)]
pub struct CodeTables {
    pub code: CodeSpec,
    pub x_checks: MetricTable,
    pub z_checks: MetricTable,
}

impl CodeTables {
    pub fn new(code: CodeSpec) -> Result<Self> {
        let x_checks = precompute_metric(&code, Pauli::X)?;
        let z_checks = precompute_metric(&code, Pauli::Z)?;
        Ok(Self {
            code,
            x_checks,
            z_checks,
        })
    }

    /// Unrotated surface code of the given odd distance.
    pub fn surface(d: usize) -> Result<Self> {
        Self::new(build_surface_code(d)?)
    }
}

/// Outcome of one Pauli sector (one check type) within a trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SectorOutcome {
    pub converged: bool,
    pub mwpm_invoked: bool,
    pub iterations: u64,
    pub weight: u64,
    pub fail: bool,
    pub decode_ns: u64,
}

/// One decoded depolarizing shot. The X sector decodes Z-type flips with the
/// X checks; the Z sector decodes X-type flips with the Z checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialRecord {
    pub master_seed: u64,
    pub trial_index: u64,
    /// Failure in either sector.
    pub logical_fail: bool,
    /// Marginalization converged in both sectors.
    pub converged_marg: bool,
    pub x_sector: SectorOutcome,
    pub z_sector: SectorOutcome,
    /// Exact matching invoked in either sector.
    pub mwpm_invoked: bool,
    /// Wall time summed over both sector decodes.
    pub decode_ns: u64,
}

fn decode_sector<F: Real>(
    tables: &CodeTables,
    checks: Pauli,
    part: &ErrorPattern,
    flip_rate: F,
    cfg: &DecoderConfig<F>,
) -> SectorOutcome {
    let code = &tables.code;
    let metric = match checks {
        Pauli::X => &tables.x_checks,
        Pauli::Z => &tables.z_checks,
    };
    let syn = syndrome(code, part, checks).expect("sampled pattern matches code length");
    if syn.is_trivial() {
        // Nothing to decode; the empty candidate is the only sensible output
        // and costs no decoder time.
        let e_hat = ErrorPattern::zeros(code.n_qubits());
        let fail = logical_failure(code, part, &e_hat, checks).expect("lengths match");
        return SectorOutcome {
            converged: true,
            mwpm_invoked: false,
            iterations: 0,
            weight: 0,
            fail,
            decode_ns: 0,
        };
    }
    let start = Instant::now();
    let g = build_decoding_graph(&syn, metric, flip_rate).expect("flip rate validated by caller");
    let out = decode(&g, metric, cfg);
    let decode_ns = start.elapsed().as_nanos() as u64;
    let fail = logical_failure(code, part, &out.candidate.e_hat, checks).expect("lengths match");
    SectorOutcome {
        converged: out.converged_via_marginalization,
        mwpm_invoked: out.mwpm_invoked,
        iterations: out.iterations_run as u64,
        weight: out.candidate.weight,
        fail,
        decode_ns,
    }
}

/// Run one seeded trial: sample a depolarizing error and decode both Pauli
/// sectors independently. Deterministic given `(master_seed, trial_index)`
/// except for the wall-time fields.
pub fn run_trial<F: Real>(
    tables: &CodeTables,
    p: f64,
    cfg: &DecoderConfig<F>,
    master_seed: u64,
    trial_index: u64,
) -> TrialRecord {
    let mut rng = trial_rng(master_seed, trial_index);
    let sample = sample_depolarizing(tables.code.n_qubits(), p, &mut rng)
        .expect("physical rate validated by caller");
    let flip_rate = marginal_flip_rate(F::from_f64_lossy(p), cfg.prior_mode);
    let x_sector = decode_sector(tables, Pauli::X, &sample.z_part, flip_rate, cfg);
    let z_sector = decode_sector(tables, Pauli::Z, &sample.x_part, flip_rate, cfg);
    TrialRecord {
        master_seed,
        trial_index,
        logical_fail: x_sector.fail || z_sector.fail,
        converged_marg: x_sector.converged && z_sector.converged,
        x_sector,
        z_sector,
        mwpm_invoked: x_sector.mwpm_invoked || z_sector.mwpm_invoked,
        decode_ns: x_sector.decode_ns + z_sector.decode_ns,
    }
}

/// Aggregated statistics for one (decoder, schedule, d, p) cell. All stored
/// fields are integer counts so that parallel aggregation is exact; the
/// floating-point rates are derived on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub decoder: DecoderVariant,
    pub schedule: Schedule,
    pub d: usize,
    pub p: f64,
    pub trials: u64,
    pub failures: u64,
    /// Trials where both sectors converged via marginalization.
    pub converged_trials: u64,
    /// Failures among converged trials.
    pub converged_failures: u64,
    /// Per-sector convergence counts (the cross-sector AND is
    /// `converged_trials`).
    pub converged_x_sector: u64,
    pub converged_z_sector: u64,
    /// Trials where the exact-matching fallback ran in either sector.
    pub mwpm_trials: u64,
    /// BP iterations summed over all sector decodes (two per trial).
    pub total_iterations: u64,
    /// Decode wall time summed over all sector decodes.
    pub total_decode_ns: u64,
}

impl SweepCell {
    pub fn ler(&self) -> f64 {
        self.failures as f64 / self.trials as f64
    }

    /// Binomial standard error of the logical error rate.
    pub fn ler_stderr(&self) -> f64 {
        let q = self.ler();
        (q * (1.0 - q) / self.trials as f64).sqrt()
    }

    /// Logical error rate over converged trials only; NaN when no trial
    /// converged.
    pub fn converged_ler(&self) -> f64 {
        self.converged_failures as f64 / self.converged_trials as f64
    }

    pub fn converged_ler_stderr(&self) -> f64 {
        let q = self.converged_ler();
        (q * (1.0 - q) / self.converged_trials as f64).sqrt()
    }

    /// Fraction of trials where marginalization did not converge in both
    /// sectors.
    pub fn r_nc(&self) -> f64 {
        (self.trials - self.converged_trials) as f64 / self.trials as f64
    }

    /// Mean BP iterations per sector decode.
    pub fn mean_iters(&self) -> f64 {
        self.total_iterations as f64 / (2 * self.trials) as f64
    }

    /// Mean wall time per sector decode in nanoseconds.
    pub fn mean_decode_ns(&self) -> f64 {
        self.total_decode_ns as f64 / (2 * self.trials) as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub cells: Vec<SweepCell>,
}

impl SweepResult {
    pub fn find(
        &self,
        decoder: DecoderVariant,
        schedule: Schedule,
        d: usize,
        p: f64,
    ) -> Option<&SweepCell> {
        self.cells
            .iter()
            .find(|c| c.decoder == decoder && c.schedule == schedule && c.d == d && c.p == p)
    }

    /// Distances present for a (decoder, schedule) selection, ascending.
    pub fn distances(&self, decoder: DecoderVariant, schedule: Schedule) -> Vec<usize> {
        let mut ds: Vec<usize> = self
            .cells
            .iter()
            .filter(|c| c.decoder == decoder && c.schedule == schedule)
            .map(|c| c.d)
            .collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }
}

/// Declarative description of a sweep.
#[derive(Debug, Clone)]
pub struct SweepPlan<F> {
    pub distances: Vec<usize>,
    pub p_values: Vec<f64>,
    pub configs: Vec<DecoderConfig<F>>,
    pub trials: u64,
    pub master_seed: u64,
}

fn validate_plan<F: Real>(plan: &SweepPlan<F>) -> Result<()> {
    if plan.trials == 0 {
        return Err(Error::param("trials must be at least 1"));
    }
    if plan.distances.is_empty() {
        return Err(Error::param("distance list is empty"));
    }
    if plan.p_values.is_empty() {
        return Err(Error::param("physical error rate grid is empty"));
    }
    if plan.configs.is_empty() {
        return Err(Error::param("decoder config list is empty"));
    }
    for cfg in &plan.configs {
        for &p in &plan.p_values {
            if !(0.0..1.0).contains(&p) {
                return Err(Error::param(format!("p must be in [0, 1), got {p}")));
            }
            let flip = marginal_flip_rate(p, cfg.prior_mode);
            if p > 0.0 && !(0.0..0.5).contains(&flip) {
                return Err(Error::param(format!(
                    "p = {p} maps to edge flip rate {flip} outside (0, 0.5) under {} priors",
                    cfg.prior_mode
                )));
            }
        }
    }
    Ok(())
}

/// Zero-valued aggregate, merged associatively across trials.
#[derive(Debug, Clone, Copy, Default)]
struct CellAccum {
    failures: u64,
    converged_trials: u64,
    converged_failures: u64,
    converged_x_sector: u64,
    converged_z_sector: u64,
    mwpm_trials: u64,
    total_iterations: u64,
    total_decode_ns: u64,
}

impl CellAccum {
    fn add(mut self, r: &TrialRecord) -> Self {
        self.failures += r.logical_fail as u64;
        self.converged_trials += r.converged_marg as u64;
        self.converged_failures += (r.converged_marg && r.logical_fail) as u64;
        self.converged_x_sector += r.x_sector.converged as u64;
        self.converged_z_sector += r.z_sector.converged as u64;
        self.mwpm_trials += r.mwpm_invoked as u64;
        self.total_iterations += r.x_sector.iterations + r.z_sector.iterations;
        self.total_decode_ns += r.decode_ns;
        self
    }

    fn merge(mut self, other: Self) -> Self {
        self.failures += other.failures;
        self.converged_trials += other.converged_trials;
        self.converged_failures += other.converged_failures;
        self.converged_x_sector += other.converged_x_sector;
        self.converged_z_sector += other.converged_z_sector;
        self.mwpm_trials += other.mwpm_trials;
        self.total_iterations += other.total_iterations;
        self.total_decode_ns += other.total_decode_ns;
        self
    }
}

/// Run the full sweep. `workers = 0` uses one thread per logical CPU. Every
/// field of the result except `total_decode_ns` is independent of `workers`.
pub fn sweep<F: Real>(plan: &SweepPlan<F>, workers: usize) -> Result<SweepResult> {
    validate_plan(plan)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::param(format!("cannot build worker pool: {e}")))?;
    let mut tables = Vec::new();
    for &d in &plan.distances {
        tables.push(CodeTables::surface(d)?);
    }
    let mut cells = Vec::new();
    for cfg in &plan.configs {
        for (di, &d) in plan.distances.iter().enumerate() {
            let t = &tables[di];
            for &p in &plan.p_values {
                let acc = pool.install(|| {
                    (0..plan.trials)
                        .into_par_iter()
                        .fold(CellAccum::default, |acc, i| {
                            acc.add(&run_trial(t, p, cfg, plan.master_seed, i))
                        })
                        .reduce(CellAccum::default, CellAccum::merge)
                });
                cells.push(SweepCell {
                    decoder: cfg.variant,
                    schedule: cfg.schedule,
                    d,
                    p,
                    trials: plan.trials,
                    failures: acc.failures,
                    converged_trials: acc.converged_trials,
                    converged_failures: acc.converged_failures,
                    converged_x_sector: acc.converged_x_sector,
                    converged_z_sector: acc.converged_z_sector,
                    mwpm_trials: acc.mwpm_trials,
                    total_iterations: acc.total_iterations,
                    total_decode_ns: acc.total_decode_ns,
                });
            }
        }
    }
    Ok(SweepResult { cells })
}

/// Crossing of the logical-error-rate curves of two distances, if one lies
/// inside the swept range.
#[derive(Debug, Clone, PartialEq)]
pub struct PairCrossing {
    pub d_low: usize,
    pub d_high: usize,
    pub crossing: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdEstimate {
    pub decoder: DecoderVariant,
    pub schedule: Schedule,
    pub crossings: Vec<PairCrossing>,
    /// Mean of the in-range pairwise crossings.
    pub estimate: Option<f64>,
    /// Bootstrap 95% confidence interval for the estimate.
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    /// Per-distance crossing of the curve with the LER = p diagonal.
    pub pseudo_thresholds: Vec<(usize, Option<f64>)>,
    /// No curve pair changed sign inside the swept range.
    pub out_of_range: bool,
}

#[derive(Debug, Clone)]
pub struct ThresholdRequest {
    pub decoder: DecoderVariant,
    pub schedule: Schedule,
    /// Distances to use; empty means every distance present in the sweep.
    pub distances: Vec<usize>,
    /// Bootstrap replicates for the confidence interval.
    pub resamples: usize,
    pub bootstrap_seed: u64,
}

impl ThresholdRequest {
    pub fn new(decoder: DecoderVariant, schedule: Schedule) -> Self {
        Self {
            decoder,
            schedule,
            distances: Vec::new(),
            resamples: 200,
            bootstrap_seed: 0,
        }
    }
}

/// First root of a piecewise-linear function sampled at ascending points,
/// skipping undefined samples. Exact zeros count as roots only when the
/// function is not identically zero.
fn first_sign_change(points: &[(f64, f64)]) -> Option<f64> {
    let any_nonzero = points.iter().any(|&(_, v)| v != 0.0);
    if !any_nonzero {
        return None;
    }
    for w in points.windows(2) {
        let (p0, v0) = w[0];
        let (p1, v1) = w[1];
        if v0 == 0.0 {
            return Some(p0);
        }
        if v0 * v1 < 0.0 {
            return Some(p0 + (p1 - p0) * v0 / (v0 - v1));
        }
    }
    match points.last() {
        Some(&(p, v)) if v == 0.0 => Some(p),
        _ => None,
    }
}

/// Log-LER difference crossing between two curves given as (p, ler) samples
/// on a shared ascending grid. Points where either rate is zero carry no log
/// information and are skipped.
fn curve_crossing(low: &[(f64, f64)], high: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = low
        .iter()
        .zip(high.iter())
        .filter(|((p0, _), (p1, _))| p0 == p1)
        .filter(|((_, l0), (_, l1))| *l0 > 0.0 && *l1 > 0.0)
        .map(|((p, l0), (_, l1))| (*p, l1.ln() - l0.ln()))
        .collect();
    first_sign_change(&pts)
}

/// Crossing of one curve with the LER = p diagonal.
fn pseudo_threshold(curve: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = curve
        .iter()
        .filter(|&&(p, l)| p > 0.0 && l > 0.0)
        .map(|&(p, l)| (p, l.ln() - p.ln()))
        .collect();
    first_sign_change(&pts)
}

/// (p, ler, trials) samples for one distance, ascending in p.
fn curve_of(
    sweep: &SweepResult,
    decoder: DecoderVariant,
    schedule: Schedule,
    d: usize,
) -> Vec<(f64, f64, u64)> {
    let mut pts: Vec<(f64, f64, u64)> = sweep
        .cells
        .iter()
        .filter(|c| c.decoder == decoder && c.schedule == schedule && c.d == d)
        .map(|c| (c.p, c.ler(), c.trials))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts
}

fn mean(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        None
    } else {
        Some(xs.iter().sum::<f64>() / xs.len() as f64)
    }
}

/// Estimate the threshold for one decoder from sweep data: pairwise
/// log-LER-difference crossings between consecutive distances, aggregated by
/// the mean, with a bootstrap confidence interval from binomial resampling
/// of the per-cell failure counts.
pub fn estimate_threshold(
    sweep: &SweepResult,
    req: &ThresholdRequest,
) -> Result<ThresholdEstimate> {
    let mut distances = if req.distances.is_empty() {
        sweep.distances(req.decoder, req.schedule)
    } else {
        let mut ds = req.distances.clone();
        ds.sort_unstable();
        ds.dedup();
        ds
    };
    distances.retain(|&d| {
        sweep
            .cells
            .iter()
            .any(|c| c.decoder == req.decoder && c.schedule == req.schedule && c.d == d)
    });
    if distances.len() < 2 {
        return Err(Error::param(format!(
            "threshold estimation needs at least two distances for {} / {}, found {:?}",
            req.decoder, req.schedule, distances
        )));
    }
    let curves: Vec<Vec<(f64, f64, u64)>> = distances
        .iter()
        .map(|&d| curve_of(sweep, req.decoder, req.schedule, d))
        .collect();
    for (d, c) in distances.iter().zip(&curves) {
        if c.len() < 2 {
            return Err(Error::param(format!(
                "distance {d} has fewer than two grid points"
            )));
        }
    }

    let ler_points =
        |c: &[(f64, f64, u64)]| c.iter().map(|&(p, l, _)| (p, l)).collect::<Vec<_>>();
    let mut crossings = Vec::new();
    let mut in_range = Vec::new();
    for w in 0..distances.len() - 1 {
        let crossing = curve_crossing(&ler_points(&curves[w]), &ler_points(&curves[w + 1]));
        if let Some(x) = crossing {
            in_range.push(x);
        }
        crossings.push(PairCrossing {
            d_low: distances[w],
            d_high: distances[w + 1],
            crossing,
        });
    }
    let estimate = mean(&in_range);

    let pseudo_thresholds = distances
        .iter()
        .zip(&curves)
        .map(|(&d, c)| (d, pseudo_threshold(&ler_points(c))))
        .collect();

    // Bootstrap: resample each cell's failure count from its fitted
    // binomial, recompute the aggregate, and take percentile bounds.
    let mut replicates = Vec::with_capacity(req.resamples);
    for rep in 0..req.resamples {
        let mut rng = trial_rng(req.bootstrap_seed, rep as u64);
        let resampled: Vec<Vec<(f64, f64)>> = curves
            .iter()
            .map(|c| {
                c.iter()
                    .map(|&(p, ler, trials)| {
                        let bin = Binomial::new(trials, ler.clamp(0.0, 1.0))
                            .expect("rate is a probability");
                        let k = bin.sample(&mut rng);
                        (p, k as f64 / trials as f64)
                    })
                    .collect()
            })
            .collect();
        let mut xs = Vec::new();
        for w in 0..distances.len() - 1 {
            if let Some(x) = curve_crossing(&resampled[w], &resampled[w + 1]) {
                xs.push(x);
            }
        }
        if let Some(est) = mean(&xs) {
            replicates.push(est);
        }
    }
    let (ci_low, ci_high) = if replicates.len() >= 10 {
        replicates.sort_by(f64::total_cmp);
        let pick = |q: f64| replicates[((replicates.len() - 1) as f64 * q).round() as usize];
        (Some(pick(0.025)), Some(pick(0.975)))
    } else {
        (None, None)
    };

    Ok(ThresholdEstimate {
        decoder: req.decoder,
        schedule: req.schedule,
        crossings,
        out_of_range: estimate.is_none(),
        estimate,
        ci_low,
        ci_high,
        pseudo_thresholds,
    })
}
