//! The decoder variants: belief propagation with marginalization (BP4M),
//! with per-iteration forced convergence (BP4MF), with an exact-matching
//! fallback (BP4M+M), and the exact matcher alone as baseline.
//!
//! All BP variants run a fixed number of iterations T derived from the
//! schedule (no early exit), collect candidate matchings along the way, and
//! output the lowest-weight candidate, breaking ties toward the earliest
//! iteration.

use std::fmt;
use std::str::FromStr;

use crate::decoding_graph::{
    candidate_from_selection, Candidate, CandidateSource, DecodingGraph, MetricTable, VarId,
};
use crate::error::Error;
use crate::factor_graph::{bp_iteration, init_messages, marginals, FactorGraph};
use crate::inference::{check_convergence, forced_convergence, marginal_assignment};
use crate::matching::{mwpm, MatchingInstance};
use crate::noise::PriorMode;
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecoderVariant {
    /// Exact minimum-weight perfect matching, no belief propagation.
    Mwpm,
    /// BP, keep converged marginalization candidates, forced convergence on
    /// the final messages as fallback candidate.
    Bp4m,
    /// BP with a candidate forced out of every iteration.
    Bp4mf,
    /// BP with converged candidates only, exact matching when none appear.
    Bp4mPlusM,
}

impl fmt::Display for DecoderVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            DecoderVariant::Mwpm => "mwpm",
            DecoderVariant::Bp4m => "bp4m",
            DecoderVariant::Bp4mf => "bp4mf",
            DecoderVariant::Bp4mPlusM => "bp4m+m",
        };
        write!(f, "{name}")
    }
}

impl FromStr for DecoderVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "mwpm" => Ok(DecoderVariant::Mwpm),
            "bp4m" => Ok(DecoderVariant::Bp4m),
            "bp4mf" => Ok(DecoderVariant::Bp4mf),
            "bp4m+m" => Ok(DecoderVariant::Bp4mPlusM),
            other => Err(Error::param(format!(
                "unknown decoder '{other}' (expected mwpm, bp4m, bp4mf or bp4m+m)"
            ))),
        }
    }
}

/// Iteration budget as a function of the code size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Schedule {
    /// `ceil(log2 n)` iterations.
    LogN,
    /// `ceil(sqrt n)` iterations.
    SqrtN,
    /// A fixed count, floored at 1.
    Fixed(usize),
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Schedule::LogN => write!(f, "log_n"),
            Schedule::SqrtN => write!(f, "sqrt_n"),
            Schedule::Fixed(t) => write!(f, "fixed_{t}"),
        }
    }
}

impl FromStr for Schedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "log_n" => Ok(Schedule::LogN),
            "sqrt_n" => Ok(Schedule::SqrtN),
            other => {
                if let Some(t) = other.strip_prefix("fixed_") {
                    let t: usize = t.parse().map_err(|_| {
                        Error::param(format!("invalid fixed schedule '{other}'"))
                    })?;
                    if t == 0 {
                        return Err(Error::param("fixed schedule must be at least 1"));
                    }
                    Ok(Schedule::Fixed(t))
                } else {
                    Err(Error::param(format!(
                        "unknown schedule '{other}' (expected log_n, sqrt_n or fixed_T)"
                    )))
                }
            }
        }
    }
}

/// Number of BP iterations for a code with `n_qubits` qubits, at least 1.
pub fn iteration_count(n_qubits: usize, schedule: Schedule) -> usize {
    match schedule {
        Schedule::LogN => {
            if n_qubits <= 2 {
                1
            } else {
                // ceil(log2 n) = bit length of n-1 for n >= 2.
                (usize::BITS - (n_qubits - 1).leading_zeros()) as usize
            }
        }
        Schedule::SqrtN => {
            let mut r = (n_qubits as f64).sqrt() as usize;
            while r * r < n_qubits {
                r += 1;
            }
            while r > 1 && (r - 1) * (r - 1) >= n_qubits {
                r -= 1;
            }
            r.max(1)
        }
        Schedule::Fixed(t) => t.max(1),
    }
}

/// How candidates are compared when keeping the best across iterations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightRule {
    /// Sum of selected edge weights, the matching objective.
    #[default]
    MatchingWeight,
    /// Number of flipped qubits after XOR cancellation of the paths.
    ResidualQubits,
}

impl fmt::Display for WeightRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightRule::MatchingWeight => write!(f, "matching_weight"),
            WeightRule::ResidualQubits => write!(f, "residual_qubits"),
        }
    }
}

impl FromStr for WeightRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "matching_weight" => Ok(WeightRule::MatchingWeight),
            "residual_qubits" => Ok(WeightRule::ResidualQubits),
            other => Err(Error::param(format!(
                "unknown weight rule '{other}' (expected matching_weight or residual_qubits)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecoderConfig<F> {
    pub variant: DecoderVariant,
    pub schedule: Schedule,
    pub prior_mode: PriorMode,
    pub literal_prior_freeze: bool,
    pub clamp: F,
    pub weight_rule: WeightRule,
    pub record_trace: bool,
}

impl<F: Real> Default for DecoderConfig<F> {
    fn default() -> Self {
        Self {
            variant: DecoderVariant::Bp4m,
            schedule: Schedule::LogN,
            prior_mode: PriorMode::default(),
            literal_prior_freeze: false,
            clamp: F::default_clamp(),
            weight_rule: WeightRule::default(),
            record_trace: false,
        }
    }
}

impl<F: Real> DecoderConfig<F> {
    pub fn new(variant: DecoderVariant, schedule: Schedule) -> Self {
        Self {
            variant,
            schedule,
            ..Self::default()
        }
    }
}

/// One iteration of a recorded decode, for debugging output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterationTrace {
    pub iteration: usize,
    /// Whether the marginal assignment satisfied all checks.
    pub converged: bool,
    /// The marginal assignment of this iteration (possibly invalid).
    pub selected: Vec<VarId>,
    /// Sum of the selected edge weights.
    pub weight: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOutcome {
    pub candidate: Candidate,
    /// Marginalization produced a valid matching in at least one iteration.
    pub converged_via_marginalization: bool,
    pub iterations_run: usize,
    pub mwpm_invoked: bool,
    pub trace: Option<Vec<IterationTrace>>,
}

/// Candidate ranking key under a weight rule.
fn candidate_key(c: &Candidate, rule: WeightRule) -> u64 {
    match rule {
        WeightRule::MatchingWeight => c.weight,
        WeightRule::ResidualQubits => c.e_hat.weight() as u64,
    }
}

/// Keep `cand` only if strictly better, so earlier candidates win ties.
fn consider(best: &mut Option<Candidate>, cand: Candidate, rule: WeightRule) {
    let replace = match best {
        None => true,
        Some(cur) => candidate_key(&cand, rule) < candidate_key(cur, rule),
    };
    if replace {
        *best = Some(cand);
    }
}

/// Decode one syndrome (already materialized as a decoding graph). The
/// outcome's candidate always reproduces the syndrome.
pub fn decode<F: Real>(
    g: &DecodingGraph<F>,
    metric: &MetricTable,
    cfg: &DecoderConfig<F>,
) -> DecodeOutcome {
    let s = g.s();
    if s == 0 {
        let source = match cfg.variant {
            DecoderVariant::Mwpm => CandidateSource::Mwpm,
            _ => CandidateSource::Marginalization,
        };
        return DecodeOutcome {
            candidate: Candidate::empty(g.n_qubits(), source),
            converged_via_marginalization: true,
            iterations_run: 0,
            mwpm_invoked: false,
            trace: cfg.record_trace.then(Vec::new),
        };
    }
    if cfg.variant == DecoderVariant::Mwpm {
        let inst = MatchingInstance::from_graph(g);
        let sel = mwpm(&inst);
        let candidate = candidate_from_selection(g, metric, &sel, CandidateSource::Mwpm, 0)
            .expect("exact matching yields valid variable ids");
        return DecodeOutcome {
            candidate,
            converged_via_marginalization: true,
            iterations_run: 0,
            mwpm_invoked: true,
            trace: cfg.record_trace.then(Vec::new),
        };
    }

    let fg = FactorGraph::from_graph(g);
    let t_max = iteration_count(g.n_qubits(), cfg.schedule);
    let mut state = init_messages(g, cfg.clamp, cfg.literal_prior_freeze);
    let mut best: Option<Candidate> = None;
    let mut converged_any = false;
    let mut trace = cfg.record_trace.then(Vec::new);
    let mut marg = Vec::new();
    for t in 1..=t_max {
        bp_iteration(&fg, &mut state);
        marg = marginals(&fg, &state);
        let hard = marginal_assignment(&marg);
        let converged = check_convergence(&fg, &hard);
        if let Some(tr) = trace.as_mut() {
            tr.push(IterationTrace {
                iteration: t,
                converged,
                selected: hard.clone(),
                weight: hard.iter().map(|&v| g.var_weight(v)).sum(),
            });
        }
        converged_any |= converged;
        match cfg.variant {
            DecoderVariant::Bp4m | DecoderVariant::Bp4mPlusM => {
                if converged {
                    let cand = candidate_from_selection(
                        g,
                        metric,
                        &hard,
                        CandidateSource::Marginalization,
                        t,
                    )
                    .expect("marginal assignment ids are in range");
                    consider(&mut best, cand, cfg.weight_rule);
                }
            }
            DecoderVariant::Bp4mf => {
                let (sel, source) = if converged {
                    (hard, CandidateSource::Marginalization)
                } else {
                    (forced_convergence(&fg, &marg), CandidateSource::Forced)
                };
                let cand = candidate_from_selection(g, metric, &sel, source, t)
                    .expect("forced selection ids are in range");
                consider(&mut best, cand, cfg.weight_rule);
            }
            DecoderVariant::Mwpm => unreachable!(),
        }
    }

    let mut mwpm_invoked = false;
    match cfg.variant {
        DecoderVariant::Bp4m => {
            let sel = forced_convergence(&fg, &marg);
            let cand = candidate_from_selection(g, metric, &sel, CandidateSource::Forced, t_max)
                .expect("forced selection ids are in range");
            consider(&mut best, cand, cfg.weight_rule);
        }
        DecoderVariant::Bp4mPlusM => {
            if best.is_none() {
                let inst = MatchingInstance::from_graph(g);
                let sel = mwpm(&inst);
                let cand =
                    candidate_from_selection(g, metric, &sel, CandidateSource::Mwpm, t_max)
                        .expect("exact matching yields valid variable ids");
                best = Some(cand);
                mwpm_invoked = true;
            }
        }
        DecoderVariant::Bp4mf | DecoderVariant::Mwpm => {}
    }

    DecodeOutcome {
        candidate: best.expect("every variant produces at least one candidate"),
        converged_via_marginalization: converged_any,
        iterations_run: t_max,
        mwpm_invoked,
        trace,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitVec;
    use crate::code::{build_surface_code, syndrome, ErrorPattern, Pauli};
    use crate::decoding_graph::{build_decoding_graph, precompute_metric};
    use crate::matching::{brute_force_mwpm, is_valid_matching};
    use crate::code::Syndrome;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const ALL_VARIANTS: [DecoderVariant; 4] = [
        DecoderVariant::Mwpm,
        DecoderVariant::Bp4m,
        DecoderVariant::Bp4mf,
        DecoderVariant::Bp4mPlusM,
    ];

    #[test]
    fn schedule_counts_match_hand_values() {
        assert_eq!(iteration_count(41, Schedule::LogN), 6);
        assert_eq!(iteration_count(41, Schedule::SqrtN), 7);
        assert_eq!(iteration_count(1, Schedule::LogN), 1);
        assert_eq!(iteration_count(1, Schedule::SqrtN), 1);
        assert_eq!(iteration_count(13, Schedule::LogN), 4);
        assert_eq!(iteration_count(13, Schedule::SqrtN), 4);
        assert_eq!(iteration_count(64, Schedule::LogN), 6);
        assert_eq!(iteration_count(100, Schedule::SqrtN), 10);
        assert_eq!(iteration_count(50, Schedule::Fixed(0)), 1);
        assert_eq!(iteration_count(50, Schedule::Fixed(9)), 9);
    }

    #[test]
    fn names_round_trip() {
        for v in ALL_VARIANTS {
            assert_eq!(v.to_string().parse::<DecoderVariant>().unwrap(), v);
        }
        for s in [Schedule::LogN, Schedule::SqrtN, Schedule::Fixed(7)] {
            assert_eq!(s.to_string().parse::<Schedule>().unwrap(), s);
        }
        assert!("bogus".parse::<DecoderVariant>().is_err());
        assert!("fixed_0".parse::<Schedule>().is_err());
        assert!("fixed_x".parse::<Schedule>().is_err());
    }

    #[test]
    fn empty_syndrome_decodes_to_empty_candidate() {
        let code = build_surface_code(3).unwrap();
        let metric = precompute_metric(&code, Pauli::Z).unwrap();
        let syn = Syndrome::from_bits(BitVec::zeros(6));
        let g = build_decoding_graph::<f64>(&syn, &metric, 0.1).unwrap();
        for v in ALL_VARIANTS {
            let cfg = DecoderConfig::new(v, Schedule::LogN);
            let out = decode(&g, &metric, &cfg);
            assert!(out.candidate.e_hat.is_zero());
            assert_eq!(out.candidate.weight, 0);
            assert!(out.converged_via_marginalization);
            assert_eq!(out.iterations_run, 0);
        }
    }

    #[test]
    fn single_detection_node_matches_to_boundary() {
        let code = build_surface_code(3).unwrap();
        let metric = precompute_metric(&code, Pauli::Z).unwrap();
        let syn = Syndrome::from_bits(BitVec::from_ones(6, &[1]));
        let g = build_decoding_graph::<f64>(&syn, &metric, 0.1).unwrap();
        for v in ALL_VARIANTS {
            let cfg = DecoderConfig::new(v, Schedule::LogN);
            let out = decode(&g, &metric, &cfg);
            assert_eq!(out.candidate.selected, vec![0]);
            assert_eq!(out.candidate.weight, g.var_weight(0));
            assert!(out.converged_via_marginalization);
        }
    }

    fn random_error(
        code: &crate::code::CodeSpec,
        p: f64,
        rng: &mut ChaCha8Rng,
    ) -> ErrorPattern {
        let mut e = ErrorPattern::zeros(code.n_qubits());
        for q in 0..code.n_qubits() {
            if rng.gen_bool(p) {
                e.toggle(q);
            }
        }
        e
    }

    #[test]
    fn all_variants_reproduce_the_syndrome() {
        let code = build_surface_code(3).unwrap();
        let metric = precompute_metric(&code, Pauli::Z).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..100 {
            let e = random_error(&code, 0.15, &mut rng);
            let syn = syndrome(&code, &e, Pauli::Z).unwrap();
            let g = build_decoding_graph::<f64>(&syn, &metric, 0.1).unwrap();
            for v in ALL_VARIANTS {
                for sched in [Schedule::LogN, Schedule::SqrtN] {
                    let cfg = DecoderConfig::new(v, sched);
                    let out = decode(&g, &metric, &cfg);
                    let syn_hat = syndrome(&code, &out.candidate.e_hat, Pauli::Z).unwrap();
                    assert_eq!(syn_hat.bits(), syn.bits(), "variant {v} schedule {sched}");
                    assert!(is_valid_matching(g.s(), &out.candidate.selected));
                }
            }
        }
    }

    #[test]
    fn bp4mf_weight_never_exceeds_bp4m() {
        let code = build_surface_code(5).unwrap();
        let metric = precompute_metric(&code, Pauli::Z).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(512);
        for _ in 0..100 {
            let e = random_error(&code, 0.12, &mut rng);
            let syn = syndrome(&code, &e, Pauli::Z).unwrap();
            let g = build_decoding_graph::<f64>(&syn, &metric, 0.08).unwrap();
            let out_m = decode(&g, &metric, &DecoderConfig::new(DecoderVariant::Bp4m, Schedule::LogN));
            let out_f = decode(&g, &metric, &DecoderConfig::new(DecoderVariant::Bp4mf, Schedule::LogN));
            assert!(
                out_f.candidate.weight <= out_m.candidate.weight,
                "bp4mf {} > bp4m {}",
                out_f.candidate.weight,
                out_m.candidate.weight
            );
        }
    }

    #[test]
    fn bp4m_plus_m_fallback_is_optimal() {
        let code = build_surface_code(3).unwrap();
        let metric = precompute_metric(&code, Pauli::Z).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut fallbacks = 0;
        for _ in 0..300 {
            let e = random_error(&code, 0.25, &mut rng);
            let syn = syndrome(&code, &e, Pauli::Z).unwrap();
            let g = build_decoding_graph::<f64>(&syn, &metric, 0.15).unwrap();
            let out = decode(
                &g,
                &metric,
                &DecoderConfig::new(DecoderVariant::Bp4mPlusM, Schedule::LogN),
            );
            assert_eq!(out.mwpm_invoked, !out.converged_via_marginalization);
            if out.mwpm_invoked && g.s() <= 8 {
                fallbacks += 1;
                let inst = MatchingInstance::from_graph(&g);
                let (_, opt) = brute_force_mwpm(&inst).unwrap();
                assert_eq!(out.candidate.weight, opt);
                assert_eq!(out.candidate.source, CandidateSource::Mwpm);
            }
        }
        assert!(fallbacks > 0, "expected some non-converged instances");
    }

    #[test]
    fn mwpm_variant_equals_exact_matcher() {
        let code = build_surface_code(3).unwrap();
        let metric = precompute_metric(&code, Pauli::Z).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let e = random_error(&code, 0.2, &mut rng);
            let syn = syndrome(&code, &e, Pauli::Z).unwrap();
            if syn.is_trivial() {
                continue;
            }
            let g = build_decoding_graph::<f64>(&syn, &metric, 0.1).unwrap();
            let out = decode(&g, &metric, &DecoderConfig::new(DecoderVariant::Mwpm, Schedule::LogN));
            let inst = MatchingInstance::from_graph(&g);
            assert_eq!(out.candidate.selected, mwpm(&inst));
            assert!(out.mwpm_invoked);
            assert!(out.converged_via_marginalization);
        }
    }

    #[test]
    fn decode_is_deterministic() {
        let code = build_surface_code(5).unwrap();
        let metric = precompute_metric(&code, Pauli::Z).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let e = random_error(&code, 0.15, &mut rng);
        let syn = syndrome(&code, &e, Pauli::Z).unwrap();
        let g = build_decoding_graph::<f64>(&syn, &metric, 0.1).unwrap();
        for v in ALL_VARIANTS {
            let mut cfg = DecoderConfig::new(v, Schedule::SqrtN);
            cfg.record_trace = true;
            let a = decode(&g, &metric, &cfg);
            let b = decode(&g, &metric, &cfg);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn trace_covers_every_iteration() {
        let code = build_surface_code(3).unwrap();
        let metric = precompute_metric(&code, Pauli::Z).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let e = random_error(&code, 0.2, &mut rng);
        let syn = syndrome(&code, &e, Pauli::Z).unwrap();
        let g = build_decoding_graph::<f64>(&syn, &metric, 0.1).unwrap();
        let mut cfg = DecoderConfig::new(DecoderVariant::Bp4m, Schedule::SqrtN);
        cfg.record_trace = true;
        let out = decode(&g, &metric, &cfg);
        let trace = out.trace.unwrap();
        assert_eq!(trace.len(), out.iterations_run);
        for (k, t) in trace.iter().enumerate() {
            assert_eq!(t.iteration, k + 1);
        }
    }

    #[test]
    fn residual_qubit_rule_still_valid() {
        let code = build_surface_code(3).unwrap();
        let metric = precompute_metric(&code, Pauli::Z).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(63);
        for _ in 0..50 {
            let e = random_error(&code, 0.2, &mut rng);
            let syn = syndrome(&code, &e, Pauli::Z).unwrap();
            let g = build_decoding_graph::<f64>(&syn, &metric, 0.1).unwrap();
            let mut cfg = DecoderConfig::new(DecoderVariant::Bp4mf, Schedule::LogN);
            cfg.weight_rule = WeightRule::ResidualQubits;
            let out = decode(&g, &metric, &cfg);
            let syn_hat = syndrome(&code, &out.candidate.e_hat, Pauli::Z).unwrap();
            assert_eq!(syn_hat.bits(), syn.bits());
        }
    }
}
