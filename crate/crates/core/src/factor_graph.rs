//! Factor graph over the decoding-graph edge variables and the sum-product
//! message passing that runs on it.
//!
//! One check factor per detection node enforces that exactly one incident
//! edge variable is selected, so globally valid assignments are the perfect
//! matchings of the decoding graph. Each variable additionally has a leaf
//! prior factor `(1-rho, rho)` whose message is constant, with `rho` the
//! decoding-graph edge prior: a matching carries mass proportional to the
//! product of `rho` over its edges times `1-rho` over the rest.
//!
//! Check factor `i` lists its variables as: pair variables with the other
//! node ascending, then the boundary variable last, giving every check
//! degree `s`. Messages are stored check-major in that slot order. Updates
//! are flooding: all check-to-variable messages through the exactly-one
//! constraint using leave-one-out prefix/suffix products (no divisions, so
//! zeros are harmless), then all variable-to-check messages from the fresh
//! check-to-variable messages.

use crate::decoding_graph::{
    boundary_var_id, n_vars, pair_var_id, var_kind, DecodingGraph, VarId, VarKind,
};
use crate::error::{Error, Result};
use crate::real::Real;

/// Check-factor adjacency for `s` detection nodes; the structure is fully
/// determined by `s`.
#[derive(Debug, Clone, Copy)]
pub struct FactorGraph {
    s: usize,
}

impl FactorGraph {
    pub fn new(s: usize) -> Self {
        Self { s }
    }

    pub fn from_graph<F: Real>(g: &DecodingGraph<F>) -> Self {
        Self { s: g.s() }
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn n_checks(&self) -> usize {
        self.s
    }

    pub fn n_vars(&self) -> usize {
        n_vars(self.s)
    }

    /// Degree of every check factor.
    pub fn check_degree(&self) -> usize {
        self.s
    }

    /// Variable sitting in slot `t` of check `i`.
    pub fn slot_var(&self, i: usize, t: usize) -> VarId {
        debug_assert!(i < self.s && t < self.s);
        if t == self.s - 1 {
            boundary_var_id(self.s, i)
        } else {
            let j = if t < i { t } else { t + 1 };
            pair_var_id(self.s, i.min(j), i.max(j))
        }
    }

    /// Slot of the pair variable `v_{ij}` in check `i`'s list.
    pub fn pair_slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(i != j && i < self.s && j < self.s);
        if j < i {
            j
        } else {
            j - 1
        }
    }

    /// Checks adjacent to a variable, as `(check, slot)` pairs.
    pub fn var_checks(&self, var: VarId) -> Vec<(usize, usize)> {
        match var_kind(self.s, var) {
            VarKind::Pair(a, b) => vec![
                (a, self.pair_slot(a, b)),
                (b, self.pair_slot(b, a)),
            ],
            VarKind::Boundary(i) => vec![(i, self.s - 1)],
        }
    }

    /// Exactly-one constraint of check `i` against a full assignment.
    pub fn eval_check_factor(&self, i: usize, assignment: &[bool]) -> bool {
        debug_assert_eq!(assignment.len(), self.n_vars());
        let mut ones = 0;
        for t in 0..self.check_degree() {
            if assignment[self.slot_var(i, t)] {
                ones += 1;
            }
        }
        ones == 1
    }
}

/// All message values of one belief-propagation run. Messages are normalized
/// pairs `(m(0), m(1))` stored check-major: index `check * s + slot`.
#[derive(Debug, Clone)]
pub struct MessageState<F> {
    s: usize,
    clamp: F,
    prior_msg: Vec<[F; 2]>,
    check_to_var: Vec<[F; 2]>,
    var_to_check: Vec<[F; 2]>,
    iteration: usize,
    scratch: Vec<(F, F)>,
}

impl<F: Real> MessageState<F> {
    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn prior_msg(&self, var: VarId) -> [F; 2] {
        self.prior_msg[var]
    }

    pub fn check_to_var(&self, check: usize, slot: usize) -> [F; 2] {
        self.check_to_var[check * self.s + slot]
    }

    pub fn var_to_check(&self, check: usize, slot: usize) -> [F; 2] {
        self.var_to_check[check * self.s + slot]
    }
}

/// Normalize an unnormalized pair, clamping the one-probability into
/// `[clamp, 1-clamp]` and storing `(1-x, x)` so the pair sums to one.
fn normalize<F: Real>(u0: F, u1: F, clamp: F) -> [F; 2] {
    let total = u0 + u1;
    let x1 = if total > F::zero() {
        u1 / total
    } else {
        F::half()
    };
    let x1 = x1.max(clamp).min(F::one() - clamp);
    [F::one() - x1, x1]
}

/// Fresh message state: check-to-variable messages uniform, prior messages
/// the clamped prior factor `(1-rho, rho)`, and variable-to-check messages
/// seeded with the prior factor. With `literal_prior_freeze` set the prior
/// messages are frozen at uniform instead, so the prior enters only through
/// the seeded variable messages and washes out of later iterations.
pub fn init_messages<F: Real>(
    g: &DecodingGraph<F>,
    clamp: F,
    literal_prior_freeze: bool,
) -> MessageState<F> {
    let s = g.s();
    let fg = FactorGraph::new(s);
    let half = [F::half(), F::half()];
    let mut seed = Vec::with_capacity(g.n_vars());
    for var in 0..g.n_vars() {
        let rho = g.var_prior(var);
        seed.push(normalize(F::one() - rho, rho, clamp));
    }
    let mut var_to_check = vec![half; s * s];
    for i in 0..s {
        for t in 0..fg.check_degree() {
            var_to_check[i * s + t] = seed[fg.slot_var(i, t)];
        }
    }
    let prior_msg = if literal_prior_freeze {
        vec![half; g.n_vars()]
    } else {
        seed
    };
    MessageState {
        s,
        clamp,
        prior_msg,
        check_to_var: vec![half; s * s],
        var_to_check,
        iteration: 0,
        scratch: vec![(F::zero(), F::zero()); s + 1],
    }
}

/// Recompute every variable-to-check message from the current
/// check-to-variable messages and the prior messages.
fn update_var_to_check<F: Real>(fg: &FactorGraph, state: &mut MessageState<F>) {
    let s = fg.s();
    for i in 0..s {
        for t in 0..fg.check_degree() {
            let var = fg.slot_var(i, t);
            let prior = state.prior_msg[var];
            let m = match var_kind(s, var) {
                VarKind::Pair(a, b) => {
                    // The other check of the pair feeds this message.
                    let (other, other_slot) = if a == i {
                        (b, fg.pair_slot(b, a))
                    } else {
                        (a, fg.pair_slot(a, b))
                    };
                    let inc = state.check_to_var[other * s + other_slot];
                    normalize(prior[0] * inc[0], prior[1] * inc[1], state.clamp)
                }
                VarKind::Boundary(_) => prior,
            };
            state.var_to_check[i * s + t] = m;
        }
    }
}

/// Messages out of an exactly-one check factor, leave-one-out. For the
/// incoming messages `m_u`, the outgoing pair at slot `t` is proportional to
/// `(sum_{u != t} m_u(1) prod_{w != t,u} m_w(0), prod_{u != t} m_u(0))`.
/// The running state `(P, S)` composes associatively as
/// `(P, S) . (P', S') = (P P', S P' + P S')`.
fn update_check_to_var<F: Real>(fg: &FactorGraph, state: &mut MessageState<F>) {
    let s = fg.s();
    let deg = fg.check_degree();
    for i in 0..s {
        let base = i * s;
        // scratch[t] holds the combined (P, S) of slots 0..t.
        state.scratch[0] = (F::one(), F::zero());
        for t in 0..deg {
            let (p, q) = state.scratch[t];
            let m = state.var_to_check[base + t];
            state.scratch[t + 1] = (p * m[0], q * m[0] + p * m[1]);
        }
        // Walk backwards keeping the suffix combination in (p_suf, s_suf).
        let mut suf = (F::one(), F::zero());
        for t in (0..deg).rev() {
            let (p_pre, s_pre) = state.scratch[t];
            let (p_suf, s_suf) = suf;
            let p = p_pre * p_suf;
            let sum = s_pre * p_suf + p_pre * s_suf;
            state.check_to_var[base + t] = normalize(sum, p, state.clamp);
            let m = state.var_to_check[base + t];
            suf = (m[0] * p_suf, m[1] * p_suf + m[0] * s_suf);
        }
    }
}

/// One flooding iteration: all check messages from the current variable
/// messages, then all variable messages from the fresh check messages. The
/// check update runs first so the seeded variable messages feed the first
/// iteration.
pub fn bp_iteration<F: Real>(fg: &FactorGraph, state: &mut MessageState<F>) {
    update_check_to_var(fg, state);
    update_var_to_check(fg, state);
    state.iteration += 1;
}

/// Per-variable marginals under the current messages: the prior message
/// times every incident check message, normalized.
pub fn marginals<F: Real>(fg: &FactorGraph, state: &MessageState<F>) -> Vec<[F; 2]> {
    let s = fg.s();
    let mut out = Vec::with_capacity(fg.n_vars());
    for var in 0..fg.n_vars() {
        let mut u = state.prior_msg[var];
        for (check, slot) in fg.var_checks(var) {
            let m = state.check_to_var[check * s + slot];
            u = [u[0] * m[0], u[1] * m[1]];
        }
        out.push(normalize(u[0], u[1], state.clamp));
    }
    out
}

/// Capacity bound for [`exact_distribution`]; enumeration is `2^n_vars`.
pub const EXACT_MAX_VARS: usize = 20;

/// Exhaustive reference distribution over all valid assignments.
#[derive(Debug, Clone)]
pub struct ExactDistribution<F> {
    /// Exact per-variable marginals.
    pub marginals: Vec<[F; 2]>,
    /// Selected variables of the most probable valid assignment (smallest
    /// bitmask on ties).
    pub map_assignment: Vec<VarId>,
    /// Number of valid assignments, i.e. perfect matchings.
    pub support_size: usize,
}

/// Enumerate every assignment of the decoding-graph variables, keep the ones
/// satisfying all exactly-one checks, and accumulate exact marginals and the
/// maximum-probability assignment. Rejects graphs with more than
/// [`EXACT_MAX_VARS`] variables.
pub fn exact_distribution<F: Real>(g: &DecodingGraph<F>) -> Result<ExactDistribution<F>> {
    let s = g.s();
    let m = g.n_vars();
    if m > EXACT_MAX_VARS {
        return Err(Error::capacity(format!(
            "exact enumeration supports at most {EXACT_MAX_VARS} variables, got {m}"
        )));
    }
    let mut marg1 = vec![F::zero(); m];
    let mut z = F::zero();
    let mut best_mass = F::neg_infinity();
    let mut best_mask = 0usize;
    let mut support = 0usize;
    for mask in 0..(1usize << m) {
        let mut counts = vec![0u32; s];
        for v in 0..m {
            if mask & (1 << v) != 0 {
                match var_kind(s, v) {
                    VarKind::Pair(a, b) => {
                        counts[a] += 1;
                        counts[b] += 1;
                    }
                    VarKind::Boundary(i) => counts[i] += 1,
                }
            }
        }
        if counts.iter().any(|&c| c != 1) && s > 0 {
            continue;
        }
        support += 1;
        let mut mass = F::one();
        for v in 0..m {
            let rho = g.var_prior(v);
            mass = mass
                * if mask & (1 << v) != 0 {
                    rho
                } else {
                    F::one() - rho
                };
        }
        z = z + mass;
        for v in 0..m {
            if mask & (1 << v) != 0 {
                marg1[v] = marg1[v] + mass;
            }
        }
        if mass > best_mass {
            best_mass = mass;
            best_mask = mask;
        }
    }
    if support == 0 {
        return Err(Error::param(
            "no valid assignment exists for this graph".to_string(),
        ));
    }
    let marginals = marg1
        .into_iter()
        .map(|u1| {
            let x1 = u1 / z;
            [F::one() - x1, x1]
        })
        .collect();
    let map_assignment = (0..m).filter(|v| best_mask & (1 << v) != 0).collect();
    Ok(ExactDistribution {
        marginals,
        map_assignment,
        support_size: support,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitVec;
    use crate::code::{build_surface_code, Syndrome};
    use crate::decoding_graph::{build_decoding_graph, precompute_metric, MetricTable};
    use crate::code::Pauli;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn d3_metric() -> MetricTable {
        let code = build_surface_code(3).unwrap();
        precompute_metric(&code, Pauli::Z).unwrap()
    }

    fn graph_for(unsat: &[usize], q: f64) -> crate::decoding_graph::DecodingGraph<f64> {
        let metric = d3_metric();
        let syn = Syndrome::from_bits(BitVec::from_ones(6, unsat));
        build_decoding_graph(&syn, &metric, q).unwrap()
    }

    #[test]
    fn adjacency_is_consistent() {
        let fg = FactorGraph::new(4);
        for i in 0..4 {
            for t in 0..fg.check_degree() {
                let var = fg.slot_var(i, t);
                assert!(
                    fg.var_checks(var).contains(&(i, t)),
                    "check {i} slot {t} var {var}"
                );
            }
        }
        // Pair (1,3) appears in check 1 and check 3 at the expected slots.
        let v = pair_var_id(4, 1, 3);
        assert_eq!(fg.var_checks(v), vec![(1, 2), (3, 1)]);
    }

    #[test]
    fn check_factor_is_exactly_one() {
        let fg = FactorGraph::new(3);
        let mut x = vec![false; fg.n_vars()];
        assert!(!fg.eval_check_factor(0, &x));
        x[boundary_var_id(3, 0)] = true;
        assert!(fg.eval_check_factor(0, &x));
        x[pair_var_id(3, 0, 1)] = true;
        assert!(!fg.eval_check_factor(0, &x));
    }

    #[test]
    fn single_node_marginal_is_pinned() {
        // With one detection node the boundary variable is forced on.
        let g = graph_for(&[2], 0.1);
        let fg = FactorGraph::from_graph(&g);
        let mut state = init_messages(&g, 1e-12, false);
        bp_iteration(&fg, &mut state);
        let m = marginals(&fg, &state);
        assert_eq!(m.len(), 1);
        assert!(m[0][1] > 1.0 - 1e-9, "marginal {:?}", m[0]);
    }

    #[test]
    fn two_node_tree_is_exact_within_four_iterations() {
        let metric = d3_metric();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let a = rng.gen_range(0..6);
            let b = loop {
                let b = rng.gen_range(0..6);
                if b != a {
                    break b;
                }
            };
            let q = rng.gen_range(0.02..0.45);
            let syn = Syndrome::from_bits(BitVec::from_ones(6, &[a.min(b), a.max(b)]));
            let g = build_decoding_graph::<f64>(&syn, &metric, q).unwrap();
            let exact = exact_distribution(&g).unwrap();
            let fg = FactorGraph::from_graph(&g);
            let mut state = init_messages(&g, 1e-12, false);
            for _ in 0..4 {
                bp_iteration(&fg, &mut state);
            }
            let approx = marginals(&fg, &state);
            for v in 0..g.n_vars() {
                assert!(
                    (approx[v][1] - exact.marginals[v][1]).abs() < 1e-9,
                    "var {v}: bp {:?} exact {:?}",
                    approx[v],
                    exact.marginals[v]
                );
            }
        }
    }

    #[test]
    fn three_nodes_have_four_valid_assignments() {
        let g = graph_for(&[0, 2, 5], 0.1);
        let exact = exact_distribution(&g).unwrap();
        assert_eq!(exact.support_size, 4);
    }

    #[test]
    fn exact_map_is_the_minimum_weight_matching_for_small_priors() {
        // With a small flip rate the most probable assignment minimizes
        // total weight.
        let g = graph_for(&[0, 1], 0.01);
        let exact = exact_distribution(&g).unwrap();
        let inst = crate::matching::MatchingInstance::from_graph(&g);
        let best = crate::matching::mwpm(&inst);
        assert_eq!(
            inst.selection_weight(&exact.map_assignment),
            inst.selection_weight(&best)
        );
    }

    #[test]
    fn messages_stay_normalized() {
        let g = graph_for(&[0, 1, 3, 4], 0.15);
        let fg = FactorGraph::from_graph(&g);
        let mut state = init_messages(&g, 1e-12, false);
        for _ in 0..10 {
            bp_iteration(&fg, &mut state);
            for i in 0..fg.n_checks() {
                for t in 0..fg.check_degree() {
                    for m in [state.check_to_var(i, t), state.var_to_check(i, t)] {
                        assert!((m[0] + m[1] - 1.0).abs() < 1e-12);
                        assert!(m[0] >= 0.0 && m[1] >= 0.0);
                    }
                }
            }
        }
        assert_eq!(state.iteration(), 10);
    }

    #[test]
    fn symmetric_priors_give_symmetric_marginals() {
        // Two detection nodes with equal boundary weights: swapping the
        // nodes is a symmetry, so the boundary marginals must agree.
        let metric = d3_metric();
        let syn = Syndrome::from_bits(BitVec::from_ones(6, &[0, 5]));
        assert_eq!(metric.dist_boundary(0), metric.dist_boundary(5));
        let g = build_decoding_graph::<f64>(&syn, &metric, 0.2).unwrap();
        let fg = FactorGraph::from_graph(&g);
        let mut state = init_messages(&g, 1e-12, false);
        for _ in 0..8 {
            bp_iteration(&fg, &mut state);
        }
        let m = marginals(&fg, &state);
        let u0 = m[boundary_var_id(2, 0)][1];
        let u1 = m[boundary_var_id(2, 1)][1];
        assert!((u0 - u1).abs() < 1e-12);
    }

    #[test]
    fn frozen_priors_wash_out_after_the_first_iterations() {
        // Two symmetric detection nodes form a tree, so message passing
        // hits its fixpoint exactly. With frozen uniform prior messages the
        // flip rate enters only through the seeded variable messages: it
        // shows up in the first iteration and is gone from the fixpoint.
        let run = |q: f64, iters: usize, freeze: bool| {
            let g = graph_for(&[0, 5], q);
            let fg = FactorGraph::from_graph(&g);
            let mut state = init_messages(&g, 1e-12, freeze);
            for _ in 0..iters {
                bp_iteration(&fg, &mut state);
            }
            marginals(&fg, &state)
        };
        assert_ne!(run(0.05, 1, true), run(0.3, 1, true));
        assert_eq!(run(0.05, 10, true), run(0.3, 10, true));
        assert_ne!(run(0.05, 10, true), run(0.05, 10, false));
    }

    #[test]
    fn initial_messages_carry_the_prior_factor() {
        // Checks 0 and 3 sit distance 2 apart, so the pair variable has
        // prior (0.1/0.9)^2 = 1/81 and must seed the message (80/81, 1/81).
        let g = graph_for(&[0, 3], 0.1);
        let fg = FactorGraph::from_graph(&g);
        let state = init_messages(&g, 1e-12, false);
        for i in 0..fg.n_checks() {
            for t in 0..fg.check_degree() {
                let rho = g.var_prior(fg.slot_var(i, t));
                let m = state.var_to_check(i, t);
                assert!((m[0] - (1.0 - rho)).abs() < 1e-12 && (m[1] - rho).abs() < 1e-12);
                assert_eq!(state.check_to_var(i, t), [0.5, 0.5]);
            }
        }
        let v = pair_var_id(2, 0, 1);
        let m = state.prior_msg(v);
        assert!((m[0] - 80.0 / 81.0).abs() < 1e-12 && (m[1] - 1.0 / 81.0).abs() < 1e-12);
    }

    #[test]
    fn exact_distribution_rejects_large_graphs() {
        let code = build_surface_code(5).unwrap();
        let metric = precompute_metric(&code, Pauli::Z).unwrap();
        let unsat: Vec<usize> = (0..8).collect();
        let syn = Syndrome::from_bits(BitVec::from_ones(metric.n_checks(), &unsat));
        let g = build_decoding_graph::<f64>(&syn, &metric, 0.1).unwrap();
        assert!(g.n_vars() > EXACT_MAX_VARS);
        assert!(exact_distribution(&g).is_err());
    }

    #[test]
    fn empty_graph_has_single_empty_assignment() {
        let metric = d3_metric();
        let syn = Syndrome::from_bits(BitVec::zeros(6));
        let g = build_decoding_graph::<f64>(&syn, &metric, 0.1).unwrap();
        let exact = exact_distribution(&g).unwrap();
        assert_eq!(exact.support_size, 1);
        assert!(exact.map_assignment.is_empty());
    }
}
