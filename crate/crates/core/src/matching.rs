//! Exact minimum-weight perfect matching on the decoding graph.
//!
//! Detection nodes may pair with each other (pair variables) or retire to
//! their private boundary node (boundary variables). The reduction to
//! maximum-weight matching doubles the vertex set: detection nodes `0..s`,
//! boundary copies `s..2s`, with zero-weight edges between boundary copies so
//! unused boundary nodes can pair off. Weights are negated around the
//! maximum so a maximum-cardinality maximum-weight matching is exactly a
//! minimum-weight perfect matching.
//!
//! Ties between minimum-weight matchings are broken deterministically toward
//! the matching with the fewest pair edges, i.e. the most boundary edges.
//! Under the independent-edge probability model two equal-weight matchings
//! differ in mass by the `1-rho` factors of their unselected edges, which
//! favors the selection with more edges, so this tie-break keeps the exact
//! matcher consistent with the ranking the belief-propagation decoders
//! optimize.

mod blossom;

use crate::decoding_graph::{
    boundary_var_id, n_vars, pair_var_id, var_kind, DecodingGraph, VarId, VarKind,
};
use crate::error::{Error, Result};
use crate::real::Real;

/// Integer edge weights of one decoding graph, the only input the exact
/// matcher needs.
#[derive(Debug, Clone)]
pub struct MatchingInstance {
    s: usize,
    weights: Vec<u64>,
}

impl MatchingInstance {
    /// Weights indexed by variable id: pair variables row-major, then
    /// boundary variables.
    pub fn new(s: usize, weights: Vec<u64>) -> Result<Self> {
        if weights.len() != n_vars(s) {
            return Err(Error::param(format!(
                "expected {} weights for {s} detection nodes, got {}",
                n_vars(s),
                weights.len()
            )));
        }
        Ok(Self { s, weights })
    }

    pub fn from_graph<F: Real>(g: &DecodingGraph<F>) -> Self {
        let weights = (0..g.n_vars()).map(|v| g.var_weight(v)).collect();
        Self {
            s: g.s(),
            weights,
        }
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn weight(&self, var: VarId) -> u64 {
        self.weights[var]
    }

    /// Total weight of a selection of variables.
    pub fn selection_weight(&self, selected: &[VarId]) -> u64 {
        selected.iter().map(|&v| self.weights[v]).sum()
    }
}

/// Exact minimum-weight perfect matching. Returns the selected variable ids
/// (pair and boundary), sorted ascending. Every detection node is covered
/// exactly once. Among minimum-weight matchings the one with the fewest
/// pair edges is returned (see the module docs).
pub fn mwpm(inst: &MatchingInstance) -> Vec<VarId> {
    let s = inst.s;
    if s == 0 {
        return Vec::new();
    }
    // Scale weights so the pair-edge count acts as a strict secondary
    // objective: cost k*w + 1 for pair edges and k*w for boundary edges,
    // with k exceeding any possible pair-count difference.
    let k = s as u64 + 1;
    let cost = |v: VarId| match var_kind(s, v) {
        VarKind::Pair(..) => k * inst.weights[v] + 1,
        VarKind::Boundary(_) => k * inst.weights[v],
    };
    let w_max = (0..n_vars(s)).map(cost).max().unwrap() as i64;
    let flip = |w: u64| w_max + 1 - w as i64;
    let mut edges: Vec<(usize, usize, i64)> = Vec::with_capacity(s * s);
    for a in 0..s {
        for b in (a + 1)..s {
            edges.push((a, b, flip(cost(pair_var_id(s, a, b)))));
            // Boundary copies pair off for free.
            edges.push((s + a, s + b, w_max + 1));
        }
        edges.push((a, s + a, flip(cost(boundary_var_id(s, a)))));
    }
    let mate = blossom::max_weight_matching(2 * s, &edges, true);
    let mut selected = Vec::new();
    for a in 0..s {
        let m = mate[a];
        debug_assert!(m != blossom::NONE, "perfect matching must cover node {a}");
        if m < s {
            if a < m {
                selected.push(pair_var_id(s, a, m));
            }
        } else {
            debug_assert_eq!(m, s + a, "detection node paired with foreign boundary");
            selected.push(boundary_var_id(s, a));
        }
    }
    selected.sort_unstable();
    selected
}

/// Capacity bound for [`brute_force_mwpm`]; the state space is `2^s`.
pub const BRUTE_FORCE_MAX_S: usize = 10;

/// Exhaustive minimum-weight perfect matching by memoized recursion over
/// subsets of uncovered detection nodes. Intended as an independent oracle
/// for [`mwpm`]; rejects `s > BRUTE_FORCE_MAX_S`.
pub fn brute_force_mwpm(inst: &MatchingInstance) -> Result<(Vec<VarId>, u64)> {
    let s = inst.s;
    if s > BRUTE_FORCE_MAX_S {
        return Err(Error::capacity(format!(
            "brute-force matching supports at most {BRUTE_FORCE_MAX_S} detection nodes, got {s}"
        )));
    }
    let mut memo: Vec<Option<u64>> = vec![None; 1 << s];

    fn cost(inst: &MatchingInstance, memo: &mut [Option<u64>], mask: usize) -> u64 {
        if mask == 0 {
            return 0;
        }
        if let Some(c) = memo[mask] {
            return c;
        }
        let s = inst.s;
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut best =
            inst.weight(boundary_var_id(s, i)) + cost(inst, memo, rest);
        for j in (i + 1)..s {
            if rest & (1 << j) != 0 {
                let c = inst.weight(pair_var_id(s, i, j))
                    + cost(inst, memo, rest & !(1 << j));
                best = best.min(c);
            }
        }
        memo[mask] = Some(best);
        best
    }

    let full = (1usize << s) - 1;
    let total = cost(inst, &mut memo, full);

    // Reconstruct one optimal selection, preferring the boundary and then
    // the smallest partner on ties so the result is deterministic.
    let mut selected = Vec::new();
    let mut mask = full;
    while mask != 0 {
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let here = cost(inst, &mut memo, mask);
        if inst.weight(boundary_var_id(s, i)) + cost(inst, &mut memo, rest) == here {
            selected.push(boundary_var_id(s, i));
            mask = rest;
            continue;
        }
        let mut advanced = false;
        for j in (i + 1)..s {
            if rest & (1 << j) != 0
                && inst.weight(pair_var_id(s, i, j))
                    + cost(inst, &mut memo, rest & !(1 << j))
                    == here
            {
                selected.push(pair_var_id(s, i, j));
                mask = rest & !(1 << j);
                advanced = true;
                break;
            }
        }
        debug_assert!(advanced, "optimal cost must be witnessed by some choice");
    }
    selected.sort_unstable();
    Ok((selected, total))
}

/// True iff `selected` covers every detection node exactly once.
pub fn is_valid_matching(s: usize, selected: &[VarId]) -> bool {
    let mut covered = vec![false; s];
    for &var in selected {
        if var >= n_vars(s) {
            return false;
        }
        let ends = match var_kind(s, var) {
            VarKind::Pair(a, b) => [Some(a), Some(b)],
            VarKind::Boundary(i) => [Some(i), None],
        };
        for e in ends.into_iter().flatten() {
            if covered[e] {
                return false;
            }
            covered[e] = true;
        }
    }
    covered.into_iter().all(|c| c)
}
