//! Turning marginals into hard edge selections.
//!
//! Two readouts are used. The marginal assignment simply selects every
//! variable whose one-probability strictly exceeds one half; it may violate
//! the exactly-one checks. Forced convergence always produces a valid
//! perfect matching: variables are partitioned into classes owned by
//! detection nodes, and the globally most confident still-valid variable is
//! selected repeatedly until every node is covered. When the marginal
//! assignment happens to be a valid matching the greedy selection returns
//! exactly that assignment, so the two readouts agree on converged runs.

use crate::decoding_graph::{boundary_var_id, n_vars, pair_var_id, var_kind, VarId, VarKind};
use crate::factor_graph::FactorGraph;
use crate::real::Real;

/// Variables whose marginal strictly favors selection. Ties at one half are
/// left unselected.
pub fn marginal_assignment<F: Real>(marg: &[[F; 2]]) -> Vec<VarId> {
    marg.iter()
        .enumerate()
        .filter(|(_, m)| m[1] > m[0])
        .map(|(v, _)| v)
        .collect()
}

/// True iff the assignment satisfies every exactly-one check factor.
pub fn check_convergence(fg: &FactorGraph, selected: &[VarId]) -> bool {
    let mut x = vec![false; fg.n_vars()];
    for &v in selected {
        x[v] = true;
    }
    (0..fg.n_checks()).all(|i| fg.eval_check_factor(i, &x))
}

/// Partition of the variables into per-node classes: pair `v_{ab}` belongs
/// to the class of `min(a, b)`, boundary `u_i` to the class of `i`. Class
/// `i` is `{v_{ij} : j > i} + {u_i}`.
pub fn partition_edges(s: usize) -> Vec<Vec<VarId>> {
    let mut classes = vec![Vec::new(); s];
    for (i, class) in classes.iter_mut().enumerate() {
        for j in (i + 1)..s {
            class.push(pair_var_id(s, i, j));
        }
        class.push(boundary_var_id(s, i));
    }
    classes
}

/// Endpoints of a variable as up to two node indices.
fn endpoints(s: usize, var: VarId) -> (usize, Option<usize>) {
    match var_kind(s, var) {
        VarKind::Pair(a, b) => (a, Some(b)),
        VarKind::Boundary(i) => (i, None),
    }
}

/// Greedy matching readout. Every round selects the valid variable (all
/// endpoints unmatched) with the highest one-probability, breaking ties
/// toward the smallest variable id, then marks its endpoints matched.
/// Boundary variables stay valid as long as their node is unmatched, so the
/// loop always terminates with a perfect matching.
pub fn forced_convergence<F: Real>(fg: &FactorGraph, marg: &[[F; 2]]) -> Vec<VarId> {
    let s = fg.s();
    debug_assert_eq!(marg.len(), n_vars(s));
    if s == 0 {
        return Vec::new();
    }
    let classes = partition_edges(s);
    let mut matched = vec![false; s];

    // Cached per-class maxima. Removing a non-maximal variable never moves a
    // class maximum, so only classes whose cached maximum got invalidated
    // need a rescan.
    let class_max = |class: &[VarId], matched: &[bool]| -> Option<VarId> {
        let mut best: Option<VarId> = None;
        for &v in class {
            let (a, b) = endpoints(s, v);
            if matched[a] || b.map_or(false, |b| matched[b]) {
                continue;
            }
            best = match best {
                None => Some(v),
                Some(cur) => {
                    if marg[v][1] > marg[cur][1] {
                        Some(v)
                    } else {
                        Some(cur)
                    }
                }
            };
        }
        best
    };
    let mut maxima: Vec<Option<VarId>> = classes
        .iter()
        .map(|class| class_max(class, &matched))
        .collect();

    let mut selected = Vec::new();
    let mut remaining = s;
    while remaining > 0 {
        let mut best: Option<VarId> = None;
        for &m in maxima.iter().flatten() {
            best = Some(match best {
                None => m,
                Some(cur)
                    if marg[m][1] > marg[cur][1]
                        || (marg[m][1] == marg[cur][1] && m < cur) =>
                {
                    m
                }
                Some(cur) => cur,
            });
        }
        let pick = best.expect("an unmatched node always has a valid boundary variable");
        selected.push(pick);
        let (a, b) = endpoints(s, pick);
        matched[a] = true;
        remaining -= 1;
        if let Some(b) = b {
            matched[b] = true;
            remaining -= 1;
        }
        for i in 0..s {
            if let Some(m) = maxima[i] {
                let (x, y) = endpoints(s, m);
                if matched[x] || y.map_or(false, |y| matched[y]) {
                    maxima[i] = class_max(&classes[i], &matched);
                }
            }
        }
    }
    selected.sort_unstable();
    selected
}
