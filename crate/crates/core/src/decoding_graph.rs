//! The per-syndrome decoding graph and its precomputed metric.
//!
//! For a syndrome with `s` unsatisfied checks the graph has one detection
//! node per unsatisfied check plus one private boundary node each: `2s`
//! nodes, `s(s-1)/2` pair edges and `s` boundary edges. Edge weights are
//! integer shortest-error-path lengths on the lattice; each edge also keeps a
//! representative qubit path so a selected edge set can be turned back into
//! an error pattern.
//!
//! Pair distances are measured on the check-adjacency graph (checks adjacent
//! iff they share a qubit) and never route through the boundary; matching two
//! checks via the boundary is expressed by selecting both boundary edges
//! instead.

use crate::code::{CodeSpec, Pauli, Syndrome};
use crate::error::{Error, Result};
use crate::real::Real;
use crate::ErrorPattern;

/// Variable id inside one decoding graph: pair edges first (row-major over
/// ordered pairs `a < b`), then the `s` boundary edges.
pub type VarId = usize;

/// Number of pair variables for `s` detection nodes.
pub fn n_pairs(s: usize) -> usize {
    s * s.saturating_sub(1) / 2
}

/// Total number of variables for `s` detection nodes.
pub fn n_vars(s: usize) -> usize {
    n_pairs(s) + s
}

/// Variable id of the pair edge between local detection nodes `a < b`.
pub fn pair_var_id(s: usize, a: usize, b: usize) -> VarId {
    debug_assert!(a < b && b < s);
    a * (2 * s - a - 1) / 2 + (b - a - 1)
}

/// Variable id of the boundary edge of local detection node `i`.
pub fn boundary_var_id(s: usize, i: usize) -> VarId {
    debug_assert!(i < s);
    n_pairs(s) + i
}

/// What a variable id stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    /// Edge between two detection nodes (local indices, `a < b`).
    Pair(usize, usize),
    /// Edge from detection node `i` to its private boundary node.
    Boundary(usize),
}

/// Classify a variable id for a graph with `s` detection nodes.
pub fn var_kind(s: usize, var: VarId) -> VarKind {
    let n_pair = n_pairs(s);
    if var < n_pair {
        // Invert the row-major triangular index.
        let mut a = 0;
        let mut row_start = 0;
        while row_start + (s - a - 1) <= var {
            row_start += s - a - 1;
            a += 1;
        }
        VarKind::Pair(a, a + 1 + (var - row_start))
    } else {
        VarKind::Boundary(var - n_pair)
    }
}

/// Shortest-path distances and representative qubit paths between checks of
/// one type, precomputed once per code and reused across trials.
#[derive(Debug, Clone)]
pub struct MetricTable {
    n_checks: usize,
    n_qubits: usize,
    dist: Vec<u32>,
    dist_boundary: Vec<u32>,
    pair_paths: Vec<Vec<usize>>,
    boundary_paths: Vec<Vec<usize>>,
}

impl MetricTable {
    pub fn n_checks(&self) -> usize {
        self.n_checks
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Shortest error-path length between checks `i` and `j`, in qubit flips.
    pub fn dist(&self, i: usize, j: usize) -> u32 {
        self.dist[i * self.n_checks + j]
    }

    /// Shortest error-path length from check `i` to the lattice boundary.
    pub fn dist_boundary(&self, i: usize) -> u32 {
        self.dist_boundary[i]
    }

    /// Representative shortest qubit path between checks `i != j`, read from
    /// the smaller to the larger index; lexicographically smallest among all
    /// shortest paths.
    pub fn path(&self, i: usize, j: usize) -> &[usize] {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        &self.pair_paths[pair_var_id(self.n_checks, a, b)]
    }

    /// Representative shortest qubit path from check `i` to the boundary.
    pub fn path_boundary(&self, i: usize) -> &[usize] {
        &self.boundary_paths[i]
    }
}

/// BFS layer expansion that tracks, per node, the lexicographically smallest
/// shortest qubit sequence from the source.
fn lex_bfs(
    adj: &[Vec<(usize, usize)>],
    boundary_edges: &[Vec<usize>],
    source: usize,
) -> (Vec<u32>, Vec<Vec<usize>>, u32, Vec<usize>) {
    let m = adj.len();
    let mut dist = vec![u32::MAX; m];
    let mut seq: Vec<Vec<usize>> = vec![Vec::new(); m];
    dist[source] = 0;
    let mut layer = vec![source];
    while !layer.is_empty() {
        let mut next: Vec<usize> = Vec::new();
        for &u in &layer {
            for &(v, _) in &adj[u] {
                if dist[v] == u32::MAX {
                    dist[v] = dist[u] + 1;
                    next.push(v);
                }
            }
        }
        next.sort_unstable();
        next.dedup();
        // All predecessors of this layer are settled, so the lex-smallest
        // sequence per node is a min over (pred sequence, edge qubit).
        for &v in &next {
            let mut best: Option<(&Vec<usize>, usize)> = None;
            for &(u, q) in &adj[v] {
                if dist[u] != u32::MAX && dist[u] + 1 == dist[v] {
                    let cand = (&seq[u], q);
                    if best.map_or(true, |b| cand < b) {
                        best = Some(cand);
                    }
                }
            }
            let (prefix, q) = best.expect("layered BFS node has a predecessor");
            let mut s = prefix.clone();
            s.push(q);
            seq[v] = s;
        }
        layer = next;
    }
    // Boundary is a sink reached through weight-1 columns.
    let mut bdist = u32::MAX;
    let mut bseq: Vec<usize> = Vec::new();
    for (u, qs) in boundary_edges.iter().enumerate() {
        if dist[u] == u32::MAX {
            continue;
        }
        for &q in qs {
            let d = dist[u] + 1;
            if d < bdist {
                bdist = d;
                bseq = seq[u].clone();
                bseq.push(q);
            } else if d == bdist {
                let mut cand = seq[u].clone();
                cand.push(q);
                if cand < bseq {
                    bseq = cand;
                }
            }
        }
    }
    (dist, seq, bdist, bseq)
}

/// Precompute the metric for the checks that detect errors of type `pauli`.
pub fn precompute_metric(code: &CodeSpec, pauli: Pauli) -> Result<MetricTable> {
    let h = code.checks_for(pauli);
    let m = h.n_rows();
    let n_qubits = h.n_cols();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m];
    let mut boundary_edges: Vec<Vec<usize>> = vec![Vec::new(); m];
    for q in 0..n_qubits {
        let sup = h.col_support(q);
        match sup.as_slice() {
            [a] => boundary_edges[*a].push(q),
            [a, b] => {
                adj[*a].push((*b, q));
                adj[*b].push((*a, q));
            }
            _ => unreachable!("graphlike property validated at construction"),
        }
    }

    let mut dist = vec![u32::MAX; m * m];
    let mut dist_boundary = vec![u32::MAX; m];
    let mut pair_paths = vec![Vec::new(); n_pairs(m)];
    let mut boundary_paths = vec![Vec::new(); m];
    for i in 0..m {
        let (d, seqs, bdist, bseq) = lex_bfs(&adj, &boundary_edges, i);
        dist[i * m + i] = 0;
        for j in 0..m {
            if i == j {
                continue;
            }
            if d[j] == u32::MAX {
                return Err(Error::param(format!(
                    "check graph is disconnected: no path between checks {i} and {j}"
                )));
            }
            dist[i * m + j] = d[j];
            if i < j {
                pair_paths[pair_var_id(m, i, j)] = seqs[j].clone();
            }
        }
        if bdist == u32::MAX {
            return Err(Error::param(format!(
                "check {i} cannot reach the lattice boundary"
            )));
        }
        dist_boundary[i] = bdist;
        boundary_paths[i] = bseq;
    }
    Ok(MetricTable {
        n_checks: m,
        n_qubits,
        dist,
        dist_boundary,
        pair_paths,
        boundary_paths,
    })
}

/// Decoding graph for one syndrome: the complete graph over detection nodes
/// plus one boundary edge per node, each edge carrying its integer weight and
/// the prior `(q/(1-q))^w`.
#[derive(Debug, Clone)]
pub struct DecodingGraph<F> {
    detection_nodes: Vec<usize>,
    n_qubits: usize,
    pair_weights: Vec<u64>,
    pair_priors: Vec<F>,
    boundary_weights: Vec<u64>,
    boundary_priors: Vec<F>,
}

impl<F: Real> DecodingGraph<F> {
    /// Number of detection nodes `s`.
    pub fn s(&self) -> usize {
        self.detection_nodes.len()
    }

    pub fn n_vars(&self) -> usize {
        n_vars(self.s())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Global check indices behind the local detection nodes, ascending.
    pub fn detection_nodes(&self) -> &[usize] {
        &self.detection_nodes
    }

    pub fn var_kind(&self, var: VarId) -> VarKind {
        var_kind(self.s(), var)
    }

    pub fn var_weight(&self, var: VarId) -> u64 {
        let n_pair = self.pair_weights.len();
        if var < n_pair {
            self.pair_weights[var]
        } else {
            self.boundary_weights[var - n_pair]
        }
    }

    pub fn var_prior(&self, var: VarId) -> F {
        let n_pair = self.pair_priors.len();
        if var < n_pair {
            self.pair_priors[var]
        } else {
            self.boundary_priors[var - n_pair]
        }
    }

    /// Edge-list text dump: one `var kind endpoints w prior` line per edge.
    pub fn edge_list_text(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        for var in 0..self.n_vars() {
            match self.var_kind(var) {
                VarKind::Pair(a, b) => writeln!(
                    out,
                    "v{var} pair {}-{} w={} prior={}",
                    self.detection_nodes[a],
                    self.detection_nodes[b],
                    self.var_weight(var),
                    self.var_prior(var)
                )
                .unwrap(),
                VarKind::Boundary(i) => writeln!(
                    out,
                    "v{var} boundary {} w={} prior={}",
                    self.detection_nodes[i],
                    self.var_weight(var),
                    self.var_prior(var)
                )
                .unwrap(),
            }
        }
        out
    }
}

/// Prior probability `(q/(1-q))^w` that an edge of weight `w` is used.
fn edge_prior<F: Real>(flip_rate: F, w: u64) -> F {
    let ratio = flip_rate / (F::one() - flip_rate);
    ratio.powi(w as i32)
}

/// Build the decoding graph for a syndrome. `flip_rate` must lie in
/// `(0, 1/2)` so priors strictly decrease with weight.
pub fn build_decoding_graph<F: Real>(
    syn: &Syndrome,
    metric: &MetricTable,
    flip_rate: F,
) -> Result<DecodingGraph<F>> {
    if !(flip_rate > F::zero() && flip_rate < F::half()) {
        return Err(Error::param(format!(
            "flip rate must be in (0, 1/2), got {flip_rate}"
        )));
    }
    let detection_nodes: Vec<usize> = syn.unsatisfied().to_vec();
    if let Some(&max) = detection_nodes.last() {
        if max >= metric.n_checks() {
            return Err(Error::param("syndrome does not match metric table"));
        }
    }
    let s = detection_nodes.len();
    let mut pair_weights = Vec::with_capacity(n_pairs(s));
    let mut pair_priors = Vec::with_capacity(n_pairs(s));
    for a in 0..s {
        for b in (a + 1)..s {
            let w = metric.dist(detection_nodes[a], detection_nodes[b]) as u64;
            pair_weights.push(w);
            pair_priors.push(edge_prior(flip_rate, w));
        }
    }
    let mut boundary_weights = Vec::with_capacity(s);
    let mut boundary_priors = Vec::with_capacity(s);
    for &node in &detection_nodes {
        let w = metric.dist_boundary(node) as u64;
        boundary_weights.push(w);
        boundary_priors.push(edge_prior(flip_rate, w));
    }
    Ok(DecodingGraph {
        detection_nodes,
        n_qubits: metric.n_qubits(),
        pair_weights,
        pair_priors,
        boundary_weights,
        boundary_priors,
    })
}

/// Where a candidate came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CandidateSource {
    Marginalization,
    Forced,
    Mwpm,
}

impl std::fmt::Display for CandidateSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CandidateSource::Marginalization => write!(f, "marginalization"),
            CandidateSource::Forced => write!(f, "forced"),
            CandidateSource::Mwpm => write!(f, "mwpm"),
        }
    }
}

/// A selected edge set, its derived error pattern and total matching weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub selected: Vec<VarId>,
    pub e_hat: ErrorPattern,
    pub weight: u64,
    pub source: CandidateSource,
    pub iteration: usize,
}

impl Candidate {
    pub fn empty(n_qubits: usize, source: CandidateSource) -> Self {
        Self {
            selected: Vec::new(),
            e_hat: ErrorPattern::zeros(n_qubits),
            weight: 0,
            source,
            iteration: 0,
        }
    }
}

/// Materialize a selected edge set: XOR the representative qubit paths and
/// sum the edge weights.
pub fn candidate_from_selection<F: Real>(
    g: &DecodingGraph<F>,
    metric: &MetricTable,
    selected: &[VarId],
    source: CandidateSource,
    iteration: usize,
) -> Result<Candidate> {
    let mut e_hat = ErrorPattern::zeros(g.n_qubits());
    let mut weight = 0u64;
    let mut sorted: Vec<VarId> = selected.to_vec();
    sorted.sort_unstable();
    for &var in &sorted {
        if var >= g.n_vars() {
            return Err(Error::param(format!("unknown variable id {var}")));
        }
        let path = match g.var_kind(var) {
            VarKind::Pair(a, b) => {
                metric.path(g.detection_nodes()[a], g.detection_nodes()[b])
            }
            VarKind::Boundary(i) => metric.path_boundary(g.detection_nodes()[i]),
        };
        for &q in path {
            e_hat.toggle(q);
        }
        weight += g.var_weight(var);
    }
    Ok(Candidate {
        selected: sorted,
        e_hat,
        weight,
        source,
        iteration,
    })
}
