//! Maximum-weight matching in general graphs (Edmonds' blossom algorithm,
//! primal-dual formulation after Galil's survey and Joris van Rantwijk's
//! reference implementation).
//!
//! `max_weight_matching` runs in O(V^3) time on dense graphs. With
//! `max_cardinality` set, only maximum-cardinality matchings are considered,
//! which is how minimum-weight perfect matching is recovered by weight
//! negation elsewhere in this crate.
//!
//! All arithmetic is on integer weights; vertex duals are stored
//! premultiplied by two so every quantity stays integral.

/// Marker for "no vertex / no endpoint / no edge".
pub const NONE: usize = usize::MAX;

const LABEL_FREE: usize = 0;
const LABEL_S: usize = 1;
const LABEL_T: usize = 2;
/// Breadcrumb bit set on S-labels while tracing alternating paths.
const LABEL_CRUMB: usize = 4;

struct Blossom {
    n: usize,
    edges: Vec<(usize, usize, i64)>,
    max_cardinality: bool,
    /// `endpoint[2k]` and `endpoint[2k+1]` are the two vertices of edge `k`.
    endpoint: Vec<usize>,
    /// Remote endpoint ids of the edges incident to each vertex.
    neighb_end: Vec<Vec<usize>>,
    /// Remote endpoint of the matched edge per vertex, `NONE` if single.
    mate: Vec<usize>,
    /// Per top-level blossom: free, S or T (breadcrumb bit while scanning).
    label: Vec<usize>,
    /// Remote endpoint of the edge through which the label was obtained.
    label_end: Vec<usize>,
    /// Top-level blossom containing each vertex.
    in_blossom: Vec<usize>,
    /// Immediate parent of a sub-blossom, `NONE` at top level.
    blossom_parent: Vec<usize>,
    /// Sub-blossoms of a non-trivial blossom, starting at the base.
    blossom_childs: Vec<Vec<usize>>,
    /// Base vertex of each (sub-)blossom.
    blossom_base: Vec<usize>,
    /// Connecting edge endpoints between consecutive sub-blossoms.
    blossom_endps: Vec<Vec<usize>>,
    /// Least-slack edge candidates for the delta2/delta3 steps.
    best_edge: Vec<usize>,
    blossom_best_edges: Vec<Option<Vec<usize>>>,
    unused_blossoms: Vec<usize>,
    /// Dual variables: `2u(v)` for vertices, `z(b)` for blossoms.
    dual_var: Vec<i64>,
    /// Edges known to have zero slack.
    allow_edge: Vec<bool>,
    /// Newly discovered S-vertices awaiting a scan.
    queue: Vec<usize>,
}

impl Blossom {
    fn new(n: usize, edges: Vec<(usize, usize, i64)>, max_cardinality: bool) -> Self {
        let n_edge = edges.len();
        let max_weight = edges.iter().map(|e| e.2).max().unwrap_or(0).max(0);
        let mut endpoint = Vec::with_capacity(2 * n_edge);
        let mut neighb_end = vec![Vec::new(); n];
        for (k, &(i, j, _)) in edges.iter().enumerate() {
            debug_assert!(i != j && i < n && j < n);
            endpoint.push(i);
            endpoint.push(j);
            neighb_end[i].push(2 * k + 1);
            neighb_end[j].push(2 * k);
        }
        let mut blossom_base: Vec<usize> = (0..n).collect();
        blossom_base.extend(std::iter::repeat(NONE).take(n));
        let mut dual_var = vec![max_weight; n];
        dual_var.extend(std::iter::repeat(0).take(n));
        Blossom {
            n,
            edges,
            max_cardinality,

            endpoint,
            neighb_end,
            mate: vec![NONE; n],
            label: vec![LABEL_FREE; 2 * n],
            label_end: vec![NONE; 2 * n],
            in_blossom: (0..n).collect(),
            blossom_parent: vec![NONE; 2 * n],
            blossom_childs: vec![Vec::new(); 2 * n],
            blossom_base,
            blossom_endps: vec![Vec::new(); 2 * n],
            best_edge: vec![NONE; 2 * n],
            blossom_best_edges: vec![None; 2 * n],
            unused_blossoms: (n..2 * n).collect(),
            dual_var,
            allow_edge: vec![false; n_edge],
            queue: Vec::new(),
        }
    }

    /// Twice the slack of edge `k`. Only valid across top-level blossoms.
    fn slack(&self, k: usize) -> i64 {
        let (i, j, wt) = self.edges[k];
        self.dual_var[i] + self.dual_var[j] - 2 * wt
    }

    fn blossom_leaves(&self, b: usize) -> Vec<usize> {
        if b < self.n {
            return vec![b];
        }
        let mut leaves = Vec::new();
        let mut stack = vec![b];
        while let Some(t) = stack.pop() {
            if t < self.n {
                leaves.push(t);
            } else {
                stack.extend(self.blossom_childs[t].iter().copied());
            }
        }
        leaves
    }

    /// Label the top-level blossom of `w`, recording the entry endpoint `p`.
    /// Labeling a vertex T immediately labels its mate S.
    fn assign_label(&mut self, w: usize, t: usize, p: usize) {
        let b = self.in_blossom[w];
        debug_assert!(self.label[w] == LABEL_FREE && self.label[b] == LABEL_FREE);
        self.label[w] = t;
        self.label[b] = t;
        self.label_end[w] = p;
        self.label_end[b] = p;
        self.best_edge[w] = NONE;
        self.best_edge[b] = NONE;
        if t == LABEL_S {
            let leaves = self.blossom_leaves(b);
            self.queue.extend(leaves);
        } else if t == LABEL_T {
            let base = self.blossom_base[b];
            debug_assert!(self.mate[base] != NONE);
            let mate_end = self.mate[base];
            let partner = self.endpoint[mate_end];
            self.assign_label(partner, LABEL_S, mate_end ^ 1);
        }
    }

    /// Trace back from two S-vertices joined by an edge. Returns the base of
    /// the new blossom if the paths meet, or `NONE` for an augmenting path.
    fn scan_blossom(&mut self, v: usize, w: usize) -> usize {
        let mut path = Vec::new();
        let mut base = NONE;
        let mut v = v;
        let mut w = w;
        while v != NONE || w != NONE {
            let mut b = self.in_blossom[v];
            if self.label[b] & LABEL_CRUMB != 0 {
                base = self.blossom_base[b];
                break;
            }
            debug_assert_eq!(self.label[b], LABEL_S);
            path.push(b);
            self.label[b] = LABEL_S | LABEL_CRUMB;
            debug_assert_eq!(self.label_end[b], self.mate[self.blossom_base[b]]);
            if self.label_end[b] == NONE {
                v = NONE;
            } else {
                v = self.endpoint[self.label_end[b]];
                b = self.in_blossom[v];
                debug_assert_eq!(self.label[b], LABEL_T);
                debug_assert!(self.label_end[b] != NONE);
                v = self.endpoint[self.label_end[b]];
            }
            if w != NONE {
                std::mem::swap(&mut v, &mut w);
            }
        }
        for b in path {
            self.label[b] = LABEL_S;
        }
        base
    }

    /// Fold the cycle through edge `k` and `base` into a new S-blossom.
    fn add_blossom(&mut self, base: usize, k: usize) {
        let (mut v, mut w, _) = self.edges[k];
        let bb = self.in_blossom[base];
        let mut bv = self.in_blossom[v];
        let mut bw = self.in_blossom[w];
        let b = self.unused_blossoms.pop().expect("blossom ids exhausted");
        self.blossom_base[b] = base;
        self.blossom_parent[b] = NONE;
        self.blossom_parent[bb] = b;

        let mut childs = Vec::new();
        let mut endps = Vec::new();
        while bv != bb {
            self.blossom_parent[bv] = b;
            childs.push(bv);
            endps.push(self.label_end[bv]);
            debug_assert!(
                self.label[bv] == LABEL_T
                    || (self.label[bv] == LABEL_S
                        && self.label_end[bv] == self.mate[self.blossom_base[bv]])
            );
            debug_assert!(self.label_end[bv] != NONE);
            v = self.endpoint[self.label_end[bv]];
            bv = self.in_blossom[v];
        }
        childs.push(bb);
        childs.reverse();
        endps.reverse();
        endps.push(2 * k);
        while bw != bb {
            self.blossom_parent[bw] = b;
            childs.push(bw);
            endps.push(self.label_end[bw] ^ 1);
            debug_assert!(
                self.label[bw] == LABEL_T
                    || (self.label[bw] == LABEL_S
                        && self.label_end[bw] == self.mate[self.blossom_base[bw]])
            );
            debug_assert!(self.label_end[bw] != NONE);
            w = self.endpoint[self.label_end[bw]];
            bw = self.in_blossom[w];
        }
        self.blossom_childs[b] = childs;
        self.blossom_endps[b] = endps;

        debug_assert_eq!(self.label[bb], LABEL_S);
        self.label[b] = LABEL_S;
        self.label_end[b] = self.label_end[bb];
        self.dual_var[b] = 0;
        for v in self.blossom_leaves(b) {
            if self.label[self.in_blossom[v]] == LABEL_T {
                // Former T-vertices become S-vertices of the new blossom.
                self.queue.push(v);
            }
            self.in_blossom[v] = b;
        }

        // Merge the least-slack edge lists of the sub-blossoms.
        let mut best_edge_to = vec![NONE; 2 * self.n];
        for bv in self.blossom_childs[b].clone() {
            let nblists: Vec<Vec<usize>> = match self.blossom_best_edges[bv].take() {
                Some(list) => vec![list],
                None => self
                    .blossom_leaves(bv)
                    .iter()
                    .map(|&v| self.neighb_end[v].iter().map(|p| p / 2).collect())
                    .collect(),
            };
            for nblist in nblists {
                for k in nblist {
                    let (mut i, mut j, _) = self.edges[k];
                    if self.in_blossom[j] == b {
                        std::mem::swap(&mut i, &mut j);
                    }
                    let bj = self.in_blossom[j];
                    if bj != b
                        && self.label[bj] == LABEL_S
                        && (best_edge_to[bj] == NONE
                            || self.slack(k) < self.slack(best_edge_to[bj]))
                    {
                        best_edge_to[bj] = k;
                    }
                }
            }
            self.blossom_best_edges[bv] = None;
            self.best_edge[bv] = NONE;
        }
        let merged: Vec<usize> = best_edge_to.into_iter().filter(|&k| k != NONE).collect();
        self.best_edge[b] = NONE;
        for &k in &merged {
            if self.best_edge[b] == NONE || self.slack(k) < self.slack(self.best_edge[b]) {
                self.best_edge[b] = k;
            }
        }
        self.blossom_best_edges[b] = Some(merged);
    }

    /// Undo a blossom, either at the end of a stage (`end_stage`) or because
    /// its dual reached zero while labeled T.
    fn expand_blossom(&mut self, b: usize, end_stage: bool) {
        for s in self.blossom_childs[b].clone() {
            self.blossom_parent[s] = NONE;
            if s < self.n {
                self.in_blossom[s] = s;
            } else if end_stage && self.dual_var[s] == 0 {
                self.expand_blossom(s, end_stage);
            } else {
                for v in self.blossom_leaves(s) {
                    self.in_blossom[v] = s;
                }
            }
        }
        if !end_stage && self.label[b] == LABEL_T {
            // Relabel the exposed sub-blossoms along the path from the entry
            // child to the base; the remainder becomes free.
            debug_assert!(self.label_end[b] != NONE);
            let entry_child = self.in_blossom[self.endpoint[self.label_end[b] ^ 1]];
            let childs = self.blossom_childs[b].clone();
            let endps = self.blossom_endps[b].clone();
            let len = childs.len() as i64;
            let start = childs.iter().position(|&c| c == entry_child).unwrap() as i64;
            let (mut j, j_step, endp_trick) = if start & 1 != 0 {
                (start - len, 1i64, 0usize)
            } else {
                (start, -1i64, 1usize)
            };
            let at = |v: &Vec<usize>, i: i64| -> usize {
                let m = v.len() as i64;
                v[(((i % m) + m) % m) as usize]
            };
            let mut p = self.label_end[b];
            while j != 0 {
                // T-sub-blossom, then the S-sub-blossom behind it.
                self.label[self.endpoint[p ^ 1]] = LABEL_FREE;
                self.label[self.endpoint[at(&endps, j - endp_trick as i64) ^ endp_trick ^ 1]] =
                    LABEL_FREE;
                let ep = self.endpoint[p ^ 1];
                self.assign_label(ep, LABEL_T, p);
                self.allow_edge[at(&endps, j - endp_trick as i64) / 2] = true;
                j += j_step;
                p = at(&endps, j - endp_trick as i64) ^ endp_trick;
                self.allow_edge[p / 2] = true;
                j += j_step;
            }
            // The base keeps label T without propagating to its mate.
            let bv = at(&childs, j);
            self.label[self.endpoint[p ^ 1]] = LABEL_T;
            self.label[bv] = LABEL_T;
            self.label_end[self.endpoint[p ^ 1]] = p;
            self.label_end[bv] = p;
            self.best_edge[bv] = NONE;
            j += j_step;
            while at(&childs, j) != entry_child {
                let bv = at(&childs, j);
                if self.label[bv] == LABEL_S {
                    j += j_step;
                    continue;
                }
                let mut reached = NONE;
                for v in self.blossom_leaves(bv) {
                    if self.label[v] != LABEL_FREE {
                        reached = v;
                        break;
                    }
                }
                if reached != NONE {
                    debug_assert_eq!(self.label[reached], LABEL_T);
                    debug_assert_eq!(self.in_blossom[reached], bv);
                    self.label[reached] = LABEL_FREE;
                    self.label[self.endpoint[self.mate[self.blossom_base[bv]]]] = LABEL_FREE;
                    let le = self.label_end[reached];
                    self.assign_label(reached, LABEL_T, le);
                }
                j += j_step;
            }
        }
        self.label[b] = NONE;
        self.label_end[b] = NONE;
        self.blossom_base[b] = NONE;
        self.best_edge[b] = NONE;
        self.blossom_childs[b].clear();
        self.blossom_endps[b].clear();
        self.blossom_best_edges[b] = None;
        self.unused_blossoms.push(b);
    }

    /// Swap matched and unmatched edges along the path inside blossom `b`
    /// from vertex `v` to the base, then rebase the blossom at `v`.
    fn augment_blossom(&mut self, b: usize, v: usize) {
        let mut t = v;
        while self.blossom_parent[t] != b {
            t = self.blossom_parent[t];
        }
        if t >= self.n {
            self.augment_blossom(t, v);
        }
        let i = self.blossom_childs[b].iter().position(|&c| c == t).unwrap();
        let childs = self.blossom_childs[b].clone();
        let endps = self.blossom_endps[b].clone();
        let len = childs.len() as i64;
        let (mut j, j_step, endp_trick) = if i & 1 != 0 {
            (i as i64 - len, 1i64, 0usize)
        } else {
            (i as i64, -1i64, 1usize)
        };
        let at = |v: &Vec<usize>, idx: i64| -> usize {
            let m = v.len() as i64;
            v[(((idx % m) + m) % m) as usize]
        };
        while j != 0 {
            j += j_step;
            let t = at(&childs, j);
            let p = at(&endps, j - endp_trick as i64) ^ endp_trick;
            if t >= self.n {
                self.augment_blossom(t, self.endpoint[p]);
            }
            j += j_step;
            let t = at(&childs, j);
            if t >= self.n {
                self.augment_blossom(t, self.endpoint[p ^ 1]);
            }
            self.mate[self.endpoint[p]] = p ^ 1;
            self.mate[self.endpoint[p ^ 1]] = p;
        }
        self.blossom_childs[b].rotate_left(i);
        self.blossom_endps[b].rotate_left(i);
        self.blossom_base[b] = self.blossom_base[self.blossom_childs[b][0]];
        debug_assert_eq!(self.blossom_base[b], v);
    }

    /// Flip the matching along the augmenting path through edge `k`.
    fn augment_matching(&mut self, k: usize) {
        let (v, w, _) = self.edges[k];
        for &(start, start_p) in &[(v, 2 * k + 1), (w, 2 * k)] {
            let mut s = start;
            let mut p = start_p;
            loop {
                let bs = self.in_blossom[s];
                debug_assert_eq!(self.label[bs], LABEL_S);
                debug_assert_eq!(self.label_end[bs], self.mate[self.blossom_base[bs]]);
                if bs >= self.n {
                    self.augment_blossom(bs, s);
                }
                self.mate[s] = p;
                if self.label_end[bs] == NONE {
                    break;
                }
                let t = self.endpoint[self.label_end[bs]];
                let bt = self.in_blossom[t];
                debug_assert_eq!(self.label[bt], LABEL_T);
                debug_assert!(self.label_end[bt] != NONE);
                s = self.endpoint[self.label_end[bt]];
                let j = self.endpoint[self.label_end[bt] ^ 1];
                debug_assert_eq!(self.blossom_base[bt], t);
                if bt >= self.n {
                    self.augment_blossom(bt, j);
                }
                self.mate[j] = self.label_end[bt];
                p = self.label_end[bt] ^ 1;
            }
        }
    }

    /// Check the complementary-slackness conditions of the final solution.
    #[cfg(debug_assertions)]
    fn verify_optimum(&self) {
        let dual_offset = if self.max_cardinality {
            0.max(-self.dual_var[..self.n].iter().copied().min().unwrap_or(0))
        } else {
            0
        };
        assert!(
            self.dual_var[..self.n].iter().min().unwrap_or(&0) + dual_offset >= 0
                && *self.dual_var[self.n..].iter().min().unwrap_or(&0) >= 0
        );
        for k in 0..self.edges.len() {
            let (i, j, wt) = self.edges[k];
            let mut slack = self.dual_var[i] + self.dual_var[j] - 2 * wt;
            let chain = |mut x: usize| {
                let mut bs = vec![x];
                while self.blossom_parent[x] != NONE {
                    x = self.blossom_parent[x];
                    bs.push(x);
                }
                bs.reverse();
                bs
            };
            let bi = chain(i);
            let bj = chain(j);
            for (x, y) in bi.iter().zip(bj.iter()) {
                if x != y {
                    break;
                }
                slack += 2 * self.dual_var[*x];
            }
            assert!(slack >= 0);
            if self.mate[i] / 2 == k || self.mate[j] / 2 == k {
                assert!(self.mate[i] / 2 == k && self.mate[j] / 2 == k && slack == 0);
            }
        }
        for v in 0..self.n {
            assert!(self.mate[v] != NONE || self.dual_var[v] + dual_offset == 0);
        }
        for b in self.n..2 * self.n {
            if self.blossom_base[b] != NONE && self.dual_var[b] > 0 {
                assert!(self.blossom_endps[b].len() % 2 == 1);
                for (i, &p) in self.blossom_endps[b].iter().enumerate() {
                    if i % 2 == 1 {
                        assert_eq!(self.mate[self.endpoint[p]], p ^ 1);
                        assert_eq!(self.mate[self.endpoint[p ^ 1]], p);
                    }
                }
            }
        }
    }

    fn solve(mut self) -> Vec<usize> {
        if self.edges.is_empty() {
            return vec![NONE; self.n];
        }
        for _stage in 0..self.n {
            // A stage hunts for one augmenting path, pumping dual slack when
            // the search stalls; it ends when a path is found or provably
            // none exists.
            self.label = vec![LABEL_FREE; 2 * self.n];
            self.best_edge = vec![NONE; 2 * self.n];
            for b in self.n..2 * self.n {
                self.blossom_best_edges[b] = None;
            }
            self.allow_edge = vec![false; self.edges.len()];
            self.queue.clear();
            for v in 0..self.n {
                if self.mate[v] == NONE && self.label[self.in_blossom[v]] == LABEL_FREE {
                    self.assign_label(v, LABEL_S, NONE);
                }
            }
            let mut augmented = false;
            loop {
                'scan: while let Some(v) = self.queue.pop() {
                    debug_assert_eq!(self.label[self.in_blossom[v]], LABEL_S);
                    for idx in 0..self.neighb_end[v].len() {
                        let p = self.neighb_end[v][idx];
                        let k = p / 2;
                        let w = self.endpoint[p];
                        if self.in_blossom[v] == self.in_blossom[w] {
                            continue;
                        }
                        let mut k_slack = 0;
                        if !self.allow_edge[k] {
                            k_slack = self.slack(k);
                            if k_slack <= 0 {
                                self.allow_edge[k] = true;
                            }
                        }
                        if self.allow_edge[k] {
                            if self.label[self.in_blossom[w]] == LABEL_FREE {
                                self.assign_label(w, LABEL_T, p ^ 1);
                            } else if self.label[self.in_blossom[w]] == LABEL_S {
                                let base = self.scan_blossom(v, w);
                                if base != NONE {
                                    self.add_blossom(base, k);
                                } else {
                                    self.augment_matching(k);
                                    augmented = true;
                                    break 'scan;
                                }
                            } else if self.label[w] == LABEL_FREE {
                                debug_assert_eq!(self.label[self.in_blossom[w]], LABEL_T);
                                self.label[w] = LABEL_T;
                                self.label_end[w] = p ^ 1;
                            }
                        } else if self.label[self.in_blossom[w]] == LABEL_S {
                            let b = self.in_blossom[v];
                            if self.best_edge[b] == NONE
                                || k_slack < self.slack(self.best_edge[b])
                            {
                                self.best_edge[b] = k;
                            }
                        } else if self.label[w] == LABEL_FREE
                            && (self.best_edge[w] == NONE
                                || k_slack < self.slack(self.best_edge[w]))
                        {
                            self.best_edge[w] = k;
                        }
                    }
                }
                if augmented {
                    break;
                }

                // No augmenting path at zero slack: compute the cheapest dual
                // change that exposes new structure.
                let mut delta_type = -1;
                let mut delta = 0i64;
                let mut delta_edge = NONE;
                let mut delta_blossom = NONE;
                if !self.max_cardinality {
                    delta_type = 1;
                    delta = self.dual_var[..self.n].iter().copied().min().unwrap();
                }
                for v in 0..self.n {
                    if self.label[self.in_blossom[v]] == LABEL_FREE && self.best_edge[v] != NONE
                    {
                        let d = self.slack(self.best_edge[v]);
                        if delta_type == -1 || d < delta {
                            delta = d;
                            delta_type = 2;
                            delta_edge = self.best_edge[v];
                        }
                    }
                }
                for b in 0..2 * self.n {
                    if self.blossom_parent[b] == NONE
                        && self.label[b] == LABEL_S
                        && self.best_edge[b] != NONE
                    {
                        let d = self.slack(self.best_edge[b]) / 2;
                        if delta_type == -1 || d < delta {
                            delta = d;
                            delta_type = 3;
                            delta_edge = self.best_edge[b];
                        }
                    }
                }
                for b in self.n..2 * self.n {
                    if self.blossom_base[b] != NONE
                        && self.blossom_parent[b] == NONE
                        && self.label[b] == LABEL_T
                        && (delta_type == -1 || self.dual_var[b] < delta)
                    {
                        delta = self.dual_var[b];
                        delta_type = 4;
                        delta_blossom = b;
                    }
                }
                if delta_type == -1 {
                    // Only possible with max_cardinality: no structure left,
                    // make duals verifiable and stop.
                    debug_assert!(self.max_cardinality);
                    delta_type = 1;
                    delta = 0.max(self.dual_var[..self.n].iter().copied().min().unwrap());
                }

                for v in 0..self.n {
                    match self.label[self.in_blossom[v]] {
                        LABEL_FREE => {}
                        LABEL_S => self.dual_var[v] -= delta,
                        LABEL_T => self.dual_var[v] += delta,
                        _ => unreachable!(),
                    }
                }
                for b in self.n..2 * self.n {
                    if self.blossom_base[b] != NONE && self.blossom_parent[b] == NONE {
                        match self.label[b] {
                            LABEL_FREE => {}
                            LABEL_S => self.dual_var[b] += delta,
                            LABEL_T => self.dual_var[b] -= delta,
                            _ => unreachable!(),
                        }
                    }
                }

                match delta_type {
                    1 => break,
                    2 => {
                        self.allow_edge[delta_edge] = true;
                        let (mut i, j, _) = self.edges[delta_edge];
                        if self.label[self.in_blossom[i]] == LABEL_FREE {
                            i = j;
                        }
                        debug_assert_eq!(self.label[self.in_blossom[i]], LABEL_S);
                        self.queue.push(i);
                    }
                    3 => {
                        self.allow_edge[delta_edge] = true;
                        let (i, _, _) = self.edges[delta_edge];
                        debug_assert_eq!(self.label[self.in_blossom[i]], LABEL_S);
                        self.queue.push(i);
                    }
                    4 => self.expand_blossom(delta_blossom, false),
                    _ => unreachable!(),
                }
            }
            if !augmented {
                break;
            }
            for b in self.n..2 * self.n {
                if self.blossom_parent[b] == NONE
                    && self.blossom_base[b] != NONE
                    && self.label[b] == LABEL_S
                    && self.dual_var[b] == 0
                {
                    self.expand_blossom(b, true);
                }
            }
        }
        #[cfg(debug_assertions)]
        self.verify_optimum();

        let mut mate = self.mate;
        for v in 0..self.n {
            if mate[v] != NONE {
                mate[v] = self.endpoint[mate[v]];
            }
        }
        for v in 0..self.n {
            debug_assert!(mate[v] == NONE || mate[mate[v]] == v);
        }
        mate
    }
}

/// Maximum-weight matching over `n` vertices. Edges are `(i, j, weight)`
/// with `i != j` and at most one edge per vertex pair. Returns `mate` with
/// `mate[v]` the partner of `v` or [`NONE`].
pub fn max_weight_matching(
    n: usize,
    edges: &[(usize, usize, i64)],
    max_cardinality: bool,
) -> Vec<usize> {
    Blossom::new(n, edges.to_vec(), max_cardinality).solve()
}
