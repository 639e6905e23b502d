//! Exact minimum spanning trees on the implicit complete graph, reference
//! oracles and structural verifiers.
//!
//! Edges are ordered by the key `(h(e), i, j)` with `i < j`, compared
//! lexicographically. All algorithms here share that key, so the tree is
//! unique and identical across Prim, Kruskal and the brute-force oracle. The
//! key uses the base weight `h`, never `h^α`: the tree does not depend on α.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{dist, Point};
use crate::weights::{pow_alpha, EdgeWeight, WeightError, WeightSpec};
use crate::with_prepared;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MstError {
    #[error("points {i} and {j} coincide")]
    DuplicatePoints { i: usize, j: usize },
    #[error("point {0} has a non-finite coordinate")]
    NonFinite(usize),
    #[error("brute force supports at most {max} points, got {n}")]
    TooLarge { n: usize, max: usize },
    #[error("index {index} out of range for {n} points")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("invalid sector count {k}: {reason}")]
    InvalidK { k: usize, reason: String },
    #[error("weight spec lacks a required property: {0}")]
    SpecMissingProperty(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Weight(#[from] WeightError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub euclid_len: f64,
    pub base_weight: f64,
    pub power_weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MstResult {
    pub n: usize,
    pub alpha: f64,
    /// Sorted by `(i, j)`.
    pub edges: Vec<Edge>,
    /// `Σ h^α(e)`, summed in edge order.
    pub total_weight: f64,
    pub degrees: Vec<u32>,
}

impl MstResult {
    fn from_pairs(points: &[Point], mut pairs: Vec<(usize, usize, f64)>, alpha: f64) -> Self {
        let n = points.len();
        for e in &mut pairs {
            if e.0 > e.1 {
                std::mem::swap(&mut e.0, &mut e.1);
            }
        }
        pairs.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut degrees = vec![0u32; n];
        let edges: Vec<Edge> = pairs
            .into_iter()
            .map(|(i, j, w)| {
                degrees[i] += 1;
                degrees[j] += 1;
                Edge {
                    i,
                    j,
                    euclid_len: dist(points[i], points[j]),
                    base_weight: w,
                    power_weight: pow_alpha(w, alpha),
                }
            })
            .collect();
        let total_weight = edges.iter().map(|e| e.power_weight).sum();
        Self {
            n,
            alpha,
            edges,
            total_weight,
            degrees,
        }
    }

    /// Same tree, power weights recomputed for another exponent.
    pub fn reweighted(&self, alpha: f64) -> Self {
        let mut out = self.clone();
        out.alpha = alpha;
        for e in &mut out.edges {
            e.power_weight = pow_alpha(e.base_weight, alpha);
        }
        out.total_weight = out.edges.iter().map(|e| e.power_weight).sum();
        out
    }

    pub fn edge_pairs(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|e| (e.i, e.j)).collect()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|e| {
                if e.i == v {
                    Some(e.j)
                } else if e.j == v {
                    Some(e.i)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn to_json(&self, weight_kind: &str) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "alpha": self.alpha,
            "weight_kind": weight_kind,
            "total_weight": self.total_weight,
            "edges": self.edges.iter().map(|e| serde_json::json!([e.i, e.j, e.base_weight])).collect::<Vec<_>>(),
            "degrees": self.degrees,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,j,euclid_len,base_weight,power_weight\n");
        for e in &self.edges {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                e.i,
                e.j,
                crate::report::fmt17(e.euclid_len),
                crate::report::fmt17(e.base_weight),
                crate::report::fmt17(e.power_weight)
            ));
        }
        out
    }
}

/// Lexicographic comparison of edge keys `(w, i, j)` with `i < j` normalized.
#[inline]
pub fn key_cmp(w1: f64, a1: usize, b1: usize, w2: f64, a2: usize, b2: usize) -> Ordering {
    let k1 = (a1.min(b1), a1.max(b1));
    let k2 = (a2.min(b2), a2.max(b2));
    w1.total_cmp(&w2).then(k1.cmp(&k2))
}

#[inline]
fn key_less(w1: f64, a1: usize, b1: usize, w2: f64, a2: usize, b2: usize) -> bool {
    w1 < w2 || (w1 == w2 && (a1.min(b1), a1.max(b1)) < (a2.min(b2), a2.max(b2)))
}

pub fn check_points(points: &[Point]) -> Result<(), MstError> {
    if let Some(i) = points.iter().position(|p| !p.is_finite()) {
        return Err(MstError::NonFinite(i));
    }
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| {
        let (p, q) = (points[a], points[b]);
        p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y)).then(a.cmp(&b))
    });
    for w in idx.windows(2) {
        if points[w[0]] == points[w[1]] {
            return Err(MstError::DuplicatePoints {
                i: w[0].min(w[1]),
                j: w[0].max(w[1]),
            });
        }
    }
    Ok(())
}

/// Dense Prim on `n` vertices with weights `w(i, j)`: O(n²) time, O(n) memory.
pub fn prim_core(n: usize, w: impl Fn(usize, usize) -> f64) -> Vec<(usize, usize, f64)> {
    if n < 2 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(n - 1);
    let mut rem_v: Vec<u32> = (1..n as u32).collect();
    let mut rem_w: Vec<f64> = (1..n).map(|v| w(0, v)).collect();
    let mut rem_p: Vec<u32> = vec![0; n - 1];
    while !rem_v.is_empty() {
        let mut best = 0usize;
        for k in 1..rem_v.len() {
            let (a, b) = (rem_v[k] as usize, rem_p[k] as usize);
            let (c, d) = (rem_v[best] as usize, rem_p[best] as usize);
            if key_less(rem_w[k], a, b, rem_w[best], c, d) {
                best = k;
            }
        }
        let u = rem_v.swap_remove(best) as usize;
        let p = rem_p.swap_remove(best) as usize;
        let wu = rem_w.swap_remove(best);
        out.push((p.min(u), p.max(u), wu));
        for k in 0..rem_v.len() {
            let v = rem_v[k] as usize;
            let d = w(u, v);
            let bw = rem_w[k];
            if d < bw || (d == bw && key_less(d, u, v, bw, rem_p[k] as usize, v)) {
                rem_w[k] = d;
                rem_p[k] = u as u32;
            }
        }
    }
    out
}

fn prim_weighted<W: EdgeWeight>(w: &W, alpha: Option<f64>) -> Vec<(usize, usize, f64)> {
    match alpha {
        None => prim_core(w.len(), |i, j| w.w(i, j)),
        Some(a) => {
            // Ordered by h^α, but the reported weight is still h.
            let tree = prim_core(w.len(), |i, j| pow_alpha(w.w(i, j), a));
            tree.into_iter().map(|(i, j, _)| (i, j, w.w(i, j))).collect()
        }
    }
}

/// Exact MST by dense Prim without materializing edges.
pub fn mst_prim_dense(points: &[Point], spec: &WeightSpec) -> Result<MstResult, MstError> {
    check_points(points)?;
    let prep = spec.prepare(points);
    let pairs = with_prepared!(&prep, w => prim_weighted(w, None));
    Ok(MstResult::from_pairs(points, pairs, spec.alpha))
}

/// Union–find with path compression and union by rank.
#[derive(Debug, Clone)]
pub struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSet {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    /// Returns false if `a` and `b` were already connected.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            Ordering::Less => self.parent[ra] = rb,
            Ordering::Greater => self.parent[rb] = ra,
            Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

fn kruskal_weighted<W: EdgeWeight>(w: &W) -> Vec<(usize, usize, f64)> {
    let n = w.len();
    let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            edges.push((w.w(i, j), i, j));
        }
    }
    edges.sort_unstable_by(|a, b| key_cmp(a.0, a.1, a.2, b.0, b.1, b.2));
    let mut ds = DisjointSet::new(n);
    let mut out = Vec::with_capacity(n.saturating_sub(1));
    for (wt, i, j) in edges {
        if ds.union(i, j) {
            out.push((i, j, wt));
            if out.len() + 1 == n {
                break;
            }
        }
    }
    out
}

/// Exact MST by Kruskal over all `n(n−1)/2` edges.
pub fn mst_kruskal(points: &[Point], spec: &WeightSpec) -> Result<MstResult, MstError> {
    check_points(points)?;
    let prep = spec.prepare(points);
    let pairs = with_prepared!(&prep, w => kruskal_weighted(w));
    Ok(MstResult::from_pairs(points, pairs, spec.alpha))
}

/// Kruskal for small inputs, dense Prim above 500 points.
pub fn mst(points: &[Point], spec: &WeightSpec) -> Result<MstResult, MstError> {
    if points.len() > 500 {
        mst_prim_dense(points, spec)
    } else {
        mst_kruskal(points, spec)
    }
}

pub const BRUTE_FORCE_MAX: usize = 8;

fn prufer_decode(seq: &[usize], n: usize, out: &mut Vec<(usize, usize)>) {
    out.clear();
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    for &s in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf always exists");
        out.push((leaf.min(s), leaf.max(s)));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    out.push((rest[0], rest[1]));
}

/// Minimum-weight spanning tree by enumerating all `n^{n−2}` labelled trees.
/// Totals within a relative 1e−12 are treated as tied and resolved by the
/// sorted key sequence, which reproduces the shared tie rule.
pub fn brute_force_mst(points: &[Point], spec: &WeightSpec) -> Result<MstResult, MstError> {
    let n = points.len();
    if n > BRUTE_FORCE_MAX {
        return Err(MstError::TooLarge {
            n,
            max: BRUTE_FORCE_MAX,
        });
    }
    check_points(points)?;
    if n < 2 {
        return Ok(MstResult::from_pairs(points, Vec::new(), spec.alpha));
    }
    let mut wm = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let w = spec.weight(points[i], points[j])?;
            wm[i][j] = w;
            wm[j][i] = w;
        }
    }
    if n == 2 {
        return Ok(MstResult::from_pairs(points, vec![(0, 1, wm[0][1])], spec.alpha));
    }
    let key_seq = |edges: &[(usize, usize)]| {
        let mut ks: Vec<(f64, usize, usize)> = edges.iter().map(|&(i, j)| (wm[i][j], i, j)).collect();
        ks.sort_by(|a, b| key_cmp(a.0, a.1, a.2, b.0, b.1, b.2));
        ks
    };
    let keys_less = |a: &[(f64, usize, usize)], b: &[(f64, usize, usize)]| {
        for (x, y) in a.iter().zip(b) {
            match key_cmp(x.0, x.1, x.2, y.0, y.1, y.2) {
                Ordering::Less => return true,
                Ordering::Greater => return false,
                Ordering::Equal => {}
            }
        }
        false
    };
    let mut seq = vec![0usize; n - 2];
    let mut edges = Vec::with_capacity(n - 1);
    let mut best: Option<(f64, Vec<(f64, usize, usize)>)> = None;
    loop {
        prufer_decode(&seq, n, &mut edges);
        edges.sort();
        let total: f64 = edges.iter().map(|&(i, j)| pow_alpha(wm[i][j], spec.alpha)).sum();
        let better = match &best {
            None => true,
            Some((bt, bk)) => {
                let tol = 1e-12 * bt.abs().max(total.abs());
                if total < bt - tol {
                    true
                } else if total <= bt + tol {
                    keys_less(&key_seq(&edges), bk)
                } else {
                    false
                }
            }
        };
        if better {
            best = Some((total, key_seq(&edges)));
        }
        // Odometer increment over {0..n−1}^{n−2}.
        let mut pos = 0;
        loop {
            if pos == seq.len() {
                let (_, ks) = best.expect("at least one tree");
                let pairs = ks.into_iter().map(|(w, i, j)| (i, j, w)).collect();
                return Ok(MstResult::from_pairs(points, pairs, spec.alpha));
            }
            seq[pos] += 1;
            if seq[pos] < n {
                break;
            }
            seq[pos] = 0;
            pos += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PathVerdict {
    Pass,
    /// `path_edge` lies on the tree path between the endpoints of the
    /// non-tree edge and is not strictly lighter than it.
    Fail {
        non_tree_edge: (usize, usize),
        path_edge: (usize, usize),
    },
    NotSpanning,
}

impl PathVerdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, PathVerdict::Pass)
    }
}

fn tree_adjacency(n: usize, pairs: &[(usize, usize)]) -> Option<Vec<Vec<usize>>> {
    if n == 0 {
        return Some(Vec::new());
    }
    if pairs.len() + 1 != n {
        return None;
    }
    let mut adj = vec![Vec::new(); n];
    let mut ds = DisjointSet::new(n);
    for &(i, j) in pairs {
        if i >= n || j >= n || i == j || !ds.union(i, j) {
            return None;
        }
        adj[i].push(j);
        adj[j].push(i);
    }
    Some(adj)
}

/// Checks that every non-tree edge is heavier (in key order) than every edge
/// on the tree path between its endpoints.
pub fn verify_mst_path_criterion(
    points: &[Point],
    spec: &WeightSpec,
    result: &MstResult,
) -> Result<PathVerdict, MstError> {
    check_points(points)?;
    let n = points.len();
    let pairs = result.edge_pairs();
    let Some(adj) = tree_adjacency(n, &pairs) else {
        return Ok(PathVerdict::NotSpanning);
    };
    let prep = spec.prepare(points);
    Ok(with_prepared!(&prep, w => path_criterion(w, &adj)))
}

fn path_criterion<W: EdgeWeight>(w: &W, adj: &[Vec<usize>]) -> PathVerdict {
    let n = adj.len();
    // Heaviest edge (by key) on the path from the source, per target.
    let mut heavy: Vec<(f64, usize, usize)> = vec![(f64::NEG_INFINITY, 0, 0); n];
    let mut seen = vec![usize::MAX; n];
    let mut stack = Vec::with_capacity(n);
    for s in 0..n {
        seen[s] = s;
        stack.push(s);
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if seen[v] == s {
                    continue;
                }
                seen[v] = s;
                let e = (w.w(u, v), u.min(v), u.max(v));
                let h = heavy[u];
                heavy[v] = if u == s || key_cmp(e.0, e.1, e.2, h.0, h.1, h.2) == Ordering::Greater {
                    e
                } else {
                    h
                };
                stack.push(v);
            }
        }
        for t in s + 1..n {
            if adj[s].contains(&t) {
                continue;
            }
            let h = heavy[t];
            if key_cmp(h.0, h.1, h.2, w.w(s, t), s, t) != Ordering::Less {
                return PathVerdict::Fail {
                    non_tree_edge: (s, t),
                    path_edge: (h.1, h.2),
                };
            }
        }
    }
    PathVerdict::Pass
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CutVerdict {
    Pass,
    Fail {
        tree_edge: (usize, usize),
        lighter_edge: (usize, usize),
    },
    NotSpanning,
}

/// Each tree edge must be the minimum-key edge across the cut it defines. O(n³).
pub fn verify_cut_property(
    points: &[Point],
    spec: &WeightSpec,
    result: &MstResult,
) -> Result<CutVerdict, MstError> {
    check_points(points)?;
    let n = points.len();
    let pairs = result.edge_pairs();
    if tree_adjacency(n, &pairs).is_none() {
        return Ok(CutVerdict::NotSpanning);
    }
    let prep = spec.prepare(points);
    Ok(with_prepared!(&prep, w => {
        let mut verdict = CutVerdict::Pass;
        'edges: for (k, &(a, b)) in pairs.iter().enumerate() {
            let mut ds = DisjointSet::new(n);
            for (m, &(i, j)) in pairs.iter().enumerate() {
                if m != k {
                    ds.union(i, j);
                }
            }
            let side: Vec<bool> = {
                let ra = ds.find(a);
                (0..n).map(|v| ds.find(v) == ra).collect()
            };
            let wab = w.w(a, b);
            for i in 0..n {
                for j in i + 1..n {
                    if side[i] != side[j]
                        && (i, j) != (a, b)
                        && key_cmp(w.w(i, j), i, j, wab, a, b) == Ordering::Less
                    {
                        verdict = CutVerdict::Fail {
                            tree_edge: (a, b),
                            lighter_edge: (i, j),
                        };
                        break 'edges;
                    }
                }
            }
        }
        verdict
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum InvarianceVerdict {
    Pass,
    Mismatch { alpha: f64 },
}

/// Recomputes the tree ordered by `h^α` for each α and compares edge sets with
/// the tree ordered by `h`.
pub fn alpha_invariance_check(
    points: &[Point],
    spec: &WeightSpec,
    alphas: &[f64],
) -> Result<InvarianceVerdict, MstError> {
    if let Some(a) = alphas.iter().find(|a| !(**a > 0.0 && a.is_finite())) {
        return Err(MstError::InvalidInput(format!("alpha must be positive, got {a}")));
    }
    check_points(points)?;
    let prep = spec.prepare(points);
    with_prepared!(&prep, w => {
        let mut base: Vec<(usize, usize)> =
            prim_weighted(w, None).into_iter().map(|(i, j, _)| (i, j)).collect();
        base.sort();
        for &a in alphas {
            let mut other: Vec<(usize, usize)> =
                prim_weighted(w, Some(a)).into_iter().map(|(i, j, _)| (i, j)).collect();
            other.sort();
            if other != base {
                return Ok(InvarianceVerdict::Mismatch { alpha: a });
            }
        }
        Ok(InvarianceVerdict::Pass)
    })
}

pub fn max_degree(result: &MstResult) -> u32 {
    result.degrees.iter().copied().max().unwrap_or(0)
}

pub fn degree_histogram(result: &MstResult) -> BTreeMap<u32, usize> {
    let mut h = BTreeMap::new();
    for &d in &result.degrees {
        *h.entry(d).or_insert(0) += 1;
    }
    h
}

/// Largest `x ∈ [0, 1]` with `g(x) = (1 + x² − 2x·cos(2π/K))^{1/2} ≥ c1/c2`.
///
/// `g` starts at 1, falls until `x = cos(2π/K)` and then rises to `g(1) < c1/c2`,
/// so the answer is the root on the falling branch. When `c1/c2 ≥ 1` no
/// positive `x` qualifies and the value is 0: two tree edges can never share a
/// sector.
pub fn sector_r0(k: usize, ratio: f64) -> Result<f64, MstError> {
    if k < 1 {
        return Err(MstError::InvalidK {
            k,
            reason: "need at least one sector".into(),
        });
    }
    let theta = 2.0 * std::f64::consts::PI / k as f64;
    let c = theta.cos();
    let chord = (2.0 - 2.0 * c).max(0.0).sqrt();
    if !(chord < ratio) {
        return Err(MstError::InvalidK {
            k,
            reason: format!("(2 − 2cos(2π/K))^(1/2) = {chord} is not below c1/c2 = {ratio}"),
        });
    }
    if ratio >= 1.0 {
        return Ok(0.0);
    }
    let g = |x: f64| (1.0 + x * x - 2.0 * x * c).sqrt();
    let (mut lo, mut hi) = (0.0, c.min(1.0));
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if g(mid) >= ratio {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorViolation {
    pub vertex: usize,
    pub sector: usize,
    pub longer: f64,
    pub shorter: f64,
    pub ratio: f64,
}

/// Within each of `K` equal angular sectors around every vertex, consecutive
/// incident tree-edge lengths (sorted descending) must shrink by at least `r0`.
pub fn sector_ratio_audit(
    points: &[Point],
    spec: &WeightSpec,
    result: &MstResult,
    k: usize,
) -> Result<Vec<SectorViolation>, MstError> {
    let r0 = sector_r0(k, spec.c1 / spec.c2)?;
    let width = 2.0 * std::f64::consts::PI / k as f64;
    let mut by_sector: Vec<Vec<Vec<f64>>> = vec![vec![Vec::new(); k]; points.len()];
    for e in &result.edges {
        for (a, b) in [(e.i, e.j), (e.j, e.i)] {
            let (p, q) = (points[a], points[b]);
            let ang = (q.y - p.y).atan2(q.x - p.x).rem_euclid(2.0 * std::f64::consts::PI);
            let s = ((ang / width) as usize).min(k - 1);
            by_sector[a][s].push(e.euclid_len);
        }
    }
    let mut out = Vec::new();
    for (v, sectors) in by_sector.iter_mut().enumerate() {
        for (s, lens) in sectors.iter_mut().enumerate() {
            lens.sort_by(|a, b| b.total_cmp(a));
            for w in lens.windows(2) {
                let ratio = w[1] / w[0];
                if ratio > r0 + 1e-9 {
                    out.push(SectorViolation {
                        vertex: v,
                        sector: s,
                        longer: w[0],
                        shorter: w[1],
                        ratio,
                    });
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OneNodeDiff {
    /// `|MST_{n+1} − MST_n(j)|`.
    pub delta: f64,
    /// `c2^α · d^α(X_j, nearest other node)`.
    pub f1: f64,
    /// `(2c2)^α · Σ_{v ~ X_j} d^α(X_j, v)` over tree neighbours in `T_{n+1}`.
    pub f2: f64,
    pub mst_with: f64,
    pub mst_without: f64,
}

impl OneNodeDiff {
    pub fn holds(&self) -> bool {
        self.delta <= self.f1 + self.f2
    }
}

/// Effect on the MST weight of removing node `j` from `n + 1` points.
pub fn one_node_difference(
    points: &[Point],
    j: usize,
    spec: &WeightSpec,
) -> Result<OneNodeDiff, MstError> {
    let n1 = points.len();
    if n1 < 3 {
        return Err(MstError::InvalidInput(format!("need at least 3 points, got {n1}")));
    }
    if j >= n1 {
        return Err(MstError::IndexOutOfRange { index: j, n: n1 });
    }
    let with = mst(points, spec)?;
    let rest: Vec<Point> = points
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != j)
        .map(|(_, p)| *p)
        .collect();
    let without = mst(&rest, spec)?;
    let xj = points[j];
    let dmin = rest.iter().map(|&p| dist(xj, p)).fold(f64::INFINITY, f64::min);
    let a = spec.alpha;
    let f1 = pow_alpha(spec.c2 * dmin, a);
    let f2 = pow_alpha(2.0 * spec.c2, a)
        * with
            .neighbors(j)
            .into_iter()
            .map(|v| pow_alpha(dist(xj, points[v]), a))
            .sum::<f64>();
    Ok(OneNodeDiff {
        delta: (with.total_weight - without.total_weight).abs(),
        f1,
        f2,
        mst_with: with.total_weight,
        mst_without: without.total_weight,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingOutcome {
    pub a: f64,
    pub original: f64,
    pub scaled: f64,
    pub expected: f64,
    pub same_edges: bool,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranslationOutcome {
    pub shift: Point,
    pub original: f64,
    pub translated: f64,
    pub bound: f64,
    pub ok: bool,
}

/// `MST(a·X) = a^α·MST(X)` with the same edge set, relative tolerance 1e−10.
pub fn scaling_check(points: &[Point], spec: &WeightSpec, a: f64) -> Result<ScalingOutcome, MstError> {
    if !spec.homogeneous {
        return Err(MstError::SpecMissingProperty(format!(
            "{} weights are not homogeneous",
            spec.kind_name()
        )));
    }
    if !(a > 0.0 && a.is_finite()) {
        return Err(MstError::InvalidInput(format!("scale must be positive, got {a}")));
    }
    let base = mst(points, spec)?;
    let scaled_pts: Vec<Point> = points.iter().map(|p| p.scaled(a)).collect();
    let scaled = mst(&scaled_pts, spec)?;
    let expected = pow_alpha(a, spec.alpha) * base.total_weight;
    let same_edges = base.edge_pairs() == scaled.edge_pairs();
    let ok = same_edges && (scaled.total_weight - expected).abs() <= 1e-10 * expected.abs();
    Ok(ScalingOutcome {
        a,
        original: base.total_weight,
        scaled: scaled.total_weight,
        expected,
        same_edges,
        ok,
    })
}

/// `MST(X + b) ≤ h0^α·MST(X) + 1e−10`.
pub fn translation_check(
    points: &[Point],
    spec: &WeightSpec,
    b: Point,
) -> Result<TranslationOutcome, MstError> {
    let Some(h0) = spec.h0 else {
        return Err(MstError::SpecMissingProperty(format!(
            "{} weights carry no translation constant",
            spec.kind_name()
        )));
    };
    let base = mst(points, spec)?;
    let moved: Vec<Point> = points.iter().map(|p| p.translated(b)).collect();
    let translated = mst(&moved, spec)?;
    let bound = pow_alpha(h0, spec.alpha) * base.total_weight;
    Ok(TranslationOutcome {
        shift: b,
        original: base.total_weight,
        translated: translated.total_weight,
        bound,
        ok: translated.total_weight <= bound + 1e-10,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleTranslateReport {
    pub scaling: Option<ScalingOutcome>,
    pub translation: Option<TranslationOutcome>,
}

impl ScaleTranslateReport {
    pub fn ok(&self) -> bool {
        self.scaling.as_ref().is_none_or(|s| s.ok) && self.translation.as_ref().is_none_or(|t| t.ok)
    }
}

pub fn scale_translate_check(
    points: &[Point],
    spec: &WeightSpec,
    a: Option<f64>,
    b: Option<Point>,
) -> Result<ScaleTranslateReport, MstError> {
    Ok(ScaleTranslateReport {
        scaling: a.map(|a| scaling_check(points, spec, a)).transpose()?,
        translation: b.map(|b| translation_check(points, spec, b)).transpose()?,
    })
}
