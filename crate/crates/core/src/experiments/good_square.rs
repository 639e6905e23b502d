//! Good squares: a centre cell ringed by twelve occupied satellite cells at
//! Chebyshev radius `3g`, inside an otherwise empty neighbourhood. Adding a
//! node to the centre cell changes the MST by exactly one edge.

use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::geometry::{build_tiling, dist, Point, Rect, Tiling};
use crate::mst::{key_cmp, mst_prim_dense};
use crate::sampling::{draw_uniform_where, rng_from_seed, uniform_in};
use crate::weights::{pow_alpha, WeightSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    Uniform,
    Center,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GoodSquareParams {
    pub g: usize,
    pub n: usize,
    pub a_target: f64,
    pub placement: Placement,
}

impl GoodSquareParams {
    pub fn new(g: usize, n: usize) -> Self {
        Self {
            g,
            n,
            a_target: 1.0,
            placement: Placement::Uniform,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoodSquareConfig {
    pub tiling: Tiling,
    pub g: usize,
    /// (column, row) counted from the bottom-left corner.
    pub center_cell: (usize, usize),
    pub satellite_cells: Vec<(usize, usize)>,
    /// Satellites occupy indices `0..12`, background nodes follow.
    pub points: Vec<Point>,
    /// The added node; it takes index `points.len()`.
    pub xj: Point,
    /// Side of the emptied square `[0, L]²` around the centre.
    pub moat: f64,
}

/// Satellite offsets (in cells) in angular order around the centre.
fn satellite_offsets(g: i64) -> Vec<(i64, i64)> {
    let r = 3 * g;
    vec![
        (r, -g),
        (r, g),
        (r, r),
        (g, r),
        (-g, r),
        (-r, r),
        (-r, g),
        (-r, -g),
        (-r, -r),
        (-g, -r),
        (g, -r),
        (r, -r),
    ]
}

fn cell_rect(t: &Tiling, c: (usize, usize)) -> Rect {
    let h = t.cell_side();
    Rect::square(c.0 as f64 * h, c.1 as f64 * h, h)
}

/// Places the centre at cell `(3g, 3g)` so the satellite ring touches the grid
/// edge, and empties the Chebyshev `15g` neighbourhood (clipped to the square).
pub fn build_good_square(
    params: &GoodSquareParams,
    rng: &mut impl Rng,
) -> Result<GoodSquareConfig, ExperimentError> {
    let g = params.g;
    if g < 5 {
        return Err(ExperimentError::InvalidConfig(format!("g must be at least 5, got {g}")));
    }
    if params.n < 12 {
        return Err(ExperimentError::InvalidConfig(format!("n must be at least 12, got {}", params.n)));
    }
    let tiling = build_tiling(params.n, params.a_target)?;
    let s = tiling.s;
    if s < 6 * g + 1 {
        return Err(ExperimentError::GeometryInfeasible(format!(
            "the radius-{} ring needs {} cells per side, grid has {s}",
            3 * g,
            6 * g + 1
        )));
    }
    let moat_cells = (18 * g + 1).min(s);
    let background = params.n - 12;
    if moat_cells == s && background > 0 {
        return Err(ExperimentError::GeometryInfeasible(format!(
            "the empty neighbourhood covers the whole grid; no room for {background} background nodes"
        )));
    }
    let h = tiling.cell_side();
    let c = 3 * g as i64;
    let center_cell = (3 * g, 3 * g);
    let satellite_cells: Vec<(usize, usize)> = satellite_offsets(g as i64)
        .into_iter()
        .map(|(dx, dy)| ((c + dx) as usize, (c + dy) as usize))
        .collect();
    let mut points: Vec<Point> = satellite_cells
        .iter()
        .map(|&sc| uniform_in(&cell_rect(&tiling, sc), rng))
        .collect();
    let moat = moat_cells as f64 * h;
    points.extend(draw_uniform_where(
        background,
        &Rect::new(0.0, 0.0, 1.0, 1.0),
        rng,
        |p| !(p.x <= moat && p.y <= moat),
    )?);
    let centre = cell_rect(&tiling, center_cell);
    let xj = match params.placement {
        Placement::Uniform => uniform_in(&centre, rng),
        Placement::Center => centre.center(),
    };
    Ok(GoodSquareConfig {
        tiling,
        g,
        center_cell,
        satellite_cells,
        points,
        xj,
        moat,
    })
}

impl GoodSquareConfig {
    /// Satellite-to-`X_j` distances in `[(3g−1), (5g−1)]·h` and consecutive
    /// satellites at most `(2g+5)·h` apart.
    pub fn distances_ok(&self) -> bool {
        let h = self.tiling.cell_side();
        let g = self.g as f64;
        let (lo, hi) = ((3.0 * g - 1.0) * h, (5.0 * g - 1.0) * h);
        let sats = &self.points[..12];
        let radial = sats.iter().all(|&p| {
            let d = dist(p, self.xj);
            d >= lo && d <= hi
        });
        let ring = (0..12).all(|k| dist(sats[k], sats[(k + 1) % 12]) <= (2.0 * g + 5.0) * h);
        radial && ring
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoodSquareReport {
    pub g: usize,
    pub n: usize,
    pub cell_side: f64,
    pub alphas: Vec<f64>,
    pub increments: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub added_edges: Vec<(usize, usize)>,
    pub removed_edges: Vec<(usize, usize)>,
    /// Nearest node to `X_j` under the edge key.
    pub v_min: usize,
    pub single_edge: bool,
    pub distances_ok: bool,
    pub ok: bool,
}

/// Builds a good square, computes `T_n` and `T_{n+1}` and checks the one-edge
/// identity together with the increment window for each α.
pub fn good_square_probe(
    params: &GoodSquareParams,
    alphas: &[f64],
    seed: u64,
) -> Result<GoodSquareReport, ExperimentError> {
    if alphas.is_empty() || alphas.iter().any(|a| !(*a > 0.0)) {
        return Err(ExperimentError::InvalidConfig("alphas must be positive and nonempty".into()));
    }
    let mut rng = rng_from_seed(seed);
    let cfg = build_good_square(params, &mut rng)?;
    let spec = WeightSpec::euclidean(1.0);
    let before = mst_prim_dense(&cfg.points, &spec)?;
    let mut all = cfg.points.clone();
    all.push(cfg.xj);
    let j = cfg.points.len();
    let after = mst_prim_dense(&all, &spec)?;

    let e0: BTreeSet<(usize, usize)> = before.edge_pairs().into_iter().collect();
    let e1: BTreeSet<(usize, usize)> = after.edge_pairs().into_iter().collect();
    let added: Vec<(usize, usize)> = e1.difference(&e0).copied().collect();
    let removed: Vec<(usize, usize)> = e0.difference(&e1).copied().collect();
    let v_min = (0..j)
        .min_by(|&a, &b| key_cmp(dist(all[a], cfg.xj), a, j, dist(all[b], cfg.xj), b, j))
        .expect("at least twelve nodes");
    let single_edge = removed.is_empty() && added == vec![(v_min, j)] && v_min < 12;

    let h = cfg.tiling.cell_side();
    let g = cfg.g as f64;
    let mut increments = Vec::with_capacity(alphas.len());
    let mut lower = Vec::with_capacity(alphas.len());
    let mut upper = Vec::with_capacity(alphas.len());
    let mut within = true;
    for &a in alphas {
        let inc = after.reweighted(a).total_weight - before.reweighted(a).total_weight;
        let lo = pow_alpha((3.0 * g - 1.0) * h, a);
        let hi = pow_alpha((5.0 * g - 1.0) * h, a);
        // Float round-off in two long sums; the window itself is exact.
        let slack = 1e-9 * hi;
        within &= inc >= lo - slack && inc <= hi + slack;
        increments.push(inc);
        lower.push(lo);
        upper.push(hi);
    }
    let distances_ok = cfg.distances_ok();
    Ok(GoodSquareReport {
        g: cfg.g,
        n: params.n,
        cell_side: h,
        alphas: alphas.to_vec(),
        increments,
        lower,
        upper,
        added_edges: added,
        removed_edges: removed,
        v_min,
        single_edge,
        distances_ok,
        ok: single_edge && within && distances_ok,
    })
}
