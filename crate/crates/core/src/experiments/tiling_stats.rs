//! Grid statistics: the isolated-cell count `G_α` (lower bound), the snake
//! gap sum `S_α` and the explicit spanning tree `T_uni` (upper bound).

use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::geometry::{CellIndex, Point, Tiling};
use crate::mst;
use crate::weights::{pow_alpha, WeightSpec};

fn cell_members(points: &[Point], t: &Tiling) -> Result<Vec<Vec<usize>>, ExperimentError> {
    let mut cells = vec![Vec::new(); t.num_cells() + 1];
    for (i, &p) in points.iter().enumerate() {
        cells[t.cell_of(p)?.0].push(i);
    }
    Ok(cells)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundStat {
    pub g_alpha: usize,
    pub bound: f64,
    pub mst_weight: f64,
    pub holds: bool,
}

/// Number of occupied cells whose corner-sharing neighbours are all empty.
/// A configuration living in a single cell has no edge leaving any cell, so it
/// counts zero.
pub fn isolated_cells(points: &[Point], t: &Tiling) -> Result<usize, ExperimentError> {
    let cells = cell_members(points, t)?;
    let occupied = cells.iter().filter(|c| !c.is_empty()).count();
    if occupied < 2 {
        return Ok(0);
    }
    Ok((1..=t.num_cells())
        .filter(|&k| {
            !cells[k].is_empty()
                && t.corner_neighbors(CellIndex(k))
                    .iter()
                    .all(|c| cells[c.0].is_empty())
        })
        .count())
}

/// `G_α` with bound `½·(c1·A_n/√n)^α·G_α`, checked against a known MST weight.
pub fn lower_bound_stat_with(
    points: &[Point],
    t: &Tiling,
    spec: &WeightSpec,
    mst_weight: f64,
) -> Result<LowerBoundStat, ExperimentError> {
    if points.len() == 1 {
        return Err(ExperimentError::InsufficientPoints);
    }
    let g_alpha = isolated_cells(points, t)?;
    let bound = 0.5 * pow_alpha(spec.c1 * t.cell_side(), spec.alpha) * g_alpha as f64;
    Ok(LowerBoundStat {
        g_alpha,
        bound,
        mst_weight,
        holds: mst_weight >= bound - 1e-12,
    })
}

pub fn lower_bound_stat(
    points: &[Point],
    t: &Tiling,
    spec: &WeightSpec,
) -> Result<LowerBoundStat, ExperimentError> {
    let w = mst::mst(points, spec)?.total_weight;
    lower_bound_stat_with(points, t, spec, w)
}

/// Occupied cells in snake order and the gaps between them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapStat {
    pub cells: usize,
    /// `i_1 < … < i_Q`.
    pub occupied: Vec<usize>,
    /// `T_1 = i_1 − 1`, `T_{j+1} = i_{j+1} − i_j`, `T_{Q+1} = s² − i_Q`; an
    /// empty configuration has the single gap `s² − 1`.
    pub gaps: Vec<usize>,
}

impl GapStat {
    pub fn from_occupied(cells: usize, occupied: Vec<usize>) -> Self {
        let gaps = if occupied.is_empty() {
            vec![cells - 1]
        } else {
            let mut g = Vec::with_capacity(occupied.len() + 1);
            g.push(occupied[0] - 1);
            g.extend(occupied.windows(2).map(|w| w[1] - w[0]));
            g.push(cells - occupied[occupied.len() - 1]);
            g
        };
        Self {
            cells,
            occupied,
            gaps,
        }
    }

    /// `S_α = Σ T_j^α`.
    pub fn s_alpha(&self, alpha: f64) -> f64 {
        self.gaps.iter().map(|&t| pow_alpha(t as f64, alpha)).sum()
    }
}

pub fn gap_stat(points: &[Point], t: &Tiling) -> Result<GapStat, ExperimentError> {
    let cells = cell_members(points, t)?;
    let occupied = (1..cells.len()).filter(|&k| !cells[k].is_empty()).collect();
    Ok(GapStat::from_occupied(t.num_cells(), occupied))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityVerdict {
    pub before: f64,
    pub after: f64,
    /// The new point fell in an already occupied cell.
    pub same_cell: bool,
    pub ok: bool,
}

/// Adding a node raises `S_α` for `α ≤ 1` and lowers it for `α > 1`
/// (unchanged when it lands in an occupied cell).
pub fn gap_stat_monotonicity(
    points: &[Point],
    t: &Tiling,
    alpha: f64,
    extra: Point,
) -> Result<MonotonicityVerdict, ExperimentError> {
    if !(alpha > 0.0) {
        return Err(ExperimentError::InvalidConfig(format!("alpha must be positive, got {alpha}")));
    }
    let g0 = gap_stat(points, t)?;
    let k = t.cell_of(extra)?.0;
    let same_cell = g0.occupied.binary_search(&k).is_ok();
    let mut occ = g0.occupied.clone();
    if !same_cell {
        let pos = occ.partition_point(|&c| c < k);
        occ.insert(pos, k);
    }
    let g1 = GapStat::from_occupied(g0.cells, occ);
    let (before, after) = (g0.s_alpha(alpha), g1.s_alpha(alpha));
    let tol = 1e-12 * before.abs().max(after.abs()).max(1.0);
    let ok = if same_cell {
        before == after
    } else if alpha <= 1.0 {
        after >= before - tol
    } else {
        after <= before + tol
    };
    Ok(MonotonicityVerdict {
        before,
        after,
        same_cell,
        ok,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TiledUpperBound {
    pub w_uni: f64,
    pub rhs: f64,
    pub mst_weight: f64,
    pub holds: bool,
    /// `T_uni` as index pairs.
    pub edges: Vec<(usize, usize)>,
    /// `(gap T, Euclidean length)` for each edge joining consecutive occupied cells.
    pub links: Vec<(usize, f64)>,
}

/// `T_uni`: a star on the lowest-index node of every occupied cell, plus the
/// edge between lowest-index nodes of consecutive occupied cells.
pub fn tiled_upper_bound_with(
    points: &[Point],
    t: &Tiling,
    spec: &WeightSpec,
    mst_weight: f64,
) -> Result<TiledUpperBound, ExperimentError> {
    if points.is_empty() {
        return Err(ExperimentError::EmptyPointSet);
    }
    let cells = cell_members(points, t)?;
    let mut edges = Vec::with_capacity(points.len() - 1);
    let mut links = Vec::new();
    let mut prev: Option<(usize, usize)> = None;
    for (k, members) in cells.iter().enumerate().skip(1) {
        let Some(&root) = members.first() else { continue };
        edges.extend(members[1..].iter().map(|&v| (root, v)));
        if let Some((pk, proot)) = prev {
            edges.push((proot.min(root), proot.max(root)));
            links.push((k - pk, crate::geometry::dist(points[proot], points[root])));
        }
        prev = Some((k, root));
    }
    let mut w_uni = 0.0;
    for &(i, j) in &edges {
        w_uni += spec.power_weight(points[i], points[j])?;
    }
    let gaps = gap_stat(points, t)?;
    let rhs = pow_alpha(2.0 * spec.c2 * t.cell_side(), spec.alpha)
        * (points.len() as f64 + gaps.s_alpha(spec.alpha));
    Ok(TiledUpperBound {
        w_uni,
        rhs,
        mst_weight,
        holds: mst_weight <= w_uni + 1e-12 && w_uni <= rhs + 1e-12,
        edges,
        links,
    })
}

pub fn tiled_upper_bound(
    points: &[Point],
    t: &Tiling,
    spec: &WeightSpec,
) -> Result<TiledUpperBound, ExperimentError> {
    let w = mst::mst(points, spec)?.total_weight;
    tiled_upper_bound_with(points, t, spec, w)
}
