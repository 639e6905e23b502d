//! Hotspot weights force high MST degree: whenever each planted cell of a
//! level holds exactly one node and the rest of its big square is empty, the
//! planted nodes form a star around the central one.

use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::geometry::{Point, Rect};
use crate::mst::{mst_prim_dense, MstResult};
use crate::sampling::{derive_seed, draw_points, draw_uniform_where, rng_from_seed, uniform_in, Density};
use crate::weights::{HotspotLayout, HotspotLevel, WeightSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Prop1Mode {
    /// One node placed in every planted cell, the rest outside the big square.
    Planted,
    /// I.i.d. draws from `density`; replicates without the event are skipped.
    MonteCarlo { density: Density },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prop1Report {
    pub k: usize,
    pub level: usize,
    pub n_i: u64,
    pub reps: usize,
    pub mode: String,
    pub occurrences: usize,
    pub frequency: f64,
    /// Star property on every occurrence.
    pub star_always: bool,
    /// Smallest degree of the central node over occurrences.
    pub min_center_degree: Option<u32>,
    /// Replicates (by number) where the star property failed.
    pub failures: Vec<usize>,
    /// `ln[(ε1/2)^{4K−3} e^{−2C}]`, `C = 100 ε2 (2K−1)²`.
    pub log_floor: f64,
}

/// Natural log of the analytic probability floor for the event.
pub fn log_probability_floor(k: usize, eps1: f64, eps2: f64) -> f64 {
    let c = 100.0 * eps2 * ((2 * k - 1) as f64).powi(2);
    (4 * k - 3) as f64 * (eps1 / 2.0).ln() - 2.0 * c
}

/// Density that makes the event likely at a given level: value 1 on each
/// planted cell (one expected node each), low enough on the rest of the big
/// square that it holds `rest_expected` nodes on average, and constant
/// elsewhere.
pub fn prop1_density(
    layout: &HotspotLayout,
    level: usize,
    rest_expected: f64,
) -> Result<Density, ExperimentError> {
    let lv = layout
        .level(level)
        .ok_or_else(|| ExperimentError::InvalidConfig(format!("layout has no level {level}")))?;
    let n = lv.n_i as f64;
    let cells = lv.planted_cells();
    let rest_area = lv.big.area() - cells.iter().map(Rect::area).sum::<f64>();
    let low = rest_expected / (n * rest_area);
    let mut regions: Vec<(Rect, f64)> = cells.into_iter().map(|c| (c, 1.0)).collect();
    regions.push((lv.big, low));
    Ok(Density::normalized(regions)?)
}

/// Node index per planted cell if the event holds, `None` otherwise.
fn detect_event(points: &[Point], lv: &HotspotLevel) -> Option<Vec<usize>> {
    let cells = lv.planted_cells();
    let mut found: Vec<Option<usize>> = vec![None; cells.len()];
    for (i, &p) in points.iter().enumerate() {
        if !lv.big.contains(p) {
            continue;
        }
        match cells.iter().position(|c| c.contains(p)) {
            Some(c) if found[c].is_none() => found[c] = Some(i),
            _ => return None,
        }
    }
    found.into_iter().collect()
}

/// Checks that the tree restricted to `planted` (central node first) is the
/// star on the central node. Returns the verdict and the central degree.
pub fn planted_star_check(result: &MstResult, planted: &[usize]) -> (bool, u32) {
    let v0 = planted[0];
    let inside = |v: usize| planted.contains(&v);
    let mut induced: Vec<(usize, usize)> = result
        .edges
        .iter()
        .filter(|e| inside(e.i) && inside(e.j))
        .map(|e| (e.i, e.j))
        .collect();
    induced.sort();
    let mut star: Vec<(usize, usize)> = planted[1..].iter().map(|&v| (v0.min(v), v0.max(v))).collect();
    star.sort();
    let deg = result.degrees[v0];
    (induced == star && deg as usize >= planted.len() - 1, deg)
}

fn planted_points(
    lv: &HotspotLevel,
    rng: &mut impl Rng,
) -> Result<(Vec<Point>, Vec<usize>), ExperimentError> {
    let cells = lv.planted_cells();
    let mut pts: Vec<Point> = cells.iter().map(|c| uniform_in(c, rng)).collect();
    let extra = (lv.n_i as usize).saturating_sub(pts.len());
    let big = lv.big;
    pts.extend(draw_uniform_where(extra, &Rect::new(0.0, 0.0, 1.0, 1.0), rng, |p| {
        !big.contains(p)
    })?);
    Ok((pts, (0..cells.len()).collect()))
}

/// Runs `reps` replicates at `level` of `layout` under hotspot weights with
/// default constants.
pub fn prop1_demo(
    layout: Arc<HotspotLayout>,
    level: usize,
    reps: usize,
    seed: u64,
    mode: &Prop1Mode,
) -> Result<Prop1Report, ExperimentError> {
    if reps == 0 {
        return Err(ExperimentError::InvalidConfig("reps must be at least 1".into()));
    }
    let lv = layout
        .level(level)
        .ok_or_else(|| ExperimentError::InvalidConfig(format!("layout has no level {level}")))?
        .clone();
    let spec = WeightSpec::hotspot(layout.clone(), 1.0);
    let k = layout.k;
    let outcomes: Vec<Option<(bool, u32)>> = (0..reps)
        .into_par_iter()
        .map(|r| -> Result<Option<(bool, u32)>, ExperimentError> {
            let mut rng = rng_from_seed(derive_seed(seed, level as u64, r as u64));
            let (points, planted) = match mode {
                Prop1Mode::Planted => planted_points(&lv, &mut rng)?,
                Prop1Mode::MonteCarlo { density } => {
                    let pts = draw_points(lv.n_i as usize, density, &mut rng)?;
                    match detect_event(&pts, &lv) {
                        Some(idx) => (pts, idx),
                        None => return Ok(None),
                    }
                }
            };
            let tree = mst_prim_dense(&points, &spec)?;
            Ok(Some(planted_star_check(&tree, &planted)))
        })
        .collect::<Result<_, _>>()?;
    let hits: Vec<(usize, (bool, u32))> = outcomes
        .into_iter()
        .enumerate()
        .filter_map(|(r, o)| o.map(|x| (r, x)))
        .collect();
    let (eps1, eps2, mode_name) = match mode {
        Prop1Mode::Planted => (1.0, 1.0, "planted"),
        Prop1Mode::MonteCarlo { density } => (density.eps1(), density.eps2(), "monte_carlo"),
    };
    Ok(Prop1Report {
        k,
        level,
        n_i: lv.n_i,
        reps,
        mode: mode_name.into(),
        occurrences: hits.len(),
        frequency: hits.len() as f64 / reps as f64,
        star_always: hits.iter().all(|(_, (ok, _))| *ok),
        min_center_degree: hits.iter().map(|(_, (_, d))| *d).min(),
        failures: hits.iter().filter(|(_, (ok, _))| !ok).map(|(r, _)| *r).collect(),
        log_floor: log_probability_floor(k, eps1, eps2),
    })
}
