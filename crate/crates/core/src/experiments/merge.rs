use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::geometry::{dist, Point};
use crate::mst;
use crate::weights::{pow_alpha, WeightSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergeVerdict {
    pub merged: f64,
    pub left: f64,
    /// `c2^α Σ_{x ∈ ps2} d^α(x, ps1)`.
    pub joining: f64,
    pub holds: bool,
}

/// `MST(ps1 ∪ ps2) ≤ MST(ps1) + c2^α Σ_{x∈ps2} d^α(x, ps1)`: hang every extra
/// node on its nearest node of `ps1`.
pub fn merge_bound_check(
    ps1: &[Point],
    ps2: &[Point],
    spec: &WeightSpec,
) -> Result<MergeVerdict, ExperimentError> {
    if ps1.is_empty() {
        return Err(ExperimentError::InvalidConfig("the first set must be nonempty".into()));
    }
    let left = mst::mst(ps1, spec)?.total_weight;
    let all: Vec<Point> = ps1.iter().chain(ps2).copied().collect();
    let merged = mst::mst(&all, spec)?.total_weight;
    let joining: f64 = ps2
        .iter()
        .map(|&x| {
            let d = ps1.iter().map(|&y| dist(x, y)).fold(f64::INFINITY, f64::min);
            pow_alpha(spec.c2 * d, spec.alpha)
        })
        .sum();
    Ok(MergeVerdict {
        merged,
        left,
        joining,
        holds: merged <= left + joining + 1e-12,
    })
}
