//! Executable versions of the constructions behind the bounds, plus Monte
//! Carlo drivers for the scaling laws.

use thiserror::Error;

use crate::bounds::BoundsError;
use crate::geometry::GeometryError;
use crate::mst::MstError;
use crate::sampling::SamplingError;
use crate::weights::WeightError;

pub mod good_square;
pub mod merge;
pub mod prop1;
pub mod scaling;
pub mod tiling_stats;

pub use good_square::{build_good_square, good_square_probe, GoodSquareConfig, GoodSquareParams, GoodSquareReport, Placement};
pub use merge::{merge_bound_check, MergeVerdict};
pub use prop1::{planted_star_check, prop1_demo, prop1_density, Prop1Mode, Prop1Report};
pub use scaling::{
    fit_records, run_replicates, scaling_experiment, scaling_experiment_multi, variance_experiment,
    ExperimentRecord, LinearFit, ScalingConfig, ScalingFit,
};
pub use tiling_stats::{
    gap_stat, gap_stat_monotonicity, lower_bound_stat, lower_bound_stat_with, tiled_upper_bound,
    tiled_upper_bound_with, GapStat, LowerBoundStat, MonotonicityVerdict, TiledUpperBound,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExperimentError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Sampling(#[from] SamplingError),
    #[error(transparent)]
    Mst(#[from] MstError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("geometry infeasible: {0}")]
    GeometryInfeasible(String),
    #[error("the lower-bound statistic needs at least two points when any are present")]
    InsufficientPoints,
    #[error("point set is empty")]
    EmptyPointSet,
}
