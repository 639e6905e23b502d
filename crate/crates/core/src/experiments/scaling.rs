//! Monte Carlo estimates of `E MST_n` and `var MST_n` across `n`, with
//! log–log least-squares slopes.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tiling_stats::{gap_stat, isolated_cells};
use super::ExperimentError;
use crate::bounds::{expected_weight_bracket, BoundsInput};
use crate::geometry::build_tiling;
use crate::mst::{max_degree, mst};
use crate::sampling::{derive_seed, sample_binomial, Density};
use crate::weights::WeightSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingConfig {
    pub alphas: Vec<f64>,
    pub n_list: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
    /// Target `A` for the per-replicate grid statistics.
    pub a_tiling: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub experiment: String,
    pub n: usize,
    pub alpha: f64,
    pub weight_kind: String,
    pub seed: u64,
    pub replicate: usize,
    pub mst_weight: f64,
    pub max_degree: u32,
    pub g_alpha: Option<usize>,
    pub s_alpha: Option<f64>,
    /// Wall-clock time of the replicate; the only non-reproducible column.
    pub runtime_ms: f64,
}

impl ExperimentRecord {
    pub const CSV_HEADER: &'static str =
        "experiment,n,alpha,weight_kind,seed,replicate,mst_weight,max_degree,g_alpha,s_alpha,runtime_ms";

    pub fn csv_row(&self) -> String {
        use crate::report::fmt17;
        format!(
            "{},{},{},{},{},{},{},{},{},{},{:.3}",
            self.experiment,
            self.n,
            fmt17(self.alpha),
            self.weight_kind,
            self.seed,
            self.replicate,
            fmt17(self.mst_weight),
            self.max_degree,
            self.g_alpha.map(|g| g.to_string()).unwrap_or_default(),
            self.s_alpha.map(fmt17).unwrap_or_default(),
            self.runtime_ms
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_se: f64,
    pub intercept_se: f64,
}

/// Ordinary least squares `y = a + b·x` with classical standard errors.
pub fn ols(x: &[f64], y: &[f64]) -> LinearFit {
    let m = x.len() as f64;
    let mx = x.iter().sum::<f64>() / m;
    let my = y.iter().sum::<f64>() / m;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    let s2 = if x.len() > 2 { sse / (m - 2.0) } else { f64::NAN };
    LinearFit {
        slope,
        intercept,
        slope_se: (s2 / sxx).sqrt(),
        intercept_se: (s2 * (1.0 / m + mx * mx / sxx)).sqrt(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub alpha: f64,
    pub weight_kind: String,
    pub n_list: Vec<usize>,
    pub reps: usize,
    pub means: Vec<f64>,
    /// Bessel-corrected sample variances.
    pub variances: Vec<f64>,
    /// `sd(MST_n) / n^{1−α/2}`.
    pub normalized_sd: Vec<f64>,
    /// Slope of `ln mean` against `ln n`.
    pub mean_fit: LinearFit,
    /// Slope of `ln variance` against `ln n`.
    pub variance_fit: LinearFit,
    /// `(c1^α β_low, c2^α β_up)·n^{1−α/2}` per `n`.
    pub corridor: Vec<(f64, f64)>,
    pub corridor_ok: bool,
}

/// Samples `reps` binomial point sets per `n`, computes one MST each and
/// reports every α from it (the tree does not depend on α). Records are in
/// `(n, replicate, α)` order whatever the scheduling.
pub fn run_replicates(
    experiment: &str,
    cfg: &ScalingConfig,
    spec: &WeightSpec,
    density: &Density,
) -> Result<Vec<ExperimentRecord>, ExperimentError> {
    let tasks: Vec<(usize, usize)> = cfg
        .n_list
        .iter()
        .flat_map(|&n| (0..cfg.reps).map(move |r| (n, r)))
        .collect();
    let per_task: Vec<Vec<ExperimentRecord>> = tasks
        .par_iter()
        .map(|&(n, r)| -> Result<Vec<ExperimentRecord>, ExperimentError> {
            let start = Instant::now();
            let seed = derive_seed(cfg.seed, n as u64, r as u64);
            let ps = sample_binomial(n, density, seed)?;
            let tree = mst(&ps.points, spec)?;
            let tiling = build_tiling(n, cfg.a_tiling).ok();
            let g = match &tiling {
                Some(t) if n >= 2 => Some(isolated_cells(&ps.points, t)?),
                _ => None,
            };
            let gaps = tiling.as_ref().map(|t| gap_stat(&ps.points, t)).transpose()?;
            let elapsed = start.elapsed().as_secs_f64() * 1e3;
            Ok(cfg
                .alphas
                .iter()
                .map(|&a| ExperimentRecord {
                    experiment: experiment.to_string(),
                    n,
                    alpha: a,
                    weight_kind: spec.kind_name().to_string(),
                    seed,
                    replicate: r,
                    mst_weight: tree.reweighted(a).total_weight,
                    max_degree: max_degree(&tree),
                    g_alpha: g,
                    s_alpha: gaps.as_ref().map(|gs| gs.s_alpha(a)),
                    runtime_ms: elapsed,
                })
                .collect())
        })
        .collect::<Result<_, _>>()?;
    Ok(per_task.into_iter().flatten().collect())
}

/// Aggregates records into one fit per α.
pub fn fit_records(
    records: &[ExperimentRecord],
    cfg: &ScalingConfig,
    spec: &WeightSpec,
    density: &Density,
) -> Result<Vec<ScalingFit>, ExperimentError> {
    cfg.alphas
        .iter()
        .map(|&alpha| {
            let mut means = Vec::new();
            let mut variances = Vec::new();
            let mut normalized_sd = Vec::new();
            let mut corridor = Vec::new();
            let bounds = BoundsInput::new(alpha, density.eps1(), density.eps2(), spec.c1, spec.c2)?;
            for &n in &cfg.n_list {
                let w: Vec<f64> = records
                    .iter()
                    .filter(|r| r.n == n && r.alpha == alpha)
                    .map(|r| r.mst_weight)
                    .collect();
                let m = w.len() as f64;
                let mean = w.iter().sum::<f64>() / m;
                let var = w.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
                means.push(mean);
                variances.push(var);
                normalized_sd.push(var.sqrt() / (n as f64).powf(1.0 - alpha / 2.0));
                corridor.push(expected_weight_bracket(n, &bounds)?);
            }
            let lx: Vec<f64> = cfg.n_list.iter().map(|&n| (n as f64).ln()).collect();
            let lm: Vec<f64> = means.iter().map(|v| v.ln()).collect();
            let lv: Vec<f64> = variances.iter().map(|v| v.ln()).collect();
            let corridor_ok = means
                .iter()
                .zip(&corridor)
                .all(|(m, (lo, hi))| m >= lo && m <= hi);
            Ok(ScalingFit {
                alpha,
                weight_kind: spec.kind_name().to_string(),
                n_list: cfg.n_list.clone(),
                reps: cfg.reps,
                means,
                variances,
                normalized_sd,
                mean_fit: ols(&lx, &lm),
                variance_fit: ols(&lx, &lv),
                corridor,
                corridor_ok,
            })
        })
        .collect()
}

fn validate(cfg: &ScalingConfig, min_reps: usize) -> Result<(), ExperimentError> {
    if cfg.n_list.len() < 4 {
        return Err(ExperimentError::InvalidConfig(format!(
            "need at least 4 values of n, got {}",
            cfg.n_list.len()
        )));
    }
    if cfg.n_list.windows(2).any(|w| w[0] >= w[1]) || cfg.n_list[0] < 2 {
        return Err(ExperimentError::InvalidConfig("n values must be increasing and at least 2".into()));
    }
    if cfg.reps < min_reps {
        return Err(ExperimentError::InvalidConfig(format!(
            "need at least {min_reps} replicates, got {}",
            cfg.reps
        )));
    }
    if cfg.alphas.is_empty() || cfg.alphas.iter().any(|a| !(*a > 0.0)) {
        return Err(ExperimentError::InvalidConfig("alphas must be positive and nonempty".into()));
    }
    Ok(())
}

/// Several exponents from one set of trees; needs `reps ≥ 30`.
pub fn scaling_experiment_multi(
    cfg: &ScalingConfig,
    spec: &WeightSpec,
    density: &Density,
) -> Result<(Vec<ScalingFit>, Vec<ExperimentRecord>), ExperimentError> {
    validate(cfg, 30)?;
    let records = run_replicates("scaling", cfg, spec, density)?;
    let fits = fit_records(&records, cfg, spec, density)?;
    Ok((fits, records))
}

pub fn scaling_experiment(
    alpha: f64,
    spec: &WeightSpec,
    n_list: &[usize],
    reps: usize,
    seed: u64,
) -> Result<ScalingFit, ExperimentError> {
    let cfg = ScalingConfig {
        alphas: vec![alpha],
        n_list: n_list.to_vec(),
        reps,
        seed,
        a_tiling: 1.0,
    };
    let (mut fits, _) = scaling_experiment_multi(&cfg, &spec.with_alpha(alpha), &Density::uniform())?;
    Ok(fits.remove(0))
}

/// As [`scaling_experiment`] but insists on `reps ≥ 200` so the variance
/// slope is meaningful.
pub fn variance_experiment(
    alpha: f64,
    spec: &WeightSpec,
    n_list: &[usize],
    reps: usize,
    seed: u64,
) -> Result<ScalingFit, ExperimentError> {
    let cfg = ScalingConfig {
        alphas: vec![alpha],
        n_list: n_list.to_vec(),
        reps,
        seed,
        a_tiling: 1.0,
    };
    validate(&cfg, 200)?;
    let spec = spec.with_alpha(alpha);
    let records = run_replicates("variance", &cfg, &spec, &Density::uniform())?;
    Ok(fit_records(&records, &cfg, &spec, &Density::uniform())?.remove(0))
}
