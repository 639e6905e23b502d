use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use locmst::bounds::{compute_bounds, BoundsError, BoundsInput, BoundsResult};
use locmst::experiments::{
    good_square_probe, prop1_demo, prop1_density, run_replicates, scaling_experiment_multi,
    variance_experiment, ExperimentError, ExperimentRecord, GoodSquareParams, Placement, Prop1Mode,
    ScalingConfig, ScalingFit,
};
use locmst::geometry::Point;
use locmst::mst::{
    alpha_invariance_check, max_degree, mst, verify_mst_path_criterion, InvarianceVerdict,
    MstError,
};
use locmst::report::{svg_chart, Panel, Series};
use locmst::sampling::{
    derive_seed, rng_from_seed, sample_binomial, sample_poisson, uniform_in, Density, PointSet,
    SamplingError,
};
use locmst::weights::{HotspotLayout, WeightError, WeightSpec};

#[derive(Parser, Debug)]
#[command(name = "locmst", version, about = "MSTs with location-dependent weights on random points")]
struct Cli {
    /// Worker threads for replicate loops (falls back to LOCMST_THREADS).
    #[arg(long, global = true, env = "LOCMST_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
enum Command {
    /// β_low / β_up for one α or a grid of α.
    Bounds(BoundsArgs),
    /// Per-replicate records for a single n.
    Simulate(SimulateArgs),
    /// Log–log slope of the mean MST weight.
    Scaling(ScalingArgs),
    /// Log–log slope of the MST weight variance.
    Variance(ScalingArgs),
    /// Star structure around a hotspot's central node.
    Prop1(Prop1Args),
    /// Add one node to a good square and diff the trees.
    ProbeGoodSquare(GoodSquareArgs),
    /// Edge sets are the same for every α; trees pass the path criterion.
    Invariance(InvarianceArgs),
    /// Draw a point set.
    Sample(SampleArgs),
    /// Hotspot layout as JSON.
    Layout(LayoutArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum WeightArg {
    Euclidean,
    Shifted,
    Hotspot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum DensityArg {
    Uniform,
    /// ½ on [0, ½]², 7/6 elsewhere.
    Split,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum ProcessArg {
    Binomial,
    Poisson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone, Serialize)]
struct WeightOpts {
    #[arg(long, value_enum, default_value = "euclidean")]
    weight: WeightArg,
    /// Shift strength for `shifted` weights.
    #[arg(long, default_value_t = 0.5)]
    lambda: f64,
    /// K for `hotspot` weights.
    #[arg(long = "hotspot-k", default_value_t = 2)]
    hotspot_k: usize,
    #[arg(long = "hotspot-levels", default_value_t = 3)]
    hotspot_levels: usize,
    /// Cheap-edge factor for `hotspot` weights (default 1/(16K)).
    #[arg(long = "hotspot-c1")]
    hotspot_c1: Option<f64>,
}

#[derive(Args, Debug, Serialize)]
struct BoundsArgs {
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    eps1: f64,
    #[arg(long, default_value_t = 1.0)]
    eps2: f64,
    #[arg(long, default_value_t = 1.0)]
    c1: f64,
    #[arg(long, default_value_t = 1.0)]
    c2: f64,
    /// `start:stop:step`, overrides --alpha.
    #[arg(long = "alpha-grid")]
    alpha_grid: Option<String>,
    /// Write an SVG of β_low and β_up against α.
    #[arg(long)]
    plot: Option<PathBuf>,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct SimulateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    alpha: Vec<f64>,
    #[command(flatten)]
    weight: WeightOpts,
    #[arg(long, value_enum, default_value = "uniform")]
    density: DensityArg,
    #[arg(long, default_value_t = 100)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Target A for the grid statistics columns.
    #[arg(long = "a-tiling", default_value_t = 1.0)]
    a_tiling: f64,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct ScalingArgs {
    #[arg(long, value_delimiter = ',', default_value = "1")]
    alpha: Vec<f64>,
    #[arg(long = "n-list", value_delimiter = ',', default_value = "256,512,1024,2048,4096,8192")]
    n_list: Vec<usize>,
    #[command(flatten)]
    weight: WeightOpts,
    #[arg(long, value_enum, default_value = "uniform")]
    density: DensityArg,
    #[arg(long, default_value_t = 200)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write the per-replicate records as CSV.
    #[arg(long)]
    records: Option<PathBuf>,
    /// Write an SVG of the means (and corridor) against n.
    #[arg(long)]
    plot: Option<PathBuf>,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Prop1ModeArg {
    Planted,
    MonteCarlo,
}

#[derive(Args, Debug, Serialize)]
struct Prop1Args {
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    level: usize,
    #[arg(long, default_value_t = 1)]
    levels: usize,
    #[arg(long, default_value_t = 20)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "planted")]
    mode: Prop1ModeArg,
    /// Expected node count on the rest of the big square (Monte Carlo density).
    #[arg(long = "rest-expected", default_value_t = 0.05)]
    rest_expected: f64,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum PlacementArg {
    Uniform,
    Center,
}

#[derive(Args, Debug, Serialize)]
struct GoodSquareArgs {
    #[arg(long, default_value_t = 5)]
    g: usize,
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    alpha: Vec<f64>,
    #[arg(long = "a-target", default_value_t = 1.0)]
    a_target: f64,
    #[arg(long, value_enum, default_value = "uniform")]
    placement: PlacementArg,
    /// Number of independent configurations.
    #[arg(long, default_value_t = 1)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct InvarianceArgs {
    #[arg(long, default_value_t = 50)]
    n: usize,
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,2,3")]
    alphas: Vec<f64>,
    #[arg(long, value_delimiter = ',', value_enum, default_value = "euclidean,shifted,hotspot")]
    weights: Vec<WeightArg>,
    #[arg(long, default_value_t = 0.5)]
    lambda: f64,
    #[arg(long = "hotspot-k", default_value_t = 2)]
    hotspot_k: usize,
    #[arg(long, default_value_t = 100)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct SampleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "uniform")]
    density: DensityArg,
    #[arg(long, value_enum, default_value = "binomial")]
    process: ProcessArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct LayoutArgs {
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 3)]
    levels: usize,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    /// Bad flags or an infeasible configuration: exit 2.
    Config(String),
    /// A checked property did not hold: exit 1.
    Invariant(String),
    Io(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Io(e)
    }
}

macro_rules! config_errors {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::Config(e.to_string())
            }
        }
    )*};
}
config_errors!(BoundsError, SamplingError, WeightError, MstError);

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        Failure::Config(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    let config = serde_json::to_value(&cli.command).expect("arguments serialize");
    let res = match &cli.command {
        Command::Bounds(a) => cmd_bounds(a, &config),
        Command::Simulate(a) => cmd_simulate(a, &config),
        Command::Scaling(a) => cmd_scaling(a, &config, false),
        Command::Variance(a) => cmd_scaling(a, &config, true),
        Command::Prop1(a) => cmd_prop1(a, &config),
        Command::ProbeGoodSquare(a) => cmd_good_square(a, &config),
        Command::Invariance(a) => cmd_invariance(a, &config),
        Command::Sample(a) => cmd_sample(a, &config),
        Command::Layout(a) => cmd_layout(a, &config),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invariant(w)) => {
            eprintln!("invariant violated: {w}");
            ExitCode::from(1)
        }
        Err(Failure::Config(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn write_out(path: Option<&Path>, body: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, body).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

/// JSON document carrying the version and the full run configuration.
fn envelope(config: &Value, result: Value) -> String {
    let doc = json!({
        "version": locmst::VERSION,
        "config": config,
        "result": result,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("finite values serialize");
    s.push('\n');
    s
}

fn csv_preamble(config: &Value) -> String {
    format!("# locmst {}\n# config: {}\n", locmst::VERSION, config)
}

fn density(d: DensityArg) -> Density {
    match d {
        DensityArg::Uniform => Density::uniform(),
        DensityArg::Split => Density::split_example(),
    }
}

fn weight_spec(w: &WeightOpts) -> Result<WeightSpec, Failure> {
    Ok(match w.weight {
        WeightArg::Euclidean => WeightSpec::euclidean(1.0),
        WeightArg::Shifted => {
            if !(w.lambda >= 0.0 && w.lambda.is_finite()) {
                return Err(Failure::Config(format!("--lambda must be non-negative, got {}", w.lambda)));
            }
            WeightSpec::shifted(w.lambda, 1.0)
        }
        WeightArg::Hotspot => {
            let layout = Arc::new(HotspotLayout::build(w.hotspot_k, w.hotspot_levels)?);
            match w.hotspot_c1 {
                Some(c1) => WeightSpec::hotspot_with(layout, c1, 1.0, 1.0)?,
                None => WeightSpec::hotspot(layout, 1.0),
            }
        }
    })
}

fn check_alphas(alphas: &[f64]) -> Outcome {
    if alphas.is_empty() || alphas.iter().any(|a| !(*a > 0.0 && a.is_finite())) {
        return Err(Failure::Config(format!("alpha values must be positive, got {alphas:?}")));
    }
    Ok(())
}

fn parse_grid(s: &str) -> Result<Vec<f64>, Failure> {
    let bad = || Failure::Config(format!("--alpha-grid expects start:stop:step, got {s:?}"));
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    let [a, b, step] = parts[..] else { return Err(bad()) };
    if !(step > 0.0 && b >= a && a > 0.0) {
        return Err(bad());
    }
    let count = ((b - a) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| a + step * k as f64).collect())
}

fn cmd_bounds(a: &BoundsArgs, config: &Value) -> Outcome {
    let alphas = match &a.alpha_grid {
        Some(g) => parse_grid(g)?,
        None => vec![a.alpha],
    };
    check_alphas(&alphas)?;
    let results: Vec<BoundsResult> = alphas
        .par_iter()
        .map(|&alpha| compute_bounds(&BoundsInput::new(alpha, a.eps1, a.eps2, a.c1, a.c2)?))
        .collect::<Result<_, BoundsError>>()?;
    if let Some(p) = &a.plot {
        let series = |name: &str, f: fn(&BoundsResult) -> f64| Series {
            name: name.into(),
            points: results.iter().map(|r| (r.alpha, f(r))).collect(),
        };
        let svg = svg_chart(&[
            Panel {
                title: "Lower constant β_low(α)".into(),
                x_label: "α".into(),
                y_label: "β_low".into(),
                log_y: false,
                series: vec![series("β_low", |r| r.beta_low)],
            },
            Panel {
                title: "Upper constant β_up(α)".into(),
                x_label: "α".into(),
                y_label: "β_up".into(),
                log_y: false,
                series: vec![series("β_up", |r| r.beta_up)],
            },
        ]);
        write_out(Some(p), &svg)?;
    }
    let result = if results.len() == 1 {
        serde_json::to_value(results[0])
    } else {
        serde_json::to_value(&results)
    }
    .expect("bounds serialize");
    write_out(a.out.as_deref(), &envelope(config, result))?;
    Ok(())
}

fn records_csv(config: &Value, records: &[ExperimentRecord]) -> String {
    let mut s = csv_preamble(config);
    s.push_str(ExperimentRecord::CSV_HEADER);
    s.push('\n');
    for r in records {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    s
}

fn cmd_simulate(a: &SimulateArgs, config: &Value) -> Outcome {
    check_alphas(&a.alpha)?;
    if a.n < 2 || a.reps == 0 {
        return Err(Failure::Config("need n >= 2 and reps >= 1".into()));
    }
    let spec = weight_spec(&a.weight)?;
    let cfg = ScalingConfig {
        alphas: a.alpha.clone(),
        n_list: vec![a.n],
        reps: a.reps,
        seed: a.seed,
        a_tiling: a.a_tiling,
    };
    let records = run_replicates("simulate", &cfg, &spec, &density(a.density))?;
    write_out(a.out.as_deref(), &records_csv(config, &records))?;
    if a.weight.weight == WeightArg::Euclidean {
        if let Some(r) = records.iter().find(|r| r.max_degree > 6) {
            return Err(Failure::Invariant(format!(
                "euclidean MST with degree {} (n = {}, replicate {})",
                r.max_degree, r.n, r.replicate
            )));
        }
    }
    Ok(())
}

fn scaling_plot(fits: &[ScalingFit]) -> String {
    let panels: Vec<Panel> = fits
        .iter()
        .map(|f| {
            let x: Vec<f64> = f.n_list.iter().map(|&n| (n as f64).log10()).collect();
            let pts = |ys: Vec<f64>| x.iter().copied().zip(ys).collect();
            Panel {
                title: format!("Mean MST weight, α = {}", f.alpha),
                x_label: "log10 n".into(),
                y_label: "weight".into(),
                log_y: true,
                series: vec![
                    Series {
                        name: "Monte Carlo mean".into(),
                        points: pts(f.means.clone()),
                    },
                    Series {
                        name: "lower corridor".into(),
                        points: pts(f.corridor.iter().map(|c| c.0).collect()),
                    },
                    Series {
                        name: "upper corridor".into(),
                        points: pts(f.corridor.iter().map(|c| c.1).collect()),
                    },
                ],
            }
        })
        .collect();
    svg_chart(&panels)
}

fn cmd_scaling(a: &ScalingArgs, config: &Value, variance: bool) -> Outcome {
    check_alphas(&a.alpha)?;
    let spec = weight_spec(&a.weight)?;
    let f = density(a.density);
    let (fits, records) = if variance {
        if a.records.is_some() {
            return Err(Failure::Config("--records is only available for `scaling`".into()));
        }
        let fits = a
            .alpha
            .iter()
            .map(|&alpha| variance_experiment(alpha, &spec, &a.n_list, a.reps, a.seed))
            .collect::<Result<Vec<_>, _>>()?;
        (fits, Vec::new())
    } else {
        let cfg = ScalingConfig {
            alphas: a.alpha.clone(),
            n_list: a.n_list.clone(),
            reps: a.reps,
            seed: a.seed,
            a_tiling: 1.0,
        };
        scaling_experiment_multi(&cfg, &spec, &f)?
    };
    if let Some(p) = &a.records {
        write_out(Some(p), &records_csv(config, &records))?;
    }
    if let Some(p) = &a.plot {
        write_out(Some(p), &scaling_plot(&fits))?;
    }
    let result = serde_json::to_value(&fits).expect("fits serialize");
    write_out(a.out.as_deref(), &envelope(config, result))?;
    Ok(())
}

fn cmd_prop1(a: &Prop1Args, config: &Value) -> Outcome {
    if a.level == 0 || a.level > a.levels {
        return Err(Failure::Config(format!("--level must be in 1..={}", a.levels)));
    }
    let layout = Arc::new(HotspotLayout::build(a.k, a.levels)?);
    let mode = match a.mode {
        Prop1ModeArg::Planted => Prop1Mode::Planted,
        Prop1ModeArg::MonteCarlo => Prop1Mode::MonteCarlo {
            density: prop1_density(&layout, a.level, a.rest_expected)?,
        },
    };
    let r = prop1_demo(layout, a.level, a.reps, a.seed, &mode)?;
    write_out(a.out.as_deref(), &envelope(config, serde_json::to_value(&r).expect("report serializes")))?;
    if !r.star_always {
        return Err(Failure::Invariant(format!(
            "planted nodes do not form a star in replicate {}",
            r.failures[0]
        )));
    }
    Ok(())
}

fn cmd_good_square(a: &GoodSquareArgs, config: &Value) -> Outcome {
    check_alphas(&a.alpha)?;
    let params = GoodSquareParams {
        g: a.g,
        n: a.n,
        a_target: a.a_target,
        placement: match a.placement {
            PlacementArg::Uniform => Placement::Uniform,
            PlacementArg::Center => Placement::Center,
        },
    };
    let reports = (0..a.reps as u64)
        .into_par_iter()
        .map(|r| good_square_probe(&params, &a.alpha, derive_seed(a.seed, 0, r)))
        .collect::<Result<Vec<_>, _>>()?;
    let result = if reports.len() == 1 {
        serde_json::to_value(&reports[0])
    } else {
        serde_json::to_value(&reports)
    }
    .expect("reports serialize");
    write_out(a.out.as_deref(), &envelope(config, result))?;
    if let Some((r, rep)) = reports.iter().enumerate().find(|(_, x)| !x.ok) {
        return Err(Failure::Invariant(format!(
            "configuration {r}: added {:?}, removed {:?}, increments {:?} outside [{:?}, {:?}], distances ok: {}",
            rep.added_edges, rep.removed_edges, rep.increments, rep.lower, rep.upper, rep.distances_ok
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct InvarianceSummary {
    weight_kind: &'static str,
    instances: usize,
    mismatches: usize,
    path_failures: usize,
    max_degree: u32,
}

fn cmd_invariance(a: &InvarianceArgs, config: &Value) -> Outcome {
    check_alphas(&a.alphas)?;
    if a.n < 2 {
        return Err(Failure::Config("--n must be at least 2".into()));
    }
    let mut summaries = Vec::new();
    let mut witness: Option<String> = None;
    for (k, &w) in a.weights.iter().enumerate() {
        let spec = weight_spec(&WeightOpts {
            weight: w,
            lambda: a.lambda,
            hotspot_k: a.hotspot_k,
            hotspot_levels: 3,
            hotspot_c1: None,
        })?;
        let squares: Vec<_> = match &spec.kind {
            locmst::weights::WeightKind::Hotspot(l) => l.levels.iter().map(|x| x.square).collect(),
            _ => Vec::new(),
        };
        let unit = locmst::geometry::Rect::new(0.0, 0.0, 1.0, 1.0);
        let outcomes = (0..a.reps as u64)
            .into_par_iter()
            .map(|r| -> Result<_, Failure> {
                let mut rng = rng_from_seed(derive_seed(a.seed, k as u64, r));
                // A share of the nodes inside the planted squares, so hotspot
                // weights are exercised.
                let pts: Vec<Point> = (0..a.n)
                    .map(|i| {
                        if !squares.is_empty() && i % 3 == 0 {
                            uniform_in(&squares[i / 3 % squares.len()], &mut rng)
                        } else {
                            uniform_in(&unit, &mut rng)
                        }
                    })
                    .collect();
                let inv = alpha_invariance_check(&pts, &spec, &a.alphas)?;
                let tree = mst(&pts, &spec)?;
                let path = verify_mst_path_criterion(&pts, &spec, &tree)?;
                Ok((r, inv, path, max_degree(&tree)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mismatches: Vec<_> = outcomes.iter().filter(|o| o.1 != InvarianceVerdict::Pass).collect();
        let path_failures: Vec<_> = outcomes.iter().filter(|o| !o.2.is_pass()).collect();
        let max_deg = outcomes.iter().map(|o| o.3).max().unwrap_or(0);
        if witness.is_none() {
            if let Some(o) = mismatches.first() {
                witness = Some(format!("{} replicate {}: {:?}", spec.kind_name(), o.0, o.1));
            } else if let Some(o) = path_failures.first() {
                witness = Some(format!("{} replicate {}: {:?}", spec.kind_name(), o.0, o.2));
            } else if w == WeightArg::Euclidean && max_deg > 6 {
                witness = Some(format!("euclidean MST with degree {max_deg}"));
            }
        }
        summaries.push(InvarianceSummary {
            weight_kind: spec.kind_name(),
            instances: a.reps,
            mismatches: mismatches.len(),
            path_failures: path_failures.len(),
            max_degree: max_deg,
        });
    }
    let result = serde_json::to_value(&summaries).expect("summaries serialize");
    write_out(a.out.as_deref(), &envelope(config, result))?;
    match witness {
        Some(w) => Err(Failure::Invariant(w)),
        None => Ok(()),
    }
}

fn cmd_sample(a: &SampleArgs, config: &Value) -> Outcome {
    let f = density(a.density);
    let ps: PointSet = match a.process {
        ProcessArg::Binomial => sample_binomial(a.n, &f, a.seed)?,
        ProcessArg::Poisson => sample_poisson(a.n as f64, &f, a.seed)?,
    };
    let body = match a.format {
        Format::Csv => csv_preamble(config) + &ps.to_csv(),
        Format::Json => envelope(config, serde_json::to_value(&ps).expect("points serialize")),
    };
    write_out(a.out.as_deref(), &body)?;
    Ok(())
}

fn cmd_layout(a: &LayoutArgs, config: &Value) -> Outcome {
    let l = HotspotLayout::build(a.k, a.levels)?;
    write_out(a.out.as_deref(), &envelope(config, serde_json::to_value(&l).expect("layout serializes")))?;
    Ok(())
}
