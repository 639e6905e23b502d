//! Analytic constants bracketing the expected MST weight: `C1(A)`, `C2(A)`,
//! the optimized `β_low`/`β_up`, geometric moments and Chernoff bounds.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("success probability must lie in (0, 1], got {0}")]
    InvalidP(f64),
    #[error("eps must lie in (0, 1/2), got {0}")]
    InvalidEps(f64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("series did not converge within {0} terms")]
    NoConvergence(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundsInput {
    pub alpha: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub c1: f64,
    pub c2: f64,
}

impl BoundsInput {
    pub fn new(alpha: f64, eps1: f64, eps2: f64, c1: f64, c2: f64) -> Result<Self, BoundsError> {
        let b = Self {
            alpha,
            eps1,
            eps2,
            c1,
            c2,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn uniform(alpha: f64) -> Self {
        Self {
            alpha,
            eps1: 1.0,
            eps2: 1.0,
            c1: 1.0,
            c2: 1.0,
        }
    }

    pub fn validate(&self) -> Result<(), BoundsError> {
        let all = [self.alpha, self.eps1, self.eps2, self.c1, self.c2];
        if all.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(BoundsError::InvalidInput(format!(
                "alpha, eps1, eps2, c1, c2 must be positive and finite: {all:?}"
            )));
        }
        if self.eps1 > self.eps2 || self.c1 > self.c2 {
            return Err(BoundsError::InvalidInput(
                "need eps1 <= eps2 and c1 <= c2".into(),
            ));
        }
        Ok(())
    }

    /// `ε1` when `α ≤ 1`, `ε2` otherwise.
    pub fn delta(&self) -> f64 {
        if self.alpha <= 1.0 {
            self.eps1
        } else {
            self.eps2
        }
    }
}

/// Eulerian polynomial `A_r(q) = Σ_m E(r, m) q^m`.
fn eulerian_poly(r: usize, q: f64) -> f64 {
    let mut row = vec![1.0f64];
    for n in 2..=r {
        let mut next = vec![0.0; n];
        for m in 0..n {
            let a = if m < row.len() { (m + 1) as f64 * row[m] } else { 0.0 };
            let b = if m >= 1 { (n - m) as f64 * row[m - 1] } else { 0.0 };
            next[m] = a + b;
        }
        row = next;
    }
    row.iter().rev().fold(0.0, |acc, c| acc * q + c)
}

const MAX_TERMS: u64 = 2_000_000_000;

/// `Σ_{k≥1} k^α (1−p)^{k−1} p`, stopped once a geometric bound on the
/// remainder drops below `tol`.
pub fn geometric_moment_series(alpha: f64, p: f64, tol: f64) -> Result<f64, BoundsError> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(BoundsError::InvalidP(p));
    }
    if !(alpha > 0.0 && tol > 0.0) {
        return Err(BoundsError::InvalidInput(format!("alpha {alpha}, tol {tol}")));
    }
    let q = 1.0 - p;
    if q == 0.0 {
        return Ok(1.0);
    }
    let mut sum = 0.0;
    let mut qk = 1.0; // q^{k−1}
    let mut k: u64 = 1;
    loop {
        let kf = k as f64;
        let term = kf.powf(alpha) * qk * p;
        sum += term;
        // Term ratios ((k+1)/k)^α·q decrease in k, so the current one bounds the tail.
        let rho = ((kf + 1.0) / kf).powf(alpha) * q;
        if rho < 1.0 && term * rho / (1.0 - rho) < tol {
            return Ok(sum);
        }
        k += 1;
        if k > MAX_TERMS {
            return Err(BoundsError::NoConvergence(MAX_TERMS));
        }
        qk *= q;
    }
}

/// `E T^α` for `T ~ Geometric(p)` on `{1, 2, …}`. Integer exponents use the
/// closed form `A_r(1−p)/p^r`; other exponents sum the series.
pub fn geometric_moment(alpha: f64, p: f64, tol: f64) -> Result<f64, BoundsError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(BoundsError::InvalidP(p));
    }
    if alpha.fract() == 0.0 && (1.0..=30.0).contains(&alpha) {
        let r = alpha as usize;
        return Ok(eulerian_poly(r, 1.0 - p) / p.powi(r as i32));
    }
    geometric_moment_series(alpha, p, tol)
}

/// Relative-precision moment used internally by the optimizers.
fn moment_rel(alpha: f64, p: f64) -> f64 {
    if p >= 1.0 {
        return 1.0;
    }
    let scale = p.powf(-alpha).max(1.0);
    geometric_moment(alpha, p, 1e-14 * scale).unwrap_or(f64::INFINITY)
}

/// `r!/(1 − e^{−θ})^r`, an upper bound on `E T^r` at `p = 1 − e^{−θ}`.
pub fn moment_upper_bound(r: u32, theta: f64) -> f64 {
    let fact: f64 = (1..=r).map(f64::from).product();
    fact / (-(-theta).exp_m1()).powi(r as i32)
}

/// `p = 1 − e^{−δA²}`, the chance a cell of side `A/√n` is occupied.
pub fn occupancy_p(a: f64, delta: f64) -> f64 {
    -(-delta * a * a).exp_m1()
}

pub fn c1_of_a(a: f64, b: &BoundsInput) -> f64 {
    (b.c1 * a).powf(b.alpha) / (2.0 * a * a)
        * (-(-b.eps1 * a * a).exp_m1())
        * (-8.0 * b.eps2 * a * a).exp()
}

pub fn c2_of_a(a: f64, b: &BoundsInput) -> f64 {
    let p = occupancy_p(a, b.delta());
    (2.0 * b.c2 * a).powf(b.alpha) * (1.0 + moment_rel(b.alpha, p) / (a * a))
}

fn low_objective(a: f64, b: &BoundsInput) -> f64 {
    a.powf(b.alpha) / (2.0 * a * a) * (-(-b.eps1 * a * a).exp_m1()) * (-8.0 * b.eps2 * a * a).exp()
}

fn up_objective(a: f64, b: &BoundsInput) -> f64 {
    let p = occupancy_p(a, b.delta());
    (2.0 * a).powf(b.alpha) * (1.0 + moment_rel(b.alpha, p) / (a * a))
}

/// Cheap lower bound on `up_objective`: `E T^α ≥ max(1, p^{−α})` for `α ≥ 1`
/// (Jensen) and `≥ 1` otherwise.
fn up_objective_floor(a: f64, b: &BoundsInput) -> f64 {
    let p = occupancy_p(a, b.delta());
    let m = if b.alpha >= 1.0 { p.powf(-b.alpha).max(1.0) } else { 1.0 };
    (2.0 * a).powf(b.alpha) * (1.0 + m / (a * a))
}

/// Search range and resolution for the 1-D optimizations over `A`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerGrid {
    pub a_min: f64,
    pub a_max: f64,
    pub points: usize,
    pub tol: f64,
}

impl Default for OptimizerGrid {
    fn default() -> Self {
        Self {
            a_min: 1e-3,
            a_max: 10.0,
            points: 10_000,
            tol: 1e-9,
        }
    }
}

impl OptimizerGrid {
    fn node(&self, k: usize) -> f64 {
        self.a_min + (self.a_max - self.a_min) * k as f64 / (self.points - 1) as f64
    }
}

/// Golden-section minimization of a unimodal `f` on `[lo, hi]`.
pub fn golden_section_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

fn refine(
    f: impl Fn(f64) -> f64,
    grid: &OptimizerGrid,
    k: usize,
    best_val: f64,
) -> (f64, f64) {
    let lo = grid.node(k.saturating_sub(1));
    let hi = grid.node((k + 1).min(grid.points - 1));
    let a = golden_section_min(&f, lo, hi, grid.tol);
    let v = f(a);
    if v <= best_val {
        (v, a)
    } else {
        (best_val, grid.node(k))
    }
}

/// `sup_A A^α/(2A²)·(1 − e^{−ε1A²})·e^{−8ε2A²}` with its maximizer.
pub fn beta_low_with(b: &BoundsInput, grid: &OptimizerGrid) -> Result<(f64, f64), BoundsError> {
    b.validate()?;
    let neg = |a: f64| -low_objective(a, b);
    let (k, v) = (0..grid.points)
        .map(|k| (k, neg(grid.node(k))))
        .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
    let (v, a) = refine(neg, grid, k, v);
    Ok((-v, a))
}

pub fn beta_low(b: &BoundsInput) -> Result<(f64, f64), BoundsError> {
    beta_low_with(b, &OptimizerGrid::default())
}

/// `inf_A (2A)^α·(1 + E T^α/A²)` with its minimizer.
pub fn beta_up_with(b: &BoundsInput, grid: &OptimizerGrid) -> Result<(f64, f64), BoundsError> {
    b.validate()?;
    let f = |a: f64| up_objective(a, b);
    // Large A is cheap to evaluate, so scan downwards and skip nodes whose
    // floor already exceeds the incumbent.
    let mut best = (0usize, f64::INFINITY);
    for k in (0..grid.points).rev() {
        let a = grid.node(k);
        if up_objective_floor(a, b) >= best.1 {
            continue;
        }
        let v = f(a);
        if v < best.1 {
            best = (k, v);
        }
    }
    if !best.1.is_finite() {
        return Err(BoundsError::InvalidInput("objective is infinite on the grid".into()));
    }
    Ok(refine(f, grid, best.0, best.1))
}

pub fn beta_up(b: &BoundsInput) -> Result<(f64, f64), BoundsError> {
    beta_up_with(b, &OptimizerGrid::default())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundsResult {
    pub alpha: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub c1: f64,
    pub c2: f64,
    pub beta_low: f64,
    #[serde(rename = "A_low")]
    pub a_low: f64,
    pub beta_up: f64,
    #[serde(rename = "A_up")]
    pub a_up: f64,
    /// `E T^α` at the `β_up` minimizer.
    pub et_alpha: f64,
}

pub fn compute_bounds(b: &BoundsInput) -> Result<BoundsResult, BoundsError> {
    let (beta_low, a_low) = beta_low(b)?;
    let (beta_up, a_up) = beta_up(b)?;
    Ok(BoundsResult {
        alpha: b.alpha,
        eps1: b.eps1,
        eps2: b.eps2,
        c1: b.c1,
        c2: b.c2,
        beta_low,
        a_low,
        beta_up,
        a_up,
        et_alpha: moment_rel(b.alpha, occupancy_p(a_up, b.delta())),
    })
}

/// Asymptotic corridor `(c1^α β_low, c2^α β_up)·n^{1−α/2}` for `E MST_n`.
pub fn expected_weight_bracket(n: usize, b: &BoundsInput) -> Result<(f64, f64), BoundsError> {
    if n == 0 {
        return Err(BoundsError::InvalidInput("n must be at least 1".into()));
    }
    let scale = (n as f64).powf(1.0 - b.alpha / 2.0);
    let (lo, _) = beta_low(b)?;
    let (hi, _) = beta_up(b)?;
    Ok((
        b.c1.powf(b.alpha) * lo * scale,
        b.c2.powf(b.alpha) * hi * scale,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tail {
    Upper,
    Lower,
}

/// `exp(−ε² m μ / 4)`, valid for either tail of a sum of `m` Bernoulli
/// variables with mean at least `μ` each.
pub fn chernoff_bound(m: f64, mu: f64, eps: f64, _tail: Tail) -> Result<f64, BoundsError> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(BoundsError::InvalidEps(eps));
    }
    if !(m > 0.0 && mu > 0.0) {
        return Err(BoundsError::InvalidInput(format!("m = {m}, mu = {mu}")));
    }
    Ok((-eps * eps * m * mu / 4.0).exp())
}

/// High-probability lower level `C1(A)·n^{1−α/2}·(1 − factor·√A/n^{1/4})`.
/// The correction factor is left to the caller (4 and 36 both appear in
/// different statements of the estimate).
pub fn deviation_lower_level(n: usize, a: f64, b: &BoundsInput, factor: f64) -> f64 {
    let nf = n as f64;
    c1_of_a(a, b) * nf.powf(1.0 - b.alpha / 2.0) * (1.0 - factor * a.sqrt() / nf.powf(0.25))
}

/// Bracket for `E (MST_n / n^{1−α/2})^k`:
/// `C1^k (1 − factor·k√A/n^{1/4})` and `C2^k (1 + 2k/n^{1/16})`.
pub fn moment_bracket(n: usize, a: f64, k: u32, b: &BoundsInput, factor: f64) -> (f64, f64) {
    let nf = n as f64;
    let kf = f64::from(k);
    (
        c1_of_a(a, b).powi(k as i32) * (1.0 - factor * kf * a.sqrt() / nf.powf(0.25)),
        c2_of_a(a, b).powi(k as i32) * (1.0 + 2.0 * kf / nf.powf(1.0 / 16.0)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moment_examples() {
        assert!((geometric_moment(1.0, 0.5, 1e-14).unwrap() - 2.0).abs() < 1e-12);
        assert!((geometric_moment(2.0, 0.5, 1e-14).unwrap() - 6.0).abs() < 1e-12);
        let brute: f64 = (1..=1_000_000u64)
            .map(|k| (k as f64).powf(1.5) * 0.7f64.powi(k as i32 - 1) * 0.3)
            .sum();
        let s = geometric_moment(1.5, 0.3, 1e-14).unwrap();
        assert!((s - brute).abs() < 1e-10 * brute);
        assert!(matches!(geometric_moment(1.0, 0.0, 1e-12), Err(BoundsError::InvalidP(_))));
        assert!(matches!(geometric_moment(1.0, 1.5, 1e-12), Err(BoundsError::InvalidP(_))));
    }

    #[test]
    fn closed_forms_match_series() {
        for p in [0.05, 0.3, 0.5, 0.9] {
            for r in 1..=6 {
                let c = geometric_moment(r as f64, p, 1e-15).unwrap();
                let s = geometric_moment_series(r as f64, p, 1e-15 * c).unwrap();
                assert!((c - s).abs() <= 1e-12 * c, "r={r} p={p}: {c} vs {s}");
            }
            let two = geometric_moment(2.0, p, 1e-15).unwrap();
            assert!((two - (2.0 - p) / (p * p)).abs() <= 1e-12 * two);
        }
    }

    #[test]
    fn moment_bound_examples() {
        assert!((moment_upper_bound(1, 2f64.ln()) - 2.0).abs() < 1e-14);
        let p = 1.0 - (-1.0f64).exp();
        let b = moment_upper_bound(2, 1.0);
        assert!((b - 2.0 / (p * p)).abs() < 1e-12);
        assert!((b - 5.0053).abs() < 1e-4);
        assert!(b >= (2.0 - p) / (p * p));
        let p = 1.0 - (-0.1f64).exp();
        assert!(moment_upper_bound(4, 0.1) >= geometric_moment(4.0, p, 1e-12).unwrap());
    }

    #[test]
    fn c_of_a_examples() {
        let b = BoundsInput::uniform(1.0);
        let want = 0.5 * (1.0 - (-1.0f64).exp()) * (-8.0f64).exp();
        assert!((c1_of_a(1.0, &b) - want).abs() < 1e-15);
        assert!((c1_of_a(1.0, &b) - 1.060264e-4).abs() < 1e-9);
        let want = 2.0 * (1.0 + 1.0 / (1.0 - (-1.0f64).exp()));
        assert!((c2_of_a(1.0, &b) - want).abs() < 1e-12);
        assert!((c2_of_a(1.0, &b) - 5.16395).abs() < 1e-5);
        assert!(c1_of_a(1e-6, &b) < 1e-6 && c1_of_a(50.0, &b) < 1e-300);
    }

    #[test]
    fn delta_rule() {
        let b = BoundsInput::new(1.0, 0.5, 7.0 / 6.0, 1.0, 1.0).unwrap();
        assert_eq!(b.delta(), 0.5);
        let b = BoundsInput { alpha: 1.0000001, ..b };
        assert_eq!(b.delta(), 7.0 / 6.0);
    }

    #[test]
    fn beta_low_alpha_two_closed_form() {
        let (v, _) = beta_low(&BoundsInput::uniform(2.0)).unwrap();
        let x = (9.0f64 / 8.0).ln();
        let want = (1.0 - (-x).exp()) * (-8.0 * x).exp() / 2.0;
        assert!((want - (1.0 / 9.0) * (8.0f64 / 9.0).powi(8) / 2.0).abs() < 1e-15);
        assert!((v - want).abs() < 1e-12);
    }

    #[test]
    fn chernoff_examples() {
        let v = chernoff_bound(100.0, 0.5, 0.1, Tail::Lower).unwrap();
        assert!((v - (-0.125f64).exp()).abs() < 1e-15);
        assert!((v - 0.8825).abs() < 1e-4);
        assert!(chernoff_bound(100.0, 0.5, 1e-9, Tail::Upper).unwrap() > 0.999_999);
        assert!(chernoff_bound(1e9, 0.5, 0.1, Tail::Upper).unwrap() < 1e-100);
        assert!(matches!(chernoff_bound(1.0, 1.0, 0.5, Tail::Upper), Err(BoundsError::InvalidEps(_))));
    }

    #[test]
    fn bracket_examples() {
        let (lo, hi) = expected_weight_bracket(10_000, &BoundsInput::uniform(1.0)).unwrap();
        assert!((lo - 7.35633).abs() < 1e-3 && (hi - 446.256).abs() < 1e-2);
        // Contained in the coarser n^{1/2}/20 .. 5·n^{1/2} corridor.
        assert!(lo >= 100.0 / 20.0 && hi <= 5.0 * 100.0);
        let a = expected_weight_bracket(100, &BoundsInput::uniform(2.0)).unwrap();
        let b = expected_weight_bracket(100_000, &BoundsInput::uniform(2.0)).unwrap();
        assert_eq!(a, b);
    }
}
