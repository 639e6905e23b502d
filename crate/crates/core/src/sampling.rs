//! Point processes on the unit square: i.i.d. samples from a bounded
//! piecewise-constant density and the Poissonized version.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Point, Rect};
use crate::report::fmt17;

pub type SimRng = ChaCha8Rng;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SamplingError {
    #[error("invalid density: {0}")]
    InvalidDensity(String),
    #[error("invalid intensity {0}")]
    InvalidIntensity(f64),
    #[error("internal error: {0}")]
    InternalError(String),
}

/// Piecewise-constant density: `background` everywhere except on the listed
/// closed rectangles, where the first matching rectangle wins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Density {
    background: f64,
    regions: Vec<(Rect, f64)>,
    eps1: f64,
    eps2: f64,
}

const INTEGRAL_TOL: f64 = 1e-12;

impl Density {
    pub fn uniform() -> Self {
        Self {
            background: 1.0,
            regions: Vec::new(),
            eps1: 1.0,
            eps2: 1.0,
        }
    }

    /// ½ on `[0, 0.5]²` and 7/6 elsewhere, so `ε1 = 1/2`, `ε2 = 7/6`.
    pub fn split_example() -> Self {
        Self::piecewise(7.0 / 6.0, vec![(Rect::new(0.0, 0.0, 0.5, 0.5), 0.5)])
            .expect("split example integrates to one")
    }

    pub fn piecewise(background: f64, regions: Vec<(Rect, f64)>) -> Result<Self, SamplingError> {
        let d = Self::unchecked(background, regions)?;
        let total = d.integral();
        if (total - 1.0).abs() > INTEGRAL_TOL {
            return Err(SamplingError::InvalidDensity(format!(
                "integral is {total}, expected 1"
            )));
        }
        if !(d.eps1 > 0.0) {
            return Err(SamplingError::InvalidDensity(format!(
                "density must be bounded below by a positive constant, min is {}",
                d.eps1
            )));
        }
        Ok(d)
    }

    /// Chooses the background value so that the density integrates to one.
    pub fn normalized(regions: Vec<(Rect, f64)>) -> Result<Self, SamplingError> {
        let probe = Self::unchecked(0.0, regions.clone())?;
        let covered = probe.region_area();
        if covered >= 1.0 {
            return Err(SamplingError::InvalidDensity("regions cover the whole square".into()));
        }
        let background = (1.0 - probe.integral()) / (1.0 - covered);
        Self::piecewise(background, regions)
    }

    fn unchecked(background: f64, regions: Vec<(Rect, f64)>) -> Result<Self, SamplingError> {
        if !background.is_finite() || background < 0.0 {
            return Err(SamplingError::InvalidDensity(format!("background {background}")));
        }
        for (r, v) in &regions {
            if !v.is_finite() || *v < 0.0 || !(r.x0 <= r.x1 && r.y0 <= r.y1) {
                return Err(SamplingError::InvalidDensity(format!("region {r:?} value {v}")));
            }
        }
        let mut d = Self {
            background,
            regions,
            eps1: 0.0,
            eps2: 0.0,
        };
        let (lo, hi) = d.pieces().fold((f64::INFINITY, 0.0f64), |(lo, hi), (_, v)| {
            (lo.min(v), hi.max(v))
        });
        d.eps1 = lo;
        d.eps2 = hi;
        Ok(d)
    }

    pub fn eps1(&self) -> f64 {
        self.eps1
    }

    pub fn eps2(&self) -> f64 {
        self.eps2
    }

    pub fn background(&self) -> f64 {
        self.background
    }

    pub fn regions(&self) -> &[(Rect, f64)] {
        &self.regions
    }

    pub fn is_uniform(&self) -> bool {
        self.eps1 == self.eps2
    }

    #[inline]
    pub fn value(&self, p: Point) -> f64 {
        for (r, v) in &self.regions {
            if r.contains(p) {
                return *v;
            }
        }
        self.background
    }

    /// Elementary cells of the coordinate compression with their (constant) value.
    fn pieces(&self) -> impl Iterator<Item = (Rect, f64)> + '_ {
        let mut xs = vec![0.0, 1.0];
        let mut ys = vec![0.0, 1.0];
        for (r, _) in &self.regions {
            let c = r.clip_unit();
            xs.extend([c.x0, c.x1]);
            ys.extend([c.y0, c.y1]);
        }
        for v in [&mut xs, &mut ys] {
            v.sort_by(f64::total_cmp);
            v.dedup();
        }
        let cells: Vec<Rect> = xs
            .windows(2)
            .flat_map(|wx| {
                ys.windows(2)
                    .map(move |wy| Rect::new(wx[0], wy[0], wx[1], wy[1]))
            })
            .filter(|r| r.area() > 0.0)
            .collect();
        cells.into_iter().map(|r| (r, self.value(r.center())))
    }

    fn region_area(&self) -> f64 {
        self.pieces()
            .filter(|(r, _)| self.regions.iter().any(|(q, _)| q.contains(r.center())))
            .map(|(r, _)| r.area())
            .sum()
    }

    pub fn integral(&self) -> f64 {
        self.pieces().map(|(r, v)| r.area() * v).sum()
    }

    /// `∫_rect f`.
    pub fn mass(&self, rect: &Rect) -> f64 {
        let c = rect.clip_unit();
        self.pieces()
            .map(|(r, v)| {
                let w = (r.x1.min(c.x1) - r.x0.max(c.x0)).max(0.0);
                let h = (r.y1.min(c.y1) - r.y0.max(c.y0)).max(0.0);
                w * h * v
            })
            .sum()
    }

    /// The excess `f − level`, renormalized, together with its mass `1 − level`.
    /// The result may vanish on parts of the square, so it is only meant for
    /// sampling (thinning and superposition checks).
    pub fn excess_over(&self, level: f64) -> Option<(Density, f64)> {
        if !(level >= 0.0 && level <= self.eps1) {
            return None;
        }
        let mass = 1.0 - level;
        if mass <= 0.0 {
            return None;
        }
        let regions = self
            .regions
            .iter()
            .map(|(r, v)| (*r, (v - level) / mass))
            .collect();
        Self::unchecked((self.background - level) / mass, regions)
            .ok()
            .map(|d| (d, mass))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Process {
    Binomial { n: usize },
    Poisson { intensity: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    pub points: Vec<Point>,
    pub seed: u64,
    pub process: Process,
}

impl PointSet {
    pub fn from_points(points: Vec<Point>) -> Self {
        let n = points.len();
        Self {
            points,
            seed: 0,
            process: Process::Binomial { n },
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,x,y\n");
        for (i, p) in self.points.iter().enumerate() {
            out.push_str(&format!("{i},{},{}\n", fmt17(p.x), fmt17(p.y)));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let arr: Vec<[f64; 2]> = self.points.iter().map(|p| [p.x, p.y]).collect();
        serde_json::to_string(&arr).expect("finite coordinates serialize")
    }
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for replicate `r` of experiment `e`; distinct `(e, r)` pairs give
/// unrelated streams.
pub fn derive_seed(seed: u64, e: u64, r: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ e) ^ r.rotate_left(17))
}

pub fn rng_from_seed(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

#[inline]
pub fn uniform_in(rect: &Rect, rng: &mut impl Rng) -> Point {
    let x = rect.x0 + rect.width() * rng.random::<f64>();
    let y = rect.y0 + rect.height() * rng.random::<f64>();
    Point::new(x.min(rect.x1), y.min(rect.y1))
}

/// Draws `n` points i.i.d. from `f` by rejection against the envelope `ε2`.
pub fn draw_points(n: usize, f: &Density, rng: &mut impl Rng) -> Result<Vec<Point>, SamplingError> {
    let mut pts = Vec::with_capacity(n);
    let cap = 1_000_000u64.saturating_mul(n as u64);
    let constant = f.is_uniform();
    let unit = Rect::new(0.0, 0.0, 1.0, 1.0);
    let mut tries = 0u64;
    while pts.len() < n {
        if tries >= cap {
            return Err(SamplingError::InternalError(format!(
                "rejection sampler exceeded {cap} proposals"
            )));
        }
        tries += 1;
        let p = uniform_in(&unit, rng);
        if constant || rng.random::<f64>() * f.eps2 < f.value(p) {
            pts.push(p);
        }
    }
    Ok(pts)
}

/// Rejection sampling of `n` uniform points in `rect` that satisfy `keep`.
pub fn draw_uniform_where(
    n: usize,
    rect: &Rect,
    rng: &mut impl Rng,
    keep: impl Fn(Point) -> bool,
) -> Result<Vec<Point>, SamplingError> {
    let mut pts = Vec::with_capacity(n);
    let cap = 1_000_000u64.saturating_mul(n as u64);
    let mut tries = 0u64;
    while pts.len() < n {
        if tries >= cap {
            return Err(SamplingError::InternalError(format!(
                "rejection sampler exceeded {cap} proposals"
            )));
        }
        tries += 1;
        let p = uniform_in(rect, rng);
        if keep(p) {
            pts.push(p);
        }
    }
    Ok(pts)
}

pub fn sample_binomial(n: usize, f: &Density, seed: u64) -> Result<PointSet, SamplingError> {
    let mut rng = rng_from_seed(seed);
    Ok(PointSet {
        points: draw_points(n, f, &mut rng)?,
        seed,
        process: Process::Binomial { n },
    })
}

pub fn poisson_count(mean: f64, rng: &mut impl Rng) -> Result<usize, SamplingError> {
    if !(mean.is_finite() && mean >= 0.0) {
        return Err(SamplingError::InvalidIntensity(mean));
    }
    if mean == 0.0 {
        return Ok(0);
    }
    let dist = Poisson::new(mean).map_err(|_| SamplingError::InvalidIntensity(mean))?;
    Ok(dist.sample(rng) as usize)
}

/// Poisson process with intensity `n·f`: `N ~ Poisson(n)`, then `N` i.i.d. points.
pub fn sample_poisson(n: f64, f: &Density, seed: u64) -> Result<PointSet, SamplingError> {
    if !(n.is_finite() && n > 0.0) {
        return Err(SamplingError::InvalidIntensity(n));
    }
    let mut rng = rng_from_seed(seed);
    let count = poisson_count(n, &mut rng)?;
    Ok(PointSet {
        points: draw_points(count, f, &mut rng)?,
        seed,
        process: Process::Poisson { intensity: n },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn densities_integrate_to_one() {
        assert_eq!(Density::uniform().integral(), 1.0);
        let d = Density::split_example();
        assert!((d.integral() - 1.0).abs() < 1e-12);
        assert_eq!((d.eps1(), d.eps2()), (0.5, 7.0 / 6.0));
        assert!(Density::piecewise(1.0, vec![(Rect::new(0.0, 0.0, 0.5, 0.5), 2.0)]).is_err());
        assert!(Density::piecewise(4.0 / 3.0, vec![(Rect::new(0.0, 0.0, 0.5, 0.5), 0.0)]).is_err());
    }

    #[test]
    fn normalized_background() {
        let d = Density::normalized(vec![(Rect::new(0.2, 0.2, 0.4, 0.4), 3.0)]).unwrap();
        assert!((d.background() - (1.0 - 0.12) / 0.96).abs() < 1e-12);
        assert!((d.mass(&Rect::new(0.2, 0.2, 0.4, 0.4)) - 0.12).abs() < 1e-12);
    }

    #[test]
    fn empty_and_deterministic() {
        let f = Density::uniform();
        assert!(sample_binomial(0, &f, 1).unwrap().is_empty());
        let a = sample_binomial(500, &Density::split_example(), 9).unwrap();
        let b = sample_binomial(500, &Density::split_example(), 9).unwrap();
        assert_eq!(a, b);
        assert!(a.points.iter().all(|p| p.in_unit_square()));
        let c = sample_binomial(500, &Density::split_example(), 10).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn derived_seeds_differ() {
        let mut seen = std::collections::HashSet::new();
        for e in 0..20 {
            for r in 0..50 {
                assert!(seen.insert(derive_seed(7, e, r)));
            }
        }
    }

    #[test]
    fn tiny_poisson_is_usually_empty() {
        let empty = (0..200)
            .filter(|&s| sample_poisson(0.001, &Density::uniform(), s).unwrap().is_empty())
            .count();
        assert!(empty >= 195);
    }

    #[test]
    fn csv_and_json_shapes() {
        let ps = PointSet::from_points(vec![Point::new(0.25, 0.5), Point::new(1.0 / 3.0, 0.0)]);
        let csv = ps.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "index,x,y");
        assert_eq!(lines.len(), 3);
        let x: f64 = lines[2].split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(x, 1.0 / 3.0);
        let back: Vec<[f64; 2]> = serde_json::from_str(&ps.to_json()).unwrap();
        assert_eq!(back, vec![[0.25, 0.5], [1.0 / 3.0, 0.0]]);
    }
}
