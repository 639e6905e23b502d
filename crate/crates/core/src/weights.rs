//! Location-dependent edge weights `h(u, v)` with `c1·d ≤ h ≤ c2·d`.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{dist, Point, Rect};
use crate::sampling::{rng_from_seed, uniform_in};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeightError {
    #[error("degenerate edge: both endpoints are ({x}, {y})")]
    DegenerateEdge { x: f64, y: f64 },
    #[error("invalid weight constants: {0}")]
    InvalidConstants(String),
    #[error("equivalence violated at {u:?}–{v:?}: h/d = {ratio}")]
    EquivalenceViolation { u: Point, v: Point, ratio: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeightKind {
    Euclidean,
    Hotspot(Arc<HotspotLayout>),
    /// `d(u,v) + λ·|d(u,0) − d(v,0)|`, anchored at the corner `(0,0)`.
    Shifted { lambda: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightSpec {
    pub kind: WeightKind,
    pub c1: f64,
    pub c2: f64,
    pub alpha: f64,
    /// `h(a·u, a·v) = a·h(u, v)`.
    pub homogeneous: bool,
    /// `h(u + b, v + b) ≤ h0·h(u, v)` when present.
    pub h0: Option<f64>,
}

pub const SHIFT_ORIGIN: Point = Point::new(0.0, 0.0);

/// `h^α`, with the two common exponents special-cased.
#[inline]
pub fn pow_alpha(h: f64, alpha: f64) -> f64 {
    if alpha == 1.0 {
        h
    } else if alpha == 2.0 {
        h * h
    } else {
        h.powf(alpha)
    }
}

impl WeightSpec {
    pub fn euclidean(alpha: f64) -> Self {
        Self {
            kind: WeightKind::Euclidean,
            c1: 1.0,
            c2: 1.0,
            alpha,
            homogeneous: true,
            h0: Some(1.0),
        }
    }

    pub fn shifted(lambda: f64, alpha: f64) -> Self {
        Self {
            kind: WeightKind::Shifted { lambda },
            c1: 1.0,
            c2: 1.0 + lambda,
            alpha,
            homogeneous: true,
            h0: Some(1.0 + lambda),
        }
    }

    /// Defaults `c2 = 1`, `c1 = 1/(16K)`.
    pub fn hotspot(layout: Arc<HotspotLayout>, alpha: f64) -> Self {
        let c1 = 1.0 / (16.0 * layout.k as f64);
        Self::hotspot_with(layout, c1, 1.0, alpha).expect("default constants are admissible")
    }

    pub fn hotspot_with(
        layout: Arc<HotspotLayout>,
        c1: f64,
        c2: f64,
        alpha: f64,
    ) -> Result<Self, WeightError> {
        let bound = c2 / (8.0 * layout.k as f64);
        if !(c1 > 0.0 && c1 < bound) {
            return Err(WeightError::InvalidConstants(format!(
                "hotspot weights need 0 < c1 < c2/(8K) = {bound}, got c1 = {c1}"
            )));
        }
        Ok(Self {
            kind: WeightKind::Hotspot(layout),
            c1,
            c2,
            alpha,
            homogeneous: false,
            h0: None,
        })
    }

    pub fn with_alpha(&self, alpha: f64) -> Self {
        Self {
            alpha,
            ..self.clone()
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            WeightKind::Euclidean => "euclidean",
            WeightKind::Hotspot(_) => "hotspot",
            WeightKind::Shifted { .. } => "shifted",
        }
    }

    /// Base weight `h(u, v)`.
    pub fn weight(&self, u: Point, v: Point) -> Result<f64, WeightError> {
        if u == v {
            return Err(WeightError::DegenerateEdge { x: u.x, y: u.y });
        }
        let d = dist(u, v);
        Ok(match &self.kind {
            WeightKind::Euclidean => d,
            WeightKind::Hotspot(layout) => {
                if layout.is_central(u) || layout.is_central(v) {
                    self.c1 * d
                } else {
                    self.c2 * d
                }
            }
            WeightKind::Shifted { lambda } => {
                d + lambda * (dist(u, SHIFT_ORIGIN) - dist(v, SHIFT_ORIGIN)).abs()
            }
        })
    }

    pub fn power_weight(&self, u: Point, v: Point) -> Result<f64, WeightError> {
        Ok(pow_alpha(self.weight(u, v)?, self.alpha))
    }

    /// Per-point precomputation for repeated evaluation over a fixed point set.
    pub fn prepare<'a>(&self, points: &'a [Point]) -> Prepared<'a> {
        match &self.kind {
            WeightKind::Euclidean => Prepared::Euclidean(EuclidW { p: points }),
            WeightKind::Hotspot(layout) => Prepared::Hotspot(HotspotW {
                p: points,
                hot: points.iter().map(|&q| layout.is_central(q)).collect(),
                c1: self.c1,
                c2: self.c2,
            }),
            WeightKind::Shifted { lambda } => Prepared::Shifted(ShiftedW {
                p: points,
                r: points.iter().map(|&q| dist(q, SHIFT_ORIGIN)).collect(),
                lambda: *lambda,
            }),
        }
    }
}

/// Index-based base-weight evaluator.
pub trait EdgeWeight: Sync {
    fn len(&self) -> usize;
    fn w(&self, i: usize, j: usize) -> f64;
    fn point(&self, i: usize) -> Point;
}

pub struct EuclidW<'a> {
    p: &'a [Point],
}

pub struct HotspotW<'a> {
    p: &'a [Point],
    hot: Vec<bool>,
    c1: f64,
    c2: f64,
}

pub struct ShiftedW<'a> {
    p: &'a [Point],
    r: Vec<f64>,
    lambda: f64,
}

impl EdgeWeight for EuclidW<'_> {
    fn len(&self) -> usize {
        self.p.len()
    }
    #[inline(always)]
    fn w(&self, i: usize, j: usize) -> f64 {
        dist(self.p[i], self.p[j])
    }
    fn point(&self, i: usize) -> Point {
        self.p[i]
    }
}

impl EdgeWeight for HotspotW<'_> {
    fn len(&self) -> usize {
        self.p.len()
    }
    #[inline(always)]
    fn w(&self, i: usize, j: usize) -> f64 {
        let d = dist(self.p[i], self.p[j]);
        if self.hot[i] || self.hot[j] {
            self.c1 * d
        } else {
            self.c2 * d
        }
    }
    fn point(&self, i: usize) -> Point {
        self.p[i]
    }
}

impl EdgeWeight for ShiftedW<'_> {
    fn len(&self) -> usize {
        self.p.len()
    }
    #[inline(always)]
    fn w(&self, i: usize, j: usize) -> f64 {
        dist(self.p[i], self.p[j]) + self.lambda * (self.r[i] - self.r[j]).abs()
    }
    fn point(&self, i: usize) -> Point {
        self.p[i]
    }
}

pub enum Prepared<'a> {
    Euclidean(EuclidW<'a>),
    Hotspot(HotspotW<'a>),
    Shifted(ShiftedW<'a>),
}

/// Runs `$body` with `$w` bound to the concrete evaluator, so hot loops are
/// monomorphized per weight kind.
#[macro_export]
macro_rules! with_prepared {
    ($prep:expr, $w:ident => $body:expr) => {
        match $prep {
            $crate::weights::Prepared::Euclidean($w) => $body,
            $crate::weights::Prepared::Hotspot($w) => $body,
            $crate::weights::Prepared::Shifted($w) => $body,
        }
    };
}

/// One level of the hotspot construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HotspotLevel {
    pub level: usize,
    /// `n_i = D·i³`.
    pub n_i: u64,
    /// Cell side `1/√n_i`.
    pub cell: f64,
    /// `q_i = (2K−1)/√n_i`.
    pub q: f64,
    /// `10q_i × 10q_i`, on the diagonal.
    pub big: Rect,
    /// `q_i × q_i`, centred in `big`.
    pub square: Rect,
    /// `S_i(0)`.
    pub central: Rect,
    /// `S_i(1..4K−4)`.
    pub boundary: Vec<Rect>,
}

impl HotspotLevel {
    /// Central cell followed by the boundary cells.
    pub fn planted_cells(&self) -> Vec<Rect> {
        std::iter::once(self.central)
            .chain(self.boundary.iter().copied())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HotspotLayout {
    pub k: usize,
    pub d: u64,
    pub levels: Vec<HotspotLevel>,
}

/// `ζ(3/2)` from a partial sum plus an Euler–Maclaurin tail.
pub fn zeta_three_halves() -> f64 {
    let s = 1.5f64;
    let n = 1000u32;
    let partial: f64 = (1..n).rev().map(|k| (k as f64).powf(-s)).sum();
    let nf = n as f64;
    let tail = nf.powf(1.0 - s) / (s - 1.0) + 0.5 * nf.powf(-s) + s * nf.powf(-s - 1.0) / 12.0
        - s * (s + 1.0) * (s + 2.0) * nf.powf(-s - 3.0) / 720.0;
    partial + tail
}

/// Smallest integer `D` with `Σ_i 10·q_i ≤ 1`.
pub fn hotspot_d(k: usize) -> u64 {
    let x = 10.0 * (2 * k - 1) as f64 * zeta_three_halves();
    (x * x).ceil() as u64
}

impl HotspotLayout {
    pub fn build(k: usize, levels: usize) -> Result<Self, WeightError> {
        if k < 2 || levels == 0 {
            return Err(WeightError::InvalidConstants(format!(
                "hotspot layout needs K >= 2 and at least one level (K = {k}, levels = {levels})"
            )));
        }
        let d = hotspot_d(k);
        let width = (2 * k - 1) as f64;
        let mut corner = 0.0;
        let mut out = Vec::with_capacity(levels);
        for i in 1..=levels {
            let n_i = d * (i as u64).pow(3);
            let cell = 1.0 / (n_i as f64).sqrt();
            let q = width * cell;
            let big = Rect::square(corner, corner, 10.0 * q);
            let sq0 = corner + 4.5 * q;
            let square = Rect::square(sq0, sq0, q);
            let at = |a: usize, b: usize| {
                Rect::square(sq0 + a as f64 * cell, sq0 + b as f64 * cell, cell)
            };
            let central = at(k - 1, k - 1);
            let last = 2 * k - 2;
            let mut boundary = Vec::with_capacity(4 * (k - 1));
            for a in (0..=last).step_by(2) {
                for b in (0..=last).step_by(2) {
                    if a == 0 || b == 0 || a == last || b == last {
                        boundary.push(at(a, b));
                    }
                }
            }
            out.push(HotspotLevel {
                level: i,
                n_i,
                cell,
                q,
                big,
                square,
                central,
                boundary,
            });
            corner += 10.0 * q;
        }
        let layout = Self {
            k,
            d,
            levels: out,
        };
        layout.verify()?;
        Ok(layout)
    }

    pub fn level(&self, i: usize) -> Option<&HotspotLevel> {
        self.levels.get(i.checked_sub(1)?)
    }

    #[inline]
    pub fn is_central(&self, p: Point) -> bool {
        self.levels
            .iter()
            .any(|l| l.big.contains(p) && l.central.contains(p))
    }

    /// Machine check of the structural invariants.
    pub fn verify(&self) -> Result<(), WeightError> {
        let bad = |m: String| Err(WeightError::InvalidConstants(m));
        let unit = Rect::new(0.0, 0.0, 1.0, 1.0);
        let total: f64 = self.levels.iter().map(|l| l.big.width()).sum();
        if total > 1.0 {
            return bad(format!("big squares span {total} > 1 along the diagonal"));
        }
        for (a, la) in self.levels.iter().enumerate() {
            if !unit.contains_rect(&la.big) {
                return bad(format!("level {} leaves the unit square", la.level));
            }
            for lb in &self.levels[a + 1..] {
                if la.big.interiors_overlap(&lb.big) {
                    return bad(format!("levels {} and {} overlap", la.level, lb.level));
                }
            }
            if la.boundary.len() != 4 * (self.k - 1) {
                return bad(format!("level {} has {} boundary cells", la.level, la.boundary.len()));
            }
            let tol = 1e-9 * la.cell;
            let cells = la.planted_cells();
            for (x, cx) in cells.iter().enumerate() {
                let inside = cx.x0 >= la.square.x0 - tol
                    && cx.y0 >= la.square.y0 - tol
                    && cx.x1 <= la.square.x1 + tol
                    && cx.y1 <= la.square.y1 + tol;
                if !inside {
                    return bad(format!("level {} cell escapes S_i", la.level));
                }
                for cy in &cells[x + 1..] {
                    let sep = cx.x1 <= cy.x0 + tol
                        || cy.x1 <= cx.x0 + tol
                        || cx.y1 <= cy.y0 + tol
                        || cy.y1 <= cx.y0 + tol;
                    if !sep {
                        return bad(format!("level {} cells overlap", la.level));
                    }
                }
            }
            for c in &la.boundary {
                let on_side = (c.x0 - la.square.x0).abs() <= tol
                    || (c.y0 - la.square.y0).abs() <= tol
                    || (la.square.x1 - c.x1).abs() <= tol
                    || (la.square.y1 - c.y1).abs() <= tol;
                if !on_side {
                    return bad(format!("level {} boundary cell off the side band", la.level));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("layout serializes")
    }
}

/// Empirical `(min, max)` of `h/d` over random pairs; errors if outside `[c1, c2]`.
pub fn equivalence_audit(
    spec: &WeightSpec,
    samples: usize,
    seed: u64,
) -> Result<(f64, f64), WeightError> {
    let mut rng = rng_from_seed(seed);
    let unit = Rect::new(0.0, 0.0, 1.0, 1.0);
    let hot_cells: Vec<Rect> = match &spec.kind {
        WeightKind::Hotspot(l) => l.levels.iter().map(|x| x.central).collect(),
        _ => Vec::new(),
    };
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let slack = 1e-12;
    for _ in 0..samples.max(1) {
        // Half the hotspot pairs start in a central cell so both branches get exercised.
        let u = if !hot_cells.is_empty() && rng.random::<bool>() {
            uniform_in(&hot_cells[rng.random_range(0..hot_cells.len())], &mut rng)
        } else {
            uniform_in(&unit, &mut rng)
        };
        let v = uniform_in(&unit, &mut rng);
        if u == v {
            continue;
        }
        let ratio = spec.weight(u, v)? / dist(u, v);
        if ratio < spec.c1 * (1.0 - slack) || ratio > spec.c2 * (1.0 + slack) {
            return Err(WeightError::EquivalenceViolation { u, v, ratio });
        }
        lo = lo.min(ratio);
        hi = hi.max(ratio);
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_examples() {
        let e = WeightSpec::euclidean(1.0);
        assert_eq!(e.weight(Point::new(0.0, 0.0), Point::new(1.0, 0.0)).unwrap(), 1.0);
        let s = WeightSpec::shifted(0.5, 1.0);
        let w = s.weight(Point::new(1.0, 0.0), Point::new(0.0, 1.0)).unwrap();
        assert!((w - 2f64.sqrt()).abs() < 1e-15);
        let w = s.weight(Point::new(1.0, 0.0), Point::new(0.5, 0.0)).unwrap();
        assert!((w - 0.75).abs() < 1e-15);
        assert!(matches!(
            e.weight(Point::new(0.3, 0.3), Point::new(0.3, 0.3)),
            Err(WeightError::DegenerateEdge { .. })
        ));
    }

    #[test]
    fn zeta_and_d() {
        assert!((zeta_three_halves() - 2.612_375_348_685_488).abs() < 1e-12);
        assert_eq!(hotspot_d(2), 6143);
        let x: f64 = 50.0 * 2.612_375_348_685_488;
        assert_eq!(hotspot_d(3), (x * x).ceil() as u64);
    }

    #[test]
    fn layout_level_one() {
        let l = HotspotLayout::build(2, 20).unwrap();
        let l1 = l.level(1).unwrap();
        assert!((l1.q - 3.0 / (l.d as f64).sqrt()).abs() < 1e-15);
        assert!((l1.big.width() - 30.0 / (l.d as f64).sqrt()).abs() < 1e-15);
        assert_eq!((l1.big.x0, l1.big.y0), (0.0, 0.0));
        assert_eq!(l1.boundary.len(), 4);
        assert!(l.is_central(l1.central.center()));
        assert!(!l.is_central(l1.boundary[0].center()));
        for k in 2..6 {
            HotspotLayout::build(k, 20).unwrap().verify().unwrap();
        }
    }

    #[test]
    fn hotspot_constants() {
        let l = Arc::new(HotspotLayout::build(2, 3).unwrap());
        let s = WeightSpec::hotspot(l.clone(), 1.0);
        assert_eq!((s.c1, s.c2), (1.0 / 32.0, 1.0));
        assert!(WeightSpec::hotspot_with(l, 1.0 / 16.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn audits() {
        assert_eq!(equivalence_audit(&WeightSpec::euclidean(1.0), 1000, 1).unwrap(), (1.0, 1.0));
        let (lo, hi) = equivalence_audit(&WeightSpec::shifted(0.5, 1.0), 1000, 2).unwrap();
        assert!(lo >= 1.0 && hi <= 1.5);
        let l = Arc::new(HotspotLayout::build(2, 3).unwrap());
        let s = WeightSpec::hotspot(l, 1.0);
        let (lo, hi) = equivalence_audit(&s, 2000, 3).unwrap();
        assert_eq!((lo, hi), (s.c1, s.c2));
    }

    #[test]
    fn prepared_matches_weight() {
        let l = Arc::new(HotspotLayout::build(2, 3).unwrap());
        let lv = l.level(1).unwrap().clone();
        let pts = vec![
            lv.central.center(),
            lv.boundary[1].center(),
            Point::new(0.9, 0.1),
            Point::new(0.2, 0.7),
        ];
        for spec in [
            WeightSpec::euclidean(1.0),
            WeightSpec::shifted(0.5, 2.0),
            WeightSpec::hotspot(l, 1.0),
        ] {
            let prep = spec.prepare(&pts);
            for i in 0..pts.len() {
                for j in 0..pts.len() {
                    if i != j {
                        let a = crate::with_prepared!(&prep, w => w.w(i, j));
                        assert_eq!(a.to_bits(), spec.weight(pts[i], pts[j]).unwrap().to_bits());
                    }
                }
            }
        }
    }
}
