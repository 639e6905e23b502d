//! Planar primitives, the square tiling used by the deviation estimates, and
//! boustrophedon ("snake") cell ordering.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn in_unit_square(&self) -> bool {
        self.is_finite() && (0.0..=1.0).contains(&self.x) && (0.0..=1.0).contains(&self.y)
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self::new(a * self.x, a * self.y)
    }

    pub fn translated(&self, b: Point) -> Self {
        Self::new(self.x + b.x, self.y + b.y)
    }
}

/// Euclidean distance. Every weight function in the crate goes through this
/// exact formula so that prepared evaluators stay bit-identical.
#[inline]
pub fn dist(p: Point, q: Point) -> f64 {
    let dx = p.x - q.x;
    let dy = p.y - q.y;
    (dx * dx + dy * dy).sqrt()
}

/// Closed axis-aligned rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Rect {
    pub const fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Self { x0, y0, x1, y1 }
    }

    pub fn square(x0: f64, y0: f64, side: f64) -> Self {
        Self::new(x0, y0, x0 + side, y0 + side)
    }

    #[inline]
    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.x0 && p.x <= self.x1 && p.y >= self.y0 && p.y <= self.y1
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    pub fn area(&self) -> f64 {
        self.width().max(0.0) * self.height().max(0.0)
    }

    pub fn center(&self) -> Point {
        Point::new(0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))
    }

    /// True when the interiors overlap (shared boundaries do not count).
    pub fn interiors_overlap(&self, other: &Rect) -> bool {
        self.x0 < other.x1 && other.x0 < self.x1 && self.y0 < other.y1 && other.y0 < self.y1
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        other.x0 >= self.x0 && other.x1 <= self.x1 && other.y0 >= self.y0 && other.y1 <= self.y1
    }

    pub fn clip_unit(&self) -> Rect {
        Rect::new(
            self.x0.clamp(0.0, 1.0),
            self.y0.clamp(0.0, 1.0),
            self.x1.clamp(0.0, 1.0),
            self.y1.clamp(0.0, 1.0),
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("no admissible A in [{a_target}, {a_target} + 1/ln {n}]; nearest admissible n is {nearest_n}")]
    NoAdmissibleA {
        n: usize,
        a_target: f64,
        nearest_n: usize,
    },
    #[error("point ({x}, {y}) lies outside the unit square")]
    OutOfDomain { x: f64, y: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// 1-based position of a cell in snake order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellIndex(pub usize);

/// Grid of `s × s` congruent squares of side `A_n/√n = 1/s` covering the unit square.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tiling {
    pub n: usize,
    pub a_target: f64,
    pub a_n: f64,
    pub s: usize,
}

/// Largest integer `s` with `s·a ≤ r`, robust against floor rounding.
fn floor_ratio(r: f64, a: f64) -> usize {
    let mut s = (r / a).floor().max(0.0) as usize;
    while s > 0 && (s as f64) * a > r {
        s -= 1;
    }
    while ((s + 1) as f64) * a <= r {
        s += 1;
    }
    s
}

fn admissible(n: usize, a_target: f64) -> Option<usize> {
    if n < 3 {
        return None;
    }
    let root = (n as f64).sqrt();
    let s = floor_ratio(root, a_target);
    if s == 0 {
        return None;
    }
    let a_n = root / s as f64;
    let upper = a_target + 1.0 / (n as f64).ln();
    (a_n <= upper).then_some(s)
}

pub fn build_tiling(n: usize, a_target: f64) -> Result<Tiling, GeometryError> {
    if n < 3 {
        return Err(GeometryError::InvalidInput(format!("tiling needs n >= 3, got {n}")));
    }
    if !(a_target.is_finite() && a_target > 0.0) {
        return Err(GeometryError::InvalidInput(format!("A must be positive, got {a_target}")));
    }
    match admissible(n, a_target) {
        Some(s) => Ok(Tiling {
            n,
            a_target,
            a_n: (n as f64).sqrt() / s as f64,
            s,
        }),
        None => {
            let nearest_n = (1..=n.max(16) * 4)
                .flat_map(|d| [n.checked_sub(d), n.checked_add(d)])
                .flatten()
                .find(|&m| admissible(m, a_target).is_some())
                .unwrap_or(0);
            Err(GeometryError::NoAdmissibleA {
                n,
                a_target,
                nearest_n,
            })
        }
    }
}

impl Tiling {
    /// Cell side length `A_n/√n`, represented as `1/s` so the grid closes exactly.
    pub fn cell_side(&self) -> f64 {
        1.0 / self.s as f64
    }

    pub fn num_cells(&self) -> usize {
        self.s * self.s
    }

    /// (column from the left, row from the top) of a 1-based snake index.
    pub fn coords(&self, c: CellIndex) -> (usize, usize) {
        let k = c.0 - 1;
        let col = k / self.s;
        let off = k % self.s;
        let row = if col % 2 == 0 { off } else { self.s - 1 - off };
        (col, row)
    }

    pub fn index_of(&self, col: usize, row: usize) -> CellIndex {
        let off = if col % 2 == 0 { row } else { self.s - 1 - row };
        CellIndex(col * self.s + off + 1)
    }

    pub fn cell_rect(&self, c: CellIndex) -> Rect {
        let (col, row) = self.coords(c);
        let h = self.cell_side();
        let y1 = 1.0 - row as f64 * h;
        Rect::new(col as f64 * h, y1 - h, (col + 1) as f64 * h, y1)
    }

    /// Snake index of the cell containing `p`; points on a shared boundary go
    /// to the cell with the larger index.
    pub fn cell_of(&self, p: Point) -> Result<CellIndex, GeometryError> {
        if !p.in_unit_square() {
            return Err(GeometryError::OutOfDomain { x: p.x, y: p.y });
        }
        let s = self.s;
        // Column indices increase left to right, so floor already favours the right cell.
        let col = ((p.x * s as f64).floor() as usize).min(s - 1);
        let t = p.y * s as f64;
        let below = t.floor();
        // Row counted from the bottom.
        let b = if col % 2 == 0 && t == below && t > 0.0 {
            // Downward column: the lower cell carries the larger index.
            below as usize - 1
        } else {
            below as usize
        }
        .min(s - 1);
        Ok(self.index_of(col, s - 1 - b))
    }

    /// Snake enumeration `1..=s²`; consecutive entries share an edge.
    pub fn snake_order(&self) -> Vec<CellIndex> {
        (1..=self.num_cells()).map(CellIndex).collect()
    }

    /// Cells sharing an edge or a corner with `c` (boundary cells have fewer).
    pub fn corner_neighbors(&self, c: CellIndex) -> Vec<CellIndex> {
        let (col, row) = self.coords(c);
        let mut out = Vec::with_capacity(8);
        for dc in -1i64..=1 {
            for dr in -1i64..=1 {
                if dc == 0 && dr == 0 {
                    continue;
                }
                let cc = col as i64 + dc;
                let rr = row as i64 + dr;
                if cc >= 0 && rr >= 0 && (cc as usize) < self.s && (rr as usize) < self.s {
                    out.push(self.index_of(cc as usize, rr as usize));
                }
            }
        }
        out
    }
}

/// Same as [`Tiling::snake_order`]; kept as a free function for symmetry with the
/// other grid operations.
pub fn snake_neighbors(t: &Tiling) -> Vec<CellIndex> {
    t.snake_order()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dist_examples() {
        assert_eq!(dist(Point::new(0.0, 0.0), Point::new(0.0, 0.0)), 0.0);
        assert_eq!(dist(Point::new(0.0, 0.0), Point::new(3.0, 4.0)), 5.0);
        assert!((dist(Point::new(0.0, 0.0), Point::new(1.0, 1.0)) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn tiling_examples() {
        let t = build_tiling(100, 1.0).unwrap();
        assert_eq!((t.s, t.a_n), (10, 1.0));
        let t = build_tiling(90, 1.0).unwrap();
        assert_eq!(t.s, 9);
        assert!((t.a_n - 90f64.sqrt() / 9.0).abs() < 1e-15);
        assert!((t.a_n - 1.05409).abs() < 1e-5);
        let t = build_tiling(10_000, 2.0).unwrap();
        assert_eq!((t.s, t.a_n), (50, 2.0));
    }

    #[test]
    fn tiling_rejects_inadmissible() {
        // √15/2 ≈ 1.94 forces s = 1, and A_n = 3.87 overshoots 2 + 1/ln 15.
        let err = build_tiling(15, 2.0).unwrap_err();
        match err {
            GeometryError::NoAdmissibleA { nearest_n, .. } => {
                assert!(build_tiling(nearest_n, 2.0).is_ok());
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(build_tiling(2, 1.0), Err(GeometryError::InvalidInput(_))));
    }

    #[test]
    fn cell_of_examples() {
        let t = build_tiling(100, 1.0).unwrap();
        assert_eq!(t.cell_of(Point::new(0.0001, 0.9999)).unwrap(), CellIndex(1));
        for k in 1..=100 {
            let c = t.cell_rect(CellIndex(k)).center();
            assert_eq!(t.cell_of(c).unwrap(), CellIndex(k));
        }
        // Cells 4 and 5 are stacked in the first (downward) column.
        assert_eq!(t.cell_of(Point::new(0.05, 0.6)).unwrap(), CellIndex(5));
        // Cells 15 and 16 are stacked in the second (upward) column.
        assert_eq!(t.coords(CellIndex(15)), (1, 5));
        assert_eq!(t.cell_of(Point::new(0.15, 0.5)).unwrap(), CellIndex(16));
        // Column boundary: larger index is always the right column.
        assert_eq!(t.cell_of(Point::new(0.1, 0.95)).unwrap(), CellIndex(20));
        assert!(t.cell_of(Point::new(1.5, 0.5)).is_err());
        assert!(t.cell_of(Point::new(f64::NAN, 0.5)).is_err());
        assert_eq!(t.cell_of(Point::new(1.0, 1.0)).unwrap(), t.index_of(9, 0));
        assert_eq!(t.cell_of(Point::new(0.0, 0.0)).unwrap(), CellIndex(10));
    }

    #[test]
    fn small_snakes() {
        let t = Tiling { n: 4, a_target: 1.0, a_n: 1.0, s: 2 };
        let order = snake_neighbors(&t);
        assert_eq!(order, vec![CellIndex(1), CellIndex(2), CellIndex(3), CellIndex(4)]);
        assert_eq!(t.coords(CellIndex(2)), (0, 1));
        assert_eq!(t.coords(CellIndex(3)), (1, 1));
        let t = Tiling { n: 9, a_target: 1.0, a_n: 1.0, s: 3 };
        assert_eq!(snake_neighbors(&t).len(), 9);
    }

    #[test]
    fn corner_neighbor_counts() {
        let t = Tiling { n: 9, a_target: 1.0, a_n: 1.0, s: 3 };
        assert_eq!(t.corner_neighbors(CellIndex(1)).len(), 3);
        assert_eq!(t.corner_neighbors(t.index_of(1, 1)).len(), 8);
        assert_eq!(t.corner_neighbors(t.index_of(1, 0)).len(), 5);
    }
}
