//! Bonded-set geometry on the unit torus, plus small vector helpers.

use crate::error::{BlisterError, Result};

/// Tolerance for coincident interval/rectangle boundaries on the torus.
pub const TORUS_TOL: f64 = 1e-12;

/// Wrap a coordinate to [0, 1).
pub fn wrap_unit(x: f64) -> f64 {
    let y = x - x.floor();
    if y >= 1.0 {
        0.0
    } else {
        y
    }
}

/// Minimal 2D vector used by the 2D constructions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }
    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }
    /// Rotate by +90 degrees.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }
    pub fn scale(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }
}

impl std::ops::Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}
impl std::ops::Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

/// A closed sub-interval of the unit torus, stored unwrapped within [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub start: f64,
    pub end: f64,
}

impl Interval {
    pub fn len(&self) -> f64 {
        self.end - self.start
    }
    pub fn contains(&self, x: f64, tol: f64) -> bool {
        x >= self.start - tol && x <= self.end + tol
    }
}

/// The bonded region of a 1D configuration: disjoint closed intervals on
/// the unit torus with prescribed total measure.
#[derive(Debug, Clone)]
pub struct BondedSet1D {
    intervals: Vec<Interval>,
    theta: f64,
}

impl BondedSet1D {
    /// Build from raw intervals (pairs may wrap the seam; wrapping pairs are
    /// split). `theta` is the configured bonded fraction the set must match
    /// to within `1e-12`.
    pub fn new(raw: &[(f64, f64)], theta: f64) -> Result<Self> {
        let mut intervals = Vec::new();
        for &(a, b) in raw {
            if !(a.is_finite() && b.is_finite()) {
                return Err(BlisterError::Geometry("non-finite interval".into()));
            }
            let len = b - a;
            if len <= 0.0 {
                return Err(BlisterError::Geometry(format!(
                    "interval [{a}, {b}] must have positive length"
                )));
            }
            if len > 1.0 + TORUS_TOL {
                return Err(BlisterError::Geometry(format!(
                    "interval [{a}, {b}] longer than the torus"
                )));
            }
            let s = wrap_unit(a);
            let e = s + len;
            if e <= 1.0 + TORUS_TOL {
                intervals.push(Interval {
                    start: s,
                    end: e.min(1.0),
                });
            } else {
                intervals.push(Interval { start: s, end: 1.0 });
                intervals.push(Interval {
                    start: 0.0,
                    end: e - 1.0,
                });
            }
        }
        intervals.sort_by(|p, q| p.start.total_cmp(&q.start));
        for w in intervals.windows(2) {
            if w[1].start < w[0].end - TORUS_TOL {
                return Err(BlisterError::Geometry(format!(
                    "intervals [{}, {}] and [{}, {}] overlap",
                    w[0].start, w[0].end, w[1].start, w[1].end
                )));
            }
        }
        let total: f64 = intervals.iter().map(Interval::len).sum();
        if (total - theta).abs() > 1e-12 {
            return Err(BlisterError::Geometry(format!(
                "total measure {total} does not match configured theta {theta}"
            )));
        }
        Ok(Self { intervals, theta })
    }

    /// A single interval `[start, start + theta]`.
    pub fn single(start: f64, theta: f64) -> Result<Self> {
        Self::new(&[(start, start + theta)], theta)
    }

    /// `n` equispaced bonded intervals matching the periodic construction:
    /// cell `i` of length `l = 1/n` carries the bonded part `[(1-theta) l, l]`.
    pub fn equispaced(n: usize, theta: f64) -> Result<Self> {
        if n == 0 {
            return Err(BlisterError::Geometry("need at least one interval".into()));
        }
        let l = 1.0 / n as f64;
        let raw: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let x0 = i as f64 * l;
                (x0 + (1.0 - theta) * l, x0 + l)
            })
            .collect();
        Self::new(&raw, theta)
    }

    /// Configured bonded fraction.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// The disjoint intervals, ascending.
    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    /// Total measure (sum of lengths).
    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(Interval::len).sum()
    }

    /// Membership test with the torus boundary tolerance.
    pub fn contains(&self, x: f64) -> bool {
        let x = wrap_unit(x);
        self.intervals.iter().any(|iv| iv.contains(x, TORUS_TOL))
            || self
                .intervals
                .iter()
                .any(|iv| iv.contains(x + 1.0, TORUS_TOL))
    }

    /// Translate every interval by `dx` on the torus.
    pub fn translated(&self, dx: f64) -> Self {
        let raw: Vec<(f64, f64)> = self
            .intervals
            .iter()
            .map(|iv| (iv.start + dx, iv.end + dx))
            .collect();
        Self::new(&raw, self.theta).expect("translation preserves validity")
    }

    /// All interval endpoints, for quadrature splitting.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts = Vec::with_capacity(2 * self.intervals.len());
        for iv in &self.intervals {
            pts.push(iv.start);
            pts.push(iv.end);
        }
        pts
    }
}

/// An axis-aligned rectangle (used for the 2D bonded regions).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Rect {
    pub fn area(&self) -> f64 {
        (self.x1 - self.x0) * (self.y1 - self.y0)
    }
    pub fn center(&self) -> Vec2 {
        Vec2::new(0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))
    }
    pub fn contains(&self, p: Vec2, tol: f64) -> bool {
        p.x >= self.x0 - tol && p.x <= self.x1 + tol && p.y >= self.y0 - tol && p.y <= self.y1 + tol
    }
    fn overlaps(&self, o: &Rect) -> bool {
        self.x0 < o.x1 - TORUS_TOL
            && o.x0 < self.x1 - TORUS_TOL
            && self.y0 < o.y1 - TORUS_TOL
            && o.y0 < self.y1 - TORUS_TOL
    }
}

/// The bonded region of a 2D configuration: disjoint axis-aligned
/// rectangles, one per periodic cell, on the unit torus.
#[derive(Debug, Clone)]
pub struct BondedSet2D {
    rects: Vec<Rect>,
    theta: f64,
}

impl BondedSet2D {
    /// Build from explicit rectangles. Total area must match `theta`
    /// to within `1e-10` (the ridge-lift correction of the lattice
    /// construction is resolved before this type is built).
    pub fn new(rects: Vec<Rect>, theta: f64) -> Result<Self> {
        for r in &rects {
            if r.area() <= 0.0 {
                return Err(BlisterError::Geometry(format!(
                    "degenerate rectangle {r:?}"
                )));
            }
        }
        for i in 0..rects.len() {
            for j in (i + 1)..rects.len() {
                if rects[i].overlaps(&rects[j]) {
                    return Err(BlisterError::Geometry(format!(
                        "rectangles {i} and {j} overlap"
                    )));
                }
            }
        }
        let total: f64 = rects.iter().map(Rect::area).sum();
        if (total - theta).abs() > 1e-10 {
            return Err(BlisterError::Geometry(format!(
                "total area {total} does not match configured theta {theta}"
            )));
        }
        Ok(Self { rects, theta })
    }

    /// One square `[inset, inset+side]^2` per periodic cell of size `l = 1/n`.
    pub fn cell_squares(n: usize, inset: f64, side: f64, theta: f64) -> Result<Self> {
        let l = 1.0 / n as f64;
        let mut rects = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let ox = i as f64 * l + inset;
                let oy = j as f64 * l + inset;
                rects.push(Rect {
                    x0: ox,
                    y0: oy,
                    x1: ox + side,
                    y1: oy + side,
                });
            }
        }
        Self::new(rects, theta)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn rects(&self) -> &[Rect] {
        &self.rects
    }

    /// Total measure (sum of areas).
    pub fn measure(&self) -> f64 {
        self.rects.iter().map(Rect::area).sum()
    }

    pub fn contains(&self, p: Vec2) -> bool {
        let q = Vec2::new(wrap_unit(p.x), wrap_unit(p.y));
        self.rects.iter().any(|r| r.contains(q, TORUS_TOL))
    }
}

/// Point-in-convex-polygon test (vertices in counter-clockwise order).
pub fn convex_contains(vertices: &[Vec2], p: Vec2, tol: f64) -> bool {
    let n = vertices.len();
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        if (b - a).cross(p - a) < -tol {
            return false;
        }
    }
    true
}

/// Signed area of a polygon (positive when counter-clockwise).
pub fn polygon_area(vertices: &[Vec2]) -> f64 {
    let n = vertices.len();
    let mut acc = 0.0;
    for i in 0..n {
        acc += vertices[i].cross(vertices[(i + 1) % n]);
    }
    0.5 * acc
}

/// Squared distance between two segments; used for fold-quad sizing.
pub fn segment_distance(a0: Vec2, a1: Vec2, b0: Vec2, b1: Vec2) -> f64 {
    fn point_seg(p: Vec2, a: Vec2, b: Vec2) -> f64 {
        let ab = b - a;
        let t = ((p - a).dot(ab) / ab.dot(ab)).clamp(0.0, 1.0);
        (p - (a + ab.scale(t))).norm()
    }
    fn segs_intersect(p1: Vec2, p2: Vec2, p3: Vec2, p4: Vec2) -> bool {
        let d1 = (p2 - p1).cross(p3 - p1);
        let d2 = (p2 - p1).cross(p4 - p1);
        let d3 = (p4 - p3).cross(p1 - p3);
        let d4 = (p4 - p3).cross(p2 - p3);
        ((d1 > 0.0) != (d2 > 0.0)) && ((d3 > 0.0) != (d4 > 0.0))
    }
    if segs_intersect(a0, a1, b0, b1) {
        return 0.0;
    }
    point_seg(a0, b0, b1)
        .min(point_seg(a1, b0, b1))
        .min(point_seg(b0, a0, a1))
        .min(point_seg(b1, a0, a1))
}
