//! 2D deformation fields: point jets, piecewise-linear tilings and the
//! generic energy integrator. The smoothed lattice and single-ridge fields
//! plug in through the same task interface.

use crate::error::{BlisterError, Result};
use crate::geometry::{convex_contains, polygon_area, BondedSet2D, Vec2};
use crate::params::Params;
use crate::quadrature::gauss_rule;

/// Values and derivatives of (w1, w2, u) at one point: first derivatives of
/// the in-plane components, first and second derivatives of u.
#[derive(Debug, Clone, Copy, Default)]
pub struct FieldJet {
    pub w1: f64,
    pub w2: f64,
    pub u: f64,
    pub w1_x: f64,
    pub w1_y: f64,
    pub w2_x: f64,
    pub w2_y: f64,
    pub u_x: f64,
    pub u_y: f64,
    pub u_xx: f64,
    pub u_xy: f64,
    pub u_yy: f64,
}

impl FieldJet {
    /// Frobenius norm squared of e(w) + grad u (x) grad u / 2 - eta I.
    pub fn membrane_density(&self, eta: f64) -> f64 {
        let mxx = self.w1_x + 0.5 * self.u_x * self.u_x - eta;
        let myy = self.w2_y + 0.5 * self.u_y * self.u_y - eta;
        let mxy = 0.5 * (self.w1_y + self.w2_x + self.u_x * self.u_y);
        mxx * mxx + myy * myy + 2.0 * mxy * mxy
    }

    /// |D^2 u|^2.
    pub fn bending_density(&self) -> f64 {
        self.u_xx * self.u_xx + 2.0 * self.u_xy * self.u_xy + self.u_yy * self.u_yy
    }

    pub fn grad_w_sq(&self) -> f64 {
        self.w1_x * self.w1_x
            + self.w1_y * self.w1_y
            + self.w2_x * self.w2_x
            + self.w2_y * self.w2_y
    }

    pub fn w_sq(&self) -> f64 {
        self.w1 * self.w1 + self.w2 * self.w2
    }
}

/// One affine piece of a piecewise-linear field: constant gradients on a
/// convex polygon, values anchored at `anchor`.
#[derive(Debug, Clone)]
pub struct LinearPiece {
    pub poly: Vec<Vec2>,
    pub anchor: Vec2,
    pub w_anchor: Vec2,
    pub u_anchor: f64,
    pub grad_w1: Vec2,
    pub grad_w2: Vec2,
    pub grad_u: Vec2,
}

impl LinearPiece {
    pub fn jet_at(&self, p: Vec2) -> FieldJet {
        let d = p - self.anchor;
        FieldJet {
            w1: self.w_anchor.x + self.grad_w1.dot(d),
            w2: self.w_anchor.y + self.grad_w2.dot(d),
            u: self.u_anchor + self.grad_u.dot(d),
            w1_x: self.grad_w1.x,
            w1_y: self.grad_w1.y,
            w2_x: self.grad_w2.x,
            w2_y: self.grad_w2.y,
            u_x: self.grad_u.x,
            u_y: self.grad_u.y,
            u_xx: 0.0,
            u_xy: 0.0,
            u_yy: 0.0,
        }
    }

    /// Membrane density of the affine data at the misfit `eta` (constant on
    /// the piece).
    pub fn membrane_density(&self, eta: f64) -> f64 {
        self.jet_at(self.anchor).membrane_density(eta)
    }

    pub fn area(&self) -> f64 {
        polygon_area(&self.poly).abs()
    }
}

/// A piecewise-linear field tiling the torus with `tiles` x `tiles` copies
/// of a cell of side `cell`.
#[derive(Debug, Clone)]
pub struct TileField {
    pub cell: f64,
    pub tiles: usize,
    pub pieces: Vec<LinearPiece>,
}

impl TileField {
    pub fn wrap(&self, p: Vec2) -> Vec2 {
        let m = |v: f64| {
            let w = v - (v / self.cell).floor() * self.cell;
            if w >= self.cell {
                0.0
            } else {
                w
            }
        };
        Vec2::new(m(p.x), m(p.y))
    }

    pub fn locate(&self, q: Vec2) -> Option<&LinearPiece> {
        let tol = 1e-12 * self.cell.max(1.0);
        self.pieces
            .iter()
            .find(|piece| convex_contains(&piece.poly, q, tol))
            .or_else(|| {
                // boundary round-off: retry with a loose tolerance
                let loose = 1e-7 * self.cell.max(1.0);
                self.pieces
                    .iter()
                    .find(|piece| convex_contains(&piece.poly, q, loose))
            })
    }

    pub fn jet(&self, p: Vec2) -> FieldJet {
        let q = self.wrap(p);
        match self.locate(q) {
            Some(piece) => piece.jet_at(q),
            None => FieldJet::default(),
        }
    }

    /// Evaluate the affine data of the piece containing `probe` at the
    /// (possibly different) point `eval`; both are wrapped consistently.
    /// Used to compare one-sided limits exactly on a shared edge.
    pub fn jet_anchored(&self, probe: Vec2, eval: Vec2) -> FieldJet {
        let q = self.wrap(probe);
        let shift = q - probe;
        match self.locate(q) {
            Some(piece) => piece.jet_at(eval + shift),
            None => FieldJet::default(),
        }
    }
}

/// Triangle quadrature by the collapsed (Duffy) mapping with `order`^2
/// points; exact for the affine pieces used here and adequate for smooth
/// integrands.
pub fn integrate_triangle<F: FnMut(Vec2) -> f64>(tri: &[Vec2; 3], order: usize, mut f: F) -> f64 {
    let rule = gauss_rule(order);
    let (a, b, c) = (tri[0], tri[1], tri[2]);
    let area2 = (b - a).cross(c - a).abs();
    let mut acc = 0.0;
    for (xi_raw, wx) in rule.nodes.iter().zip(rule.weights.iter()) {
        let xi = 0.5 * (xi_raw + 1.0);
        for (eta_raw, wy) in rule.nodes.iter().zip(rule.weights.iter()) {
            let eta = 0.5 * (eta_raw + 1.0);
            // collapsed square -> triangle: (xi, xi*eta)
            let s = xi;
            let t = xi * eta;
            let p = a + (b - a).scale(s - t) + (c - a).scale(t);
            acc += wx * wy * 0.25 * s * f(p);
        }
    }
    acc * area2
}

/// Integrate a smooth function over a convex polygon by fan triangulation.
pub fn integrate_polygon<F: FnMut(Vec2) -> f64>(poly: &[Vec2], order: usize, mut f: F) -> f64 {
    let mut acc = 0.0;
    for i in 1..poly.len() - 1 {
        acc += integrate_triangle(&[poly[0], poly[i], poly[i + 1]], order, &mut f);
    }
    acc
}

/// Tensor-product Gauss integration over an axis-aligned rectangle.
pub fn integrate_rect<F: FnMut(Vec2) -> f64>(
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
    order: usize,
    mut f: F,
) -> f64 {
    let rule = gauss_rule(order);
    let (mx, hx) = (0.5 * (x0 + x1), 0.5 * (x1 - x0));
    let (my, hy) = (0.5 * (y0 + y1), 0.5 * (y1 - y0));
    let mut acc = 0.0;
    for (x, wx) in rule.nodes.iter().zip(rule.weights.iter()) {
        for (y, wy) in rule.nodes.iter().zip(rule.weights.iter()) {
            acc += wx * wy * f(Vec2::new(mx + hx * x, my + hy * y));
        }
    }
    acc * hx * hy
}

/// Membrane and bending integrals of one field over the torus, already
/// multiplied by the tile count; substrate factors are handled separately.
pub struct BulkIntegrals {
    pub membrane_int: f64,
    pub bending_int: f64,
}

/// Interface implemented by each concrete field kind.
pub trait Field2D {
    /// Jet at a point of the unit torus.
    fn jet(&self, p: Vec2) -> FieldJet;
    /// Membrane/bending integrals over the whole torus.
    fn bulk_integrals(&self, eta: f64, quad_order: usize, grid2d: usize) -> Result<BulkIntegrals>;
    /// Representative substrate sub-domains: `(rect, multiplicity)` covering
    /// the bonded set when integrated with the field's own symmetry.
    fn substrate_cover(&self, omega: &BondedSet2D) -> Vec<(crate::geometry::Rect, f64)> {
        omega.rects().iter().map(|r| (*r, 1.0)).collect()
    }
}

/// Compute the full 2D energy of a field against a bonded set.
pub fn energy_field(
    field: &dyn Field2D,
    omega: &BondedSet2D,
    params: &Params,
    quad: &crate::energy::QuadSpec,
) -> Result<crate::energy::EnergyBreakdown> {
    quad.validate()?;
    // admissibility: u = 0 on the bonded set
    for (rect, _) in field.substrate_cover(omega) {
        let rule = gauss_rule(8);
        for xi in rule.nodes.iter() {
            for yi in rule.nodes.iter() {
                let p = Vec2::new(
                    0.5 * (rect.x0 + rect.x1) + 0.5 * (rect.x1 - rect.x0) * xi,
                    0.5 * (rect.y0 + rect.y1) + 0.5 * (rect.y1 - rect.y0) * yi,
                );
                let u = field.jet(p).u;
                if u.abs() > 1e-10 {
                    return Err(BlisterError::Admissibility(format!(
                        "u({}, {}) = {u} on the bonded set",
                        p.x, p.y
                    )));
                }
            }
        }
    }
    let bulk = field.bulk_integrals(params.eta, quad.order, quad.grid2d)?;
    let (mut grad_sq, mut val_sq) = (0.0, 0.0);
    for (rect, mult) in field.substrate_cover(omega) {
        let g = integrate_rect(rect.x0, rect.y0, rect.x1, rect.y1, quad.order, |p| {
            field.jet(p).grad_w_sq()
        });
        let v = integrate_rect(rect.x0, rect.y0, rect.x1, rect.y1, quad.order, |p| {
            field.jet(p).w_sq()
        });
        grad_sq += mult * g;
        val_sq += mult * v;
    }
    if !(bulk.membrane_int.is_finite() && bulk.bending_int.is_finite()) {
        return Err(BlisterError::Evaluation("non-finite bulk integral".into()));
    }
    Ok(crate::energy::EnergyBreakdown::new(
        params.alpha_m * params.h * bulk.membrane_int,
        params.h.powi(3) * bulk.bending_int,
        params.alpha_s * grad_sq.max(0.0).sqrt() * val_sq.max(0.0).sqrt(),
    ))
}

impl Field2D for TileField {
    fn jet(&self, p: Vec2) -> FieldJet {
        TileField::jet(self, p)
    }

    fn bulk_integrals(&self, eta: f64, quad_order: usize, _grid2d: usize) -> Result<BulkIntegrals> {
        // affine pieces: integrate the (constant) membrane density over each
        // polygon interior by quadrature; bending vanishes piecewise
        let mult = (self.tiles * self.tiles) as f64;
        let mut membrane = 0.0;
        for piece in &self.pieces {
            membrane += integrate_polygon(&piece.poly, quad_order.min(8), |p| {
                piece.jet_at(p).membrane_density(eta)
            });
        }
        Ok(BulkIntegrals {
            membrane_int: membrane * mult,
            bending_int: 0.0,
        })
    }

    fn substrate_cover(&self, omega: &BondedSet2D) -> Vec<(crate::geometry::Rect, f64)> {
        // all bonded rectangles are cell translates of each other for the
        // periodic constructions; integrate one and multiply when they agree
        let rects = omega.rects();
        if rects.len() == (self.tiles * self.tiles) && rects.len() > 1 {
            let w0 = rects[0].x1 - rects[0].x0;
            let h0 = rects[0].y1 - rects[0].y0;
            let uniform = rects
                .iter()
                .all(|r| ((r.x1 - r.x0) - w0).abs() < 1e-13 && ((r.y1 - r.y0) - h0).abs() < 1e-13);
            if uniform {
                return vec![(rects[0], rects.len() as f64)];
            }
        }
        rects.iter().map(|r| (*r, 1.0)).collect()
    }
}
