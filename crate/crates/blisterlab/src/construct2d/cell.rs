//! Step-1 periodic cell: bonded square, strip rectangles and the mapped
//! corner square, assembled into a piecewise-linear zero-membrane field,
//! together with the inventory of sharp folds and fold vertices that the
//! smoothing stage consumes.

use crate::construct2d::corner::{corner_map, CornerMap};
use crate::error::{BlisterError, Result};
use crate::field::{LinearPiece, TileField};
use crate::geometry::{BondedSet2D, Vec2};
use crate::params::Params;

/// Classification of the sharp folds of one cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FoldKind {
    /// Short axis fold between a D point and the corner-square center.
    AxisShort,
    /// Long axis fold crossing the strip between neighboring corner squares.
    AxisLong,
    /// Diagonal fold from the corner-square center to a corner.
    Diagonal,
    /// Fold from a D point to a corner of the corner square.
    DCorner,
    /// Delamination fold along an edge of the bonded square.
    Delamination,
}

/// One sharp fold segment (global cell coordinates; may leave [0,l)^2, the
/// torus wrap re-enters through the periodic images).
#[derive(Debug, Clone)]
pub struct FoldSegment {
    pub a: Vec2,
    pub c: Vec2,
    pub kind: FoldKind,
}

impl FoldSegment {
    pub fn len(&self) -> f64 {
        (self.c - self.a).norm()
    }
    pub fn tangent(&self) -> Vec2 {
        (self.c - self.a).scale(1.0 / self.len())
    }
}

/// The piecewise-linear Step-1 cell.
#[derive(Debug, Clone)]
pub struct Step1Cell {
    /// Cell side length (1 / cells per side).
    pub l: f64,
    /// Bonded square side (sqrt(theta_eff) l; may exceed sqrt(theta) l when
    /// the ridge-lift correction applies).
    pub b: f64,
    pub alpha: f64,
    pub corner: CornerMap,
    pub field: TileField,
    pub folds: Vec<FoldSegment>,
    pub vertices: Vec<Vec2>,
}

/// Build one Step-1 cell with bonded square side `b` inside a cell of side
/// `l`, tiled `tiles` times per direction.
pub fn build_cell(params: &Params, l: f64, b: f64, tiles: usize) -> Result<Step1Cell> {
    if !(b > 0.0 && b < l) {
        return Err(BlisterError::InvalidParams(format!(
            "bonded side {b} must lie inside the cell of side {l}"
        )));
    }
    let eta = params.eta;
    let sqrt_theta_eff = b / l;
    let theta_like = sqrt_theta_eff * sqrt_theta_eff;
    let corner = corner_map(theta_like, eta)?;
    let alpha = corner.alpha;
    let s2a = (2.0 * alpha).sqrt();
    let slope_w1 = -alpha * sqrt_theta_eff; // = -eta sqrt(theta)/(1 - sqrt(theta))
    let xm = 0.5 * (b + l); // fold line through the strips and corner center
    let kappa = 0.5 * (l - b); // renormalization scale of the corner square

    let mut pieces: Vec<LinearPiece> = Vec::new();
    // bonded square
    pieces.push(LinearPiece {
        poly: rect_poly(0.0, 0.0, b, b),
        anchor: Vec2::new(b / 2.0, b / 2.0),
        w_anchor: Vec2::new(0.0, 0.0),
        u_anchor: 0.0,
        grad_w1: Vec2::new(eta, 0.0),
        grad_w2: Vec2::new(0.0, eta),
        grad_u: Vec2::new(0.0, 0.0),
    });
    // vertical strip halves R1 (rising) and R2 (falling)
    pieces.push(LinearPiece {
        poly: rect_poly(b, 0.0, xm, b),
        anchor: Vec2::new(b, 0.0),
        w_anchor: Vec2::new(eta * b / 2.0, -eta * b / 2.0),
        u_anchor: 0.0,
        grad_w1: Vec2::new(slope_w1, 0.0),
        grad_w2: Vec2::new(0.0, eta),
        grad_u: Vec2::new(s2a, 0.0),
    });
    pieces.push(LinearPiece {
        poly: rect_poly(xm, 0.0, l, b),
        anchor: Vec2::new(l, 0.0),
        w_anchor: Vec2::new(-eta * b / 2.0, -eta * b / 2.0),
        u_anchor: 0.0,
        grad_w1: Vec2::new(slope_w1, 0.0),
        grad_w2: Vec2::new(0.0, eta),
        grad_u: Vec2::new(-s2a, 0.0),
    });
    // horizontal strip halves R3 (rising) and R4 (falling)
    pieces.push(LinearPiece {
        poly: rect_poly(0.0, b, b, xm),
        anchor: Vec2::new(0.0, b),
        w_anchor: Vec2::new(-eta * b / 2.0, eta * b / 2.0),
        u_anchor: 0.0,
        grad_w1: Vec2::new(eta, 0.0),
        grad_w2: Vec2::new(0.0, slope_w1),
        grad_u: Vec2::new(0.0, s2a),
    });
    pieces.push(LinearPiece {
        poly: rect_poly(0.0, xm, b, l),
        anchor: Vec2::new(0.0, l),
        w_anchor: Vec2::new(-eta * b / 2.0, -eta * b / 2.0),
        u_anchor: 0.0,
        grad_w1: Vec2::new(eta, 0.0),
        grad_w2: Vec2::new(0.0, slope_w1),
        grad_u: Vec2::new(0.0, -s2a),
    });
    // corner square: map the renormalized pieces into [b,l]^2
    let center = Vec2::new(xm, xm);
    for piece in &corner.pieces {
        let map_pt = |p: Vec2| center + p.scale(kappa);
        let tri: Vec<Vec2> = piece.tri.iter().map(|v| map_pt(*v)).collect();
        let anchor = tri[0];
        let (w_ren, u_ren) = (piece.w_at, piece.u_at);
        // real field: w = kappa w(renorm) + eta (x - center), u = kappa u
        let w_anchor = Vec2::new(
            kappa * w_ren.x + eta * (anchor.x - center.x),
            kappa * w_ren.y + eta * (anchor.y - center.y),
        );
        pieces.push(LinearPiece {
            poly: tri,
            anchor,
            w_anchor,
            u_anchor: kappa * u_ren,
            grad_w1: Vec2::new(piece.grad_w1.x + eta, piece.grad_w1.y),
            grad_w2: Vec2::new(piece.grad_w2.x, piece.grad_w2.y + eta),
            grad_u: piece.grad_u,
        });
    }

    let field = TileField {
        cell: l,
        tiles,
        pieces,
    };

    // fold inventory (see the construction notes in `super`): per cell,
    // 3 vertical + 3 horizontal axis segments, 4 diagonals, 8 D-corner
    // folds and the 4 delamination edges of the bonded square.
    let dk = super::corner::CORNER_D * kappa;
    let mut folds = Vec::new();
    let c = center;
    // axis folds (vertical line x = xm and horizontal line y = xm)
    folds.push(FoldSegment {
        a: Vec2::new(xm, xm - dk),
        c,
        kind: FoldKind::AxisShort,
    });
    folds.push(FoldSegment {
        a: c,
        c: Vec2::new(xm, xm + dk),
        kind: FoldKind::AxisShort,
    });
    folds.push(FoldSegment {
        a: Vec2::new(xm, xm + dk),
        c: Vec2::new(xm, xm + l - dk),
        kind: FoldKind::AxisLong,
    });
    folds.push(FoldSegment {
        a: Vec2::new(xm - dk, xm),
        c,
        kind: FoldKind::AxisShort,
    });
    folds.push(FoldSegment {
        a: c,
        c: Vec2::new(xm + dk, xm),
        kind: FoldKind::AxisShort,
    });
    folds.push(FoldSegment {
        a: Vec2::new(xm + dk, xm),
        c: Vec2::new(xm + l - dk, xm),
        kind: FoldKind::AxisLong,
    });
    // diagonals from the corner-square center to its corners
    for corner_pt in [
        Vec2::new(b, b),
        Vec2::new(l, b),
        Vec2::new(b, l),
        Vec2::new(l, l),
    ] {
        folds.push(FoldSegment {
            a: c,
            c: corner_pt,
            kind: FoldKind::Diagonal,
        });
    }
    // D-corner folds: each D point connects to its two nearest corners
    let d_pts = [
        (Vec2::new(xm, xm - dk), [Vec2::new(b, b), Vec2::new(l, b)]),
        (Vec2::new(xm, xm + dk), [Vec2::new(b, l), Vec2::new(l, l)]),
        (Vec2::new(xm - dk, xm), [Vec2::new(b, b), Vec2::new(b, l)]),
        (Vec2::new(xm + dk, xm), [Vec2::new(l, b), Vec2::new(l, l)]),
    ];
    for (dp, corners) in d_pts {
        for corner_pt in corners {
            folds.push(FoldSegment {
                a: dp,
                c: corner_pt,
                kind: FoldKind::DCorner,
            });
        }
    }
    // delamination folds: the four edges of the bonded square, oriented so
    // the bonded region lies on the local y < 0 side (the smoothing bump of
    // the curve sits on the t > 0 branch, which must face the blister)
    for (fa, fc) in [
        (Vec2::new(b, 0.0), Vec2::new(0.0, 0.0)),
        (Vec2::new(b, b), Vec2::new(b, 0.0)),
        (Vec2::new(0.0, b), Vec2::new(b, b)),
        (Vec2::new(0.0, 0.0), Vec2::new(0.0, b)),
    ] {
        folds.push(FoldSegment {
            a: fa,
            c: fc,
            kind: FoldKind::Delamination,
        });
    }

    // smoothing vertices: corner-square center, the four D points, and the
    // four corners of the bonded square
    let vertices = vec![
        c,
        Vec2::new(xm, xm - dk),
        Vec2::new(xm, xm + dk),
        Vec2::new(xm - dk, xm),
        Vec2::new(xm + dk, xm),
        Vec2::new(0.0, 0.0),
        Vec2::new(b, 0.0),
        Vec2::new(0.0, b),
        Vec2::new(b, b),
    ];

    Ok(Step1Cell {
        l,
        b,
        alpha,
        corner,
        field,
        folds,
        vertices,
    })
}

fn rect_poly(x0: f64, y0: f64, x1: f64, y1: f64) -> Vec<Vec2> {
    vec![
        Vec2::new(x0, y0),
        Vec2::new(x1, y0),
        Vec2::new(x1, y1),
        Vec2::new(x0, y1),
    ]
}

/// Step-1 construction at theta exactly: the bonded squares carry the full
/// area fraction, no ridge-lift correction.
pub fn cell_assembly(params: &Params, l: f64) -> Result<(Step1Cell, BondedSet2D)> {
    let cells = 1.0 / l;
    let n = cells.round();
    if !(l > 0.0 && l <= 1.0) || (cells - n).abs() > 1e-9 {
        return Err(BlisterError::InvalidParams(format!(
            "cell length {l} must satisfy 1/l integer"
        )));
    }
    let n = n as usize;
    let b = params.theta.sqrt() * l;
    let cell = build_cell(params, l, b, n)?;
    let omega = BondedSet2D::cell_squares(n, 0.0, b, params.theta)?;
    Ok((cell, omega))
}

/// Hat data of one fold extracted by probing the piecewise-linear field on
/// both sides, expressed in the fold-local frame (x along the fold from a
/// to c, y to the left).
#[derive(Debug, Clone)]
pub struct FoldData {
    pub origin: Vec2,
    pub tangent: Vec2,
    pub normal: Vec2,
    pub len: f64,
    /// shared along-fold derivative of u
    pub p: f64,
    /// normal derivative of u on the y < 0 side
    pub alpha_l: f64,
    /// normal derivative of u on the y > 0 side
    pub alpha_r: f64,
    pub kind: FoldKind,
}

impl FoldData {
    pub fn phi(&self) -> f64 {
        self.alpha_l.abs().max(self.alpha_r.abs())
    }
}

/// Probe the cell field on both sides of a fold and verify the smoothing
/// hypotheses: shared along-fold derivatives, zero membrane energy on both
/// sides, continuity, and constancy of the data along the segment.
pub fn extract_fold_data(cell: &Step1Cell, fold: &FoldSegment, eta: f64) -> Result<FoldData> {
    let len = fold.len();
    let t_hat = fold.tangent();
    let n_hat = t_hat.perp();
    let eps = 1e-7 * cell.l;
    let mut shared_p = None;
    let mut alpha_l = 0.0;
    let mut alpha_r = 0.0;
    for frac in [0.25, 0.5, 0.75] {
        let mid = fold.a + (fold.c - fold.a).scale(frac);
        let lo = cell.field.jet_anchored(mid - n_hat.scale(eps), mid);
        let hi = cell.field.jet_anchored(mid + n_hat.scale(eps), mid);
        // local-frame u gradients
        let gu_lo = Vec2::new(lo.u_x, lo.u_y);
        let gu_hi = Vec2::new(hi.u_x, hi.u_y);
        let p_lo = t_hat.dot(gu_lo);
        let p_hi = t_hat.dot(gu_hi);
        if (p_lo - p_hi).abs() > 1e-9 * (1.0 + p_lo.abs()) {
            return Err(BlisterError::Construction(format!(
                "along-fold u derivative differs across fold {:?}: {p_lo} vs {p_hi}",
                fold.kind
            )));
        }
        let al = n_hat.dot(gu_lo);
        let ar = n_hat.dot(gu_hi);
        match shared_p {
            None => {
                shared_p = Some(p_lo);
                alpha_l = al;
                alpha_r = ar;
            }
            Some(p0) => {
                if (p0 - p_lo).abs() > 1e-9 * (1.0 + p0.abs())
                    || (al - alpha_l).abs() > 1e-9
                    || (ar - alpha_r).abs() > 1e-9
                {
                    return Err(BlisterError::Construction(format!(
                        "fold data varies along fold {:?}",
                        fold.kind
                    )));
                }
            }
        }
        // zero-membrane hypothesis in the local frame, both sides
        for jet in [&lo, &hi] {
            let w_grad = [Vec2::new(jet.w1_x, jet.w1_y), Vec2::new(jet.w2_x, jet.w2_y)];
            // local gradient matrix: W_loc = R^T W R with R = [t_hat n_hat]
            let row = |r: Vec2| Vec2::new(r.dot(t_hat), r.dot(n_hat));
            let w1r = row(w_grad[0]);
            let w2r = row(w_grad[1]);
            let w1_loc = Vec2::new(
                t_hat.x * w1r.x + t_hat.y * w2r.x,
                t_hat.x * w1r.y + t_hat.y * w2r.y,
            );
            let w2_loc = Vec2::new(
                n_hat.x * w1r.x + n_hat.y * w2r.x,
                n_hat.x * w1r.y + n_hat.y * w2r.y,
            );
            let gu = Vec2::new(jet.u_x, jet.u_y);
            let u_loc = Vec2::new(t_hat.dot(gu), n_hat.dot(gu));
            let rxx = w1_loc.x + 0.5 * u_loc.x * u_loc.x - eta;
            let ryy = w2_loc.y + 0.5 * u_loc.y * u_loc.y - eta;
            let rxy = w1_loc.y + w2_loc.x + u_loc.x * u_loc.y;
            let scale = 1.0 + eta;
            if rxx.abs() > 1e-10 * scale || ryy.abs() > 1e-10 * scale || rxy.abs() > 1e-10 * scale {
                return Err(BlisterError::Construction(format!(
                    "hat field not membrane free beside fold {:?}: ({rxx}, {ryy}, {rxy})",
                    fold.kind
                )));
            }
        }
        // continuity of the hat values across the fold (one-sided data
        // extrapolated to the same on-fold point)
        if (lo.u - hi.u).abs() > 1e-10 * (1.0 + lo.u.abs())
            || (lo.w1 - hi.w1).abs() > 1e-10
            || (lo.w2 - hi.w2).abs() > 1e-10
        {
            return Err(BlisterError::Construction(format!(
                "hat field discontinuous across fold {:?}",
                fold.kind
            )));
        }
    }
    Ok(FoldData {
        origin: fold.a,
        tangent: t_hat,
        normal: n_hat,
        len,
        p: shared_p.unwrap_or(0.0),
        alpha_l,
        alpha_r,
        kind: fold.kind,
    })
}
