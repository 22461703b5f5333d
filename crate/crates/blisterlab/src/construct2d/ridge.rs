//! The minimal ridge: a smoothed fold on a quadrilateral whose width varies
//! along the fold. Inside the lens D = {|y| < f(x)} the deformation follows
//! the smoothing curve; outside it coincides exactly with the piecewise
//! linear fold data. The width profile follows
//! f0(x) = tau (sigma^{1/3} (x + sigma)^{2/3} - sigma) near the thin end and
//! is blended with its mirror so the lens closes at both fold endpoints and
//! stays inside the quadrilateral.

use crate::construct2d::cell::FoldData;
use crate::construct2d::gamma::GammaCurve;
use crate::energy::{EnergyBreakdown, QuadSpec};
use crate::error::{BlisterError, Result};
use crate::field::{BulkIntegrals, Field2D, FieldJet};
use crate::geometry::Vec2;
use crate::params::Params;
use crate::quadrature::gauss_rule;
use std::sync::Arc;

/// C^3 smoothstep on [0, 1].
fn smoothstep(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    let x2 = x * x;
    x2 * x2 * (35.0 - 84.0 * x + 70.0 * x2 - 20.0 * x2 * x)
}

fn smoothstep_d1(x: f64) -> f64 {
    if !(0.0..=1.0).contains(&x) {
        return 0.0;
    }
    140.0 * (x * (1.0 - x)).powi(3)
}

fn smoothstep_d2(x: f64) -> f64 {
    if !(0.0..=1.0).contains(&x) {
        return 0.0;
    }
    420.0 * (x * (1.0 - x)).powi(2) * (1.0 - 2.0 * x)
}

/// The ridge width f(x) on [0, len]: the canonical profile grown from each
/// fold endpoint, blended across the middle.
#[derive(Debug, Clone)]
pub struct WidthProfile {
    pub tau: f64,
    pub sigma: f64,
    pub len: f64,
}

impl WidthProfile {
    /// The canonical one-sided width.
    pub fn f0(&self, x: f64) -> f64 {
        self.tau * (self.sigma.powf(1.0 / 3.0) * (x + self.sigma).powf(2.0 / 3.0) - self.sigma)
    }

    pub fn f0_d1(&self, x: f64) -> f64 {
        self.tau * (2.0 / 3.0) * self.sigma.powf(1.0 / 3.0) * (x + self.sigma).powf(-1.0 / 3.0)
    }

    pub fn f0_d2(&self, x: f64) -> f64 {
        -self.tau * (2.0 / 9.0) * self.sigma.powf(1.0 / 3.0) * (x + self.sigma).powf(-4.0 / 3.0)
    }

    pub fn f0_d3(&self, x: f64) -> f64 {
        self.tau * (8.0 / 27.0) * self.sigma.powf(1.0 / 3.0) * (x + self.sigma).powf(-7.0 / 3.0)
    }

    /// Blended width and its first two derivatives. The two one-sided
    /// profiles cross over inside [0.4 l, 0.6 l]; outside that window the
    /// width equals the canonical profile of the nearer tip exactly.
    pub fn eval(&self, x: f64) -> (f64, f64, f64) {
        let l = self.len;
        let xi = (x / l - 0.4) / 0.2;
        let s = smoothstep(xi);
        let s1 = smoothstep_d1(xi) / (0.2 * l);
        let s2 = smoothstep_d2(xi) / (0.2 * l * 0.2 * l);
        let (fa, fa1, fa2) = (self.f0(x), self.f0_d1(x), self.f0_d2(x));
        let (fb, fb1, fb2) = (self.f0(l - x), -self.f0_d1(l - x), self.f0_d2(l - x));
        let f = (1.0 - s) * fa + s * fb;
        let f1 = -s1 * fa + (1.0 - s) * fa1 + s1 * fb + s * fb1;
        let f2 = -s2 * fa - 2.0 * s1 * fa1 + (1.0 - s) * fa2 + s2 * fb + 2.0 * s1 * fb1 + s * fb2;
        (f, f1, f2)
    }

    pub fn f(&self, x: f64) -> f64 {
        self.eval(x).0
    }
}

/// A minimal ridge on a kite-shaped quadrilateral. Coordinates are local:
/// fold from (0,0) to (len,0), off-fold vertices at (len/2, +-rho).
#[derive(Debug, Clone)]
pub struct RidgeSpec {
    pub fold: FoldData,
    /// smoothing parameter sigma = h / (sqrt(alpha_m) phi)
    pub sigma: f64,
    /// kite half-width at the fold midpoint
    pub rho: f64,
    /// minimum |slope| of the four quad edges (= 2 rho / len)
    pub tau: f64,
    pub gamma: Arc<GammaCurve>,
    pub width: WidthProfile,
    /// lens clip radii at the two tips (vertex smoothing takes over inside)
    pub clip_a: f64,
    pub clip_c: f64,
}

/// The optimal smoothing parameter balancing membrane and bending energy
/// of a fold of angle `phi`: sigma = h / (sqrt(alpha_m) phi).
pub fn optimal_sigma(params: &Params, phi: f64) -> f64 {
    params.h / (params.alpha_m.sqrt() * phi)
}

/// Fitted bound for the in-plane shear condition phi^4 <~ (sigma/l)^{2/3}.
/// The assembled lattice runs with ratios up to the mid-30s on its steep
/// diagonal folds while keeping the shear term subdominant; beyond this the
/// small-slope model is breaking down.
pub const INPLANE_C: f64 = 64.0;

impl RidgeSpec {
    /// phi^4 / (sigma / l)^{2/3}, the in-plane condition ratio.
    pub fn inplane_ratio(&self) -> f64 {
        self.fold.phi().powi(4) / (self.sigma / self.fold.len).powf(2.0 / 3.0)
    }

    /// Build a ridge over a fold with the given smoothing parameter and
    /// kite half-width.
    pub fn new(fold: FoldData, sigma: f64, rho: f64) -> Result<Self> {
        let len = fold.len;
        if !(sigma > 0.0 && sigma < len / 8.0) {
            return Err(BlisterError::Construction(format!(
                "ridge too thick: sigma = {sigma} must be below len/8 = {}",
                len / 8.0
            )));
        }
        let phi = fold.phi();
        if !(phi > 0.0 && phi <= 1.0) {
            return Err(BlisterError::Construction(format!(
                "fold angle phi = {phi} outside (0, 1]"
            )));
        }
        if rho <= 0.0 || rho >= len {
            return Err(BlisterError::Construction(format!(
                "kite half-width {rho} incompatible with fold length {len}"
            )));
        }
        let inplane = phi.powi(4) / (sigma / len).powf(2.0 / 3.0);
        if inplane > INPLANE_C {
            return Err(BlisterError::Construction(format!(
                "in-plane condition violated: phi^4 / (sigma/l)^{{2/3}} = {inplane:.1} \
                 exceeds {INPLANE_C}"
            )));
        }
        let tau = 2.0 * rho / len;
        let gamma = Arc::new(GammaCurve::new(fold.alpha_l, fold.alpha_r)?);
        let width = WidthProfile { tau, sigma, len };
        // the lens must stay strictly inside the kite
        for i in 1..200 {
            let x = len * i as f64 / 200.0;
            let f = width.f(x);
            let quad_height = tau * x.min(len - x);
            if f > quad_height * (1.0 - 1e-9) + 1e-300 {
                return Err(BlisterError::Construction(format!(
                    "lens width {f} exceeds quad height {quad_height} at x = {x}"
                )));
            }
        }
        Ok(Self {
            fold,
            sigma,
            rho,
            tau,
            gamma,
            width,
            clip_a: 2.0 * sigma,
            clip_c: 2.0 * sigma,
        })
    }

    /// Quadrilateral vertices in global coordinates (a, b, c, d).
    pub fn quad(&self) -> [Vec2; 4] {
        let a = self.fold.origin;
        let t = self.fold.tangent;
        let n = self.fold.normal;
        let mid = a + t.scale(self.fold.len / 2.0);
        [
            a,
            mid + n.scale(self.rho),
            a + t.scale(self.fold.len),
            mid - n.scale(self.rho),
        ]
    }

    /// Local coordinates of a global point.
    pub fn local(&self, p: Vec2) -> (f64, f64) {
        let d = p - self.fold.origin;
        (d.dot(self.fold.tangent), d.dot(self.fold.normal))
    }

    /// True when the local point lies inside the lens D.
    pub fn in_lens_local(&self, x: f64, y: f64) -> bool {
        if x <= 0.0 || x >= self.fold.len {
            return false;
        }
        let f = self.width.f(x);
        f > 0.0 && y.abs() < f
    }

    /// beta(x, y) of the in-plane correction.
    pub fn beta(&self, x: f64, y: f64) -> f64 {
        let (f, f1, _) = self.width.eval(x);
        let t = y / f;
        let e = self.gamma.e_defect();
        x - f * f1 * self.gamma.omega(t) + 0.5 * (y + f) * f1 * e
    }

    /// The deviation of the smoothed deformation from the piecewise-linear
    /// fold data, with first derivatives (and second derivatives of u), in
    /// the local frame. Zero outside the lens.
    pub fn delta_local(&self, x: f64, y: f64) -> Option<DeltaJet> {
        if !self.in_lens_local(x, y) {
            return None;
        }
        let (f, f1, f2) = self.width.eval(x);
        let t = y / f;
        let g = &self.gamma;
        let alpha_side = if y < 0.0 {
            self.fold.alpha_l
        } else {
            self.fold.alpha_r
        };
        let p = self.fold.p;

        let g3 = g.gamma3(t);
        let g3p = g.gamma3_prime(t);
        let g3pp = g.gamma3_pp(t);
        let g2 = g.gamma2(t);
        let g2p = g.gamma2_prime(t);
        let nu2 = g2 - t * g2p;
        let nu3 = g3 - t * g3p;
        let gdn = g2p * nu2 + g3p * nu3;
        let om = g.omega(t);
        let e = g.e_defect();

        let du = f * g3 - alpha_side * y;
        let du_x = f1 * nu3;
        let du_y = g3p - alpha_side;
        let du_xx = f2 * nu3 + (f1 * f1 / f) * t * t * g3pp;
        let du_xy = -(f1 / f) * t * g3pp;
        let du_yy = g3pp / f;

        let dw2 = f * g2 - y + 0.5 * alpha_side * alpha_side * y;
        let dw2_x = f1 * nu2;
        let dw2_y = g2p - 1.0 + 0.5 * alpha_side * alpha_side;

        let beta_m_x = -f * f1 * om + 0.5 * (y + f) * f1 * e; // beta - x
        let beta_x_m1 =
            -(f1 * f1 + f * f2) * om + t * f1 * f1 * gdn + 0.5 * (f1 * f1 + (y + f) * f2) * e;
        let beta_y = -f1 * gdn + 0.5 * f1 * e;

        let dw1 = beta_m_x - p * du;
        let dw1_x = beta_x_m1 - p * du_x;
        let dw1_y = beta_y - p * du_y;

        Some(DeltaJet {
            dw1,
            dw2,
            du,
            dw1_x,
            dw1_y,
            dw2_x,
            dw2_y,
            du_x,
            du_y,
            du_xx,
            du_xy,
            du_yy,
        })
    }

    /// Deviation jet rotated to global axes at a global point.
    pub fn delta_global(&self, p: Vec2) -> Option<FieldJet> {
        let (x, y) = self.local(p);
        let d = self.delta_local(x, y)?;
        let t = self.fold.tangent;
        let n = self.fold.normal;
        // vector components: (w1, w2)_glob = R (dw1, dw2)_loc
        let w1 = t.x * d.dw1 + n.x * d.dw2;
        let w2 = t.y * d.dw1 + n.y * d.dw2;
        // gradient matrices: G_glob = R G_loc R^T
        let rot_grad = |gx: f64, gy: f64| Vec2::new(t.x * gx + n.x * gy, t.y * gx + n.y * gy);
        let gw1_loc = rot_grad(d.dw1_x, d.dw1_y);
        let gw2_loc = rot_grad(d.dw2_x, d.dw2_y);
        // rows of the global gradient of (w1_glob, w2_glob)
        let gw1 = Vec2::new(
            t.x * gw1_loc.x + n.x * gw2_loc.x,
            t.x * gw1_loc.y + n.x * gw2_loc.y,
        );
        let gw2 = Vec2::new(
            t.y * gw1_loc.x + n.y * gw2_loc.x,
            t.y * gw1_loc.y + n.y * gw2_loc.y,
        );
        let gu = rot_grad(d.du_x, d.du_y);
        // Hessian of u: R H R^T
        let (hxx, hxy, hyy) = (d.du_xx, d.du_xy, d.du_yy);
        let u_xx = t.x * (t.x * hxx + n.x * hxy) + n.x * (t.x * hxy + n.x * hyy);
        let u_xy = t.x * (t.y * hxx + n.y * hxy) + n.x * (t.y * hxy + n.y * hyy);
        let u_yy = t.y * (t.y * hxx + n.y * hxy) + n.y * (t.y * hxy + n.y * hyy);
        Some(FieldJet {
            w1,
            w2,
            u: d.du,
            w1_x: gw1.x,
            w1_y: gw1.y,
            w2_x: gw2.x,
            w2_y: gw2.y,
            u_x: gu.x,
            u_y: gu.y,
            u_xx,
            u_xy,
            u_yy,
        })
    }

    /// Graded panel boundaries for integrating along the fold between the
    /// tip clips; panels double away from the tips where f varies fastest.
    pub fn x_panels(&self) -> Vec<f64> {
        let len = self.fold.len;
        let mut left = vec![self.clip_a.min(len / 2.0)];
        let mut x = left[0];
        while x < len / 2.0 {
            x = (2.0 * x).min(len / 2.0);
            left.push(x);
        }
        let mut right: Vec<f64> = vec![self.clip_c.min(len / 2.0)];
        let mut xr = right[0];
        while xr < len / 2.0 {
            xr = (2.0 * xr).min(len / 2.0);
            right.push(xr);
        }
        let mut panels = left;
        for v in right.iter().rev().skip(1) {
            panels.push(len - v);
        }
        let last = *panels.last().expect("non-empty");
        if (last - (len - right[0])).abs() > 1e-15 {
            panels.push(len - right[0]);
        }
        panels.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        panels
    }
}

/// Deviation jet components in the fold-local frame.
#[derive(Debug, Clone, Copy)]
pub struct DeltaJet {
    pub dw1: f64,
    pub dw2: f64,
    pub du: f64,
    pub dw1_x: f64,
    pub dw1_y: f64,
    pub dw2_x: f64,
    pub dw2_y: f64,
    pub du_x: f64,
    pub du_y: f64,
    pub du_xx: f64,
    pub du_xy: f64,
    pub du_yy: f64,
}

/// A standalone single-ridge field on its quadrilateral: the piecewise
/// linear fold data plus the lens correction. Used to exercise the ridge
/// estimates directly.
#[derive(Debug, Clone)]
pub struct RidgeField {
    pub spec: RidgeSpec,
    pub eta: f64,
}

impl RidgeField {
    fn hat_jet_local(&self, x: f64, y: f64) -> FieldJet {
        // zero-membrane hat with the eta misfit restored:
        //   dx w1 = eta - p^2/2, dy w1 = -p alpha, dx w2 = 0,
        //   dy w2 = eta - alpha^2/2, grad u = (p, alpha)
        let p = self.spec.fold.p;
        let alpha = if y < 0.0 {
            self.spec.fold.alpha_l
        } else {
            self.spec.fold.alpha_r
        };
        let eta = self.eta;
        FieldJet {
            w1: (eta - 0.5 * p * p) * x + (-p * alpha) * y,
            w2: (eta - 0.5 * alpha * alpha) * y,
            u: p * x + alpha * y,
            w1_x: eta - 0.5 * p * p,
            w1_y: -p * alpha,
            w2_x: 0.0,
            w2_y: eta - 0.5 * alpha * alpha,
            u_x: p,
            u_y: alpha,
            u_xx: 0.0,
            u_xy: 0.0,
            u_yy: 0.0,
        }
    }

    /// Full jet (hat + lens correction) in local coordinates.
    pub fn jet_local(&self, x: f64, y: f64) -> FieldJet {
        let mut jet = self.hat_jet_local(x, y);
        if let Some(d) = self.spec.delta_local(x, y) {
            jet.w1 += d.dw1;
            jet.w2 += d.dw2;
            jet.u += d.du;
            jet.w1_x += d.dw1_x;
            jet.w1_y += d.dw1_y;
            jet.w2_x += d.dw2_x;
            jet.w2_y += d.dw2_y;
            jet.u_x += d.du_x;
            jet.u_y += d.du_y;
            jet.u_xx += d.du_xx;
            jet.u_xy += d.du_xy;
            jet.u_yy += d.du_yy;
        }
        jet
    }
}

impl Field2D for RidgeField {
    fn jet(&self, p: Vec2) -> FieldJet {
        let (x, y) = self.spec.local(p);
        self.jet_local(x, y)
    }

    fn bulk_integrals(&self, eta: f64, _quad_order: usize, grid2d: usize) -> Result<BulkIntegrals> {
        let (m, b) = lens_integrals(&self.spec, grid2d, |x, y| {
            let jet = self.jet_local(x, y);
            (jet.membrane_density(eta), jet.bending_density())
        });
        Ok(BulkIntegrals {
            membrane_int: m,
            bending_int: b,
        })
    }
}

/// Integrate a pair of densities over the clipped lens in the mapped
/// (x, t = y / f(x)) coordinates with the Jacobian f(x); the integrand is
/// smooth per t-window there. Points inside the tip disks of radius sigma
/// are part of the excluded balls of the construction; the clip at 2 sigma
/// leaves them out along with the blending annuli.
pub fn lens_integrals<F: FnMut(f64, f64) -> (f64, f64)>(
    spec: &RidgeSpec,
    grid2d: usize,
    mut density: F,
) -> (f64, f64) {
    let rule_x = gauss_rule(12);
    let rule_t = gauss_rule((grid2d / 4).clamp(8, 24));
    let t_windows = [-1.0, -1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0, 1.0];
    let panels = spec.x_panels();
    let mut membrane = 0.0;
    let mut bending = 0.0;
    for win in panels.windows(2) {
        let (xa, xb) = (win[0], win[1]);
        if xb - xa < 1e-15 {
            continue;
        }
        for (xn, xw) in rule_x.nodes.iter().zip(rule_x.weights.iter()) {
            let x = 0.5 * (xa + xb) + 0.5 * (xb - xa) * xn;
            let jac_x = 0.5 * (xb - xa) * xw;
            let f = spec.width.f(x);
            if f <= 0.0 {
                continue;
            }
            for tw in t_windows.windows(2) {
                for (tn, twt) in rule_t.nodes.iter().zip(rule_t.weights.iter()) {
                    let t = 0.5 * (tw[0] + tw[1]) + 0.5 * (tw[1] - tw[0]) * tn;
                    let jac = jac_x * 0.5 * (tw[1] - tw[0]) * twt * f;
                    let (dm, db) = density(x, t * f);
                    membrane += jac * dm;
                    bending += jac * db;
                }
            }
        }
    }
    (membrane, bending)
}

/// Build the smoothed single-ridge deformation over its quadrilateral.
/// `fold` carries the piecewise-linear data; the result equals that data
/// outside the lens exactly.
pub fn ridge_deformation(spec: &RidgeSpec, eta: f64) -> RidgeField {
    RidgeField {
        spec: spec.clone(),
        eta,
    }
}

/// Membrane + bending energy of the smoothed ridge over the quadrilateral
/// minus the tip balls (the integrand vanishes off the lens, so the lens
/// integral is the whole energy).
pub fn ridge_energy(spec: &RidgeSpec, params: &Params, quad: &QuadSpec) -> Result<EnergyBreakdown> {
    quad.validate()?;
    // the optimal coupling sigma = h / (sqrt(alpha_m) phi) is the caller's
    // contract; sigma itself was validated when the quadrilateral was built
    let field = ridge_deformation(spec, params.eta);
    let bulk = field.bulk_integrals(params.eta, quad.order, quad.grid2d)?;
    Ok(EnergyBreakdown::new(
        params.alpha_m * params.h * bulk.membrane_int,
        params.h.powi(3) * bulk.bending_int,
        0.0,
    ))
}

/// Synthetic fold data in the plane (fold along the x axis), for harnesses
/// and the ridge-level acceptance checks.
pub fn synthetic_fold(len: f64, p: f64, alpha_l: f64, alpha_r: f64) -> FoldData {
    FoldData {
        origin: Vec2::new(0.0, 0.0),
        tangent: Vec2::new(1.0, 0.0),
        normal: Vec2::new(0.0, 1.0),
        len,
        p,
        alpha_l,
        alpha_r,
        kind: crate::construct2d::cell::FoldKind::AxisLong,
    }
}
