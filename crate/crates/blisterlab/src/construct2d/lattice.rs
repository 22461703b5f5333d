//! The smoothed blister lattice: every sharp fold of the Step-1 cell is
//! replaced by a minimal ridge on a disjoint kite-shaped quadrilateral, the
//! fold vertices are blended to constants on balls of radius 2 sigma, and
//! the bonded square is enlarged so the bonded set keeps measure theta
//! after the ridges lift the film near its edges.

use crate::construct2d::cell::{build_cell, extract_fold_data, FoldData, FoldKind, Step1Cell};
use crate::construct2d::gamma::GammaCurve;
use crate::construct2d::ridge::{lens_integrals, RidgeSpec};
use crate::error::{BlisterError, Result};
use crate::field::{BulkIntegrals, Field2D, FieldJet};
use crate::geometry::{segment_distance, BondedSet2D, Vec2};
use crate::params::Params;
use crate::quadrature::gauss_rule;
use std::collections::HashMap;
use std::sync::Arc;

/// C^3 cutoff: 1 on [0, 1], 0 beyond 2.
fn cutoff(s: f64) -> f64 {
    if s <= 1.0 {
        1.0
    } else if s >= 2.0 {
        0.0
    } else {
        let x = s - 1.0;
        let x2 = x * x;
        1.0 - x2 * x2 * (35.0 - 84.0 * x + 70.0 * x2 - 20.0 * x2 * x)
    }
}

fn cutoff_d1(s: f64) -> f64 {
    if !(1.0..=2.0).contains(&s) {
        0.0
    } else {
        let x = s - 1.0;
        -140.0 * (x * (1.0 - x)).powi(3)
    }
}

fn cutoff_d2(s: f64) -> f64 {
    if !(1.0..=2.0).contains(&s) {
        0.0
    } else {
        let x = s - 1.0;
        -420.0 * (x * (1.0 - x)).powi(2) * (1.0 - 2.0 * x)
    }
}

/// A vertex-smoothing zone: constant Step-1 values inside radius sigma,
/// blended to the surrounding field out to 2 sigma.
#[derive(Debug, Clone)]
pub struct VertexZone {
    pub center: Vec2,
    pub sigma: f64,
    pub w_const: Vec2,
    pub u_const: f64,
}

/// The assembled lattice field on the torus.
#[derive(Debug)]
pub struct LatticeField {
    pub cell: Step1Cell,
    pub tiles: usize,
    pub ridges: Vec<RidgeSpec>,
    pub zones: Vec<VertexZone>,
    /// inset of the bonded rectangles from the enlarged square
    pub omega_inset: f64,
    pub fold_data: Vec<FoldData>,
}

/// Geometry of the planned fold quads before the curves are attached.
struct QuadPlan {
    data: FoldData,
    rho: f64,
    sigma: f64,
}

fn shifts(l: f64) -> [Vec2; 9] {
    let mut s = [Vec2::new(0.0, 0.0); 9];
    let mut k = 0;
    for i in -1..=1 {
        for j in -1..=1 {
            s[k] = Vec2::new(i as f64 * l, j as f64 * l);
            k += 1;
        }
    }
    s
}

/// Plan quad half-widths and smoothing radii for every fold of the cell.
fn plan_quads(cell: &Step1Cell, params: &Params) -> Result<Vec<QuadPlan>> {
    let l = cell.l;
    let tol = 1e-9 * l;
    let data: Vec<FoldData> = cell
        .folds
        .iter()
        .map(|f| extract_fold_data(cell, f, params.eta))
        .collect::<Result<_>>()?;

    // angular fans at each smoothing vertex, over the periodic images
    let mut budgets: Vec<[f64; 2]> = vec![[f64::INFINITY; 2]; data.len()];
    for v in &cell.vertices {
        let mut fan: Vec<(f64, usize, usize)> = Vec::new();
        for (idx, fold) in cell.folds.iter().enumerate() {
            for shift in shifts(l) {
                if ((fold.a + shift) - *v).norm() < tol {
                    let dir = (fold.c + shift) - *v;
                    fan.push((dir.y.atan2(dir.x), idx, 0));
                }
                if ((fold.c + shift) - *v).norm() < tol {
                    let dir = (fold.a + shift) - *v;
                    fan.push((dir.y.atan2(dir.x), idx, 1));
                }
            }
        }
        if fan.is_empty() {
            return Err(BlisterError::Geometry(format!(
                "no folds meet at vertex ({}, {})",
                v.x, v.y
            )));
        }
        fan.sort_by(|a, b| a.0.total_cmp(&b.0));
        let n = fan.len();
        for i in 0..n {
            let ang = fan[i].0;
            let prev = fan[(i + n - 1) % n].0;
            let next = fan[(i + 1) % n].0;
            let gap_prev = (ang - prev).rem_euclid(std::f64::consts::TAU);
            let gap_next = (next - ang).rem_euclid(std::f64::consts::TAU);
            let budget = 0.45 * gap_prev.min(gap_next);
            let (idx, end) = (fan[i].1, fan[i].2);
            budgets[idx][end] = budgets[idx][end].min(budget);
        }
    }

    // distance caps against non-adjacent folds
    let mut plans = Vec::with_capacity(data.len());
    for (i, d) in data.iter().enumerate() {
        let len = d.len;
        let mut cap = f64::INFINITY;
        for (j, other) in cell.folds.iter().enumerate() {
            if i == j {
                continue;
            }
            for shift in shifts(l) {
                let (oa, oc) = (other.a + shift, other.c + shift);
                // skip instances sharing an endpoint (the fans handle those)
                let fold_i = &cell.folds[i];
                let share = [
                    (fold_i.a, oa),
                    (fold_i.a, oc),
                    (fold_i.c, oa),
                    (fold_i.c, oc),
                ]
                .iter()
                .any(|(p, q)| (*p - *q).norm() < tol);
                if share {
                    continue;
                }
                let dist = segment_distance(fold_i.a, fold_i.c, oa, oc);
                if dist < tol {
                    return Err(BlisterError::Geometry(format!(
                        "folds {i} and {j} intersect away from the vertex set"
                    )));
                }
                cap = cap.min(0.45 * dist);
            }
        }
        let b0 = budgets[i][0].min(std::f64::consts::FRAC_PI_3);
        let b1 = budgets[i][1].min(std::f64::consts::FRAC_PI_3);
        if !(b0 > 0.0 && b1 > 0.0) {
            return Err(BlisterError::Geometry(format!(
                "fold {i} has no angular budget"
            )));
        }
        let rho = (0.5 * len * b0.tan())
            .min(0.5 * len * b1.tan())
            .min(cap)
            .min(0.5 * len);
        let sigma = crate::construct2d::ridge::optimal_sigma(params, d.phi());
        plans.push(QuadPlan {
            data: d.clone(),
            rho,
            sigma,
        });
    }
    Ok(plans)
}

/// Maximum film-lift depth of a delamination ridge into the bonded square:
/// the smoothing curve is exactly linear beyond |t| = 1/3, so the lift stops
/// at one third of the lens width.
fn delamination_inset(plans: &[QuadPlan]) -> f64 {
    let mut inset: f64 = 0.0;
    for plan in plans {
        if plan.data.kind == FoldKind::Delamination {
            let width = crate::construct2d::ridge::WidthProfile {
                tau: 2.0 * plan.rho / plan.data.len,
                sigma: plan.sigma,
                len: plan.data.len,
            };
            inset = inset.max(width.f(plan.data.len / 2.0) / 3.0);
        }
    }
    inset
}

/// Assemble the smoothed lattice at cell length `l` (1/l integer). Returns
/// the field and the bonded set of measure theta.
pub fn assemble_lattice(params: &Params, l: f64) -> Result<(LatticeField, BondedSet2D)> {
    let cells = 1.0 / l;
    let n = cells.round();
    if !(l > 0.0 && l <= 1.0) || (cells - n).abs() > 1e-9 {
        return Err(BlisterError::InvalidParams(format!(
            "cell length {l} must satisfy 1/l integer"
        )));
    }
    let n = n as usize;
    let target_side = params.theta.sqrt() * l;

    // Enlarge the bonded square until the film-contact set keeps measure
    // theta after the delamination ridges lift its rim: solve
    // b - 2 inset(b) = sqrt(theta) l by bisection.
    let side_of = |b: f64| -> Result<f64> {
        let cell = build_cell(params, l, b, n)?;
        let plans = plan_quads(&cell, params)?;
        Ok(b - 2.0 * delamination_inset(&plans))
    };
    let mut lo = target_side;
    let mut hi = (target_side + 0.45 * (l - target_side)).min(0.999 * l);
    if side_of(hi)? < target_side {
        return Err(BlisterError::Geometry(
            "ridge lift exceeds the available enlargement margin".into(),
        ));
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if side_of(mid)? < target_side {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let b = hi;

    let cell = build_cell(params, l, b, n)?;
    let plans = plan_quads(&cell, params)?;
    let omega_inset = 0.5 * (b - target_side);

    // shared smoothing curves per endpoint-slope pair
    let mut curve_cache: HashMap<(u64, u64), Arc<GammaCurve>> = HashMap::new();
    let mut ridges = Vec::with_capacity(plans.len());
    for plan in &plans {
        let key = (plan.data.alpha_l.to_bits(), plan.data.alpha_r.to_bits());
        let gamma = match curve_cache.get(&key) {
            Some(g) => g.clone(),
            None => {
                let g = Arc::new(GammaCurve::new(plan.data.alpha_l, plan.data.alpha_r)?);
                curve_cache.insert(key, g.clone());
                g
            }
        };
        let mut spec = RidgeSpec::new(plan.data.clone(), plan.sigma, plan.rho)?;
        spec.gamma = gamma;
        ridges.push(spec);
    }

    // vertex zones: radius = the largest sigma among incident folds
    let tol = 1e-9 * l;
    let mut zones = Vec::with_capacity(cell.vertices.len());
    for v in &cell.vertices {
        let mut sigma_v: f64 = 0.0;
        for (idx, fold) in cell.folds.iter().enumerate() {
            for shift in shifts(l) {
                if ((fold.a + shift) - *v).norm() < tol || ((fold.c + shift) - *v).norm() < tol {
                    sigma_v = sigma_v.max(plans[idx].sigma);
                }
            }
        }
        let jet = cell.field.jet(*v);
        zones.push(VertexZone {
            center: *v,
            sigma: sigma_v,
            w_const: Vec2::new(jet.w1, jet.w2),
            u_const: jet.u,
        });
    }
    // clip each lens at the tip-zone radius
    for (spec, _plan) in ridges.iter_mut().zip(plans.iter()) {
        let find_sigma = |p: Vec2| -> f64 {
            for z in &zones {
                for shift in shifts(l) {
                    if ((z.center + shift) - p).norm() < tol {
                        return z.sigma;
                    }
                }
            }
            0.0
        };
        let sa = find_sigma(spec.fold.origin);
        let sc = find_sigma(spec.fold.origin + spec.fold.tangent.scale(spec.fold.len));
        if sa == 0.0 || sc == 0.0 {
            return Err(BlisterError::Geometry(
                "fold endpoint missing a vertex zone".into(),
            ));
        }
        spec.clip_a = 2.0 * sa;
        spec.clip_c = 2.0 * sc;
        if spec.clip_a + spec.clip_c > 0.9 * spec.fold.len {
            return Err(BlisterError::Geometry(format!(
                "vertex balls consume fold of length {} (sigma too large for l)",
                spec.fold.len
            )));
        }
    }

    validate_disjointness(&cell, &ridges, &zones)?;

    // delamination ridges must carry their smoothing bump on the blister
    // side: the bonded side is the alpha_l = 0 branch by construction
    for spec in &ridges {
        if spec.fold.kind == FoldKind::Delamination && spec.fold.alpha_l.abs() > 1e-12 {
            return Err(BlisterError::Construction(
                "delamination fold oriented with the bonded side on the bump branch".into(),
            ));
        }
    }

    // u = 0 at bonded corners is required for admissibility of the blend
    for z in &zones {
        if z.u_const.abs() > 1e-12 && on_bonded_corner(&cell, z.center) {
            return Err(BlisterError::Admissibility(format!(
                "bonded corner carries u = {}",
                z.u_const
            )));
        }
    }

    let field = LatticeField {
        cell,
        tiles: n,
        ridges,
        zones,
        omega_inset,
        fold_data: plans.into_iter().map(|p| p.data).collect(),
    };
    let omega = BondedSet2D::cell_squares(n, omega_inset, b - 2.0 * omega_inset, params.theta)
        .map_err(|e| BlisterError::Geometry(format!("bonded-set correction failed: {e}")))?;
    Ok((field, omega))
}

fn on_bonded_corner(cell: &Step1Cell, v: Vec2) -> bool {
    let b = cell.b;
    let tol = 1e-9 * cell.l;
    [
        Vec2::new(0.0, 0.0),
        Vec2::new(b, 0.0),
        Vec2::new(0.0, b),
        Vec2::new(b, b),
    ]
    .iter()
    .any(|c| (*c - v).norm() < tol)
}

/// Separating-axis overlap test for convex polygons (strictly positive
/// penetration; touching edges and shared vertices pass).
fn polys_overlap(a: &[Vec2], b: &[Vec2], tol: f64) -> bool {
    for (p, q) in [(a, b), (b, a)] {
        let n = p.len();
        for i in 0..n {
            let edge = p[(i + 1) % n] - p[i];
            let axis = edge.perp();
            let (mut amin, mut amax) = (f64::INFINITY, f64::NEG_INFINITY);
            for v in p {
                let d = axis.dot(*v);
                amin = amin.min(d);
                amax = amax.max(d);
            }
            let (mut bmin, mut bmax) = (f64::INFINITY, f64::NEG_INFINITY);
            for v in q {
                let d = axis.dot(*v);
                bmin = bmin.min(d);
                bmax = bmax.max(d);
            }
            if amax <= bmin + tol || bmax <= amin + tol {
                return false;
            }
        }
    }
    true
}

fn validate_disjointness(
    cell: &Step1Cell,
    ridges: &[RidgeSpec],
    zones: &[VertexZone],
) -> Result<()> {
    let l = cell.l;
    let tol = 1e-9 * l;
    // fold quads must not overlap (over the periodic images)
    for i in 0..ridges.len() {
        let qi: Vec<Vec2> = ridges[i].quad().to_vec();
        for j in (i + 1)..ridges.len() {
            for shift in shifts(l) {
                let qj: Vec<Vec2> = ridges[j].quad().iter().map(|v| *v + shift).collect();
                if polys_overlap(&qi, &qj, tol) {
                    return Err(BlisterError::Geometry(format!(
                        "ridge quadrilaterals {i} and {j} overlap (sigma too large for l)"
                    )));
                }
            }
        }
    }
    // vertex balls of radius 2 sigma must be disjoint
    for i in 0..zones.len() {
        for j in 0..zones.len() {
            for shift in shifts(l) {
                if i == j && shift.norm() < tol {
                    continue;
                }
                let d = ((zones[j].center + shift) - zones[i].center).norm();
                if d < 2.0 * (zones[i].sigma + zones[j].sigma) {
                    return Err(BlisterError::Geometry(format!(
                        "vertex balls {i} and {j} overlap (sigma too large for l)"
                    )));
                }
            }
        }
    }
    // lenses must stay clear of foreign vertex balls
    for (ri, ridge) in ridges.iter().enumerate() {
        let a = ridge.fold.origin;
        let c = a + ridge.fold.tangent.scale(ridge.fold.len);
        let fmax = ridge.width.f(ridge.fold.len / 2.0);
        for z in zones {
            for shift in shifts(l) {
                let v = z.center + shift;
                if (v - a).norm() < tol || (v - c).norm() < tol {
                    continue; // own endpoints
                }
                let d = segment_distance(a, c, v, v);
                if d < 2.0 * z.sigma + fmax {
                    return Err(BlisterError::Geometry(format!(
                        "lens of ridge {ri} runs into a foreign vertex ball"
                    )));
                }
            }
        }
    }
    Ok(())
}

impl LatticeField {
    /// Jet of the underlying field before vertex blending (Step-1 plus lens
    /// corrections).
    fn unblended_jet(&self, q: Vec2) -> FieldJet {
        let mut jet = self.cell.field.jet(q);
        for ridge in &self.ridges {
            for shift in shifts(self.cell.l) {
                let p = q + shift;
                if let Some(delta) = ridge.delta_global(p) {
                    jet.w1 += delta.w1;
                    jet.w2 += delta.w2;
                    jet.u += delta.u;
                    jet.w1_x += delta.w1_x;
                    jet.w1_y += delta.w1_y;
                    jet.w2_x += delta.w2_x;
                    jet.w2_y += delta.w2_y;
                    jet.u_x += delta.u_x;
                    jet.u_y += delta.u_y;
                    jet.u_xx += delta.u_xx;
                    jet.u_xy += delta.u_xy;
                    jet.u_yy += delta.u_yy;
                    return jet; // lenses are disjoint
                }
            }
        }
        jet
    }

    fn blended_jet(&self, q: Vec2) -> FieldJet {
        let jet = self.unblended_jet(q);
        for zone in &self.zones {
            for shift in shifts(self.cell.l) {
                let v = zone.center + shift;
                let r = (q - v).norm();
                if r >= 2.0 * zone.sigma {
                    continue;
                }
                if r <= zone.sigma {
                    return FieldJet {
                        w1: zone.w_const.x,
                        w2: zone.w_const.y,
                        u: zone.u_const,
                        ..Default::default()
                    };
                }
                let s = r / zone.sigma;
                let rho = cutoff(s);
                let rho1 = cutoff_d1(s) / zone.sigma;
                let rho2 = cutoff_d2(s) / (zone.sigma * zone.sigma);
                let dir = (q - v).scale(1.0 / r);
                // grad r = dir, D^2 r = (I - dir x dir) / r
                let hrxx = (1.0 - dir.x * dir.x) / r;
                let hrxy = -dir.x * dir.y / r;
                let hryy = (1.0 - dir.y * dir.y) / r;

                let blend_scalar = |val: f64, gx: f64, gy: f64, c: f64| {
                    (
                        rho * c + (1.0 - rho) * val,
                        rho1 * dir.x * (c - val) + (1.0 - rho) * gx,
                        rho1 * dir.y * (c - val) + (1.0 - rho) * gy,
                    )
                };
                let (w1, w1x, w1y) = blend_scalar(jet.w1, jet.w1_x, jet.w1_y, zone.w_const.x);
                let (w2, w2x, w2y) = blend_scalar(jet.w2, jet.w2_x, jet.w2_y, zone.w_const.y);
                let (u, ux, uy) = blend_scalar(jet.u, jet.u_x, jet.u_y, zone.u_const);
                let du = zone.u_const - jet.u;
                let u_xx = du * (rho2 * dir.x * dir.x + rho1 * hrxx) - 2.0 * rho1 * dir.x * jet.u_x
                    + (1.0 - rho) * jet.u_xx;
                let u_xy = du * (rho2 * dir.x * dir.y + rho1 * hrxy)
                    - rho1 * (dir.x * jet.u_y + dir.y * jet.u_x)
                    + (1.0 - rho) * jet.u_xy;
                let u_yy = du * (rho2 * dir.y * dir.y + rho1 * hryy) - 2.0 * rho1 * dir.y * jet.u_y
                    + (1.0 - rho) * jet.u_yy;
                return FieldJet {
                    w1,
                    w2,
                    u,
                    w1_x: w1x,
                    w1_y: w1y,
                    w2_x: w2x,
                    w2_y: w2y,
                    u_x: ux,
                    u_y: uy,
                    u_xx,
                    u_xy,
                    u_yy,
                };
            }
        }
        jet
    }

    /// Per-cell energy integrals (membrane, bending) before the h factors.
    fn cell_integrals(&self, eta: f64, grid2d: usize) -> (f64, f64) {
        let mut membrane = 0.0;
        let mut bending = 0.0;
        // lens interiors between the tip clips
        for ridge in &self.ridges {
            let (m, b) = lens_integrals(ridge, grid2d, |x, y| {
                let p =
                    ridge.fold.origin + ridge.fold.tangent.scale(x) + ridge.fold.normal.scale(y);
                let jet = self.unblended_jet(self.cell.field.wrap(p));
                (jet.membrane_density(eta), jet.bending_density())
            });
            membrane += m;
            bending += b;
        }
        // vertex zones: constant core (membrane = 2 eta^2) plus the blended
        // annulus integrated in polar coordinates
        let rule_r = gauss_rule(10);
        let rule_a = gauss_rule(8);
        for zone in &self.zones {
            membrane += 2.0 * eta * eta * std::f64::consts::PI * zone.sigma * zone.sigma;
            let n_ang = 24;
            for pan in 0..n_ang {
                let a0 = std::f64::consts::TAU * pan as f64 / n_ang as f64;
                let a1 = std::f64::consts::TAU * (pan + 1) as f64 / n_ang as f64;
                for (an, aw) in rule_a.nodes.iter().zip(rule_a.weights.iter()) {
                    let ang = 0.5 * (a0 + a1) + 0.5 * (a1 - a0) * an;
                    let ja = 0.5 * (a1 - a0) * aw;
                    for (rn, rw) in rule_r.nodes.iter().zip(rule_r.weights.iter()) {
                        let r = 1.5 * zone.sigma + 0.5 * zone.sigma * rn;
                        let jr = 0.5 * zone.sigma * rw * r;
                        let p = zone.center + Vec2::new(ang.cos(), ang.sin()).scale(r);
                        let jet = self.blended_jet(self.cell.field.wrap(p));
                        membrane += ja * jr * jet.membrane_density(eta);
                        bending += ja * jr * jet.bending_density();
                    }
                }
            }
        }
        (membrane, bending)
    }
}

impl Field2D for LatticeField {
    fn jet(&self, p: Vec2) -> FieldJet {
        self.blended_jet(self.cell.field.wrap(p))
    }

    fn bulk_integrals(&self, eta: f64, _quad_order: usize, grid2d: usize) -> Result<BulkIntegrals> {
        // the linear remainder is exactly membrane free; verify once
        for (i, piece) in self.cell.field.pieces.iter().enumerate() {
            let m = piece.membrane_density(eta);
            if m > 1e-20 {
                return Err(BlisterError::Construction(format!(
                    "piece {i} of the base cell carries membrane density {m}"
                )));
            }
        }
        let (membrane, bending) = self.cell_integrals(eta, grid2d);
        let mult = (self.tiles * self.tiles) as f64;
        Ok(BulkIntegrals {
            membrane_int: membrane * mult,
            bending_int: bending * mult,
        })
    }

    fn substrate_cover(&self, omega: &BondedSet2D) -> Vec<(crate::geometry::Rect, f64)> {
        let rects = omega.rects();
        if rects.len() == self.tiles * self.tiles && !rects.is_empty() {
            return vec![(rects[0], rects.len() as f64)];
        }
        rects.iter().map(|r| (*r, 1.0)).collect()
    }
}
