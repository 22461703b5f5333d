//! The smoothing curve of the minimal ridge: a C^2 curve
//! gamma = (0, gamma2, gamma3) on [-1, 1] satisfying the speed condition
//! gamma2' + (gamma3')^2 / 2 = 1 pointwise, linear with slopes
//! (1 - alpha^2/2, alpha) near both endpoints, built by mollifying the
//! piecewise-linear profile and inserting a bump on [1/3, 2/3] whose
//! amplitude restores the endpoint consistency condition.
//!
//! The curve is queried inside 2D quadrature loops, so the two cumulative
//! integrals it carries (int (gamma3')^2 and int gamma'.nu) are tabulated
//! once per curve as Hermite interpolants with analytically known node
//! derivatives; node values come from composite Gauss accumulation.

use crate::error::{BlisterError, Result};
use crate::quadrature::gauss_segment;
use std::sync::OnceLock;

/// Normalization of exp(-1/(1-s^2)) over [-1, 1].
fn bump_mass() -> f64 {
    static MASS: OnceLock<f64> = OnceLock::new();
    *MASS.get_or_init(|| gauss_segment(|s| (-1.0 / (1.0 - s * s)).exp(), -1.0, 1.0, 96))
}

/// The standard mollifier: smooth, even, unit mass, supported on |xi| < 1/3.
pub fn mollifier(xi: f64) -> f64 {
    let s = 3.0 * xi;
    if s.abs() >= 1.0 {
        return 0.0;
    }
    3.0 / bump_mass() * (-1.0 / (1.0 - s * s)).exp()
}

/// First derivative of the mollifier.
pub fn mollifier_d1(xi: f64) -> f64 {
    let s = 3.0 * xi;
    if s.abs() >= 1.0 {
        return 0.0;
    }
    let g1 = -2.0 * s / (1.0 - s * s).powi(2);
    3.0 * mollifier(xi) * g1
}

/// Second derivative of the mollifier.
pub fn mollifier_d2(xi: f64) -> f64 {
    let s = 3.0 * xi;
    if s.abs() >= 1.0 {
        return 0.0;
    }
    let om = 1.0 - s * s;
    let g1 = -2.0 * s / (om * om);
    let g2 = -2.0 / (om * om) - 8.0 * s * s / (om * om * om);
    9.0 * mollifier(xi) * (g1 * g1 + g2)
}

/// Composite Gauss accumulation (panels of order-24 rules); accurate for
/// the table-backed curve functions whose interpolants carry node-level
/// micro-kinks that defeat single high-order rules.
fn composite_gauss(f: &dyn Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..panels {
        let x0 = a + (b - a) * i as f64 / panels as f64;
        let x1 = a + (b - a) * (i + 1) as f64 / panels as f64;
        acc += gauss_segment(f, x0, x1, 24);
    }
    acc
}

/// Cubic Hermite table on a uniform grid: interpolates node values exactly
/// and uses analytic node derivatives, so evaluations stay at quadrature
/// accuracy without per-call integration.
#[derive(Debug, Clone)]
struct HermiteTable {
    t0: f64,
    t1: f64,
    vals: Vec<f64>,
    ders: Vec<f64>,
}

impl HermiteTable {
    fn build(t0: f64, t1: f64, n: usize, deriv: &dyn Fn(f64) -> f64) -> Self {
        let mut vals = vec![0.0; n + 1];
        let mut ders = vec![0.0; n + 1];
        let dt = (t1 - t0) / n as f64;
        ders[0] = deriv(t0);
        for i in 1..=n {
            let a = t0 + (i - 1) as f64 * dt;
            let b = t0 + i as f64 * dt;
            vals[i] = vals[i - 1] + gauss_segment(deriv, a, b, 24);
            ders[i] = deriv(b);
        }
        Self { t0, t1, vals, ders }
    }

    fn eval(&self, t: f64) -> f64 {
        let n = self.vals.len() - 1;
        let dt = (self.t1 - self.t0) / n as f64;
        let pos = ((t - self.t0) / dt).clamp(0.0, n as f64 - 1e-12);
        let i = pos.floor() as usize;
        let s = pos - i as f64;
        let (v0, v1) = (self.vals[i], self.vals[i + 1]);
        let (d0, d1) = (self.ders[i] * dt, self.ders[i + 1] * dt);
        let s2 = s * s;
        let s3 = s2 * s;
        (2.0 * s3 - 3.0 * s2 + 1.0) * v0
            + (s3 - 2.0 * s2 + s) * d0
            + (-2.0 * s3 + 3.0 * s2) * v1
            + (s3 - s2) * d1
    }

    fn total(&self) -> f64 {
        *self.vals.last().expect("non-empty")
    }
}

/// Mollifier CDF values P(t) = int_{-1/3}^t rho and Q(t) = int_{-1/3}^t s rho(s) ds,
/// shared by every curve.
fn cdf_tables() -> &'static (HermiteTable, HermiteTable) {
    static TABLES: OnceLock<(HermiteTable, HermiteTable)> = OnceLock::new();
    TABLES.get_or_init(|| {
        let p = HermiteTable::build(-1.0 / 3.0, 1.0 / 3.0, 768, &mollifier);
        let q = HermiteTable::build(-1.0 / 3.0, 1.0 / 3.0, 768, &|s| s * mollifier(s));
        (p, q)
    })
}

fn cdf_p(t: f64) -> f64 {
    if t <= -1.0 / 3.0 {
        0.0
    } else if t >= 1.0 / 3.0 {
        cdf_tables().0.total()
    } else {
        cdf_tables().0.eval(t)
    }
}

fn cdf_q(t: f64) -> f64 {
    if t <= -1.0 / 3.0 || t >= 1.0 / 3.0 {
        0.0
    } else {
        cdf_tables().1.eval(t)
    }
}

#[derive(Debug, Clone, Copy)]
struct CurveParams {
    alpha_l: f64,
    alpha_r: f64,
    lambda: f64,
}

fn gamma3_raw(c: &CurveParams, t: f64) -> f64 {
    let third = 1.0 / 3.0;
    if t <= -third {
        c.alpha_l * t
    } else if t < third {
        let c1 = 0.5 * (c.alpha_l + c.alpha_r);
        let c2 = 0.5 * (c.alpha_r - c.alpha_l);
        // rho * |.|: a(t) = t (2P - 1) - 2Q
        let a = t * (2.0 * cdf_p(t) - 1.0) - 2.0 * cdf_q(t);
        c1 * t + c2 * a
    } else if t < 2.0 / 3.0 {
        c.alpha_r * t + c.lambda * mollifier(2.0 * t - 1.0)
    } else {
        c.alpha_r * t
    }
}

fn gamma3_prime_raw(c: &CurveParams, t: f64) -> f64 {
    let third = 1.0 / 3.0;
    if t <= -third {
        c.alpha_l
    } else if t < third {
        let c1 = 0.5 * (c.alpha_l + c.alpha_r);
        let c2 = 0.5 * (c.alpha_r - c.alpha_l);
        c1 + c2 * (2.0 * cdf_p(t) - 1.0)
    } else if t < 2.0 / 3.0 {
        c.alpha_r + 2.0 * c.lambda * mollifier_d1(2.0 * t - 1.0)
    } else {
        c.alpha_r
    }
}

fn gamma3_pp_raw(c: &CurveParams, t: f64) -> f64 {
    let third = 1.0 / 3.0;
    if t <= -third {
        0.0
    } else if t < third {
        (c.alpha_r - c.alpha_l) * mollifier(t)
    } else if t < 2.0 / 3.0 {
        4.0 * c.lambda * mollifier_d2(2.0 * t - 1.0)
    } else {
        0.0
    }
}

/// The smoothing curve for endpoint slopes `alpha_l` (t = -1 side) and
/// `alpha_r` (t = +1 side).
#[derive(Debug)]
pub struct GammaCurve {
    pub alpha_l: f64,
    pub alpha_r: f64,
    /// amplitude of the consistency bump on [1/3, 2/3]
    pub lambda: f64,
    params: CurveParams,
    /// int_{-1/3}^t (gamma3')^2 on the non-linear window
    g3sq_mid: HermiteTable,
    /// int_{-1/3}^t gamma'.nu on [-1/3, 1] (identically 0 before)
    omega_tab: HermiteTable,
    e_defect: f64,
    consistency_residual: f64,
}

impl GammaCurve {
    pub fn new(alpha_l: f64, alpha_r: f64) -> Result<Self> {
        if alpha_l.abs() > 1.0 || alpha_r.abs() > 1.0 {
            return Err(BlisterError::InvalidParams(format!(
                "endpoint slopes must lie in [-1, 1], got ({alpha_l}, {alpha_r})"
            )));
        }
        // lambda^2 restores int_{-1}^{1} (gamma3')^2 = alpha_l^2 + alpha_r^2
        let c0 = CurveParams {
            alpha_l,
            alpha_r,
            lambda: 0.0,
        };
        let third = 1.0 / 3.0;
        let mid_sq = composite_gauss(&|t| gamma3_prime_raw(&c0, t).powi(2), -third, third, 256);
        let tilde_sq = (alpha_l * alpha_l + alpha_r * alpha_r) * (2.0 / 3.0) + mid_sq;
        let r2 = composite_gauss(
            &|t: f64| mollifier_d1(2.0 * t - 1.0).powi(2),
            third,
            2.0 * third,
            256,
        );
        let target = alpha_l * alpha_l + alpha_r * alpha_r;
        let lam_sq = (target - tilde_sq) / (4.0 * r2);
        if lam_sq < -1e-15 {
            return Err(BlisterError::Construction(format!(
                "consistency condition unsolvable (lambda^2 = {lam_sq}); mollifier too narrow"
            )));
        }
        let params = CurveParams {
            alpha_l,
            alpha_r,
            lambda: lam_sq.max(0.0).sqrt(),
        };

        let g3sq_mid = HermiteTable::build(-third, 2.0 * third, 2048, &|t| {
            gamma3_prime_raw(&params, t).powi(2)
        });
        let consistency_residual = {
            let full = alpha_l * alpha_l * (2.0 / 3.0)
                + g3sq_mid.total()
                + alpha_r * alpha_r * (1.0 / 3.0);
            full - target
        };
        // gamma2 and nu are now cheap; tabulate omega the same way
        let probe = Self {
            alpha_l,
            alpha_r,
            lambda: params.lambda,
            params,
            g3sq_mid: g3sq_mid.clone(),
            omega_tab: HermiteTable {
                t0: 0.0,
                t1: 1.0,
                vals: vec![0.0; 2],
                ders: vec![0.0; 2],
            },
            e_defect: 0.0,
            consistency_residual,
        };
        let omega_tab = HermiteTable::build(-third, 1.0, 2048, &|t| probe.gprime_dot_nu(t));
        let e_defect = omega_tab.total();
        Ok(Self {
            alpha_l,
            alpha_r,
            lambda: params.lambda,
            params,
            g3sq_mid,
            omega_tab,
            e_defect,
            consistency_residual,
        })
    }

    pub fn gamma3(&self, t: f64) -> f64 {
        gamma3_raw(&self.params, t)
    }

    pub fn gamma3_prime(&self, t: f64) -> f64 {
        gamma3_prime_raw(&self.params, t)
    }

    pub fn gamma3_pp(&self, t: f64) -> f64 {
        gamma3_pp_raw(&self.params, t)
    }

    /// int_{-1}^{t} (gamma3')^2.
    fn g3sq(&self, t: f64) -> f64 {
        let third = 1.0 / 3.0;
        let al2 = self.alpha_l * self.alpha_l;
        let ar2 = self.alpha_r * self.alpha_r;
        if t <= -third {
            al2 * (t + 1.0)
        } else if t >= 2.0 * third {
            al2 * (2.0 / 3.0) + self.g3sq_mid.total() + ar2 * (t - 2.0 / 3.0)
        } else {
            al2 * (2.0 / 3.0) + self.g3sq_mid.eval(t)
        }
    }

    /// gamma2 from integrating the speed condition with
    /// gamma2(-1) = -(1 - alpha_l^2 / 2).
    pub fn gamma2(&self, t: f64) -> f64 {
        t + 0.5 * self.alpha_l * self.alpha_l - 0.5 * self.g3sq(t)
    }

    pub fn gamma2_prime(&self, t: f64) -> f64 {
        1.0 - 0.5 * self.gamma3_prime(t).powi(2)
    }

    pub fn gamma2_pp(&self, t: f64) -> f64 {
        -self.gamma3_prime(t) * self.gamma3_pp(t)
    }

    /// nu(t) = gamma(t) - t gamma'(t), components 2 and 3.
    pub fn nu2(&self, t: f64) -> f64 {
        self.gamma2(t) - t * self.gamma2_prime(t)
    }

    pub fn nu3(&self, t: f64) -> f64 {
        self.gamma3(t) - t * self.gamma3_prime(t)
    }

    pub fn gprime_dot_nu(&self, t: f64) -> f64 {
        self.gamma2_prime(t) * self.nu2(t) + self.gamma3_prime(t) * self.nu3(t)
    }

    /// omega(t) = int_{-1}^t gamma' . nu ds.
    pub fn omega(&self, t: f64) -> f64 {
        if t <= -1.0 / 3.0 {
            0.0 // nu vanishes identically on the linear branch
        } else if t >= 1.0 {
            self.e_defect
        } else {
            self.omega_tab.eval(t)
        }
    }

    /// E = int_{-1}^{1} gamma' . nu dt, the beta-correction defect.
    pub fn e_defect(&self) -> f64 {
        self.e_defect
    }

    /// Residual of the consistency condition
    /// int (gamma3')^2 dt - (alpha_l^2 + alpha_r^2).
    pub fn consistency_residual(&self) -> f64 {
        self.consistency_residual
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::quad_piecewise;

    #[test]
    fn trivial_curve_is_straight() {
        let g = GammaCurve::new(0.0, 0.0).unwrap();
        assert_eq!(g.lambda, 0.0);
        for t in [-1.0, -0.4, 0.0, 0.55, 1.0] {
            assert!(g.gamma3(t).abs() < 1e-15);
            assert!(
                (g.gamma2(t) - t).abs() < 1e-13,
                "gamma2({t}) = {}",
                g.gamma2(t)
            );
        }
    }

    #[test]
    fn endpoint_values_and_linear_tails() {
        let (al, ar) = (0.2, -0.2);
        let g = GammaCurve::new(al, ar).unwrap();
        assert!((g.gamma3(-1.0) + al).abs() < 1e-14);
        assert!((g.gamma3(1.0) - ar).abs() < 1e-14);
        // exact linear form on the outer branches
        for t in [-1.0, -0.9, -0.75, -0.67] {
            assert!((g.gamma3(t) - al * t).abs() < 1e-14);
            assert!((g.gamma2(t) - (1.0 - 0.5 * al * al) * t).abs() < 1e-12);
        }
        for t in [0.7, 0.85, 1.0] {
            assert!((g.gamma3(t) - ar * t).abs() < 1e-14);
            assert!((g.gamma2(t) - (1.0 - 0.5 * ar * ar) * t).abs() < 1e-12);
        }
        // displayed endpoint difference: 2 - (al^2 + ar^2)/2
        let diff = g.gamma2(1.0) - g.gamma2(-1.0);
        assert!((diff - 1.96).abs() < 1e-12, "gamma2 span {diff}");
    }

    #[test]
    fn consistency_and_speed_condition() {
        for (al, ar) in [(0.3, 0.1), (0.25, -0.4), (0.0, 0.5), (-0.2, -0.2)] {
            let g = GammaCurve::new(al, ar).unwrap();
            assert!(
                g.consistency_residual().abs() < 1e-12,
                "consistency {} at ({al},{ar})",
                g.consistency_residual()
            );
            for i in 0..=400 {
                let t = -1.0 + 2.0 * i as f64 / 400.0;
                let r = g.gamma2_prime(t) + 0.5 * g.gamma3_prime(t).powi(2) - 1.0;
                assert!(r.abs() < 1e-12, "speed residual {r} at {t}");
            }
            // independent check of gamma2' against a finite difference of the
            // integrated gamma2
            for t in [-0.5, 0.1, 0.45, 0.8] {
                let dt = 1e-5;
                let fd = (g.gamma2(t + dt) - g.gamma2(t - dt)) / (2.0 * dt);
                assert!((fd - g.gamma2_prime(t)).abs() < 1e-7, "fd mismatch at {t}");
            }
        }
    }

    #[test]
    fn omega_matches_e_defect_and_reduced_formula() {
        let (al, ar) = (0.35, -0.15);
        let g = GammaCurve::new(al, ar).unwrap();
        let e = g.e_defect();
        assert!((g.omega(1.0) - e).abs() < 1e-13);
        assert!(g.omega(-0.5).abs() < 1e-15);
        // telescoped form: E = (ar^4 - al^4)/8 - int t gamma3'^4 dt / 4
        let pieces: Vec<f64> = (0..=192).map(|i| -1.0 + 2.0 * i as f64 / 192.0).collect();
        let reduced = (ar.powi(4) - al.powi(4)) / 8.0
            - 0.25 * quad_piecewise(|t| t * g.gamma3_prime(t).powi(4), &pieces, 16).unwrap();
        assert!((e - reduced).abs() < 1e-10, "E {e} vs reduced {reduced}");
    }

    #[test]
    fn defect_is_fourth_order_in_slope() {
        let mut rows = Vec::new();
        for k in 0..6 {
            let phi = 0.3 * 0.7f64.powi(k);
            let g = GammaCurve::new(-0.4 * phi, phi).unwrap();
            rows.push((phi.ln(), g.e_defect().abs().ln()));
        }
        let n = rows.len() as f64;
        let sx: f64 = rows.iter().map(|r| r.0).sum();
        let sy: f64 = rows.iter().map(|r| r.1).sum();
        let sxx: f64 = rows.iter().map(|r| r.0 * r.0).sum();
        let sxy: f64 = rows.iter().map(|r| r.0 * r.1).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        assert!(slope >= 3.8, "defect order {slope}");
    }

    #[test]
    fn rejects_out_of_range_slopes() {
        assert!(GammaCurve::new(1.5, 0.0).is_err());
    }

    proptest::proptest! {
        // the bump amplitude is always solvable: mollification strictly
        // lowers the slope energy, so lambda^2 >= 0 for every slope pair
        #[test]
        fn bump_amplitude_always_solvable(al in -1.0f64..1.0, ar in -1.0f64..1.0) {
            let g = GammaCurve::new(al, ar).unwrap();
            proptest::prop_assert!(g.lambda >= 0.0);
            proptest::prop_assert!(g.consistency_residual().abs() < 1e-11);
        }
    }
}
