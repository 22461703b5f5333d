//! 2D blister-lattice constructions: the piecewise-linear Step-1 cell, the
//! smoothing curve and minimal-ridge machinery, the assembled lattice, and
//! the closed-form 2D bound formulas.

pub mod cell;
pub mod corner;
pub mod gamma;
pub mod lattice;
pub mod ridge;

pub use cell::{build_cell, cell_assembly, extract_fold_data, FoldData, FoldKind, Step1Cell};
pub use corner::{corner_map, shear_residual_roots, t2_shear_residual, CornerMap, CORNER_D};
pub use gamma::GammaCurve;
pub use lattice::{assemble_lattice, LatticeField};
pub use ridge::{ridge_deformation, ridge_energy, RidgeField, RidgeSpec};

use crate::error::{BlisterError, Result};
use crate::params::Params;

/// Closed-form bound values of the 2D theory at one parameter point.
#[derive(Debug, Clone, Copy)]
pub struct Bounds2D {
    /// K4 min(alpha_m eta^2 theta^3, alpha_s^{2/3} eta^{5/3} theta^{8/3}) h
    pub lower: f64,
    /// alpha_m eta^2 h
    pub upper_flat: f64,
    /// (alpha_m eta^2 theta + K5 alpha_m eta^{3/2} h) h
    pub upper_single: f64,
    /// K6 alpha_m^{1/16} alpha_s^{5/8} eta^{27/16} h
    pub upper_lattice: f64,
    /// alpha_m^{1/16} h / (eta^{5/16} alpha_s^{3/8})
    pub l2: f64,
    /// lattice scale fits in the unit square: l2 < c2
    pub cond_2d1a: bool,
    /// ridges fit in the lattice: h / sqrt(alpha_m eta) < c1 l2
    pub cond_2d1b: bool,
    /// small-slope modelling condition: eta < c3 alpha_s^{2/17} / alpha_m^{3/17}
    pub cond_2d2: bool,
}

/// Prefactors and regime constants of the 2D formulas.
#[derive(Debug, Clone, Copy)]
pub struct BoundConstants2D {
    pub k4: f64,
    pub k5: f64,
    pub k6: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl Default for BoundConstants2D {
    fn default() -> Self {
        Self {
            k4: 1.0,
            k5: 1.0,
            k6: 1.0,
            c1: 1.0 / 8.0,
            c2: 0.5,
            c3: 0.25,
        }
    }
}

/// The optimal lattice scale l2.
pub fn lattice_scale(params: &Params) -> f64 {
    params.alpha_m.powf(1.0 / 16.0) * params.h
        / (params.eta.powf(5.0 / 16.0) * params.alpha_s.powf(3.0 / 8.0))
}

/// Evaluate the 2D bound formulas and regime flags.
pub fn bounds_2d(params: &Params, constants: &BoundConstants2D) -> Result<Bounds2D> {
    if constants.k4 <= 0.0 || constants.k5 <= 0.0 || constants.k6 <= 0.0 {
        return Err(BlisterError::InvalidParams(
            "bound constants must be positive".into(),
        ));
    }
    let (h, eta, als, am, theta) = (
        params.h,
        params.eta,
        params.alpha_s,
        params.alpha_m,
        params.theta,
    );
    let lower = constants.k4
        * (am * eta * eta * theta.powi(3))
            .min(als.powf(2.0 / 3.0) * eta.powf(5.0 / 3.0) * theta.powf(8.0 / 3.0))
        * h;
    let upper_flat = am * eta * eta * h;
    let upper_single = (am * eta * eta * theta + constants.k5 * am * eta.powf(1.5) * h) * h;
    let l2 = lattice_scale(params);
    let upper_lattice =
        constants.k6 * am.powf(1.0 / 16.0) * als.powf(5.0 / 8.0) * eta.powf(27.0 / 16.0) * h;
    Ok(Bounds2D {
        lower,
        upper_flat,
        upper_single,
        upper_lattice,
        l2,
        cond_2d1a: l2 < constants.c2,
        cond_2d1b: h / (am * eta).sqrt() < constants.c1 * l2,
        cond_2d2: eta < constants.c3 * als.powf(2.0 / 17.0) / am.powf(3.0 / 17.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l2_example() {
        let p = Params::new(1e-4, 0.01, 0.1, 1.0, 0.5).unwrap();
        let b = bounds_2d(&p, &BoundConstants2D::default()).unwrap();
        assert!((b.l2 - 1e-3).abs() < 1e-15, "l2 {}", b.l2);
    }

    #[test]
    fn regime_flags() {
        // eta well below alpha_s^2: the ridge condition must fail
        let p = Params::new(1e-6, 1e-6, 0.1, 1.0, 0.5).unwrap();
        let b = bounds_2d(&p, &BoundConstants2D::default()).unwrap();
        assert!(!b.cond_2d1b);
        // between the curves with small h: eligible
        let p = Params::new(1e-7, 0.01, 0.01, 1.0, 0.5).unwrap();
        let b = bounds_2d(
            &p,
            &BoundConstants2D {
                c1: 1.0,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(b.cond_2d1a && b.cond_2d2);
        // eta above the modelling curve: flagged out
        let p = Params::new(1e-7, 0.9, 1e-4, 1.0, 0.5).unwrap();
        let b = bounds_2d(&p, &BoundConstants2D::default()).unwrap();
        assert!(!b.cond_2d2);
    }
}
