//! Cross-module invariants: torus translation invariance, the dimensional
//! rescaling identity, substrate homogeneity and classification stability.

use blisterlab::construct1d::{periodic_array, single_blister};
use blisterlab::energy::{energy_1d, QuadSpec};
use blisterlab::geometry::BondedSet1D;
use blisterlab::minimize::{minimize_profile, MinimizeOpts};
use blisterlab::params::Params;
use blisterlab::quadrature::quad_piecewise;
use blisterlab::scaling::least_squares;

fn params() -> Params {
    Params::new(0.01, 0.1, 1.0, 1.0, 0.5).unwrap()
}

#[test]
fn energy_invariant_under_joint_translation() {
    let p = params();
    let quad = QuadSpec::default();
    let (prof, om) = periodic_array(&p, 0.25).unwrap();
    let e0 = energy_1d(&prof, &om, &p, &quad).unwrap();
    for dx in [0.1, 0.37, 0.734, 1.2] {
        let e = energy_1d(&prof.translated(dx), &om.translated(dx), &p, &quad).unwrap();
        let rel = (e.total - e0.total).abs() / e0.total;
        assert!(rel < 1e-9, "relative change {rel} at shift {dx}");
    }
}

/// The dimensional energy at scale L on the rescaled configuration equals
/// L times the unit-scale energy:
///   E_dim = (alpha_m t / L) int |w_x + u_x^2/2 - eta|^2
///         + (t^3 / L) int |u_xx|^2
///         + (alpha_s / L) (int_Omega |w_x|^2)^{1/2} (int_Omega |w|^2)^{1/2}
/// with w(x) = L w1(x/L), u(x) = L u1(x/L) on the torus of size L.
#[test]
fn dimensional_rescaling_identity() {
    let p = params();
    let quad = QuadSpec::default();
    let (prof, om) = single_blister(&p).unwrap();
    let e_unit = energy_1d(&prof, &om, &p, &quad).unwrap();
    let cap_l = 2.5;
    let t = p.h * cap_l; // dimensional thickness with h = t / L

    // dimensional integrands evaluated through the unit-scale profile
    let membrane = quad_piecewise(
        |x| {
            let s = x / cap_l;
            (prof.w_x(s) + 0.5 * prof.u_x(s).powi(2) - p.eta).powi(2)
        },
        &prof
            .breakpoints()
            .iter()
            .map(|b| b * cap_l)
            .collect::<Vec<_>>(),
        quad.order,
    )
    .unwrap();
    let bending = quad_piecewise(
        |x| (prof.u_xx(x / cap_l) / cap_l).powi(2),
        &prof
            .breakpoints()
            .iter()
            .map(|b| b * cap_l)
            .collect::<Vec<_>>(),
        quad.order,
    )
    .unwrap();
    let mut grad_sq = 0.0;
    let mut val_sq = 0.0;
    for iv in om.intervals() {
        grad_sq += quad_piecewise(
            |x| prof.w_x(x / cap_l).powi(2),
            &[iv.start * cap_l, iv.end * cap_l],
            quad.order,
        )
        .unwrap();
        val_sq += quad_piecewise(
            |x| (cap_l * prof.w(x / cap_l)).powi(2),
            &[iv.start * cap_l, iv.end * cap_l],
            quad.order,
        )
        .unwrap();
    }
    let e_dim = p.alpha_m * t / cap_l * membrane
        + t.powi(3) / cap_l * bending
        + p.alpha_s / cap_l * grad_sq.sqrt() * val_sq.sqrt();

    let rel = (e_dim - cap_l * e_unit.total).abs() / (cap_l * e_unit.total);
    assert!(rel < 1e-9, "dimensional identity off by {rel}");
}

#[test]
fn substrate_is_two_homogeneous_in_w() {
    let p = params();
    let quad = QuadSpec::default();
    let (prof, om) = periodic_array(&p, 0.25).unwrap();
    let e1 = energy_1d(&prof, &om, &p, &quad).unwrap();
    for c in [0.5, 2.0, 3.7] {
        let e = energy_1d(&prof.with_w_scaled(c), &om, &p, &quad).unwrap();
        let rel = (e.substrate - c * c * e1.substrate).abs() / e1.substrate;
        assert!(rel < 1e-12, "substrate not 2-homogeneous: {rel} at c = {c}");
    }
}

#[test]
fn winner_map_invariant_under_common_rescaling() {
    // argmin of (flat, single, lattice) upper bounds is unchanged when all
    // three energies carry a common positive factor
    use blisterlab::construct2d::{bounds_2d, BoundConstants2D};
    let c2d = BoundConstants2D::default();
    for (als, eta) in [(0.01, 0.01), (0.3, 1e-4), (1e-4, 0.2)] {
        let p = Params::new(1e-5, eta, als, 1.0, 0.5).unwrap();
        let b = bounds_2d(&p, &c2d).unwrap();
        let vals = [b.upper_flat, b.upper_single, b.upper_lattice];
        let argmin = |v: &[f64; 3]| {
            v.iter()
                .enumerate()
                .min_by(|a, b| a.1.total_cmp(b.1))
                .map(|(i, _)| i)
                .unwrap()
        };
        let base = argmin(&vals);
        for c in [0.1, 7.0, 1234.5] {
            let scaled = [c * vals[0], c * vals[1], c * vals[2]];
            assert_eq!(base, argmin(&scaled));
        }
    }
}

#[test]
fn descent_never_increases_energy() {
    // the reported minimum never exceeds the energy of its own start:
    // a short run from the same seed is an intermediate state of a long run
    let p = params();
    let om = BondedSet1D::single(0.5, 0.5).unwrap();
    let short = minimize_profile(
        &p,
        &om,
        128,
        9,
        &MinimizeOpts {
            max_iters: 50,
            ..Default::default()
        },
    )
    .unwrap();
    let long = minimize_profile(
        &p,
        &om,
        128,
        9,
        &MinimizeOpts {
            max_iters: 3000,
            ..Default::default()
        },
    )
    .unwrap();
    assert!(long.energy.total <= short.energy.total * (1.0 + 1e-12));
}

#[test]
fn periodic_upper_bound_constant_is_stable() {
    // energy of the periodic array at its own optimal cell length stays
    // within +-20% of a single prefactor across three decades of each
    // parameter
    use blisterlab::scaling::{sweep, Family, SweepSpec};
    let base = Params::new(1e-4, 0.01, 0.1, 1.0, 0.5).unwrap();
    let mut prefactors = Vec::new();
    for (name, from, to) in [
        ("h", 1e-6, 1e-3),
        ("eta", 1e-3, 1e-1),
        ("alpha_s", 1e-3, 1.0),
    ] {
        let rows =
            sweep(&SweepSpec::geometric(Family::Periodic1d, base, name, from, to, 8).unwrap())
                .unwrap();
        for r in rows.iter().filter(|r| !r.excluded) {
            let q = &r.params;
            let form = q.theta.powf(4.0 / 3.0) / (1.0 - q.theta).powf(2.0 / 3.0)
                * q.alpha_s.powf(2.0 / 3.0)
                * q.eta.powf(5.0 / 3.0)
                * q.h;
            prefactors.push(r.energy.total / form);
        }
    }
    let mean: f64 = prefactors.iter().sum::<f64>() / prefactors.len() as f64;
    for c in &prefactors {
        assert!(
            (c / mean - 1.0).abs() < 0.2,
            "prefactor {c} strays from mean {mean}"
        );
    }
    // and the linear h scaling of the optimal-cell construction
    let rows = sweep(&SweepSpec::geometric(Family::Periodic1d, base, "h", 1e-6, 1e-3, 10).unwrap())
        .unwrap();
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| !r.excluded)
        .map(|r| (r.value.ln(), r.energy.total.ln()))
        .collect();
    let (slope, _, _) = least_squares(&pts);
    assert!((slope - 1.0).abs() < 0.02, "h exponent {slope}");
}
