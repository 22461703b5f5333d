//! Parameter sweeps, log-log exponent fits, constant calibration and the
//! phase-diagram classification.

use crate::construct1d::{
    best_integer_cells, bounds_1d, cond_1d, flat_profile, optimal_cell_length, periodic_array,
    single_blister, BoundConstants1D,
};
use crate::construct2d::{assemble_lattice, bounds_2d, lattice_scale, BoundConstants2D};
use crate::energy::{energy_1d, EnergyBreakdown, QuadSpec};
use crate::error::{BlisterError, Result};
use crate::field::energy_field;
use crate::geometry::BondedSet1D;
use crate::minimize::{minimize_profile, MinimizeOpts};
use crate::params::Params;

/// Configuration families a sweep can evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Flat,
    Single,
    Periodic1d,
    Lattice2d,
    Minimized,
}

impl Family {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "flat" => Family::Flat,
            "single" => Family::Single,
            "periodic" | "periodic1d" => Family::Periodic1d,
            "lattice" | "lattice2d" => Family::Lattice2d,
            "minimized" => Family::Minimized,
            other => {
                return Err(BlisterError::InvalidParams(format!(
                    "unknown family `{other}`"
                )))
            }
        })
    }
}

/// One sweep: vary a named parameter over a geometric grid with the other
/// parameters frozen.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub family: Family,
    pub base: Params,
    pub vary: String,
    pub values: Vec<f64>,
    /// grid resolution for the minimized family
    pub n_grid: usize,
    pub seed: u64,
    pub quad: QuadSpec,
}

impl SweepSpec {
    pub fn geometric(
        family: Family,
        base: Params,
        vary: &str,
        from: f64,
        to: f64,
        points: usize,
    ) -> Result<Self> {
        if points < 4 {
            return Err(BlisterError::InvalidParams(
                "sweep needs at least 4 points".into(),
            ));
        }
        if !(from > 0.0 && to > from) {
            return Err(BlisterError::InvalidParams(
                "sweep bounds must satisfy 0 < from < to".into(),
            ));
        }
        let ratio = (to / from).powf(1.0 / (points as f64 - 1.0));
        let values = (0..points).map(|i| from * ratio.powi(i as i32)).collect();
        Ok(Self {
            family,
            base,
            vary: vary.to_string(),
            values,
            n_grid: 512,
            seed: 1,
            quad: QuadSpec::default(),
        })
    }

    /// Sweep over explicit grid values (strictly increasing).
    pub fn with_values(family: Family, base: Params, vary: &str, values: Vec<f64>) -> Result<Self> {
        if values.len() < 4 {
            return Err(BlisterError::InvalidParams(
                "sweep needs at least 4 points".into(),
            ));
        }
        Ok(Self {
            family,
            base,
            vary: vary.to_string(),
            values,
            n_grid: 512,
            seed: 1,
            quad: QuadSpec::default(),
        })
    }
}

/// One evaluated sweep row.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub value: f64,
    pub params: Params,
    pub energy: EnergyBreakdown,
    pub excluded: bool,
    pub note: String,
}

fn evaluate_family(spec: &SweepSpec, params: &Params) -> (EnergyBreakdown, bool, String) {
    let quad = &spec.quad;
    match spec.family {
        Family::Flat => match flat_profile(params.theta)
            .and_then(|(prof, om)| energy_1d(&prof, &om, params, quad))
        {
            Ok(e) => (e, false, String::new()),
            Err(e) => (EnergyBreakdown::zero(), true, e.to_string()),
        },
        Family::Single => match single_blister(params)
            .and_then(|(prof, om)| energy_1d(&prof, &om, params, quad))
        {
            Ok(e) => (e, false, String::new()),
            Err(e) => (EnergyBreakdown::zero(), true, e.to_string()),
        },
        Family::Periodic1d => {
            let l_star = optimal_cell_length(params);
            let (n, l) = best_integer_cells(params, l_star);
            let flagged = !cond_1d(params, 1.0);
            match periodic_array(params, l)
                .and_then(|(prof, om)| energy_1d(&prof, &om, params, quad))
            {
                Ok(e) => (
                    e,
                    flagged,
                    if flagged {
                        format!("one-period condition fails at n={n}")
                    } else {
                        String::new()
                    },
                ),
                Err(e) => (EnergyBreakdown::zero(), true, e.to_string()),
            }
        }
        Family::Lattice2d => {
            let l2 = lattice_scale(params);
            let n = (1.0 / l2).round().max(1.0) as usize;
            if n < 2 {
                return (
                    EnergyBreakdown::zero(),
                    true,
                    format!("lattice scale l2 = {l2} leaves fewer than two cells"),
                );
            }
            let l = 1.0 / n as f64;
            match assemble_lattice(params, l)
                .and_then(|(field, om)| energy_field(&field, &om, params, quad))
            {
                Ok(e) => (e, false, String::new()),
                Err(e) => (EnergyBreakdown::zero(), true, e.to_string()),
            }
        }
        Family::Minimized => {
            let l_star = optimal_cell_length(params);
            let (n_blisters, _) = best_integer_cells(params, l_star);
            let omega = match BondedSet1D::equispaced(n_blisters.max(1), params.theta) {
                Ok(o) => o,
                Err(e) => return (EnergyBreakdown::zero(), true, e.to_string()),
            };
            match minimize_profile(
                params,
                &omega,
                spec.n_grid,
                spec.seed,
                &MinimizeOpts::default(),
            ) {
                Ok(r) => {
                    let note = if r.converged {
                        String::new()
                    } else {
                        "not converged".to_string()
                    };
                    (r.energy, false, note)
                }
                Err(e) => (EnergyBreakdown::zero(), true, e.to_string()),
            }
        }
    }
}

/// Deterministic worker pool: chunks are assigned by index, results are
/// collected in input order, so the output is identical for every worker
/// count.
pub fn par_map<T, R, F>(items: &[T], workers: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let workers = workers.max(1).min(items.len().max(1));
    if workers <= 1 || items.len() <= 1 {
        return items.iter().map(&f).collect();
    }
    let mut out: Vec<Option<R>> = (0..items.len()).map(|_| None).collect();
    let chunk = items.len().div_ceil(workers);
    std::thread::scope(|scope| {
        for (w, slot) in out.chunks_mut(chunk).enumerate() {
            let f = &f;
            let base = w * chunk;
            let items = &items;
            scope.spawn(move || {
                for (i, s) in slot.iter_mut().enumerate() {
                    *s = Some(f(&items[base + i]));
                }
            });
        }
    });
    out.into_iter().map(|r| r.expect("filled")).collect()
}

/// Evaluate a sweep; rows whose family preconditions fail are flagged, not
/// fatal.
pub fn sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    sweep_with_workers(spec, 1)
}

pub fn sweep_with_workers(spec: &SweepSpec, workers: usize) -> Result<Vec<SweepRow>> {
    for w in spec.values.windows(2) {
        if w[1] <= w[0] {
            return Err(BlisterError::InvalidParams(
                "sweep grid must be strictly increasing".into(),
            ));
        }
    }
    let rows = par_map(&spec.values, workers, |&v| {
        let params = match spec.base.with(&spec.vary, v) {
            Ok(p) => p,
            Err(e) => {
                return SweepRow {
                    value: v,
                    params: spec.base,
                    energy: EnergyBreakdown::zero(),
                    excluded: true,
                    note: e.to_string(),
                }
            }
        };
        let (energy, excluded, note) = evaluate_family(spec, &params);
        SweepRow {
            value: v,
            params,
            energy,
            excluded,
            note,
        }
    });
    Ok(rows)
}

/// Result of a log-log least-squares fit.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub exponent: f64,
    pub prefactor: f64,
    pub r_squared: f64,
    pub excluded: Vec<usize>,
}

/// Least-squares slope of log(total energy) against log(value).
pub fn fit_exponent(rows: &[SweepRow]) -> Result<FitResult> {
    let excluded: Vec<usize> = rows
        .iter()
        .enumerate()
        .filter(|(_, r)| r.excluded || !(r.energy.total > 0.0))
        .map(|(i, _)| i)
        .collect();
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| !r.excluded && r.energy.total > 0.0)
        .map(|r| (r.value.ln(), r.energy.total.ln()))
        .collect();
    if pts.len() < 4 {
        return Err(BlisterError::InsufficientData(format!(
            "only {} valid rows for the fit",
            pts.len()
        )));
    }
    let (slope, intercept, r2) = least_squares(&pts);
    Ok(FitResult {
        exponent: slope,
        prefactor: intercept.exp(),
        r_squared: r2,
        excluded,
    })
}

/// Plain least squares on (x, y) pairs: (slope, intercept, R^2).
pub fn least_squares(pts: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    let mean_y = sy / n;
    let ss_tot: f64 = pts.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let ss_res: f64 = pts
        .iter()
        .map(|p| (p.1 - slope * p.0 - intercept).powi(2))
        .sum();
    let r2 = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else {
        1.0
    };
    (slope, intercept, r2)
}

/// Winner of the upper-bound comparison at one phase point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Winner {
    Flat,
    SingleBlister,
    Lattice,
}

impl Winner {
    pub fn as_str(&self) -> &'static str {
        match self {
            Winner::Flat => "flat",
            Winner::SingleBlister => "single_blister",
            Winner::Lattice => "lattice",
        }
    }
}

/// Phase regions: the lattice construction is invalid in A, wins in B, and
/// loses (or never applies) in C.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    A,
    B,
    C,
}

impl Region {
    pub fn as_str(&self) -> &'static str {
        match self {
            Region::A => "A",
            Region::B => "B",
            Region::C => "C",
        }
    }
}

/// One phase-diagram grid point.
#[derive(Debug, Clone)]
pub struct PhasePoint {
    pub alpha_s: f64,
    pub eta: f64,
    pub winner: Winner,
    pub region: Region,
    /// raw curve flags: eta > alpha_s^2 / alpha_m^3 and
    /// eta < c3 alpha_s^{2/17} / alpha_m^{3/17}
    pub above_lower_curve: bool,
    pub below_upper_curve: bool,
    /// constant-based regime flags of the bound formulas
    pub cond_2d1a: bool,
    pub cond_2d1b: bool,
    pub cond_2d2: bool,
}

/// Calibrated prefactors shared by the classifier.
#[derive(Debug, Clone, Copy)]
pub struct CalibratedConstants {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub k4: f64,
    pub k5: f64,
    pub k6: f64,
    pub c_ridge: f64,
}

impl Default for CalibratedConstants {
    fn default() -> Self {
        Self {
            k1: 1.0,
            k2: 1.0,
            k3: 1.0,
            k4: 1.0,
            k5: 1.0,
            k6: 1.0,
            c_ridge: 1.0,
        }
    }
}

/// Classify every grid point by comparing the closed-form upper bounds.
/// The lattice candidate competes only between the two boundary curves
/// (the slope-2 curve from the ridge-fitting condition and the slope-2/17
/// modelling curve).
pub fn classify_phase(
    alpha_s_grid: &[f64],
    eta_grid: &[f64],
    base: &Params,
    constants: &CalibratedConstants,
    c2d: &BoundConstants2D,
) -> Result<Vec<PhasePoint>> {
    if alpha_s_grid.is_empty() || eta_grid.is_empty() {
        return Err(BlisterError::InvalidParams("empty phase grid".into()));
    }
    let mut out = Vec::with_capacity(alpha_s_grid.len() * eta_grid.len());
    for &als in alpha_s_grid {
        for &eta in eta_grid {
            let p = Params::new(base.h, eta, als, base.alpha_m, base.theta)?;
            let consts2 = BoundConstants2D {
                k4: constants.k4,
                k5: constants.k5,
                k6: constants.k6,
                ..*c2d
            };
            let b = bounds_2d(&p, &consts2)?;
            let above_lower_curve = eta > als * als / p.alpha_m.powi(3);
            let below_upper_curve =
                eta < c2d.c3 * als.powf(2.0 / 17.0) / p.alpha_m.powf(3.0 / 17.0);
            let eligible = above_lower_curve && below_upper_curve && b.cond_2d1a;
            let mut winner = if b.upper_flat <= b.upper_single {
                Winner::Flat
            } else {
                Winner::SingleBlister
            };
            let best_fs = b.upper_flat.min(b.upper_single);
            if eligible && b.upper_lattice < best_fs {
                winner = Winner::Lattice;
            }
            let region = if !below_upper_curve {
                Region::A
            } else if winner == Winner::Lattice {
                Region::B
            } else {
                Region::C
            };
            out.push(PhasePoint {
                alpha_s: als,
                eta,
                winner,
                region,
                above_lower_curve,
                below_upper_curve,
                cond_2d1a: b.cond_2d1a,
                cond_2d1b: b.cond_2d1b,
                cond_2d2: b.cond_2d2,
            });
        }
    }
    Ok(out)
}

/// Fit the bound prefactors from sweep data. Upper-bound constants are
/// least-squares prefactors of the corresponding formulas; lower-bound
/// constants are the largest values keeping the bound below every observed
/// energy.
pub fn calibrate_constants(
    single_rows: &[SweepRow],
    periodic_rows: &[SweepRow],
    lattice_rows: &[SweepRow],
    minimized_rows: &[SweepRow],
    ridge_prefactor: Option<f64>,
) -> Result<CalibratedConstants> {
    let ones1 = BoundConstants1D::default();
    let mut out = CalibratedConstants::default();

    // K2 from the single-blister bending term (exact prefactor 8 pi^2)
    let mut k2 = Vec::new();
    for r in single_rows.iter().filter(|r| !r.excluded) {
        let p = &r.params;
        k2.push(r.energy.bending * (1.0 - p.theta) / (p.h.powi(3) * p.eta));
    }
    if k2.is_empty() {
        return Err(BlisterError::InsufficientData(
            "no single-blister rows".into(),
        ));
    }
    out.k2 = k2.iter().sum::<f64>() / k2.len() as f64;

    // K3: prefactor of the periodic-array law
    let mut k3 = Vec::new();
    for r in periodic_rows.iter().filter(|r| !r.excluded) {
        let p = &r.params;
        let form = p.theta.powf(4.0 / 3.0) / (1.0 - p.theta).powf(2.0 / 3.0)
            * p.alpha_s.powf(2.0 / 3.0)
            * p.eta.powf(5.0 / 3.0)
            * p.h;
        k3.push(r.energy.total / form);
    }
    if k3.len() < 4 {
        return Err(BlisterError::InsufficientData(
            "too few periodic rows".into(),
        ));
    }
    out.k3 = k3.iter().sum::<f64>() / k3.len() as f64;

    // K1: largest constant bounding every minimized energy from below
    let mut k1 = f64::INFINITY;
    for r in minimized_rows.iter().filter(|r| !r.excluded) {
        let b = bounds_1d(&r.params, &ones1)?;
        if b.lower > 0.0 {
            k1 = k1.min(r.energy.total / b.lower);
        }
    }
    if k1.is_finite() {
        out.k1 = k1;
    }

    // K6 and K4 from the lattice data
    let mut k6 = Vec::new();
    let mut k4 = f64::INFINITY;
    for r in lattice_rows.iter().filter(|r| !r.excluded) {
        let p = &r.params;
        let form =
            p.alpha_m.powf(1.0 / 16.0) * p.alpha_s.powf(5.0 / 8.0) * p.eta.powf(27.0 / 16.0) * p.h;
        k6.push(r.energy.total / form);
        let lower = (p.alpha_m * p.eta * p.eta * p.theta.powi(3))
            .min(p.alpha_s.powf(2.0 / 3.0) * p.eta.powf(5.0 / 3.0) * p.theta.powf(8.0 / 3.0))
            * p.h;
        if lower > 0.0 {
            k4 = k4.min(r.energy.total / lower);
        }
    }
    if !k6.is_empty() {
        out.k6 = k6.iter().sum::<f64>() / k6.len() as f64;
    }
    if k4.is_finite() {
        out.k4 = k4;
    }
    if let Some(c) = ridge_prefactor {
        out.c_ridge = c;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> Params {
        Params::new(1e-3, 0.01, 0.1, 1.0, 0.5).unwrap()
    }

    #[test]
    fn synthetic_power_law_is_exact() {
        let rows: Vec<SweepRow> = (0..8)
            .map(|i| {
                let x = 0.1 * 2f64.powi(i);
                SweepRow {
                    value: x,
                    params: base(),
                    energy: EnergyBreakdown::new(3.0 * x.powf(1.5), 0.0, 0.0),
                    excluded: false,
                    note: String::new(),
                }
            })
            .collect();
        let fit = fit_exponent(&rows).unwrap();
        assert!((fit.exponent - 1.5).abs() < 1e-12);
        assert!((fit.prefactor - 3.0).abs() < 1e-10);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sweep_bookkeeping() {
        let spec = SweepSpec::geometric(Family::Periodic1d, base(), "h", 1e-4, 1e-1, 12).unwrap();
        let rows = sweep(&spec).unwrap();
        assert_eq!(rows.len(), 12);
        // at large h the one-period condition fails and rows are flagged
        assert!(rows.iter().any(|r| r.excluded || !r.note.is_empty()));
        // determinism across worker counts
        let rows4 = sweep_with_workers(&spec, 4).unwrap();
        for (a, b) in rows.iter().zip(rows4.iter()) {
            assert_eq!(a.energy.total.to_bits(), b.energy.total.to_bits());
        }
    }

    #[test]
    fn periodic_eta_exponent() {
        let p = Params::new(1e-4, 0.01, 0.1, 1.0, 0.5).unwrap();
        let spec = SweepSpec::geometric(Family::Periodic1d, p, "eta", 1e-3, 1e-1, 10).unwrap();
        let rows = sweep(&spec).unwrap();
        let fit = fit_exponent(&rows).unwrap();
        assert!(
            (fit.exponent - 5.0 / 3.0).abs() < 0.05,
            "eta exponent {}",
            fit.exponent
        );
    }

    #[test]
    fn insufficient_rows_error() {
        let rows: Vec<SweepRow> = (0..3)
            .map(|i| SweepRow {
                value: 1.0 + i as f64,
                params: base(),
                energy: EnergyBreakdown::new(1.0, 0.0, 0.0),
                excluded: false,
                note: String::new(),
            })
            .collect();
        assert!(matches!(
            fit_exponent(&rows),
            Err(BlisterError::InsufficientData(_))
        ));
    }

    #[test]
    fn classify_examples() {
        let base = Params::new(1e-5, 0.01, 0.1, 1.0, 0.5).unwrap();
        let consts = CalibratedConstants::default();
        let c2d = BoundConstants2D::default();
        // eta << alpha_s^2: no lattice
        let pts = classify_phase(&[0.1], &[1e-6], &base, &consts, &c2d).unwrap();
        assert!(matches!(
            pts[0].winner,
            Winner::Flat | Winner::SingleBlister
        ));
        assert_eq!(pts[0].region, Region::C);
        // between the curves: lattice wins with unit constants
        let pts = classify_phase(&[0.01], &[0.01], &base, &consts, &c2d).unwrap();
        assert_eq!(pts[0].winner, Winner::Lattice);
        assert_eq!(pts[0].region, Region::B);
        // above the modelling curve: region A
        let pts = classify_phase(&[1e-4], &[0.5], &base, &consts, &c2d).unwrap();
        assert_eq!(pts[0].region, Region::A);
        // winners depend only on energy ratios: scaling all three upper
        // bounds by a common factor leaves the map unchanged
        let scaled = CalibratedConstants {
            k5: 7.0,
            k6: 7.0,
            ..consts
        };
        // (flat has no constant; scale the comparison by checking a point
        // where the argmin is away from ties)
        let a = classify_phase(&[0.01], &[0.01], &base, &consts, &c2d).unwrap();
        let b = classify_phase(&[0.01 * 1.0], &[0.01], &base, &scaled, &c2d).unwrap();
        // k6 = 7 makes lattice lose here; this documents constant sensitivity
        assert_eq!(a[0].region, Region::B);
        assert!(b[0].region == Region::B || b[0].region == Region::C);
    }

    #[test]
    fn calibration_recovers_k2_and_positive_k1() {
        let p = base();
        let single =
            sweep(&SweepSpec::geometric(Family::Single, p, "h", 1e-4, 1e-2, 5).unwrap()).unwrap();
        let periodic =
            sweep(&SweepSpec::geometric(Family::Periodic1d, p, "eta", 1e-3, 1e-1, 8).unwrap())
                .unwrap();
        let mut spec = SweepSpec::geometric(Family::Minimized, p, "eta", 1e-2, 1e-1, 4).unwrap();
        spec.n_grid = 128;
        let minimized = sweep(&spec).unwrap();
        let consts = calibrate_constants(&single, &periodic, &[], &minimized, None).unwrap();
        let k2_exact = 8.0 * std::f64::consts::PI * std::f64::consts::PI;
        assert!(
            (consts.k2 - k2_exact).abs() < 0.01 * k2_exact,
            "K2 = {} vs {}",
            consts.k2,
            k2_exact
        );
        assert!(consts.k1 > 0.0, "K1 = {}", consts.k1);
        // K3 stays near the closed-form optimum prefactor
        assert!(consts.k3 > 1.0 && consts.k3 < 10.0, "K3 = {}", consts.k3);
    }
}
