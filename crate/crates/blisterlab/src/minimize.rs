//! Direct numerical minimization of the 1D energy over discretized
//! admissible profiles. This is the desk-scale oracle used to confirm that
//! the explicit constructions are not beaten by large factors and that the
//! lower-bound formula holds on observed data.
//!
//! Discretization: n periodic grid points, second-order centered
//! differences for w', u', u'', trapezoidal (uniform-weight) quadrature.
//! The constraints u >= 0 and u = 0 on the bonded set are enforced by
//! projection after every step.

use crate::construct1d::periodic_array;
use crate::energy::EnergyBreakdown;
use crate::error::{BlisterError, Result};
use crate::geometry::BondedSet1D;
use crate::params::Params;

/// Regularization for the substrate product of norms near the origin.
const SUBSTRATE_EPS: f64 = 1e-14;

/// Small deterministic PRNG (splitmix64), enough for seeding noise.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }
    /// Uniform in [-1, 1).
    pub fn next_sym(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    }
}

/// Fixed per-run discretization data.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub n: usize,
    /// Node mask: true where the node lies on the bonded set.
    pub on_omega: Vec<bool>,
    pub dx: f64,
}

impl Discretization {
    pub fn new(n: usize, omega: &BondedSet1D) -> Result<Self> {
        if n < 64 {
            return Err(BlisterError::InvalidParams(format!(
                "grid must have at least 64 points, got {n}"
            )));
        }
        let dx = 1.0 / n as f64;
        let on_omega: Vec<bool> = (0..n).map(|i| omega.contains(i as f64 * dx)).collect();
        let bonded = on_omega.iter().filter(|b| **b).count();
        if bonded == 0 || bonded == n {
            return Err(BlisterError::Geometry(
                "bonded set not resolvable on this grid".into(),
            ));
        }
        Ok(Self { n, on_omega, dx })
    }
}

/// Result of one minimization run.
#[derive(Debug, Clone)]
pub struct MinimizeResult {
    pub energy: EnergyBreakdown,
    pub iterations: usize,
    pub converged: bool,
    pub gradient_norm: f64,
    /// Final nodal values (w then u), kept for diagnostics.
    pub w: Vec<f64>,
    pub u: Vec<f64>,
}

/// Options controlling a run.
#[derive(Debug, Clone, Copy)]
pub struct MinimizeOpts {
    pub max_iters: usize,
    pub grad_tol: f64,
    /// Cold start from noise only, instead of the periodic-array warm start.
    pub cold_start: bool,
}

impl Default for MinimizeOpts {
    fn default() -> Self {
        Self {
            max_iters: 50_000,
            grad_tol: 1e-9,
            cold_start: false,
        }
    }
}

struct State {
    w: Vec<f64>,
    u: Vec<f64>,
}

fn project(state: &mut State, disc: &Discretization) {
    for i in 0..disc.n {
        if disc.on_omega[i] || state.u[i] < 0.0 {
            state.u[i] = 0.0;
        }
    }
}

/// Apply a symmetric Fourier multiplier `filter(k)` to a real periodic
/// vector (n must be a power of two).
fn apply_fourier_filter(v: &[f64], filter: impl Fn(f64) -> f64) -> Vec<f64> {
    let n = v.len();
    let mut re = v.to_vec();
    let mut im = vec![0.0; n];
    crate::energy::fft_radix2(&mut re, &mut im);
    for j in 0..n {
        let k = if j <= n / 2 { j as f64 } else { (n - j) as f64 };
        let f = filter(k);
        re[j] *= f;
        im[j] *= f;
    }
    // inverse transform of a Hermitian spectrum: conjugate, forward, scale
    for x in im.iter_mut() {
        *x = -*x;
    }
    crate::energy::fft_radix2(&mut re, &mut im);
    let scale = 1.0 / n as f64;
    re.iter().map(|x| x * scale).collect()
}

/// Inverse-Sobolev preconditioner for the descent direction. The bending
/// term makes the raw gradient flow in u stiff like (2 pi k)^4; dividing the
/// gradient by the symbol of the leading quadratic operators restores an
/// O(1) step for every mode.
fn precondition(
    gw: &[f64],
    gu: &[f64],
    disc: &Discretization,
    p: &Params,
    u_slope_sq: f64,
) -> (Vec<f64>, Vec<f64>) {
    let n = disc.n;
    if !n.is_power_of_two() {
        return (gw.to_vec(), gu.to_vec());
    }
    let tau = std::f64::consts::TAU;
    let cm = 2.0 * p.alpha_m * p.h * disc.dx;
    let cb = 2.0 * p.h.powi(3) * disc.dx;
    let floor_w = cm * tau * tau;
    let floor_u = cm * p.eta * tau * tau;
    let dw = apply_fourier_filter(gw, |k| 1.0 / (cm * (tau * k).powi(2) + floor_w));
    let du = apply_fourier_filter(gu, |k| {
        1.0 / (cb * (tau * k).powi(4) + cm * (u_slope_sq + p.eta) * (tau * k).powi(2) + floor_u)
    });
    (dw, du)
}

/// Discrete energy with the regularized substrate term (used as the descent
/// objective).
fn objective(state: &State, disc: &Discretization, p: &Params) -> f64 {
    let n = disc.n;
    let dx = disc.dx;
    let (w, u) = (&state.w, &state.u);
    let mut mem = 0.0;
    let mut bend = 0.0;
    let mut grad_sq = 0.0;
    let mut val_sq = 0.0;
    for i in 0..n {
        let ip = (i + 1) % n;
        let im = (i + n - 1) % n;
        let wp = (w[ip] - w[im]) / (2.0 * dx);
        let up = (u[ip] - u[im]) / (2.0 * dx);
        let upp = (u[ip] - 2.0 * u[i] + u[im]) / (dx * dx);
        let m = wp + 0.5 * up * up - p.eta;
        mem += m * m;
        bend += upp * upp;
        if disc.on_omega[i] {
            grad_sq += wp * wp;
            val_sq += w[i] * w[i];
        }
    }
    mem *= dx;
    bend *= dx;
    grad_sq *= dx;
    val_sq *= dx;
    let substrate =
        p.alpha_s * (((grad_sq + SUBSTRATE_EPS) * (val_sq + SUBSTRATE_EPS)).sqrt() - SUBSTRATE_EPS);
    p.alpha_m * p.h * mem + p.h.powi(3) * bend + substrate
}

/// Exact breakdown (unregularized substrate) for reporting.
fn breakdown(state: &State, disc: &Discretization, p: &Params) -> EnergyBreakdown {
    let n = disc.n;
    let dx = disc.dx;
    let (w, u) = (&state.w, &state.u);
    let mut mem = 0.0;
    let mut bend = 0.0;
    let mut grad_sq = 0.0;
    let mut val_sq = 0.0;
    for i in 0..n {
        let ip = (i + 1) % n;
        let im = (i + n - 1) % n;
        let wp = (w[ip] - w[im]) / (2.0 * dx);
        let up = (u[ip] - u[im]) / (2.0 * dx);
        let upp = (u[ip] - 2.0 * u[i] + u[im]) / (dx * dx);
        let m = wp + 0.5 * up * up - p.eta;
        mem += m * m;
        bend += upp * upp;
        if disc.on_omega[i] {
            grad_sq += wp * wp;
            val_sq += w[i] * w[i];
        }
    }
    EnergyBreakdown::new(
        p.alpha_m * p.h * mem * dx,
        p.h.powi(3) * bend * dx,
        p.alpha_s * (grad_sq * dx).sqrt() * (val_sq * dx).sqrt(),
    )
}

/// Analytic gradient of the regularized discrete energy with respect to all
/// w nodes and the free u nodes (entries on the bonded set are zeroed).
fn gradient(state: &State, disc: &Discretization, p: &Params, gw: &mut [f64], gu: &mut [f64]) {
    let n = disc.n;
    let dx = disc.dx;
    let (w, u) = (&state.w, &state.u);
    // residuals m_i and derivatives at each node
    let mut m = vec![0.0; n];
    let mut up = vec![0.0; n];
    let mut upp = vec![0.0; n];
    let mut wp = vec![0.0; n];
    let mut grad_sq = 0.0;
    let mut val_sq = 0.0;
    for i in 0..n {
        let ip = (i + 1) % n;
        let im = (i + n - 1) % n;
        wp[i] = (w[ip] - w[im]) / (2.0 * dx);
        up[i] = (u[ip] - u[im]) / (2.0 * dx);
        upp[i] = (u[ip] - 2.0 * u[i] + u[im]) / (dx * dx);
        m[i] = wp[i] + 0.5 * up[i] * up[i] - p.eta;
        if disc.on_omega[i] {
            grad_sq += wp[i] * wp[i];
            val_sq += w[i] * w[i];
        }
    }
    grad_sq *= dx;
    val_sq *= dx;
    let sa = (grad_sq + SUBSTRATE_EPS).sqrt();
    let sb = (val_sq + SUBSTRATE_EPS).sqrt();
    // d substrate / d grad_sq = alpha_s sb / (2 sa); / d val_sq = alpha_s sa / (2 sb)
    let dsub_dg = p.alpha_s * sb / (2.0 * sa);
    let dsub_dv = p.alpha_s * sa / (2.0 * sb);

    let cm = p.alpha_m * p.h;
    let cb = p.h.powi(3);
    for j in 0..n {
        let jp = (j + 1) % n;
        let jm = (j + n - 1) % n;
        // membrane: sum_i 2 m_i dx * d wp_i/d w_j, with d wp_i/d w_j = (delta_{j,i+1} - delta_{j,i-1})/(2dx)
        let mut g = cm * (m[jm] - m[jp]);
        // substrate through wp on bonded nodes
        let mut gs = 0.0;
        if disc.on_omega[jm] {
            gs += wp[jm];
        }
        if disc.on_omega[jp] {
            gs -= wp[jp];
        }
        g += dsub_dg * gs; // the dx from the integral cancels the 1/(2dx) * 2
        if disc.on_omega[j] {
            g += dsub_dv * 2.0 * w[j] * dx;
        }
        gw[j] = g;

        // u gradient: membrane chain rule + bending stencil
        let mut gu_j = cm * (m[jm] * up[jm] - m[jp] * up[jp]);
        gu_j += cb * 2.0 * (upp[jm] - 2.0 * upp[j] + upp[jp]) / dx;
        gu[j] = if disc.on_omega[j] { 0.0 } else { gu_j };
    }
}

/// Warm start from the periodic construction when `omega` is a translate of
/// the equispaced family; returns the state and the alignment offset so the
/// whole initialization (noise included) is translation covariant.
fn warm_start(disc: &Discretization, p: &Params, omega: &BondedSet1D) -> (State, f64) {
    let n = disc.n;
    // component count on the torus (a seam-wrapped component is stored split)
    let ivs = omega.intervals();
    let wrapped = ivs.len() >= 2
        && ivs.first().map(|v| v.start < 1e-12).unwrap_or(false)
        && ivs.last().map(|v| v.end > 1.0 - 1e-12).unwrap_or(false);
    let comps = (ivs.len() - usize::from(wrapped)).max(1);
    let l = 1.0 / comps as f64;
    // For a single bonded component the zero-substrate blister (w = 0 on
    // Omega) strictly dominates the sawtooth member of the family, and
    // seeding with the latter drives the flow into the flat metastable
    // state; pick the matching member per component count.
    let construction = if comps >= 2 {
        periodic_array(p, l)
    } else {
        crate::construct1d::single_blister(p)
    };
    if let Ok((prof, constructed)) = construction {
        let dx = (ivs[0].end - constructed.intervals()[0].end).rem_euclid(l);
        let candidate = constructed.translated(dx);
        let mismatches = (0..n)
            .filter(|&i| {
                let x = i as f64 * disc.dx;
                candidate.contains(x) != omega.contains(x)
            })
            .count();
        if mismatches <= 2 * comps {
            let prof = prof.translated(dx);
            let u: Vec<f64> = (0..n).map(|i| prof.u(i as f64 * disc.dx)).collect();
            let w: Vec<f64> = (0..n).map(|i| prof.w(i as f64 * disc.dx)).collect();
            return (State { w, u }, dx);
        }
    }
    // generic fallback: per-gap raised-cosine bumps of blister scale
    let mut u = vec![0.0; n];
    for i in 0..n {
        let x = i as f64 * disc.dx;
        if !omega.contains(x) {
            let mut a = x;
            let mut b = x;
            while !omega.contains(a) && x - a < 1.0 {
                a -= disc.dx;
            }
            while !omega.contains(b) && b - x < 1.0 {
                b += disc.dx;
            }
            let len = b - a;
            let t = (x - a) / len;
            u[i] = p.eta.sqrt() * len / std::f64::consts::PI
                * (1.0 - (2.0 * std::f64::consts::PI * t).cos());
        }
    }
    (State { w: vec![0.0; n], u }, 0.0)
}

/// Minimize the discrete energy by projected gradient descent with a
/// backtracking line search. Deterministic for a fixed seed.
pub fn minimize_profile(
    params: &Params,
    omega: &BondedSet1D,
    n: usize,
    seed: u64,
    opts: &MinimizeOpts,
) -> Result<MinimizeResult> {
    let disc = Discretization::new(n, omega)?;
    let mut rng = SplitMix64::new(seed);
    let (mut state, align) = if opts.cold_start {
        (
            State {
                w: vec![0.0; n],
                u: vec![0.0; n],
            },
            0.0,
        )
    } else {
        warm_start(&disc, params, omega)
    };
    // seeded noise of amplitude sqrt(eta)/10 relative to the blister profile
    // scale (1-theta) l / pi; a band-limited field keeps the initial bending
    // energy bounded on fine grids, and evaluating it in the aligned frame
    // keeps the initialization translation covariant
    let comps = omega.intervals().len().max(1);
    let amp =
        params.eta.sqrt() / 10.0 * (1.0 - params.theta) / (comps as f64) / std::f64::consts::PI;
    let modes = 4;
    let coefs: Vec<(f64, f64)> = (0..modes)
        .map(|_| (rng.next_sym(), rng.next_sym()))
        .collect();
    for i in 0..n {
        if !disc.on_omega[i] {
            let x = i as f64 * disc.dx - align;
            let mut noise = 0.0;
            for (k, (a, b)) in coefs.iter().enumerate() {
                let ph = 2.0 * std::f64::consts::PI * (k + 1) as f64 * x;
                // 1/k^2 spectrum so the noise perturbs positions, not slopes
                noise += (a * ph.cos() + b * ph.sin()) / ((k + 1) * (k + 1)) as f64;
            }
            state.u[i] += amp * noise / modes as f64;
        }
    }
    project(&mut state, &disc);

    let mut gw = vec![0.0; n];
    let mut gu = vec![0.0; n];
    let mut energy = objective(&state, &disc, params);
    let mut step = 1.0;
    let mut iterations = 0;
    let mut gnorm = f64::INFINITY;
    let mut converged = false;

    while iterations < opts.max_iters {
        gradient(&state, &disc, params, &mut gw, &mut gu);
        // KKT residual: free directions only (u >= 0 active set may push)
        let mut g2 = 0.0;
        for j in 0..n {
            g2 += gw[j] * gw[j];
            if !disc.on_omega[j] && (state.u[j] > 0.0 || gu[j] < 0.0) {
                g2 += gu[j] * gu[j];
            }
        }
        gnorm = g2.sqrt();
        if gnorm <= opts.grad_tol {
            converged = true;
            break;
        }
        let slope_sq = {
            let mut s = 0.0;
            for i in 0..n {
                let up = (state.u[(i + 1) % n] - state.u[(i + n - 1) % n]) / (2.0 * disc.dx);
                s += up * up;
            }
            s / n as f64
        };
        let (dw, du) = precondition(&gw, &gu, &disc, params, slope_sq);
        // backtracking line search on the projected step
        let mut accepted = false;
        for _ in 0..60 {
            let mut trial = State {
                w: state.w.iter().zip(&dw).map(|(v, g)| v - step * g).collect(),
                u: state.u.iter().zip(&du).map(|(v, g)| v - step * g).collect(),
            };
            project(&mut trial, &disc);
            let e_new = objective(&trial, &disc, params);
            if e_new < energy {
                state = trial;
                energy = e_new;
                accepted = true;
                step *= 1.25;
                break;
            }
            step *= 0.5;
        }
        iterations += 1;
        if !accepted {
            // stalled at double precision; report the best iterate, flagging
            // convergence only when the gradient tolerance is truly met
            converged = gnorm <= opts.grad_tol;
            break;
        }
    }
    Ok(MinimizeResult {
        energy: breakdown(&state, &disc, params),
        iterations,
        converged,
        gradient_norm: gnorm,
        w: state.w,
        u: state.u,
    })
}

/// Compare the analytic gradient against central finite differences at a
/// random feasible point; returns the maximum relative error over all free
/// coordinates (scaled by the gradient norm).
pub fn gradient_check(params: &Params, omega: &BondedSet1D, n: usize, seed: u64) -> Result<f64> {
    let disc = Discretization::new(n, omega)?;
    let mut rng = SplitMix64::new(seed);
    let mut state = State {
        w: (0..n).map(|_| 0.02 * rng.next_sym()).collect(),
        u: (0..n).map(|_| 0.05 * (1.0 + rng.next_sym())).collect(),
    };
    project(&mut state, &disc);
    let mut gw = vec![0.0; n];
    let mut gu = vec![0.0; n];
    gradient(&state, &disc, params, &mut gw, &mut gu);
    let scale = (gw.iter().chain(gu.iter()).map(|g| g * g).sum::<f64>()).sqrt() / n as f64;
    let delta = 1e-6;
    let mut worst: f64 = 0.0;
    for j in 0..n {
        // w coordinate
        let mut s = State {
            w: state.w.clone(),
            u: state.u.clone(),
        };
        s.w[j] += delta;
        let ep = objective(&s, &disc, params);
        s.w[j] -= 2.0 * delta;
        let em = objective(&s, &disc, params);
        let fd = (ep - em) / (2.0 * delta);
        worst = worst.max((fd - gw[j]).abs() / (scale + gw[j].abs()));
        // u coordinate (free nodes only)
        if !disc.on_omega[j] && state.u[j] > delta {
            let mut s = State {
                w: state.w.clone(),
                u: state.u.clone(),
            };
            s.u[j] += delta;
            let ep = objective(&s, &disc, params);
            s.u[j] -= 2.0 * delta;
            let em = objective(&s, &disc, params);
            let fd = (ep - em) / (2.0 * delta);
            worst = worst.max((fd - gu[j]).abs() / (scale + gu[j].abs()));
        }
    }
    Ok(worst)
}

/// Outer loop over the equispaced bonded-set family: minimize with
/// N = 1..n_max blisters at area fraction theta and return the best.
pub fn best_over_blister_count(
    params: &Params,
    n: usize,
    n_max: usize,
    seed: u64,
    opts: &MinimizeOpts,
) -> Result<(usize, MinimizeResult)> {
    if n_max == 0 {
        return Err(BlisterError::InvalidParams("n_max must be >= 1".into()));
    }
    let mut best: Option<(usize, MinimizeResult)> = None;
    for count in 1..=n_max {
        let omega = BondedSet1D::equispaced(count, params.theta)?;
        // skip counts the grid cannot resolve
        if (1.0 - params.theta) / (count as f64) < 4.0 / n as f64 {
            break;
        }
        let res = minimize_profile(params, &omega, n, seed.wrapping_add(count as u64), opts)?;
        let better = match &best {
            None => true,
            Some((_, b)) => res.energy.total < b.energy.total,
        };
        if better {
            best = Some((count, res));
        }
    }
    best.ok_or_else(|| BlisterError::InsufficientData("no blister count evaluated".into()))
}
