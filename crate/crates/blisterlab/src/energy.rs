//! The three-term non-dimensionalized energy in 1D, plus the H^{1/2}
//! diagnostic seminorm used to motivate the local substrate model.
//!
//! 1D form:
//!   membrane  = alpha_m h int |w' + u'^2/2 - eta|^2,
//!   bending   = h^3 int |u''|^2,
//!   substrate = alpha_s (int_Omega |w'|^2)^{1/2} (int_Omega |w|^2)^{1/2}.

use crate::error::{BlisterError, Result};
use crate::geometry::BondedSet1D;
use crate::params::Params;
use crate::profile::Profile1D;
use crate::quadrature::{gauss_rule, quad_piecewise};

/// Energy contributions of one configuration. `total` is the exact sum of
/// the three parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBreakdown {
    pub membrane: f64,
    pub bending: f64,
    pub substrate: f64,
    pub total: f64,
}

impl EnergyBreakdown {
    pub fn new(membrane: f64, bending: f64, substrate: f64) -> Self {
        Self {
            membrane,
            bending,
            substrate,
            total: membrane + bending + substrate,
        }
    }

    pub fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }
}

/// Quadrature configuration for energy evaluations.
#[derive(Debug, Clone, Copy)]
pub struct QuadSpec {
    /// Gauss-Legendre order per smooth piece (>= 4).
    pub order: usize,
    /// Tensor-product samples per dimension in 2D ridge regions (>= 16).
    pub grid2d: usize,
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self {
            order: 16,
            grid2d: 32,
        }
    }
}

impl QuadSpec {
    pub fn validate(&self) -> Result<()> {
        if self.order < 4 {
            return Err(BlisterError::InvalidParams(format!(
                "quadrature order must be >= 4, got {}",
                self.order
            )));
        }
        if self.grid2d < 16 {
            return Err(BlisterError::InvalidParams(format!(
                "grid2d must be >= 16, got {}",
                self.grid2d
            )));
        }
        Ok(())
    }
}

fn merged_breakpoints(profile: &Profile1D, omega: &BondedSet1D) -> Vec<f64> {
    let mut pts: Vec<f64> = profile.breakpoints().to_vec();
    pts.extend(omega.breakpoints());
    pts.push(0.0);
    pts.push(1.0);
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
    pts
}

/// Substrate factors of one configuration: `(int_Omega |w'|^2, int_Omega |w|^2)`
/// summed over components, plus the per-component product sum
/// `sum_j sqrt(G_j) sqrt(V_j)` for the Cauchy-Schwarz agreement check.
pub struct SubstrateFactors {
    pub grad_sq: f64,
    pub val_sq: f64,
    pub per_component_product: f64,
}

pub fn substrate_factors_1d(
    profile: &Profile1D,
    omega: &BondedSet1D,
    quad: &QuadSpec,
) -> Result<SubstrateFactors> {
    let mut grad_sq = 0.0;
    let mut val_sq = 0.0;
    let mut per_component_product = 0.0;
    for iv in omega.intervals() {
        let pieces: Vec<f64> = {
            let mut p: Vec<f64> = profile
                .breakpoints()
                .iter()
                .copied()
                .filter(|&x| x > iv.start + 1e-13 && x < iv.end - 1e-13)
                .collect();
            p.push(iv.start);
            p.push(iv.end);
            p.sort_by(f64::total_cmp);
            p
        };
        let g = quad_piecewise(|x| profile.w_x(x).powi(2), &pieces, quad.order)?;
        let v = quad_piecewise(|x| profile.w(x).powi(2), &pieces, quad.order)?;
        grad_sq += g;
        val_sq += v;
        per_component_product += g.max(0.0).sqrt() * v.max(0.0).sqrt();
    }
    Ok(SubstrateFactors {
        grad_sq,
        val_sq,
        per_component_product,
    })
}

fn check_admissible_1d(profile: &Profile1D, omega: &BondedSet1D, quad: &QuadSpec) -> Result<()> {
    let rule = gauss_rule(quad.order);
    for iv in omega.intervals() {
        let mid = 0.5 * (iv.start + iv.end);
        let half = 0.5 * (iv.end - iv.start);
        for x in rule.nodes.iter().map(|t| mid + half * t) {
            let u = profile.u(x);
            if u.abs() > 1e-10 {
                return Err(BlisterError::Admissibility(format!(
                    "u({x}) = {u} on the bonded set"
                )));
            }
            if u < -1e-12 {
                return Err(BlisterError::Admissibility(format!("u({x}) = {u} < 0")));
            }
        }
    }
    Ok(())
}

/// Evaluate the 1D energy of an admissible profile.
pub fn energy_1d(
    profile: &Profile1D,
    omega: &BondedSet1D,
    params: &Params,
    quad: &QuadSpec,
) -> Result<EnergyBreakdown> {
    quad.validate()?;
    check_admissible_1d(profile, omega, quad)?;
    let pieces = merged_breakpoints(profile, omega);
    let membrane_int = quad_piecewise(
        |x| (profile.w_x(x) + 0.5 * profile.u_x(x).powi(2) - params.eta).powi(2),
        &pieces,
        quad.order,
    )?;
    let bending_int = quad_piecewise(|x| profile.u_xx(x).powi(2), &pieces, quad.order)?;
    let sf = substrate_factors_1d(profile, omega, quad)?;
    Ok(EnergyBreakdown::new(
        params.alpha_m * params.h * membrane_int,
        params.h.powi(3) * bending_int,
        params.alpha_s * sf.grad_sq.sqrt() * sf.val_sq.sqrt(),
    ))
}

/// In-place iterative radix-2 FFT (complex data as (re, im) pairs).
pub(crate) fn fft_radix2(re: &mut [f64], im: &mut [f64]) {
    let n = re.len();
    debug_assert!(n.is_power_of_two());
    // bit-reversal permutation
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            re.swap(i, j);
            im.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let ang = -2.0 * std::f64::consts::PI / len as f64;
        let (wr, wi) = (ang.cos(), ang.sin());
        let mut i = 0;
        while i < n {
            let (mut cr, mut ci) = (1.0f64, 0.0f64);
            for k in 0..len / 2 {
                let (ur, ui) = (re[i + k], im[i + k]);
                let (vr, vi) = (
                    re[i + k + len / 2] * cr - im[i + k + len / 2] * ci,
                    re[i + k + len / 2] * ci + im[i + k + len / 2] * cr,
                );
                re[i + k] = ur + vr;
                im[i + k] = ui + vi;
                re[i + k + len / 2] = ur - vr;
                im[i + k + len / 2] = ui - vi;
                let ncr = cr * wr - ci * wi;
                ci = cr * wi + ci * wr;
                cr = ncr;
            }
            i += len;
        }
        len <<= 1;
    }
}

/// Squared homogeneous H^{1/2} seminorm of a real periodic field sampled on
/// `N` uniform points (N a power of two): `sum_{k != 0} |k| |fhat(k)|^2`
/// with `fhat(k) = int e^{2 pi i k x} f(x) dx`. The k = 0 mode is discarded,
/// matching the mean-zero convention.
pub fn h_half_norm_sq(samples: &[f64]) -> Result<f64> {
    let n = samples.len();
    if n < 2 || !n.is_power_of_two() {
        return Err(BlisterError::InvalidParams(format!(
            "sample count must be a power of two >= 2, got {n}"
        )));
    }
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(BlisterError::Evaluation("non-finite sample".into()));
    }
    let mut re = samples.to_vec();
    let mut im = vec![0.0; n];
    fft_radix2(&mut re, &mut im);
    let scale = 1.0 / n as f64;
    let mut acc = 0.0;
    // bins 1..n/2-1 pair with their conjugates; the Nyquist bin n/2 stands alone
    for k in 1..n / 2 {
        let mag2 = (re[k] * re[k] + im[k] * im[k]) * scale * scale;
        acc += 2.0 * k as f64 * mag2;
    }
    let k = n / 2;
    let mag2 = (re[k] * re[k] + im[k] * im[k]) * scale * scale;
    acc += k as f64 * mag2;
    Ok(acc)
}
