//! The dimensionless parameters of one problem instance.

use crate::error::{BlisterError, Result};

/// The five dimensionless parameters describing a film/substrate system:
/// film thickness `h = t/L`, mismatch strain `eta`, compliance ratio
/// `alpha_s`, membrane coefficient `alpha_m` and bonded area fraction
/// `theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    /// Non-dimensionalized film thickness, in (0, 1].
    pub h: f64,
    /// Compressive mismatch strain, in (0, 1].
    pub eta: f64,
    /// Substrate/film compliance ratio, > 0.
    pub alpha_s: f64,
    /// Membrane coefficient (order one; 12 in classical plate theory).
    pub alpha_m: f64,
    /// Bonded area fraction, strictly inside (0, 1).
    pub theta: f64,
}

impl Params {
    /// Validate and build a parameter set.
    pub fn new(h: f64, eta: f64, alpha_s: f64, alpha_m: f64, theta: f64) -> Result<Self> {
        let all = [h, eta, alpha_s, alpha_m, theta];
        if all.iter().any(|v| !v.is_finite() || *v <= 0.0) {
            return Err(BlisterError::InvalidParams(format!(
                "all parameters must be finite and strictly positive, got \
                 h={h}, eta={eta}, alpha_s={alpha_s}, alpha_m={alpha_m}, theta={theta}"
            )));
        }
        if theta >= 1.0 {
            return Err(BlisterError::InvalidParams(format!(
                "theta must lie strictly inside (0, 1), got {theta}"
            )));
        }
        if eta > 1.0 || h > 1.0 {
            return Err(BlisterError::InvalidParams(format!(
                "small-parameter regime requires eta <= 1 and h <= 1, got eta={eta}, h={h}"
            )));
        }
        Ok(Self {
            h,
            eta,
            alpha_s,
            alpha_m,
            theta,
        })
    }

    /// Copy with a single field replaced; used by parameter sweeps.
    pub fn with(&self, name: &str, value: f64) -> Result<Self> {
        let mut p = *self;
        match name {
            "h" => p.h = value,
            "eta" => p.eta = value,
            "alpha_s" => p.alpha_s = value,
            "alpha_m" => p.alpha_m = value,
            "theta" => p.theta = value,
            other => {
                return Err(BlisterError::InvalidParams(format!(
                    "unknown parameter name `{other}`"
                )))
            }
        }
        Params::new(p.h, p.eta, p.alpha_s, p.alpha_m, p.theta)
    }

    /// Value of the named field.
    pub fn get(&self, name: &str) -> Result<f64> {
        Ok(match name {
            "h" => self.h,
            "eta" => self.eta,
            "alpha_s" => self.alpha_s,
            "alpha_m" => self.alpha_m,
            "theta" => self.theta,
            other => {
                return Err(BlisterError::InvalidParams(format!(
                    "unknown parameter name `{other}`"
                )))
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_valid_parameters() {
        let p = Params::new(0.01, 0.1, 1.0, 1.0, 0.5).unwrap();
        assert_eq!(p.theta, 0.5);
    }

    #[test]
    fn rejects_nonpositive_and_out_of_range() {
        assert!(Params::new(0.0, 0.1, 1.0, 1.0, 0.5).is_err());
        assert!(Params::new(0.01, -0.1, 1.0, 1.0, 0.5).is_err());
        assert!(Params::new(0.01, 0.1, 1.0, 1.0, 1.0).is_err());
        assert!(Params::new(0.01, 0.1, 1.0, 1.0, 0.0).is_err());
        assert!(Params::new(0.01, 1.5, 1.0, 1.0, 0.5).is_err());
        assert!(Params::new(1.5, 0.1, 1.0, 1.0, 0.5).is_err());
        // alpha_s > 1 is allowed (stiff substrate).
        assert!(Params::new(0.01, 0.1, 3.0, 1.0, 0.5).is_ok());
    }

    #[test]
    fn with_replaces_one_field() {
        let p = Params::new(0.01, 0.1, 1.0, 1.0, 0.5).unwrap();
        let q = p.with("eta", 0.05).unwrap();
        assert_eq!(q.eta, 0.05);
        assert_eq!(q.h, p.h);
        assert!(p.with("bogus", 1.0).is_err());
    }
}
