//! Piecewise-analytic 1D deformations (w, u) on the unit torus.

use crate::error::{BlisterError, Result};
use crate::geometry::wrap_unit;

/// One analytic piece of a 1D profile, defined on `[x0, x0 + len]` in the
/// unwrapped coordinate.
#[derive(Debug, Clone)]
pub enum Piece1D {
    /// w = u = 0.
    Zero,
    /// Bonded piece: w = eta (x - center), u = 0.
    BondedAffine { center: f64, eta: f64 },
    /// Blister piece:
    ///   w = a (x - x0) + b + w_amp sin(4 pi s / len),
    ///   u = u_amp (1 - cos(2 pi s / len)),          s = x - x0.
    /// Covers both the single blister (a = b = 0) and the periodic-cell
    /// blister after rescaling.
    Blister {
        a: f64,
        b: f64,
        w_amp: f64,
        u_amp: f64,
    },
}

#[derive(Debug, Clone)]
struct Span {
    x0: f64,
    len: f64,
    piece: Piece1D,
}

/// A 1D deformation with evaluators for w, w', u, u', u'' and the
/// breakpoints between its analytic pieces. Immutable after construction.
#[derive(Debug, Clone)]
pub struct Profile1D {
    spans: Vec<Span>,
    breakpoints: Vec<f64>,
    /// Multiplier applied to w (and its derivative); used by homogeneity tests.
    w_scale: f64,
}

impl Profile1D {
    /// Build from `(start, length, piece)` spans that must tile [0, 1].
    pub fn from_spans(spans: Vec<(f64, f64, Piece1D)>) -> Result<Self> {
        if spans.is_empty() {
            return Err(BlisterError::InvalidParams("profile needs pieces".into()));
        }
        let mut spans: Vec<Span> = spans
            .into_iter()
            .map(|(x0, len, piece)| {
                // canonicalize to a start in [0, 1), keeping the anchor of
                // bonded pieces in the same frame
                let shift = x0.floor();
                let piece = match piece {
                    Piece1D::BondedAffine { center, eta } => Piece1D::BondedAffine {
                        center: center - shift,
                        eta,
                    },
                    other => other,
                };
                Span {
                    x0: x0 - shift,
                    len,
                    piece,
                }
            })
            .collect();
        spans.sort_by(|a, b| a.x0.total_cmp(&b.x0));
        let total: f64 = spans.iter().map(|s| s.len).sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(BlisterError::InvalidParams(format!(
                "pieces must tile the unit torus, total length {total}"
            )));
        }
        let mut breakpoints: Vec<f64> = spans.iter().map(|s| wrap_unit(s.x0)).collect();
        breakpoints.push(0.0);
        breakpoints.push(1.0);
        breakpoints.sort_by(f64::total_cmp);
        breakpoints.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
        Ok(Self {
            spans,
            breakpoints,
            w_scale: 1.0,
        })
    }

    /// The flat profile w = u = 0.
    pub fn zero() -> Self {
        Self::from_spans(vec![(0.0, 1.0, Piece1D::Zero)]).expect("valid")
    }

    /// Breakpoints between analytic pieces (sorted, within [0, 1]).
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Copy with w multiplied by `c` (u unchanged).
    pub fn with_w_scaled(&self, c: f64) -> Self {
        let mut p = self.clone();
        p.w_scale *= c;
        p
    }

    /// Translate the whole profile by `dx` on the torus.
    pub fn translated(&self, dx: f64) -> Self {
        let spans = self
            .spans
            .iter()
            .map(|s| {
                let piece = match &s.piece {
                    Piece1D::BondedAffine { center, eta } => Piece1D::BondedAffine {
                        center: center + dx,
                        eta: *eta,
                    },
                    other => other.clone(),
                };
                (s.x0 + dx, s.len, piece)
            })
            .collect();
        Self::from_spans(spans).expect("translation preserves validity")
    }

    fn locate(&self, x: f64) -> (&Span, f64) {
        let x = wrap_unit(x);
        // spans are sorted by start; binary search for the last start <= x
        let idx = self
            .spans
            .partition_point(|s| wrap_unit(s.x0) <= x + 1e-14)
            .saturating_sub(1);
        // check the located span and its neighbors (seam wrapping)
        for k in [
            idx,
            (idx + self.spans.len() - 1) % self.spans.len(),
            (idx + 1) % self.spans.len(),
            self.spans.len() - 1,
        ] {
            let s = &self.spans[k];
            let s0 = wrap_unit(s.x0);
            let mut t = x - s0;
            if t < -1e-14 {
                t += 1.0;
            }
            if t >= -1e-14 && t <= s.len + 1e-14 {
                return (s, t.clamp(0.0, s.len));
            }
        }
        // fall back to a full scan, then the final span (x == 1.0 boundary)
        for s in &self.spans {
            let s0 = wrap_unit(s.x0);
            let mut t = x - s0;
            if t < -1e-14 {
                t += 1.0;
            }
            if t >= -1e-14 && t <= s.len + 1e-14 {
                return (s, t.clamp(0.0, s.len));
            }
        }
        let s = self.spans.last().expect("non-empty");
        (s, s.len)
    }

    /// In-plane displacement w(x).
    pub fn w(&self, x: f64) -> f64 {
        let (s, t) = self.locate(x);
        self.w_scale
            * match &s.piece {
                Piece1D::Zero => 0.0,
                // center is given in the same unwrapped frame as x0
                Piece1D::BondedAffine { center, eta } => eta * (t - (center - s.x0)),
                Piece1D::Blister { a, b, w_amp, .. } => {
                    a * t + b + w_amp * (4.0 * std::f64::consts::PI * t / s.len).sin()
                }
            }
    }

    /// w'(x).
    pub fn w_x(&self, x: f64) -> f64 {
        let (s, t) = self.locate(x);
        self.w_scale
            * match &s.piece {
                Piece1D::Zero => 0.0,
                Piece1D::BondedAffine { eta, .. } => *eta,
                Piece1D::Blister { a, w_amp, .. } => {
                    let k = 4.0 * std::f64::consts::PI / s.len;
                    a + w_amp * k * (k * t).cos()
                }
            }
    }

    /// Out-of-plane displacement u(x) >= 0.
    pub fn u(&self, x: f64) -> f64 {
        let (s, t) = self.locate(x);
        match &s.piece {
            Piece1D::Zero | Piece1D::BondedAffine { .. } => 0.0,
            Piece1D::Blister { u_amp, .. } => {
                u_amp * (1.0 - (2.0 * std::f64::consts::PI * t / s.len).cos())
            }
        }
    }

    /// u'(x).
    pub fn u_x(&self, x: f64) -> f64 {
        let (s, t) = self.locate(x);
        match &s.piece {
            Piece1D::Zero | Piece1D::BondedAffine { .. } => 0.0,
            Piece1D::Blister { u_amp, .. } => {
                let k = 2.0 * std::f64::consts::PI / s.len;
                u_amp * k * (k * t).sin()
            }
        }
    }

    /// u''(x).
    pub fn u_xx(&self, x: f64) -> f64 {
        let (s, t) = self.locate(x);
        match &s.piece {
            Piece1D::Zero | Piece1D::BondedAffine { .. } => 0.0,
            Piece1D::Blister { u_amp, .. } => {
                let k = 2.0 * std::f64::consts::PI / s.len;
                u_amp * k * k * (k * t).cos()
            }
        }
    }
}
