//! The piecewise-linear corner construction on the renormalized square
//! [-1,1]^2: two base triangles whose affine data kills the membrane energy,
//! extended to sixteen pieces by the reflection group of the square.

use crate::error::{BlisterError, Result};
use crate::geometry::{convex_contains, Vec2};

/// d = (sqrt 2 - 1)^2 = 3 - 2 sqrt 2, the unique fold offset for which the
/// shear term of the corner map vanishes.
pub const CORNER_D: f64 = 3.0 - 2.0 * std::f64::consts::SQRT_2;

/// One affine piece of the corner map (renormalized coordinates).
#[derive(Debug, Clone)]
pub struct CornerPiece {
    pub tri: [Vec2; 3],
    pub grad_w1: Vec2,
    pub grad_w2: Vec2,
    pub grad_u: Vec2,
    /// values at tri[0]
    pub w_at: Vec2,
    pub u_at: f64,
}

impl CornerPiece {
    pub fn eval(&self, p: Vec2) -> (Vec2, f64) {
        let d = p - self.tri[0];
        (
            Vec2::new(
                self.w_at.x + self.grad_w1.dot(d),
                self.w_at.y + self.grad_w2.dot(d),
            ),
            self.u_at + self.grad_u.dot(d),
        )
    }

    /// Residuals of the three membrane identities (eta-shift removed).
    pub fn membrane_residuals(&self) -> [f64; 3] {
        [
            self.grad_w1.x + 0.5 * self.grad_u.x * self.grad_u.x,
            self.grad_w2.y + 0.5 * self.grad_u.y * self.grad_u.y,
            self.grad_w1.y + self.grad_w2.x + self.grad_u.x * self.grad_u.y,
        ]
    }
}

/// The corner map: sixteen affine pieces on [-1,1]^2 with w = -(alpha x,
/// alpha y) on the boundary and tent-like u slopes matching the strips.
#[derive(Debug, Clone)]
pub struct CornerMap {
    pub d: f64,
    pub alpha: f64,
    pub pieces: Vec<CornerPiece>,
}

/// Residual of the shear identity on the steep triangle as a function of the
/// fold offset `d`: alpha - alpha/d + sqrt(2 alpha) sqrt(2 alpha / d).
pub fn t2_shear_residual(d: f64, alpha: f64) -> f64 {
    alpha - alpha / d + (2.0 * alpha).sqrt() * (2.0 * alpha / d).sqrt()
}

/// Scan (0,1) for roots of the shear residual; returns all bisected roots.
pub fn shear_residual_roots(alpha: f64, scan_points: usize) -> Vec<f64> {
    let mut roots = Vec::new();
    let eps = 1e-9;
    let f = |d: f64| t2_shear_residual(d, alpha);
    let mut prev_d = eps;
    let mut prev_v = f(prev_d);
    for i in 1..=scan_points {
        let d = eps + (1.0 - 2.0 * eps) * i as f64 / scan_points as f64;
        let v = f(d);
        if prev_v == 0.0 {
            roots.push(prev_d);
        } else if prev_v * v < 0.0 {
            let (mut lo, mut hi) = (prev_d, d);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if f(lo) * f(mid) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        prev_d = d;
        prev_v = v;
    }
    roots
}

/// The eight orthogonal matrices of the square's symmetry group.
fn symmetry_group() -> [[[f64; 2]; 2]; 8] {
    let i = [[1.0, 0.0], [0.0, 1.0]];
    let mx = [[-1.0, 0.0], [0.0, 1.0]];
    let my = [[1.0, 0.0], [0.0, -1.0]];
    let diag = [[0.0, 1.0], [1.0, 0.0]];
    let mul = |a: [[f64; 2]; 2], b: [[f64; 2]; 2]| {
        let mut c = [[0.0; 2]; 2];
        for r in 0..2 {
            for s in 0..2 {
                c[r][s] = a[r][0] * b[0][s] + a[r][1] * b[1][s];
            }
        }
        c
    };
    [
        i,
        mx,
        my,
        mul(mx, my),
        diag,
        mul(diag, mx),
        mul(diag, my),
        mul(diag, mul(mx, my)),
    ]
}

fn apply(m: &[[f64; 2]; 2], v: Vec2) -> Vec2 {
    Vec2::new(m[0][0] * v.x + m[0][1] * v.y, m[1][0] * v.x + m[1][1] * v.y)
}

/// Build the corner map for a bonded fraction `theta` and mismatch `eta`
/// (alpha = eta (1 + sqrt(theta) / (1 - sqrt(theta)))).
pub fn corner_map(theta: f64, eta: f64) -> Result<CornerMap> {
    if !(theta > 0.0 && theta < 1.0) || eta <= 0.0 {
        return Err(BlisterError::InvalidParams(format!(
            "corner map needs theta in (0,1) and eta > 0, got theta={theta}, eta={eta}"
        )));
    }
    let alpha = eta * (1.0 + theta.sqrt() / (1.0 - theta.sqrt()));
    let d = CORNER_D;
    let s2a = (2.0 * alpha).sqrt();

    // base triangles in the fundamental domain {0 <= x <= -y <= 1}
    let a = Vec2::new(0.0, -1.0);
    let b = Vec2::new(1.0, -1.0);
    let c = Vec2::new(0.0, 0.0);
    let dd = Vec2::new(0.0, -d);

    // shallow triangle [B D A]: u ramps down from sqrt(2 alpha) at x=0 to 0 at B
    let t1 = CornerPiece {
        tri: [b, dd, a],
        grad_w1: Vec2::new(-alpha, 0.0),
        grad_w2: Vec2::new(0.0, 0.0),
        grad_u: Vec2::new(-s2a, 0.0),
        w_at: Vec2::new(-alpha, alpha),
        u_at: 0.0,
    };
    // steep triangle [D B C]
    let t2 = CornerPiece {
        tri: [dd, b, c],
        grad_w1: Vec2::new(-alpha, 0.0),
        grad_w2: Vec2::new(alpha - alpha / d, -alpha / d),
        grad_u: Vec2::new(s2a, (2.0 * alpha / d).sqrt()),
        w_at: Vec2::new(0.0, alpha),
        u_at: s2a,
    };

    let mut pieces = Vec::with_capacity(16);
    for g in symmetry_group() {
        for base in [&t1, &t2] {
            let tri_raw: Vec<Vec2> = base.tri.iter().map(|v| apply(&g, *v)).collect();
            // field transforms as a vector: values w' = G w, u' = u;
            // gradients grad u' = G grad u, W' = G W G^T
            let gw = |grad1: Vec2, grad2: Vec2| {
                // rows of W are grad w1, grad w2; compute G W G^T rows
                let r0 = Vec2::new(
                    g[0][0] * grad1.x + g[0][1] * grad2.x,
                    g[0][0] * grad1.y + g[0][1] * grad2.y,
                );
                let r1 = Vec2::new(
                    g[1][0] * grad1.x + g[1][1] * grad2.x,
                    g[1][0] * grad1.y + g[1][1] * grad2.y,
                );
                // multiply by G^T on the right: row . columns of G^T = rows of G
                (
                    Vec2::new(
                        r0.x * g[0][0] + r0.y * g[0][1],
                        r0.x * g[1][0] + r0.y * g[1][1],
                    ),
                    Vec2::new(
                        r1.x * g[0][0] + r1.y * g[0][1],
                        r1.x * g[1][0] + r1.y * g[1][1],
                    ),
                )
            };
            let (grad_w1, grad_w2) = gw(base.grad_w1, base.grad_w2);
            let grad_u = {
                let gu = base.grad_u;
                // grad(u o G^{-1}) = G grad u for orthogonal G
                Vec2::new(
                    g[0][0] * gu.x + g[0][1] * gu.y,
                    g[1][0] * gu.x + g[1][1] * gu.y,
                )
            };
            let w_at = apply(&g, base.w_at);
            // restore counter-clockwise orientation if the map flipped it
            let mut tri = [tri_raw[0], tri_raw[1], tri_raw[2]];
            if (tri[1] - tri[0]).cross(tri[2] - tri[0]) < 0.0 {
                tri.swap(1, 2);
            }
            pieces.push(CornerPiece {
                tri,
                grad_w1,
                grad_w2,
                grad_u,
                w_at,
                u_at: base.u_at,
            });
        }
    }
    let map = CornerMap { d, alpha, pieces };
    // construction invariants
    for (i, piece) in map.pieces.iter().enumerate() {
        for (k, r) in piece.membrane_residuals().iter().enumerate() {
            if r.abs() > 1e-12 * (1.0 + alpha) {
                return Err(BlisterError::Construction(format!(
                    "membrane residual {k} on piece {i} is {r}"
                )));
            }
        }
    }
    Ok(map)
}

impl CornerMap {
    /// Piece containing a renormalized point.
    pub fn locate(&self, p: Vec2) -> Option<&CornerPiece> {
        self.pieces
            .iter()
            .find(|piece| convex_contains(&piece.tri, p, 1e-12))
            .or_else(|| {
                self.pieces
                    .iter()
                    .find(|piece| convex_contains(&piece.tri, p, 1e-8))
            })
    }

    /// (w, u) at a renormalized point.
    pub fn eval(&self, p: Vec2) -> Result<(Vec2, f64)> {
        self.locate(p).map(|piece| piece.eval(p)).ok_or_else(|| {
            BlisterError::Evaluation(format!("point ({}, {}) not covered", p.x, p.y))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn corner_d_value() {
        assert!((CORNER_D - 0.17157287525381).abs() < 1e-11);
        let alpha = 0.3;
        let r = t2_shear_residual(CORNER_D, alpha);
        assert!(r.abs() < 1e-12, "shear residual {r}");
    }

    #[test]
    fn shear_root_is_unique() {
        for alpha in [0.05, 0.3, 0.9] {
            let roots = shear_residual_roots(alpha, 2000);
            assert_eq!(roots.len(), 1, "roots at alpha={alpha}: {roots:?}");
            assert!((roots[0] - CORNER_D).abs() < 1e-10, "root {}", roots[0]);
        }
    }

    #[test]
    fn base_triangle_data_matches_theory() {
        let theta: f64 = 0.25;
        let eta = 0.08;
        let map = corner_map(theta, eta).unwrap();
        let alpha = eta * (1.0 + theta.sqrt() / (1.0 - theta.sqrt()));
        assert!((map.alpha - alpha).abs() < 1e-15);
        // T1 hosts u(A) = sqrt(2 alpha), u(B) = 0, grad u = (-sqrt(2 alpha), 0)
        let (_, u_a) = map.eval(Vec2::new(0.0, -0.999)).unwrap();
        assert!((u_a - (2.0 * alpha).sqrt()).abs() < 1e-2);
        let (_, u_b) = map.eval(Vec2::new(0.999, -0.999)).unwrap();
        assert!(u_b.abs() < 1e-2);
    }

    #[test]
    fn boundary_data_and_continuity() {
        let map = corner_map(0.25, 0.08).unwrap();
        let alpha = map.alpha;
        // w = -(alpha x, alpha y) on the boundary of the square
        for i in 0..50 {
            let x = -1.0 + 2.0 * (i as f64 + 0.5) / 50.0;
            for p in [
                Vec2::new(x, -1.0 + 1e-12),
                Vec2::new(x, 1.0 - 1e-12),
                Vec2::new(-1.0 + 1e-12, x),
                Vec2::new(1.0 - 1e-12, x),
            ] {
                let (w, _) = map.eval(p).unwrap();
                assert!((w.x + alpha * p.x).abs() < 1e-9, "w1 at ({}, {})", p.x, p.y);
                assert!((w.y + alpha * p.y).abs() < 1e-9, "w2 at ({}, {})", p.x, p.y);
            }
        }
        // u vanishes at the four corners
        for p in [
            Vec2::new(-1.0, -1.0),
            Vec2::new(1.0, -1.0),
            Vec2::new(-1.0, 1.0),
            Vec2::new(1.0, 1.0),
        ] {
            let (_, u) = map
                .eval(Vec2::new(p.x * (1.0 - 1e-12), p.y * (1.0 - 1e-12)))
                .unwrap();
            assert!(u.abs() < 1e-9);
        }
        // continuity across every shared edge: sample pairs of pieces
        for i in 0..map.pieces.len() {
            for j in (i + 1)..map.pieces.len() {
                let pi = &map.pieces[i];
                let pj = &map.pieces[j];
                // shared vertices
                let shared: Vec<Vec2> = pi
                    .tri
                    .iter()
                    .filter(|v| pj.tri.iter().any(|w| (**v - *w).norm() < 1e-13))
                    .copied()
                    .collect();
                if shared.len() == 2 {
                    for t in [0.2, 0.5, 0.8] {
                        let p = shared[0] + (shared[1] - shared[0]).scale(t);
                        let (wi, ui) = pi.eval(p);
                        let (wj, uj) = pj.eval(p);
                        assert!((wi - wj).norm() < 1e-12, "w jump across edge {i}-{j}");
                        assert!((ui - uj).abs() < 1e-12, "u jump across edge {i}-{j}");
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn membrane_vanishes_for_random_parameters(theta in 0.05f64..0.9, eta in 1e-4f64..0.2) {
            let map = corner_map(theta, eta).unwrap();
            for piece in &map.pieces {
                for r in piece.membrane_residuals() {
                    prop_assert!(r.abs() < 1e-12);
                }
            }
        }
    }
}
