//! Brute-force reference implementations used by the verification suites.
//!
//! These deliberately avoid the closed-form paths of the solvers they
//! check: the profile objective is minimized by dense grid search with
//! golden-section refinement, and circle-ellipse intersections are located
//! by walking the unit circle.

use nalgebra::{Matrix2, Vector2};

use crate::geometry::Real;

use super::systems::LinearSystem;

/// Result of the grid-search minimization of the profile objective.
#[derive(Debug, Clone, Copy)]
pub struct ProfileMinimum {
    pub alpha: Real,
    pub objective: Real,
}

/// Profile objective of an inhomogeneous planar system: for a fixed angle,
/// `(p, q)` are solved from the 2x2 normal equations and the full squared
/// residual is returned.
pub fn profile_objective(sys: &LinearSystem, alpha: Real) -> Real {
    let a12 = sys.a.columns(0, 2);
    let a34 = sys.a.columns(2, 2);
    let c = Vector2::new(alpha.cos(), alpha.sin());
    let rhs_full = &sys.b - &a12 * c;
    let ntn = a34.transpose() * a34;
    let nrm = Matrix2::new(ntn[(0, 0)], ntn[(0, 1)], ntn[(1, 0)], ntn[(1, 1)]);
    let rhs_dyn = a34.transpose() * &rhs_full;
    let rhs = Vector2::new(rhs_dyn[0], rhs_dyn[1]);
    let y = nrm
        .try_inverse()
        .map(|inv| inv * rhs)
        .unwrap_or_else(Vector2::zeros);
    (a34 * y - rhs_full).norm_squared()
}

/// Global minimum of the profile objective over a dense angle grid,
/// refined by golden-section search around the best grid cell.
pub fn profile_objective_minimum(sys: &LinearSystem, grid: usize) -> ProfileMinimum {
    let tau = std::f64::consts::TAU;
    let step = tau / grid as Real;
    let mut best_alpha = 0.0;
    let mut best_j = Real::INFINITY;
    for i in 0..grid {
        let alpha = i as Real * step;
        let j = profile_objective(sys, alpha);
        if j < best_j {
            best_j = j;
            best_alpha = alpha;
        }
    }

    // Golden-section refinement on the bracketing interval.
    let gr = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut lo = best_alpha - step;
    let mut hi = best_alpha + step;
    let mut c = hi - gr * (hi - lo);
    let mut d = lo + gr * (hi - lo);
    let mut jc = profile_objective(sys, c);
    let mut jd = profile_objective(sys, d);
    for _ in 0..80 {
        if jc < jd {
            hi = d;
            d = c;
            jd = jc;
            c = hi - gr * (hi - lo);
            jc = profile_objective(sys, c);
        } else {
            lo = c;
            c = d;
            jc = jd;
            d = lo + gr * (hi - lo);
            jd = profile_objective(sys, d);
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    let alpha = 0.5 * (lo + hi);
    ProfileMinimum { alpha: crate::geometry::wrap_angle(alpha), objective: profile_objective(sys, alpha) }
}

/// Circle-walk search for intersections of the unit circle with the
/// origin-centered ellipse `|diag(s1, s2) v| = 1`: the sign changes of
/// `f(theta) = |diag(s1,s2) [cos t, sin t]| - 1` over `samples` steps are
/// bisected to high precision.
pub fn circle_walk_intersections(s1: Real, s2: Real, samples: usize) -> Vec<Vector2<Real>> {
    let f = |theta: Real| -> Real {
        let v = Vector2::new(theta.cos(), theta.sin());
        Vector2::new(s1 * v.x, s2 * v.y).norm() - 1.0
    };
    let tau = std::f64::consts::TAU;
    let step = tau / samples as Real;
    let mut out: Vec<Vector2<Real>> = Vec::new();
    let mut prev = f(0.0);
    for i in 1..=samples {
        let theta = i as Real * step;
        let cur = f(theta);
        if prev == 0.0 || prev * cur < 0.0 {
            let (mut lo, mut hi) = (theta - step, theta);
            for _ in 0..90 {
                let mid = 0.5 * (lo + hi);
                if f(lo) * f(mid) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let root = 0.5 * (lo + hi);
            let v = Vector2::new(root.cos(), root.sin());
            if out.iter().all(|u| (u - v).norm() > 1e-7) {
                out.push(v);
            }
        }
        prev = cur;
    }
    // Tangency: the walk may miss touching points where f does not change
    // sign; pick up near-zero minima as well.
    let mut prev2 = f(-step);
    let mut prev1 = f(0.0);
    for i in 1..=samples + 1 {
        let theta = i as Real * step;
        let cur = f(theta);
        if prev1.abs() < 1e-9 && prev1.abs() <= prev2.abs() && prev1.abs() <= cur.abs() {
            let t0 = (i - 1) as Real * step;
            let v = Vector2::new(t0.cos(), t0.sin());
            if out.iter().all(|u| (u - v).norm() > 1e-6) {
                out.push(v);
            }
        }
        prev2 = prev1;
        prev1 = cur;
    }
    out
}
