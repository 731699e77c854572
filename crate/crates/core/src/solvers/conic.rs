//! Intersection of the unit circle with an axis-aligned origin-centered
//! ellipse, the core geometric step of the general vertical-wall solver.

use nalgebra::Vector2;

use crate::geometry::Real;

use super::SolverError;

/// Tolerance by which `a^2` may overshoot `[0, 1]` before the configuration
/// is declared non-intersecting. Overshoots within the tolerance are
/// clamped; the applied clamp is reported for downstream use.
pub const CLAMP_TOLERANCE: Real = 1e-6;

/// Intersection points `v1'` on the unit circle with their images
/// `v2' = diag(s1, s2) v1'` on the ellipse.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleEllipseIntersections {
    /// Up to four `(v1', v2')` pairs, both unit vectors.
    pub points: Vec<(Vector2<Real>, Vector2<Real>)>,
    /// Amount by which `a^2` had to be clamped into `[0, 1]` (zero for
    /// exactly intersecting configurations).
    pub clamp: Real,
}

/// Solve `|v1'| = |diag(s1, s2) v1'| = 1` in closed form.
///
/// Requires `s1 >= s2 >= 0`. With `a^2 = (1 - s2^2) / (s1^2 - s2^2)` the
/// solutions are the sign combinations `(+-a, +-b)`, `b^2 = 1 - a^2`;
/// four in general, two at tangency.
pub fn intersect_unit_circle_ellipse(
    s1: Real,
    s2: Real,
) -> Result<CircleEllipseIntersections, SolverError> {
    assert!(
        s1 >= s2 && s2 >= 0.0,
        "singular values must satisfy s1 >= s2 >= 0 (got {s1}, {s2})"
    );
    if s1 - s2 < 1e-9 {
        if (s1 - 1.0).abs() < 1e-6 {
            // The ellipse is (numerically) the unit circle itself.
            return Err(SolverError::DegenerateCircle);
        }
        return Err(SolverError::NoRealIntersection(Real::INFINITY));
    }

    let a2_raw = (1.0 - s2 * s2) / (s1 * s1 - s2 * s2);
    let mut clamp = 0.0;
    let a2 = if a2_raw < 0.0 {
        clamp = -a2_raw;
        0.0
    } else if a2_raw > 1.0 {
        clamp = a2_raw - 1.0;
        1.0
    } else {
        a2_raw
    };
    if clamp > CLAMP_TOLERANCE {
        return Err(SolverError::NoRealIntersection(a2_raw));
    }

    let a = a2.sqrt();
    let b = (1.0 - a2).max(0.0).sqrt();
    let mut points = Vec::with_capacity(4);
    let xs: &[Real] = if a < 1e-12 { &[0.0] } else { &[a, -a] };
    let ys: &[Real] = if b < 1e-12 { &[0.0] } else { &[b, -b] };
    for &x in xs {
        for &y in ys {
            let v1 = Vector2::new(x, y);
            let mut v2 = Vector2::new(s1 * x, s2 * y);
            let n = v2.norm();
            if n > 0.0 {
                v2 /= n;
            }
            points.push((v1, v2));
        }
    }
    Ok(CircleEllipseIntersections { points, clamp })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::oracle::circle_walk_intersections;
    use rand::rngs::SmallRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn unit_circle_as_ellipse_is_degenerate() {
        assert_eq!(
            intersect_unit_circle_ellipse(1.0, 1.0).unwrap_err(),
            SolverError::DegenerateCircle
        );
    }

    #[test]
    fn non_straddling_circle_has_no_intersection() {
        assert!(matches!(
            intersect_unit_circle_ellipse(0.5, 0.5 - 1e-12),
            Err(SolverError::NoRealIntersection(_))
        ));
        assert!(matches!(
            intersect_unit_circle_ellipse(0.9, 0.2),
            Err(SolverError::NoRealIntersection(_))
        ));
    }

    #[test]
    fn generic_case_has_four_points() {
        let res = intersect_unit_circle_ellipse(2.0, 0.5).unwrap();
        assert_eq!(res.points.len(), 4);
        assert_eq!(res.clamp, 0.0);
        let a2: f64 = 0.2;
        for (v1, v2) in &res.points {
            assert!((v1.x.abs() - a2.sqrt()).abs() < 1e-12);
            assert!((v1.y.abs() - (1.0 - a2).sqrt()).abs() < 1e-12);
            assert!((v1.norm() - 1.0).abs() < 1e-10);
            assert!((v2.norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn tangency_yields_two_points() {
        let res = intersect_unit_circle_ellipse(1.0, 0.3).unwrap();
        assert_eq!(res.points.len(), 2);
        for (v1, _) in &res.points {
            assert!((v1.x.abs() - 1.0).abs() < 1e-10);
            assert!(v1.y.abs() < 1e-10);
        }
    }

    #[test]
    fn small_overshoot_is_clamped() {
        let res = intersect_unit_circle_ellipse(1.0 - 1e-8, 0.3).unwrap();
        assert!(res.clamp > 0.0 && res.clamp < 1e-6);
        assert_eq!(res.points.len(), 2);
    }

    #[test]
    fn matches_circle_walk_oracle() {
        let mut rng = SmallRng::seed_from_u64(5);
        let mut checked = 0;
        while checked < 200 {
            let s1: f64 = rng.gen_range(0.2..2.5);
            let s2: f64 = rng.gen_range(0.1..s1);
            if s1 - s2 < 1e-3 {
                continue;
            }
            let closed = intersect_unit_circle_ellipse(s1, s2);
            let walked = circle_walk_intersections(s1, s2, 100_000);
            match closed {
                Ok(res) if res.clamp == 0.0 => {
                    assert_eq!(res.points.len(), walked.len(), "s1={s1} s2={s2}");
                    for (v1, _) in &res.points {
                        let best = walked
                            .iter()
                            .map(|w| (w - v1).norm())
                            .fold(f64::INFINITY, f64::min);
                        assert!(best < 1e-6, "s1={s1} s2={s2} point {v1:?} off by {best}");
                    }
                }
                Ok(_) => {} // clamped boundary case; oracle count is fragile there
                Err(_) => {
                    assert!(walked.is_empty(), "s1={s1} s2={s2}: oracle found {walked:?}");
                }
            }
            checked += 1;
        }
    }
}
