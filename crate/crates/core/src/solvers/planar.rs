//! Shared engine for the inhomogeneous ground / axis-aligned wall systems.

use nalgebra::{DMatrix, DVector, Vector2, Vector4};

use crate::geometry::{
    pose_and_plane_from_params, AffineCorrespondence, PlaneClass, Real, ScaledTranslationParams,
};
use crate::math::real_polynomial_roots;

use super::systems::{build_ground_system, build_vertical_special_system, LinearSystem};
use super::{SolverCandidate, SolverError, SolverReport, SpecialPlaneAxis};

/// How the unit-circle constraint on `(cos a, sin a)` is handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolveMethod {
    /// Total least squares on the homogenized system, constraint enforced
    /// afterwards by dividing out the last coordinate and re-projecting
    /// with atan2.
    #[default]
    Rapid,
    /// Global minimizer of the squared residual subject to the unit-circle
    /// constraint, via elimination of `(p, q)` and a quartic in
    /// `tan(alpha/2)`.
    Optimal,
}

/// Ground-plane solver (`n = [0, 1, 0]`).
pub fn solve_ground(
    acs: &[AffineCorrespondence],
    method: SolveMethod,
) -> Result<SolverReport, SolverError> {
    if acs.is_empty() {
        return Err(SolverError::EmptyInput);
    }
    let sys = build_ground_system(acs);
    solve_inhomogeneous(&sys, method, PlaneClass::Ground)
}

/// Axis-aligned vertical-wall solver (`n = [1,0,0]` or `[0,0,1]`).
pub fn solve_vertical_special(
    acs: &[AffineCorrespondence],
    axis: SpecialPlaneAxis,
    method: SolveMethod,
) -> Result<SolverReport, SolverError> {
    if acs.is_empty() {
        return Err(SolverError::EmptyInput);
    }
    let sys = build_vertical_special_system(acs, axis);
    let class = match axis {
        SpecialPlaneAxis::Side => PlaneClass::SideVertical,
        SpecialPlaneAxis::Frontal => PlaneClass::FrontalVertical,
    };
    solve_inhomogeneous(&sys, method, class)
}

fn solve_inhomogeneous(
    sys: &LinearSystem,
    method: SolveMethod,
    class: PlaneClass,
) -> Result<SolverReport, SolverError> {
    let (alpha, p, q) = match method {
        SolveMethod::Rapid => solve_rapid(sys)?,
        SolveMethod::Optimal => solve_optimal(sys)?,
    };
    let x = Vector4::new(alpha.cos(), alpha.sin(), p, q);
    let residual = (&sys.a * x - &sys.b).norm();
    let conditioning = smallest_singular_value(&sys.a);
    let (pose, plane) = pose_and_plane_from_params(class, 0.0, alpha, p, q);
    Ok(SolverReport {
        candidates: vec![SolverCandidate {
            pose,
            plane,
            params: ScaledTranslationParams::new(p, q),
            residual,
            recomposition_residual: 0.0,
            normal_determined: true,
        }],
        conditioning,
        degenerate: false,
    })
}

fn smallest_singular_value(a: &DMatrix<Real>) -> Real {
    a.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .fold(Real::INFINITY, |m, s| m.min(*s))
}

/// Null vector of `[A | -b]`, divided by its last coordinate.
fn solve_rapid(sys: &LinearSystem) -> Result<(Real, Real, Real), SolverError> {
    let n = sys.a.nrows();
    let mut aug = DMatrix::zeros(n, 5);
    aug.view_mut((0, 0), (n, 4)).copy_from(&sys.a);
    aug.view_mut((0, 4), (n, 1)).copy_from(&(-&sys.b));

    let svd = aug.svd(false, true);
    let v_t = svd.v_t.as_ref().ok_or(SolverError::Degenerate("svd failed"))?;
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| {
        svd.singular_values[i]
            .partial_cmp(&svd.singular_values[j])
            .unwrap()
    });
    if svd.singular_values[order[1]] - svd.singular_values[order[0]] < 1e-10 {
        return Err(SolverError::Degenerate("ambiguous null space"));
    }
    let v = v_t.row(order[0]);
    let w = v[4];
    if w.abs() < 1e-10 {
        return Err(SolverError::Degenerate("homogeneous coordinate vanished"));
    }
    let x1 = v[0] / w;
    let x2 = v[1] / w;
    let alpha = x2.atan2(x1);
    Ok((alpha, v[2] / w, v[3] / w))
}

/// Globally optimal constrained least squares: eliminate `(p, q)`, reduce to
/// a one-angle objective on the unit circle, and take the best stationary
/// point of its quartic in `tan(alpha/2)`.
fn solve_optimal(sys: &LinearSystem) -> Result<(Real, Real, Real), SolverError> {
    let n = sys.a.nrows();
    let a12 = sys.a.columns(0, 2).into_owned();
    let a34 = sys.a.columns(2, 2).into_owned();

    // Orthonormal basis of range(A34), truncated at numerical rank.
    let svd34 = a34.clone().svd(true, true);
    let u = svd34.u.as_ref().ok_or(SolverError::Degenerate("svd failed"))?;
    let smax = svd34.singular_values.amax();
    let mut atil = a12.clone();
    let mut btil = sys.b.clone();
    for j in 0..svd34.singular_values.len() {
        if svd34.singular_values[j] > 1e-12 * smax.max(1.0) {
            let uj = u.column(j);
            let coeffs = uj.transpose() * &atil;
            atil -= uj * coeffs;
            let cb = uj.dot(&btil);
            btil -= uj.into_owned() * cb;
        }
    }

    // Reduced objective J(c) = |atil c - btil|^2 = c^T M c - 2 g^T c + const.
    let m = atil.transpose() * &atil;
    let g = atil.transpose() * &btil;
    let (m11, m12, m22) = (m[(0, 0)], m[(0, 1)], m[(1, 1)]);
    let (g1, g2) = (g[0], g[1]);

    // Stationarity of J on the circle as a quartic in t = tan(alpha/2).
    let coeffs = [
        m12 + g2,
        2.0 * (m11 - m22 + g1),
        -6.0 * m12,
        2.0 * (m22 - m11 + g1),
        m12 - g2,
    ];
    let scale = coeffs.iter().fold(0.0_f64, |acc, c| acc.max(c.abs()));
    if scale < 1e-14 * (m11.abs() + m22.abs() + 1e-30).max(1.0) && g.norm() < 1e-14 {
        return Err(SolverError::Degenerate("objective constant on the circle"));
    }

    let objective = |alpha: Real| -> Real {
        let c = Vector2::new(alpha.cos(), alpha.sin());
        (&atil * c - &btil).norm_squared()
    };

    let mut best: Option<(Real, Real)> = None;
    let mut consider = |alpha: Real| {
        let j = objective(alpha);
        if best.map_or(true, |(bj, _)| j < bj) {
            best = Some((j, alpha));
        }
    };
    for t in real_polynomial_roots(&coeffs) {
        consider(2.0 * t.atan());
    }
    // tan(alpha/2) cannot represent alpha = pi; evaluate it explicitly.
    consider(std::f64::consts::PI);

    let (_, alpha) = best.ok_or(SolverError::Degenerate("no stationary point"))?;

    // Recover (p, q) by least squares at the chosen angle.
    let c = Vector2::new(alpha.cos(), alpha.sin());
    let rhs = &sys.b - &a12 * c;
    let y = svd34
        .solve(&rhs, 1e-12 * smax.max(1.0))
        .map_err(|_| SolverError::Degenerate("translation back-substitution failed"))?;
    let _ = n;
    Ok((alpha, y[0], y[1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{
        affine_from_homography, angle_distance, compose_homography, planar_rotation,
        NormalizedPoint, PlaneHypothesis, Vec3,
    };
    use nalgebra::Matrix2;
    use rand::rngs::SmallRng;
    use rand::{Rng, SeedableRng};

    fn ground_acs(alpha: f64, p: f64, q: f64, pts: &[(f64, f64)]) -> Vec<AffineCorrespondence> {
        let r = planar_rotation(alpha);
        let t = Vec3::new(-p, 0.0, -q);
        let h = compose_homography(&r, &t, &Vec3::new(0.0, 1.0, 0.0), 1.0).unwrap();
        pts.iter()
            .map(|&(x, y)| affine_from_homography(&h, &NormalizedPoint::new(x, y)).unwrap())
            .collect()
    }

    fn special_acs(
        axis: SpecialPlaneAxis,
        alpha: f64,
        p: f64,
        q: f64,
        pts: &[(f64, f64)],
    ) -> Vec<AffineCorrespondence> {
        let n = match axis {
            SpecialPlaneAxis::Side => Vec3::new(1.0, 0.0, 0.0),
            SpecialPlaneAxis::Frontal => Vec3::new(0.0, 0.0, 1.0),
        };
        let r = planar_rotation(alpha);
        let t = Vec3::new(p, 0.0, q);
        let h = compose_homography(&r, &t, &n, 1.0).unwrap();
        pts.iter()
            .map(|&(x, y)| affine_from_homography(&h, &NormalizedPoint::new(x, y)).unwrap())
            .collect()
    }

    #[test]
    fn rapid_recovers_clean_ground_motion() {
        let acs = ground_acs(0.1, 0.05, -0.02, &[(0.2, 0.3)]);
        let rep = solve_ground(&acs, SolveMethod::Rapid).unwrap();
        let c = &rep.candidates[0];
        assert!(angle_distance(c.pose.alpha, 0.1) < 1e-8);
        assert!((c.params.p - 0.05).abs() < 1e-8);
        assert!((c.params.q + 0.02).abs() < 1e-8);
        assert!(c.residual < 1e-9);
        assert_eq!(c.plane, PlaneHypothesis::ground());
    }

    #[test]
    fn rapid_zero_motion() {
        let acs = vec![AffineCorrespondence::new(
            NormalizedPoint::new(0.3, -0.4),
            NormalizedPoint::new(0.3, -0.4),
            Matrix2::identity(),
        )];
        let rep = solve_ground(&acs, SolveMethod::Rapid).unwrap();
        let c = &rep.candidates[0];
        assert!(angle_distance(c.pose.alpha, 0.0) < 1e-10);
        assert!(c.params.magnitude() < 1e-10);
    }

    #[test]
    fn rapid_overdetermined_matches_minimal() {
        let pts = [(0.2, 0.3), (-0.1, 0.4), (0.35, -0.2), (-0.3, -0.25)];
        let acs = ground_acs(0.07, -0.03, 0.06, &pts);
        let full = solve_ground(&acs, SolveMethod::Rapid).unwrap();
        let one = solve_ground(&acs[..1], SolveMethod::Rapid).unwrap();
        let (cf, c1) = (&full.candidates[0], &one.candidates[0]);
        assert!(angle_distance(cf.pose.alpha, c1.pose.alpha) < 1e-8);
        assert!(cf.residual <= c1.residual + 1e-10);
    }

    #[test]
    fn optimal_matches_rapid_on_clean_data() {
        let acs = ground_acs(0.1, 0.05, -0.02, &[(0.2, 0.3)]);
        let rapid = solve_ground(&acs, SolveMethod::Rapid).unwrap();
        let optimal = solve_ground(&acs, SolveMethod::Optimal).unwrap();
        let (cr, co) = (&rapid.candidates[0], &optimal.candidates[0]);
        assert!(angle_distance(cr.pose.alpha, co.pose.alpha) < 1e-8);
        assert!((cr.params.p - co.params.p).abs() < 1e-8);
        assert!((cr.params.q - co.params.q).abs() < 1e-8);
    }

    #[test]
    fn optimal_dominates_rapid_on_noisy_data() {
        let mut rng = SmallRng::seed_from_u64(17);
        for trial in 0..200 {
            let alpha = rng.gen_range(-0.5..0.5);
            let p = rng.gen_range(-0.2..0.2);
            let q = rng.gen_range(-0.2..0.2);
            let pts: Vec<(f64, f64)> = (0..4)
                .map(|_| (rng.gen_range(-0.8..0.8), rng.gen_range(0.1..0.8)))
                .collect();
            let mut acs = ground_acs(alpha, p, q, &pts);
            for ac in &mut acs {
                // ~0.5 px equivalent at f = 1000.
                ac.p2.x += rng.gen_range(-5e-4..5e-4);
                ac.p2.y += rng.gen_range(-5e-4..5e-4);
            }
            let rapid = solve_ground(&acs, SolveMethod::Rapid).unwrap();
            let optimal = solve_ground(&acs, SolveMethod::Optimal).unwrap();
            let jr = rapid.candidates[0].residual.powi(2);
            let jo = optimal.candidates[0].residual.powi(2);
            assert!(jo <= jr + 1e-12, "trial {trial}: optimal {jo} > rapid {jr}");
        }
    }

    #[test]
    fn optimal_matches_grid_search_oracle() {
        // Independent oracle: profile objective evaluated on a dense angle
        // grid with golden-section refinement, (p, q) solved by 2x2 normal
        // equations at every angle.
        let mut rng = SmallRng::seed_from_u64(23);
        for _ in 0..20 {
            let alpha = rng.gen_range(-0.6..0.6);
            let p = rng.gen_range(-0.2..0.2);
            let q = rng.gen_range(-0.2..0.2);
            let pts: Vec<(f64, f64)> = (0..4)
                .map(|_| (rng.gen_range(-0.8..0.8), rng.gen_range(0.1..0.8)))
                .collect();
            let mut acs = ground_acs(alpha, p, q, &pts);
            for ac in &mut acs {
                ac.p2.x += rng.gen_range(-1e-3..1e-3);
                ac.p2.y += rng.gen_range(-1e-3..1e-3);
                ac.a[(0, 0)] += rng.gen_range(-1e-2..1e-2);
                ac.a[(1, 1)] += rng.gen_range(-1e-2..1e-2);
            }
            let sys = build_ground_system(&acs);
            let oracle = crate::solvers::oracle::profile_objective_minimum(&sys, 200_000);
            let rep = solve_ground(&acs, SolveMethod::Optimal).unwrap();
            let c = &rep.candidates[0];
            let j_solver = c.residual.powi(2);
            assert!(
                j_solver <= oracle.objective + 1e-9,
                "solver {} vs oracle {}",
                j_solver,
                oracle.objective
            );
            assert!(
                angle_distance(c.pose.alpha, oracle.alpha) < 1e-6,
                "alpha {} vs oracle {}",
                c.pose.alpha,
                oracle.alpha
            );
        }
    }

    #[test]
    fn special_solvers_recover_clean_motion() {
        // Frontal wall, forward-dominant motion.
        let acs = special_acs(SpecialPlaneAxis::Frontal, 0.15, 0.01, 0.09, &[(0.2, -0.1)]);
        let rep = solve_vertical_special(&acs, SpecialPlaneAxis::Frontal, SolveMethod::Rapid)
            .unwrap();
        let c = &rep.candidates[0];
        assert!(angle_distance(c.pose.alpha, 0.15) < 1e-8);
        assert!((c.params.p - 0.01).abs() < 1e-8);
        assert!((c.params.q - 0.09).abs() < 1e-8);
        // t_dir carries the positive sign for vertical classes.
        let expected_dir = Vec3::new(0.01, 0.0, 0.09).normalize();
        assert!((c.pose.t_dir - expected_dir).norm() < 1e-7);

        // Side wall analog.
        let acs = special_acs(SpecialPlaneAxis::Side, -0.05, 0.08, 0.02, &[(0.3, 0.2)]);
        let rep =
            solve_vertical_special(&acs, SpecialPlaneAxis::Side, SolveMethod::Optimal).unwrap();
        let c = &rep.candidates[0];
        assert!(angle_distance(c.pose.alpha, crate::geometry::wrap_angle(-0.05)) < 1e-8);
        assert!((c.params.p - 0.08).abs() < 1e-8);
    }

    #[test]
    fn special_identity_motion() {
        let acs = vec![AffineCorrespondence::new(
            NormalizedPoint::new(0.1, 0.2),
            NormalizedPoint::new(0.1, 0.2),
            Matrix2::identity(),
        )];
        for axis in [SpecialPlaneAxis::Side, SpecialPlaneAxis::Frontal] {
            let rep = solve_vertical_special(&acs, axis, SolveMethod::Rapid).unwrap();
            let c = &rep.candidates[0];
            assert!(angle_distance(c.pose.alpha, 0.0) < 1e-9);
            assert!(c.params.magnitude() < 1e-9);
        }
    }

    #[test]
    fn empty_input_is_rejected() {
        assert_eq!(
            solve_ground(&[], SolveMethod::Rapid).unwrap_err(),
            SolverError::EmptyInput
        );
    }
}
