//! Solver for vertical walls of unknown orientation.
//!
//! The five nonzero homography entries are recovered as the null vector of
//! the stacked homogeneous system, scaled to `h5 = 1`. With
//! `n = [cos d, 0, sin d]` the scaled entries satisfy
//!
//! ```text
//! h1 = cos a - p cos d        h3 = -sin a - p sin d
//! h7 = sin a - q cos d        h9 = cos a - q sin d
//! ```
//!
//! Eliminating `(p, q)` leaves `B v1 = v2` with
//! `B = [[h9, -h7], [-h3, h1]]`, `v1 = [cos d, sin d]`,
//! `v2 = [cos(a + d), sin(a + d)]`, both unit. Diagonalizing `B` by SVD
//! turns the constraint into intersecting the unit circle with an
//! origin-centered ellipse, giving up to four candidates; each is accepted
//! only if it recomposes the scaled homography entrywise.

use nalgebra::{Matrix2, Vector2, Vector5};

use crate::geometry::{
    pose_and_plane_from_params, wrap_angle, AffineCorrespondence, PlaneClass, Real,
    ScaledTranslationParams,
};

use super::conic::intersect_unit_circle_ellipse;
use super::systems::build_general_vertical_system;
use super::{SolverCandidate, SolverError, SolverReport};

/// Up to four `(alpha, delta, p, q)` candidates from affine correspondences
/// on a vertical wall of unknown orientation. Disambiguate with
/// [`crate::validation::cheirality_select`].
pub fn solve_vertical_general(
    acs: &[AffineCorrespondence],
) -> Result<SolverReport, SolverError> {
    if acs.is_empty() {
        return Err(SolverError::EmptyInput);
    }
    let sys = build_general_vertical_system(acs);
    let svd = sys.a.clone().svd(false, true);
    let v_t = svd.v_t.as_ref().ok_or(SolverError::Degenerate("svd failed"))?;
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| {
        svd.singular_values[i]
            .partial_cmp(&svd.singular_values[j])
            .unwrap()
    });
    let conditioning = svd.singular_values[order[0]];
    if svd.singular_values[order[1]] - svd.singular_values[order[0]] < 1e-10 {
        return Err(SolverError::Degenerate("ambiguous null space"));
    }
    let h = v_t.row(order[0]).transpose();
    if h[2].abs() < 1e-10 {
        return Err(SolverError::Degenerate("h5 vanished before scaling"));
    }
    let hs = &h / h[2];
    let (h1, h3, h7, h9) = (hs[0], hs[1], hs[3], hs[4]);

    let b = Matrix2::new(h9, -h7, -h3, h1);
    let svd2 = b.svd(true, true);
    let u = svd2.u.unwrap();
    let vt = svd2.v_t.unwrap();
    let (mut s1, mut s2) = (svd2.singular_values[0], svd2.singular_values[1]);
    let (mut u, mut vt) = (u, vt);
    if s1 < s2 {
        std::mem::swap(&mut s1, &mut s2);
        u = Matrix2::from_columns(&[u.column(1).into_owned(), u.column(0).into_owned()]);
        vt = Matrix2::from_rows(&[vt.row(1).into_owned(), vt.row(0).into_owned()]);
    }

    let intersections = match intersect_unit_circle_ellipse(s1, s2) {
        Ok(res) => res,
        Err(SolverError::DegenerateCircle) => {
            // B is a scaled rotation: the translation (numerically)
            // vanishes and the wall orientation is unobservable. Report
            // the pure-rotation pose with an undetermined normal.
            return Ok(pure_rotation_report(h1, h3, h7, h9, conditioning));
        }
        Err(e) => return Err(e),
    };
    let rec_tolerance = 1e-6 + 100.0 * intersections.clamp.sqrt();

    let mut candidates = Vec::with_capacity(intersections.points.len());
    for (v1p, v2p) in &intersections.points {
        let v1 = vt.transpose() * v1p;
        let v2 = u * v2p;
        let delta = v1.y.atan2(v1.x);
        let alpha = wrap_angle(v2.y.atan2(v2.x) - delta);
        let (sa, ca) = alpha.sin_cos();
        let (sd, cd) = delta.sin_cos();
        // p and q from the profile of the four entry equations; exact when
        // the candidate is consistent, least squares otherwise.
        let p = cd * (ca - h1) + sd * (-sa - h3);
        let q = cd * (sa - h7) + sd * (ca - h9);
        let rec = Vector2::new(ca - p * cd - h1, -sa - p * sd - h3)
            .amax()
            .max(Vector2::new(sa - q * cd - h7, ca - q * sd - h9).amax());
        if rec > rec_tolerance {
            continue;
        }
        let sysres = system_residual(&sys.a, alpha, delta, p, q);
        let (pose, plane) =
            pose_and_plane_from_params(PlaneClass::GeneralVertical, delta, alpha, p, q);
        candidates.push(SolverCandidate {
            pose,
            plane,
            params: ScaledTranslationParams::new(p, q),
            residual: sysres,
            recomposition_residual: rec,
            normal_determined: true,
        });
    }
    candidates.sort_by(|a, b| {
        a.recomposition_residual
            .partial_cmp(&b.recomposition_residual)
            .unwrap()
            .then(a.pose.alpha.partial_cmp(&b.pose.alpha).unwrap())
            .then(a.plane.delta.partial_cmp(&b.plane.delta).unwrap())
    });
    let degenerate = candidates.is_empty();
    Ok(SolverReport { candidates, conditioning, degenerate })
}

fn system_residual(a: &nalgebra::DMatrix<Real>, alpha: Real, delta: Real, p: Real, q: Real) -> Real {
    let (sa, ca) = alpha.sin_cos();
    let (sd, cd) = delta.sin_cos();
    let h = Vector5::new(ca - p * cd, -sa - p * sd, 1.0, sa - q * cd, ca - q * sd);
    let n = h.norm();
    if n < 1e-300 {
        return Real::INFINITY;
    }
    (a * (h / n)).norm()
}

fn pure_rotation_report(
    h1: Real,
    h3: Real,
    h7: Real,
    h9: Real,
    conditioning: Real,
) -> SolverReport {
    let alpha = wrap_angle((0.5 * (h7 - h3)).atan2(0.5 * (h1 + h9)));
    let (pose, plane) =
        pose_and_plane_from_params(PlaneClass::GeneralVertical, 0.0, alpha, 0.0, 0.0);
    let (sa, ca) = alpha.sin_cos();
    let rec = ((h1 - ca).abs().max((h3 + sa).abs())).max((h7 - sa).abs().max((h9 - ca).abs()));
    SolverReport {
        candidates: vec![SolverCandidate {
            pose,
            plane,
            params: ScaledTranslationParams::new(0.0, 0.0),
            residual: rec,
            recomposition_residual: rec,
            normal_determined: false,
        }],
        conditioning,
        degenerate: false,
    }
}
