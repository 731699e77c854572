//! Domain types and exact forward maps for planar-motion two-view geometry.
//!
//! Conventions used throughout the crate:
//!
//! - Normalized image coordinates: pixel coordinates premultiplied by the
//!   inverse intrinsic matrix, so a point is `u = [x, y, 1]^T`.
//! - Planar motion: rotation about the Y axis by `alpha`, translation
//!   `t = rho * [cos(beta), 0, sin(beta)]^T` with the second-view mapping
//!   `x2 = R x1 - t`.
//! - A scene plane is the point set `{X : n^T X = d}` with unit outward
//!   normal `n` and distance `d > 0`, so the induced image-to-image
//!   homography is exactly `H = R - (1/d) t n^T`.
//!
//! Under these conventions the ground plane (`n = [0,1,0]`, Y pointing
//! down), a frontal wall (`n = [0,0,1]`) and a side wall (`n = [1,0,0]`)
//! are all simultaneously visible in front of the camera.

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};
use thiserror::Error;

/// Scalar type used throughout the crate.
pub type Real = f64;
pub type Mat2 = Matrix2<Real>;
pub type Mat3 = Matrix3<Real>;
pub type Vec2 = Vector2<Real>;
pub type Vec3 = Vector3<Real>;

/// Denominator magnitude below which a mapped point is treated as at infinity.
pub const EPS_DEGENERATE: Real = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("plane distance must be positive, got {0}")]
    NonPositiveDistance(Real),
    #[error("mapped point at infinity (denominator {0:e})")]
    PointAtInfinity(Real),
    #[error("intrinsic matrix is singular")]
    SingularIntrinsics,
}

/// Pinhole camera intrinsics in pixel units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraIntrinsics {
    pub fx: Real,
    pub fy: Real,
    pub cx: Real,
    pub cy: Real,
    pub skew: Real,
}

impl CameraIntrinsics {
    pub fn new(fx: Real, fy: Real, cx: Real, cy: Real) -> Self {
        Self { fx, fy, cx, cy, skew: 0.0 }
    }

    /// The 3x3 calibration matrix K.
    pub fn matrix(&self) -> Mat3 {
        Mat3::new(self.fx, self.skew, self.cx, 0.0, self.fy, self.cy, 0.0, 0.0, 1.0)
    }

    /// Upper-left 2x2 block of K (used to conjugate affinities).
    pub fn matrix2(&self) -> Mat2 {
        Mat2::new(self.fx, self.skew, 0.0, self.fy)
    }

    pub fn is_valid(&self) -> bool {
        self.fx > 0.0 && self.fy > 0.0 && self.matrix().determinant().abs() > EPS_DEGENERATE
    }
}

/// Image point in normalized (calibrated) coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedPoint {
    pub x: Real,
    pub y: Real,
}

impl NormalizedPoint {
    pub fn new(x: Real, y: Real) -> Self {
        Self { x, y }
    }

    /// Homogeneous coordinates `[x, y, 1]`.
    pub fn homogeneous(&self) -> Vec3 {
        Vec3::new(self.x, self.y, 1.0)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// A point match plus the 2x2 local affine frame mapping the first-image
/// neighborhood onto the second.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineCorrespondence {
    pub p1: NormalizedPoint,
    pub p2: NormalizedPoint,
    /// Local affinity `[a1 a2; a3 a4]`.
    pub a: Mat2,
}

impl AffineCorrespondence {
    pub fn new(p1: NormalizedPoint, p2: NormalizedPoint, a: Mat2) -> Self {
        Self { p1, p2, a }
    }

    /// A correspondence is usable when all entries are finite and the
    /// affinity is invertible. Singular affinities are flagged, not rejected.
    pub fn is_valid(&self) -> bool {
        self.p1.is_finite()
            && self.p2.is_finite()
            && self.a.iter().all(|v| v.is_finite())
            && self.a.determinant().abs() > EPS_DEGENERATE
    }
}

/// Rotation about Y by `alpha` plus a unit translation direction in the
/// XZ plane. The translation length is not recoverable from images and is
/// deliberately not stored; `t_dir` is zero for a pure rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarPose {
    /// Yaw angle in radians, normalized to `[0, 2*pi)`.
    pub alpha: Real,
    /// Unit translation direction `[tx, 0, tz]`, or zero for pure rotation.
    pub t_dir: Vec3,
}

impl PlanarPose {
    pub fn new(alpha: Real, t_dir: Vec3) -> Self {
        Self { alpha: wrap_angle(alpha), t_dir }
    }

    pub fn identity() -> Self {
        Self { alpha: 0.0, t_dir: Vec3::zeros() }
    }

    pub fn rotation(&self) -> Mat3 {
        planar_rotation(self.alpha)
    }

    pub fn is_pure_rotation(&self) -> bool {
        self.t_dir.norm() < EPS_DEGENERATE
    }
}

/// Structural class of a homography, by the scene plane that induced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomographyStructure {
    General,
    Ground,
    FrontalVertical,
    SideVertical,
    GeneralVertical,
}

/// 3x3 homography defined up to scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Homography {
    pub h: Mat3,
    pub structure: HomographyStructure,
}

impl Homography {
    pub fn new(h: Mat3, structure: HomographyStructure) -> Self {
        Self { h, structure }
    }

    pub fn general(h: Mat3) -> Self {
        Self { h, structure: HomographyStructure::General }
    }

    /// Scale-canonical form: unit Frobenius norm with the largest-magnitude
    /// entry positive. Two homographies are equal up to scale iff their
    /// canonical forms match entrywise.
    pub fn canonical(&self) -> Mat3 {
        canonicalize_up_to_scale(&self.h)
    }

    /// Entrywise distance between canonical forms.
    pub fn distance_up_to_scale(&self, other: &Mat3) -> Real {
        let a = self.canonical();
        let b = canonicalize_up_to_scale(other);
        (a - b).norm()
    }
}

/// Normalize a matrix to unit Frobenius norm with the largest-magnitude
/// entry positive.
pub fn canonicalize_up_to_scale(m: &Mat3) -> Mat3 {
    let norm = m.norm();
    if norm < EPS_DEGENERATE {
        return *m;
    }
    let mut out = m / norm;
    let mut best = 0.0;
    let mut sign = 1.0;
    for v in out.iter() {
        if v.abs() > best {
            best = v.abs();
            sign = if *v < 0.0 { -1.0 } else { 1.0 };
        }
    }
    out *= sign;
    out
}

/// Scene-plane classes handled by the minimal solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaneClass {
    Ground,
    FrontalVertical,
    SideVertical,
    GeneralVertical,
}

/// A plane prior: class plus, for general vertical walls, the normal angle
/// `delta` with `n = [cos(delta), 0, sin(delta)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneHypothesis {
    pub class: PlaneClass,
    /// Normal angle in radians; meaningful only for `GeneralVertical`.
    pub delta: Real,
}

impl PlaneHypothesis {
    pub fn ground() -> Self {
        Self { class: PlaneClass::Ground, delta: 0.0 }
    }

    pub fn frontal() -> Self {
        Self { class: PlaneClass::FrontalVertical, delta: 0.0 }
    }

    pub fn side() -> Self {
        Self { class: PlaneClass::SideVertical, delta: 0.0 }
    }

    pub fn general_vertical(delta: Real) -> Self {
        Self { class: PlaneClass::GeneralVertical, delta }
    }

    /// The implied unit normal.
    pub fn normal(&self) -> Vec3 {
        match self.class {
            PlaneClass::Ground => Vec3::new(0.0, 1.0, 0.0),
            PlaneClass::FrontalVertical => Vec3::new(0.0, 0.0, 1.0),
            PlaneClass::SideVertical => Vec3::new(1.0, 0.0, 0.0),
            PlaneClass::GeneralVertical => Vec3::new(self.delta.cos(), 0.0, self.delta.sin()),
        }
    }
}

/// Scaled translation parameters as they appear in the linear systems:
/// `(p, q)` encode `rho/d * (cos beta, sin beta)` with a per-class sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledTranslationParams {
    pub p: Real,
    pub q: Real,
}

impl ScaledTranslationParams {
    pub fn new(p: Real, q: Real) -> Self {
        Self { p, q }
    }

    /// `rho / d`, the translation length in units of the plane distance.
    pub fn magnitude(&self) -> Real {
        self.p.hypot(self.q)
    }
}

/// Wrap an angle to `[0, 2*pi)`.
pub fn wrap_angle(a: Real) -> Real {
    let two_pi = std::f64::consts::TAU;
    let mut r = a % two_pi;
    if r < 0.0 {
        r += two_pi;
    }
    if r >= two_pi {
        r -= two_pi;
    }
    r
}

/// Absolute angular difference on the circle, in `[0, pi]`.
pub fn angle_distance(a: Real, b: Real) -> Real {
    let d = wrap_angle(a - b);
    d.min(std::f64::consts::TAU - d)
}

/// Rotation about the Y axis:
/// `[[cos a, 0, -sin a], [0, 1, 0], [sin a, 0, cos a]]`.
pub fn planar_rotation(alpha: Real) -> Mat3 {
    let (s, c) = alpha.sin_cos();
    Mat3::new(c, 0.0, -s, 0.0, 1.0, 0.0, s, 0.0, c)
}

/// Yaw angle of a planar rotation matrix.
pub fn planar_rotation_angle(r: &Mat3) -> Real {
    wrap_angle(r[(2, 0)].atan2(r[(0, 0)]))
}

fn classify_structure(r: &Mat3, t: &Vec3, n: &Vec3) -> HomographyStructure {
    let planar_r = r[(0, 1)].abs() < EPS_DEGENERATE
        && r[(1, 0)].abs() < EPS_DEGENERATE
        && r[(1, 2)].abs() < EPS_DEGENERATE
        && r[(2, 1)].abs() < EPS_DEGENERATE
        && (r[(1, 1)] - 1.0).abs() < EPS_DEGENERATE;
    let planar_t = t.y.abs() < EPS_DEGENERATE;
    if !planar_r || !planar_t {
        return HomographyStructure::General;
    }
    let (nx, ny, nz) = (n.x, n.y, n.z);
    if ny.abs() > 1.0 - EPS_DEGENERATE {
        HomographyStructure::Ground
    } else if ny.abs() < EPS_DEGENERATE {
        if nz.abs() > 1.0 - EPS_DEGENERATE {
            HomographyStructure::FrontalVertical
        } else if nx.abs() > 1.0 - EPS_DEGENERATE {
            HomographyStructure::SideVertical
        } else {
            HomographyStructure::GeneralVertical
        }
    } else {
        HomographyStructure::General
    }
}

/// Compose the homography `H = R - (1/d) t n^T` induced by the plane
/// `{X : n^T X = d}` under the motion `x2 = R x1 - t`.
pub fn compose_homography(r: &Mat3, t: &Vec3, n: &Vec3, d: Real) -> Result<Homography, GeometryError> {
    if d <= 0.0 {
        return Err(GeometryError::NonPositiveDistance(d));
    }
    let h = r - t * n.transpose() / d;
    Ok(Homography::new(h, classify_structure(r, t, n)))
}

/// Apply a homography to a point and dehomogenize.
pub fn map_point(h: &Homography, u: &NormalizedPoint) -> Result<NormalizedPoint, GeometryError> {
    let m = &h.h;
    let denom = m[(2, 0)] * u.x + m[(2, 1)] * u.y + m[(2, 2)];
    if denom.abs() < EPS_DEGENERATE {
        return Err(GeometryError::PointAtInfinity(denom));
    }
    let xp = (m[(0, 0)] * u.x + m[(0, 1)] * u.y + m[(0, 2)]) / denom;
    let yp = (m[(1, 0)] * u.x + m[(1, 1)] * u.y + m[(1, 2)]) / denom;
    Ok(NormalizedPoint::new(xp, yp))
}

/// Exact affine correspondence induced by a homography at a point: the
/// first-order expansion of the point map. This is the ground-truth AC
/// generator used by the synthetic benchmark.
pub fn affine_from_homography(
    h: &Homography,
    u: &NormalizedPoint,
) -> Result<AffineCorrespondence, GeometryError> {
    let m = &h.h;
    let s = m[(2, 0)] * u.x + m[(2, 1)] * u.y + m[(2, 2)];
    if s.abs() < EPS_DEGENERATE {
        return Err(GeometryError::PointAtInfinity(s));
    }
    let p2 = map_point(h, u)?;
    let a1 = (m[(0, 0)] - p2.x * m[(2, 0)]) / s;
    let a2 = (m[(0, 1)] - p2.x * m[(2, 1)]) / s;
    let a3 = (m[(1, 0)] - p2.y * m[(2, 0)]) / s;
    let a4 = (m[(1, 1)] - p2.y * m[(2, 1)]) / s;
    Ok(AffineCorrespondence::new(*u, p2, Mat2::new(a1, a2, a3, a4)))
}

/// Reconstruct the planar pose encoded by solver parameters `(alpha, p, q)`
/// for a given plane class.
///
/// The per-class sign relating `(p, q)` to the translation direction is
/// fixed so that `compose_homography(R(alpha), rho*t_dir, n, d)` reproduces
/// the solver's homography form: `t_dir = -[p, 0, q]/|..|` for the ground
/// plane and `t_dir = +[p, 0, q]/|..|` for all vertical classes.
pub fn pose_and_plane_from_params(
    class: PlaneClass,
    delta: Real,
    alpha: Real,
    p: Real,
    q: Real,
) -> (PlanarPose, PlaneHypothesis) {
    let plane = match class {
        PlaneClass::Ground => PlaneHypothesis::ground(),
        PlaneClass::FrontalVertical => PlaneHypothesis::frontal(),
        PlaneClass::SideVertical => PlaneHypothesis::side(),
        PlaneClass::GeneralVertical => PlaneHypothesis::general_vertical(delta),
    };
    let sign = match class {
        PlaneClass::Ground => -1.0,
        _ => 1.0,
    };
    let mag = p.hypot(q);
    let t_dir = if mag < EPS_DEGENERATE {
        Vec3::zeros()
    } else {
        Vec3::new(sign * p / mag, 0.0, sign * q / mag)
    };
    (PlanarPose::new(alpha, t_dir), plane)
}

/// Extract `(alpha, p, q)` from a homography with the structure of the
/// given plane class. Inverse of composing the solver form; used by
/// round-trip checks.
pub fn params_from_homography(class: PlaneClass, delta: Real, h: &Mat3) -> (Real, Real, Real) {
    // Scale so the invariant entry h5 = 1.
    let h = h / h[(1, 1)];
    match class {
        PlaneClass::Ground => {
            let alpha = h[(2, 0)].atan2(h[(0, 0)]);
            (wrap_angle(alpha), h[(0, 1)], h[(2, 1)])
        }
        PlaneClass::FrontalVertical => {
            let alpha = h[(2, 0)].atan2(h[(0, 0)]);
            let (s, c) = alpha.sin_cos();
            (wrap_angle(alpha), -s - h[(0, 2)], c - h[(2, 2)])
        }
        PlaneClass::SideVertical => {
            let alpha = (-h[(0, 2)]).atan2(h[(2, 2)]);
            let (s, c) = alpha.sin_cos();
            (wrap_angle(alpha), c - h[(0, 0)], s - h[(2, 0)])
        }
        PlaneClass::GeneralVertical => {
            // h1 = cos a - p cos d, h3 = -sin a - p sin d,
            // h7 = sin a - q cos d, h9 = cos a - q sin d.
            // Eliminating p and q leaves
            //   h1 sin d - h3 cos d = sin(a + d),
            //   h9 cos d - h7 sin d = cos(a + d).
            let (sd, cd) = delta.sin_cos();
            let apd = (h[(0, 0)] * sd - h[(0, 2)] * cd).atan2(h[(2, 2)] * cd - h[(2, 0)] * sd);
            let alpha = wrap_angle(apd - delta);
            let (sa, ca) = alpha.sin_cos();
            let p = cd * (ca - h[(0, 0)]) + sd * (-sa - h[(0, 2)]);
            let q = cd * (sa - h[(2, 0)]) + sd * (ca - h[(2, 2)]);
            (alpha, p, q)
        }
    }
}

/// Pixel to normalized coordinates: `u <- K^{-1} u`.
pub fn normalize_point(k: &CameraIntrinsics, pixel: &Vec2) -> Result<NormalizedPoint, GeometryError> {
    if !k.is_valid() {
        return Err(GeometryError::SingularIntrinsics);
    }
    let y = (pixel.y - k.cy) / k.fy;
    let x = (pixel.x - k.cx - k.skew * y) / k.fx;
    Ok(NormalizedPoint::new(x, y))
}

/// Normalized to pixel coordinates: `u <- K u`.
pub fn denormalize_point(k: &CameraIntrinsics, u: &NormalizedPoint) -> Vec2 {
    Vec2::new(k.fx * u.x + k.skew * u.y + k.cx, k.fy * u.y + k.cy)
}

/// Conjugate a pixel-space affinity into normalized coordinates:
/// `a <- K2'^{-1} a_px K2` with the upper-left 2x2 intrinsic blocks.
pub fn normalize_affinity(
    k1: &CameraIntrinsics,
    k2: &CameraIntrinsics,
    a_pixel: &Mat2,
) -> Result<Mat2, GeometryError> {
    if !k1.is_valid() || !k2.is_valid() {
        return Err(GeometryError::SingularIntrinsics);
    }
    let k2inv = k2
        .matrix2()
        .try_inverse()
        .ok_or(GeometryError::SingularIntrinsics)?;
    Ok(k2inv * a_pixel * k1.matrix2())
}

/// Inverse of [`normalize_affinity`].
pub fn denormalize_affinity(
    k1: &CameraIntrinsics,
    k2: &CameraIntrinsics,
    a_norm: &Mat2,
) -> Result<Mat2, GeometryError> {
    if !k1.is_valid() || !k2.is_valid() {
        return Err(GeometryError::SingularIntrinsics);
    }
    let k1inv = k1
        .matrix2()
        .try_inverse()
        .ok_or(GeometryError::SingularIntrinsics)?;
    Ok(k2.matrix2() * a_norm * k1inv)
}

/// Residuals of the two point equations relating `(u, u')` through `H`:
/// `x'(h7 x + h8 y + h9) - (h1 x + h2 y + h3)` and the `y'` analogue.
pub fn point_constraint_residuals(h: &Mat3, u: &NormalizedPoint, up: &NormalizedPoint) -> [Real; 2] {
    let s = h[(2, 0)] * u.x + h[(2, 1)] * u.y + h[(2, 2)];
    [
        up.x * s - (h[(0, 0)] * u.x + h[(0, 1)] * u.y + h[(0, 2)]),
        up.y * s - (h[(1, 0)] * u.x + h[(1, 1)] * u.y + h[(1, 2)]),
    ]
}

/// Residuals of the four affine equations relating an AC to `H`.
pub fn affine_constraint_residuals(h: &Mat3, ac: &AffineCorrespondence) -> [Real; 4] {
    let (x, y) = (ac.p1.x, ac.p1.y);
    let (xp, yp) = (ac.p2.x, ac.p2.y);
    let (a1, a2, a3, a4) = (ac.a[(0, 0)], ac.a[(0, 1)], ac.a[(1, 0)], ac.a[(1, 1)]);
    let (h1, h2, _h3) = (h[(0, 0)], h[(0, 1)], h[(0, 2)]);
    let (h4, h5, _h6) = (h[(1, 0)], h[(1, 1)], h[(1, 2)]);
    let (h7, h8, h9) = (h[(2, 0)], h[(2, 1)], h[(2, 2)]);
    [
        h1 - (xp + a1 * x) * h7 - a1 * y * h8 - a1 * h9,
        h2 - (xp + a2 * y) * h8 - a2 * x * h7 - a2 * h9,
        h4 - (yp + a3 * x) * h7 - a3 * y * h8 - a3 * h9,
        h5 - (yp + a4 * y) * h8 - a4 * x * h7 - a4 * h9,
    ]
}
