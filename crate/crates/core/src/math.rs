//! Small numeric helpers: real polynomial roots and Hartley-style point
//! conditioning shared by the linear estimators.

use nalgebra::{DMatrix, Matrix3, Vector2};

use crate::geometry::Real;

/// Real roots of a polynomial with coefficients ordered from the highest
/// degree down (`coeffs[0] * x^n + ... + coeffs[n]`).
///
/// Roots are found as eigenvalues of the companion matrix, kept when the
/// imaginary part is negligible, polished with a few Newton steps and
/// deduplicated. Intended for the low-degree (quartic and below),
/// well-scaled polynomials arising in the solvers.
pub fn real_polynomial_roots(coeffs: &[Real]) -> Vec<Real> {
    let max_mag = coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    if max_mag == 0.0 {
        return Vec::new();
    }
    // Trim negligible leading coefficients to avoid a near-singular
    // companion matrix.
    let mut first = 0;
    while first < coeffs.len() && coeffs[first].abs() < 1e-14 * max_mag {
        first += 1;
    }
    let c = &coeffs[first..];
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![-c[1] / c[0]];
    }

    let lead = c[0];
    let mut comp = DMatrix::<Real>::zeros(n, n);
    for i in 1..n {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        comp[(i, n - 1)] = -c[n - i] / lead;
    }
    // Monic companion with the coefficient column last; transpose-form
    // indexing above places -c_k/c_0 appropriately for eigenvalues.
    let eig = comp.complex_eigenvalues();

    let mut roots: Vec<Real> = Vec::with_capacity(n);
    for z in eig.iter() {
        // Accept roots whose imaginary part is small relative to scale.
        if z.im.abs() < 1e-8 * (1.0 + z.re.abs()) {
            roots.push(polish_root(c, z.re));
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-10 * (1.0 + a.abs()));
    roots
}

fn eval_poly(c: &[Real], x: Real) -> (Real, Real) {
    let mut v = 0.0;
    let mut dv = 0.0;
    for &ck in c {
        dv = dv * x + v;
        v = v * x + ck;
    }
    (v, dv)
}

fn polish_root(c: &[Real], mut x: Real) -> Real {
    for _ in 0..4 {
        let (v, dv) = eval_poly(c, x);
        if dv.abs() < 1e-300 {
            break;
        }
        let step = v / dv;
        if !step.is_finite() {
            break;
        }
        x -= step;
        if step.abs() < 1e-15 * (1.0 + x.abs()) {
            break;
        }
    }
    x
}

/// Similarity transform moving a point set to centroid zero and mean
/// distance sqrt(2), as used to condition the DLT and eight-point systems.
/// Returns `None` when the points are (near) coincident.
pub fn conditioning_transform(points: &[Vector2<Real>]) -> Option<Matrix3<Real>> {
    let n = points.len() as Real;
    if points.is_empty() {
        return None;
    }
    let centroid = points.iter().sum::<Vector2<Real>>() / n;
    let mean_dist = points.iter().map(|p| (p - centroid).norm()).sum::<Real>() / n;
    if mean_dist < 1e-12 {
        return None;
    }
    let s = std::f64::consts::SQRT_2 / mean_dist;
    Some(Matrix3::new(
        s,
        0.0,
        -s * centroid.x,
        0.0,
        s,
        -s * centroid.y,
        0.0,
        0.0,
        1.0,
    ))
}
