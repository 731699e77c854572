//! Coefficient matrices of the per-correspondence linear systems.
//!
//! Every affine correspondence contributes six rows: two from the point
//! equations and four from the affine equations. For the ground and
//! axis-aligned wall systems the unknown vector is
//! `[cos(alpha), sin(alpha), p, q]` with right-hand side
//! `[0, -y, 0, 0, 0, -1]` per block; the general vertical-wall system is
//! homogeneous in `[h1, h3, h5, h7, h9]`.

use nalgebra::{DMatrix, DVector};

use crate::geometry::{AffineCorrespondence, Real};

use super::SpecialPlaneAxis;

/// Stacked linear system with one six-row block per correspondence.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    pub a: DMatrix<Real>,
    /// Zero vector for the homogeneous (general vertical) system.
    pub b: DVector<Real>,
}

impl LinearSystem {
    pub fn block_count(&self) -> usize {
        self.a.nrows() / 6
    }
}

/// Ground-plane system (`n = [0, 1, 0]`), unknowns `[cos a, sin a, p, q]`.
pub fn build_ground_system(acs: &[AffineCorrespondence]) -> LinearSystem {
    let mut a = DMatrix::zeros(6 * acs.len(), 4);
    let mut b = DVector::zeros(6 * acs.len());
    for (i, ac) in acs.iter().enumerate() {
        let (x, y) = (ac.p1.x, ac.p1.y);
        let (xp, yp) = (ac.p2.x, ac.p2.y);
        let (a1, a2, a3, a4) = (ac.a[(0, 0)], ac.a[(0, 1)], ac.a[(1, 0)], ac.a[(1, 1)]);
        let r = 6 * i;
        a.set_row(r, &nalgebra::RowVector4::new(x - xp, -xp * x - 1.0, y, -xp * y).into());
        a.set_row(r + 1, &nalgebra::RowVector4::new(-yp, -yp * x, 0.0, -yp * y).into());
        a.set_row(r + 2, &nalgebra::RowVector4::new(1.0 - a1, -xp - a1 * x, 0.0, -a1 * y).into());
        a.set_row(r + 3, &nalgebra::RowVector4::new(-a2, -a2 * x, 1.0, -xp - a2 * y).into());
        a.set_row(r + 4, &nalgebra::RowVector4::new(-a3, -yp - a3 * x, 0.0, -a3 * y).into());
        a.set_row(r + 5, &nalgebra::RowVector4::new(-a4, -a4 * x, 0.0, -yp - a4 * y).into());
        b[r + 1] = -y;
        b[r + 5] = -1.0;
    }
    LinearSystem { a, b }
}

/// Axis-aligned vertical-wall system, unknowns `[cos a, sin a, p, q]`.
/// The right-hand side matches the ground system.
pub fn build_vertical_special_system(
    acs: &[AffineCorrespondence],
    axis: SpecialPlaneAxis,
) -> LinearSystem {
    let mut a = DMatrix::zeros(6 * acs.len(), 4);
    let mut b = DVector::zeros(6 * acs.len());
    for (i, ac) in acs.iter().enumerate() {
        let (x, y) = (ac.p1.x, ac.p1.y);
        let (xp, yp) = (ac.p2.x, ac.p2.y);
        let (a1, a2, a3, a4) = (ac.a[(0, 0)], ac.a[(0, 1)], ac.a[(1, 0)], ac.a[(1, 1)]);
        let r = 6 * i;
        match axis {
            SpecialPlaneAxis::Side => {
                a.set_row(r, &nalgebra::RowVector4::new(x - xp, -1.0 - xp * x, -x, xp * x).into());
                a.set_row(r + 1, &nalgebra::RowVector4::new(-yp, -yp * x, 0.0, yp * x).into());
                a.set_row(
                    r + 2,
                    &nalgebra::RowVector4::new(1.0 - a1, -a1 * x - xp, -1.0, a1 * x + xp).into(),
                );
                a.set_row(r + 3, &nalgebra::RowVector4::new(-a2, -a2 * x, 0.0, a2 * x).into());
                a.set_row(
                    r + 4,
                    &nalgebra::RowVector4::new(-a3, -a3 * x - yp, 0.0, a3 * x + yp).into(),
                );
                a.set_row(r + 5, &nalgebra::RowVector4::new(-a4, -a4 * x, 0.0, a4 * x).into());
            }
            SpecialPlaneAxis::Frontal => {
                a.set_row(r, &nalgebra::RowVector4::new(x - xp, -1.0 - xp * x, -1.0, xp).into());
                a.set_row(r + 1, &nalgebra::RowVector4::new(-yp, -yp * x, 0.0, yp).into());
                a.set_row(
                    r + 2,
                    &nalgebra::RowVector4::new(1.0 - a1, -a1 * x - xp, 0.0, a1).into(),
                );
                a.set_row(r + 3, &nalgebra::RowVector4::new(-a2, -a2 * x, 0.0, a2).into());
                a.set_row(
                    r + 4,
                    &nalgebra::RowVector4::new(-a3, -a3 * x - yp, 0.0, a3).into(),
                );
                a.set_row(r + 5, &nalgebra::RowVector4::new(-a4, -a4 * x, 0.0, a4).into());
            }
        }
        b[r + 1] = -y;
        b[r + 5] = -1.0;
    }
    LinearSystem { a, b }
}

/// Homogeneous general vertical-wall system in `[h1, h3, h5, h7, h9]`:
/// four affine rows followed by the two point rows per correspondence.
pub fn build_general_vertical_system(acs: &[AffineCorrespondence]) -> LinearSystem {
    let mut a = DMatrix::zeros(6 * acs.len(), 5);
    let b = DVector::zeros(6 * acs.len());
    for (i, ac) in acs.iter().enumerate() {
        let (x, y) = (ac.p1.x, ac.p1.y);
        let (xp, yp) = (ac.p2.x, ac.p2.y);
        let (a1, a2, a3, a4) = (ac.a[(0, 0)], ac.a[(0, 1)], ac.a[(1, 0)], ac.a[(1, 1)]);
        let r = 6 * i;
        a.set_row(
            r,
            &nalgebra::RowVector5::new(1.0, 0.0, 0.0, -(xp + a1 * x), -a1).into(),
        );
        a.set_row(r + 1, &nalgebra::RowVector5::new(0.0, 0.0, 0.0, -a2 * x, -a2).into());
        a.set_row(
            r + 2,
            &nalgebra::RowVector5::new(0.0, 0.0, 0.0, -(yp + a3 * x), -a3).into(),
        );
        a.set_row(r + 3, &nalgebra::RowVector5::new(0.0, 0.0, 1.0, -a4 * x, -a4).into());
        a.set_row(r + 4, &nalgebra::RowVector5::new(x, 1.0, 0.0, -x * xp, -xp).into());
        a.set_row(r + 5, &nalgebra::RowVector5::new(0.0, 0.0, y, -x * yp, -yp).into());
    }
    LinearSystem { a, b }
}
