//! Minimal solvers recovering planar egomotion from affine correspondences
//! on known-class planes.
//!
//! Each solver consumes one AC (minimal case) or several (over-determined,
//! least squares). The ground and axis-aligned wall solvers share one
//! inhomogeneous engine with a rapid (total least squares) and an optimal
//! (unit-circle constrained) variant; the general vertical-wall solver works
//! on the homogeneous five-parameter system and returns up to four
//! candidates for cheirality selection.

mod conic;
mod general;
pub mod oracle;
mod planar;
mod systems;

pub use conic::{intersect_unit_circle_ellipse, CircleEllipseIntersections};
pub use general::solve_vertical_general;
pub use planar::{solve_ground, solve_vertical_special, SolveMethod};
pub use systems::{
    build_general_vertical_system, build_ground_system, build_vertical_special_system,
    LinearSystem,
};

use thiserror::Error;

use crate::geometry::{PlanarPose, PlaneHypothesis, Real, ScaledTranslationParams};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    /// The system does not determine a unique solution (ambiguous null
    /// space, vanishing homogeneous coordinate, or insufficient data).
    #[error("degenerate system: {0}")]
    Degenerate(&'static str),
    /// The ellipse does not intersect the unit circle beyond the noise
    /// clamping tolerance.
    #[error("no real circle-ellipse intersection (a^2 = {0})")]
    NoRealIntersection(Real),
    /// The ellipse coincides with a circle, giving infinitely many
    /// intersections.
    #[error("degenerate circle-ellipse configuration (s1 ~ s2)")]
    DegenerateCircle,
    #[error("no correspondences supplied")]
    EmptyInput,
}

/// Which axis-aligned vertical plane a special solver assumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialPlaneAxis {
    /// Wall with normal `[1, 0, 0]`.
    Side,
    /// Wall with normal `[0, 0, 1]`.
    Frontal,
}

/// One recovered motion hypothesis awaiting validation.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverCandidate {
    pub pose: PlanarPose,
    pub plane: PlaneHypothesis,
    pub params: ScaledTranslationParams,
    /// Algebraic residual of the defining linear system at this solution.
    pub residual: Real,
    /// Entrywise mismatch when recomposing the scaled homography from the
    /// extracted parameters (general vertical solver only; zero otherwise).
    pub recomposition_residual: Real,
    /// False when the translation vanishes and the wall orientation is
    /// unobservable; `plane.delta` is then meaningless.
    pub normal_determined: bool,
}

/// Solver output: candidate solutions plus conditioning diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverReport {
    pub candidates: Vec<SolverCandidate>,
    /// Smallest singular value of the system matrix.
    pub conditioning: Real,
    /// Set when the system was solvable only in a reduced sense.
    pub degenerate: bool,
}

/// Ground-plane solver, rapid variant (see [`solve_ground`]).
pub fn solve_ground_rapid(
    acs: &[crate::geometry::AffineCorrespondence],
) -> Result<SolverReport, SolverError> {
    solve_ground(acs, SolveMethod::Rapid)
}

/// Ground-plane solver, optimal variant (see [`solve_ground`]).
pub fn solve_ground_optimal(
    acs: &[crate::geometry::AffineCorrespondence],
) -> Result<SolverReport, SolverError> {
    solve_ground(acs, SolveMethod::Optimal)
}
