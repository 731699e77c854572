//! Egomotion estimation for a camera undergoing planar motion, from single
//! affine correspondences on known-class scene planes.
//!
//! The crate provides:
//!
//! - minimal solvers recovering yaw and translation direction from one
//!   affine correspondence on the ground plane, on axis-aligned vertical
//!   walls, or on a vertical wall of unknown orientation;
//! - classic baselines (normalized DLT, two-AC homography fitting, the
//!   normalized eight-point algorithm) and homography decomposition;
//! - pose scoring utilities (essential composition, Sampson distance,
//!   triangulation, cheirality selection, angular error metrics);
//! - a locally optimized RANSAC loop scoring hypotheses through the
//!   composed essential matrix;
//! - a synthetic benchmark harness with a deterministic noise model and
//!   sweep runner, driven by the `acpose` CLI.

pub mod baseline;
pub mod bench;
pub mod geometry;
pub mod io;
pub mod math;
pub mod ransac;
pub mod solvers;
pub mod validation;

pub use geometry::{
    affine_from_homography, compose_homography, map_point, normalize_affinity, normalize_point,
    planar_rotation, pose_and_plane_from_params, AffineCorrespondence, CameraIntrinsics,
    Homography, HomographyStructure, NormalizedPoint, PlanarPose, PlaneClass, PlaneHypothesis,
    Real, ScaledTranslationParams,
};
pub use solvers::{
    solve_ground_optimal, solve_ground_rapid, solve_vertical_general, solve_vertical_special,
    SolverCandidate, SolverReport,
};
