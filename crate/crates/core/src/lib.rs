//! Berwald-Moor quartic Finsler geometry of the four-dimensional up-sector.
//!
//! Closed-form metric objects, chart and tetrads, geodesics, frame kinematics
//! and the invariance transforms, together with the numerical oracles used to
//! check them.

pub mod error;
pub mod frames;
pub mod geodesic;
pub mod invariance;
pub mod kinematics;
pub mod linalg;
pub mod metric;
pub mod numerics;
pub mod verify;

pub use error::{Error, Result};
pub use frames::{
    conformal_tensor, from_chart, induced_indicatrix_metric, projection_factors, tetrad, to_chart, ChartPoint,
    ConstantsChoice, ConstantsMatrix, Region, Tetrad,
};
pub use geodesic::{
    angle, angle_2d, distance, geodesic_rhs, integrate_geodesic, point_along, scalar_product, solve_bvp, solve_ivp,
    GeodesicCurve, GeodesicIvp, GeodesicSolution,
};
pub use invariance::{
    apply_power_transform, metric_invariance_residual, metricity_residual, one_angle_exponents,
    one_angle_exponents_indicatrix, rotation_exponents, rotation_exponents_in, unimodular_dilatation,
    MetricityResidual, PowerTransform, RotationAngles,
};
pub use kinematics::{
    boost, compose, dilatation_factor, dilatation_factor_approx, kinematic_length, kinematic_matrix,
    kinematic_matrix_in, matrix_from_velocity, reciprocal, reciprocal_polynomial, relative_velocity, subtract,
    BracketFactors, KinematicMatrix, Velocity3,
};
pub use metric::{covariant_vector, metric_function, metric_tensor, unit_vector, MetricAtPoint, UpVector};
pub use numerics::{fd_gradient, fd_hessian, rk4_integrate, FdConfig, Trajectory};
