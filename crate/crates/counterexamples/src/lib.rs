//! Functions outside (or at the edge of) Barron space, with the numerics
//! that make their behaviour visible.

pub mod axisym;
pub mod ball;
pub mod corner;
pub mod error;
pub mod growth;
pub mod ushape;

pub use axisym::{reduced_axisymmetric_solve, AxisProfile, AxisymSolution};
pub use ball::{ball_rate_experiment, harmonic_ball_extension, BallProblem, BallRateConfig, BallRateReport, GradientProbe, SphereQuadrature};
pub use corner::{corner_eval, corner_eval_xy, corner_grad, gradient_exponent, harmonic_residual, CornerSpec, ExponentFit};
pub use error::{CounterexampleError, Result};
pub use growth::{growth_diagnostic, poisson_cubic_growth, poisson_residual};
pub use ushape::{in_u1, in_u2, in_ushape, u1_rep, u2_rep, ushape_eval};
