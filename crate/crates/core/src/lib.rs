//! Explicit neural-network representations of PDE solutions.
//!
//! Data are two-layer networks ([`ShallowRep`]) or chains of vector-valued
//! layers ([`DeepRep`]), each carrying a path-norm certificate. Solvers map
//! network data to network solutions for the screened Poisson, Poisson,
//! heat and viscous Hamilton–Jacobi equations.

pub mod activation;
pub mod deep;
pub mod elliptic;
pub mod error;
pub mod hj;
pub mod io;
pub mod parabolic;
pub mod profile;
pub mod quadrature;
pub mod sampling;
pub mod scalar;
pub mod shallow;

pub use activation::{Activation, NormConvention, Smoothness};
pub use deep::{compose, product_rep, range_radius, Block, DeepRep, Neuron, Weights};
pub use elliptic::{
    screened_profile, solve_poisson_activation_pair, solve_screened_poisson, ActivationPairProblem, ModifiedNormReport, NormCertificate,
    ScreenedPoissonProblem, ScreenedSolution,
};
pub use error::{Error, Result};
pub use hj::{cole_hopf_solve, hj_norm_certificate, range_bound, ColeHopfConfig, ColeHopfSolution, HjCertificate, RangeInterval};
pub use io::{read_net, write_net, Net};
pub use parabolic::{
    heat_full, heat_homogeneous_at_time, heat_homogeneous_spacetime, heat_inhomogeneous_at_time, relu_heat_closed_form, HeatOptions, HeatProblem,
    HeatSolution, SpaceTimeRep,
};
pub use profile::{affine_atoms, affine_rep, constant_rep, profile_to_atoms, ridge_lift, ridge_lift_cert, Profile1D, ProfileRep};
pub use quadrature::GaussianRule;
pub use sampling::subsample;
pub use scalar::Scalar;
pub use shallow::{Atom, ShallowRep};

pub type AtomF64 = Atom<f64>;
pub type AtomF32 = Atom<f32>;
pub type ShallowRepF64 = ShallowRep<f64>;
pub type ShallowRepF32 = ShallowRep<f32>;
pub type DeepRepF64 = DeepRep<f64>;
pub type DeepRepF32 = DeepRep<f32>;
