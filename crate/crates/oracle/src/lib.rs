//! Independent oracles for the barron-core constructions.
//!
//! Nothing here calls into the core quadrature or convolution code: finite
//! differences, adaptive Simpson and plain Monte Carlo only. The experiment
//! harnesses (rates, random-feature fitting) do consume core networks.

pub mod error;
pub mod fd;
pub mod fit;
pub mod grid;
pub mod mc;
pub mod quad;
pub mod rates;
pub mod residual;

pub use error::{OracleError, Result};
pub use fd::{fd_cole_hopf_1d, fd_heat_1d, fd_screened_1d, hj_semi_implicit_1d, thomas};
pub use fit::{fit_two_layer, rms_error, FitResult};
pub use grid::{Grid1D, Grid2D};
pub use mc::{heat_monte_carlo, sphere_average_mc, McEstimate};
pub use quad::{adaptive_simpson, richardson, screened_green_1d};
pub use rates::{fit_loglog, rate_experiment, ErrorNorm, Measure, RateEntry, RateReport};
pub use residual::{residual_check, GridSpec, Operator, ResidualReport};
