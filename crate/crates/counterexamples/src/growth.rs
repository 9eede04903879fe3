//! `u = −max{0, x₁}³/6` solves `−Δu = σ(x₁)` but grows cubically.

use crate::error::{CounterexampleError, Result};
use barron_oracle::fit_loglog;

pub fn poisson_cubic_growth(x: &[f64]) -> f64 {
    let p = x.first().copied().unwrap_or(0.0).max(0.0);
    -p * p * p / 6.0
}

/// Max of `|−Δ_h u − σ(x₁)|` at the given points, five-point (2d+1) stencil.
pub fn poisson_residual(points: &[Vec<f64>], h: f64) -> f64 {
    points
        .iter()
        .map(|x| {
            let mut y = x.clone();
            let u0 = poisson_cubic_growth(x);
            let lap: f64 = (0..x.len())
                .map(|i| {
                    y[i] = x[i] + h;
                    let p = poisson_cubic_growth(&y);
                    y[i] = x[i] - h;
                    let m = poisson_cubic_growth(&y);
                    y[i] = x[i];
                    (p - 2.0 * u0 + m) / (h * h)
                })
                .sum();
            (-lap - x[0].max(0.0)).abs()
        })
        .fold(0.0, f64::max)
}

/// Slope of `log sup_{|x|=R} |u|` against `log R`; the sup is taken over
/// 256 directions in the `(x₁, x₂)` plane of `R^d`.
pub fn growth_diagnostic(radii: &[f64], dim: usize) -> Result<(f64, Vec<(f64, f64)>)> {
    if dim < 2 || radii.len() < 2 || radii.iter().any(|&r| !(r > 0.0)) {
        return Err(CounterexampleError::InvalidArgument("need d >= 2 and at least two positive radii".into()));
    }
    let n = 256;
    let sups: Vec<(f64, f64)> = radii
        .iter()
        .map(|&r| {
            let s = (0..n)
                .map(|j| {
                    let a = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
                    let mut x = vec![0.0; dim];
                    x[0] = r * a.cos();
                    x[1] = r * a.sin();
                    poisson_cubic_growth(&x).abs()
                })
                .fold(0.0, f64::max);
            (r, s)
        })
        .collect();
    let slope = fit_loglog(&sups).map(|f| f.0).ok_or_else(|| CounterexampleError::InvalidArgument("degenerate growth samples".into()))?;
    Ok((slope, sups))
}
