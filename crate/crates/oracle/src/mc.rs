//! Plain Monte Carlo estimators.

use crate::error::{OracleError, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

impl McEstimate {
    fn from_sums(sum: f64, sum_sq: f64, n: usize) -> Self {
        let nf = n as f64;
        let mean = sum / nf;
        let var = ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0);
        Self { mean, std_error: (var / nf).sqrt(), samples: n }
    }
}

/// `E u0(x + √(2t) Z)`, `Z ~ N(0, I)`: the heat semigroup `u_t = Δu` at `(t, x)`.
pub fn heat_monte_carlo(u0: impl Fn(&[f64]) -> f64, t: f64, x: &[f64], n: usize, seed: u64) -> Result<McEstimate> {
    if n < 2 || !(t >= 0.0) {
        return Err(OracleError::InvalidArgument(format!("need n >= 2 and t >= 0, got {n}, {t}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sd = (2.0 * t).sqrt();
    let mut y = vec![0.0; x.len()];
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..n {
        for (yi, xi) in y.iter_mut().zip(x) {
            let z: f64 = StandardNormal.sample(&mut rng);
            *yi = xi + sd * z;
        }
        let v = u0(&y);
        sum += v;
        sum_sq += v * v;
    }
    Ok(McEstimate::from_sums(sum, sum_sq, n))
}

/// Average of `g` over the unit sphere in `R^d` from normalised Gaussians.
pub fn sphere_average_mc(g: impl Fn(&[f64]) -> f64, d: usize, n: usize, seed: u64) -> Result<McEstimate> {
    if n < 2 || d < 2 {
        return Err(OracleError::InvalidArgument(format!("need n >= 2 and d >= 2, got {n}, {d}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut y = vec![0.0; d];
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..n {
        let norm = loop {
            y.iter_mut().for_each(|v| *v = StandardNormal.sample(&mut rng));
            let r = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            if r > 1e-12 {
                break r;
            }
        };
        y.iter_mut().for_each(|v| *v /= norm);
        let v = g(&y);
        sum += v;
        sum_sq += v * v;
    }
    Ok(McEstimate::from_sums(sum, sum_sq, n))
}
