//! Random-feature least squares for two-layer ReLU networks.

use crate::error::{OracleError, Result};
use barron_core::{Activation, Atom, ShallowRep};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub rep: ShallowRep<f64>,
    /// root-mean-square residual on the training samples
    pub l2_error: f64,
}

pub fn rms_error(rep: &ShallowRep<f64>, xs: &[Vec<f64>], ys: &[f64]) -> f64 {
    let s: f64 = xs.par_iter().zip(ys).map(|(x, y)| (rep.eval_unchecked(x) - y).powi(2)).collect::<Vec<_>>().iter().sum();
    (s / xs.len() as f64).sqrt()
}

/// Fits `Σ a_j σ(w_jᵀx + b_j)` with unit `w_j` uniform on the sphere and `b_j`
/// uniform on `[-r, r]`, `r = max |x_i|`. Outer weights minimise
/// `mean (f(x_i) - y_i)² + ridge |a|²`.
pub fn fit_two_layer(xs: &[Vec<f64>], ys: &[f64], m: usize, ridge: f64, seed: u64) -> Result<FitResult> {
    if m == 0 || xs.is_empty() || xs.len() != ys.len() || !(ridge > 0.0) {
        return Err(OracleError::InvalidArgument(format!("need m >= 1, matching samples and ridge > 0 (m = {m}, ridge = {ridge})")));
    }
    let d = xs[0].len();
    if d == 0 || xs.iter().any(|x| x.len() != d) {
        return Err(OracleError::Core(barron_core::Error::DimensionMismatch { expected: d, got: xs.iter().map(Vec::len).find(|&l| l != d).unwrap_or(0) }));
    }
    let r = xs.iter().map(|x| x.iter().map(|v| v * v).sum::<f64>().sqrt()).fold(0.0, f64::max).max(1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let features: Vec<(Vec<f64>, f64)> = (0..m)
        .map(|_| {
            let w: Vec<f64> = loop {
                let g: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
                let n = g.iter().map(|v| v * v).sum::<f64>().sqrt();
                if n > 1e-12 {
                    break g.iter().map(|v| v / n).collect();
                }
            };
            (w, rng.random_range(-r..=r))
        })
        .collect();
    let n = xs.len();
    let rows: Vec<f64> = xs.par_iter().flat_map_iter(|x| features.iter().map(move |(w, b)| (w.iter().zip(x).map(|(a, c)| a * c).sum::<f64>() + b).max(0.0))).collect();
    let phi = DMatrix::from_row_slice(n, m, &rows);
    let y = DVector::from_column_slice(ys);
    let mut gram = phi.tr_mul(&phi) / n as f64;
    for j in 0..m {
        gram[(j, j)] += ridge;
    }
    let rhs = phi.tr_mul(&y) / n as f64;
    let chol = gram.cholesky().ok_or(OracleError::Singular(0))?;
    let a = chol.solve(&rhs);
    let atoms = features.into_iter().zip(a.iter()).map(|((w, b), &aj)| Atom::new(aj, w, b)).collect();
    let rep = ShallowRep::new(d, Activation::Relu, atoms)?;
    let l2_error = rms_error(&rep, xs, ys);
    Ok(FitResult { rep, l2_error })
}
