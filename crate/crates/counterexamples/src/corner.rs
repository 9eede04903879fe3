//! Harmonic functions `r^{kπ/θ} sin(kπ/θ · φ)` on the sector `0 < φ < θ`.

use crate::error::{CounterexampleError, Result};
use barron_oracle::fit_loglog;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CornerSpec {
    pub k: u32,
    pub theta: f64,
}

impl CornerSpec {
    pub fn new(k: u32, theta: f64) -> Result<Self> {
        if k == 0 || !(theta > 0.0 && theta < 2.0 * PI) {
            return Err(CounterexampleError::InvalidArgument(format!("need k >= 1 and 0 < theta < 2π, got k = {k}, theta = {theta}")));
        }
        Ok(Self { k, theta })
    }

    pub fn alpha(&self) -> f64 {
        self.k as f64 * PI / self.theta
    }

    fn check(&self, r: f64, phi: f64) -> Result<()> {
        if !(r >= 0.0) || !(-1e-12..=self.theta + 1e-12).contains(&phi) {
            return Err(CounterexampleError::OutsideDomain(format!("(r, φ) = ({r}, {phi}) outside the sector of angle {}", self.theta)));
        }
        Ok(())
    }
}

pub fn corner_eval(spec: &CornerSpec, r: f64, phi: f64) -> Result<f64> {
    spec.check(r, phi)?;
    let a = spec.alpha();
    Ok(r.powf(a) * (a * phi).sin())
}

/// Cartesian gradient; its length is `α r^{α−1}`.
pub fn corner_grad(spec: &CornerSpec, r: f64, phi: f64) -> Result<[f64; 2]> {
    spec.check(r, phi)?;
    if r == 0.0 {
        return Err(CounterexampleError::OutsideDomain("gradient at the vertex".into()));
    }
    let a = spec.alpha();
    let m = a * r.powf(a - 1.0);
    let (gr, gp) = (m * (a * phi).sin(), m * (a * phi).cos());
    Ok([gr * phi.cos() - gp * phi.sin(), gr * phi.sin() + gp * phi.cos()])
}

/// Evaluation at a Cartesian point, with `φ` taken in `[0, 2π)`.
pub fn corner_eval_xy(spec: &CornerSpec, x: f64, y: f64) -> Result<f64> {
    let phi = y.atan2(x).rem_euclid(2.0 * PI);
    corner_eval(spec, x.hypot(y), phi)
}

/// Largest five-point-Laplacian residual (step `h`) over polar sample points
/// with `r_min ≤ r ≤ 1` whose stencils stay inside the sector.
pub fn harmonic_residual(spec: &CornerSpec, h: f64, r_min: f64) -> Result<f64> {
    if !(h > 0.0) || !(r_min > 2.0 * h) || r_min >= 1.0 {
        return Err(CounterexampleError::InvalidArgument(format!("need 2h < r_min < 1, got h = {h}, r_min = {r_min}")));
    }
    let mut worst = 0.0f64;
    let (nr, np) = (40, 80);
    for i in 0..=nr {
        let r = r_min + (1.0 - r_min) * i as f64 / nr as f64;
        let margin = (2.0 * h / r).asin();
        for j in 0..=np {
            let phi = margin + (spec.theta - 2.0 * margin) * j as f64 / np as f64;
            let (x, y) = (r * phi.cos(), r * phi.sin());
            let u = |dx: f64, dy: f64| corner_eval_xy(spec, x + dx, y + dy);
            let lap = (u(h, 0.0)? + u(-h, 0.0)? + u(0.0, h)? + u(0.0, -h)? - 4.0 * u(0.0, 0.0)?) / (h * h);
            worst = worst.max(lap.abs());
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExponentFit {
    /// `(r, sup |∇u| on the circle)` from the closed-form gradient
    pub samples: Vec<(f64, f64)>,
    pub exponent: f64,
    /// the same fit with central-difference gradients
    pub fd_exponent: f64,
}

/// Fits `log sup_φ |∇u(r, φ)|` against `log r`.
pub fn gradient_exponent(spec: &CornerSpec, radii: &[f64]) -> Result<ExponentFit> {
    let n_phi = 64;
    let sup = |r: f64, fd: bool| -> Result<f64> {
        (1..n_phi)
            .map(|j| {
                let phi = spec.theta * j as f64 / n_phi as f64;
                if fd {
                    let (x, y) = (r * phi.cos(), r * phi.sin());
                    let e = 1e-4 * r;
                    let gx = (corner_eval_xy(spec, x + e, y)? - corner_eval_xy(spec, x - e, y)?) / (2.0 * e);
                    let gy = (corner_eval_xy(spec, x, y + e)? - corner_eval_xy(spec, x, y - e)?) / (2.0 * e);
                    Ok(gx.hypot(gy))
                } else {
                    let g = corner_grad(spec, r, phi)?;
                    Ok(g[0].hypot(g[1]))
                }
            })
            .try_fold(0.0f64, |m, v: Result<f64>| Ok(m.max(v?)))
    };
    let samples = radii.iter().map(|&r| Ok((r, sup(r, false)?))).collect::<Result<Vec<_>>>()?;
    let fd = radii.iter().map(|&r| Ok((r, sup(r, true)?))).collect::<Result<Vec<_>>>()?;
    let slope = |pts: &[(f64, f64)]| fit_loglog(pts).map(|f| f.0).ok_or_else(|| CounterexampleError::InvalidArgument("need two radii".into()));
    Ok(ExponentFit { exponent: slope(&samples)?, fd_exponent: slope(&fd)?, samples })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_values() {
        let s = CornerSpec::new(1, 1.5 * PI).unwrap();
        assert!((corner_eval(&s, 1.0, 0.75 * PI).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(corner_eval(&s, 0.7, 0.0).unwrap(), 0.0);
        assert!(corner_eval(&s, 1.0, 1.6 * PI).is_err());
        assert!(CornerSpec::new(1, 7.0).is_err());
        let g = corner_grad(&s, 0.25, 1.0).unwrap();
        assert!((g[0].hypot(g[1]) - (2.0 / 3.0) * 0.25f64.powf(-1.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn mean_value_property() {
        let s = CornerSpec::new(2, 1.2 * PI).unwrap();
        let (cx, cy, rad) = (0.3 * (0.6 * PI).cos(), 0.3 * (0.6 * PI).sin(), 0.05);
        let n = 256;
        let avg: f64 = (0..n).map(|j| {
            let a = 2.0 * PI * j as f64 / n as f64;
            corner_eval_xy(&s, cx + rad * a.cos(), cy + rad * a.sin()).unwrap()
        }).sum::<f64>() / n as f64;
        assert!((avg - corner_eval_xy(&s, cx, cy).unwrap()).abs() < 1e-12);
    }
}
