//! Harmonic extension of network boundary data on the unit ball, and the
//! fitting experiment that compares it with a genuine Barron target.

use crate::axisym::{reduced_axisymmetric_solve, AxisProfile, AxisymSolution};
use crate::error::{CounterexampleError, Result};
use barron_core::quadrature::gauss_legendre;
use barron_core::{heat_homogeneous_at_time, Activation, Atom, GaussianRule, ShallowRep};
use barron_oracle::{fit_loglog, fit_two_layer, rms_error, ErrorNorm, RateEntry, RateReport};
use rayon::prelude::*;
use std::f64::consts::PI;

/// Node counts for the sphere rule. The polar axis is `e₁` and the rule is
/// split at `y₁ = 0`, where relu data in `y₁` have their kink.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SphereQuadrature {
    /// Gauss–Legendre nodes per half (in `cos θ` for d=3, in angle for d=2)
    pub n_half: usize,
    /// uniform nodes in the azimuth (d=3 only)
    pub n_phi: usize,
}

impl Default for SphereQuadrature {
    fn default() -> Self {
        Self { n_half: 192, n_phi: 384 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BallProblem {
    pub dim: usize,
    pub g: ShallowRep<f64>,
    pub quadrature: SphereQuadrature,
    pub margin: f64,
}

impl BallProblem {
    pub fn new(g: ShallowRep<f64>) -> Result<Self> {
        let dim = g.input_dim();
        if dim < 2 {
            return Err(CounterexampleError::InvalidArgument(format!("ball dimension must be at least 2, got {dim}")));
        }
        Ok(Self { dim, g, quadrature: SphereQuadrature::default(), margin: 0.05 })
    }

    /// `g(y) = σ(y₁)` on `∂B^d`.
    pub fn relu_first_coordinate(dim: usize) -> Result<Self> {
        let mut w = vec![0.0; dim];
        w[0] = 1.0;
        Self::new(ShallowRep::new(dim, Activation::Relu, vec![Atom::new(1.0, w, 0.0)])?)
    }

    /// Nodes and weights (summing to 1) of the normalised surface measure.
    fn sphere_rule(&self) -> Result<Vec<(Vec<f64>, f64)>> {
        let q = self.quadrature;
        match self.dim {
            2 => {
                let mut out = Vec::new();
                for (lo, hi) in [(-PI / 2.0, PI / 2.0), (PI / 2.0, 1.5 * PI)] {
                    let (x, w) = gauss_legendre(q.n_half, lo, hi);
                    out.extend(x.iter().zip(&w).map(|(&a, &wt)| (vec![a.cos(), a.sin()], wt / (2.0 * PI))));
                }
                Ok(out)
            }
            3 => {
                let mut out = Vec::with_capacity(2 * q.n_half * q.n_phi);
                for (lo, hi) in [(-1.0, 0.0), (0.0, 1.0)] {
                    let (c, w) = gauss_legendre(q.n_half, lo, hi);
                    for (&ct, &wt) in c.iter().zip(&w) {
                        let st = (1.0 - ct * ct).max(0.0).sqrt();
                        for k in 0..q.n_phi {
                            let ph = 2.0 * PI * k as f64 / q.n_phi as f64;
                            out.push((vec![ct, st * ph.cos(), st * ph.sin()], wt / (2.0 * q.n_phi as f64)));
                        }
                    }
                }
                Ok(out)
            }
            d => Err(CounterexampleError::InvalidArgument(format!("sphere quadrature implemented for d = 2, 3, got {d}"))),
        }
    }
}

/// Poisson integral `∫ (1−|x|²)/|x−y|^d g(y) dσ(y)` against the normalised
/// surface measure, for `|x| ≤ 1 − margin`.
pub fn harmonic_ball_extension(p: &BallProblem, x: &[f64]) -> Result<f64> {
    Ok(harmonic_ball_extension_many(p, &[x.to_vec()])?[0])
}

pub fn harmonic_ball_extension_many(p: &BallProblem, xs: &[Vec<f64>]) -> Result<Vec<f64>> {
    let rule = p.sphere_rule()?;
    let gy: Vec<f64> = rule.par_iter().map(|(y, _)| p.g.eval_unchecked(y)).collect();
    xs.iter()
        .map(|x| {
            if x.len() != p.dim {
                return Err(barron_core::Error::DimensionMismatch { expected: p.dim, got: x.len() }.into());
            }
            let r2: f64 = x.iter().map(|v| v * v).sum();
            if r2.sqrt() > 1.0 - p.margin {
                return Err(CounterexampleError::OutsideDomain(format!("|x| = {} exceeds 1 - {}", r2.sqrt(), p.margin)));
            }
            let s: f64 = rule
                .iter()
                .zip(&gy)
                .map(|((y, wt), g)| {
                    let dist2: f64 = y.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum();
                    wt * g / dist2.powf(p.dim as f64 / 2.0)
                })
                .sum();
            Ok((1.0 - r2) * s)
        })
        .collect()
}

/// Settings of the paired fitting experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct BallRateConfig {
    pub m_list: Vec<usize>,
    pub n_samples: usize,
    pub seeds: Vec<u64>,
    pub ridge: f64,
    /// smoothing time of the control target `e^{tΔ}σ(x₁)`
    pub control_t: f64,
    /// grid step of the reduced solver that supplies the ball target
    pub h: f64,
}

impl Default for BallRateConfig {
    fn default() -> Self {
        Self { m_list: vec![16, 32, 64, 128, 256, 512], n_samples: 10_000, seeds: (0..10).collect(), ridge: 1e-8, control_t: 0.05, h: 0.01 }
    }
}

/// `∂₁u` just left and right of `{x₁ = 0}` at height `ρ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientProbe {
    pub rho: f64,
    pub left: f64,
    pub right: f64,
}

impl GradientProbe {
    pub fn jump(&self) -> f64 {
        self.right - self.left
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BallRateReport {
    pub ball: RateReport,
    pub control: RateReport,
    pub probes: Vec<GradientProbe>,
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// The first `n` Halton points of `[-1,1]^d` that fall in the unit ball,
/// skipping `skip` accepted points.
pub fn halton_ball(dim: usize, n: usize, skip: usize) -> Vec<Vec<f64>> {
    const PRIMES: [u64; 10] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29];
    (1u64..)
        .map(|i| (0..dim).map(|k| 2.0 * radical_inverse(i, PRIMES[k % PRIMES.len()]) - 1.0).collect::<Vec<f64>>())
        .filter(|x| x.iter().map(|v| v * v).sum::<f64>() < 1.0)
        .skip(skip)
        .take(n)
        .collect()
}

fn arm(xs: &[Vec<f64>], ys: &[f64], test_x: &[Vec<f64>], test_y: &[f64], cfg: &BallRateConfig, norm_bound: f64) -> Result<RateReport> {
    let jobs: Vec<(usize, u64)> = cfg.m_list.iter().flat_map(|&m| cfg.seeds.iter().map(move |&s| (m, s))).collect();
    let errs: Vec<f64> = jobs
        .par_iter()
        .map(|&(m, s)| {
            let fit = fit_two_layer(xs, ys, m, cfg.ridge, s.wrapping_mul(1_000_003).wrapping_add(m as u64))?;
            Ok(rms_error(&fit.rep, test_x, test_y))
        })
        .collect::<Result<_>>()?;
    let entries: Vec<RateEntry> = cfg
        .m_list
        .iter()
        .zip(errs.chunks(cfg.seeds.len()))
        .map(|(&m, e)| {
            let mut s = e.to_vec();
            s.sort_by(f64::total_cmp);
            let med = if s.len() % 2 == 1 { s[s.len() / 2] } else { 0.5 * (s[s.len() / 2 - 1] + s[s.len() / 2]) };
            RateEntry { m, error: med, seed_errors: e.to_vec(), reference: norm_bound / (m as f64).sqrt() }
        })
        .collect();
    let fit = fit_loglog(&entries.iter().map(|e| (e.m as f64, e.error)).collect::<Vec<_>>());
    Ok(RateReport { entries, slope: fit.map(|f| f.0), intercept: fit.map(|f| f.1), seeds: cfg.seeds.clone(), norm_bound, norm: ErrorNorm::L2, radius: 1.0 })
}

fn probes(sol: &AxisymSolution<'_>, dim: usize) -> Result<Vec<GradientProbe>> {
    let (off, step) = (0.02, 0.005);
    [0.0, 0.5, 0.9, 0.99]
        .iter()
        .map(|&rho| {
            let at = |y1: f64| -> Result<f64> {
                let mut x = vec![0.0; dim];
                x[0] = y1;
                x[1] = rho;
                sol.eval(&x)
            };
            let d1 = |y1: f64| -> Result<f64> { Ok((at(y1 + step)? - at(y1 - step)?) / (2.0 * step)) };
            Ok(GradientProbe { rho, left: d1(-off)?, right: d1(off)? })
        })
        .collect()
}

/// Fits relu random-feature networks to the harmonic extension of `g` (the
/// ball arm) and to the Barron function `e^{tΔ}σ(x₁)` (the control arm) on
/// the same quasi-uniform samples of `B^d`, measuring L² error on a disjoint
/// sample set. The ball target comes from the reduced axisymmetric solver,
/// so `g` must depend on `y₁` only.
pub fn ball_rate_experiment(p: &BallProblem, cfg: &BallRateConfig) -> Result<BallRateReport> {
    if cfg.m_list.is_empty() || cfg.seeds.is_empty() || cfg.m_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CounterexampleError::InvalidArgument("need seeds and a strictly increasing m list".into()));
    }
    let d = p.dim;
    let sol = reduced_axisymmetric_solve(AxisProfile::from_rep(&p.g)?, d, cfg.h)?;
    let xs = halton_ball(d, cfg.n_samples, 0);
    let test_x = halton_ball(d, cfg.n_samples, cfg.n_samples);
    let ball_y = xs.iter().map(|x| sol.eval(x)).collect::<Result<Vec<_>>>()?;
    let ball_test = test_x.iter().map(|x| sol.eval(x)).collect::<Result<Vec<_>>>()?;

    let mut w = vec![0.0; d];
    w[0] = 1.0;
    let u0 = ShallowRep::new(d, Activation::Relu, vec![Atom::new(1.0, w, 0.0)])?;
    let (control, cert) = heat_homogeneous_at_time(&u0, cfg.control_t, &GaussianRule::relu_adapted(256))?;
    let control_y: Vec<f64> = xs.par_iter().map(|x| control.eval_unchecked(x)).collect();
    let control_test: Vec<f64> = test_x.par_iter().map(|x| control.eval_unchecked(x)).collect();

    Ok(BallRateReport {
        ball: arm(&xs, &ball_y, &test_x, &ball_test, cfg, p.g.norm_cert())?,
        control: arm(&xs, &control_y, &test_x, &control_test, cfg, cert.output_norm)?,
        probes: probes(&sol, d)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_and_linear_functions_are_reproduced() {
        let one = ShallowRep::new(3, Activation::Relu, vec![Atom::new(0.5, vec![1.0, 0.0, 0.0], 2.0), Atom::new(-0.5, vec![1.0, 0.0, 0.0], -2.0)]).unwrap();
        // σ(y+2) - σ(y-2) = y + 2 on [-1,1], so this is 0.5 y1 + 1
        let p = BallProblem::new(one).unwrap();
        for x in [[0.0, 0.0, 0.0], [0.3, -0.5, 0.2], [0.0, 0.0, 0.9]] {
            assert!((harmonic_ball_extension(&p, &x).unwrap() - (0.5 * x[0] + 1.0)).abs() < 1e-8);
        }
        assert!(harmonic_ball_extension(&p, &[0.97, 0.0, 0.0]).is_err());
    }

    #[test]
    fn relu_center_is_one_quarter() {
        let p = BallProblem::relu_first_coordinate(3).unwrap();
        assert!((harmonic_ball_extension(&p, &[0.0, 0.0, 0.0]).unwrap() - 0.25).abs() < 1e-12);
        let p2 = BallProblem::relu_first_coordinate(2).unwrap();
        assert!((harmonic_ball_extension(&p2, &[0.0, 0.0]).unwrap() - 1.0 / PI).abs() < 1e-12);
    }

    #[test]
    fn halton_points_are_in_ball_and_disjoint() {
        let a = halton_ball(3, 100, 0);
        let b = halton_ball(3, 100, 100);
        assert!(a.iter().chain(&b).all(|x| x.iter().map(|v| v * v).sum::<f64>() < 1.0));
        assert!(a.iter().all(|x| !b.contains(x)));
    }
}
