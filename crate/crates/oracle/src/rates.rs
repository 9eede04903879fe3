//! Subsampling-rate sweeps.

use crate::error::{OracleError, Result};
use barron_core::{subsample, ShallowRep};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorNorm {
    L2,
    Linf,
}

/// Uniform measure on `[-radius, radius]^dim`, represented by `n_samples`
/// seeded points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measure {
    pub radius: f64,
    pub n_samples: usize,
    pub seed: u64,
}

impl Measure {
    pub fn points(&self, dim: usize) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..self.n_samples).map(|_| (0..dim).map(|_| rng.random_range(-self.radius..=self.radius)).collect()).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateEntry {
    pub m: usize,
    /// median over seeds
    pub error: f64,
    pub seed_errors: Vec<f64>,
    /// `max(1,R)‖f‖/√m` for L², `d max(1,R)‖f‖/√m` for L∞
    pub reference: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub entries: Vec<RateEntry>,
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    pub seeds: Vec<u64>,
    pub norm_bound: f64,
    pub norm: ErrorNorm,
    pub radius: f64,
}

impl RateReport {
    pub fn within_reference(&self) -> bool {
        self.entries.iter().all(|e| e.error <= e.reference)
    }
}

/// Least-squares line through `(log x, log y)`; pairs with `y <= 0` are skipped.
pub fn fit_loglog(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    let pts: Vec<(f64, f64)> = points.iter().filter(|p| p.0 > 0.0 && p.1 > 0.0).map(|p| (p.0.ln(), p.1.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

pub(crate) fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

fn mix(seed: u64, m: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (m as u64).wrapping_mul(0xD1B5_4A32_D192_ED03)
}

/// Median-over-seeds distance between `rep` and its `m`-atom subsamples.
pub fn rate_experiment(rep: &ShallowRep<f64>, m_list: &[usize], measure: &Measure, seeds: &[u64], norm: ErrorNorm) -> Result<RateReport> {
    if rep.is_empty() {
        return Err(OracleError::Core(barron_core::Error::Empty));
    }
    if seeds.is_empty() || m_list.is_empty() || m_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(OracleError::InvalidArgument("need seeds and a strictly increasing m list".into()));
    }
    let pts = measure.points(rep.input_dim());
    let target: Vec<f64> = pts.par_iter().map(|x| rep.eval_unchecked(x)).collect();
    let jobs: Vec<(usize, u64)> = m_list.iter().flat_map(|&m| seeds.iter().map(move |&s| (m, s))).collect();
    let errs: Vec<f64> = jobs
        .par_iter()
        .map(|&(m, s)| {
            let sub = subsample(rep, m, mix(s, m))?;
            let diffs = pts.iter().zip(&target).map(|(x, t)| sub.eval_unchecked(x) - t);
            Ok(match norm {
                ErrorNorm::L2 => (diffs.map(|d| d * d).sum::<f64>() / pts.len() as f64).sqrt(),
                ErrorNorm::Linf => diffs.fold(0.0, |m: f64, d| m.max(d.abs())),
            })
        })
        .collect::<Result<_>>()?;
    let cert = rep.norm_cert();
    let factor = measure.radius.max(1.0) * if norm == ErrorNorm::Linf { rep.input_dim() as f64 } else { 1.0 };
    let entries: Vec<RateEntry> = m_list
        .iter()
        .zip(errs.chunks(seeds.len()))
        .map(|(&m, e)| RateEntry { m, error: median(e), seed_errors: e.to_vec(), reference: factor * cert / (m as f64).sqrt() })
        .collect();
    let fit = fit_loglog(&entries.iter().map(|e| (e.m as f64, e.error)).collect::<Vec<_>>());
    Ok(RateReport {
        entries,
        slope: fit.map(|f| f.0),
        intercept: fit.map(|f| f.1),
        seeds: seeds.to_vec(),
        norm_bound: cert,
        norm,
        radius: measure.radius,
    })
}
