//! Viscous Hamilton–Jacobi `u_t − Δu + |∇u|² = 0` via Cole–Hopf:
//! `u = −log F`, `F(t, x) = E exp(−u0(x + √t Z))`, `Z ~ N(0, 2I)`.
//!
//! The network has three blocks over `(x, τ = √t)`:
//! 1. `v_n = u0(x + τ z_n)` for Gaussian samples `z_n`, `n = 1..N`;
//! 2. `F = N⁻¹ Σ_n E(v_n)`, `E` the profile network of `s ↦ e^{−s}`;
//! 3. `u = L(F)`, `L` the profile network of `s ↦ −log s`.

use crate::activation::Activation;
use crate::deep::{Block, DeepRep, Neuron};
use crate::error::{Error, Result};
use crate::profile::{profile_to_atoms, Profile1D, ProfileRep};
use crate::scalar::{norm2, Scalar};
use crate::shallow::ShallowRep;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeInterval {
    pub beta_minus: f64,
    pub beta_plus: f64,
}

impl RangeInterval {
    pub fn new(beta_minus: f64, beta_plus: f64) -> Result<Self> {
        if !(beta_minus.is_finite() && beta_plus.is_finite()) {
            return Err(Error::UnboundedRange);
        }
        if beta_minus > beta_plus {
            return Err(Error::InvalidArgument(format!("empty range [{beta_minus}, {beta_plus}]")));
        }
        Ok(Self { beta_minus, beta_plus })
    }

    /// `e^{−β₊}`, the lower end of the range of `e^{−u0}`.
    pub fn gamma_minus(&self) -> f64 {
        (-self.beta_plus).exp()
    }

    pub fn gamma_plus(&self) -> f64 {
        (-self.beta_minus).exp()
    }

    pub fn contains(&self, v: f64) -> bool {
        v >= self.beta_minus && v <= self.beta_plus
    }

    pub fn oscillation(&self) -> f64 {
        self.beta_plus - self.beta_minus
    }
}

/// Encloses the range of `u0` on the ball of radius `R`.
///
/// Atoms are grouped by direction `±w/|w|`. Each ReLU group is a piecewise
/// linear function of `s = ŵᵀx ∈ [−R, R]` whose range is found exactly at
/// its breakpoints; the group ranges are then added. Other activations use
/// per-atom interval arithmetic `aσ([b − |w|R, b + |w|R])` (σ monotone).
/// Exact for constants and for one-dimensional ReLU networks.
pub fn range_bound<T: Scalar>(u0: &ShallowRep<T>, radius: f64) -> Result<RangeInterval> {
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
    }
    let act = u0.activation();
    let (mut lo, mut hi) = (0.0, 0.0);
    if act != Activation::Relu {
        for at in u0.atoms() {
            let (a, b, r) = (at.a.f64(), at.b.f64(), at.w_norm().f64() * radius);
            let (p, q) = (a * act.eval(b - r), a * act.eval(b + r));
            lo += p.min(q);
            hi += p.max(q);
        }
        return RangeInterval::new(lo, hi);
    }
    // (direction, [(a, slope along direction, b)])
    let mut groups: Vec<(Vec<f64>, Vec<(f64, f64, f64)>)> = Vec::new();
    for at in u0.atoms() {
        let wn = at.w_norm().f64();
        let mut u: Vec<f64> = at.w.iter().map(|v| v.f64() / wn).collect();
        let lead = u.iter().copied().find(|v| v.abs() > 1e-12).unwrap_or(1.0);
        let sign = lead.signum();
        u.iter_mut().for_each(|v| *v *= sign);
        let entry = (at.a.f64(), sign * wn, at.b.f64());
        match groups.iter_mut().find(|(g, _)| g.iter().zip(&u).all(|(p, q)| (p - q).abs() <= 1e-12)) {
            Some((_, members)) => members.push(entry),
            None => groups.push((u, vec![entry])),
        }
    }
    for (_, members) in &groups {
        let eval = |s: f64| members.iter().fold(0.0, |acc, &(a, k, b)| acc + a * (k * s + b).max(0.0));
        let mut pts = vec![-radius, radius];
        pts.extend(members.iter().map(|&(_, k, b)| -b / k).filter(|s| s.abs() < radius));
        let (g_lo, g_hi) = pts.iter().map(|&s| eval(s)).fold((f64::INFINITY, f64::NEG_INFINITY), |(p, q), v| (p.min(v), q.max(v)));
        lo += g_lo;
        hi += g_hi;
    }
    RangeInterval::new(lo, hi)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColeHopfConfig {
    /// Number `N` of Gaussian samples.
    pub n_mc: usize,
    pub seed: u64,
    pub exp_atoms: usize,
    pub log_atoms: usize,
    /// Evaluation radius in `x`.
    pub radius: f64,
    /// Largest time at which the network will be evaluated.
    pub t_max: f64,
    /// Known range of `u0`; replaces the automatic bound.
    pub range: Option<RangeInterval>,
}

impl Default for ColeHopfConfig {
    fn default() -> Self {
        Self { n_mc: 4096, seed: 0, exp_atoms: 256, log_atoms: 256, radius: 3.0, t_max: 1.0, range: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HjCertificate {
    pub u0_norm: f64,
    pub range: RangeInterval,
    /// Certificates of the three blocks and their product.
    pub block_certs: [f64; 3],
    pub deep_cert: f64,
    /// Curvature parts `Σ|slope jumps|` of the two profiles.
    pub exp_curvature: f64,
    pub log_curvature: f64,
    /// `‖u0‖·curv(E)·curv(L)`.
    pub w3_cert: f64,
    /// `exp(β₊ − β₋)·‖u0‖`.
    pub paper_bound: f64,
    pub ratio: f64,
    /// `e^{−β₋} − e^{−β₊}`: the exp bound for `e^{s}` on the range of `−u0`.
    pub exp_reference: f64,
    /// `1/γ₋ − 1/γ₊` on the log interval actually used.
    pub log_reference: f64,
}

#[derive(Debug, Clone)]
pub struct ColeHopfSolution {
    pub net: DeepRep<f64>,
    pub range: RangeInterval,
    pub log_interval: (f64, f64),
    pub delta: f64,
    pub exp_profile: ProfileRep<f64>,
    pub log_profile: ProfileRep<f64>,
    pub samples: Vec<Vec<f64>>,
    pub certificate: HjCertificate,
}

impl ColeHopfSolution {
    pub fn eval(&self, t: f64, x: &[f64]) -> Result<f64> {
        if t < 0.0 {
            return Err(Error::InvalidArgument("time must be nonnegative".into()));
        }
        let mut z = x.to_vec();
        z.push(t.sqrt());
        self.net.eval_scalar(&z)
    }
}

fn gaussian_samples(n: usize, d: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sd = std::f64::consts::SQRT_2;
    (0..n).map(|_| (0..d).map(|_| sd * rng.sample::<f64, _>(StandardNormal)).collect()).collect()
}

/// Builds the three-block Cole–Hopf network.
pub fn cole_hopf_solve(u0: &ShallowRep<f64>, cfg: &ColeHopfConfig) -> Result<ColeHopfSolution> {
    if cfg.n_mc < 1 {
        return Err(Error::InvalidArgument("n_mc must be at least 1".into()));
    }
    if cfg.exp_atoms < 2 || cfg.log_atoms < 2 {
        return Err(Error::InvalidArgument("profile widths must be at least 2".into()));
    }
    if !(cfg.t_max >= 0.0 && cfg.radius > 0.0) {
        return Err(Error::InvalidArgument("need t_max ≥ 0 and radius > 0".into()));
    }
    let d = u0.input_dim();
    let samples = gaussian_samples(cfg.n_mc, d, cfg.seed);
    let reach = samples.iter().map(|z| norm2(z)).fold(0.0, f64::max);
    let r_eff = cfg.radius + cfg.t_max.sqrt() * reach;
    let range = match cfg.range {
        Some(r) => r,
        None => range_bound(u0, r_eff)?,
    };
    let (b_lo, b_hi) = if range.oscillation() > 1e-9 * (1.0 + range.beta_minus.abs()) {
        (range.beta_minus, range.beta_plus)
    } else {
        (range.beta_minus - 1e-6, range.beta_plus + 1e-6)
    };

    // block 1: v_n(x, τ) = u0(x + τ z_n)
    let act = u0.activation();
    let outputs1: Vec<Vec<Neuron<f64>>> = samples
        .iter()
        .map(|z| {
            u0.atoms()
                .iter()
                .map(|at| {
                    let mut w = at.w.clone();
                    w.push(crate::scalar::dot(&at.w, z));
                    Neuron::dense(at.a, w, at.b)
                })
                .collect()
        })
        .collect();
    let block1 = Block::new(d + 1, act, outputs1)?;

    // block 2: mean of e^{−v_n}
    let exp_p = Profile1D::new(b_lo, b_hi, |s: f64| (-s).exp(), |s: f64| (-s).exp())?;
    let exp_profile = profile_to_atoms(&exp_p, Activation::Relu, cfg.exp_atoms)?;
    let inv_n = 1.0 / cfg.n_mc as f64;
    let mut neurons2 = Vec::with_capacity(cfg.n_mc * exp_profile.rep.len());
    for n in 0..cfg.n_mc {
        for at in exp_profile.rep.atoms() {
            neurons2.push(Neuron::sparse(at.a * inv_n, vec![(n, at.w[0])], at.b));
        }
    }
    let block2 = Block::new(cfg.n_mc, Activation::Relu, vec![neurons2])?;

    // guard for the log interval from the Monte-Carlo standard error
    let (g_lo, g_hi) = ((-b_hi).exp(), (-b_lo).exp());
    let std_err = mc_standard_error(u0, &samples, cfg);
    let delta = (6.0 * std_err / g_lo).clamp(1e-3, 0.5);
    let log_interval = (g_lo * (1.0 - delta), g_hi * (1.0 + delta));

    let (f_lo, f_hi) = profile_range(&exp_profile.rep, b_lo, b_hi);
    if f_lo < log_interval.0 || f_hi > log_interval.1 {
        let v = if f_lo < log_interval.0 { f_lo } else { f_hi };
        return Err(Error::OutsideLogInterval { value: v, lo: log_interval.0, hi: log_interval.1 });
    }

    // block 3: −log F
    let log_p = Profile1D::new(log_interval.0, log_interval.1, |s: f64| -s.ln(), |s: f64| 1.0 / (s * s))?;
    let log_profile = profile_to_atoms(&log_p, Activation::Relu, cfg.log_atoms)?;
    let neurons3 = log_profile.rep.atoms().iter().map(|at| Neuron::dense(at.a, vec![at.w[0]], at.b)).collect();
    let block3 = Block::new(1, Activation::Relu, vec![neurons3])?;

    let net = DeepRep::new(d + 1, vec![block1, block2, block3])?;
    let certificate = hj_norm_certificate(u0.norm_cert(), range, &net, &exp_profile, &log_profile, log_interval);
    Ok(ColeHopfSolution { net, range, log_interval, delta, exp_profile, log_profile, samples, certificate })
}

/// Largest standard error `std_n(e^{−v_n})/√N` over a few probe points.
fn mc_standard_error(u0: &ShallowRep<f64>, samples: &[Vec<f64>], cfg: &ColeHopfConfig) -> f64 {
    let d = u0.input_dim();
    let tau = cfg.t_max.sqrt();
    let mut probes = vec![vec![0.0; d]];
    for k in 0..d.min(8) {
        for sgn in [-1.0, 1.0] {
            let mut p = vec![0.0; d];
            p[k] = sgn * 0.5 * cfg.radius;
            probes.push(p);
        }
    }
    let n = samples.len() as f64;
    probes
        .iter()
        .map(|x| {
            let vals: Vec<f64> = samples
                .iter()
                .map(|z| {
                    let y: Vec<f64> = x.iter().zip(z).map(|(a, b)| a + tau * b).collect();
                    (-u0.eval_unchecked(&y)).exp()
                })
                .collect();
            let mean = vals.iter().sum::<f64>() / n;
            let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
            (var / n).sqrt()
        })
        .fold(0.0, f64::max)
}

/// Exact range of a 1D ReLU profile network on `[lo, hi]`.
fn profile_range(rep: &ShallowRep<f64>, lo: f64, hi: f64) -> (f64, f64) {
    let mut pts = vec![lo, hi];
    pts.extend(rep.atoms().iter().map(|at| -at.b / at.w[0]).filter(|s| *s > lo && *s < hi));
    pts.iter().map(|&s| rep.eval_unchecked(&[s])).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)))
}

/// Certificate of the Cole–Hopf network against `exp(β₊ − β₋)‖u0‖`.
pub fn hj_norm_certificate(
    u0_norm: f64,
    range: RangeInterval,
    net: &DeepRep<f64>,
    exp_profile: &ProfileRep<f64>,
    log_profile: &ProfileRep<f64>,
    log_interval: (f64, f64),
) -> HjCertificate {
    let certs = net.block_certs();
    let block_certs = [certs[0], certs[1], certs[2]];
    let w3_cert = u0_norm * exp_profile.curvature_cert * log_profile.curvature_cert;
    let paper_bound = range.oscillation().exp() * u0_norm;
    let ratio = if paper_bound > 0.0 { w3_cert / paper_bound } else { 0.0 };
    HjCertificate {
        u0_norm,
        range,
        block_certs,
        deep_cert: net.norm_cert(),
        exp_curvature: exp_profile.curvature_cert,
        log_curvature: log_profile.curvature_cert,
        w3_cert,
        paper_bound,
        ratio,
        exp_reference: range.gamma_plus() - range.gamma_minus(),
        log_reference: 1.0 / log_interval.0 - 1.0 / log_interval.1,
    }
}
