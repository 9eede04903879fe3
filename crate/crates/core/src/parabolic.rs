//! Heat equation `∂_t u − Δu = f`, `u(0) = u0`, with network data.
//!
//! The heat kernel is the law of `x + √(2t) Z`, `Z ~ N(0, I_d)`. For a ridge
//! atom only the projection `|w| Z₁` matters, so one atom smooths to
//! `a E σ(μ + √(2t)|w| Z)` with `μ = wᵀx + b`, and a discrete rule
//! `(z_k, q_k)` for `Z` turns it into the atoms
//! `a q_k σ(wᵀx + b + √t·√2|w| z_k)`. Read as functions of `(x, √t)` these
//! form a single two-layer network in `d + 1` variables.

use crate::activation::Activation;
use crate::elliptic::NormCertificate;
use crate::error::{Error, Result};
use crate::profile::constant_rep;
use crate::quadrature::{gauss_legendre, GaussianRule};
use crate::scalar::Scalar;
use crate::shallow::{Atom, ShallowRep};
use statrs::distribution::{Continuous, ContinuousCDF, Normal};
use std::f64::consts::SQRT_2;

pub const SPACETIME_FORMULA: &str = "2 * |u0|";
pub const FIXED_TIME_FORMULA: &str = "(1 + sqrt(t)) * |u0|";
pub const DUHAMEL_FORMULA: &str = "(t + 2/3 t^1.5 + t^2/2 + 2/5 t^2.5) * |f|";

/// Node counts. ReLU data use [`GaussianRule::relu_adapted`] with
/// `relu_nodes` nodes, smooth activations Gauss–Hermite with `hermite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeatOptions {
    pub hermite: usize,
    pub relu_nodes: usize,
    pub time_nodes: usize,
}

impl Default for HeatOptions {
    fn default() -> Self {
        Self { hermite: 40, relu_nodes: 1024, time_nodes: 32 }
    }
}

impl HeatOptions {
    pub fn rule_for(&self, act: Activation) -> Result<GaussianRule> {
        match act {
            Activation::Relu if self.relu_nodes < 2 => Err(Error::InvalidArgument("relu_nodes must be at least 2".into())),
            Activation::Relu => Ok(GaussianRule::relu_adapted(self.relu_nodes)),
            _ if self.hermite < 2 => Err(Error::InvalidArgument("hermite must be at least 2".into())),
            _ => Ok(GaussianRule::hermite(self.hermite)),
        }
    }
}

/// `a E σ(μ + sZ)` for a ReLU atom, `s = √(2t)|w|`:
/// `μΦ(μ/s) + s φ(μ/s)`. Exact `aσ(μ)` at `t = 0`.
pub fn relu_heat_closed_form<T: Scalar>(atom: &Atom<T>, t: f64, x: &[T]) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::InvalidArgument(format!("time must be nonnegative, got {t}")));
    }
    if x.len() != atom.w.len() {
        return Err(Error::DimensionMismatch { expected: atom.w.len(), got: x.len() });
    }
    let mu = atom.pre_activation(x).f64();
    let a = atom.a.f64();
    let s = (2.0 * t).sqrt() * atom.w_norm().f64();
    if s == 0.0 {
        return Ok(a * mu.max(0.0));
    }
    let n = Normal::standard();
    let y = mu / s;
    Ok(a * (mu * n.cdf(y) + s * n.pdf(y)))
}

/// Sum of [`relu_heat_closed_form`] over all atoms.
pub fn relu_heat_closed_form_rep<T: Scalar>(u0: &ShallowRep<T>, t: f64, x: &[T]) -> Result<f64> {
    if u0.activation() != Activation::Relu {
        return Err(Error::UnsupportedActivation(u0.activation().name(), "closed form exists for ReLU only".into()));
    }
    u0.atoms().iter().try_fold(0.0, |acc, at| Ok(acc + relu_heat_closed_form(at, t, x)?))
}

/// A network over `(x, τ)` with `τ = √t` as the last coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeRep<T> {
    pub rep: ShallowRep<T>,
}

impl<T: Scalar> SpaceTimeRep<T> {
    pub fn space_dim(&self) -> usize {
        self.rep.input_dim() - 1
    }

    /// Index of the `τ` coordinate.
    pub fn tau_index(&self) -> usize {
        self.space_dim()
    }

    pub fn eval(&self, t: T, x: &[T]) -> Result<T> {
        if t < T::zero() {
            return Err(Error::InvalidArgument("time must be nonnegative".into()));
        }
        let mut z = x.to_vec();
        z.push(t.sqrt());
        self.rep.eval(&z)
    }
}

/// `√2|w| z_k` for every node.
fn spreads<T: Scalar>(atom: &Atom<T>, rule: &GaussianRule) -> Vec<T> {
    let wn = atom.w_norm().f64();
    rule.nodes.iter().map(|z| T::c(SQRT_2 * wn * z)).collect()
}

/// The homogeneous solution as one network of `(x, √t)`.
pub fn heat_homogeneous_spacetime<T: Scalar>(u0: &ShallowRep<T>, rule: &GaussianRule) -> Result<(SpaceTimeRep<T>, NormCertificate)> {
    if rule.len() < 2 {
        return Err(Error::InvalidArgument("at least two nodes needed".into()));
    }
    let d = u0.input_dim();
    let act = u0.activation();
    let mut atoms = Vec::with_capacity(u0.len() * rule.len());
    for at in u0.atoms() {
        if at.w.iter().all(|v| v.is_zero()) {
            let mut w = at.w.clone();
            w.push(T::zero());
            atoms.push(Atom::new(at.a, w, at.b));
            continue;
        }
        for (zeta, &q) in spreads(at, rule).into_iter().zip(&rule.weights) {
            let mut w = at.w.clone();
            w.push(zeta);
            atoms.push(Atom::new(at.a * T::c(q), w, at.b));
        }
    }
    let rep = ShallowRep::new(d + 1, act, atoms)?;
    let input = u0.norm_cert().f64();
    let cert = NormCertificate::new(input, rep.norm_cert().f64(), 2.0 * input, SPACETIME_FORMULA);
    Ok((SpaceTimeRep { rep }, cert))
}

/// The homogeneous solution at a fixed time: atoms `a q_k σ(wᵀx + b + √t ζ_k)`.
pub fn heat_homogeneous_at_time<T: Scalar>(u0: &ShallowRep<T>, t: f64, rule: &GaussianRule) -> Result<(ShallowRep<T>, NormCertificate)> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("time must be nonnegative, got {t}")));
    }
    let rep = propagate(u0, t, T::one(), rule)?;
    let input = u0.norm_cert().f64();
    let cert = NormCertificate::new(input, rep.norm_cert().f64(), (1.0 + t.sqrt()) * input, FIXED_TIME_FORMULA);
    Ok((rep, cert))
}

fn propagate<T: Scalar>(u0: &ShallowRep<T>, t: f64, scale: T, rule: &GaussianRule) -> Result<ShallowRep<T>> {
    let rt = T::c(t.sqrt());
    let mut atoms = Vec::with_capacity(u0.len() * rule.len());
    for at in u0.atoms() {
        if at.w.iter().all(|v| v.is_zero()) {
            atoms.push(Atom::new(scale * at.a, at.w.clone(), at.b));
            continue;
        }
        for (zeta, &q) in spreads(at, rule).into_iter().zip(&rule.weights) {
            atoms.push(Atom::new(scale * at.a * T::c(q), at.w.clone(), at.b + rt * zeta));
        }
    }
    ShallowRep::new(u0.input_dim(), u0.activation(), atoms)
}

/// `(t, x) ↦ …` source restricted to time `s`: atoms `(a, w_x, b + w_t s)`.
fn source_slice<T: Scalar>(f: &ShallowRep<T>, s: T) -> Result<ShallowRep<T>> {
    let d = f.input_dim() - 1;
    let act = f.activation();
    let mut out = ShallowRep::zero(d, act);
    let mut atoms = Vec::with_capacity(f.len());
    for at in f.atoms() {
        let wx = at.w[1..].to_vec();
        let b = at.b + at.w[0] * s;
        if !act.is_bounded() && wx.iter().all(|v| v.is_zero()) {
            // constant in x: encode through affine pairs
            out = out.concat(&constant_rep(act, d, at.a * act.eval(b))?)?;
        } else {
            atoms.push(Atom::new(at.a, wx, b));
        }
    }
    ShallowRep::new(d, act, atoms)?.concat(&out)
}

/// `t + ⅔t^{3/2} + t²/2 + ⅖t^{5/2}`.
pub fn duhamel_bound_factor(t: f64) -> f64 {
    t + 2.0 / 3.0 * t.powf(1.5) + t * t / 2.0 + 0.4 * t.powf(2.5)
}

/// Duhamel term `∫_0^t e^{(t−s)Δ} f(s) ds` with `n_time_nodes` Gauss–Legendre
/// nodes in `s`. The source is a network over `(t, x)`, time first.
pub fn heat_inhomogeneous_at_time<T: Scalar>(f: &ShallowRep<T>, t: f64, n_time_nodes: usize, rule: &GaussianRule) -> Result<(ShallowRep<T>, NormCertificate)> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("time must be positive, got {t}")));
    }
    if n_time_nodes < 1 {
        return Err(Error::InvalidArgument("n_time_nodes must be at least 1".into()));
    }
    if f.input_dim() < 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: f.input_dim() });
    }
    let (nodes, weights) = gauss_legendre(n_time_nodes, 0.0, t);
    let mut atoms = Vec::new();
    for (s, om) in nodes.into_iter().zip(weights) {
        let slice = source_slice(f, T::c(s))?;
        atoms.extend(propagate(&slice, t - s, T::c(om), rule)?.into_atoms());
    }
    let rep = ShallowRep::new(f.input_dim() - 1, f.activation(), atoms)?;
    let input = f.norm_cert().f64();
    let cert = NormCertificate::new(input, rep.norm_cert().f64(), duhamel_bound_factor(t) * input, DUHAMEL_FORMULA);
    Ok((rep, cert))
}

#[derive(Debug, Clone)]
pub struct HeatProblem<T> {
    pub u0: ShallowRep<T>,
    /// Source over `(t, x)`.
    pub source: Option<ShallowRep<T>>,
}

#[derive(Debug, Clone)]
pub struct HeatSolution<T> {
    pub rep: ShallowRep<T>,
    pub homogeneous: NormCertificate,
    pub inhomogeneous: Option<NormCertificate>,
}

/// Homogeneous part followed by the Duhamel part, as one atom list.
pub fn heat_full<T: Scalar>(p: &HeatProblem<T>, t: f64, opts: &HeatOptions) -> Result<HeatSolution<T>> {
    let rule = opts.rule_for(p.u0.activation())?;
    let (hom, hc) = heat_homogeneous_at_time(&p.u0, t, &rule)?;
    match &p.source {
        None => Ok(HeatSolution { rep: hom, homogeneous: hc, inhomogeneous: None }),
        Some(f) => {
            if f.input_dim() != p.u0.input_dim() + 1 {
                return Err(Error::DimensionMismatch { expected: p.u0.input_dim() + 1, got: f.input_dim() });
            }
            let frule = opts.rule_for(f.activation())?;
            let (inh, ic) = heat_inhomogeneous_at_time(f, t, opts.time_nodes, &frule)?;
            Ok(HeatSolution { rep: hom.concat(&inh)?, homogeneous: hc, inhomogeneous: Some(ic) })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn relu(atoms: Vec<(f64, Vec<f64>, f64)>) -> ShallowRep<f64> {
        let d = atoms[0].1.len();
        ShallowRep::new(d, Activation::Relu, atoms.into_iter().map(|(a, w, b)| Atom::new(a, w, b)).collect()).unwrap()
    }

    #[test]
    fn closed_form_on_kink() {
        let at = Atom::new(1.0, vec![0.6, 0.8], -0.5);
        let x = [0.5, 0.25];
        for t in [0.1, 1.0, 3.0] {
            let v = relu_heat_closed_form(&at, t, &x).unwrap();
            assert!((v - (t / std::f64::consts::PI).sqrt()).abs() < 1e-14);
        }
        assert_eq!(relu_heat_closed_form(&at, 0.0, &[2.0, 0.0]).unwrap(), 0.7);
    }

    #[test]
    fn linear_data_is_caloric() {
        let u0 = relu(vec![(1.0, vec![1.0], 0.0), (-1.0, vec![-1.0], 0.0)]);
        let rule = GaussianRule::relu_adapted(64);
        for t in [0.5, 2.0] {
            let (u, _) = heat_homogeneous_at_time(&u0, t, &rule).unwrap();
            for x in [-2.0, 0.3, 1.7] {
                assert!((relu_heat_closed_form_rep(&u0, t, &[x]).unwrap() - x).abs() < 1e-14);
                assert!((u.eval(&[x]).unwrap() - x).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn spacetime_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u0 = relu((0..6).map(|_| (rng.random_range(-1.0..1.0), vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)], rng.random_range(-1.0..1.0))).collect());
        let rule = GaussianRule::relu_adapted(1024);
        let (st, cert) = heat_homogeneous_spacetime(&u0, &rule).unwrap();
        assert!(cert.ratio <= 1.0 + 1e-6);
        for _ in 0..50 {
            let t = rng.random_range(0.0..2.0);
            let x = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
            let exact = relu_heat_closed_form_rep(&u0, t, &x).unwrap();
            let bound: f64 = u0.atoms().iter().map(|a| a.a.abs() * (2.0 * t).sqrt() * a.w_norm()).sum::<f64>() * rule.unit_error;
            assert!((st.eval(t, &x).unwrap() - exact).abs() <= bound * 1.0001 + 1e-14);
        }
    }

    #[test]
    fn time_zero_collapses() {
        let u0 = relu(vec![(2.0, vec![1.0, -1.0], 0.3), (-0.5, vec![0.2, 0.4], -0.1)]);
        let (u, _) = heat_homogeneous_at_time(&u0, 0.0, &GaussianRule::relu_adapted(32)).unwrap();
        for x in [[0.0, 0.0], [1.0, 2.0], [-1.0, 0.5]] {
            assert!((u.eval(&x).unwrap() - u0.eval(&x).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn constants_are_caloric() {
        let u0 = ShallowRep::new(2, Activation::Tanh, vec![Atom::new(2.0, vec![0.0, 0.0], 0.5)]).unwrap();
        let (st, _) = heat_homogeneous_spacetime(&u0, &GaussianRule::hermite(40)).unwrap();
        let c = 2.0 * 0.5f64.tanh();
        for (t, x) in [(0.0, [0.0, 0.0]), (1.0, [3.0, -1.0]), (5.0, [-2.0, 2.0])] {
            assert!((st.eval(t, &x).unwrap() - c).abs() < 1e-15);
        }
    }

    #[test]
    fn unit_source_gives_time() {
        // f ≡ 1 as a tanh constant over (t, x)
        let f = ShallowRep::new(2, Activation::Tanh, vec![Atom::new(1.0 / 1f64.tanh(), vec![0.0, 0.0], 1.0)]).unwrap();
        let (u, cert) = heat_inhomogeneous_at_time(&f, 1.5, 8, &GaussianRule::hermite(40)).unwrap();
        assert!((u.eval(&[0.7]).unwrap() - 1.5).abs() < 1e-13);
        assert!(cert.ratio <= 1.0);
    }

    #[test]
    fn relu_slice_with_time_only_direction() {
        let f = relu(vec![(1.0, vec![1.0, 0.0], 0.0)]);
        // ∫_0^t s ds = t²/2
        let (u, _) = heat_inhomogeneous_at_time(&f, 2.0, 4, &GaussianRule::relu_adapted(16)).unwrap();
        assert!((u.eval(&[0.3]).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn fixed_time_bound_fails_without_bias() {
        // E|ζ| = 2√t|w|/√π exceeds √t|w|: the (1+√t) factor cannot hold for b = 0
        let u0 = relu(vec![(1.0, vec![1.0], 0.0)]);
        let (_, cert) = heat_homogeneous_at_time(&u0, 1.0, &GaussianRule::relu_adapted(256)).unwrap();
        let expected = (1.0 + 2.0 / std::f64::consts::PI.sqrt()) / 2.0;
        assert!((cert.ratio - expected).abs() < 1e-3, "{}", cert.ratio);
    }
}
