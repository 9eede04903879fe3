//! One-dimensional profiles and their conversion into ReLU atoms.
//!
//! A profile `g` on `[lo, hi]` is written as an affine part anchored at `lo`
//! plus one-sided kernels `σ(s − β)`:
//!
//! ```text
//! g(s) = g(lo) + g'(lo)(s − lo) + ∫ g''(β) σ(s − β) dβ + Σ_κ [g']_κ σ(s − κ)
//! ```
//!
//! The integral is discretised on the uniform midpoint knots
//! `β_j = lo + (j + ½)h`. Each knot's weight is the slope jump of the
//! piecewise-linear interpolant through `lo`, the knots, the kinks and `hi`,
//! which equals `∫ g'' φ_j` against the hat function `φ_j` of that knot.
//! The anchor slope is the first chord slope. The resulting network
//! interpolates `g` at every knot, so the error is local: `O(h² |g''|)`
//! near each point, regardless of how large `g''` is elsewhere.

use crate::activation::Activation;
use crate::error::{Error, Result};
use crate::scalar::{norm2, Scalar};
use crate::shallow::{Atom, ShallowRep};

type Fun<'a, T> = Box<dyn Fn(T) -> T + Send + Sync + 'a>;

/// A scalar function on an interval with an evaluable second derivative
/// away from a finite kink set.
pub struct Profile1D<'a, T> {
    lo: T,
    hi: T,
    g: Fun<'a, T>,
    g2: Fun<'a, T>,
    kinks: Vec<T>,
}

impl<'a, T: Scalar> Profile1D<'a, T> {
    pub fn new(
        lo: T,
        hi: T,
        g: impl Fn(T) -> T + Send + Sync + 'a,
        g2: impl Fn(T) -> T + Send + Sync + 'a,
    ) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::NonFinite("profile interval".into()));
        }
        if hi <= lo {
            return Err(Error::InvalidArgument(format!("profile interval [{lo}, {hi}] has zero length")));
        }
        Ok(Self { lo, hi, g: Box::new(g), g2: Box::new(g2), kinks: Vec::new() })
    }

    /// Second derivative by central differences of `g`.
    pub fn from_fn(lo: T, hi: T, g: impl Fn(T) -> T + Send + Sync + Clone + 'a) -> Result<Self> {
        let width = hi - lo;
        let h = width * T::c(1e-4);
        let g2 = {
            let g = g.clone();
            move |s: T| (g(s + h) - T::c(2.0) * g(s) + g(s - h)) / (h * h)
        };
        Self::new(lo, hi, g, g2)
    }

    /// Points where `g'` jumps. Only kinks strictly inside the interval matter.
    pub fn with_kinks(mut self, mut kinks: Vec<T>) -> Self {
        kinks.retain(|k| *k > self.lo && *k < self.hi);
        kinks.sort_by(|a, b| a.partial_cmp(b).expect("finite kinks"));
        kinks.dedup();
        self.kinks = kinks;
        self
    }

    pub fn interval(&self) -> (T, T) {
        (self.lo, self.hi)
    }

    /// The anchor of the affine part.
    pub fn anchor(&self) -> T {
        self.lo
    }

    pub fn kinks(&self) -> &[T] {
        &self.kinks
    }

    pub fn value(&self, s: T) -> T {
        (self.g)(s)
    }

    pub fn second_derivative(&self, s: T) -> T {
        (self.g2)(s)
    }
}

/// Output of [`profile_to_atoms`].
#[derive(Debug, Clone)]
pub struct ProfileRep<T> {
    /// One-dimensional ReLU network reproducing the profile on its interval.
    pub rep: ShallowRep<T>,
    /// `Σ |slope jumps|`, the discrete total variation of `g'`. Converges to
    /// `∫|g''| + Σ|kink jumps|`, the quantity the classical one-dimensional
    /// Barron estimates bound (e.g. `e^{β₊} − e^{β₋}` for `exp`).
    pub curvature_cert: T,
    /// Path norm of the affine part alone.
    pub affine_cert: T,
}

/// Converts a profile into a one-dimensional network with `n_quad` knots.
///
/// Only ReLU is supported: the remainder kernel `σ(s − β)` is a ReLU ridge.
pub fn profile_to_atoms<T: Scalar>(p: &Profile1D<'_, T>, activation: Activation, n_quad: usize) -> Result<ProfileRep<T>> {
    if activation != Activation::Relu {
        return Err(Error::UnsupportedActivation(
            activation.name(),
            "the integral-remainder kernel σ(s − β) is a ReLU ridge".into(),
        ));
    }
    if n_quad == 0 {
        return Err(Error::InvalidArgument("n_quad must be positive".into()));
    }
    let (lo, hi) = p.interval();
    let h = (hi - lo) / T::from_usize_lossy(n_quad);

    let mut knots: Vec<T> = Vec::with_capacity(n_quad + p.kinks.len());
    for j in 0..n_quad {
        let beta = lo + (T::from_usize_lossy(j) + T::c(0.5)) * h;
        let g2 = p.second_derivative(beta);
        if !g2.is_finite() {
            return Err(Error::NonFinite(format!("g'' at {beta}")));
        }
        knots.push(beta);
    }
    if !p.kinks.is_empty() {
        // A kink replaces any midpoint knot closer than h/4.
        let quarter = h * T::c(0.25);
        knots.retain(|k| p.kinks.iter().all(|kk| (*k - *kk).abs() > quarter));
        knots.extend_from_slice(&p.kinks);
        knots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    }

    let mut xs = Vec::with_capacity(knots.len() + 2);
    xs.push(lo);
    xs.extend_from_slice(&knots);
    xs.push(hi);
    let ys: Vec<T> = xs.iter().map(|&s| p.value(s)).collect();
    if let Some(i) = ys.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("g at {}", xs[i])));
    }
    let slopes: Vec<T> = xs.windows(2).zip(ys.windows(2)).map(|(x, y)| (y[1] - y[0]) / (x[1] - x[0])).collect();

    let mut atoms = Vec::with_capacity(knots.len() + 4);
    let mut curvature = T::zero();
    for (k, &kappa) in knots.iter().enumerate() {
        let jump = slopes[k + 1] - slopes[k];
        if jump != T::zero() {
            curvature += jump.abs();
            atoms.push(Atom::new(jump, vec![T::one()], -kappa));
        }
    }
    let slope0 = slopes[0];
    let affine = affine_atoms(Activation::Relu, slope0, ys[0] - slope0 * lo, (lo, hi))?;
    let affine_cert = crate::shallow::path_norm(Activation::Relu, &affine);
    let mut all = affine;
    all.extend(atoms);
    Ok(ProfileRep { rep: ShallowRep::new(1, Activation::Relu, all)?, curvature_cert: curvature, affine_cert })
}

/// Atoms representing `s ↦ slope·s + intercept` in one variable.
///
/// ReLU and softplus use the exact pair `σ(s) − σ(−s) = s`. Tanh uses a
/// constant atom with zero direction and, for the slope, the scaled
/// difference quotient `σ(εs)/(ε σ'(0))` with `ε` chosen so that the
/// linearisation error stays below `1e-8` on `interval`.
pub fn affine_atoms<T: Scalar>(act: Activation, slope: T, intercept: T, interval: (T, T)) -> Result<Vec<Atom<T>>> {
    if !slope.is_finite() || !intercept.is_finite() {
        return Err(Error::NonFinite("affine coefficients".into()));
    }
    let one = T::one();
    let mut atoms = Vec::new();
    match act {
        Activation::Relu | Activation::Softplus => {
            let ratio_limit = T::c(1e3);
            if slope != T::zero() && intercept.abs() <= ratio_limit * slope.abs() {
                let shift = intercept / slope;
                atoms.push(Atom::new(slope, vec![one], shift));
                atoms.push(Atom::new(-slope, vec![-one], -shift));
            } else {
                // slope·s + c = (slope − c)(σ(s) − σ(−s)) + c(σ(s+1) − σ(−s−1))
                let lin = slope - intercept;
                if lin != T::zero() {
                    atoms.push(Atom::new(lin, vec![one], T::zero()));
                    atoms.push(Atom::new(-lin, vec![-one], T::zero()));
                }
                if intercept != T::zero() {
                    atoms.push(Atom::new(intercept, vec![one], one));
                    atoms.push(Atom::new(-intercept, vec![-one], -one));
                }
            }
        }
        Activation::Tanh => {
            if intercept != T::zero() {
                atoms.push(Atom::new(intercept / one.tanh(), vec![T::zero()], one));
            }
            if slope != T::zero() {
                // tanh(εs)/ε = s − ε²s³/3 + …
                let m = interval.0.abs().max(interval.1.abs()).max(one);
                let eps = (T::c(3e-8) / (m * m * m)).sqrt();
                atoms.push(Atom::new(slope / eps, vec![eps], T::zero()));
            }
        }
    }
    Ok(atoms)
}

/// `x ↦ slope·x₁ + intercept`-style affine function along `direction`.
pub fn affine_rep<T: Scalar>(act: Activation, direction: &[T], slope: T, intercept: T, radius: T) -> Result<ShallowRep<T>> {
    let wn = norm2(direction);
    if wn == T::zero() {
        return Err(Error::ZeroDirection);
    }
    let profile = ShallowRep::new(1, act, affine_atoms(act, slope, intercept, (-radius * wn, radius * wn))?)?;
    ridge_lift(&profile, direction, T::zero())
}

/// The constant function `c` on `ℝ^d`.
pub fn constant_rep<T: Scalar>(act: Activation, dim: usize, c: T) -> Result<ShallowRep<T>> {
    let mut e1 = vec![T::zero(); dim];
    e1[0] = T::one();
    affine_rep(act, &e1, T::zero(), c, T::one())
}

/// Lifts a one-dimensional network `p` to the ridge function `x ↦ p(wᵀx + b)`.
///
/// Atom `(α, ω, β)` becomes `(α, ω·w, ω·b + β)`.
pub fn ridge_lift<T: Scalar>(profile: &ShallowRep<T>, w: &[T], b: T) -> Result<ShallowRep<T>> {
    if profile.input_dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: profile.input_dim() });
    }
    if w.iter().all(|v| v.is_zero()) {
        return Err(Error::ZeroDirection);
    }
    let atoms = profile
        .atoms()
        .iter()
        .map(|at| {
            let omega = at.w[0];
            Atom::new(at.a, w.iter().map(|&wi| omega * wi).collect(), omega * b + at.b)
        })
        .collect();
    ShallowRep::new(w.len(), profile.activation(), atoms)
}

/// Certificate of `ridge_lift(profile, w, b)` predicted from `|w|` alone:
/// `Σ |α| (|ω|·|w| + |ω b + β|)` (or `+1` for bounded activations).
pub fn ridge_lift_cert<T: Scalar>(profile: &ShallowRep<T>, w_norm: T, b: T) -> T {
    let act = profile.activation();
    profile
        .atoms()
        .iter()
        .fold(T::zero(), |acc, at| acc + at.a.abs() * act.weight_factor(at.w[0].abs() * w_norm, at.w[0] * b + at.b))
}
