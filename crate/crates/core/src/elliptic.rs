//! Whole-space elliptic problems with network data.
//!
//! Screened Poisson `(−Δ + λ²)u = f`: each ridge atom `a σ(wᵀx + b)` of `f`
//! has the ridge solution `a φ(wᵀx + b)` where `φ` solves the 1D problem
//! `−|w|²φ'' + λ²φ = σ`, i.e. `φ = G * σ` with
//! `G(r) = e^{−λ|r|/|w|} / (2λ|w|)` and `∫G = λ⁻²`.
//!
//! Poisson `−Δu = f` with `f = Σ a σ''(wᵀx + b)`: `u = Σ (−a/|w|²) σ(wᵀx + b)`.

use crate::activation::Activation;
use crate::error::{Error, Result};
use crate::profile::{profile_to_atoms, ridge_lift, Profile1D};
use crate::quadrature::{gauss_legendre, integrate};
use crate::scalar::Scalar;
use crate::shallow::{Atom, ShallowRep};
use rayon::prelude::*;

/// Kernel tails beyond `TAIL·|w|/λ` are below `e^{−TAIL}`.
const PROFILE_TAIL: f64 = 20.0;
const KERNEL_TAIL: f64 = 40.0;

#[derive(Debug, Clone)]
pub struct ScreenedPoissonProblem<T> {
    pub lambda: T,
    pub rhs: ShallowRep<T>,
}

/// Output norm of a construction compared with a reference bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormCertificate {
    pub input_norm: f64,
    pub output_norm: f64,
    pub paper_bound: f64,
    pub ratio: f64,
    pub formula: &'static str,
}

impl NormCertificate {
    pub fn new(input_norm: f64, output_norm: f64, paper_bound: f64, formula: &'static str) -> Self {
        let ratio = if paper_bound > 0.0 {
            output_norm / paper_bound
        } else if output_norm == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        Self { input_norm, output_norm, paper_bound, ratio, formula }
    }
}

pub const SCREENED_RELU_FORMULA: &str = "(lambda^-2 + 2 lambda^-3) * |f|";
pub const SCREENED_BOUNDED_FORMULA: &str = "lambda^-2 * |f|";

#[derive(Debug, Clone)]
pub struct ScreenedSolution<T> {
    pub rep: ShallowRep<T>,
    pub certificate: NormCertificate,
    /// One certificate per right-hand-side atom, in atom order.
    pub per_atom: Vec<NormCertificate>,
}

/// Reference-bound factor multiplying `‖f‖`.
pub fn screened_bound_factor(act: Activation, lambda: f64) -> f64 {
    if act.is_bounded() {
        lambda.powi(-2)
    } else {
        lambda.powi(-2) + 2.0 * lambda.powi(-3)
    }
}

/// `a φ(s + b)` for the single-atom right-hand side `a σ(wᵀx + b)` at
/// `wᵀx = s`, where `−|w|²φ'' + λ²φ = σ`.
///
/// ReLU uses `φ(s) = λ⁻²σ(s) + (|w|/(2λ³)) e^{−λ|s|/|w|}`; the other
/// activations integrate `G * σ` adaptively.
pub fn screened_profile(act: Activation, a: f64, w_norm: f64, b: f64, lambda: f64, s: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidArgument(format!("lambda must be positive, got {lambda}")));
    }
    let z = s + b;
    if w_norm == 0.0 {
        if act.is_bounded() {
            return Ok(a * act.eval(z) / (lambda * lambda));
        }
        return Err(Error::ZeroDirection);
    }
    match act {
        Activation::Relu => Ok(a * relu_profile(w_norm, lambda, z)),
        _ => {
            let c = lambda / w_norm;
            let g = move |r: f64| (-c * r.abs()).exp() / (2.0 * lambda * w_norm);
            let reach = KERNEL_TAIL / c;
            let tol = 1e-13 * (1.0 + z.abs()) / (lambda * lambda);
            let left = integrate(|r| g(r) * act.eval(z - r), -reach, 0.0, tol);
            let right = integrate(|r| g(r) * act.eval(z - r), 0.0, reach, tol);
            Ok(a * (left + right))
        }
    }
}

fn relu_profile(w_norm: f64, lambda: f64, z: f64) -> f64 {
    z.max(0.0) / (lambda * lambda) + w_norm / (2.0 * lambda.powi(3)) * (-lambda * z.abs() / w_norm).exp()
}

/// Builds the network solution atom by atom and certifies its norm.
///
/// ReLU atoms go through [`profile_to_atoms`] on `[−S, S]`, `S = 20|w|/λ`,
/// with `n_quad` knots; outside, the network is affine and matches the
/// asymptote `λ⁻²σ` up to `e^{−20}`. Bounded and softplus atoms become
/// shifted copies `a k_j σ(wᵀx + b − r_j)` with Gauss–Legendre weights
/// `k_j` of `G` (`n_quad` nodes per half-line, normalised to `Σk_j = λ⁻²`).
pub fn solve_screened_poisson<T: Scalar>(p: &ScreenedPoissonProblem<T>, n_quad: usize) -> Result<ScreenedSolution<T>> {
    let lambda = p.lambda.f64();
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgument(format!("lambda must be positive, got {lambda}")));
    }
    if n_quad < 8 {
        return Err(Error::InvalidArgument("n_quad must be at least 8".into()));
    }
    let act = p.rhs.activation();
    let dim = p.rhs.input_dim();
    let factor = screened_bound_factor(act, lambda);
    let formula = if act.is_bounded() { SCREENED_BOUNDED_FORMULA } else { SCREENED_RELU_FORMULA };
    let shifts = if act == Activation::Relu { None } else { Some(kernel_rule(n_quad)) };

    let parts: Vec<ShallowRep<T>> = p
        .rhs
        .atoms()
        .par_iter()
        .map(|atom| match &shifts {
            None => relu_atom_solution(atom, lambda, n_quad),
            Some(rule) => shifted_atom_solution(atom, act, lambda, rule),
        })
        .collect::<Result<_>>()?;

    let mut atoms = Vec::with_capacity(parts.iter().map(ShallowRep::len).sum());
    let mut per_atom = Vec::with_capacity(parts.len());
    for (atom, part) in p.rhs.atoms().iter().zip(&parts) {
        let input = atom.path_weight(act).f64();
        per_atom.push(NormCertificate::new(input, part.norm_cert().f64(), factor * input, formula));
        atoms.extend(part.atoms().iter().cloned());
    }
    let rep = ShallowRep::new(dim, act, atoms)?;
    let input = p.rhs.norm_cert().f64();
    let certificate = NormCertificate::new(input, rep.norm_cert().f64(), factor * input, formula);
    Ok(ScreenedSolution { rep, certificate, per_atom })
}

fn relu_atom_solution<T: Scalar>(atom: &Atom<T>, lambda: f64, n_quad: usize) -> Result<ShallowRep<T>> {
    let c = atom.w_norm().f64();
    if c == 0.0 {
        return Err(Error::ZeroDirection);
    }
    let reach = T::c(PROFILE_TAIL * c / lambda);
    let (cl, lam) = (T::c(c), T::c(lambda));
    let g = move |s: T| {
        let z = s.max(T::zero()) / (lam * lam);
        z + cl / (T::c(2.0) * lam.powi(3)) * (-lam * s.abs() / cl).exp()
    };
    let g2 = move |s: T| (-lam * s.abs() / cl).exp() / (T::c(2.0) * lam * cl);
    let profile = Profile1D::new(-reach, reach, g, g2)?;
    let prof = profile_to_atoms(&profile, Activation::Relu, n_quad)?.rep;
    Ok(ridge_lift(&prof, &atom.w, atom.b)?.scaled(atom.a))
}

/// Nodes `t_j ∈ (0, 1)` and weights for `∫_0^1 e^{−KERNEL_TAIL·t} dt`-type
/// integrals: composite 8-point Gauss–Legendre panels.
struct KernelRule {
    t: Vec<f64>,
    q: Vec<f64>,
}

fn kernel_rule(n_quad: usize) -> KernelRule {
    let panels = (n_quad / 8).max(1);
    let mut t = Vec::with_capacity(panels * 8);
    let mut q = Vec::with_capacity(panels * 8);
    for k in 0..panels {
        let (x, w) = gauss_legendre(8, k as f64 / panels as f64, (k + 1) as f64 / panels as f64);
        for (xi, wi) in x.into_iter().zip(w) {
            t.push(xi);
            q.push(wi * (-KERNEL_TAIL * xi).exp());
        }
    }
    KernelRule { t, q }
}

fn shifted_atom_solution<T: Scalar>(atom: &Atom<T>, act: Activation, lambda: f64, rule: &KernelRule) -> Result<ShallowRep<T>> {
    let c = atom.w_norm().f64();
    let inv_l2 = 1.0 / (lambda * lambda);
    let dim = atom.w.len();
    if c == 0.0 {
        if !act.is_bounded() {
            return Err(Error::ZeroDirection);
        }
        return ShallowRep::new(dim, act, vec![Atom::new(atom.a * T::c(inv_l2), atom.w.clone(), atom.b)]);
    }
    // r = t·KERNEL_TAIL·|w|/λ on each half-line; G(r) dr ∝ e^{−KERNEL_TAIL t} dt
    let reach = KERNEL_TAIL * c / lambda;
    let total: f64 = 2.0 * rule.q.iter().sum::<f64>();
    let mut atoms = Vec::with_capacity(2 * rule.t.len());
    let n = rule.t.len();
    // shifts in increasing order: left half-line reversed, then the right one
    let shifts = (0..n).rev().map(|j| (-rule.t[j], rule.q[j])).chain((0..n).map(|j| (rule.t[j], rule.q[j])));
    for (t, q) in shifts {
        let k = q / total * inv_l2;
        atoms.push(Atom::new(atom.a * T::c(k), atom.w.clone(), atom.b - T::c(t * reach)));
    }
    ShallowRep::new(dim, act, atoms)
}

#[derive(Debug, Clone)]
pub struct ActivationPairProblem<T> {
    /// Atoms `(a, w, b)` read as `a σ''(wᵀx + b)`; `σ` is the solution activation.
    pub rhs: ShallowRep<T>,
    /// Hölder exponent of the modified norm, in `(0, 1)`.
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModifiedNormReport {
    pub alpha: f64,
    /// `Σ |a| (|w|^{2+α} + 1)` over the right-hand side.
    pub rhs_norm: f64,
    /// `Σ (|a|/|w|²) (|w|^{2+α} + 1)` over the right-hand side.
    pub rhs_weighted_norm: f64,
    /// `Σ |ã| (|w̃|^{2+α} + 1)` over the solution.
    pub solution_norm: f64,
}

pub fn modified_norm<T: Scalar>(atoms: &[Atom<T>], alpha: f64) -> f64 {
    atoms.iter().fold(0.0, |acc, at| acc + at.a.f64().abs() * (at.w_norm().f64().powf(2.0 + alpha) + 1.0))
}

/// Exact solution of `−Δu = Σ a σ''(wᵀx + b)` in the class `Σ ã σ(w̃ᵀx + b̃)`.
pub fn solve_poisson_activation_pair<T: Scalar>(p: &ActivationPairProblem<T>) -> Result<(ShallowRep<T>, ModifiedNormReport)> {
    let act = p.rhs.activation();
    if act == Activation::Relu {
        return Err(Error::GrowthObstruction);
    }
    if !(p.alpha > 0.0 && p.alpha < 1.0) {
        return Err(Error::InvalidArgument(format!("alpha must lie in (0, 1), got {}", p.alpha)));
    }
    let mut atoms = Vec::with_capacity(p.rhs.len());
    let mut weighted = 0.0;
    for (i, at) in p.rhs.atoms().iter().enumerate() {
        let wn = at.w_norm();
        if wn == T::zero() {
            return Err(Error::ConstantSource(i));
        }
        let w2 = wn * wn;
        atoms.push(Atom::new(-at.a / w2, at.w.clone(), at.b));
        weighted += at.a.f64().abs() / w2.f64() * (wn.f64().powf(2.0 + p.alpha) + 1.0);
    }
    let report = ModifiedNormReport {
        alpha: p.alpha,
        rhs_norm: modified_norm(p.rhs.atoms(), p.alpha),
        rhs_weighted_norm: weighted,
        solution_norm: modified_norm(&atoms, p.alpha),
    };
    Ok((ShallowRep::new(p.rhs.input_dim(), act, atoms)?, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn single(act: Activation, a: f64, w: Vec<f64>, b: f64) -> ShallowRep<f64> {
        ShallowRep::new(w.len(), act, vec![Atom::new(a, w, b)]).unwrap()
    }

    #[test]
    fn relu_profile_value_at_kink() {
        assert!((screened_profile(Activation::Relu, 1.0, 1.0, 0.0, 1.0, 0.0).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn relu_closed_form_matches_convolution() {
        for &(wn, lambda) in &[(1.0, 1.0), (0.5, 2.0), (3.0, 0.5)] {
            let c = lambda / wn;
            let g = move |r: f64| (-c * r.abs()).exp() / (2.0 * lambda * wn);
            for &z in &[-3.0, -0.2, 0.0, 0.7, 4.0] {
                let reach = KERNEL_TAIL / c;
                let f = |r: f64| g(r) * (z - r).max(0.0);
                // split at both kinks of the integrand
                let (k1, k2) = (z.min(0.0), z.max(0.0));
                let conv = integrate(f, -reach, k1, 1e-14) + integrate(f, k1, k2, 1e-14) + integrate(f, k2, reach, 1e-14);
                let closed = relu_profile(wn, lambda, z);
                assert!((conv - closed).abs() < 1e-11 * (1.0 + closed), "{wn} {lambda} {z}: {conv} vs {closed}");
            }
        }
    }

    #[test]
    fn bounded_profile_ode_residual() {
        let (wn, lambda, b) = (1.3, 0.8, 0.2);
        let h = 1e-3;
        for &s in &[-2.0, -0.5, 0.0, 0.9, 2.5] {
            let phi = |s| screened_profile(Activation::Tanh, 1.0, wn, b, lambda, s).unwrap();
            let d2 = (phi(s + h) - 2.0 * phi(s) + phi(s - h)) / (h * h);
            let res = -wn * wn * d2 + lambda * lambda * phi(s) - (s + b).tanh();
            assert!(res.abs() < 1e-5, "{s}: {res}");
        }
    }

    #[test]
    fn constant_source_bounded() {
        let f = single(Activation::Tanh, 3.0, vec![0.0, 0.0], 1.0);
        let sol = solve_screened_poisson(&ScreenedPoissonProblem { lambda: 2.0, rhs: f }, 64).unwrap();
        let expect = 3.0 * 1f64.tanh() / 4.0;
        for x in [[0.0, 0.0], [5.0, -1.0]] {
            assert!((sol.rep.eval(&x).unwrap() - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn relu_solution_matches_closed_form() {
        let f = single(Activation::Relu, 1.0, vec![1.0, 0.0], 0.0);
        let sol = solve_screened_poisson(&ScreenedPoissonProblem { lambda: 1.0, rhs: f }, 4096).unwrap();
        assert!((sol.rep.eval(&[0.0, 0.0]).unwrap() - 0.5).abs() < 1e-5);
        for s in [-30.0f64, -5.0, 1.0, 12.0, 40.0] {
            let v = sol.rep.eval(&[s, 0.7]).unwrap();
            assert!((v - relu_profile(1.0, 1.0, s)).abs() < 1e-5 * (1.0 + s.abs()), "{s}");
        }
        assert!(sol.certificate.ratio <= 3.0);
    }

    #[test]
    fn bounded_solution_norm_is_exact() {
        for act in [Activation::Tanh, Activation::Softplus] {
            let f = single(act, -1.5, vec![0.6, 0.8], 0.3);
            let sol = solve_screened_poisson(&ScreenedPoissonProblem { lambda: 0.7, rhs: f.clone() }, 512).unwrap();
            if act.is_bounded() {
                assert!((sol.certificate.ratio - 1.0).abs() < 1e-12);
            } else {
                assert!(sol.certificate.ratio <= 1.0);
            }
            for x in [[0.1, -0.4], [2.0, 1.0], [-3.0, 0.5]] {
                let s = 0.6 * x[0] + 0.8 * x[1];
                let reference = screened_profile(act, -1.5, 1.0, 0.3, 0.7, s).unwrap();
                assert!((sol.rep.eval(&x).unwrap() - reference).abs() < 1e-8, "{act} {x:?}");
            }
        }
    }

    #[test]
    fn dimension_independent_certificate() {
        let f2 = single(Activation::Relu, 0.7, vec![0.3, -0.4], 0.25);
        let f100 = f2.embed(100).unwrap();
        let c2 = solve_screened_poisson(&ScreenedPoissonProblem { lambda: 1.5, rhs: f2 }, 256).unwrap().certificate;
        let c100 = solve_screened_poisson(&ScreenedPoissonProblem { lambda: 1.5, rhs: f100 }, 256).unwrap().certificate;
        assert_eq!(c2.output_norm.to_bits(), c100.output_norm.to_bits());
    }

    #[test]
    fn linearity_is_concatenation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mk = |rng: &mut ChaCha8Rng| single(Activation::Relu, rng.random_range(-1.0..1.0), vec![rng.random_range(0.2..1.0), rng.random_range(-1.0..1.0)], rng.random_range(-1.0..1.0));
        let (f1, f2) = (mk(&mut rng), mk(&mut rng));
        let solve = |f: ShallowRep<f64>| solve_screened_poisson(&ScreenedPoissonProblem { lambda: 1.0, rhs: f }, 64).unwrap().rep;
        let both = solve(f1.concat(&f2).unwrap());
        let sep = solve(f1).concat(&solve(f2)).unwrap();
        assert_eq!(both, sep);
    }

    #[test]
    fn activation_pair() {
        let f = single(Activation::Softplus, 1.0, vec![1.0], 0.0);
        let (u, rep) = solve_poisson_activation_pair(&ActivationPairProblem { rhs: f, alpha: 0.5 }).unwrap();
        let h = 1e-3;
        for &x in &[-2.0f64, 0.0, 1.5] {
            let lap = (u.eval(&[x + h]).unwrap() - 2.0 * u.eval(&[x]).unwrap() + u.eval(&[x - h]).unwrap()) / (h * h);
            let f = Activation::Softplus.deriv2(x).unwrap();
            assert!((-lap - f).abs() < 1e-6);
        }
        assert!((rep.solution_norm - rep.rhs_weighted_norm).abs() < 1e-14);

        let f = single(Activation::Softplus, 1.0, vec![2.0, 0.0], 0.0);
        let (u2, _) = solve_poisson_activation_pair(&ActivationPairProblem { rhs: f, alpha: 0.5 }).unwrap();
        assert_eq!(u2.atoms()[0].a, -0.25);

        let zero = ShallowRep::new(1, Activation::Tanh, vec![Atom::new(1.0, vec![0.0], 0.5)]).unwrap();
        assert_eq!(solve_poisson_activation_pair(&ActivationPairProblem { rhs: zero, alpha: 0.5 }).unwrap_err(), Error::ConstantSource(0));
        let relu = single(Activation::Relu, 1.0, vec![1.0], 0.0);
        assert_eq!(solve_poisson_activation_pair(&ActivationPairProblem { rhs: relu, alpha: 0.5 }).unwrap_err(), Error::GrowthObstruction);
    }
}
