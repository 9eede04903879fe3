//! Finite-difference oracles: three-point screened ODE, Crank–Nicolson heat,
//! Cole–Hopf through the heat scheme, and a direct semi-implicit HJ scheme.

use crate::error::{OracleError, Result};
use crate::grid::Grid1D;

/// Solves the tridiagonal system `sub[i] x[i-1] + diag[i] x[i] + sup[i] x[i+1] = rhs[i]`.
/// `sub[0]` and `sup[n-1]` are ignored.
pub fn thomas(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if sub.len() != n || sup.len() != n || rhs.len() != n || n == 0 {
        return Err(OracleError::InvalidArgument("tridiagonal bands differ in length".into()));
    }
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut denom = diag[0];
    if denom == 0.0 {
        return Err(OracleError::Singular(0));
    }
    c[0] = sup[0] / denom;
    d[0] = rhs[0] / denom;
    for i in 1..n {
        denom = diag[i] - sub[i] * c[i - 1];
        if denom == 0.0 || !denom.is_finite() {
            return Err(OracleError::Singular(i));
        }
        c[i] = sup[i] / denom;
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / denom;
    }
    for i in (0..n - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    Ok(d)
}

/// Three-point scheme for `-|w|² φ'' + λ² φ = σ(s)` on `[lo, hi]`, with
/// Dirichlet values `σ(lo)/λ²`, `σ(hi)/λ²` (the far-field asymptote for
/// sources that are affine or flat near the ends).
pub fn fd_screened_1d(source: impl Fn(f64) -> f64, w_norm: f64, lambda: f64, lo: f64, hi: f64, h: f64) -> Result<Grid1D> {
    if !(lambda > 0.0) || !(w_norm > 0.0) {
        return Err(OracleError::InvalidArgument("need lambda > 0 and |w| > 0".into()));
    }
    let rhs_grid = Grid1D::sample(lo, hi, h, &source)?;
    let n = rhs_grid.len();
    let k = w_norm * w_norm / (h * h);
    let l2 = lambda * lambda;
    let mut sub = vec![-k; n];
    let mut diag = vec![2.0 * k + l2; n];
    let mut sup = vec![-k; n];
    let mut rhs = rhs_grid.values.clone();
    for i in [0, n - 1] {
        sub[i] = 0.0;
        sup[i] = 0.0;
        diag[i] = 1.0;
        rhs[i] /= l2;
    }
    let phi = thomas(&sub, &diag, &sup, &rhs)?;
    Grid1D::new(lo, h, phi)
}

type Source<'a> = Option<&'a (dyn Fn(f64, f64) -> f64 + Sync)>;

/// Crank–Nicolson for `u_t = u_xx + f(t, x)` on the grid of `u0`, started
/// with four backward-Euler half steps (Rannacher) to damp the data kinks.
/// End nodes satisfy `u_xx = 0`, exact for data and sources that are affine
/// in `x` near the ends.
pub fn fd_heat_1d(u0: &Grid1D, source: Source<'_>, t: f64, dt: f64) -> Result<Grid1D> {
    if !(t >= 0.0) || !(dt > 0.0) {
        return Err(OracleError::InvalidArgument(format!("need t >= 0 and dt > 0, got {t}, {dt}")));
    }
    let n = u0.len();
    let steps = (t / dt).ceil().max(1.0) as usize;
    let k = t / steps as f64;
    let f = |time: f64| -> Vec<f64> {
        match source {
            Some(f) => (0..n).map(|i| f(time, u0.x(i))).collect(),
            None => vec![0.0; n],
        }
    };
    let mut u = u0.values.clone();
    let mut time = 0.0;
    let mut f_now = f(0.0);
    let r = 1.0 / (u0.h * u0.h);
    // (theta = 1, four substeps of k/2) then (theta = 1/2, step k)
    let rannacher = if steps >= 2 { 4 } else { 0 };
    let plan = std::iter::repeat_n((1.0, 0.5 * k), rannacher).chain(std::iter::repeat_n((0.5, k), steps - rannacher / 2));
    for (theta, step) in plan {
        let f_next = f(time + step);
        let a = theta * step * r;
        let b = (1.0 - theta) * step * r;
        let mut sub = vec![-a; n];
        let mut diag = vec![1.0 + 2.0 * a; n];
        let mut sup = vec![-a; n];
        let mut rhs: Vec<f64> = (0..n)
            .map(|i| {
                let explicit = if i == 0 || i == n - 1 { 0.0 } else { b * (u[i - 1] - 2.0 * u[i] + u[i + 1]) };
                u[i] + explicit + step * ((1.0 - theta) * f_now[i] + theta * f_next[i])
            })
            .collect();
        for i in [0, n - 1] {
            sub[i] = 0.0;
            sup[i] = 0.0;
            diag[i] = 1.0;
        }
        // fold the known boundary values into the first and last interior rows
        rhs[1] += a * rhs[0];
        rhs[n - 2] += a * rhs[n - 1];
        sub[1] = 0.0;
        sup[n - 2] = 0.0;
        u = thomas(&sub, &diag, &sup, &rhs)?;
        f_now = f_next;
        time += step;
    }
    Grid1D::new(u0.lo, u0.h, u)
}

/// `u_t - u_xx + |u_x|² = 0` by Cole–Hopf: heat-step `exp(-u0)`, then `-log`.
pub fn fd_cole_hopf_1d(u0: &Grid1D, t: f64, dt: f64) -> Result<Grid1D> {
    let v0 = Grid1D::new(u0.lo, u0.h, u0.values.iter().map(|u| (-u).exp()).collect())?;
    let v = fd_heat_1d(&v0, None, t, dt)?;
    let u = v
        .nodes()
        .map(|(x, value)| if value > 0.0 { Ok(-value.ln()) } else { Err(OracleError::NonPositive { value, x }) })
        .collect::<Result<Vec<_>>>()?;
    Grid1D::new(u0.lo, u0.h, u)
}

/// Direct scheme for `u_t - u_xx + |u_x|² = 0`: implicit diffusion, explicit
/// central-difference Hamiltonian. First order in time; end nodes use
/// one-sided slopes and no diffusion.
pub fn hj_semi_implicit_1d(u0: &Grid1D, t: f64, dt: f64) -> Result<Grid1D> {
    if !(t >= 0.0) || !(dt > 0.0) {
        return Err(OracleError::InvalidArgument(format!("need t >= 0 and dt > 0, got {t}, {dt}")));
    }
    let n = u0.len();
    let h = u0.h;
    let steps = (t / dt).ceil().max(1.0) as usize;
    let k = t / steps as f64;
    let a = k / (h * h);
    let mut sub = vec![-a; n];
    let mut diag = vec![1.0 + 2.0 * a; n];
    let mut sup = vec![-a; n];
    for i in [0, n - 1] {
        sub[i] = 0.0;
        sup[i] = 0.0;
        diag[i] = 1.0;
    }
    let mut u = u0.values.clone();
    for _ in 0..steps {
        let rhs: Vec<f64> = (0..n)
            .map(|i| {
                let ux = if i == 0 {
                    (u[1] - u[0]) / h
                } else if i == n - 1 {
                    (u[n - 1] - u[n - 2]) / h
                } else {
                    (u[i + 1] - u[i - 1]) / (2.0 * h)
                };
                u[i] - k * ux * ux
            })
            .collect();
        u = thomas(&sub, &diag, &sup, &rhs)?;
    }
    Grid1D::new(u0.lo, u0.h, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::richardson;

    #[test]
    fn thomas_solves_small_system() {
        let x = thomas(&[0.0, 1.0, 1.0], &[4.0, 4.0, 4.0], &[1.0, 1.0, 0.0], &[5.0, 6.0, 5.0]).unwrap();
        for v in x {
            assert!((v - 1.0).abs() < 1e-14);
        }
        assert_eq!(thomas(&[0.0, 1.0], &[0.0, 1.0], &[1.0, 0.0], &[1.0, 1.0]), Err(OracleError::Singular(0)));
    }

    #[test]
    fn screened_constant_source() {
        let g = fd_screened_1d(|_| 3.0, 1.3, 0.7, -5.0, 5.0, 0.1).unwrap();
        for v in g.values {
            assert!((v - 3.0 / 0.49).abs() < 1e-12);
        }
    }

    #[test]
    fn screened_relu_at_kink_is_one_half() {
        let relu = |s: f64| s.max(0.0);
        let c = fd_screened_1d(relu, 1.0, 1.0, -30.0, 30.0, 0.02).unwrap();
        let f = fd_screened_1d(relu, 1.0, 1.0, -30.0, 30.0, 0.01).unwrap();
        let mid = |g: &Grid1D| g.values[g.len() / 2];
        let extrapolated = richardson(mid(&c), mid(&f), 2);
        assert!((extrapolated - 0.5).abs() < 1e-7, "{extrapolated}");
        assert!((mid(&f) - 0.5).abs() < (mid(&c) - 0.5).abs() / 3.5);
    }

    #[test]
    fn screened_second_order_on_manufactured_solution() {
        let (w, lam) = (0.8, 1.5);
        let phi = |s: f64| (-s * s).exp();
        let src = move |s: f64| (-w * w * (4.0 * s * s - 2.0) + lam * lam) * phi(s);
        let err = |h: f64| fd_screened_1d(src, w, lam, -10.0, 10.0, h).unwrap().nodes().fold(0.0f64, |m, (x, v)| m.max((v - phi(x)).abs()));
        let order = (err(0.04) / err(0.02)).log2();
        assert!(order >= 1.9, "order {order}");
    }

    #[test]
    fn heat_constant_and_linear_exact() {
        let c = Grid1D::sample(-2.0, 2.0, 0.1, |_| 1.5).unwrap();
        assert!(fd_heat_1d(&c, None, 0.7, 0.01).unwrap().values.iter().all(|v| (v - 1.5).abs() < 1e-12));
        let l = Grid1D::sample(-2.0, 2.0, 0.1, |x| 2.0 * x - 1.0).unwrap();
        let out = fd_heat_1d(&l, None, 0.7, 0.01).unwrap();
        assert!(out.nodes().all(|(x, v)| (v - (2.0 * x - 1.0)).abs() < 1e-10));
    }

    #[test]
    fn heat_second_order_on_manufactured_solution() {
        // u = e^{-t} sin x solves u_t = u_xx; the source e^{-t} x adds t-linear growth
        let exact = |t: f64, x: f64| (-t).exp() * x.sin() + (1.0 - (-t).exp()) * x;
        let f = |t: f64, x: f64| (-t).exp() * x;
        let err = |h: f64| {
            let u0 = Grid1D::sample(-std::f64::consts::PI, std::f64::consts::PI, h, |x| x.sin()).unwrap();
            fd_heat_1d(&u0, Some(&f), 1.0, h).unwrap().nodes().fold(0.0f64, |m, (x, v)| m.max((v - exact(1.0, x)).abs()))
        };
        let p = std::f64::consts::PI;
        let order = (err(p / 40.0) / err(p / 80.0)).log2();
        assert!(order >= 1.9, "order {order}");
    }

    #[test]
    fn cole_hopf_constant_and_schemes_agree() {
        let c = Grid1D::sample(-3.0, 3.0, 0.05, |_| 0.4).unwrap();
        assert!(fd_cole_hopf_1d(&c, 1.0, 0.01).unwrap().values.iter().all(|v| (v - 0.4).abs() < 1e-12));
        let u0 = |x: f64| 0.5 * (x.tanh() + 1.0) * (-0.3 * x * x).exp();
        let g = Grid1D::sample(-12.0, 12.0, 0.05, u0).unwrap();
        let ch = fd_cole_hopf_1d(&g, 0.5, 0.005).unwrap();
        let coarse = hj_semi_implicit_1d(&g, 0.5, 0.002).unwrap();
        let fine = hj_semi_implicit_1d(&g, 0.5, 0.001).unwrap();
        let worst = (0..g.len()).fold(0.0f64, |m, i| m.max((richardson(coarse.values[i], fine.values[i], 1) - ch.values[i]).abs()));
        assert!(worst <= 1e-4, "{worst}");
    }
}
