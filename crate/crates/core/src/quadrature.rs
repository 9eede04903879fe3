//! Quadrature rules used by the constructions. Everything here runs in `f64`.

use statrs::distribution::{ContinuousCDF, Normal};
use std::f64::consts::PI;

/// Nodes and weights of an `n`-point Gauss–Legendre rule on `[lo, hi]`.
pub fn gauss_legendre(n: usize, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
    if n == 1 {
        return (vec![mid], vec![2.0 * half]);
    }
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_n(z), p0 = P_{n-1}(z)
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = mid - half * z;
        x[n - 1 - i] = mid + half * z;
        w[i] = half * wi;
        w[n - 1 - i] = half * wi;
    }
    (x, w)
}

/// Physicists' Gauss–Hermite rule: `∫ e^{−x²} h(x) dx ≈ Σ wᵢ h(xᵢ)`.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let pim4 = PI.powf(-0.25);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    let m = n.div_ceil(2);
    let mut z = 0.0f64;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..200 {
            let (mut p1, mut p2) = (pim4, 0.0);
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    // ascending order
    x.reverse();
    w.reverse();
    (x, w)
}

/// Discrete approximation of a standard normal variable `Z`:
/// `E h(Z) ≈ Σ q_k h(z_k)` with `q_k ≥ 0`, `Σ q_k = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// `sup_y |Σ q_k σ(y + z_k) − E σ(y + Z)|` for ReLU `σ`. Multiplying by
    /// `|a|·s` bounds the error of one smoothed ReLU atom with spread `s`.
    pub unit_error: f64,
}

/// `E σ(y + Z) = yΦ(y) + φ(y)` for ReLU `σ`.
pub fn relu_gaussian_mean(y: f64) -> f64 {
    let n = Normal::standard();
    y * n.cdf(y) + (-0.5 * y * y).exp() / (2.0 * PI).sqrt()
}

impl GaussianRule {
    /// Gauss–Hermite rescaled to the standard normal.
    pub fn hermite(n: usize) -> Self {
        let (x, w) = gauss_hermite(n);
        let sp = PI.sqrt();
        let nodes: Vec<f64> = x.iter().map(|v| v * std::f64::consts::SQRT_2).collect();
        let weights: Vec<f64> = w.iter().map(|v| v / sp).collect();
        let mut rule = Self { nodes, weights, unit_error: 0.0 };
        rule.unit_error = rule.measure_relu_error();
        rule
    }

    /// Rule tailored to ReLU: `Σ q_k σ(y + z_k)` is the piecewise-linear
    /// interpolant of `y ↦ E σ(y + Z)` on the knots `−z_k`. The local
    /// interpolation error is `Δ²φ(y)/8`, equidistributed by knot density
    /// `∝ √φ`, i.e. equally spaced quantiles of `N(0, 2)`. The sup error is
    /// then about `5/(8n²)`. The interpolant of a convex function has
    /// nonnegative slope jumps, so the weights are a probability vector.
    pub fn relu_adapted(n: usize) -> Self {
        assert!(n >= 2);
        let normal = Normal::standard();
        let eps = 1e-8;
        let knots: Vec<f64> = (0..n).map(|k| std::f64::consts::SQRT_2 * normal.inverse_cdf(eps + (1.0 - 2.0 * eps) * k as f64 / (n - 1) as f64)).collect();
        let vals: Vec<f64> = knots.iter().map(|&y| relu_gaussian_mean(y)).collect();
        let mut slopes = Vec::with_capacity(n + 1);
        slopes.push(0.0);
        slopes.extend(knots.windows(2).zip(vals.windows(2)).map(|(k, v)| (v[1] - v[0]) / (k[1] - k[0])));
        slopes.push(1.0);
        let weights: Vec<f64> = slopes.windows(2).map(|s| (s[1] - s[0]).max(0.0)).collect();
        let total: f64 = weights.iter().sum();
        let weights: Vec<f64> = weights.iter().map(|q| q / total).collect();
        // kink of σ(y + z) at y = −z
        let nodes: Vec<f64> = knots.iter().map(|y| -y).collect();
        let mut rule = Self { nodes, weights, unit_error: 0.0 };
        rule.unit_error = rule.measure_relu_error();
        rule
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ q_k |z_k|`, the discrete version of `E|Z| = √(2/π)`.
    pub fn abs_moment(&self) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(z, q)| q * z.abs()).sum()
    }

    pub fn expect(&self, h: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&z, &q)| q * h(z)).sum()
    }

    fn measure_relu_error(&self) -> f64 {
        let relu = |v: f64| v.max(0.0);
        let n = 8001;
        (0..n)
            .map(|i| -8.0 + 16.0 * i as f64 / (n - 1) as f64)
            .chain(self.nodes.iter().map(|z| -z))
            .map(|y| (self.expect(|z| relu(y + z)) - relu_gaussian_mean(y)).abs())
            .fold(0.0, f64::max)
    }
}

const GK_NODES: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const GK_WK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const GK_WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let fc = f(c);
    let mut k = GK_WK[7] * fc;
    let mut g = GK_WG[3] * fc;
    for j in 0..7 {
        let x = h * GK_NODES[j];
        let s = f(c - x) + f(c + x);
        k += GK_WK[j] * s;
        if j % 2 == 1 {
            g += GK_WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss–Kronrod (7/15) quadrature with bisection, starting from
/// 16 equal pieces so that narrow features are not missed entirely.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let pieces = 16;
    let mut stack: Vec<(f64, f64, u32)> =
        (0..pieces).rev().map(|k| (a + (b - a) * k as f64 / pieces as f64, a + (b - a) * (k + 1) as f64 / pieces as f64, 0)).collect();
    let mut total = 0.0;
    let mut parts = Vec::new();
    while let Some((lo, hi, depth)) = stack.pop() {
        let (v, e) = gk15(&f, lo, hi);
        let share = abs_tol * (hi - lo) / (b - a);
        if e <= share.max(1e-15 * v.abs()) || depth >= 40 {
            parts.push((lo, v));
        } else {
            let m = 0.5 * (lo + hi);
            stack.push((m, hi, depth + 1));
            stack.push((lo, m, depth + 1));
        }
    }
    // fixed left-to-right summation order
    parts.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    for (_, v) in parts {
        total += v;
    }
    total
}
