//! Adaptive Simpson quadrature and Richardson extrapolation.

use crate::error::{OracleError, Result};

fn simpson_step(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64, m: f64, fm: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) + simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson on `[a, b]` to absolute tolerance `tol`, started from 32
/// equal panels so narrow features are not stepped over.
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(b >= a) || !(tol > 0.0) {
        return Err(OracleError::InvalidArgument(format!("bad quadrature interval [{a}, {b}] or tol {tol}")));
    }
    if a == b {
        return Ok(0.0);
    }
    const PANELS: usize = 32;
    let step = (b - a) / PANELS as f64;
    let total = (0..PANELS)
        .map(|i| {
            let lo = a + i as f64 * step;
            let hi = if i + 1 == PANELS { b } else { lo + step };
            let m = 0.5 * (lo + hi);
            let (flo, fhi, fm) = (f(lo), f(hi), f(m));
            let whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi);
            simpson_step(&f, lo, flo, hi, fhi, m, fm, whole, tol / PANELS as f64, 40)
        })
        .sum();
    Ok(total)
}

/// Combines a value at step `h` with one at `h/2` for a method of order `p`.
pub fn richardson(coarse: f64, fine: f64, order: i32) -> f64 {
    let r = 2f64.powi(order);
    fine + (fine - coarse) / (r - 1.0)
}

/// `φ(s) = ∫ G(s - r) σ(r) dr` with the Green's function
/// `G(z) = exp(-λ|z|/|w|) / (2λ|w|)` of `-|w|² d²/ds² + λ²`. The integral is
/// split at `s` and at the given source kinks and truncated where `G < e^{-40}`.
pub fn screened_green_1d(source: impl Fn(f64) -> f64, kinks: &[f64], w_norm: f64, lambda: f64, s: f64, tol: f64) -> Result<f64> {
    if !(lambda > 0.0) || !(w_norm > 0.0) {
        return Err(OracleError::InvalidArgument("need lambda > 0 and |w| > 0".into()));
    }
    let c = lambda / w_norm;
    let reach = 40.0 / c;
    let mut cuts = vec![s - reach, s, s + reach];
    cuts.extend(kinks.iter().copied().filter(|k| (k - s).abs() < reach));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let integrand = |r: f64| (-c * (s - r).abs()).exp() / (2.0 * lambda * w_norm) * source(r);
    cuts.windows(2).map(|p| adaptive_simpson(integrand, p[0], p[1], tol / cuts.len() as f64)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_polynomials_and_kinks() {
        assert!((adaptive_simpson(|x| x * x * x, 0.0, 2.0, 1e-12).unwrap() - 4.0).abs() < 1e-12);
        let v = adaptive_simpson(|x: f64| (x - 0.3).abs(), -1.0, 1.0, 1e-10).unwrap();
        assert!((v - (1.3 * 1.3 + 0.7 * 0.7) / 2.0).abs() < 1e-9);
        let narrow = adaptive_simpson(|x: f64| (-1e4 * (x - 0.37) * (x - 0.37)).exp(), 0.0, 1.0, 1e-12).unwrap();
        assert!((narrow - (std::f64::consts::PI / 1e4).sqrt()).abs() < 1e-10);
    }

    #[test]
    fn richardson_removes_leading_term() {
        let f = |h: f64| 1.0 + 3.0 * h * h + h * h * h * h;
        assert!((richardson(f(0.1), f(0.05), 2) - 1.0).abs() < 3e-5);
    }

    #[test]
    fn green_matches_relu_closed_form() {
        // φ(s) = σ(s)/λ² + |w| e^{-λ|s|/|w|} / (2λ³)
        for (w, lam) in [(1.0, 1.0), (2.0, 0.5), (0.5, 2.0)] {
            for s in [-1.0f64, 0.0, 0.4, 3.0] {
                let exact = s.max(0.0) / (lam * lam) + w * (-lam * f64::abs(s) / w).exp() / (2.0 * lam * lam * lam);
                let v = screened_green_1d(|r: f64| r.max(0.0), &[0.0], w, lam, s, 1e-11).unwrap();
                assert!((v - exact).abs() < 1e-9 * (1.0 + exact.abs()), "{w} {lam} {s}: {v} vs {exact}");
            }
        }
    }
}
