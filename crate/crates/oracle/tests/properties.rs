use barron_oracle::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn thomas_solves_dominant_systems(n in 2usize..40, seed in any::<u64>()) {
        // deterministic band values from the seed
        let v = |k: u64| ((seed ^ k.wrapping_mul(0x9E37_79B9_7F4A_7C15)) % 1000) as f64 / 1000.0 - 0.5;
        let sub: Vec<f64> = (0..n).map(|i| v(3 * i as u64)).collect();
        let sup: Vec<f64> = (0..n).map(|i| v(3 * i as u64 + 1)).collect();
        let diag: Vec<f64> = (0..n).map(|i| 2.0 + v(3 * i as u64 + 2)).collect();
        let x: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let rhs: Vec<f64> = (0..n)
            .map(|i| {
                let mut r = diag[i] * x[i];
                if i > 0 { r += sub[i] * x[i - 1]; }
                if i + 1 < n { r += sup[i] * x[i + 1]; }
                r
            })
            .collect();
        let got = thomas(&sub, &diag, &sup, &rhs).unwrap();
        for (g, e) in got.iter().zip(&x) {
            prop_assert!((g - e).abs() < 1e-12);
        }
    }

    #[test]
    fn richardson_cancels_the_leading_term(exact in -10.0..10.0f64, c in -5.0..5.0f64, p in 1i32..5) {
        let h = 0.1f64;
        let v = |h: f64| exact + c * h.powi(p);
        prop_assert!((richardson(v(h), v(h / 2.0), p) - exact).abs() < 1e-12);
    }

    #[test]
    fn loglog_fit_recovers_power_laws(k in -3.0..3.0f64, c in 0.1..10.0f64) {
        let pts: Vec<(f64, f64)> = (0..6).map(|i| { let x = 2f64.powi(i); (x, c * x.powf(k)) }).collect();
        let (slope, icpt) = fit_loglog(&pts).unwrap();
        prop_assert!((slope - k).abs() < 1e-10);
        prop_assert!((icpt - c.ln()).abs() < 1e-10);
    }

    #[test]
    fn simpson_integrates_cubics(a in -3.0..0.0f64, b in 0.0..3.0f64, c3 in -2.0..2.0f64, c0 in -2.0..2.0f64) {
        let f = |x: f64| c3 * x * x * x + c0;
        let exact = c3 * (b.powi(4) - a.powi(4)) / 4.0 + c0 * (b - a);
        prop_assert!((adaptive_simpson(f, a, b, 1e-12).unwrap() - exact).abs() < 1e-10);
    }

    #[test]
    fn grid_interp_is_exact_for_lines(slope in -3.0..3.0f64, icpt in -3.0..3.0f64, x in -1.0..1.0f64) {
        let g = Grid1D::sample(-1.0, 1.0, 0.05, |s| slope * s + icpt).unwrap();
        prop_assert!((g.interp(x).unwrap() - (slope * x + icpt)).abs() < 1e-12);
    }

    /// Crank–Nicolson keeps the discrete maximum principle on smooth data.
    #[test]
    fn fd_heat_stays_within_data_bounds(a in 0.5..2.0f64, c in -1.0..1.0f64, t in 0.05..1.0f64) {
        let g = Grid1D::sample(-8.0, 8.0, 0.05, |x| (a * x + c).tanh()).unwrap();
        let (lo, hi) = g.values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
        let u = fd_heat_1d(&g, None, t, 0.01).unwrap();
        for v in &u.values {
            prop_assert!(*v >= lo - 1e-9 && *v <= hi + 1e-9);
        }
    }
}

#[test]
fn monte_carlo_is_seed_deterministic() {
    let f = |y: &[f64]| y[0].max(0.0);
    let a = heat_monte_carlo(f, 0.5, &[0.1], 10_000, 9).unwrap();
    let b = heat_monte_carlo(f, 0.5, &[0.1], 10_000, 9).unwrap();
    let c = heat_monte_carlo(f, 0.5, &[0.1], 10_000, 10).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.mean, c.mean);
}
