//! Reduced solver for the harmonic extension of axisymmetric boundary data.
//!
//! For `g(y) = g(y₁)` write `u = g + ψ(y₁, ρ)`, `ρ = |(y₂, …, y_d)|`. Then
//! `ψ_11 + ψ_ρρ + (d−2)/ρ ψ_ρ = −g''(y₁)` on the half disk, `ψ = 0` on the
//! arc and `ψ_ρ = 0` on the axis. On the axis the radial part becomes
//! `(d−1) ψ_ρρ`. Nodes next to the arc use Shortley–Weller arms.

use crate::error::{CounterexampleError, Result};
use barron_core::{Activation, ShallowRep};
use barron_oracle::Grid2D;

type Func<'a> = Box<dyn Fn(f64) -> f64 + Send + Sync + 'a>;

/// `g`, the smooth part of `g''`, and the kinks `(location, slope jump)`.
pub struct AxisProfile<'a> {
    pub value: Func<'a>,
    pub smooth_second: Func<'a>,
    pub kinks: Vec<(f64, f64)>,
}

impl<'a> AxisProfile<'a> {
    pub fn relu() -> Self {
        Self { value: Box::new(|y| y.max(0.0)), smooth_second: Box::new(|_| 0.0), kinks: vec![(0.0, 1.0)] }
    }

    /// Profile of a relu network whose weights all point along `e₁`.
    pub fn from_rep(rep: &'a ShallowRep<f64>) -> Result<Self> {
        if rep.activation() != Activation::Relu {
            return Err(CounterexampleError::InvalidArgument("axisymmetric profiles need relu data".into()));
        }
        if rep.atoms().iter().any(|a| a.w[1..].iter().any(|&v| v != 0.0)) {
            return Err(CounterexampleError::InvalidArgument("boundary data must depend on y1 only".into()));
        }
        let kinks = rep.atoms().iter().filter(|a| a.w[0] != 0.0).map(|a| (-a.b / a.w[0], a.a * a.w[0].abs())).collect();
        let d = rep.input_dim();
        let value = move |y: f64| {
            let mut x = vec![0.0; d];
            x[0] = y;
            rep.eval_unchecked(&x)
        };
        Ok(Self { value: Box::new(value), smooth_second: Box::new(|_| 0.0), kinks })
    }
}

pub struct AxisymSolution<'a> {
    pub profile: AxisProfile<'a>,
    pub dim: usize,
    /// `ψ` on `[-1,1] × [0,1]`, zero outside the disk
    pub psi: Grid2D,
    pub sweeps: usize,
}

impl AxisymSolution<'_> {
    /// `g(x₁) + ψ(x₁, |x̂|)` with bilinear interpolation of `ψ`.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(barron_core::Error::DimensionMismatch { expected: self.dim, got: x.len() }.into());
        }
        let rho = x[1..].iter().map(|v| v * v).sum::<f64>().sqrt();
        if x[0] * x[0] + rho * rho > 1.0 + 1e-12 {
            return Err(CounterexampleError::OutsideDomain(format!("|x| > 1 at {x:?}")));
        }
        let psi = self.psi.interp(x[0], rho).ok_or_else(|| CounterexampleError::OutsideDomain(format!("{x:?}")))?;
        Ok((self.profile.value)(x[0]) + psi)
    }
}

struct Row {
    idx: usize,
    // west, east, south, north neighbour indices (None = boundary value 0)
    nb: [Option<usize>; 4],
    coef: [f64; 4],
    center: f64,
    rhs: f64,
}

/// Solves for `ψ` by SOR on the uniform grid of step `h` (1/h an integer).
pub fn reduced_axisymmetric_solve(profile: AxisProfile<'_>, dim: usize, h: f64) -> Result<AxisymSolution<'_>> {
    if dim < 2 {
        return Err(CounterexampleError::InvalidArgument(format!("dimension must be at least 2, got {dim}")));
    }
    let n = (1.0 / h).round() as usize;
    if n < 4 || ((n as f64) * h - 1.0).abs() > 1e-9 {
        return Err(CounterexampleError::InvalidArgument(format!("1/h must be an integer >= 4, got h = {h}")));
    }
    let (nx, ny) = (2 * n + 1, n + 1);
    let y1 = |i: usize| -1.0 + i as f64 * h;
    let y2 = |j: usize| j as f64 * h;
    let inside = |i: usize, j: usize| y1(i).powi(2) + y2(j).powi(2) < 1.0 - 1e-12;

    // -g'' on the columns: smooth part pointwise, each kink split linearly
    // between its two neighbouring columns
    let mut source: Vec<f64> = (0..nx).map(|i| -(profile.smooth_second)(y1(i))).collect();
    for &(c, jump) in &profile.kinks {
        let s = (c + 1.0) / h;
        if !(0.0..=(nx - 1) as f64).contains(&s) {
            continue;
        }
        let i = (s.floor() as usize).min(nx - 2);
        let th = s - i as f64;
        source[i] -= jump * (1.0 - th) / h;
        source[i + 1] -= jump * th / h;
    }

    let d2 = (dim - 2) as f64;
    let mut rows = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            if !inside(i, j) {
                continue;
            }
            let (a, b) = (y1(i), y2(j));
            let chord_x = (1.0 - b * b).sqrt();
            let chord_y = (1.0 - a * a).sqrt();
            let (hw, west) = if i > 0 && inside(i - 1, j) { (h, Some(j * nx + i - 1)) } else { (a + chord_x, None) };
            let (he, east) = if i + 1 < nx && inside(i + 1, j) { (h, Some(j * nx + i + 1)) } else { (chord_x - a, None) };
            let (hn, north) = if j + 1 < ny && inside(i, j + 1) { (h, Some((j + 1) * nx + i)) } else { (chord_y - b, None) };
            let cw = 2.0 / (hw * (hw + he));
            let ce = 2.0 / (he * (hw + he));
            let mut center = 2.0 / (hw * he);
            let (cs, cn, south);
            if j == 0 {
                cs = 0.0;
                south = None;
                cn = (dim - 1) as f64 * 2.0 / (hn * hn);
                center += cn;
            } else {
                let hs = h;
                let c = d2 / b;
                cs = 2.0 / (hs * (hs + hn)) - c * hn / (hs * (hs + hn));
                cn = 2.0 / (hn * (hs + hn)) + c * hs / (hn * (hs + hn));
                center += 2.0 / (hs * hn) - c * (hn - hs) / (hn * hs);
                south = Some((j - 1) * nx + i);
            }
            rows.push(Row { idx: j * nx + i, nb: [west, east, south, north], coef: [cw, ce, cs, cn], center, rhs: -source[i] });
        }
    }

    let mut psi = vec![0.0; nx * ny];
    let omega = 2.0 / (1.0 + (std::f64::consts::PI * h / 2.0).sin() * 2.0);
    let max_sweeps = 200_000;
    for sweep in 1..=max_sweeps {
        let mut change = 0.0f64;
        for r in &rows {
            let mut acc = r.rhs;
            for k in 0..4 {
                if let Some(q) = r.nb[k] {
                    acc += r.coef[k] * psi[q];
                }
            }
            let new = acc / r.center;
            let delta = omega * (new - psi[r.idx]);
            psi[r.idx] += delta;
            change = change.max(delta.abs());
        }
        if !change.is_finite() {
            return Err(CounterexampleError::InvalidArgument("non-finite value in axisymmetric sweep".into()));
        }
        let size = psi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if change <= 1e-12 * size.max(1e-6) {
            let psi = Grid2D::new(-1.0, 0.0, h, nx, ny, psi)?;
            return Ok(AxisymSolution { profile, dim, psi, sweeps: sweep });
        }
    }
    Err(CounterexampleError::NoConvergence(max_sweeps))
}
