//! Central-difference PDE residuals of arbitrary point functions.

use crate::error::{OracleError, Result};
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Operator {
    /// `-Δu + λ²u - f`; `λ = 0` is Poisson
    Screened { lambda: f64 },
    /// `u_t - Δ_x u - f`, time is coordinate 0
    Heat,
    /// `u_t - Δ_x u + |∇_x u|² - f`, time is coordinate 0
    Hj,
}

/// A tensor grid with one step `h` on every axis. Axes written
/// `lo:hi[,lo:hi...];h[;cell]`; a single axis is broadcast to every dimension.
/// Vertex grids include both ends, cell grids use the midpoints `lo + (i+½)h`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub h: f64,
    pub cell_centered: bool,
}

impl GridSpec {
    pub fn cube(dim: usize, lo: f64, hi: f64, h: f64, cell_centered: bool) -> Self {
        Self { lo: vec![lo; dim], hi: vec![hi; dim], h, cell_centered }
    }

    pub fn parse(spec: &str, dim: usize) -> Result<Self> {
        let bad = || OracleError::InvalidArgument(format!("bad grid spec {spec:?}; expected lo:hi[,lo:hi...];h[;cell]"));
        let mut parts = spec.split(';');
        let axes: Vec<(f64, f64)> = parts
            .next()
            .ok_or_else(bad)?
            .split(',')
            .map(|ax| {
                let (a, b) = ax.split_once(':').ok_or_else(bad)?;
                Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
            })
            .collect::<Result<_>>()?;
        let h: f64 = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
        let cell_centered = match parts.next().map(str::trim) {
            None => false,
            Some("cell") => true,
            Some(_) => return Err(bad()),
        };
        let axes = match axes.len() {
            1 => vec![axes[0]; dim],
            n if n == dim => axes,
            n => return Err(OracleError::InvalidArgument(format!("grid has {n} axes, network has {dim} inputs"))),
        };
        let g = Self { lo: axes.iter().map(|a| a.0).collect(), hi: axes.iter().map(|a| a.1).collect(), h, cell_centered };
        g.axis_counts()?;
        Ok(g)
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    fn axis_counts(&self) -> Result<Vec<usize>> {
        if !(self.h > 0.0) || self.lo.len() != self.hi.len() || self.lo.is_empty() {
            return Err(OracleError::InvalidArgument("grid needs h > 0 and matching bounds".into()));
        }
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(&lo, &hi)| {
                let n = crate::grid::node_count(lo, hi, self.h)?;
                Ok(if self.cell_centered { n - 1 } else { n })
            })
            .collect()
    }

    pub fn points(&self) -> Result<Vec<Vec<f64>>> {
        let counts = self.axis_counts()?;
        let total: usize = counts.iter().product();
        let offset = if self.cell_centered { 0.5 } else { 0.0 };
        Ok((0..total)
            .map(|mut k| {
                counts
                    .iter()
                    .zip(&self.lo)
                    .map(|(&n, &lo)| {
                        let i = k % n;
                        k /= n;
                        lo + (i as f64 + offset) * self.h
                    })
                    .collect()
            })
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub max_abs: f64,
    pub location: Vec<f64>,
    pub points: usize,
}

fn residual_at(u: &(dyn Fn(&[f64]) -> f64 + Sync), op: Operator, x: &[f64], h: f64) -> f64 {
    let mut y = x.to_vec();
    let u0 = u(x);
    let mut shifted = |i: usize, d: f64| {
        y[i] = x[i] + d;
        let v = u(&y);
        y[i] = x[i];
        v
    };
    let space = match op {
        Operator::Screened { .. } => 0,
        Operator::Heat | Operator::Hj => 1,
    };
    let mut lap = 0.0;
    let mut grad_sq = 0.0;
    for i in space..x.len() {
        let (p, m) = (shifted(i, h), shifted(i, -h));
        lap += (p - 2.0 * u0 + m) / (h * h);
        let g = (p - m) / (2.0 * h);
        grad_sq += g * g;
    }
    match op {
        Operator::Screened { lambda } => -lap + lambda * lambda * u0,
        Operator::Heat => (shifted(0, h) - shifted(0, -h)) / (2.0 * h) - lap,
        Operator::Hj => (shifted(0, h) - shifted(0, -h)) / (2.0 * h) - lap + grad_sq,
    }
}

/// Largest `|residual|` over the grid nodes, with step `h` in every
/// difference quotient. `rhs` defaults to zero. Ties keep the first node.
pub fn residual_check(
    u: &(dyn Fn(&[f64]) -> f64 + Sync),
    rhs: Option<&(dyn Fn(&[f64]) -> f64 + Sync)>,
    op: Operator,
    grid: &GridSpec,
) -> Result<ResidualReport> {
    if let Operator::Screened { lambda } = op {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(OracleError::InvalidArgument("lambda must be finite and non-negative".into()));
        }
    }
    let pts = grid.points()?;
    let res: Vec<f64> = pts.par_iter().map(|x| (residual_at(u, op, x, grid.h) - rhs.map_or(0.0, |f| f(x))).abs()).collect();
    let (k, max_abs) = res.iter().enumerate().fold((0, f64::NEG_INFINITY), |(bk, bm), (k, &r)| if r > bm || r.is_nan() { (k, r) } else { (bk, bm) });
    Ok(ResidualReport { max_abs, location: pts[k].clone(), points: pts.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_specs() {
        let g = GridSpec::parse("-1:1;0.5", 2).unwrap();
        assert_eq!(g.points().unwrap().len(), 25);
        let g = GridSpec::parse("0.1:0.5,-1:1;0.1;cell", 2).unwrap();
        assert_eq!(g.points().unwrap().len(), 4 * 20);
        assert!(GridSpec::parse("0:1,0:1,0:1;0.1", 2).is_err());
        assert!(GridSpec::parse("0:1;0.3", 1).is_err());
        assert!(GridSpec::parse("0:1", 1).is_err());
    }

    #[test]
    fn exact_solutions_have_tiny_residual() {
        let g = GridSpec::cube(2, -1.0, 1.0, 0.1, false);
        let c = |_: &[f64]| 2.0;
        let r = residual_check(&c, Some(&|_: &[f64]| 8.0), Operator::Screened { lambda: 2.0 }, &g).unwrap();
        assert!(r.max_abs <= 1e-10);
        // e^{x+y} solves -Δu + 2u = 0
        let e = |x: &[f64]| (x[0] + x[1]).exp();
        let r = residual_check(&e, None, Operator::Screened { lambda: 2f64.sqrt() }, &g).unwrap();
        assert!(r.max_abs < 0.1 * 0.1 / 6.0 * 2f64.exp().powi(2) * 1.01);
        let heat = |x: &[f64]| (-x[0]).exp() * x[1].sin();
        let gt = GridSpec::parse("0.2:1,-1:1;0.1", 2).unwrap();
        assert!(residual_check(&heat, None, Operator::Heat, &gt).unwrap().max_abs < 0.01);
        // constants solve HJ
        assert!(residual_check(&c, None, Operator::Hj, &gt).unwrap().max_abs <= 1e-10);
    }

    #[test]
    fn wrong_lambda_is_detected() {
        let g = GridSpec::cube(1, -1.0, 1.0, 0.05, false);
        let e = |x: &[f64]| x[0].exp();
        let good = residual_check(&e, None, Operator::Screened { lambda: 1.0 }, &g).unwrap();
        let bad = residual_check(&e, None, Operator::Screened { lambda: 1.1 }, &g).unwrap();
        assert!(good.max_abs < 1e-3 && bad.max_abs > 0.07);
    }
}
