//! Uniform 1D and 2D node grids.

use crate::error::{OracleError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    pub lo: f64,
    pub h: f64,
    pub values: Vec<f64>,
}

impl Grid1D {
    pub fn new(lo: f64, h: f64, values: Vec<f64>) -> Result<Self> {
        if !(h > 0.0) || values.len() < 2 {
            return Err(OracleError::InvalidArgument(format!("grid needs h > 0 and two nodes, got h = {h}, n = {}", values.len())));
        }
        Ok(Self { lo, h, values })
    }

    /// Nodes `lo, lo + h, ..., hi`; `(hi - lo) / h` must be an integer.
    pub fn sample(lo: f64, hi: f64, h: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        let n = node_count(lo, hi, h)?;
        Self::new(lo, h, (0..n).map(|i| f(lo + i as f64 * h)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn x(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.h
    }

    pub fn hi(&self) -> f64 {
        self.x(self.len() - 1)
    }

    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values.iter().enumerate().map(|(i, &v)| (self.x(i), v))
    }

    /// Piecewise-linear interpolation; `None` outside the grid.
    pub fn interp(&self, x: f64) -> Option<f64> {
        let s = (x - self.lo) / self.h;
        if s < -1e-9 || s > (self.len() - 1) as f64 + 1e-9 {
            return None;
        }
        let i = (s.floor().max(0.0) as usize).min(self.len() - 2);
        let th = s - i as f64;
        Some((1.0 - th) * self.values[i] + th * self.values[i + 1])
    }

    /// The coarse-grid values recovered from a grid refined by `factor`.
    pub fn restrict(&self, factor: usize) -> Result<Self> {
        if factor == 0 || (self.len() - 1) % factor != 0 {
            return Err(OracleError::InvalidArgument(format!("cannot restrict {} nodes by {factor}", self.len())));
        }
        Self::new(self.lo, self.h * factor as f64, self.values.iter().step_by(factor).copied().collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

pub(crate) fn node_count(lo: f64, hi: f64, h: f64) -> Result<usize> {
    if !(h > 0.0) || !(hi > lo) {
        return Err(OracleError::InvalidArgument(format!("bad grid [{lo}, {hi}] with h = {h}")));
    }
    let cells = (hi - lo) / h;
    let n = cells.round();
    if (cells - n).abs() > 1e-6 * n.max(1.0) {
        return Err(OracleError::InvalidArgument(format!("h = {h} does not divide [{lo}, {hi}]")));
    }
    Ok(n as usize + 1)
}

/// Row-major values on `x0 + i h`, `y0 + j h`, `i < nx`, `j < ny`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2D {
    pub x0: f64,
    pub y0: f64,
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
}

impl Grid2D {
    pub fn new(x0: f64, y0: f64, h: f64, nx: usize, ny: usize, values: Vec<f64>) -> Result<Self> {
        if !(h > 0.0) || nx < 2 || ny < 2 || values.len() != nx * ny {
            return Err(OracleError::InvalidArgument("inconsistent 2D grid".into()));
        }
        Ok(Self { x0, y0, h, nx, ny, values })
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    pub fn point(&self, i: usize, j: usize) -> (f64, f64) {
        (self.x0 + i as f64 * self.h, self.y0 + j as f64 * self.h)
    }

    /// Bilinear interpolation; `None` outside the grid.
    pub fn interp(&self, x: f64, y: f64) -> Option<f64> {
        let sx = (x - self.x0) / self.h;
        let sy = (y - self.y0) / self.h;
        let eps = 1e-9;
        if sx < -eps || sy < -eps || sx > (self.nx - 1) as f64 + eps || sy > (self.ny - 1) as f64 + eps {
            return None;
        }
        let i = (sx.floor().max(0.0) as usize).min(self.nx - 2);
        let j = (sy.floor().max(0.0) as usize).min(self.ny - 2);
        let (tx, ty) = (sx - i as f64, sy - j as f64);
        Some(
            (1.0 - tx) * (1.0 - ty) * self.at(i, j)
                + tx * (1.0 - ty) * self.at(i + 1, j)
                + (1.0 - tx) * ty * self.at(i, j + 1)
                + tx * ty * self.at(i + 1, j + 1),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_and_interp() {
        let g = Grid1D::sample(-1.0, 1.0, 0.25, |x| 2.0 * x + 1.0).unwrap();
        assert_eq!(g.len(), 9);
        assert!((g.interp(0.3).unwrap() - 1.6).abs() < 1e-14);
        assert!(g.interp(1.5).is_none());
        assert_eq!(g.restrict(2).unwrap().len(), 5);
        assert!(Grid1D::sample(0.0, 1.0, 0.3, |x| x).is_err());
    }

    #[test]
    fn bilinear_is_exact_on_bilinear() {
        let (nx, ny) = (5, 4);
        let vals = (0..ny).flat_map(|j| (0..nx).map(move |i| (i as f64 * 0.5) * (j as f64 * 0.5) + i as f64)).collect();
        let g = Grid2D::new(0.0, 0.0, 0.5, nx, ny, vals).unwrap();
        let (x, y) = (1.3, 0.7);
        assert!((g.interp(x, y).unwrap() - (x * y + 2.0 * x)).abs() < 1e-12);
    }
}
