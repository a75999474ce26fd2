//! Uniform Cartesian grids on `[−L, L]^N`, complex grid functions, and the
//! quadratures and weighted norms built on them.

mod diff;
mod io;
mod norms;
mod profile;
mod quadrature;

pub use diff::{gradient, gradient_at_node, second_derivative};
pub use io::{read_rwf1, write_csv, write_rwf1};
pub use norms::{node_weight, starred_norm, sobolev_norm, vector_weighted_norm, weighted_norm, x_norm};
pub use profile::WeightProfile;
pub use quadrature::{annulus_integral, gauss_legendre, sphere_integral, sphere_rule, Sampler, SphereRule};

pub(crate) use norms::starred_norm_components;
pub(crate) use quadrature::default_sphere_rule;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::geometry::Point;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    dim: usize,
    half_width: f64,
    n: usize,
}

impl Grid {
    pub fn new(dim: usize, half_width: f64, n: usize) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(invalid(format!("grid dimension {dim} not in {{2, 3}}")));
        }
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(invalid("half-width must be positive"));
        }
        if n < 3 {
            return Err(invalid(format!("need at least 3 points per axis, got {n}")));
        }
        if (n as u64).pow(dim as u32) > u32::MAX as u64 {
            return Err(invalid("grid too large"));
        }
        Ok(Self { dim, half_width, n })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        2.0 * self.half_width / (self.n - 1) as f64
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coord(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.h()
    }

    /// Linear index stride of `axis` (axis 0 varies slowest).
    pub fn stride(&self, axis: usize) -> usize {
        self.n.pow((self.dim - 1 - axis) as u32)
    }

    pub fn multi_index(&self, idx: usize) -> [usize; 3] {
        let mut m = [0; 3];
        let mut rest = idx;
        for a in (0..self.dim).rev() {
            m[a] = rest % self.n;
            rest /= self.n;
        }
        m
    }

    pub fn linear_index(&self, m: &[usize; 3]) -> usize {
        (0..self.dim).fold(0, |acc, a| acc * self.n + m[a])
    }

    pub fn point(&self, idx: usize) -> Point {
        let m = self.multi_index(idx);
        let mut p = [0.0; 3];
        for a in 0..self.dim {
            p[a] = self.coord(m[a]);
        }
        p
    }

    pub fn is_boundary(&self, idx: usize) -> bool {
        let m = self.multi_index(idx);
        (0..self.dim).any(|a| m[a] == 0 || m[a] == self.n - 1)
    }

    /// Coarse grid with every other node, when `n − 1` is even.
    pub fn coarsened(&self) -> Option<Grid> {
        if (self.n - 1) % 2 == 0 && self.n >= 5 {
            Some(Grid { n: (self.n - 1) / 2 + 1, ..*self })
        } else {
            None
        }
    }

    pub fn same_as(&self, other: &Grid) -> bool {
        self == other
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<Complex64>,
}

impl Field {
    pub fn zeros(grid: Grid) -> Self {
        Self { grid, values: vec![Complex64::new(0.0, 0.0); grid.len()] }
    }

    pub fn from_values(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(invalid(format!("{} values for a grid of {} nodes", values.len(), grid.len())));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(invalid("field values must be finite"));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(&Point) -> Complex64) -> Result<Self> {
        let values = (0..grid.len()).map(|i| f(&grid.point(i))).collect();
        Self::from_values(grid, values)
    }

    pub(crate) fn from_values_unchecked(grid: Grid, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Field {
        Field { grid: self.grid, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn conj(&self) -> Field {
        self.map(|v| v.conj())
    }

    pub fn scale(&self, c: Complex64) -> Field {
        self.map(|v| v * c)
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.check_same_grid(other)?;
        Ok(Field {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn abs_sqr(&self) -> Field {
        self.map(|v| Complex64::new(v.norm_sqr(), 0.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.re == 0.0 && v.im == 0.0)
    }

    pub(crate) fn check_same_grid(&self, other: &Field) -> Result<()> {
        if self.grid != other.grid {
            return Err(invalid("fields live on different grids"));
        }
        Ok(())
    }

    /// Restriction onto a smaller box sharing this grid's spacing and nodes.
    pub fn restrict_to(&self, inner: &Grid) -> Result<Field> {
        let h = self.grid.h();
        if inner.dim != self.grid.dim || (inner.h() - h).abs() > 1e-12 * h {
            return Err(invalid("restriction needs equal spacing and dimension"));
        }
        let shift = (inner.half_width - self.grid.half_width) / h;
        let off = (-shift).round();
        if (off + shift).abs() > 1e-9 || off < 0.0 || inner.n + 2 * off as usize != self.grid.n {
            return Err(invalid("inner grid nodes are not a centered subset"));
        }
        let off = off as usize;
        let values = (0..inner.len())
            .map(|i| {
                let m = inner.multi_index(i);
                let mut mo = [0; 3];
                for a in 0..inner.dim {
                    mo[a] = m[a] + off;
                }
                self.values[self.grid.linear_index(&mo)]
            })
            .collect();
        Ok(Field { grid: *inner, values })
    }
}
