//! Finite-difference discretization of `(−Δ − zμ)u = μf` on the box and the
//! linear solvers that apply the resolvent.
//!
//! All rows are scaled to `1/h²` units so that interior and closure rows mix
//! cleanly under multigrid restriction.

mod csr;
mod direct;
mod gmres;
mod multigrid;

pub use csr::CsrMatrix;

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::field::{Field, Grid};
use crate::geometry::Geometry;
use crate::spectral::{k_at, SpectralParam};

/// Largest system the direct path accepts.
pub const DIRECT_MAX_NODES: usize = 200_000;

/// Relative damping of the preconditioning operator, `z + iβ|z|`.
pub const PRECONDITIONER_SHIFT: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Direct,
    Iterative,
    /// Direct for 2-D and small 3-D systems, iterative otherwise.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Closure {
    /// `∂u/∂n − iku = 0` with a one-sided first-order difference.
    SommerfeldFirstOrder,
    Dirichlet,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveConfig {
    pub method: Method,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub closure: Closure,
    /// Krylov basis size between restarts.
    pub restart: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self { method: Method::Auto, tolerance: 1e-8, max_iterations: 2000, closure: Closure::SommerfeldFirstOrder, restart: 40 }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance <= 1e-2) {
            return Err(invalid(format!("tolerance {} outside (0, 1e-2]", self.tolerance)));
        }
        if self.max_iterations == 0 || self.restart == 0 {
            return Err(invalid("max_iterations and restart must be positive"));
        }
        Ok(())
    }

    fn resolve_method(&self, grid: &Grid) -> Result<Method> {
        match self.method {
            Method::Direct if grid.len() > DIRECT_MAX_NODES => {
                Err(invalid(format!("direct method limited to {DIRECT_MAX_NODES} nodes, grid has {}", grid.len())))
            }
            Method::Auto => {
                let small = grid.len() <= DIRECT_MAX_NODES && (grid.dim() == 2 || grid.n() <= 33);
                Ok(if small { Method::Direct } else { Method::Iterative })
            }
            m => Ok(m),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DiscreteOperator {
    grid: Grid,
    geometry: Geometry,
    z: SpectralParam,
    closure: Closure,
    mu: Vec<f64>,
    matrix: CsrMatrix,
}

impl DiscreteOperator {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn z(&self) -> &SpectralParam {
        &self.z
    }

    pub fn closure(&self) -> Closure {
        self.closure
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }

    /// Node values of μ.
    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    /// Right-hand side: `μf` on interior rows, boundary data on closure rows.
    pub fn rhs(&self, f: &Field, dirichlet: Option<&Field>) -> Result<Vec<Complex64>> {
        if f.grid() != &self.grid {
            return Err(invalid("source field lives on a different grid"));
        }
        let scale = 1.0 / (self.grid.h() * self.grid.h());
        Ok((0..self.grid.len())
            .map(|i| {
                if self.grid.is_boundary(i) {
                    dirichlet.map_or(Complex64::new(0.0, 0.0), |g| g.values()[i] * scale)
                } else {
                    f.values()[i] * self.mu[i]
                }
            })
            .collect())
    }
}

/// Builds `−Δ_h − z·diag(μ)` with closure rows on the box faces.
pub fn assemble(grid: &Grid, g: &Geometry, z: &SpectralParam, cfg: &SolveConfig) -> Result<DiscreteOperator> {
    cfg.validate()?;
    if grid.dim() != g.dim() {
        return Err(invalid("grid and geometry dimensions differ"));
    }
    if cfg.closure == Closure::SommerfeldFirstOrder && z.abs_z() == 0.0 {
        return Err(invalid("the Sommerfeld closure needs z != 0"));
    }
    let mu: Vec<f64> = (0..grid.len()).map(|i| g.mu(&grid.point(i))).collect();
    let matrix = build_matrix(grid, &mu, z, cfg.closure)?;
    Ok(DiscreteOperator { grid: *grid, geometry: *g, z: *z, closure: cfg.closure, mu, matrix })
}

pub(crate) fn build_matrix(grid: &Grid, mu: &[f64], z: &SpectralParam, closure: Closure) -> Result<CsrMatrix> {
    let dim = grid.dim();
    let n = grid.n();
    let h = grid.h();
    let inv_h2 = 1.0 / (h * h);
    let zc = z.z();
    let mut builder = csr::Builder::with_capacity(grid.len(), grid.len() * (2 * dim + 1));
    let mut row: Vec<(usize, Complex64)> = Vec::with_capacity(2 * dim + 1);
    for idx in 0..grid.len() {
        let m = grid.multi_index(idx);
        row.clear();
        let faces: Vec<usize> = (0..dim).filter(|&a| m[a] == 0 || m[a] == n - 1).collect();
        if faces.is_empty() {
            row.push((idx, Complex64::new(2.0 * dim as f64 * inv_h2, 0.0) - zc * mu[idx]));
            for a in 0..dim {
                let s = grid.stride(a);
                row.push((idx - s, Complex64::new(-inv_h2, 0.0)));
                row.push((idx + s, Complex64::new(-inv_h2, 0.0)));
            }
        } else {
            // every existing neighbor gets an entry (possibly zero) so the
            // pattern stays symmetric
            let diag = match closure {
                Closure::Dirichlet => Complex64::new(inv_h2, 0.0),
                Closure::SommerfeldFirstOrder => {
                    let k = k_at(z, mu[idx])?;
                    Complex64::new(inv_h2, 0.0) - Complex64::new(0.0, 1.0) * k / h
                }
            };
            row.push((idx, diag));
            let share = 1.0 / faces.len() as f64;
            for a in 0..dim {
                let s = grid.stride(a);
                for (ok, nb, inward) in [(m[a] > 0, idx.wrapping_sub(s), m[a] == n - 1), (m[a] < n - 1, idx + s, m[a] == 0)] {
                    if !ok {
                        continue;
                    }
                    let v = if closure == Closure::SommerfeldFirstOrder && inward && faces.contains(&a) {
                        -inv_h2 * share
                    } else {
                        0.0
                    };
                    row.push((nb, Complex64::new(v, 0.0)));
                }
            }
        }
        builder.push_row(&mut row);
    }
    Ok(builder.finish(grid.len()))
}

/// The preconditioning shift `z ± iβ|z|`, moved away from the real axis.
pub(crate) fn damped_shift(z: &SpectralParam, beta: f64) -> Result<SpectralParam> {
    let s = z.half_plane().sign();
    SpectralParam::with_half_plane(z.lambda(), z.eta() + s * beta * z.abs_z(), z.half_plane())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveReport {
    pub iterations: usize,
    pub final_residual: f64,
    pub wall_seconds: f64,
    pub method: Method,
}

/// `u = R(z)f`, i.e. the solution of `A u = μf` with homogeneous closure rows.
pub fn apply_resolvent(op: &DiscreteOperator, f: &Field, cfg: &SolveConfig) -> Result<(Field, SolveReport)> {
    solve_with(op, f, None, cfg)
}

/// Same system with inhomogeneous Dirichlet data taken from `trace` on the box faces.
pub fn apply_resolvent_dirichlet(op: &DiscreteOperator, f: &Field, trace: &Field, cfg: &SolveConfig) -> Result<(Field, SolveReport)> {
    if op.closure != Closure::Dirichlet {
        return Err(invalid("boundary traces require the Dirichlet closure"));
    }
    if trace.grid() != &op.grid {
        return Err(invalid("trace lives on a different grid"));
    }
    solve_with(op, f, Some(trace), cfg)
}

fn solve_with(op: &DiscreteOperator, f: &Field, trace: Option<&Field>, cfg: &SolveConfig) -> Result<(Field, SolveReport)> {
    cfg.validate()?;
    let start = Instant::now();
    let method = cfg.resolve_method(&op.grid)?;
    let b = op.rhs(f, trace)?;
    let b_norm = csr::norm(&b);
    if b_norm == 0.0 {
        let report = SolveReport { iterations: 0, final_residual: 0.0, wall_seconds: start.elapsed().as_secs_f64(), method };
        return Ok((Field::zeros(op.grid), report));
    }
    let (x, iterations) = match method {
        Method::Direct => (direct::solve(&op.matrix, &b)?, 1),
        Method::Iterative => {
            let pre = multigrid::ShiftedMultigrid::new(op, PRECONDITIONER_SHIFT)?;
            let out = gmres::solve(&op.matrix, &b, &pre, cfg)?;
            (out.x, out.iterations)
        }
        Method::Auto => unreachable!("resolved above"),
    };
    let residual = op.matrix.residual_norm(&x, &b) / b_norm;
    if !residual.is_finite() || residual > cfg.tolerance {
        return Err(Error::NotConverged { iterations, residual });
    }
    let u = Field::from_values(op.grid, x).map_err(|_| Error::NotConverged { iterations, residual: f64::NAN })?;
    Ok((u, SolveReport { iterations, final_residual: residual, wall_seconds: start.elapsed().as_secs_f64(), method }))
}

pub type SweepEntry = (SpectralParam, Result<(Field, SolveReport)>);

/// Independent solves at each `z`, in input order. Runs on the current rayon
/// pool; each solve owns its workspace.
pub fn resolvent_sweep(grid: &Grid, g: &Geometry, zs: &[SpectralParam], f: &Field, cfg: &SolveConfig) -> Result<Vec<SweepEntry>> {
    if zs.is_empty() {
        return Err(invalid("empty spectral parameter list"));
    }
    Ok(zs
        .par_iter()
        .map(|z| {
            let res = assemble(grid, g, z, cfg).and_then(|op| apply_resolvent(&op, f, cfg));
            (*z, res)
        })
        .collect())
}

pub const STATS_HEADER: &str = "z_re,z_im,n,iterations,final_residual,wall_seconds";

pub fn write_solver_stats(path: &Path, grid: &Grid, rows: &[(SpectralParam, SolveReport)]) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "{STATS_HEADER}")?;
    for (z, r) in rows {
        writeln!(w, "{:e},{:e},{},{},{:e},{:e}", z.lambda(), z.eta(), grid.n(), r.iterations, r.final_residual, r.wall_seconds)?;
    }
    w.flush()?;
    Ok(())
}
