//! Geometric V-cycle for the damped operator `A(z ± iβ|z|)`, used as a
//! right preconditioner. Coarse levels are rediscretized; the coarsest one
//! is factored directly.

use num_complex::Complex64;

use super::csr::CsrMatrix;
use super::direct::Factorization;
use super::gmres::Preconditioner;
use super::{build_matrix, damped_shift, DiscreteOperator};
use crate::error::{invalid, Result};
use crate::field::Grid;

const COARSEST_N: usize = 17;
const COARSEST_MAX_NODES: usize = 60_000;
const OMEGA: f64 = 0.7;
const SWEEPS: usize = 2;

struct Level {
    grid: Grid,
    a: CsrMatrix,
    inv_diag: Vec<Complex64>,
}

pub(crate) struct ShiftedMultigrid {
    levels: Vec<Level>,
    coarse: Factorization,
}

impl ShiftedMultigrid {
    pub(crate) fn new(op: &DiscreteOperator, beta: f64) -> Result<Self> {
        let z = damped_shift(op.z(), beta)?;
        let mut grids = vec![*op.grid()];
        while grids.last().unwrap().n() > COARSEST_N {
            match grids.last().unwrap().coarsened() {
                Some(c) => grids.push(c),
                None => break,
            }
        }
        let coarsest = grids.pop().unwrap();
        if coarsest.len() > COARSEST_MAX_NODES {
            return Err(invalid(format!(
                "multigrid cannot coarsen n = {} below {} nodes; use n - 1 divisible by a power of two",
                op.grid().n(),
                coarsest.len()
            )));
        }
        let geometry = op.geometry();
        let mu_on = |g: &Grid| -> Vec<f64> { (0..g.len()).map(|i| geometry.mu(&g.point(i))).collect() };
        let mut levels = Vec::with_capacity(grids.len());
        for g in grids {
            let a = build_matrix(&g, &mu_on(&g), &z, op.closure())?;
            let inv_diag = a.diagonal().iter().map(|d| 1.0 / d).collect();
            levels.push(Level { grid: g, a, inv_diag });
        }
        let coarse = Factorization::new(&build_matrix(&coarsest, &mu_on(&coarsest), &z, op.closure())?)?;
        Ok(Self { levels, coarse })
    }

    fn vcycle(&self, l: usize, b: &[Complex64]) -> Vec<Complex64> {
        if l == self.levels.len() {
            return self.coarse.solve(b);
        }
        let lev = &self.levels[l];
        let mut x = vec![Complex64::new(0.0, 0.0); b.len()];
        let mut r = vec![Complex64::new(0.0, 0.0); b.len()];
        for _ in 0..SWEEPS {
            jacobi(lev, &mut x, b, &mut r);
        }
        lev.a.matvec_into(&x, &mut r);
        for (ri, bi) in r.iter_mut().zip(b) {
            *ri = bi - *ri;
        }
        let coarse_grid = lev.grid.coarsened().expect("level grids are coarsenable");
        let rc = restrict(&lev.grid, &coarse_grid, &r);
        let ec = self.vcycle(l + 1, &rc);
        prolong_add(&lev.grid, &coarse_grid, &ec, &mut x);
        for _ in 0..SWEEPS {
            jacobi(lev, &mut x, b, &mut r);
        }
        x
    }
}

impl Preconditioner for ShiftedMultigrid {
    fn apply(&self, r: &[Complex64]) -> Vec<Complex64> {
        self.vcycle(0, r)
    }
}

fn jacobi(lev: &Level, x: &mut [Complex64], b: &[Complex64], scratch: &mut [Complex64]) {
    lev.a.matvec_into(x, scratch);
    for i in 0..x.len() {
        x[i] += (b[i] - scratch[i]) * lev.inv_diag[i] * OMEGA;
    }
}

/// Full weighting, renormalized where the stencil leaves the box.
fn restrict(fine: &Grid, coarse: &Grid, r: &[Complex64]) -> Vec<Complex64> {
    let dim = fine.dim();
    let n = fine.n() as isize;
    let offsets = stencil_offsets(dim);
    (0..coarse.len())
        .map(|ic| {
            let mc = coarse.multi_index(ic);
            let mut acc = Complex64::new(0.0, 0.0);
            let mut wsum = 0.0;
            'o: for (o, w) in &offsets {
                let mut m = [0usize; 3];
                for a in 0..dim {
                    let v = 2 * mc[a] as isize + o[a];
                    if v < 0 || v >= n {
                        continue 'o;
                    }
                    m[a] = v as usize;
                }
                acc += r[fine.linear_index(&m)] * *w;
                wsum += w;
            }
            acc / wsum
        })
        .collect()
}

/// `x += P e` with multilinear interpolation.
fn prolong_add(fine: &Grid, coarse: &Grid, e: &[Complex64], x: &mut [Complex64]) {
    let dim = fine.dim();
    for (i, xi) in x.iter_mut().enumerate() {
        let m = fine.multi_index(i);
        let mut acc = Complex64::new(0.0, 0.0);
        for corner in 0..(1usize << dim) {
            let mut mc = [0usize; 3];
            let mut w = 1.0;
            let mut skip = false;
            for a in 0..dim {
                let hi = corner >> a & 1 == 1;
                if m[a] % 2 == 0 {
                    if hi {
                        skip = true;
                        break;
                    }
                    mc[a] = m[a] / 2;
                } else {
                    mc[a] = if hi { m[a] / 2 + 1 } else { m[a] / 2 };
                    w *= 0.5;
                }
            }
            if !skip {
                acc += e[coarse.linear_index(&mc)] * w;
            }
        }
        *xi += acc;
    }
}

fn stencil_offsets(dim: usize) -> Vec<([isize; 3], f64)> {
    let mut v = Vec::new();
    let count = 3usize.pow(dim as u32);
    for c in 0..count {
        let mut o = [0isize; 3];
        let mut w = 1.0;
        let mut rest = c;
        for oa in o.iter_mut().take(dim) {
            *oa = (rest % 3) as isize - 1;
            rest /= 3;
            w *= if *oa == 0 { 0.5 } else { 0.25 };
        }
        v.push((o, w));
    }
    v
}
