//! Restarted GMRES with right preconditioning and modified Gram–Schmidt.

use num_complex::Complex64;

use super::csr::{dot, norm, CsrMatrix};
use super::SolveConfig;
use crate::error::{Error, Result};

pub(crate) trait Preconditioner {
    /// `x ≈ M⁻¹ r`
    fn apply(&self, r: &[Complex64]) -> Vec<Complex64>;
}

pub(crate) struct GmresOutput {
    pub x: Vec<Complex64>,
    pub iterations: usize,
}

pub(crate) fn solve(a: &CsrMatrix, b: &[Complex64], pre: &impl Preconditioner, cfg: &SolveConfig) -> Result<GmresOutput> {
    let n = b.len();
    let m = cfg.restart;
    let b_norm = norm(b);
    let zero = Complex64::new(0.0, 0.0);
    let mut x = vec![zero; n];
    let mut r = b.to_vec();
    let mut beta = b_norm;
    let mut iterations = 0;
    let mut w = vec![zero; n];

    while iterations < cfg.max_iterations {
        let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(m + 1);
        basis.push(r.iter().map(|v| v / beta).collect());
        // Hessenberg columns, already rotated
        let mut h: Vec<Vec<Complex64>> = Vec::with_capacity(m);
        let mut rot: Vec<(f64, Complex64)> = Vec::with_capacity(m);
        let mut g = vec![zero; m + 1];
        g[0] = Complex64::new(beta, 0.0);

        for j in 0..m {
            let zj = pre.apply(&basis[j]);
            a.matvec_into(&zj, &mut w);
            let mut col = vec![zero; j + 2];
            for (i, v) in basis.iter().enumerate() {
                let hij = dot(v, &w);
                for (wk, vk) in w.iter_mut().zip(v) {
                    *wk -= hij * vk;
                }
                col[i] = hij;
            }
            let h_next = norm(&w);
            col[j + 1] = Complex64::new(h_next, 0.0);
            for (i, &(c, s)) in rot.iter().enumerate() {
                let (p, q) = (col[i], col[i + 1]);
                col[i] = c * p + s * q;
                col[i + 1] = -s.conj() * p + c * q;
            }
            let (c, s) = givens(col[j], col[j + 1]);
            col[j] = c * col[j] + s * col[j + 1];
            col[j + 1] = zero;
            g[j + 1] = -s.conj() * g[j];
            g[j] *= c;
            rot.push((c, s));
            h.push(col);
            iterations += 1;

            let done = g[j + 1].norm() <= cfg.tolerance * b_norm * 0.5 || h_next == 0.0;
            if done || iterations >= cfg.max_iterations {
                break;
            }
            basis.push(w.iter().map(|v| v / h_next).collect());
        }

        // back substitution on the rotated triangle
        let k = h.len();
        let mut y = vec![zero; k];
        for i in (0..k).rev() {
            let mut s = g[i];
            for (jj, yj) in y.iter().enumerate().skip(i + 1) {
                s -= h[jj][i] * yj;
            }
            y[i] = s / h[i][i];
        }
        let mut vy = vec![zero; n];
        for (v, yi) in basis.iter().zip(&y) {
            for (acc, vk) in vy.iter_mut().zip(v) {
                *acc += yi * vk;
            }
        }
        let dx = pre.apply(&vy);
        for (xi, di) in x.iter_mut().zip(&dx) {
            *xi += di;
        }
        a.matvec_into(&x, &mut w);
        for ((ri, bi), wi) in r.iter_mut().zip(b).zip(&w) {
            *ri = bi - wi;
        }
        beta = norm(&r);
        if beta <= cfg.tolerance * b_norm {
            return Ok(GmresOutput { x, iterations });
        }
        if !beta.is_finite() {
            break;
        }
    }
    Err(Error::NotConverged { iterations, residual: beta / b_norm })
}

/// Rotation `(c, s)` with `[c s; −s̄ c]·[a; b] = [ρ; 0]`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let an = a.norm();
    if b.norm() == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if an == 0.0 {
        return (0.0, b.conj() / b.norm());
    }
    let d = an.hypot(b.norm());
    (an / d, (a / an) * b.conj() / d)
}
