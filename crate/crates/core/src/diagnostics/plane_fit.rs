use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::field::Field;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Least-squares amplitudes of `A e^{ik1 s} + B e^{−ik1 s}` before the plane
/// `s = offset` and `C e^{ik2 s}` after it, along the grid line through the
/// middle of the box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneFit {
    pub incident: Complex64,
    pub reflected: Complex64,
    pub transmitted: Complex64,
    /// `B/A`
    pub reflection: Complex64,
    /// `C/A`
    pub transmission: Complex64,
    /// Relative RMS misfit of both fits.
    pub misfit: f64,
}

pub fn plane_wave_fit(u: &Field, axis: usize, offset: f64, k1: Complex64, k2: Complex64) -> Result<PlaneFit> {
    let grid = *u.grid();
    if axis >= grid.dim() {
        return Err(invalid(format!("axis {axis} out of range")));
    }
    let mut m = [grid.n() / 2; 3];
    let mut left = Vec::new();
    let mut right = Vec::new();
    for i in 0..grid.n() {
        m[axis] = i;
        let s = grid.coord(i) - offset;
        let v = u.values()[grid.linear_index(&m)];
        if s < 0.0 {
            left.push((s, v));
        } else if s > 0.0 {
            right.push((s, v));
        }
    }
    if left.len() < 2 || right.is_empty() {
        return Err(invalid("the interface leaves too few samples on one side"));
    }

    // 2×2 normal equations for (A, B)
    let (mut g11, mut g12, mut g22) = (0.0, Complex64::new(0.0, 0.0), 0.0);
    let (mut r1, mut r2) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for &(s, v) in &left {
        let (e1, e2) = ((I * k1 * s).exp(), (-I * k1 * s).exp());
        g11 += e1.norm_sqr();
        g12 += e1.conj() * e2;
        g22 += e2.norm_sqr();
        r1 += e1.conj() * v;
        r2 += e2.conj() * v;
    }
    let det = g11 * g22 - g12.norm_sqr();
    if !(det > 1e-12 * g11 * g22) {
        return Err(invalid("incident and reflected waves are indistinguishable on this line"));
    }
    let a = (r1 * g22 - g12 * r2) / det;
    let b = (r2 * g11 - g12.conj() * r1) / det;

    let (mut num, mut den) = (Complex64::new(0.0, 0.0), 0.0);
    for &(s, v) in &right {
        let e = (I * k2 * s).exp();
        num += e.conj() * v;
        den += e.norm_sqr();
    }
    let c = num / den;

    let mut err = 0.0;
    let mut total = 0.0;
    for &(s, v) in &left {
        err += (v - a * (I * k1 * s).exp() - b * (-I * k1 * s).exp()).norm_sqr();
        total += v.norm_sqr();
    }
    for &(s, v) in &right {
        err += (v - c * (I * k2 * s).exp()).norm_sqr();
        total += v.norm_sqr();
    }
    Ok(PlaneFit {
        incident: a,
        reflected: b,
        transmitted: c,
        reflection: b / a,
        transmission: c / a,
        misfit: (err / total).sqrt(),
    })
}
