use std::f64::consts::PI;

use num_complex::Complex64;

use super::diff::gradient_at_node;
use super::norms::node_weight;
use super::{Field, Grid};
use crate::error::{invalid, Result};
use crate::geometry::{norm, Point};

/// Pointwise access to a function and its gradient.
pub trait Sampler: Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &Point) -> Complex64;
    fn value_grad(&self, x: &Point) -> (Complex64, [Complex64; 3]);
    /// The grid behind the samples, if any; bounds where they are valid.
    fn grid(&self) -> Option<&Grid> {
        None
    }
}

/// Multilinear interpolation of node values and of central-difference
/// node gradients.
impl Sampler for Field {
    fn dim(&self) -> usize {
        Field::grid(self).dim()
    }

    fn grid(&self) -> Option<&Grid> {
        Some(Field::grid(self))
    }

    fn value(&self, x: &Point) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for_each_corner(Field::grid(self), x, |idx, w| acc += self.values()[idx] * w);
        acc
    }

    fn value_grad(&self, x: &Point) -> (Complex64, [Complex64; 3]) {
        let g = Field::grid(self);
        let mut v = Complex64::new(0.0, 0.0);
        let mut d = [Complex64::new(0.0, 0.0); 3];
        for_each_corner(g, x, |idx, w| {
            v += self.values()[idx] * w;
            for (a, da) in d.iter_mut().enumerate().take(g.dim()) {
                *da += gradient_at_node(g, self.values(), idx, a) * w;
            }
        });
        (v, d)
    }
}

fn for_each_corner(g: &Grid, x: &Point, mut f: impl FnMut(usize, f64)) {
    let h = g.h();
    let n = g.n();
    let mut base = [0usize; 3];
    let mut t = [0.0; 3];
    for a in 0..g.dim() {
        let s = (x[a] + g.half_width()) / h;
        let i = (s.floor().max(0.0) as usize).min(n - 2);
        base[a] = i;
        t[a] = s - i as f64;
    }
    for corner in 0..(1usize << g.dim()) {
        let mut w = 1.0;
        let mut m = base;
        for a in 0..g.dim() {
            if corner >> a & 1 == 1 {
                m[a] += 1;
                w *= t[a];
            } else {
                w *= 1.0 - t[a];
            }
        }
        if w != 0.0 {
            f(g.linear_index(&m), w);
        }
    }
}

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(m: usize) -> Vec<(f64, f64)> {
    let mut out = vec![(0.0, 0.0); m];
    for i in 0..(m + 1) / 2 {
        let mut x = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if m == 0 { 1.0 } else { p1 };
            dp = m as f64 * (x * p - p0) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[i] = (-x, w);
        out[m - 1 - i] = (x, w);
    }
    out
}

/// Points and weights of a product rule on the unit sphere `S^{N−1}`.
#[derive(Debug, Clone)]
pub struct SphereRule {
    pub directions: Vec<Point>,
    pub weights: Vec<f64>,
}

/// `N = 2`: `m` uniform angles. `N = 3`: `m` Gauss–Legendre nodes in `cos θ`
/// times `2m` uniform longitudes.
pub fn sphere_rule(dim: usize, m: usize) -> SphereRule {
    let mut directions = Vec::new();
    let mut weights = Vec::new();
    if dim == 2 {
        for j in 0..m {
            let th = 2.0 * PI * j as f64 / m as f64;
            let (s, c) = th.sin_cos();
            directions.push([c, s, 0.0]);
            weights.push(2.0 * PI / m as f64);
        }
    } else {
        let mp = 2 * m;
        for (ct, wt) in gauss_legendre(m) {
            let st = (1.0 - ct * ct).sqrt();
            for j in 0..mp {
                let ph = 2.0 * PI * j as f64 / mp as f64;
                let (sp, cp) = ph.sin_cos();
                directions.push([st * cp, st * sp, ct]);
                weights.push(wt * 2.0 * PI / mp as f64);
            }
        }
    }
    SphereRule { directions, weights }
}

pub(crate) const SPHERE_POINTS_2D: usize = 1024;
pub(crate) const SPHERE_POINTS_3D: usize = 64;

pub(crate) fn default_sphere_rule(dim: usize) -> SphereRule {
    sphere_rule(dim, if dim == 2 { SPHERE_POINTS_2D } else { SPHERE_POINTS_3D })
}

/// `∫_{S_R} u dS` with `u` interpolated from the grid.
pub fn sphere_integral(u: &Field, radius: f64) -> Result<Complex64> {
    let g = u.grid();
    if !(radius > 0.0) || radius >= g.half_width() {
        return Err(invalid(format!("sphere radius {radius} must lie in (0, L = {})", g.half_width())));
    }
    let rule = default_sphere_rule(g.dim());
    let scale = radius.powi(g.dim() as i32 - 1);
    let mut acc = Complex64::new(0.0, 0.0);
    for (d, w) in rule.directions.iter().zip(&rule.weights) {
        let x = [radius * d[0], radius * d[1], radius * d[2]];
        acc += u.value(&x) * *w;
    }
    Ok(acc * scale)
}

/// Node sum of `u` over `r < |x| < R` with the box quadrature weights.
pub fn annulus_integral(u: &Field, r: f64, big_r: f64) -> Result<Complex64> {
    let g = u.grid();
    if !(r >= 0.0) || !(r < big_r) || !(big_r < g.half_width() * (1.0 - 1e-9)) {
        return Err(invalid(format!("annulus ({r}, {big_r}) not inside the box of half-width {}", g.half_width())));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, v) in u.values().iter().enumerate() {
        let rho = norm(&g.point(i), g.dim());
        if rho > r && rho < big_r {
            acc += v * node_weight(g, i);
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        let rule = gauss_legendre(8);
        let s: f64 = rule.iter().map(|(_, w)| w).sum();
        assert!((s - 2.0).abs() < 1e-14);
        let m14: f64 = rule.iter().map(|(x, w)| w * x.powi(14)).sum();
        assert!((m14 - 2.0 / 15.0).abs() < 1e-14);
        let odd: f64 = rule.iter().map(|(x, w)| w * x.powi(7)).sum();
        assert!(odd.abs() < 1e-15);
    }

    #[test]
    fn sphere_areas() {
        let g3 = Grid::new(3, 2.0, 41).unwrap();
        let one = Field::from_fn(g3, |_| c(1.0)).unwrap();
        assert!((sphere_integral(&one, 1.0).unwrap().re - 4.0 * PI).abs() < 1e-3);
        let g2 = Grid::new(2, 3.0, 65).unwrap();
        let one = Field::from_fn(g2, |_| c(1.0)).unwrap();
        assert!((sphere_integral(&one, 2.0).unwrap().re - 4.0 * PI).abs() < 1e-3);
        let x1 = Field::from_fn(g2, |p| c(p[0])).unwrap();
        assert!(sphere_integral(&x1, 2.0).unwrap().norm() < 1e-12);
        assert!(sphere_integral(&x1, 3.0).is_err());
    }

    #[test]
    fn annulus_volumes() {
        let g2 = Grid::new(2, 2.0, 257).unwrap();
        let one = Field::from_fn(g2, |_| c(1.0)).unwrap();
        assert!((annulus_integral(&one, 0.0, 1.0).unwrap().re / PI - 1.0).abs() < 0.02);
        assert!(annulus_integral(&one, 1.0 - 1e-12, 1.0).unwrap().norm() < 1e-3);
        let g3 = Grid::new(3, 2.5, 81).unwrap();
        let one = Field::from_fn(g3, |_| c(1.0)).unwrap();
        let want = 4.0 * PI / 3.0 * 7.0;
        assert!((annulus_integral(&one, 1.0, 2.0).unwrap().re / want - 1.0).abs() < 0.02);
        assert!(annulus_integral(&one, 1.0, 2.5).is_err());
        assert!(annulus_integral(&one, 2.0, 1.0).is_err());
    }

    #[test]
    fn interpolation_exact_for_multilinear() {
        let g = Grid::new(3, 1.0, 9).unwrap();
        let u = Field::from_fn(g, |p| Complex64::new(1.0 + p[0] - 2.0 * p[1] * p[2], p[0] * p[1] * p[2])).unwrap();
        let x = [0.123, -0.456, 0.789];
        let want = Complex64::new(1.0 + x[0] - 2.0 * x[1] * x[2], x[0] * x[1] * x[2]);
        assert!((u.value(&x) - want).norm() < 1e-14);
        let (_, d) = u.value_grad(&x);
        assert!((d[0] - Complex64::new(1.0, x[1] * x[2])).norm() < 1e-12);
    }

    #[test]
    fn linearity() {
        let g = Grid::new(2, 3.0, 33).unwrap();
        let a = Field::from_fn(g, |p| Complex64::new(p[0].sin(), p[1])).unwrap();
        let b = Field::from_fn(g, |p| Complex64::new(p[1].cos(), -p[0] * p[1])).unwrap();
        let s = Complex64::new(0.3, -1.2);
        let comb = Field::from_values(g, a.values().iter().zip(b.values()).map(|(x, y)| x * s + y).collect()).unwrap();
        let lhs = sphere_integral(&comb, 2.0).unwrap();
        let rhs = sphere_integral(&a, 2.0).unwrap() * s + sphere_integral(&b, 2.0).unwrap();
        assert!((lhs - rhs).norm() < 1e-12);
        let lhs = annulus_integral(&comb, 0.5, 2.5).unwrap();
        let rhs = annulus_integral(&a, 0.5, 2.5).unwrap() * s + annulus_integral(&b, 0.5, 2.5).unwrap();
        assert!((lhs - rhs).norm() < 1e-12);
    }
}
