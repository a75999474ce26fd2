use std::f64::consts::PI;

use num_complex::Complex64;

use super::bessel::bessel01;
use crate::error::{invalid, Error, Result};
use crate::field::{Field, Grid, Sampler};
use crate::geometry::{norm, Geometry, Point};
use crate::spectral::{k_at, SpectralParam};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Closed-form test fields. Centers shift the singular point of the wave
/// kinds away from the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnalyticField {
    /// `e^{ik|x−c|} / (4π|x−c|)`
    SphericalWave3D { k: Complex64, center: Point },
    /// `H_0^{(1)}(k|x−c|)`, real `k > 0`
    HankelWave2D { k: f64, center: Point },
    /// `e^{ik d·x}` with unit `d`
    PlaneWave { k: Complex64, direction: Point },
    /// `e^{−|x−c|²/w²}`
    GaussianBump { width: f64, center: Point },
    /// Normal incidence on the plane `x_axis = 0`: `e^{ik1 s} + R e^{−ik1 s}`
    /// for `s < 0`, `T e^{ik2 s}` for `s ≥ 0`.
    TransmissionPlane1D { k1: Complex64, k2: Complex64, axis: usize },
}

impl AnalyticField {
    pub fn spherical(k: Complex64) -> Self {
        AnalyticField::SphericalWave3D { k, center: [0.0; 3] }
    }

    pub fn hankel(k: f64) -> Self {
        AnalyticField::HankelWave2D { k, center: [0.0; 3] }
    }

    pub fn gaussian(width: f64) -> Self {
        AnalyticField::GaussianBump { width, center: [0.0; 3] }
    }

    pub fn transmission(mu1: f64, mu2: f64, z: &SpectralParam, axis: usize) -> Result<Self> {
        Ok(AnalyticField::TransmissionPlane1D { k1: k_at(z, mu1)?, k2: k_at(z, mu2)?, axis })
    }

    /// Point where the field is singular, if any.
    pub fn singular_point(&self) -> Option<Point> {
        match *self {
            AnalyticField::SphericalWave3D { center, .. } | AnalyticField::HankelWave2D { center, .. } => Some(center),
            _ => None,
        }
    }

    pub fn eval(&self, x: &Point) -> Result<Complex64> {
        self.check(x)?;
        Ok(self.value_grad_unchecked(x).0)
    }

    pub fn eval_with_gradient(&self, x: &Point) -> Result<(Complex64, [Complex64; 3])> {
        self.check(x)?;
        Ok(self.value_grad_unchecked(x))
    }

    fn check(&self, x: &Point) -> Result<()> {
        if let Some(c) = self.singular_point() {
            if dist(x, &c) == 0.0 {
                return Err(Error::SingularPoint(x.to_vec()));
            }
        }
        Ok(())
    }

    fn value_grad_unchecked(&self, x: &Point) -> (Complex64, [Complex64; 3]) {
        let zero = Complex64::new(0.0, 0.0);
        match *self {
            AnalyticField::SphericalWave3D { k, center } => {
                let d = diff(x, &center);
                let r = norm(&d, 3);
                let u = (I * k * r).exp() / (4.0 * PI * r);
                let dr = u * (I * k - 1.0 / r);
                (u, std::array::from_fn(|j| dr * (d[j] / r)))
            }
            AnalyticField::HankelWave2D { k, center } => {
                let d = diff(x, &center);
                let r = norm(&d, 2);
                let b = bessel01(k * r);
                let dr = -k * b.h1();
                (b.h0(), [dr * (d[0] / r), dr * (d[1] / r), zero])
            }
            AnalyticField::PlaneWave { k, direction } => {
                let phase = direction[0] * x[0] + direction[1] * x[1] + direction[2] * x[2];
                let u = (I * k * phase).exp();
                (u, std::array::from_fn(|j| I * k * direction[j] * u))
            }
            AnalyticField::GaussianBump { width, center } => {
                let d = diff(x, &center);
                let w2 = width * width;
                let u = Complex64::new((-(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]) / w2).exp(), 0.0);
                (u, std::array::from_fn(|j| u * (-2.0 * d[j] / w2)))
            }
            AnalyticField::TransmissionPlane1D { k1, k2, axis } => {
                let (r, t) = reflection_transmission(k1, k2);
                let s = x[axis];
                let mut g = [zero; 3];
                let u = if s < 0.0 {
                    let (a, b) = ((I * k1 * s).exp(), (-I * k1 * s).exp() * r);
                    g[axis] = I * k1 * (a - b);
                    a + b
                } else {
                    let a = (I * k2 * s).exp() * t;
                    g[axis] = I * k2 * a;
                    a
                };
                (u, g)
            }
        }
    }

    /// `Δu`; the transmission field has no classical Laplacian across its plane.
    pub fn laplacian(&self, x: &Point, dim: usize) -> Result<Complex64> {
        self.check(x)?;
        let u = self.value_grad_unchecked(x).0;
        Ok(match *self {
            AnalyticField::SphericalWave3D { k, .. } => -k * k * u,
            AnalyticField::HankelWave2D { k, .. } => Complex64::new(-k * k, 0.0) * u,
            AnalyticField::PlaneWave { k, direction } => -k * k * norm(&direction, 3).powi(2) * u,
            AnalyticField::GaussianBump { width, center } => {
                let d = diff(x, &center);
                let w2 = width * width;
                let r2 = d[..dim].iter().map(|v| v * v).sum::<f64>();
                u * (4.0 * r2 / (w2 * w2) - 2.0 * dim as f64 / w2)
            }
            AnalyticField::TransmissionPlane1D { k1, k2, axis } => {
                let k = if x[axis] < 0.0 { k1 } else { k2 };
                -k * k * u
            }
        })
    }

    /// Grid samples; fails if the singular point is a node.
    pub fn sample(&self, grid: &Grid) -> Result<Field> {
        let mut v = Vec::with_capacity(grid.len());
        for i in 0..grid.len() {
            v.push(self.eval(&grid.point(i))?);
        }
        Field::from_values(*grid, v)
    }

    /// Exact node gradients, one field per axis.
    pub fn sample_gradient(&self, grid: &Grid) -> Result<Vec<Field>> {
        let mut comps = vec![Vec::with_capacity(grid.len()); grid.dim()];
        for i in 0..grid.len() {
            let (_, g) = self.eval_with_gradient(&grid.point(i))?;
            for (a, c) in comps.iter_mut().enumerate() {
                c.push(g[a]);
            }
        }
        comps.into_iter().map(|c| Field::from_values(*grid, c)).collect()
    }
}

/// `R = (k1 − k2)/(k1 + k2)`, `T = 2k1/(k1 + k2)`
pub(crate) fn reflection_transmission(k1: Complex64, k2: Complex64) -> (Complex64, Complex64) {
    ((k1 - k2) / (k1 + k2), 2.0 * k1 / (k1 + k2))
}

/// Dimension-agnostic sampler over an analytic field.
#[derive(Debug, Clone, Copy)]
pub struct AnalyticSampler {
    pub field: AnalyticField,
    pub dim: usize,
}

impl Sampler for AnalyticSampler {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &Point) -> Complex64 {
        self.field.value_grad_unchecked(x).0
    }

    fn value_grad(&self, x: &Point) -> (Complex64, [Complex64; 3]) {
        self.field.value_grad_unchecked(x)
    }
}

/// `(u*, f*)` on the grid with `f* = μ⁻¹(−Δu* − zμu*)`.
pub fn manufactured_pair(u_star: &AnalyticField, z: &SpectralParam, g: &Geometry, grid: &Grid) -> Result<(Field, Field)> {
    if g.dim() != grid.dim() {
        return Err(invalid("geometry and grid dimensions differ"));
    }
    if let Some(c) = u_star.singular_point() {
        let l = grid.half_width();
        if c[..grid.dim()].iter().all(|v| v.abs() <= l) {
            return Err(Error::SingularPoint(c[..grid.dim()].to_vec()));
        }
    }
    if matches!(u_star, AnalyticField::TransmissionPlane1D { .. }) {
        return Err(invalid("the transmission field is not twice differentiable across its plane"));
    }
    let zc = z.z();
    let mut u = Vec::with_capacity(grid.len());
    let mut f = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        let x = grid.point(i);
        let mu = g.mu(&x);
        let v = u_star.eval(&x)?;
        let lap = u_star.laplacian(&x, grid.dim())?;
        u.push(v);
        f.push(-lap / mu - zc * v);
    }
    Ok((Field::from_values(*grid, u)?, Field::from_values(*grid, f)?))
}

fn diff(x: &Point, c: &Point) -> Point {
    [x[0] - c[0], x[1] - c[1], x[2] - c[2]]
}

fn dist(x: &Point, c: &Point) -> f64 {
    let d = diff(x, c);
    (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{annulus_integral, second_derivative};

    #[test]
    fn spherical_wave_at_unit_radius() {
        let u = AnalyticField::spherical(Complex64::new(1.0, 0.0)).eval(&[1.0, 0.0, 0.0]).unwrap();
        assert!((u.norm() - 1.0 / (4.0 * PI)).abs() < 1e-15);
        assert!((u - I.exp() / (4.0 * PI)).norm() < 1e-15);
        assert!(AnalyticField::spherical(Complex64::new(1.0, 0.0)).eval(&[0.0; 3]).is_err());
    }

    #[test]
    fn hankel_value() {
        let u = AnalyticField::hankel(2.0).eval(&[0.3, 0.4, 0.0]).unwrap();
        assert!((u - Complex64::new(0.7651976865579665, 0.08825696421567697)).norm() < 1e-10);
    }

    #[test]
    fn plane_wave_unimodular() {
        let a = AnalyticField::PlaneWave { k: Complex64::new(1.7, 0.0), direction: [0.6, 0.8, 0.0] };
        for x in [[0.0, 0.0, 0.0], [3.0, -2.0, 1.0], [10.0, 5.0, -7.0]] {
            assert!((a.eval(&x).unwrap().norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn gradients_match_differences() {
        let fields = [
            AnalyticField::SphericalWave3D { k: Complex64::new(1.3, 0.2), center: [0.1, -0.2, 0.3] },
            AnalyticField::HankelWave2D { k: 1.1, center: [0.2, 0.1, 0.0] },
            AnalyticField::PlaneWave { k: Complex64::new(0.9, 0.1), direction: [0.0, 0.6, 0.8] },
            AnalyticField::GaussianBump { width: 1.3, center: [0.5, 0.0, -0.2] },
            AnalyticField::TransmissionPlane1D { k1: Complex64::new(1.0, 0.01), k2: Complex64::new(2.0, 0.02), axis: 0 },
        ];
        let x = [1.1, -0.7, 0.9];
        for f in fields {
            let (_, g) = f.eval_with_gradient(&x).unwrap();
            let dims = if matches!(f, AnalyticField::HankelWave2D { .. }) { 2 } else { 3 };
            for a in 0..dims {
                let e = 1e-6;
                let mut xp = x;
                let mut xm = x;
                xp[a] += e;
                xm[a] -= e;
                let fd = (f.eval(&xp).unwrap() - f.eval(&xm).unwrap()) / (2.0 * e);
                assert!((fd - g[a]).norm() < 1e-7 * (1.0 + fd.norm()), "{f:?} axis {a}");
            }
        }
    }

    #[test]
    fn laplacians_match_differences() {
        let fields = [
            (AnalyticField::SphericalWave3D { k: Complex64::new(1.3, 0.2), center: [0.1, -0.2, 0.3] }, 3),
            (AnalyticField::HankelWave2D { k: 1.1, center: [0.2, 0.1, 0.0] }, 2),
            (AnalyticField::GaussianBump { width: 1.3, center: [0.5, 0.0, -0.2] }, 3),
            (AnalyticField::GaussianBump { width: 0.8, center: [0.0; 3] }, 2),
        ];
        let x = [1.1, -0.7, 0.9];
        for (f, dim) in fields {
            let mut x = x;
            if dim == 2 {
                x[2] = 0.0;
            }
            let e = 1e-4;
            let mut lap = Complex64::new(0.0, 0.0);
            for a in 0..dim {
                let mut xp = x;
                let mut xm = x;
                xp[a] += e;
                xm[a] -= e;
                lap += (f.eval(&xp).unwrap() + f.eval(&xm).unwrap() - 2.0 * f.eval(&x).unwrap()) / (e * e);
            }
            let want = f.laplacian(&x, dim).unwrap();
            assert!((lap - want).norm() < 1e-5 * (1.0 + want.norm()), "{f:?}: {lap} vs {want}");
        }
    }

    #[test]
    fn manufactured_pairs() {
        let grid = Grid::new(2, 3.0, 17).unwrap();
        let geo = Geometry::homogeneous(2, 1.0).unwrap();
        let z = SpectralParam::new(2.0, 0.0).unwrap();
        let (u, f) = manufactured_pair(&AnalyticField::gaussian(1.0), &z, &geo, &grid).unwrap();
        assert!(u.values().iter().chain(f.values()).all(|v| v.im == 0.0));
        let zero = AnalyticField::GaussianBump { width: 1e-3, center: [100.0, 0.0, 0.0] };
        let (_, f0) = manufactured_pair(&zero, &z, &geo, &grid).unwrap();
        assert!(f0.is_zero());
        assert!(manufactured_pair(&AnalyticField::hankel(1.0), &z, &geo, &grid).is_err());
        let off = AnalyticField::HankelWave2D { k: 1.0, center: [10.0, 0.0, 0.0] };
        assert!(manufactured_pair(&off, &z, &geo, &grid).is_ok());
    }

    #[test]
    fn discrete_helmholtz_residual_is_second_order() {
        let k = Complex64::new(1.5, 0.0);
        let a = AnalyticField::spherical(k);
        let res = |n: usize| -> f64 {
            // even n keeps the origin off the node set
            let grid = Grid::new(3, 3.0, n).unwrap();
            let u = a.sample(&grid).unwrap();
            let d2: Vec<Field> = (0..3).map(|ax| second_derivative(&u, ax).unwrap()).collect();
            let r = Field::from_values(
                grid,
                (0..grid.len())
                    .map(|i| {
                        let lap: Complex64 = d2.iter().map(|d| d.values()[i]).sum();
                        (-lap - k * k * u.values()[i]).norm_sqr().into()
                    })
                    .collect(),
            )
            .unwrap();
            annulus_integral(&r, 1.0, 2.5).unwrap().re.sqrt()
        };
        let ratio = res(30) / res(60);
        let h_ratio = (59.0f64 / 29.0).powi(2);
        assert!((ratio / h_ratio - 1.0).abs() < 0.1, "{ratio}");
    }
}
