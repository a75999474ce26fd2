use super::diff::{gradient, second_derivative};
use super::{Field, Grid};
use crate::error::{invalid, Result};
use crate::geometry::{norm, Geometry};

/// Box quadrature weight of a node: `h^N`, halved once per face the node lies on.
pub fn node_weight(g: &Grid, idx: usize) -> f64 {
    let m = g.multi_index(idx);
    let mut w = g.h().powi(g.dim() as i32);
    for a in 0..g.dim() {
        if m[a] == 0 || m[a] == g.n() - 1 {
            w *= 0.5;
        }
    }
    w
}

fn radial_weight(g: &Grid, idx: usize, t: f64) -> f64 {
    if t == 0.0 {
        1.0
    } else {
        (1.0 + norm(&g.point(idx), g.dim())).powf(2.0 * t)
    }
}

/// `(∫ (1+|x|)^{2t} |u|² dx)^{1/2}` over the box.
pub fn weighted_norm(u: &Field, t: f64) -> f64 {
    vector_weighted_norm(std::slice::from_ref(u), t).unwrap_or(0.0)
}

/// Same as [`weighted_norm`] for the pointwise Euclidean norm of a vector field.
pub fn vector_weighted_norm(components: &[Field], t: f64) -> Result<f64> {
    let Some(first) = components.first() else {
        return Err(invalid("no components"));
    };
    let g = first.grid();
    for c in components {
        first.check_same_grid(c)?;
    }
    let mut acc = 0.0;
    for i in 0..g.len() {
        let s: f64 = components.iter().map(|c| c.values()[i].norm_sqr()).sum();
        if s != 0.0 {
            acc += node_weight(g, i) * radial_weight(g, i, t) * s;
        }
    }
    Ok(acc.sqrt())
}

/// `(∫ μ |u|² dx)^{1/2}`
pub fn x_norm(u: &Field, geometry: &Geometry) -> Result<f64> {
    let g = u.grid();
    if g.dim() != geometry.dim() {
        return Err(invalid("field and geometry dimensions differ"));
    }
    let mut acc = 0.0;
    for (i, v) in u.values().iter().enumerate() {
        acc += node_weight(g, i) * geometry.mu(&g.point(i)) * v.norm_sqr();
    }
    Ok(acc.sqrt())
}

/// Weighted `H^1` or `H^2` norm with finite-difference derivatives.
pub fn sobolev_norm(u: &Field, order: usize, t: f64) -> Result<f64> {
    if order != 1 && order != 2 {
        return Err(invalid(format!("Sobolev order {order} not in {{1, 2}}")));
    }
    let g = u.grid();
    if g.n() < 5 {
        return Err(invalid("grid too small for the difference stencils (n < 5)"));
    }
    let mut parts = vec![u.clone()];
    let grad = gradient(u);
    if order == 2 {
        for a in 0..g.dim() {
            parts.push(second_derivative(u, a)?);
            for b in a + 1..g.dim() {
                parts.push(gradient(&grad[a]).swap_remove(b));
            }
        }
    }
    parts.extend(grad);
    vector_weighted_norm(&parts, t)
}

/// `(∫_{B_1} |x||u|² + ∫_{|x|>1} (1+|x|)^{2t}|u|²)^{1/2}`, N = 2 only.
pub fn starred_norm(u: &Field, t: f64) -> Result<f64> {
    starred_norm_components(std::slice::from_ref(u), t)
}

pub(crate) fn starred_norm_components(components: &[Field], t: f64) -> Result<f64> {
    let Some(first) = components.first() else {
        return Err(invalid("no components"));
    };
    let g = first.grid();
    if g.dim() != 2 {
        return Err(invalid("starred norm is defined for N = 2 only"));
    }
    for c in components {
        first.check_same_grid(c)?;
    }
    let mut acc = 0.0;
    for i in 0..g.len() {
        let s: f64 = components.iter().map(|c| c.values()[i].norm_sqr()).sum();
        if s == 0.0 {
            continue;
        }
        let r = norm(&g.point(i), 2);
        let w = if r < 1.0 { r } else { (1.0 + r).powf(2.0 * t) };
        acc += node_weight(g, i) * w * s;
    }
    Ok(acc.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{GeometryKind, MediumPair};
    use num_complex::Complex64;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn constants_and_zero() {
        let g = Grid::new(2, 1.0, 129).unwrap();
        let one = Field::from_fn(g, |_| c(1.0)).unwrap();
        assert!((weighted_norm(&one, 0.0) - 2.0).abs() < 1e-3);
        let zero = Field::zeros(g);
        assert_eq!(weighted_norm(&zero, 1.0), 0.0);
        assert_eq!(sobolev_norm(&zero, 1, 0.0).unwrap(), 0.0);
        assert_eq!(sobolev_norm(&zero, 2, 0.0).unwrap(), 0.0);
        assert_eq!(starred_norm(&zero, 0.0).unwrap(), 0.0);
        let three = Field::from_fn(g, |_| c(3.0)).unwrap();
        assert!((sobolev_norm(&three, 1, 0.0).unwrap() - 6.0).abs() < 1e-10);
        assert!((sobolev_norm(&three, 2, 0.0).unwrap() - 6.0).abs() < 1e-8);
    }

    #[test]
    fn gaussian_3d() {
        let g = Grid::new(3, 6.0, 97).unwrap();
        let u = Field::from_fn(g, |p| c((-(p[0] * p[0] + p[1] * p[1] + p[2] * p[2])).exp())).unwrap();
        assert!((weighted_norm(&u, 0.0) - (PI / 2.0).powf(0.75)).abs() < 1e-3);
    }

    #[test]
    fn sine_sobolev() {
        let g = Grid::new(2, 1.0, 129).unwrap();
        let u = Field::from_fn(g, |p| c((PI * p[0]).sin())).unwrap();
        let want = (2.0 * (1.0 + PI * PI)).sqrt();
        assert!((sobolev_norm(&u, 1, 0.0).unwrap() / want - 1.0).abs() < 0.01);
        assert!(sobolev_norm(&u, 3, 0.0).is_err());
        assert!(sobolev_norm(&Field::zeros(Grid::new(2, 1.0, 4).unwrap()), 1, 0.0).is_err());
    }

    #[test]
    fn x_norm_strip() {
        let g = Grid::new(2, 1.0, 129).unwrap();
        let one = Field::from_fn(g, |_| c(1.0)).unwrap();
        let geo = Geometry::new(GeometryKind::HalfSpace { index: 0, offset: 0.0 }, 2, MediumPair::new(1.0, 4.0).unwrap()).unwrap();
        let want = (2.0 + 4.0 * 2.0f64).sqrt();
        // nodes on S carry μ2: an O(h) shift
        assert!((x_norm(&one, &geo).unwrap() - want).abs() < 2.0 * g.h());
        let homo = Geometry::homogeneous(2, 2.5).unwrap();
        assert!((x_norm(&one, &homo).unwrap() - 2.5f64.sqrt() * weighted_norm(&one, 0.0)).abs() < 1e-12);
    }

    #[test]
    fn starred_constant() {
        let g = Grid::new(2, 1.0, 513).unwrap();
        let one = Field::from_fn(g, |_| c(1.0)).unwrap();
        let want = (2.0 * PI / 3.0 + 4.0 - PI).sqrt();
        assert!((starred_norm(&one, 0.0).unwrap() - want).abs() < 1e-2);
        let inner = Field::from_fn(g, |p| c(if p[0].hypot(p[1]) < 0.5 { 1.0 } else { 0.0 })).unwrap();
        let moment = Field::from_fn(g, |p| c(if p[0].hypot(p[1]) < 0.5 { p[0].hypot(p[1]).sqrt() } else { 0.0 })).unwrap();
        assert!((starred_norm(&inner, 0.7).unwrap() - weighted_norm(&moment, 0.0)).abs() < 1e-12);
        assert!(starred_norm(&Field::zeros(Grid::new(3, 1.0, 5).unwrap()), 0.0).is_err());
    }

    #[test]
    fn richardson_second_order() {
        let u_at = |n: usize| Field::from_fn(Grid::new(2, 1.0, n).unwrap(), |p| c((p[0] + 0.5 * p[1]).exp())).unwrap();
        let (a, b, d) = (u_at(17), u_at(33), u_at(65));
        for f in [
            |u: &Field| weighted_norm(u, 0.0),
            |u: &Field| weighted_norm(u, 0.75),
            |u: &Field| sobolev_norm(u, 1, -0.5).unwrap(),
            |u: &Field| sobolev_norm(u, 2, 0.0).unwrap(),
        ] {
            let ratio = (f(&a) - f(&b)) / (f(&b) - f(&d));
            assert!(ratio > 3.5 && ratio < 4.5, "{ratio}");
        }
    }

    proptest! {
        #[test]
        fn nondecreasing_in_t(t0 in -2.0f64..2.0, dt in 0.0f64..2.0, seed in 0u64..1000) {
            let g = Grid::new(2, 2.0, 17).unwrap();
            let s = seed as f64;
            let u = Field::from_fn(g, |p| Complex64::new((p[0] * s).sin(), (p[1] + s).cos())).unwrap();
            prop_assert!(weighted_norm(&u, t0 + dt) >= weighted_norm(&u, t0) * (1.0 - 1e-14));
        }

        #[test]
        fn x_norm_bounds(mu1 in 0.1f64..10.0, mu2 in 0.1f64..10.0, seed in 0u64..1000) {
            prop_assume!((mu1 - mu2).abs() > 1e-9);
            let geo = Geometry::new(GeometryKind::Ball { radius: 1.3 }, 2, MediumPair::new(mu1, mu2).unwrap()).unwrap();
            let g = Grid::new(2, 2.0, 17).unwrap();
            let s = seed as f64;
            let u = Field::from_fn(g, |p| Complex64::new((p[0] * s).sin(), (p[1] * s).cos())).unwrap();
            let w = weighted_norm(&u, 0.0);
            let x = x_norm(&u, &geo).unwrap();
            let m = geo.media();
            prop_assert!(x >= m.mu_min().sqrt() * w * (1.0 - 1e-12));
            prop_assert!(x <= m.mu_max().sqrt() * w * (1.0 + 1e-12));
        }
    }
}
