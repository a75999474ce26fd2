use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::field::{annulus_integral, default_sphere_rule, gradient, Field, Sampler};
use crate::geometry::{norm, Geometry, Point};
use crate::spectral::{k_at, HalfPlane, SpectralParam};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Which wavenumber enters the radiation operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadiationVariant {
    /// `k(x, z)` with the tagged branch.
    SignedK(SpectralParam),
    /// `+√(λμ)`, the outgoing limit.
    PlusLimit(f64),
    /// `−√(λμ)`, the incoming limit.
    MinusLimit(f64),
}

impl RadiationVariant {
    pub fn k(&self, mu: f64) -> Result<Complex64> {
        match *self {
            RadiationVariant::SignedK(z) => k_at(&z, mu),
            RadiationVariant::PlusLimit(l) | RadiationVariant::MinusLimit(l) => {
                if !(l >= 0.0) || !l.is_finite() {
                    return Err(invalid(format!("lambda must be finite and non-negative, got {l}")));
                }
                // same rounding as the branch root √μ·√λ on the real axis
                let k = mu.sqrt() * l.sqrt();
                Ok(Complex64::new(if matches!(self, RadiationVariant::PlusLimit(_)) { k } else { -k }, 0.0))
            }
        }
    }

    /// Sign of the limit for a half-plane tag at real `lambda`.
    pub fn limit(lambda: f64, side: HalfPlane) -> Self {
        match side {
            HalfPlane::Plus => RadiationVariant::PlusLimit(lambda),
            HalfPlane::Minus => RadiationVariant::MinusLimit(lambda),
        }
    }
}

/// Node values of `𝒟u` and `𝒟_r u`. Nodes with `|x| ≤ h` are excluded and
/// hold zeros.
#[derive(Debug, Clone)]
pub struct RadiationField {
    pub components: Vec<Field>,
    pub radial: Field,
    pub excluded: Vec<bool>,
    pub variant: RadiationVariant,
}

/// `P = ∇u + ((N−1)/(2r)) x̃ u`, `𝒟 = P − ik x̃ u` and their radial parts at one point.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PointRadiation {
    pub p: [Complex64; 3],
    pub d: [Complex64; 3],
    pub p_r: Complex64,
    pub d_r: Complex64,
}

impl PointRadiation {
    pub(crate) fn new(x: &Point, dim: usize, u: Complex64, grad: &[Complex64; 3], k: Complex64) -> Self {
        let r = norm(x, dim);
        let zero = Complex64::new(0.0, 0.0);
        let mut out = PointRadiation { p: [zero; 3], d: [zero; 3], p_r: zero, d_r: zero };
        let c = (dim as f64 - 1.0) / (2.0 * r);
        for j in 0..dim {
            let xt = x[j] / r;
            out.p[j] = grad[j] + c * xt * u;
            out.d[j] = out.p[j] - I * k * xt * u;
            out.p_r += out.p[j] * xt;
            out.d_r += out.d[j] * xt;
        }
        out
    }

    pub(crate) fn d_sqr(&self) -> f64 {
        self.d.iter().map(|v| v.norm_sqr()).sum()
    }

    pub(crate) fn p_sqr(&self) -> f64 {
        self.p.iter().map(|v| v.norm_sqr()).sum()
    }
}

/// `𝒟u` with central-difference gradients.
pub fn radiation_term(u: &Field, g: &Geometry, variant: RadiationVariant) -> Result<RadiationField> {
    radiation_term_with_gradient(u, &gradient(u), g, variant)
}

/// `𝒟u` with supplied node gradients, e.g. exact ones for an injected field.
pub fn radiation_term_with_gradient(u: &Field, grad: &[Field], g: &Geometry, variant: RadiationVariant) -> Result<RadiationField> {
    let grid = *u.grid();
    let dim = grid.dim();
    if g.dim() != dim || grad.len() != dim {
        return Err(invalid("field, gradient and geometry dimensions differ"));
    }
    for c in grad {
        u.check_same_grid(c)?;
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut comps = vec![vec![zero; grid.len()]; dim];
    let mut radial = vec![zero; grid.len()];
    let mut excluded = vec![false; grid.len()];
    for i in 0..grid.len() {
        let x = grid.point(i);
        if norm(&x, dim) <= grid.h() {
            excluded[i] = true;
            continue;
        }
        let mut gv = [zero; 3];
        for (a, c) in grad.iter().enumerate() {
            gv[a] = c.values()[i];
        }
        let pr = PointRadiation::new(&x, dim, u.values()[i], &gv, variant.k(g.mu(&x))?);
        for (a, c) in comps.iter_mut().enumerate() {
            c[i] = pr.d[a];
        }
        radial[i] = pr.d_r;
    }
    Ok(RadiationField {
        components: comps.into_iter().map(|c| Field::from_values_unchecked(grid, c)).collect(),
        radial: Field::from_values_unchecked(grid, radial),
        excluded,
        variant,
    })
}

/// `(1/R) ∫_{B_R} |∇u ∓ i√(λμ) x̃ u|² dx` with the box node quadrature.
pub fn rz_radiation_residual(u: &Field, lambda: f64, g: &Geometry, big_r: f64, sign: HalfPlane) -> Result<f64> {
    let grid = *u.grid();
    let dim = grid.dim();
    if g.dim() != dim {
        return Err(invalid("field and geometry dimensions differ"));
    }
    let variant = RadiationVariant::limit(lambda, sign);
    let grad = gradient(u);
    let mut vals = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        let x = grid.point(i);
        let r = norm(&x, dim);
        let k = variant.k(g.mu(&x))?;
        let mut s = 0.0;
        for (a, c) in grad.iter().enumerate() {
            let xt = if r > 0.0 { x[a] / r } else { 0.0 };
            s += (c.values()[i] - I * k * xt * u.values()[i]).norm_sqr();
        }
        vals.push(Complex64::new(s, 0.0));
    }
    let integrand = Field::from_values_unchecked(grid, vals);
    Ok(annulus_integral(&integrand, 0.0, big_r)?.re / big_r)
}

/// What [`surface_decay_probe`] integrates over each sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeMode {
    /// `|∂_r u|² + |u|²`
    Sommerfeld,
    /// `|𝒟_r⁺ u|²` with `k = +√(λμ)`
    RadiationPlus,
    /// `|𝒟_r⁻ u|²` with `k = −√(λμ)`
    RadiationMinus,
}

pub(crate) fn check_radius(u: &dyn Sampler, radius: f64) -> Result<()> {
    let limit = u.grid().map_or(f64::INFINITY, |g| g.half_width());
    if !(radius > 0.0) || radius >= limit {
        return Err(invalid(format!("radius {radius} must lie in (0, {limit})")));
    }
    Ok(())
}

/// `R^α ∫_{S_R} (integrand per mode) dS` for each radius.
pub fn surface_decay_probe(
    u: &dyn Sampler,
    g: &Geometry,
    lambda: f64,
    radii: &[f64],
    alpha: f64,
    mode: ProbeMode,
) -> Result<Vec<(f64, f64)>> {
    let dim = u.dim();
    if g.dim() != dim {
        return Err(invalid("field and geometry dimensions differ"));
    }
    if !(alpha >= 0.0) {
        return Err(invalid("alpha must be non-negative"));
    }
    let rule = default_sphere_rule(dim);
    radii
        .iter()
        .map(|&radius| {
            check_radius(u, radius)?;
            let mut acc = 0.0;
            for (d, w) in rule.directions.iter().zip(&rule.weights) {
                let x = [radius * d[0], radius * d[1], radius * d[2]];
                let (v, grad) = u.value_grad(&x);
                let val = match mode {
                    ProbeMode::Sommerfeld => {
                        let dr: Complex64 = (0..dim).map(|j| grad[j] * d[j]).sum();
                        dr.norm_sqr() + v.norm_sqr()
                    }
                    ProbeMode::RadiationPlus | ProbeMode::RadiationMinus => {
                        let side = if mode == ProbeMode::RadiationPlus { HalfPlane::Plus } else { HalfPlane::Minus };
                        let k = RadiationVariant::limit(lambda, side).k(g.mu(&x))?;
                        PointRadiation::new(&x, dim, v, &grad, k).d_r.norm_sqr()
                    }
                };
                acc += w * val;
            }
            Ok((radius, radius.powf(alpha) * radius.powi(dim as i32 - 1) * acc))
        })
        .collect()
}

/// `Im ∫_{S_R} ∂_r u · ū dS` for each radius.
pub fn flux_conservation(u: &dyn Sampler, radii: &[f64]) -> Result<Vec<(f64, f64)>> {
    let dim = u.dim();
    let rule = default_sphere_rule(dim);
    radii
        .iter()
        .map(|&radius| {
            check_radius(u, radius)?;
            let mut acc = 0.0;
            for (d, w) in rule.directions.iter().zip(&rule.weights) {
                let x = [radius * d[0], radius * d[1], radius * d[2]];
                let (v, grad) = u.value_grad(&x);
                let dr: Complex64 = (0..dim).map(|j| grad[j] * d[j]).sum();
                acc += w * (dr * v.conj()).im;
            }
            Ok((radius, radius.powi(dim as i32 - 1) * acc))
        })
        .collect()
}

/// `‖𝒟u‖_{δ−1} / ‖f‖_δ` for N = 3; for N = 2 the starred norm over
/// `‖f‖_δ + ‖u‖_{−δ}`.
pub fn radiation_estimate_ratio(du: &RadiationField, u: &Field, f: &Field, delta: f64) -> Result<f64> {
    crate::spectral::check_delta(delta)?;
    u.check_same_grid(f)?;
    u.check_same_grid(&du.radial)?;
    let f_norm = crate::field::weighted_norm(f, delta);
    if f_norm == 0.0 {
        return Err(invalid("source vanishes; the ratio is undefined"));
    }
    if u.grid().dim() == 2 {
        let num = crate::field::starred_norm_components(&du.components, delta - 1.0)?;
        Ok(num / (f_norm + crate::field::weighted_norm(u, -delta)))
    } else {
        Ok(crate::field::vector_weighted_norm(&du.components, delta - 1.0)? / f_norm)
    }
}
