//! Multiplier identity for `f = μ⁻¹(−Δu − k²u)` on the shell `r < |x| < R`,
//! weighted by `φ = α(x) ξ(|x|)`.
//!
//! Left side: `∫(bφ + φ′/2)|𝒟u|²`, the two-sided surface term
//! `Σ_ℓ ∫ φ Im(k̄ ∂_n u ū)`, `∫(φ/r − φ′)(|𝒟u|² − |𝒟_r u|²)` and
//! `c_N ∫ r⁻²(φ/r − φ′/2 + bφ)|u|²`. Right side: `Re ∫ φμf conj(𝒟_r u)`,
//! the two-sided `½ Σ_ℓ ∫ φ((N−1)b/r + |k|²)(x̃·n)|u|²`, and the sphere terms
//! `±½ ∫_{S_ρ} φ(2|𝒟_r u|² − |𝒟u|² − c_N ρ⁻²|u|²)` at `ρ = R, r`.
//!
//! When α jumps across S, integrating by parts in each medium leaves
//! `∫_S (φ₁ − φ₂)[Re(P_n conj P_r) − (s/2)|P|² − (c_N/2) s r⁻²|u|²]` on the
//! right, with `P = ∇u + ((N−1)/(2r)) x̃ u`, `n = n₁` and `s = x̃·n₁`. It is
//! reported separately and vanishes for constant α.

use num_complex::Complex64;
use rayon::prelude::*;

use super::radiation::{check_radius, PointRadiation};
use crate::error::{invalid, Result};
use crate::field::{gauss_legendre, sphere_rule, Sampler, WeightProfile};
use crate::geometry::{dot, norm, Geometry, GeometryKind, Point};
use crate::spectral::{dimension_constants, k_at, SpectralParam};

/// Medium factor of the weight `φ = α ξ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightScaling {
    /// `α ≡ 1`
    Unit,
    /// `α = 1/√μ`
    InverseSqrtMu,
}

impl WeightScaling {
    fn alpha(self, mu: f64) -> f64 {
        match self {
            WeightScaling::Unit => 1.0,
            WeightScaling::InverseSqrtMu => 1.0 / mu.sqrt(),
        }
    }
}

/// Resolution of the quadratures behind [`identity_residual`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityQuadrature {
    /// Gauss–Legendre points per radial segment of length at most one.
    pub radial_points: usize,
    /// Parameter of [`sphere_rule`].
    pub sphere_points: usize,
    /// Target sample count on `S` inside the shell.
    pub surface_points: usize,
}

impl IdentityQuadrature {
    pub fn for_dim(dim: usize) -> Self {
        if dim == 2 {
            Self { radial_points: 16, sphere_points: 2048, surface_points: 4000 }
        } else {
            Self { radial_points: 16, sphere_points: 48, surface_points: 40_000 }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityReport {
    pub lhs_terms: [f64; 4],
    pub rhs_terms: [f64; 4],
    /// Interface term from a jump of α; zero when α is constant.
    pub interface_correction: f64,
    pub residual: f64,
}

impl IdentityReport {
    pub fn lhs(&self) -> f64 {
        self.lhs_terms.iter().sum()
    }

    pub fn rhs(&self) -> f64 {
        self.rhs_terms.iter().sum::<f64>() + self.interface_correction
    }
}

#[allow(clippy::too_many_arguments)]
pub fn identity_residual(
    u: &dyn Sampler,
    f: &dyn Sampler,
    z: &SpectralParam,
    g: &Geometry,
    profile: &WeightProfile,
    scaling: WeightScaling,
    r: f64,
    big_r: f64,
) -> Result<IdentityReport> {
    identity_residual_with(u, f, z, g, profile, scaling, r, big_r, &IdentityQuadrature::for_dim(u.dim()))
}

#[allow(clippy::too_many_arguments)]
pub fn identity_residual_with(
    u: &dyn Sampler,
    f: &dyn Sampler,
    z: &SpectralParam,
    g: &Geometry,
    profile: &WeightProfile,
    scaling: WeightScaling,
    r: f64,
    big_r: f64,
    quad: &IdentityQuadrature,
) -> Result<IdentityReport> {
    let dim = u.dim();
    if f.dim() != dim || g.dim() != dim {
        return Err(invalid("field, source and geometry dimensions differ"));
    }
    profile.validate()?;
    if !(r > 0.0 && r < big_r) {
        return Err(invalid(format!("need 0 < r < R, got r = {r}, R = {big_r}")));
    }
    check_radius(u, big_r)?;
    for s in [u, f] {
        if let Some(grid) = s.grid() {
            let h = grid.h();
            if r <= 2.0 * h || big_r >= grid.half_width() - 2.0 * h {
                return Err(invalid(format!(
                    "shell ({r}, {big_r}) needs r > 2h and R < L - 2h for h = {h}, L = {}",
                    grid.half_width()
                )));
            }
        }
    }
    k_at(z, g.media().mu1())?;
    let c_n = dimension_constants(dim, 1.0)?.c_n;
    let ctx = Ctx { u, g, z, profile, scaling, dim, c_n };

    let mut lhs = [0.0; 4];
    let mut rhs = [0.0; 4];

    // shell volume: radial Gauss–Legendre split at the profile kinks and at a
    // spherical interface
    let mut cuts = vec![r];
    let mut kinks = profile.breakpoints();
    if let GeometryKind::Ball { radius } = g.kind() {
        kinks.push(radius);
    }
    kinks.sort_by(f64::total_cmp);
    cuts.extend(kinks.into_iter().filter(|&b| b > r && b < big_r));
    cuts.push(big_r);
    let gl = gauss_legendre(quad.radial_points);
    let mut radial_nodes = Vec::new();
    for w in cuts.windows(2) {
        let pieces = (w[1] - w[0]).ceil().max(1.0) as usize;
        let len = (w[1] - w[0]) / pieces as f64;
        for p in 0..pieces {
            let a = w[0] + p as f64 * len;
            for &(t, wt) in &gl {
                radial_nodes.push((a + 0.5 * len * (t + 1.0), 0.5 * len * wt));
            }
        }
    }
    let rule = sphere_rule(dim, quad.sphere_points);
    let shells: Vec<[f64; 4]> = radial_nodes
        .par_iter()
        .map(|&(rho, wr)| {
            let jac = wr * rho.powi(dim as i32 - 1);
            let mut acc = [0.0; 4];
            for (d, wd) in rule.directions.iter().zip(&rule.weights) {
                let x = [rho * d[0], rho * d[1], rho * d[2]];
                let t = ctx.volume_terms(&x, rho, f.value(&x));
                for (a, v) in acc.iter_mut().zip(t) {
                    *a += jac * wd * v;
                }
            }
            acc
        })
        .collect::<Vec<_>>();
    let mut vol = [0.0; 4];
    for s in &shells {
        for (v, a) in vol.iter_mut().zip(s) {
            *v += a;
        }
    }
    lhs[0] = vol[0];
    lhs[2] = vol[1];
    lhs[3] = vol[2];
    rhs[0] = vol[3];

    // spheres S_R and S_r
    rhs[2] = ctx.sphere_term(&rule, big_r);
    rhs[3] = -ctx.sphere_term(&rule, r);

    // the separating surface, evaluated once with both media's traces
    let mut correction = 0.0;
    let samples = g.sample_surface_shell(r, big_r, quad.surface_points)?;
    let media = g.media();
    for s in &samples {
        let x = s.point;
        let rho = norm(&x, dim);
        let (v, grad) = u.value_grad(&x);
        let (xi, _) = profile.eval(rho);
        let s_dot = dot(&x, &s.normal1) / rho;
        let dn: Complex64 = (0..dim).map(|j| grad[j] * s.normal1[j]).sum();
        let mut lhs_s = 0.0;
        let mut rhs_s = 0.0;
        let mut phi_side = [0.0; 2];
        for (side, mu) in [media.mu1(), media.mu2()].into_iter().enumerate() {
            let k = k_at(z, mu)?;
            let phi = scaling.alpha(mu) * xi;
            let sign = if side == 0 { 1.0 } else { -1.0 };
            lhs_s += sign * phi * (k.conj() * dn * v.conj()).im;
            rhs_s += sign * 0.5 * phi * ((dim as f64 - 1.0) * k.im / rho + k.norm_sqr()) * s_dot * v.norm_sqr();
            phi_side[side] = phi;
        }
        let pr = PointRadiation::new(&x, dim, v, &grad, Complex64::new(0.0, 0.0));
        let p_n: Complex64 = (0..dim).map(|j| pr.p[j] * s.normal1[j]).sum();
        let bracket = (p_n * pr.p_r.conj()).re - 0.5 * s_dot * pr.p_sqr() - 0.5 * c_n * s_dot * v.norm_sqr() / (rho * rho);
        lhs[1] += s.area_weight * lhs_s;
        rhs[1] += s.area_weight * rhs_s;
        correction += s.area_weight * (phi_side[0] - phi_side[1]) * bracket;
    }

    let lhs_sum: f64 = lhs.iter().sum();
    let rhs_sum: f64 = rhs.iter().sum::<f64>() + correction;
    let residual = (lhs_sum - rhs_sum).abs() / (lhs_sum.abs() + rhs_sum.abs() + 1e-300);
    Ok(IdentityReport { lhs_terms: lhs, rhs_terms: rhs, interface_correction: correction, residual })
}

struct Ctx<'a> {
    u: &'a dyn Sampler,
    g: &'a Geometry,
    z: &'a SpectralParam,
    profile: &'a WeightProfile,
    scaling: WeightScaling,
    dim: usize,
    c_n: f64,
}

impl Ctx<'_> {
    /// `(φ, φ′, k, μ)` at a point off the surface.
    fn weight(&self, x: &Point, rho: f64) -> (f64, f64, Complex64, f64) {
        let mu = self.g.mu(x);
        let alpha = self.scaling.alpha(mu);
        let (xi, dxi) = self.profile.eval(rho);
        let k = k_at(self.z, mu).expect("z was checked to be nonzero");
        (alpha * xi, alpha * dxi, k, mu)
    }

    /// Integrands of the three shell terms on the left and the source term.
    fn volume_terms(&self, x: &Point, rho: f64, fv: Complex64) -> [f64; 4] {
        let (phi, dphi, k, mu) = self.weight(x, rho);
        let (v, grad) = self.u.value_grad(x);
        let pr = PointRadiation::new(x, self.dim, v, &grad, k);
        let d2 = pr.d_sqr();
        let b = k.im;
        [
            (b * phi + 0.5 * dphi) * d2,
            (phi / rho - dphi) * (d2 - pr.d_r.norm_sqr()),
            self.c_n / (rho * rho) * (phi / rho - 0.5 * dphi + b * phi) * v.norm_sqr(),
            (phi * mu * fv * pr.d_r.conj()).re,
        ]
    }

    /// `½ ∫_{S_ρ} φ(2|𝒟_r u|² − |𝒟u|² − c_N ρ⁻²|u|²) dS`
    fn sphere_term(&self, rule: &crate::field::SphereRule, rho: f64) -> f64 {
        let mut acc = 0.0;
        for (d, w) in rule.directions.iter().zip(&rule.weights) {
            let x = [rho * d[0], rho * d[1], rho * d[2]];
            let (phi, _, k, _) = self.weight(&x, rho);
            let (v, grad) = self.u.value_grad(&x);
            let pr = PointRadiation::new(&x, self.dim, v, &grad, k);
            acc += w * phi * (2.0 * pr.d_r.norm_sqr() - pr.d_sqr() - self.c_n * v.norm_sqr() / (rho * rho));
        }
        0.5 * acc * rho.powi(self.dim as i32 - 1)
    }
}
