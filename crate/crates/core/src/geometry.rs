//! Two-media partitions of R^N (N = 2, 3): classification, the piecewise
//! coefficient μ, parameterized samples of the separating surface, and the
//! sign condition `(μ2 − μ1)(x · n1) ≥ 0` on that surface.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};

pub type Point = [f64; 3];

pub const SURFACE_TOL: f64 = 1e-12;
pub const CONDITION_TOL: f64 = -1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    Omega1,
    Omega2,
    Surface,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumPair {
    mu1: f64,
    mu2: f64,
}

impl MediumPair {
    pub fn new(mu1: f64, mu2: f64) -> Result<Self> {
        if !(mu1 > 0.0 && mu2 > 0.0) || !mu1.is_finite() || !mu2.is_finite() {
            return Err(invalid(format!("media must be positive, got mu1={mu1}, mu2={mu2}")));
        }
        if mu1 == mu2 {
            return Err(invalid("mu1 == mu2 is not a two-media configuration"));
        }
        Ok(Self { mu1, mu2 })
    }

    pub fn mu1(&self) -> f64 {
        self.mu1
    }

    pub fn mu2(&self) -> f64 {
        self.mu2
    }

    /// `M0 = max(μ1, μ2)`
    pub fn mu_max(&self) -> f64 {
        self.mu1.max(self.mu2)
    }

    /// `μ0 = min(μ1, μ2)`
    pub fn mu_min(&self) -> f64 {
        self.mu1.min(self.mu2)
    }
}

/// Shape of Ω₁. Axis and coordinate indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeometryKind {
    /// `dist(x, axis line) < radius`; a strip `|x_j| < radius` (j ≠ axis) when N = 2.
    Cylinder { radius: f64, axis: usize },
    /// Vertex at the origin, opening toward `+e_axis`; a wedge when N = 2.
    Cone { half_angle: f64, axis: usize },
    /// `x_index < offset`
    HalfSpace { index: usize, offset: f64 },
    Ball { radius: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    kind: GeometryKind,
    dim: usize,
    media: MediumPair,
    /// Ω₁ is the exterior of `kind`'s shape instead of its interior.
    complement: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceSample {
    pub point: Point,
    pub normal1: Point,
    pub area_weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionReport {
    pub pass: bool,
    pub min_product: f64,
    pub worst_point: Point,
}

impl Geometry {
    pub fn new(kind: GeometryKind, dim: usize, media: MediumPair) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(invalid(format!("dimension {dim} not in {{2, 3}}")));
        }
        match kind {
            GeometryKind::Cylinder { radius, axis } => {
                if !(radius > 0.0) || !radius.is_finite() {
                    return Err(invalid("cylinder radius must be positive"));
                }
                if axis >= dim {
                    return Err(invalid(format!("axis {axis} out of range for N={dim}")));
                }
            }
            GeometryKind::Cone { half_angle, axis } => {
                if !(half_angle > 0.0 && half_angle < PI / 2.0) {
                    return Err(invalid("cone half-angle must lie in (0, pi/2)"));
                }
                if axis >= dim {
                    return Err(invalid(format!("axis {axis} out of range for N={dim}")));
                }
            }
            GeometryKind::HalfSpace { index, offset } => {
                if index >= dim || !offset.is_finite() {
                    return Err(invalid("half-space index out of range or offset not finite"));
                }
            }
            GeometryKind::Ball { radius } => {
                if !(radius > 0.0) || !radius.is_finite() {
                    return Err(invalid("ball radius must be positive"));
                }
            }
        }
        Ok(Self { kind, dim, media, complement: false })
    }

    /// A medium that fills any box of half-width below `1e6`: a ball of that
    /// radius with coefficient `mu` inside.
    pub fn homogeneous(dim: usize, mu: f64) -> Result<Self> {
        Self::new(GeometryKind::Ball { radius: 1e6 }, dim, MediumPair::new(mu, 2.0 * mu)?)
    }

    /// Same partition with the labels (Ω₁, μ₁) and (Ω₂, μ₂) exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            kind: self.kind,
            dim: self.dim,
            media: MediumPair { mu1: self.media.mu2, mu2: self.media.mu1 },
            complement: !self.complement,
        }
    }

    /// Ω₁ becomes the other side of S; μ₁ stays with Ω₁.
    pub fn complemented(&self) -> Self {
        Self { complement: !self.complement, ..*self }
    }

    pub fn kind(&self) -> GeometryKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn media(&self) -> MediumPair {
        self.media
    }

    pub fn is_complement(&self) -> bool {
        self.complement
    }

    /// Characteristic length used for perturbation scales.
    pub fn length_scale(&self) -> f64 {
        match self.kind {
            GeometryKind::Cylinder { radius, .. } | GeometryKind::Ball { radius } => radius,
            GeometryKind::HalfSpace { offset, .. } => offset.abs().max(1.0),
            GeometryKind::Cone { .. } => 1.0,
        }
    }

    /// Signed distance to S, negative in Ω₁.
    pub fn signed_distance(&self, x: &Point) -> f64 {
        let d = self.shape_distance(x);
        if self.complement {
            -d
        } else {
            d
        }
    }

    fn shape_distance(&self, x: &Point) -> f64 {
        match self.kind {
            GeometryKind::Cylinder { radius, axis } => transverse_norm(x, axis, self.dim) - radius,
            GeometryKind::Ball { radius } => norm(x, self.dim) - radius,
            GeometryKind::HalfSpace { index, offset } => x[index] - offset,
            GeometryKind::Cone { half_angle, axis } => {
                let rho = norm(x, self.dim);
                if rho == 0.0 {
                    return 0.0;
                }
                let along = x[axis];
                let across = transverse_norm(x, axis, self.dim);
                let theta = across.atan2(along);
                let gap = theta - half_angle;
                if gap >= PI / 2.0 {
                    rho
                } else {
                    rho * gap.sin()
                }
            }
        }
    }

    pub fn classify(&self, x: &Point) -> Region {
        let d = self.signed_distance(x);
        if d.abs() <= SURFACE_TOL {
            Region::Surface
        } else if d < 0.0 {
            Region::Omega1
        } else {
            Region::Omega2
        }
    }

    /// μ at `x`; points on S take μ₂.
    pub fn mu(&self, x: &Point) -> f64 {
        match self.classify(x) {
            Region::Omega1 => self.media.mu1,
            Region::Omega2 | Region::Surface => self.media.mu2,
        }
    }

    pub fn classify_point(&self, x: &[f64]) -> Result<Region> {
        Ok(self.classify(&self.lift(x)?))
    }

    pub fn mu_at(&self, x: &[f64]) -> Result<f64> {
        Ok(self.mu(&self.lift(x)?))
    }

    fn lift(&self, x: &[f64]) -> Result<Point> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(invalid("point must be finite"));
        }
        let mut p = [0.0; 3];
        p[..self.dim].copy_from_slice(x);
        Ok(p)
    }

    /// Quadrature samples of `S ∩ B_R`.
    pub fn sample_surface(&self, region_radius: f64, target_count: usize) -> Result<Vec<SurfaceSample>> {
        self.sample_surface_shell(0.0, region_radius, target_count)
    }

    /// Quadrature samples of `S ∩ {r_inner < |x| < r_outer}`, midpoint rules
    /// in the natural parameters with exact Jacobians.
    pub fn sample_surface_shell(&self, r_inner: f64, r_outer: f64, target_count: usize) -> Result<Vec<SurfaceSample>> {
        if !(r_outer > 0.0) || !(r_inner >= 0.0) || r_inner >= r_outer {
            return Err(invalid(format!("bad shell ({r_inner}, {r_outer})")));
        }
        if target_count < 8 {
            return Err(invalid("target_count must be at least 8"));
        }
        let mut out = match (self.kind, self.dim) {
            (GeometryKind::Cylinder { radius, axis }, 2) => {
                let other = 1 - axis;
                let mut v = Vec::new();
                for side in [1.0, -1.0] {
                    for (t, w) in line_in_shell(radius, r_inner, r_outer, target_count / 2) {
                        let mut p = [0.0; 3];
                        p[axis] = t;
                        p[other] = side * radius;
                        let mut n = [0.0; 3];
                        n[other] = side;
                        v.push(SurfaceSample { point: p, normal1: n, area_weight: w });
                    }
                }
                v
            }
            (GeometryKind::Cylinder { radius, axis }, _) => {
                let (e1, e2) = transverse_axes(axis);
                let along = line_in_shell(radius, r_inner, r_outer, 1);
                let length: f64 = along.iter().map(|(_, w)| w).sum();
                if length == 0.0 {
                    Vec::new()
                } else {
                    // Square-ish cells in (radius·θ, t).
                    let circ = 2.0 * PI * radius;
                    let cell = (circ * length / target_count as f64).sqrt();
                    let m_theta = ((circ / cell).ceil() as usize).max(8);
                    let m_t = ((target_count as f64 / m_theta as f64).ceil() as usize).max(2);
                    let ts = line_in_shell(radius, r_inner, r_outer, m_t);
                    let mut v = Vec::with_capacity(m_theta * ts.len());
                    for j in 0..m_theta {
                        let th = 2.0 * PI * (j as f64 + 0.5) / m_theta as f64;
                        let (s, c) = th.sin_cos();
                        for &(t, wt) in &ts {
                            let mut p = [0.0; 3];
                            p[axis] = t;
                            p[e1] = radius * c;
                            p[e2] = radius * s;
                            let mut n = [0.0; 3];
                            n[e1] = c;
                            n[e2] = s;
                            v.push(SurfaceSample { point: p, normal1: n, area_weight: wt * radius * 2.0 * PI / m_theta as f64 });
                        }
                    }
                    v
                }
            }
            (GeometryKind::HalfSpace { index, offset }, 2) => {
                let other = 1 - index;
                line_in_shell(offset.abs(), r_inner, r_outer, target_count)
                    .into_iter()
                    .map(|(t, w)| {
                        let mut p = [0.0; 3];
                        p[index] = offset;
                        p[other] = t;
                        let mut n = [0.0; 3];
                        n[index] = 1.0;
                        SurfaceSample { point: p, normal1: n, area_weight: w }
                    })
                    .collect()
            }
            (GeometryKind::HalfSpace { index, offset }, _) => {
                let (e1, e2) = transverse_axes(index);
                let c2 = offset * offset;
                let rho_in = (r_inner * r_inner - c2).max(0.0).sqrt();
                let rho_out2 = r_outer * r_outer - c2;
                if rho_out2 <= 0.0 {
                    Vec::new()
                } else {
                    let rho_out = rho_out2.sqrt();
                    let m_rho = ((target_count as f64 / (2.0 * PI)).sqrt().ceil() as usize).max(4);
                    let m_theta = ((target_count as f64 / m_rho as f64).ceil() as usize).max(8);
                    let d_rho = (rho_out - rho_in) / m_rho as f64;
                    let mut v = Vec::with_capacity(m_rho * m_theta);
                    for i in 0..m_rho {
                        let rho = rho_in + (i as f64 + 0.5) * d_rho;
                        for j in 0..m_theta {
                            let th = 2.0 * PI * (j as f64 + 0.5) / m_theta as f64;
                            let (s, c) = th.sin_cos();
                            let mut p = [0.0; 3];
                            p[index] = offset;
                            p[e1] = rho * c;
                            p[e2] = rho * s;
                            let mut n = [0.0; 3];
                            n[index] = 1.0;
                            v.push(SurfaceSample { point: p, normal1: n, area_weight: rho * d_rho * 2.0 * PI / m_theta as f64 });
                        }
                    }
                    v
                }
            }
            (GeometryKind::Ball { radius }, dim) => {
                if !(radius > r_inner && radius < r_outer) {
                    Vec::new()
                } else if dim == 2 {
                    let m = target_count;
                    (0..m)
                        .map(|j| {
                            let th = 2.0 * PI * (j as f64 + 0.5) / m as f64;
                            let (s, c) = th.sin_cos();
                            SurfaceSample {
                                point: [radius * c, radius * s, 0.0],
                                normal1: [c, s, 0.0],
                                area_weight: radius * 2.0 * PI / m as f64,
                            }
                        })
                        .collect()
                } else {
                    let rule = crate::field::sphere_rule(3, ((target_count as f64 / 2.0).sqrt().ceil() as usize).max(4));
                    rule.directions
                        .iter()
                        .zip(&rule.weights)
                        .map(|(n, w)| SurfaceSample {
                            point: [radius * n[0], radius * n[1], radius * n[2]],
                            normal1: *n,
                            area_weight: radius * radius * w,
                        })
                        .collect()
                }
            }
            (GeometryKind::Cone { half_angle, axis }, dim) => {
                let (sa, ca) = half_angle.sin_cos();
                if dim == 2 {
                    let other = 1 - axis;
                    let m = (target_count / 2).max(4);
                    let ds = (r_outer - r_inner) / m as f64;
                    let mut v = Vec::with_capacity(2 * m);
                    for side in [1.0, -1.0] {
                        for i in 0..m {
                            let s = r_inner + (i as f64 + 0.5) * ds;
                            let mut p = [0.0; 3];
                            p[axis] = s * ca;
                            p[other] = side * s * sa;
                            let mut n = [0.0; 3];
                            n[axis] = -sa;
                            n[other] = side * ca;
                            v.push(SurfaceSample { point: p, normal1: n, area_weight: ds });
                        }
                    }
                    v
                } else {
                    let (e1, e2) = transverse_axes(axis);
                    let m_s = ((target_count as f64 / (2.0 * PI * sa)).sqrt().ceil() as usize).max(4);
                    let m_theta = ((target_count as f64 / m_s as f64).ceil() as usize).max(8);
                    let ds = (r_outer - r_inner) / m_s as f64;
                    let mut v = Vec::with_capacity(m_s * m_theta);
                    for i in 0..m_s {
                        let s = r_inner + (i as f64 + 0.5) * ds;
                        for j in 0..m_theta {
                            let th = 2.0 * PI * (j as f64 + 0.5) / m_theta as f64;
                            let (st, ct) = th.sin_cos();
                            let mut p = [0.0; 3];
                            p[axis] = s * ca;
                            p[e1] = s * sa * ct;
                            p[e2] = s * sa * st;
                            let mut n = [0.0; 3];
                            n[axis] = -sa;
                            n[e1] = ca * ct;
                            n[e2] = ca * st;
                            v.push(SurfaceSample { point: p, normal1: n, area_weight: s * sa * ds * 2.0 * PI / m_theta as f64 });
                        }
                    }
                    v
                }
            }
        };
        if self.complement {
            for s in &mut out {
                for c in &mut s.normal1 {
                    *c = -*c;
                }
            }
        }
        Ok(out)
    }

    pub fn check_sign_condition(&self, samples: &[SurfaceSample]) -> Result<ConditionReport> {
        if samples.is_empty() {
            return Err(invalid("no surface samples"));
        }
        let dmu = self.media.mu2 - self.media.mu1;
        let mut min_product = f64::INFINITY;
        let mut worst_point = samples[0].point;
        for s in samples {
            let p = dmu * dot(&s.point, &s.normal1);
            if p < min_product {
                min_product = p;
                worst_point = s.point;
            }
        }
        Ok(ConditionReport { pass: min_product >= CONDITION_TOL, min_product, worst_point })
    }
}

/// Points `t` on a line at distance `c` from the origin with `r_in < |x| < r_out`,
/// midpoint weights. `m` is the node count across the whole intersection.
fn line_in_shell(c: f64, r_in: f64, r_out: f64, m: usize) -> Vec<(f64, f64)> {
    let t_out2 = r_out * r_out - c * c;
    if t_out2 <= 0.0 {
        return Vec::new();
    }
    let t_out = t_out2.sqrt();
    let t_in = (r_in * r_in - c * c).max(0.0).sqrt();
    let m = m.max(2);
    let mut v = Vec::with_capacity(m);
    if t_in == 0.0 {
        let dt = 2.0 * t_out / m as f64;
        for i in 0..m {
            v.push((-t_out + (i as f64 + 0.5) * dt, dt));
        }
    } else {
        let half = (m / 2).max(1);
        let dt = (t_out - t_in) / half as f64;
        for sign in [-1.0, 1.0] {
            for i in 0..half {
                v.push((sign * (t_in + (i as f64 + 0.5) * dt), dt));
            }
        }
    }
    v
}

fn transverse_axes(axis: usize) -> (usize, usize) {
    match axis {
        0 => (1, 2),
        1 => (2, 0),
        _ => (0, 1),
    }
}

pub(crate) fn norm(x: &Point, dim: usize) -> f64 {
    x[..dim].iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn transverse_norm(x: &Point, axis: usize, dim: usize) -> f64 {
    (0..dim).filter(|&j| j != axis).map(|j| x[j] * x[j]).sum::<f64>().sqrt()
}

pub(crate) fn dot(a: &Point, b: &Point) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}
