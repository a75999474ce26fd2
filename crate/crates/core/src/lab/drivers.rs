use num_complex::Complex64;

use super::config::{ExperimentConfig, IdentityField, ProbeField, SourceSpec};
use super::sweep::measure;
use super::{is_solver_failure, Check, Experiment, Outcome, Table};
use crate::diagnostics::{
    flux_conservation, identity_residual, radiation_term, rz_radiation_residual, surface_decay_probe, ProbeMode, RadiationVariant,
};
use crate::error::{Error, Result};
use crate::field::{annulus_integral, x_norm, Field, Grid, Sampler};
use crate::geometry::{norm, ConditionReport, CONDITION_TOL};
use crate::operator_solver::{apply_resolvent, assemble, SolveReport};
use crate::oracles::{manufactured_pair, AnalyticField, AnalyticSampler};
use crate::spectral::{branch_coefficients, k_at, HalfPlane, SpectralParam};

pub(super) fn source_field(cfg: &ExperimentConfig, grid: &Grid) -> Result<Field> {
    match cfg.source {
        SourceSpec::Zero => Ok(Field::zeros(*grid)),
        SourceSpec::Gaussian { width, center } => AnalyticField::GaussianBump { width, center }.sample(grid),
    }
}

/// One warning when `exp(−c_b √μ₀ L)` exceeds the configured level for some
/// `z`: the box edge is then barely damped and the closure dominates the
/// truncation error.
pub(super) fn damping_warnings(cfg: &ExperimentConfig, zs: &[SpectralParam]) -> Vec<String> {
    let scale = cfg.geometry.media().mu_min().sqrt() * cfg.grid.half_width();
    let weak: Vec<(f64, f64)> = zs
        .iter()
        .filter_map(|z| {
            let c_b = branch_coefficients(z).ok()?.c_b;
            let decay = (-c_b * scale).exp();
            (decay > cfg.thresholds.damping_decay).then_some((z.eta(), decay))
        })
        .collect();
    match weak.first() {
        None => Vec::new(),
        Some(&(eta, decay)) => vec![format!(
            "{} of {} parameters leave the box edge weakly damped (first: eta = {eta:e}, exp(-c_b sqrt(mu0) L) = {decay:.3e} > {:e}); \
             compare against a larger box",
            weak.len(),
            zs.len(),
            cfg.thresholds.damping_decay
        )],
    }
}

/// The sign condition over `S ∩ B_R`; `None` when S misses that ball.
pub(super) fn condition_in_box(cfg: &ExperimentConfig) -> Result<Option<ConditionReport>> {
    let samples = cfg.geometry.sample_surface(cfg.sample_radius, cfg.samples)?;
    if samples.is_empty() {
        return Ok(None);
    }
    cfg.geometry.check_sign_condition(&samples).map(Some)
}

fn solve_once(cfg: &ExperimentConfig, f: &Field) -> Result<(Field, SolveReport)> {
    let op = assemble(&cfg.grid, &cfg.geometry, &cfg.z, &cfg.solver)?;
    apply_resolvent(&op, f, &cfg.solver)
}

/// Runs `solve_once`, turning a solver error into a failed outcome.
fn solve_or_fail(cfg: &ExperimentConfig, f: &Field, out: &mut Outcome) -> Result<Option<Field>> {
    match solve_once(cfg, f) {
        Ok((u, rep)) => {
            out.stats.push((cfg.z, rep));
            Ok(Some(u))
        }
        Err(e) if is_solver_failure(&e) => {
            out.failure = Some(e.to_string());
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

pub(super) fn run_solve(cfg: &ExperimentConfig) -> Result<Outcome> {
    let mut out = Outcome::new(Experiment::Solve, Table::new("solve", "quantity,value"));
    out.warnings = damping_warnings(cfg, &[cfg.z]);
    let f = source_field(cfg, &cfg.grid)?;
    let Some(u) = solve_or_fail(cfg, &f, &mut out)? else {
        return Ok(out);
    };
    let row = measure(&u, &f, &cfg.z, &cfg.geometry, cfg.delta, &out.stats[0].1)?;
    let rows = [
        ("norm_u", row.norm_u),
        ("resolvent_ratio", row.resolvent_ratio),
        ("radiation_ratio", row.radiation_ratio),
        ("h2_ratio", row.h2_ratio),
        ("x_norm", x_norm(&u, &cfg.geometry)?),
        ("max_abs", u.max_abs()),
        ("iterations", row.iterations as f64),
        ("final_residual", row.final_residual),
    ];
    out.table.rows = rows.iter().map(|(k, v)| format!("{k},{v:e}")).collect();
    out.field = Some(u);
    Ok(out)
}

pub(super) fn run_check_geometry(cfg: &ExperimentConfig) -> Result<Outcome> {
    let mut out = Outcome::new(Experiment::CheckGeometry, Table::new("geometry", "samples,pass,min_product,worst_x,worst_y,worst_z"));
    let samples = cfg.geometry.sample_surface(cfg.sample_radius, cfg.samples)?;
    if samples.is_empty() {
        out.notes.push(format!("S does not meet the ball of radius {}; the condition holds vacuously", cfg.sample_radius));
        out.table.rows.push("0,true,,,,".into());
        return Ok(out);
    }
    let rep = cfg.geometry.check_sign_condition(&samples)?;
    let w = rep.worst_point;
    out.table.rows.push(format!("{},{},{:e},{:e},{:e},{:e}", samples.len(), rep.pass, rep.min_product, w[0], w[1], w[2]));
    out.notes.push(format!("worst point ({:.6}, {:.6}, {:.6})", w[0], w[1], w[2]));
    out.checks.push(Check::at_least("min_product", rep.min_product, CONDITION_TOL));
    out.condition = Some(rep);
    Ok(out)
}

fn single_medium(cfg: &ExperimentConfig, what: &str) -> Result<f64> {
    let g = &cfg.geometry;
    let mu = g.mu(&cfg.grid.point(0));
    if (0..cfg.grid.len()).any(|i| g.mu(&cfg.grid.point(i)) != mu) {
        return Err(Error::Config(format!("{what} needs a single medium over the box")));
    }
    Ok(mu)
}

/// Point-source wave centred at `source.center` with the box's wavenumber.
fn green_field(cfg: &ExperimentConfig, what: &str) -> Result<AnalyticField> {
    let mu = single_medium(cfg, what)?;
    let center = match cfg.source {
        SourceSpec::Gaussian { center, .. } => center,
        SourceSpec::Zero => [0.0; 3],
    };
    let k = k_at(&cfg.z, mu)?;
    if cfg.grid.dim() == 3 {
        Ok(AnalyticField::SphericalWave3D { k, center })
    } else if cfg.z.is_real() && k.re > 0.0 {
        Ok(AnalyticField::HankelWave2D { k: k.re, center })
    } else {
        Err(Error::Config(format!("{what}: the 2-D point-source wave needs spectral.eta = 0 and the plus half-plane")))
    }
}

/// Samples a field on the grid, with zero at nodes within `h/2` of its
/// singular point. Those nodes never enter the quantities computed here.
fn sample_regularized(field: AnalyticField, grid: &Grid) -> Result<Field> {
    let s = AnalyticSampler { field, dim: grid.dim() };
    let sing = field.singular_point();
    let h = grid.h();
    Field::from_fn(*grid, |x| match sing {
        Some(c) if norm(&[x[0] - c[0], x[1] - c[1], x[2] - c[2]], grid.dim()) < 0.5 * h => Complex64::new(0.0, 0.0),
        _ => s.value(x),
    })
}

pub(super) fn run_verify_identity(cfg: &ExperimentConfig) -> Result<Outcome> {
    let mut out = Outcome::new(
        Experiment::VerifyIdentity,
        Table::new("identity", "profile,lhs,rhs,interface_correction,residual"),
    );
    let spec = &cfg.identity;
    let (u, f) = match spec.field {
        IdentityField::Green => {
            let green = green_field(cfg, "identity.field = green")?;
            let c = green.singular_point().unwrap_or([0.0; 3]);
            if norm(&c, cfg.grid.dim()) >= spec.inner_radius - 2.0 * cfg.grid.h() {
                return Err(Error::Config("the point source must sit inside the inner sphere".into()));
            }
            (sample_regularized(green, &cfg.grid)?, Field::zeros(cfg.grid))
        }
        IdentityField::Gaussian => {
            let SourceSpec::Gaussian { width, center } = cfg.source else {
                return Err(Error::Config("identity.field = gaussian takes its bump from source.*".into()));
            };
            manufactured_pair(&AnalyticField::GaussianBump { width, center }, &cfg.z, &cfg.geometry, &cfg.grid)?
        }
        IdentityField::Solved => {
            let f = source_field(cfg, &cfg.grid)?;
            let Some(u) = solve_or_fail(cfg, &f, &mut out)? else {
                return Ok(out);
            };
            (u, f)
        }
    };
    for p in &spec.profiles {
        let rep = identity_residual(&u, &f, &cfg.z, &cfg.geometry, p, spec.scaling, spec.inner_radius, spec.outer_radius)?;
        out.table.rows.push(format!("{},{:e},{:e},{:e},{:e}", p.name(), rep.lhs(), rep.rhs(), rep.interface_correction, rep.residual));
        out.checks.push(Check::at_most(format!("residual_{}", p.name()), rep.residual, cfg.thresholds.identity));
        out.identity.push((*p, rep));
    }
    if spec.field == IdentityField::Solved {
        out.field = Some(u);
    }
    Ok(out)
}

pub(super) fn run_radiation_probe(cfg: &ExperimentConfig) -> Result<Outcome> {
    let mut out = Outcome::new(Experiment::RadiationProbe, Table::new("probe", "quantity,radius,value"));
    let lambda = cfg.z.lambda();
    let grid = cfg.grid;
    let g = &cfg.geometry;
    let (u, analytic) = match cfg.probe.field {
        ProbeField::Solved => {
            out.warnings = damping_warnings(cfg, &[cfg.z]);
            let f = source_field(cfg, &grid)?;
            let Some(u) = solve_or_fail(cfg, &f, &mut out)? else {
                return Ok(out);
            };
            (u, None)
        }
        ProbeField::Green => {
            let a = green_field(cfg, "probe.field = green")?;
            (sample_regularized(a, &grid)?, Some(a))
        }
        ProbeField::Plane => {
            let mu = single_medium(cfg, "probe.field = plane")?;
            let mut direction = [0.0; 3];
            direction[0] = 1.0;
            let a = AnalyticField::PlaneWave { k: k_at(&cfg.z, mu)?, direction };
            (a.sample(&grid)?, Some(a))
        }
    };
    let sampler: Box<dyn Sampler> = match analytic {
        Some(field) => Box::new(AnalyticSampler { field, dim: grid.dim() }),
        None => Box::new(u.clone()),
    };
    let radii = &cfg.probe.radii;
    let mut push = |q: &str, rows: &[(f64, f64)]| {
        for (r, v) in rows {
            out.table.rows.push(format!("{q},{r:e},{v:e}"));
        }
    };
    let modes = [("sommerfeld", ProbeMode::Sommerfeld), ("radiation_plus", ProbeMode::RadiationPlus), ("radiation_minus", ProbeMode::RadiationMinus)];
    for (name, mode) in modes {
        push(name, &surface_decay_probe(sampler.as_ref(), g, lambda, radii, cfg.probe.alpha, mode)?);
    }
    push("flux", &flux_conservation(sampler.as_ref(), radii)?);
    for (name, side) in [("rz_plus", HalfPlane::Plus), ("rz_minus", HalfPlane::Minus)] {
        let rows = radii.iter().map(|&r| Ok((r, rz_radiation_residual(&u, lambda, g, r, side)?))).collect::<Result<Vec<_>>>()?;
        push(name, &rows);
    }
    // ∫_{r0<|x|<R} r⁻¹|𝒟_r^± u|²: bounded in R for an outgoing field with
    // the + sign, growing like log R with the − sign
    let mut energy = Vec::new();
    for (name, variant) in [("outgoing_energy", RadiationVariant::PlusLimit(lambda)), ("incoming_energy", RadiationVariant::MinusLimit(lambda))] {
        let rows = radial_energy(&u, g, variant, cfg.probe.inner_radius, radii)?;
        push(name, &rows);
        energy.push(rows);
    }
    if cfg.probe.field == ProbeField::Solved {
        if let ([.., (_, a0), (_, a1)], [.., (_, b0), (_, b1)]) = (energy[0].as_slice(), energy[1].as_slice()) {
            // last-step growth of the outgoing integral against the incoming one
            let growth = if b1 > b0 { (a1 - a0).abs() / (b1 - b0) } else { 0.0 };
            out.checks.push(Check::at_most("outgoing_energy_growth", growth, cfg.thresholds.probe_stability));
        }
        out.field = Some(u);
    }
    Ok(out)
}

fn radial_energy(u: &Field, g: &crate::geometry::Geometry, variant: RadiationVariant, inner: f64, radii: &[f64]) -> Result<Vec<(f64, f64)>> {
    let grid = *u.grid();
    let du = radiation_term(u, g, variant)?;
    let values = (0..grid.len())
        .map(|i| {
            let r = norm(&grid.point(i), grid.dim());
            Complex64::new(if r > 0.0 { du.radial.values()[i].norm_sqr() / r } else { 0.0 }, 0.0)
        })
        .collect();
    let integrand = Field::from_values(grid, values)?;
    radii.iter().map(|&r| Ok((r, annulus_integral(&integrand, inner, r)?.re))).collect()
}
