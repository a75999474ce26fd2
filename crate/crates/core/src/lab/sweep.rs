//! η ladders and (λ, η) scans of the resolvent.

use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::drivers::{condition_in_box, damping_warnings, source_field};
use super::{is_solver_failure, Check, Experiment, Outcome, Table};
use crate::diagnostics::{radiation_term, RadiationVariant};
use crate::error::{invalid, Result};
use crate::field::{sobolev_norm, vector_weighted_norm, weighted_norm, Field, Grid};
use crate::geometry::Geometry;
use crate::operator_solver::{assemble, apply_resolvent, resolvent_sweep, Method, SolveConfig, SolveReport, DIRECT_MAX_NODES};
use crate::spectral::SpectralParam;

pub const SWEEP_HEADER: &str = "z_re,z_im,norm_u,resolvent_ratio,radiation_ratio,h2_ratio,cauchy,iterations,final_residual";

/// Normalized quantities of one solve `u = R(z)f`. Ratios are zero when `f ≡ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub z: SpectralParam,
    /// `‖u‖_{−δ}`
    pub norm_u: f64,
    /// `√|z| ‖u‖_{−δ} / ‖f‖_δ`
    pub resolvent_ratio: f64,
    /// `‖𝒟u‖_{δ−1} / ‖f‖_δ`
    pub radiation_ratio: f64,
    /// `‖u‖_{2,−δ} / ‖f‖_δ`
    pub h2_ratio: f64,
    /// `‖u_m − u_{m−1}‖_{−δ}`, from the second ladder entry on.
    pub cauchy: Option<f64>,
    pub iterations: usize,
    pub final_residual: f64,
}

impl SweepRow {
    pub fn csv(&self) -> String {
        format!(
            "{:e},{:e},{:e},{:e},{:e},{:e},{},{},{:e}",
            self.z.lambda(),
            self.z.eta(),
            self.norm_u,
            self.resolvent_ratio,
            self.radiation_ratio,
            self.h2_ratio,
            self.cauchy.map(|c| format!("{c:e}")).unwrap_or_default(),
            self.iterations,
            self.final_residual
        )
    }

    /// The three ratio columns.
    pub fn ratios(&self) -> [f64; 3] {
        [self.resolvent_ratio, self.radiation_ratio, self.h2_ratio]
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn cauchy(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.cauchy).collect()
    }

    pub fn table(&self, name: &str) -> Table {
        let mut t = Table::new(name, SWEEP_HEADER);
        t.rows = self.rows.iter().map(SweepRow::csv).collect();
        t
    }
}

pub(super) fn measure(u: &Field, f: &Field, z: &SpectralParam, g: &Geometry, delta: f64, report: &SolveReport) -> Result<SweepRow> {
    let norm_u = weighted_norm(u, -delta);
    let f_norm = weighted_norm(f, delta);
    let ratio = |v: f64| if f_norm == 0.0 { 0.0 } else { v / f_norm };
    let du = radiation_term(u, g, RadiationVariant::SignedK(*z))?;
    Ok(SweepRow {
        z: *z,
        norm_u,
        resolvent_ratio: ratio(z.abs_z().sqrt() * norm_u),
        radiation_ratio: ratio(vector_weighted_norm(&du.components, delta - 1.0)?),
        h2_ratio: ratio(sobolev_norm(u, 2, -delta)?),
        cauchy: None,
        iterations: report.iterations,
        final_residual: report.final_residual,
    })
}

/// Solves at every `z` (concurrently, in input order) and measures each
/// field. Stops at the first solver failure and returns it with the rows
/// before it.
fn solve_all(
    grid: &Grid,
    g: &Geometry,
    zs: &[SpectralParam],
    f: &Field,
    cfg: &SolveConfig,
    delta: f64,
) -> Result<(Vec<(SweepRow, Field, SolveReport)>, Option<String>)> {
    let entries = resolvent_sweep(grid, g, zs, f, cfg)?;
    let mut solved = Vec::new();
    let mut failure = None;
    for (z, res) in entries {
        match res {
            Ok((u, rep)) => solved.push((z, u, rep)),
            Err(e) if is_solver_failure(&e) => {
                failure = Some(format!("z = {:e}{:+e}i: {e}", z.lambda(), z.eta()));
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let rows = solved
        .into_par_iter()
        .map(|(z, u, rep)| measure(&u, f, &z, g, delta, &rep).map(|row| (row, u, rep)))
        .collect::<Result<Vec<_>>>()?;
    Ok((rows, failure))
}

/// `d_m` eventually non-increasing (over at least the second half of the
/// column) and `d_last ≤ shrink · d_first`. An all-zero column passes.
pub fn cauchy_pass(d: &[f64], shrink: f64) -> bool {
    let Some((&first, &last)) = d.first().zip(d.last()) else {
        return false;
    };
    if d.iter().all(|&v| v == 0.0) {
        return true;
    }
    let mut tail = 1;
    while tail < d.len() && d[d.len() - tail - 1] >= d[d.len() - tail] {
        tail += 1;
    }
    tail * 2 >= d.len() && last <= shrink * first
}

/// Band and tail-growth tests over scan rows grouped into series of
/// decreasing `|η|`. Returns `(band, growth)` maxima over the ratio columns.
pub fn scan_pass(series: &[Vec<SweepRow>]) -> (f64, f64) {
    let mut band: f64 = 1.0;
    for col in 0..3 {
        let vals: Vec<f64> = series.iter().flatten().map(|r| r.ratios()[col]).collect();
        let max = vals.iter().cloned().fold(0.0, f64::max);
        let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        if max > 0.0 {
            band = band.max(if min > 0.0 { max / min } else { f64::INFINITY });
        }
    }
    let mut growth: f64 = 0.0;
    for s in series {
        if let [.., a, b] = s.as_slice() {
            for col in 0..3 {
                let (pa, pb) = (a.ratios()[col], b.ratios()[col]);
                if pa > 0.0 {
                    growth = growth.max(pb / pa);
                }
            }
        }
    }
    (band, growth)
}

fn ladder_params(cfg: &ExperimentConfig) -> Result<Vec<SpectralParam>> {
    let hp = cfg.z.half_plane();
    cfg.eta_ladder.iter().map(|&e| SpectralParam::with_half_plane(cfg.z.lambda(), hp.sign() * e, hp)).collect()
}

pub(super) fn run_sweep_eta(cfg: &ExperimentConfig) -> Result<Outcome> {
    let zs = ladder_params(cfg)?;
    let f = source_field(cfg, &cfg.grid)?;
    let (solved, failure) = solve_all(&cfg.grid, &cfg.geometry, &zs, &f, &cfg.solver, cfg.delta)?;

    let mut result = SweepResult::default();
    for (m, (row, u, _)) in solved.iter().enumerate() {
        let mut row = *row;
        if m > 0 {
            row.cauchy = Some(weighted_norm(&u.sub(&solved[m - 1].1)?, -cfg.delta));
        }
        result.rows.push(row);
    }

    let mut out = Outcome::new(Experiment::SweepEta, result.table("sweep"));
    out.warnings = damping_warnings(cfg, &zs);
    out.stats = solved.iter().map(|(r, _, rep)| (r.z, *rep)).collect();
    out.failure = failure;
    if out.failure.is_none() {
        let d = result.cauchy();
        let ratio = match (d.first(), d.last()) {
            (Some(&a), Some(&b)) if a > 0.0 => b / a,
            _ => 0.0,
        };
        let mut c = Check::at_most("cauchy_shrink", ratio, cfg.thresholds.cauchy_shrink);
        c.pass = cauchy_pass(&d, cfg.thresholds.cauchy_shrink);
        out.checks.push(c);
        if cfg.truncation_check {
            let (last_z, last_u) = (zs[zs.len() - 1], &solved[solved.len() - 1].1);
            match truncation_difference(cfg, &last_z, last_u) {
                Ok(diff) => out.checks.push(Check::at_most("truncation_1.5L", diff, cfg.thresholds.truncation)),
                Err(e) if is_solver_failure(&e) => out.failure = Some(format!("enlarged box: {e}")),
                Err(e) => return Err(e),
            }
        }
    }
    out.field = solved.into_iter().last().map(|(_, u, _)| u);
    out.sweep = Some(result);
    Ok(out)
}

/// `‖u_L − u_{1.5L}‖_{−δ} / ‖u_L‖_{−δ}` on the smaller box, same spacing.
fn truncation_difference(cfg: &ExperimentConfig, z: &SpectralParam, u: &Field) -> Result<f64> {
    let grid = cfg.grid;
    if (grid.n() - 1) % 2 != 0 {
        return Err(invalid("the 1.5L truncation check needs grid.n - 1 even"));
    }
    let big = Grid::new(grid.dim(), 1.5 * grid.half_width(), 3 * (grid.n() - 1) / 2 + 1)?;
    let f_big = source_field(cfg, &big)?;
    // the enlarged box may outgrow the direct path
    let mut solver = cfg.solver;
    if solver.method == Method::Direct && big.len() > DIRECT_MAX_NODES {
        solver.method = Method::Auto;
    }
    let op = assemble(&big, &cfg.geometry, z, &solver)?;
    let (u_big, _) = apply_resolvent(&op, &f_big, &solver)?;
    let inner = u_big.restrict_to(&grid)?;
    let base = weighted_norm(u, -cfg.delta);
    if base == 0.0 {
        return Ok(0.0);
    }
    Ok(weighted_norm(&u.sub(&inner)?, -cfg.delta) / base)
}

pub(super) fn run_scan_resolvent(cfg: &ExperimentConfig) -> Result<Outcome> {
    let lambdas: Vec<f64> = (0..cfg.lambda_points)
        .map(|i| if cfg.lambda_points == 1 { cfg.c } else { cfg.c + (cfg.d - cfg.c) * i as f64 / (cfg.lambda_points - 1) as f64 })
        .collect();
    let mut zs = Vec::new();
    for sign in [1.0, -1.0] {
        for &l in &lambdas {
            for &e in &cfg.eta_values {
                zs.push(SpectralParam::new(l, sign * e)?);
            }
        }
    }
    let f = source_field(cfg, &cfg.grid)?;
    let (solved, failure) = solve_all(&cfg.grid, &cfg.geometry, &zs, &f, &cfg.solver, cfg.delta)?;
    let result = SweepResult { rows: solved.iter().map(|(r, _, _)| *r).collect() };

    let mut out = Outcome::new(Experiment::ScanResolvent, result.table("scan"));
    out.warnings = damping_warnings(cfg, &zs);
    out.stats = solved.iter().map(|(r, _, rep)| (r.z, *rep)).collect();
    out.failure = failure;
    let condition = condition_in_box(cfg)?;
    if let Some(c) = &condition {
        if !c.pass {
            out.unjudged = true;
            out.notes.push(format!("sign condition on S violated (min_product = {:e}); ratios reported without judgment", c.min_product));
        }
    }
    out.condition = condition;
    if out.failure.is_none() && !out.unjudged {
        let series: Vec<Vec<SweepRow>> = result.rows.chunks(cfg.eta_values.len()).map(<[SweepRow]>::to_vec).collect();
        let (band, growth) = scan_pass(&series);
        out.checks.push(Check::at_most("ratio_band", band, cfg.thresholds.ratio_band));
        out.checks.push(Check::at_most("tail_growth", growth, cfg.thresholds.tail_growth));
    }
    out.field = solved.into_iter().last().map(|(_, u, _)| u);
    out.sweep = Some(result);
    Ok(out)
}
