//! Experiment drivers behind the `rwlab` binary.
//!
//! Each run resolves an [`ExperimentConfig`], produces an [`Outcome`] and
//! writes it with [`write_outputs`]: `manifest.txt`, one main CSV,
//! `checks.csv`, `solver_stats.csv` when anything was solved, and
//! `field.rwf1` holding the last solved field.

mod config;
mod drivers;
mod sweep;

pub use config::{
    parse_assignment, parse_assignments, Experiment, ExperimentConfig, IdentityField, IdentitySpec, ProbeField, ProbeSpec, SourceSpec,
    Thresholds, KEYS,
};
pub use sweep::{cauchy_pass, scan_pass, SweepResult, SweepRow, SWEEP_HEADER};

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::{write_rwf1, Field, WeightProfile};
use crate::geometry::ConditionReport;
use crate::diagnostics::IdentityReport;
use crate::operator_solver::{write_solver_stats, SolveReport};
use crate::spectral::SpectralParam;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// Ran to the end; the experiment has no thresholds.
    Completed,
    /// Ran to the end, but a hypothesis of the estimates fails, so the
    /// thresholds are not applied.
    Unjudged,
    SolverFailed,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Completed => "COMPLETED",
            Verdict::Unjudged => "UNJUDGED",
            Verdict::SolverFailed => "SOLVER_FAILED",
        }
    }

    /// Process exit status for the CLI.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass | Verdict::Completed | Verdict::Unjudged => 0,
            Verdict::Fail => 2,
            Verdict::SolverFailed => 3,
        }
    }
}

/// One threshold test.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `value ≤ limit`.
    pub fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self { name: name.into(), value, limit, pass: value <= limit }
    }

    /// Passes when `value ≥ limit`.
    pub fn at_least(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self { name: name.into(), value, limit, pass: value >= limit }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// File stem of the CSV.
    pub name: String,
    pub header: String,
    pub rows: Vec<String>,
}

impl Table {
    pub fn new(name: &str, header: &str) -> Self {
        Self { name: name.into(), header: header.into(), rows: Vec::new() }
    }

    pub fn csv(&self) -> String {
        let mut s = self.header.clone();
        s.push('\n');
        for r in &self.rows {
            s.push_str(r);
            s.push('\n');
        }
        s
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub experiment: Experiment,
    pub table: Table,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
    pub notes: Vec<String>,
    /// Set when a hypothesis check fails and thresholds are skipped.
    pub unjudged: bool,
    /// Solver error that cut the run short; rows before it are kept.
    pub failure: Option<String>,
    pub stats: Vec<(SpectralParam, SolveReport)>,
    pub field: Option<Field>,
    pub sweep: Option<SweepResult>,
    pub identity: Vec<(WeightProfile, IdentityReport)>,
    pub condition: Option<ConditionReport>,
}

impl Outcome {
    fn new(experiment: Experiment, table: Table) -> Self {
        Self {
            experiment,
            table,
            checks: Vec::new(),
            warnings: Vec::new(),
            notes: Vec::new(),
            unjudged: false,
            failure: None,
            stats: Vec::new(),
            field: None,
            sweep: None,
            identity: Vec::new(),
            condition: None,
        }
    }

    pub fn verdict(&self) -> Verdict {
        if self.failure.is_some() {
            Verdict::SolverFailed
        } else if self.unjudged {
            Verdict::Unjudged
        } else if self.checks.is_empty() {
            Verdict::Completed
        } else if self.checks.iter().all(|c| c.pass) {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn checks_table(&self) -> Table {
        let mut t = Table::new("checks", "check,value,limit,pass");
        for c in &self.checks {
            t.rows.push(format!("{},{:e},{:e},{}", c.name, c.value, c.limit, c.pass));
        }
        t
    }

    /// Human-readable summary for the terminal.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}: {}", self.experiment, self.verdict().name());
        for c in &self.checks {
            let _ = writeln!(s, "  [{}] {} = {:.4e} (limit {:.4e})", if c.pass { "ok" } else { "FAIL" }, c.name, c.value, c.limit);
        }
        for n in &self.notes {
            let _ = writeln!(s, "  {n}");
        }
        for w in &self.warnings {
            let _ = writeln!(s, "  warning: {w}");
        }
        if let Some(f) = &self.failure {
            let _ = writeln!(s, "  solver failure: {f}");
        }
        s
    }
}

/// Runs the configured experiment on the current rayon pool.
pub fn run(cfg: &ExperimentConfig) -> Result<Outcome> {
    match cfg.experiment {
        Experiment::Solve => drivers::run_solve(cfg),
        Experiment::SweepEta => sweep::run_sweep_eta(cfg),
        Experiment::ScanResolvent => sweep::run_scan_resolvent(cfg),
        Experiment::CheckGeometry => drivers::run_check_geometry(cfg),
        Experiment::VerifyIdentity => drivers::run_verify_identity(cfg),
        Experiment::RadiationProbe => drivers::run_radiation_probe(cfg),
    }
}

/// Writes the manifest, tables, solver stats and last field into `dir`.
pub fn write_outputs(cfg: &ExperimentConfig, outcome: &Outcome, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut m = String::new();
    let _ = writeln!(m, "# rwlab {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(m, "# verdict = {}", outcome.verdict().name());
    for n in &outcome.notes {
        let _ = writeln!(m, "# note: {n}");
    }
    for w in &outcome.warnings {
        let _ = writeln!(m, "# warning: {w}");
    }
    if let Some(f) = &outcome.failure {
        let _ = writeln!(m, "# solver failure: {f}");
    }
    m.push_str(&cfg.resolved_text());
    fs::write(dir.join("manifest.txt"), m)?;
    fs::write(dir.join(format!("{}.csv", outcome.table.name)), outcome.table.csv())?;
    fs::write(dir.join("checks.csv"), outcome.checks_table().csv())?;
    if !outcome.stats.is_empty() {
        write_solver_stats(&dir.join("solver_stats.csv"), &cfg.grid, &outcome.stats)?;
    }
    if let Some(u) = &outcome.field {
        write_rwf1(u, &dir.join("field.rwf1"))?;
    }
    Ok(())
}

/// Solver errors end a run with partial output; anything else is a usage error.
fn is_solver_failure(e: &Error) -> bool {
    matches!(e, Error::NotConverged { .. } | Error::Singular(_))
}

#[cfg(test)]
mod tests;
