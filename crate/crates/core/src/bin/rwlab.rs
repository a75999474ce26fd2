//! `rwlab <experiment> --config <path> [--out <dir>] [--threads <k>] [--override key=value]...`
//!
//! Exit status: 0 pass or completed, 1 usage or config error, 2 a threshold
//! failed, 3 a solver failed.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use rwlab::lab::{self, parse_assignment, parse_assignments, Experiment, ExperimentConfig};

#[derive(Parser, Debug)]
#[command(name = "rwlab", version, about = "Resolvent experiments for the two-media reduced wave operator")]
struct Cli {
    /// solve, sweep-eta, scan-resolvent, check-geometry, verify-identity or radiation-probe
    #[arg(value_parser = parse_experiment)]
    experiment: Experiment,

    /// Flat key = value config file
    #[arg(long)]
    config: PathBuf,

    /// Output directory; overrides output.dir
    #[arg(long)]
    out: Option<PathBuf>,

    /// Worker threads for independent solves
    #[arg(long, env = "RWLAB_THREADS")]
    threads: Option<usize>,

    /// key=value applied after the file; repeatable
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

fn parse_experiment(s: &str) -> Result<Experiment, String> {
    s.parse().map_err(|e: rwlab::Error| e.to_string())
}

fn load(cli: &Cli) -> rwlab::Result<ExperimentConfig> {
    let text = std::fs::read_to_string(&cli.config)?;
    let mut map = parse_assignments(&text)?;
    if let Some(e) = map.get("experiment") {
        if e != cli.experiment.name() {
            return Err(rwlab::Error::Config(format!("config names experiment '{e}' but '{}' was requested", cli.experiment)));
        }
    }
    map.insert("experiment".into(), cli.experiment.name().into());
    for o in &cli.overrides {
        let (k, v) = parse_assignment(o)?;
        map.insert(k, v);
    }
    ExperimentConfig::from_assignments(map)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match load(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("rwlab: {e}");
            return ExitCode::from(1);
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("rwlab: --threads must be positive");
            return ExitCode::from(1);
        }
        pool = pool.num_threads(t);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("rwlab: thread pool: {e}");
            return ExitCode::from(1);
        }
    };
    let outcome = match pool.install(|| lab::run(&cfg)) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("rwlab: {e}");
            return ExitCode::from(1);
        }
    };
    let dir = cli.out.clone().unwrap_or_else(|| cfg.output_dir.clone());
    if let Err(e) = lab::write_outputs(&cfg, &outcome, &dir) {
        eprintln!("rwlab: writing {}: {e}", dir.display());
        return ExitCode::from(1);
    }
    print!("{}", outcome.summary());
    println!("  output: {}", dir.display());
    ExitCode::from(outcome.verdict().exit_code() as u8)
}
