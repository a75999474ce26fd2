use super::*;

fn cfg(text: &str) -> ExperimentConfig {
    ExperimentConfig::parse(text).unwrap()
}

const SMALL_STRIP: &str = "dimension = 2
geometry.kind = cylinder
geometry.radius = 1
media.mu1 = 1
media.mu2 = 2
grid.half_width = 4
grid.n = 41
spectral.lambda = 1
source.width = 0.7
";

#[test]
fn zero_source_ladder_passes() {
    let c = cfg(&format!("experiment = sweep-eta\n{SMALL_STRIP}source.kind = zero\nspectral.eta_ladder = 1,0.5,0.25\n"));
    let out = run(&c).unwrap();
    assert_eq!(out.verdict(), Verdict::Pass);
    let sweep = out.sweep.unwrap();
    assert_eq!(sweep.cauchy(), vec![0.0, 0.0]);
    assert!(sweep.rows.iter().all(|r| r.norm_u == 0.0 && r.resolvent_ratio == 0.0));
    assert!(sweep.rows[0].cauchy.is_none());
}

#[test]
fn strip_ladder_converges() {
    let c = cfg(&format!("experiment = sweep-eta\n{SMALL_STRIP}spectral.eta_ladder = 1,0.5,0.25,0.125,0.0625,0.03125,0.015625,0.0078125,0.00390625\n"));
    let out = run(&c).unwrap();
    let d = out.sweep.as_ref().unwrap().cauchy();
    assert_eq!(d.len(), 8);
    assert!(d.windows(2).all(|w| w[1] < w[0]), "{d:?}");
    assert_eq!(out.verdict(), Verdict::Pass, "{}", out.summary());
    assert!(!out.warnings.is_empty(), "small eta on a 4-wide box should warn");
    assert_eq!(out.table.rows.len(), 9);
}

#[test]
fn minus_ladder_is_the_conjugate() {
    let base = format!("experiment = sweep-eta\n{SMALL_STRIP}spectral.eta_ladder = 1,0.25,0.0625\n");
    let plus = run(&cfg(&base)).unwrap();
    let minus = run(&cfg(&(base + "spectral.half_plane = minus\n"))).unwrap();
    let (p, m) = (plus.sweep.unwrap(), minus.sweep.unwrap());
    for (a, b) in p.rows.iter().zip(&m.rows) {
        assert_eq!(a.z.eta(), -b.z.eta());
        for (x, y) in [(a.norm_u, b.norm_u), (a.resolvent_ratio, b.resolvent_ratio), (a.radiation_ratio, b.radiation_ratio), (a.h2_ratio, b.h2_ratio)]
        {
            assert!((x - y).abs() <= 1e-12 * x.abs().max(1e-300), "{x} vs {y}");
        }
    }
    let fp = plus.field.unwrap();
    let fm = minus.field.unwrap();
    assert!(fp.conj().sub(&fm).unwrap().max_abs() <= 1e-12 * fp.max_abs());
}

#[test]
fn scan_and_sweep_agree_at_equal_z() {
    let sweep = run(&cfg(&format!("experiment = sweep-eta\n{SMALL_STRIP}spectral.eta_ladder = 1,0.001\n"))).unwrap();
    let scan = run(&cfg(&format!(
        "experiment = scan-resolvent\n{SMALL_STRIP}spectral.c = 1\nspectral.d = 2\nspectral.lambda_points = 2\nspectral.eta_values = 0.1,0.001\n"
    )))
    .unwrap();
    let a = sweep.sweep.unwrap().rows[1];
    let rows = scan.sweep.unwrap().rows;
    assert_eq!(rows.len(), 8);
    let b = rows.iter().find(|r| r.z.lambda() == 1.0 && r.z.eta() == 0.001).unwrap();
    assert!((a.norm_u - b.norm_u).abs() <= 1e-10 * a.norm_u);
    assert_eq!(scan.checks.len(), 2);
}

#[test]
fn scan_on_inverted_ball_is_unjudged() {
    let c = cfg("experiment = scan-resolvent
dimension = 2
geometry.kind = ball
geometry.radius = 1
media.mu1 = 3
media.mu2 = 1
grid.half_width = 3
grid.n = 25
spectral.lambda_points = 1
spectral.eta_values = 1,0.1
");
    let out = run(&c).unwrap();
    assert_eq!(out.verdict(), Verdict::Unjudged);
    assert!(out.checks.is_empty());
    assert_eq!(out.table.rows.len(), 4);
    assert!(out.condition.unwrap().min_product < 0.0);
}

#[test]
fn geometry_condition_cases() {
    let run_geo = |extra: &str| run(&cfg(&format!("experiment = check-geometry\ndimension = 3\n{extra}"))).unwrap();
    let cyl = run_geo("geometry.kind = cylinder\nmedia.mu1 = 1\nmedia.mu2 = 2\n");
    assert_eq!(cyl.verdict(), Verdict::Pass);
    assert!((cyl.condition.unwrap().min_product - 1.0).abs() < 1e-12);
    let plane = run_geo("geometry.kind = half_space\ngeometry.plane_index = 3\n");
    assert_eq!(plane.verdict(), Verdict::Pass);
    assert_eq!(plane.condition.unwrap().min_product.abs(), 0.0);
    let ball = run_geo("geometry.kind = ball\nmedia.mu1 = 2\nmedia.mu2 = 1\n");
    assert_eq!(ball.verdict(), Verdict::Fail);
    assert!((ball.condition.unwrap().min_product + 1.0).abs() < 1e-12);
    let none = run_geo("geometry.kind = homogeneous\n");
    assert_eq!(none.verdict(), Verdict::Completed);
}

#[test]
fn solver_failure_keeps_partial_rows() {
    let text = format!("experiment = sweep-eta\n{SMALL_STRIP}solver.method = iterative\nsolver.max_iterations = 2\nsolver.restart = 2\n");
    let c = ExperimentConfig::parse_with_overrides(&text, &["grid.n=33".into()]).unwrap();
    let out = run(&c).unwrap();
    assert_eq!(out.verdict(), Verdict::SolverFailed);
    assert_eq!(out.verdict().exit_code(), 3);
    assert!(out.failure.as_ref().unwrap().contains("z = 1e0+1e0i"), "{:?}", out.failure);
    assert!(out.table.rows.is_empty());
}

#[test]
fn identity_driver_on_the_green_field() {
    let c = cfg("experiment = verify-identity
dimension = 3
grid.half_width = 5
grid.n = 49
spectral.lambda = 1
spectral.eta = 0.5
source.center = 0.3,-0.2,0.45
identity.inner_radius = 1.8
identity.outer_radius = 4
");
    let out = run(&c).unwrap();
    assert_eq!(out.identity.len(), 3);
    assert_eq!(out.table.rows.len(), 3);
    for (p, rep) in &out.identity {
        assert!(rep.residual < 0.1, "{}: {}", p.name(), rep.residual);
    }
}

#[test]
fn identity_green_field_needs_one_medium() {
    let c = cfg("experiment = verify-identity\ngeometry.kind = cylinder\nspectral.eta = 0\n");
    assert!(matches!(run(&c), Err(Error::Config(_))));
    let c = cfg("experiment = verify-identity\n");
    assert!(matches!(run(&c), Err(Error::Config(_))), "2-D point source needs real z");
}

#[test]
fn probe_on_a_solved_field() {
    let c = cfg("experiment = radiation-probe
dimension = 2
grid.half_width = 6
grid.n = 97
spectral.lambda = 1
spectral.eta = 0.001
source.width = 0.5
probe.radii = 2,3,4,5
");
    let out = run(&c).unwrap();
    // four surface quantities, two volume residuals and two energies per radius
    assert_eq!(out.table.rows.len(), 8 * 4);
    assert_eq!(out.checks.len(), 1);
    assert_eq!(out.verdict(), Verdict::Pass, "{}", out.summary());
    let flux: Vec<f64> = out.table.rows.iter().filter(|r| r.starts_with("flux,")).map(|r| r.rsplit(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(flux.len(), 4);
    for w in flux.windows(2) {
        assert!((w[1] - w[0]).abs() < 0.05 * w[0].abs(), "{flux:?}");
    }
}

#[test]
fn outputs_are_written_and_repeatable() {
    let c = cfg(&format!("experiment = sweep-eta\n{SMALL_STRIP}spectral.eta_ladder = 1,0.5\n"));
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        write_outputs(&c, &run(&c).unwrap(), d).unwrap();
    }
    for name in ["manifest.txt", "sweep.csv", "checks.csv", "solver_stats.csv", "field.rwf1"] {
        assert!(a.join(name).exists(), "{name}");
    }
    for name in ["manifest.txt", "sweep.csv", "checks.csv", "field.rwf1"] {
        assert_eq!(std::fs::read(a.join(name)).unwrap(), std::fs::read(b.join(name)).unwrap(), "{name}");
    }
    let manifest = std::fs::read_to_string(a.join("manifest.txt")).unwrap();
    assert!(manifest.contains("# verdict = "));
    assert!(manifest.contains("grid.n = 41\n"));
    let u = crate::field::read_rwf1(&a.join("field.rwf1")).unwrap();
    assert_eq!(u.grid().n(), 41);
}
