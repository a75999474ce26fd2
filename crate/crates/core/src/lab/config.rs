//! Flat `key = value` experiment configuration.
//!
//! One assignment per line, `#` starts a comment, blank lines are ignored.
//! Keys are dotted lowercase names from [`KEYS`]; anything else is rejected,
//! as is a key assigned twice. Lists are comma-separated. Axis and plane
//! indices are 1-based here and 0-based in the library.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::diagnostics::WeightScaling;
use crate::error::{Error, Result};
use crate::field::{Grid, WeightProfile};
use crate::geometry::{Geometry, GeometryKind, MediumPair};
use crate::operator_solver::{Closure, Method, SolveConfig};
use crate::spectral::{HalfPlane, SpectralParam};

/// Every accepted key with its default. An empty default means the value is
/// derived from other keys.
pub const KEYS: &[(&str, &str)] = &[
    ("experiment", ""),
    ("dimension", "2"),
    ("geometry.kind", "homogeneous"),
    ("geometry.radius", "1"),
    ("geometry.axis", ""),
    ("geometry.half_angle", "0.5"),
    ("geometry.plane_index", "1"),
    ("geometry.offset", "0"),
    ("geometry.complement", "false"),
    ("geometry.sample_radius", "4"),
    ("geometry.samples", "2000"),
    ("media.mu1", "1"),
    ("media.mu2", "2"),
    ("grid.half_width", "8"),
    ("grid.n", "65"),
    ("spectral.lambda", "1"),
    ("spectral.eta", "0.1"),
    ("spectral.half_plane", "plus"),
    ("spectral.eta_ladder", "1,0.5,0.25,0.125,0.0625,0.03125,0.015625,0.0078125,0.00390625,0.001953125,0.0009765625"),
    ("spectral.c", "0.5"),
    ("spectral.d", "2"),
    ("spectral.lambda_points", "3"),
    ("spectral.eta_values", "1,0.1,0.01,0.001"),
    ("delta", "1"),
    ("solver.method", "auto"),
    ("solver.tolerance", "1e-8"),
    ("solver.max_iterations", "2000"),
    ("solver.restart", "40"),
    ("solver.closure", "sommerfeld"),
    ("source.kind", "gaussian"),
    ("source.width", "1"),
    ("source.center", "0,0,0"),
    ("sweep.truncation_check", "false"),
    ("identity.field", "green"),
    ("identity.inner_radius", "2"),
    ("identity.outer_radius", "6"),
    ("identity.profiles", ""),
    ("identity.scaling", "inverse_sqrt_mu"),
    ("identity.r0", "4"),
    ("identity.alpha", "0.5"),
    ("probe.field", "solved"),
    ("probe.radii", "2,3,4"),
    ("probe.alpha", "1"),
    ("probe.inner_radius", "1"),
    ("thresholds.cauchy_shrink", "0.05"),
    ("thresholds.ratio_band", "10"),
    ("thresholds.tail_growth", "1.2"),
    ("thresholds.truncation", "0.05"),
    ("thresholds.identity", "2e-2"),
    ("thresholds.probe_stability", "0.1"),
    ("thresholds.damping_decay", "1e-2"),
    ("output.dir", "out"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Solve,
    SweepEta,
    ScanResolvent,
    CheckGeometry,
    VerifyIdentity,
    RadiationProbe,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Experiment::Solve,
        Experiment::SweepEta,
        Experiment::ScanResolvent,
        Experiment::CheckGeometry,
        Experiment::VerifyIdentity,
        Experiment::RadiationProbe,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Solve => "solve",
            Experiment::SweepEta => "sweep-eta",
            Experiment::ScanResolvent => "scan-resolvent",
            Experiment::CheckGeometry => "check-geometry",
            Experiment::VerifyIdentity => "verify-identity",
            Experiment::RadiationProbe => "radiation-probe",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| cfg_err(format!("unknown experiment '{s}'")))
    }
}

/// Right-hand side `f` of a solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SourceSpec {
    Zero,
    Gaussian { width: f64, center: [f64; 3] },
}

/// Field fed to the identity check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentityField {
    /// Outgoing point-source wave centred at `source.center`.
    Green,
    /// Gaussian bump with the manufactured source.
    Gaussian,
    /// Finite-difference solution for `source`.
    Solved,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeField {
    Solved,
    Green,
    Plane,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub cauchy_shrink: f64,
    pub ratio_band: f64,
    pub tail_growth: f64,
    pub truncation: f64,
    pub identity: f64,
    pub probe_stability: f64,
    pub damping_decay: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentitySpec {
    pub field: IdentityField,
    pub inner_radius: f64,
    pub outer_radius: f64,
    pub profiles: Vec<WeightProfile>,
    pub scaling: WeightScaling,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSpec {
    pub field: ProbeField,
    pub radii: Vec<f64>,
    pub alpha: f64,
    pub inner_radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub geometry: Geometry,
    pub grid: Grid,
    /// `λ + iη` of a single solve; also the identity and probe parameter.
    pub z: SpectralParam,
    pub eta_ladder: Vec<f64>,
    pub c: f64,
    pub d: f64,
    pub lambda_points: usize,
    pub eta_values: Vec<f64>,
    pub delta: f64,
    pub solver: SolveConfig,
    pub source: SourceSpec,
    pub truncation_check: bool,
    pub identity: IdentitySpec,
    pub probe: ProbeSpec,
    pub thresholds: Thresholds,
    pub sample_radius: f64,
    pub samples: usize,
    pub output_dir: PathBuf,
    resolved: BTreeMap<String, String>,
}

fn cfg_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

/// Reads assignments from config text. Line numbers in errors are 1-based.
pub fn parse_assignments(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = parse_assignment(line).map_err(|e| cfg_err(format!("line {}: {e}", no + 1)))?;
        if map.insert(k.clone(), v).is_some() {
            return Err(cfg_err(format!("line {}: '{k}' assigned twice", no + 1)));
        }
    }
    Ok(map)
}

/// `key=value` as given on a command line.
pub fn parse_assignment(s: &str) -> Result<(String, String)> {
    let Some((k, v)) = s.split_once('=') else {
        return Err(cfg_err(format!("expected key = value, got '{s}'")));
    };
    let k = k.trim();
    if !KEYS.iter().any(|(name, _)| *name == k) {
        return Err(cfg_err(format!("unknown key '{k}'")));
    }
    Ok((k.to_string(), v.trim().to_string()))
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_assignments(parse_assignments(text)?)
    }

    /// Config text plus `key=value` overrides, applied in order.
    pub fn parse_with_overrides(text: &str, overrides: &[String]) -> Result<Self> {
        let mut map = parse_assignments(text)?;
        for o in overrides {
            let (k, v) = parse_assignment(o)?;
            map.insert(k, v);
        }
        Self::from_assignments(map)
    }

    pub fn from_assignments(given: BTreeMap<String, String>) -> Result<Self> {
        let mut map: BTreeMap<String, String> = KEYS.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        for (k, v) in given {
            if !map.contains_key(&k) {
                return Err(cfg_err(format!("unknown key '{k}'")));
            }
            map.insert(k, v);
        }
        let r = Reader { map: &map };

        let experiment: Experiment = r.get("experiment")?.parse()?;
        let dim: usize = r.num("dimension")?;
        if dim != 2 && dim != 3 {
            return Err(cfg_err(format!("dimension {dim} not in {{2, 3}}")));
        }
        if map["geometry.axis"].is_empty() {
            map.insert("geometry.axis".into(), dim.to_string());
        }
        let r = Reader { map: &map };

        let geometry = read_geometry(&r, dim)?;
        let grid = Grid::new(dim, r.num("grid.half_width")?, r.num("grid.n")?).map_err(as_config)?;

        let half_plane = match r.get("spectral.half_plane")? {
            "plus" => HalfPlane::Plus,
            "minus" => HalfPlane::Minus,
            s => return Err(cfg_err(format!("spectral.half_plane must be plus or minus, got '{s}'"))),
        };
        let eta: f64 = r.num("spectral.eta")?;
        if eta < 0.0 {
            return Err(cfg_err("spectral.eta is a magnitude; choose the side with spectral.half_plane"));
        }
        let z = SpectralParam::with_half_plane(r.num("spectral.lambda")?, half_plane.sign() * eta, half_plane).map_err(as_config)?;
        if z.abs_z() == 0.0 {
            return Err(cfg_err("z = 0 is not allowed"));
        }

        let eta_ladder: Vec<f64> = r.list("spectral.eta_ladder")?;
        if eta_ladder.is_empty() || eta_ladder.iter().any(|&e| !(e > 0.0)) || eta_ladder.windows(2).any(|w| w[1] >= w[0]) {
            return Err(cfg_err("spectral.eta_ladder must be positive and strictly decreasing"));
        }
        let c: f64 = r.num("spectral.c")?;
        let d: f64 = r.num("spectral.d")?;
        if !(c > 0.0 && c < d && d.is_finite()) {
            return Err(cfg_err(format!("need 0 < c < d, got c = {c}, d = {d}")));
        }
        let lambda_points: usize = r.num("spectral.lambda_points")?;
        if lambda_points == 0 {
            return Err(cfg_err("spectral.lambda_points must be positive"));
        }
        let eta_values: Vec<f64> = r.list("spectral.eta_values")?;
        if eta_values.is_empty() || eta_values.iter().any(|&e| !(e > 0.0 && e <= 1.0)) || eta_values.windows(2).any(|w| w[1] >= w[0]) {
            return Err(cfg_err("spectral.eta_values must lie in (0, 1] and strictly decrease"));
        }

        let delta: f64 = r.num("delta")?;
        if !(delta > 0.5 && delta <= 1.0) {
            return Err(cfg_err(format!("delta = {delta} outside (1/2, 1]")));
        }

        let solver = SolveConfig {
            method: match r.get("solver.method")? {
                "auto" => Method::Auto,
                "direct" => Method::Direct,
                "iterative" => Method::Iterative,
                s => return Err(cfg_err(format!("solver.method '{s}' not in auto, direct, iterative"))),
            },
            tolerance: r.num("solver.tolerance")?,
            max_iterations: r.num("solver.max_iterations")?,
            restart: r.num("solver.restart")?,
            closure: match r.get("solver.closure")? {
                "sommerfeld" => Closure::SommerfeldFirstOrder,
                "dirichlet" => Closure::Dirichlet,
                s => return Err(cfg_err(format!("solver.closure '{s}' not in sommerfeld, dirichlet"))),
            },
        };
        solver.validate().map_err(as_config)?;

        let center = r.point("source.center")?;
        let source = match r.get("source.kind")? {
            "zero" => SourceSpec::Zero,
            "gaussian" => {
                let width: f64 = r.num("source.width")?;
                if !(width > 0.0) {
                    return Err(cfg_err("source.width must be positive"));
                }
                SourceSpec::Gaussian { width, center }
            }
            s => return Err(cfg_err(format!("source.kind '{s}' not in gaussian, zero"))),
        };

        let identity = read_identity(&r, dim, delta)?;
        let probe = ProbeSpec {
            field: match r.get("probe.field")? {
                "solved" => ProbeField::Solved,
                "green" => ProbeField::Green,
                "plane" => ProbeField::Plane,
                s => return Err(cfg_err(format!("probe.field '{s}' not in solved, green, plane"))),
            },
            radii: r.list("probe.radii")?,
            alpha: r.num("probe.alpha")?,
            inner_radius: r.num("probe.inner_radius")?,
        };
        if probe.radii.is_empty() || probe.radii.windows(2).any(|w| w[1] <= w[0]) || probe.radii[0] <= probe.inner_radius {
            return Err(cfg_err("probe.radii must increase and exceed probe.inner_radius"));
        }

        let thresholds = Thresholds {
            cauchy_shrink: r.num("thresholds.cauchy_shrink")?,
            ratio_band: r.num("thresholds.ratio_band")?,
            tail_growth: r.num("thresholds.tail_growth")?,
            truncation: r.num("thresholds.truncation")?,
            identity: r.num("thresholds.identity")?,
            probe_stability: r.num("thresholds.probe_stability")?,
            damping_decay: r.num("thresholds.damping_decay")?,
        };

        Ok(Self {
            experiment,
            geometry,
            grid,
            z,
            eta_ladder,
            c,
            d,
            lambda_points,
            eta_values,
            delta,
            solver,
            source,
            truncation_check: r.flag("sweep.truncation_check")?,
            identity,
            probe,
            thresholds,
            sample_radius: r.num("geometry.sample_radius")?,
            samples: r.num("geometry.samples")?,
            output_dir: PathBuf::from(r.get("output.dir")?),
            resolved: map.clone(),
        })
    }

    /// Every key with its effective value, sorted, one `key = value` per line.
    pub fn resolved_text(&self) -> String {
        self.resolved.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    pub fn resolved(&self) -> &BTreeMap<String, String> {
        &self.resolved
    }
}

fn as_config(e: Error) -> Error {
    match e {
        Error::InvalidArgument(m) => Error::Config(m),
        e => e,
    }
}

fn read_geometry(r: &Reader, dim: usize) -> Result<Geometry> {
    let media = MediumPair::new(r.num("media.mu1")?, r.num("media.mu2")?).map_err(as_config)?;
    let axis = r.index("geometry.axis", dim)?;
    let kind = match r.get("geometry.kind")? {
        "homogeneous" => return Geometry::homogeneous(dim, media.mu1()).map_err(as_config),
        "cylinder" => GeometryKind::Cylinder { radius: r.num("geometry.radius")?, axis },
        "cone" => GeometryKind::Cone { half_angle: r.num("geometry.half_angle")?, axis },
        "half_space" => GeometryKind::HalfSpace { index: r.index("geometry.plane_index", dim)?, offset: r.num("geometry.offset")? },
        "ball" => GeometryKind::Ball { radius: r.num("geometry.radius")? },
        s => return Err(cfg_err(format!("geometry.kind '{s}' not in homogeneous, cylinder, cone, half_space, ball"))),
    };
    let g = Geometry::new(kind, dim, media).map_err(as_config)?;
    Ok(if r.flag("geometry.complement")? { g.complemented() } else { g })
}

fn read_identity(r: &Reader, dim: usize, delta: f64) -> Result<IdentitySpec> {
    let field = match r.get("identity.field")? {
        "green" => IdentityField::Green,
        "gaussian" => IdentityField::Gaussian,
        "solved" => IdentityField::Solved,
        s => return Err(cfg_err(format!("identity.field '{s}' not in green, gaussian, solved"))),
    };
    let names: Vec<String> = match r.get("identity.profiles")? {
        "" if dim == 3 => vec!["truncated".into(), "power_delta".into(), "two_d_delta".into()],
        "" => vec!["two_d_alpha".into(), "two_d_delta".into(), "truncated".into()],
        s => s.split(',').map(|p| p.trim().to_string()).collect(),
    };
    let r0: f64 = r.num("identity.r0")?;
    let alpha: f64 = r.num("identity.alpha")?;
    let profiles = names
        .iter()
        .map(|n| {
            let p = match n.as_str() {
                "truncated" => WeightProfile::Truncated { r0 },
                "power_delta" => WeightProfile::PowerDelta { delta },
                "two_d_alpha" => WeightProfile::TwoDAlpha { r0, alpha },
                "two_d_delta" => WeightProfile::TwoDDelta { delta },
                s => return Err(cfg_err(format!("unknown weight profile '{s}'"))),
            };
            p.validate().map_err(as_config)?;
            Ok(p)
        })
        .collect::<Result<Vec<_>>>()?;
    let scaling = match r.get("identity.scaling")? {
        "unit" => WeightScaling::Unit,
        "inverse_sqrt_mu" => WeightScaling::InverseSqrtMu,
        s => return Err(cfg_err(format!("identity.scaling '{s}' not in unit, inverse_sqrt_mu"))),
    };
    let spec = IdentitySpec {
        field,
        inner_radius: r.num("identity.inner_radius")?,
        outer_radius: r.num("identity.outer_radius")?,
        profiles,
        scaling,
    };
    if !(spec.inner_radius > 0.0 && spec.inner_radius < spec.outer_radius) {
        return Err(cfg_err("need 0 < identity.inner_radius < identity.outer_radius"));
    }
    Ok(spec)
}

struct Reader<'a> {
    map: &'a BTreeMap<String, String>,
}

impl Reader<'_> {
    fn get(&self, key: &str) -> Result<&str> {
        let v = self.map.get(key).map(String::as_str).unwrap_or("");
        if v.is_empty() && key == "experiment" {
            return Err(cfg_err("no experiment given"));
        }
        Ok(v)
    }

    fn num<T: FromStr>(&self, key: &str) -> Result<T> {
        let v = self.get(key)?;
        v.parse().map_err(|_| cfg_err(format!("{key}: cannot parse '{v}'")))
    }

    fn list(&self, key: &str) -> Result<Vec<f64>> {
        self.get(key)?
            .split(',')
            .map(|s| s.trim().parse().map_err(|_| cfg_err(format!("{key}: cannot parse '{s}'"))))
            .collect()
    }

    fn point(&self, key: &str) -> Result<[f64; 3]> {
        let v = self.list(key)?;
        if v.len() > 3 {
            return Err(cfg_err(format!("{key}: at most three coordinates")));
        }
        let mut p = [0.0; 3];
        p[..v.len()].copy_from_slice(&v);
        Ok(p)
    }

    fn flag(&self, key: &str) -> Result<bool> {
        match self.get(key)? {
            "true" => Ok(true),
            "false" => Ok(false),
            s => Err(cfg_err(format!("{key}: expected true or false, got '{s}'"))),
        }
    }

    /// 1-based index in the file, 0-based in the result.
    fn index(&self, key: &str, dim: usize) -> Result<usize> {
        let i: usize = self.num(key)?;
        if i == 0 || i > dim {
            return Err(cfg_err(format!("{key} = {i} outside 1..={dim}")));
        }
        Ok(i - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> String {
        "experiment = solve\ndimension = 2\n".to_string()
    }

    #[test]
    fn defaults_and_comments() {
        let c = ExperimentConfig::parse("# header\nexperiment = sweep-eta   # trailing\n\n").unwrap();
        assert_eq!(c.experiment, Experiment::SweepEta);
        assert_eq!(c.grid.n(), 65);
        assert_eq!(c.eta_ladder.len(), 11);
        assert_eq!(c.eta_ladder[10], 2f64.powi(-10));
        assert!(c.resolved_text().contains("geometry.axis = 2\n"));
    }

    #[test]
    fn rejects_unknown_and_duplicate_keys() {
        assert!(matches!(ExperimentConfig::parse(&(base() + "grid.m = 3\n")), Err(Error::Config(_))));
        assert!(matches!(ExperimentConfig::parse(&(base() + "dimension = 3\n")), Err(Error::Config(_))));
        assert!(matches!(ExperimentConfig::parse("dimension 3\n"), Err(Error::Config(_))));
        assert!(matches!(ExperimentConfig::parse("dimension = 2\n"), Err(Error::Config(_))));
    }

    #[test]
    fn one_based_axes() {
        let c = ExperimentConfig::parse(&(base() + "geometry.kind = cylinder\ngeometry.axis = 1\n")).unwrap();
        assert_eq!(c.geometry.kind(), GeometryKind::Cylinder { radius: 1.0, axis: 0 });
        assert!(ExperimentConfig::parse(&(base() + "geometry.kind = cylinder\ngeometry.axis = 0\n")).is_err());
        assert!(ExperimentConfig::parse(&(base() + "geometry.kind = cylinder\ngeometry.axis = 3\n")).is_err());
    }

    #[test]
    fn overrides_win() {
        let c = ExperimentConfig::parse_with_overrides(&(base() + "grid.n = 33\n"), &["grid.n=17".into(), "spectral.half_plane=minus".into()]).unwrap();
        assert_eq!(c.grid.n(), 17);
        assert_eq!(c.z.eta(), -0.1);
        assert!(ExperimentConfig::parse_with_overrides(&base(), &["bogus=1".into()]).is_err());
    }

    #[test]
    fn invariants_enforced() {
        for bad in [
            "delta = 0.5\n",
            "delta = 1.01\n",
            "spectral.c = 2\nspectral.d = 1\n",
            "spectral.eta_ladder = 1,0.5,0.5\n",
            "spectral.eta_ladder = 1,-0.5\n",
            "spectral.eta = -1\n",
            "spectral.eta_values = 2,1\n",
            "solver.tolerance = 0.5\n",
            "media.mu1 = 2\nmedia.mu2 = 2\n",
            "probe.radii = 3,2\n",
        ] {
            assert!(matches!(ExperimentConfig::parse(&(base() + bad)), Err(Error::Config(_))), "{bad}");
        }
    }

    #[test]
    fn default_profile_catalogs() {
        let c2 = ExperimentConfig::parse(&base()).unwrap();
        assert_eq!(c2.identity.profiles.len(), 3);
        assert!(c2.identity.profiles.iter().any(|p| matches!(p, WeightProfile::TwoDAlpha { .. })));
        let c3 = ExperimentConfig::parse("experiment = solve\ndimension = 3\n").unwrap();
        assert!(c3.identity.profiles.contains(&WeightProfile::PowerDelta { delta: 1.0 }));
    }
}
