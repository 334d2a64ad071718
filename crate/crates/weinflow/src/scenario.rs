//! Scenario files: a line-oriented `key = value` format describing one flow
//! run, and the assembly of the parsed fields into runnable objects.
//!
//! Grammar: one `section.key = value` per line, `#` starts a comment,
//! blank lines are skipped. Unknown and duplicated keys are hard errors;
//! a misspelled physics parameter must never fall back to a default
//! silently. The recognized keys:
//!
//! ```text
//! ambient.family      euclidean | sphere | hyperbolic | custom
//! ambient.r_min       inner radius of the admissible domain
//! ambient.r_max       outer radius of the admissible domain
//! ambient.dimension   hypersurface dimension n
//! ambient.table       r, theta, dtheta, ddtheta, chi  (repeatable; knots of a custom warp)
//! ambient.c0          claimed convexity floor of a custom warp, certified by sampling
//! mode.kind           umbilic | curve | axisymmetric
//! mode.nodes          grid size (curve and axisymmetric only)
//! curvature.family    sigma1 | sigma_k_root | gauss_root | harmonic_mean | quotient
//! curvature.k         order (required for sigma_k_root; quotient defaults to n)
//! f.constant          constant target value
//! f.coefficients      radial polynomial in r, ascending powers, comma separated
//! f.table             r, value  (repeatable; piecewise-linear target in r)
//! initial.radius      centered slice radius (constant profile)
//! initial.base_radius base radius for a cosine-perturbed start
//! initial.mode        frequency, amplitude  (repeatable; adds a cosine mode)
//! flow.t_max          time horizon (required)
//! flow.dt_safety      fraction of the stability step bound, default 0.2
//! flow.tol_residual   convergence tolerance on max |F - f|, default 1e-8
//! flow.tol_velocity   convergence tolerance on the speed, default 1e-10
//! flow.lambda         weight of the convex potential in w, default 1
//! flow.theta          auto | explicit support floor
//! flow.max_steps      hard step budget, default 10000000
//! barrier.lower       slice radius of the inner barrier (give both or none)
//! barrier.upper       slice radius of the outer barrier
//! output.directory    subdirectory for this run's files
//! output.cadence      record every this many steps, default 10
//! ```

use std::fs;
use std::path::Path;

use crate::ambient::{WarpTable, WarpedProductSpace};
use crate::error::{Error, Result};
use crate::flow::{Barriers, FlowConfig, TargetCurvature, ThetaSpec};
use crate::hypersurface::GraphHypersurface;
use crate::symfunc::{CurvatureFunction, Family};

/// Grid used to certify a custom warp's claimed convexity floor when the
/// scenario is assembled; a dip between table knots must not slip through.
const WARP_CERTIFY_SAMPLES: usize = 2001;

/// Everything one run needs, assembled and cross-validated.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub surface: GraphHypersurface,
    pub initial: Vec<f64>,
    pub config: FlowConfig,
    /// Subdirectory (under the output root) receiving this run's files.
    pub directory: String,
}

/// Parsed scenario fields, prior to cross-field validation.
#[derive(Debug, Clone, Default)]
pub struct ScenarioConfig {
    ambient_family: Option<String>,
    r_min: Option<f64>,
    r_max: Option<f64>,
    dimension: Option<usize>,
    ambient_table: Vec<(f64, f64, f64, f64, f64)>,
    ambient_c0: Option<f64>,
    mode_kind: Option<String>,
    mode_nodes: Option<usize>,
    curvature_family: Option<String>,
    curvature_k: Option<usize>,
    f_constant: Option<f64>,
    f_coefficients: Option<Vec<f64>>,
    f_table: Vec<(f64, f64)>,
    initial_radius: Option<f64>,
    initial_base_radius: Option<f64>,
    initial_modes: Vec<(usize, f64)>,
    t_max: Option<f64>,
    dt_safety: Option<f64>,
    tol_residual: Option<f64>,
    tol_velocity: Option<f64>,
    lambda: Option<f64>,
    theta: Option<ThetaSpec>,
    max_steps: Option<usize>,
    barrier_lower: Option<f64>,
    barrier_upper: Option<f64>,
    output_directory: Option<String>,
    output_cadence: Option<usize>,
}

fn config_err(line: usize, msg: impl AsRef<str>) -> Error {
    Error::Config(format!("line {}: {}", line, msg.as_ref()))
}

fn parse_num<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| config_err(line, format!("cannot parse '{value}' for {key}")))
}

fn parse_list(line: usize, key: &str, value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(|s| parse_num(line, key, s.trim()))
        .collect()
}

fn set_once<T>(slot: &mut Option<T>, value: T, line: usize, key: &str) -> Result<()> {
    if slot.is_some() {
        return Err(config_err(line, format!("duplicate key {key}")));
    }
    *slot = Some(value);
    Ok(())
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ScenarioConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| config_err(line, format!("expected key = value, got '{content}'")))?;
            let (key, value) = (key.trim(), value.trim());
            if value.is_empty() {
                return Err(config_err(line, format!("empty value for {key}")));
            }
            cfg.apply(line, key, value)?;
        }
        Ok(cfg)
    }

    /// Read and parse a scenario file. The file stem becomes the default
    /// output directory so sweeps over several configs do not collide.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| {
            Error::Config(format!("cannot read {}: {e}", path.display()))
        })?;
        let mut cfg = Self::parse(&text)?;
        if cfg.output_directory.is_none() {
            cfg.output_directory = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned());
        }
        Ok(cfg)
    }

    fn apply(&mut self, line: usize, key: &str, value: &str) -> Result<()> {
        match key {
            "ambient.family" => set_once(&mut self.ambient_family, value.to_string(), line, key),
            "ambient.r_min" => set_once(&mut self.r_min, parse_num(line, key, value)?, line, key),
            "ambient.r_max" => set_once(&mut self.r_max, parse_num(line, key, value)?, line, key),
            "ambient.dimension" => {
                set_once(&mut self.dimension, parse_num(line, key, value)?, line, key)
            }
            "ambient.table" => {
                let parts = parse_list(line, key, value)?;
                if parts.len() != 5 {
                    return Err(config_err(
                        line,
                        "ambient.table takes r, theta, dtheta, ddtheta, chi",
                    ));
                }
                self.ambient_table
                    .push((parts[0], parts[1], parts[2], parts[3], parts[4]));
                Ok(())
            }
            "ambient.c0" => {
                set_once(&mut self.ambient_c0, parse_num(line, key, value)?, line, key)
            }
            "mode.kind" => set_once(&mut self.mode_kind, value.to_string(), line, key),
            "mode.nodes" => set_once(&mut self.mode_nodes, parse_num(line, key, value)?, line, key),
            "curvature.family" => {
                set_once(&mut self.curvature_family, value.to_string(), line, key)
            }
            "curvature.k" => set_once(&mut self.curvature_k, parse_num(line, key, value)?, line, key),
            "f.constant" => set_once(&mut self.f_constant, parse_num(line, key, value)?, line, key),
            "f.coefficients" => set_once(
                &mut self.f_coefficients,
                parse_list(line, key, value)?,
                line,
                key,
            ),
            "f.table" => {
                let parts = parse_list(line, key, value)?;
                if parts.len() != 2 {
                    return Err(config_err(line, "f.table takes r, value"));
                }
                self.f_table.push((parts[0], parts[1]));
                Ok(())
            }
            "initial.radius" => {
                set_once(&mut self.initial_radius, parse_num(line, key, value)?, line, key)
            }
            "initial.base_radius" => set_once(
                &mut self.initial_base_radius,
                parse_num(line, key, value)?,
                line,
                key,
            ),
            "initial.mode" => {
                let parts = parse_list(line, key, value)?;
                if parts.len() != 2 {
                    return Err(config_err(line, "initial.mode takes frequency, amplitude"));
                }
                if parts[0] < 1.0 || parts[0].fract() != 0.0 {
                    return Err(config_err(line, "mode frequency must be a positive integer"));
                }
                self.initial_modes.push((parts[0] as usize, parts[1]));
                Ok(())
            }
            "flow.t_max" => set_once(&mut self.t_max, parse_num(line, key, value)?, line, key),
            "flow.dt_safety" => {
                set_once(&mut self.dt_safety, parse_num(line, key, value)?, line, key)
            }
            "flow.tol_residual" => {
                set_once(&mut self.tol_residual, parse_num(line, key, value)?, line, key)
            }
            "flow.tol_velocity" => {
                set_once(&mut self.tol_velocity, parse_num(line, key, value)?, line, key)
            }
            "flow.lambda" => set_once(&mut self.lambda, parse_num(line, key, value)?, line, key),
            "flow.theta" => {
                let spec = if value == "auto" {
                    ThetaSpec::Auto
                } else {
                    ThetaSpec::Value(parse_num(line, key, value)?)
                };
                set_once(&mut self.theta, spec, line, key)
            }
            "flow.max_steps" => {
                set_once(&mut self.max_steps, parse_num(line, key, value)?, line, key)
            }
            "barrier.lower" => {
                set_once(&mut self.barrier_lower, parse_num(line, key, value)?, line, key)
            }
            "barrier.upper" => {
                set_once(&mut self.barrier_upper, parse_num(line, key, value)?, line, key)
            }
            "output.directory" => {
                set_once(&mut self.output_directory, value.to_string(), line, key)
            }
            "output.cadence" => {
                set_once(&mut self.output_cadence, parse_num(line, key, value)?, line, key)
            }
            _ => Err(config_err(line, format!("unknown key '{key}'"))),
        }
    }

    fn require<T: Copy>(slot: Option<T>, key: &str) -> Result<T> {
        slot.ok_or_else(|| Error::Config(format!("missing required key {key}")))
    }

    /// Cross-validate and assemble the runnable scenario.
    pub fn build(&self) -> Result<Scenario> {
        let r_min = Self::require(self.r_min, "ambient.r_min")?;
        let r_max = Self::require(self.r_max, "ambient.r_max")?;
        let family = self
            .ambient_family
            .as_deref()
            .ok_or_else(|| Error::Config("missing required key ambient.family".into()))?;
        if family != "custom" && (!self.ambient_table.is_empty() || self.ambient_c0.is_some()) {
            return Err(Error::Config(format!(
                "ambient.table and ambient.c0 are only used with ambient.family = custom, not {family}"
            )));
        }
        let space = match family {
            "euclidean" => WarpedProductSpace::euclidean(r_min, r_max)?,
            "sphere" => WarpedProductSpace::sphere(r_min, r_max)?,
            "hyperbolic" => WarpedProductSpace::hyperbolic(r_min, r_max)?,
            "custom" => {
                if self.ambient_table.is_empty() {
                    return Err(Error::Config(
                        "ambient.family = custom needs ambient.table rows".into(),
                    ));
                }
                let c0 = Self::require(self.ambient_c0, "ambient.c0")?;
                let table = WarpTable::new(&self.ambient_table, c0)?;
                let space = WarpedProductSpace::custom(table, r_min, r_max)?;
                space.certify_convexity(WARP_CERTIFY_SAMPLES)?;
                space
            }
            other => {
                return Err(Error::Config(format!(
                    "unknown ambient.family '{other}' (euclidean | sphere | hyperbolic | custom)"
                )))
            }
        };
        let n = Self::require(self.dimension, "ambient.dimension")?;

        let mode = self
            .mode_kind
            .as_deref()
            .ok_or_else(|| Error::Config("missing required key mode.kind".into()))?;
        let surface = match mode {
            "umbilic" => {
                if self.mode_nodes.is_some() {
                    return Err(Error::Config("mode.nodes is not used in umbilic mode".into()));
                }
                GraphHypersurface::umbilic(space, n)?
            }
            "curve" => {
                if n != 1 {
                    return Err(Error::Config(format!(
                        "curve mode requires ambient.dimension = 1, got {n}"
                    )));
                }
                GraphHypersurface::curve(space, Self::require(self.mode_nodes, "mode.nodes")?)?
            }
            "axisymmetric" => {
                if n != 2 {
                    return Err(Error::Config(format!(
                        "axisymmetric mode requires ambient.dimension = 2, got {n}"
                    )));
                }
                GraphHypersurface::axisymmetric(
                    space,
                    Self::require(self.mode_nodes, "mode.nodes")?,
                )?
            }
            other => {
                return Err(Error::Config(format!(
                    "unknown mode.kind '{other}' (umbilic | curve | axisymmetric)"
                )))
            }
        };

        let family_name = self
            .curvature_family
            .as_deref()
            .ok_or_else(|| Error::Config("missing required key curvature.family".into()))?;
        let function = function_from_parts(family_name, self.curvature_k, n)?;

        let target = match (&self.f_constant, &self.f_coefficients, &self.f_table[..]) {
            (Some(c), None, []) => TargetCurvature::Constant(*c),
            (None, Some(coeffs), []) => TargetCurvature::Polynomial(coeffs.clone()),
            (None, None, rows) if !rows.is_empty() => TargetCurvature::Table {
                rs: rows.iter().map(|&(r, _)| r).collect(),
                fs: rows.iter().map(|&(_, f)| f).collect(),
            },
            _ => {
                return Err(Error::Config(
                    "give exactly one of f.constant, f.coefficients, or f.table".into(),
                ))
            }
        };

        let initial = self.initial_profile(&surface)?;
        let lo = surface.space().r_lo();
        let hi = surface.space().r_hi();
        for &u in &initial {
            if u <= lo || u >= hi {
                return Err(Error::Validation(format!(
                    "initial radius {u} outside ambient domain ({lo}, {hi})"
                )));
            }
        }

        let mut config = FlowConfig::new(
            function,
            target,
            Self::require(self.t_max, "flow.t_max")?,
        );
        if let Some(v) = self.dt_safety {
            config.dt_safety = v;
        }
        if let Some(v) = self.tol_residual {
            config.tol_residual = v;
        }
        if let Some(v) = self.tol_velocity {
            config.tol_velocity = v;
        }
        if let Some(v) = self.lambda {
            config.lambda = v;
        }
        if let Some(v) = self.theta {
            config.theta = v;
        }
        if let Some(v) = self.max_steps {
            config.max_steps = v;
        }
        if let Some(v) = self.output_cadence {
            config.cadence = v;
        }
        config.barriers = match (self.barrier_lower, self.barrier_upper) {
            (Some(lo), Some(hi)) => Some(Barriers {
                lower: vec![lo; surface.nodes()],
                upper: vec![hi; surface.nodes()],
            }),
            (None, None) => None,
            _ => {
                return Err(Error::Config(
                    "barriers need both barrier.lower and barrier.upper".into(),
                ))
            }
        };
        config.validate()?;

        Ok(Scenario {
            surface,
            initial,
            config,
            directory: self.output_directory.clone().unwrap_or_else(|| "run".into()),
        })
    }

    fn initial_profile(&self, surface: &GraphHypersurface) -> Result<Vec<f64>> {
        match (self.initial_radius, self.initial_base_radius) {
            (Some(r), None) => {
                if !self.initial_modes.is_empty() {
                    return Err(Error::Config(
                        "initial.mode requires initial.base_radius, not initial.radius".into(),
                    ));
                }
                Ok(vec![r; surface.nodes()])
            }
            (None, Some(base)) => {
                if surface.nodes() == 1 {
                    return Err(Error::Config(
                        "umbilic mode takes initial.radius, not a perturbed profile".into(),
                    ));
                }
                if self.initial_modes.is_empty() {
                    return Err(Error::Config(
                        "initial.base_radius needs at least one initial.mode".into(),
                    ));
                }
                Ok((0..surface.nodes())
                    .map(|i| {
                        let angle = surface.angle(i);
                        base + self
                            .initial_modes
                            .iter()
                            .map(|&(k, a)| a * (k as f64 * angle).cos())
                            .sum::<f64>()
                    })
                    .collect())
            }
            _ => Err(Error::Config(
                "give exactly one of initial.radius or initial.base_radius".into(),
            )),
        }
    }
}

/// Resolve a curvature-function name and optional order against the
/// hypersurface dimension. Orders are accepted only where they mean
/// something: sigma_k_root requires one, quotient defaults to n.
pub fn function_from_parts(name: &str, k: Option<usize>, n: usize) -> Result<CurvatureFunction> {
    let reject_k = |fam: Family| -> Result<Family> {
        if k.is_some() {
            Err(Error::Config(format!("curvature.k is not used by {name}")))
        } else {
            Ok(fam)
        }
    };
    let family = match name {
        "sigma1" => reject_k(Family::Sigma1)?,
        "gauss_root" => reject_k(Family::GaussRoot)?,
        "harmonic_mean" => reject_k(Family::HarmonicMean)?,
        "sigma_k_root" => Family::SigmaKRoot {
            k: k.ok_or_else(|| {
                Error::Config("sigma_k_root needs an order: sigma_k_root:K or curvature.k".into())
            })?,
        },
        "quotient" => Family::Quotient { k: k.unwrap_or(n) },
        other => {
            return Err(Error::Config(format!(
                "unknown curvature.family '{other}'"
            )))
        }
    };
    CurvatureFunction::new(family, n)
}

/// Parse a command-line function token: a bare name or `name:k`.
pub fn function_from_token(token: &str, n: usize) -> Result<CurvatureFunction> {
    match token.split_once(':') {
        Some((name, order)) => {
            let k: usize = order
                .parse()
                .map_err(|_| Error::Config(format!("cannot parse order in '{token}'")))?;
            function_from_parts(name, Some(k), n)
        }
        None => function_from_parts(token, None, n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypersurface::SurfaceClass;
    use std::f64::consts::PI;

    const UMBILIC: &str = "\
# gauss curvature toward a centered sphere of radius 2
ambient.family = euclidean
ambient.r_min = 0.1
ambient.r_max = 6.0
ambient.dimension = 2
mode.kind = umbilic
curvature.family = gauss_root
f.constant = 0.5
initial.radius = 1.0
flow.t_max = 200.0
";

    #[test]
    fn umbilic_scenario_assembles() {
        let scenario = ScenarioConfig::parse(UMBILIC).unwrap().build().unwrap();
        assert_eq!(scenario.surface.class(), SurfaceClass::Umbilic { n: 2 });
        assert_eq!(scenario.initial, vec![1.0]);
        assert_eq!(scenario.config.t_max, 200.0);
        assert_eq!(scenario.config.cadence, 10);
        assert_eq!(scenario.directory, "run");
    }

    #[test]
    fn perturbed_curve_profile_matches_its_modes() {
        let text = "\
ambient.family = euclidean
ambient.r_min = 0.05
ambient.r_max = 3.0
ambient.dimension = 1
mode.kind = curve
mode.nodes = 16
curvature.family = sigma1
f.constant = 1.0
initial.base_radius = 0.8
initial.mode = 2, 0.05
initial.mode = 3, -0.02
flow.t_max = 1.0
output.cadence = 5
output.directory = wavy
";
        let scenario = ScenarioConfig::parse(text).unwrap().build().unwrap();
        assert_eq!(scenario.config.cadence, 5);
        assert_eq!(scenario.directory, "wavy");
        for (i, &u) in scenario.initial.iter().enumerate() {
            let phi = 2.0 * PI * i as f64 / 16.0;
            let want = 0.8 + 0.05 * (2.0 * phi).cos() - 0.02 * (3.0 * phi).cos();
            assert!((u - want).abs() < 1e-15);
        }
    }

    #[test]
    fn unknown_and_duplicate_keys_are_rejected_with_line_numbers() {
        let err = ScenarioConfig::parse("ambient.famly = euclidean\n").unwrap_err();
        assert!(matches!(&err, Error::Config(m)
            if m.contains("line 1") && m.contains("ambient.famly")));
        let err = ScenarioConfig::parse("flow.t_max = 1.0\nflow.t_max = 2.0\n").unwrap_err();
        assert!(matches!(&err, Error::Config(m)
            if m.contains("line 2") && m.contains("duplicate")));
    }

    #[test]
    fn cross_field_mismatches_are_rejected() {
        // curve mode in the wrong dimension
        let bad_dim = UMBILIC.replace("mode.kind = umbilic", "mode.kind = curve");
        let err = ScenarioConfig::parse(&bad_dim).unwrap().build().unwrap_err();
        assert!(matches!(&err, Error::Config(m) if m.contains("dimension = 1")));

        // initial slice outside the ambient domain
        let outside = UMBILIC.replace("initial.radius = 1.0", "initial.radius = 7.0");
        let err = ScenarioConfig::parse(&outside).unwrap().build().unwrap_err();
        assert!(matches!(&err, Error::Validation(m) if m.contains("outside ambient domain")));

        // two target specifications at once
        let doubled = format!("{UMBILIC}f.coefficients = 1.0, 2.0\n");
        let err = ScenarioConfig::parse(&doubled).unwrap().build().unwrap_err();
        assert!(matches!(&err, Error::Config(m) if m.contains("exactly one of f.constant")));

        // umbilic mode with a grid size
        let with_nodes = format!("{UMBILIC}mode.nodes = 32\n");
        let err = ScenarioConfig::parse(&with_nodes).unwrap().build().unwrap_err();
        assert!(matches!(&err, Error::Config(m) if m.contains("not used in umbilic")));

        // one-sided barrier
        let one_sided = format!("{UMBILIC}barrier.lower = 0.5\n");
        let err = ScenarioConfig::parse(&one_sided).unwrap().build().unwrap_err();
        assert!(matches!(&err, Error::Config(m) if m.contains("barrier.upper")));
    }

    const CUSTOM_WARP: &str = "\
# straight-line warp given as knot data: theta = r, chi = r^2/2
ambient.family = custom
ambient.r_min = 0.5
ambient.r_max = 3.0
ambient.c0 = 0.9
ambient.table = 0.5, 0.5, 1.0, 0.0, 0.125
ambient.table = 1.75, 1.75, 1.0, 0.0, 1.53125
ambient.table = 3.0, 3.0, 1.0, 0.0, 4.5
ambient.dimension = 2
mode.kind = umbilic
curvature.family = gauss_root
f.constant = 0.5
initial.radius = 1.0
flow.t_max = 1.0
";

    #[test]
    fn custom_warp_table_reproduces_the_straight_line_warp() {
        let scenario = ScenarioConfig::parse(CUSTOM_WARP).unwrap().build().unwrap();
        let space = scenario.surface.space();
        assert_eq!(space.label(), "custom");
        // knot data of a degree <= 2 warp, so the interpolant is exact
        for r in [0.6, 1.3, 1.75, 2.4, 3.0] {
            let eval = space.chi_eval(r).unwrap();
            assert!((eval.value - r * r / 2.0).abs() < 1e-12);
            assert!((eval.radial_derivative - r).abs() < 1e-12);
            assert!((eval.margin - 0.1).abs() < 1e-9);
        }
    }

    #[test]
    fn tabulated_target_interpolates_between_its_rows() {
        let text = "\
ambient.family = euclidean
ambient.r_min = 0.05
ambient.r_max = 3.0
ambient.dimension = 1
mode.kind = curve
mode.nodes = 8
curvature.family = sigma1
f.table = 0.5, 2.0
f.table = 2.5, 1.0
initial.radius = 1.0
flow.t_max = 1.0
";
        let scenario = ScenarioConfig::parse(text).unwrap().build().unwrap();
        let (value, slope) = scenario.config.target.eval(1.5);
        assert!((value - 1.5).abs() < 1e-15);
        assert!((slope + 0.5).abs() < 1e-15);
    }

    #[test]
    fn custom_warp_misuse_is_rejected() {
        // table rows alongside a named family
        let stray = format!("{UMBILIC}ambient.table = 0.5, 0.5, 1.0, 0.0, 0.125\n");
        let err = ScenarioConfig::parse(&stray).unwrap().build().unwrap_err();
        assert!(matches!(&err, Error::Config(m) if m.contains("only used with")));

        // wrong row arity, flagged at the offending line
        let err = ScenarioConfig::parse("ambient.table = 0.5, 0.5, 1.0\n").unwrap_err();
        assert!(matches!(&err, Error::Config(m)
            if m.contains("line 1") && m.contains("r, theta, dtheta, ddtheta, chi")));

        // custom family without its table or without the claimed floor
        let bare = "ambient.family = custom\nambient.r_min = 0.5\nambient.r_max = 3.0\n";
        let err = ScenarioConfig::parse(bare).unwrap().build().unwrap_err();
        assert!(matches!(&err, Error::Config(m) if m.contains("needs ambient.table")));
        let no_floor = format!("{bare}ambient.table = 0.5, 0.5, 1.0, 0.0, 0.125\nambient.table = 3.0, 3.0, 1.0, 0.0, 4.5\n");
        let err = ScenarioConfig::parse(&no_floor).unwrap().build().unwrap_err();
        assert!(matches!(&err, Error::Config(m) if m.contains("ambient.c0")));

        // claimed floor above the tabled slope is caught at the rows
        let overclaimed = CUSTOM_WARP.replace("ambient.c0 = 0.9", "ambient.c0 = 1.5");
        let err = ScenarioConfig::parse(&overclaimed).unwrap().build().unwrap_err();
        assert!(matches!(&err, Error::Argument(m) if m.contains("undercuts the declared c0")));
    }

    #[test]
    fn convexity_dip_between_knots_fails_certification() {
        // knot slopes sit exactly on c0 = 0.9, but chi' rises only 0.5 over
        // the interval, so the interpolated chi'' must dip below 0.9 inside
        let text = "\
ambient.family = custom
ambient.r_min = 1.0
ambient.r_max = 2.0
ambient.c0 = 0.9
ambient.table = 1.0, 1.0, 0.9, 0.0, 0.5
ambient.table = 2.0, 1.5, 0.9, 0.0, 1.75
";
        let err = ScenarioConfig::parse(text).unwrap().build().unwrap_err();
        assert!(matches!(&err, Error::Validation(m) if m.contains("undercuts c0")));
    }

    #[test]
    fn tabulated_target_needs_two_rows_and_excludes_other_f_keys() {
        let doubled = "\
ambient.family = euclidean
ambient.r_min = 0.1
ambient.r_max = 6.0
ambient.dimension = 2
mode.kind = umbilic
curvature.family = gauss_root
f.constant = 0.5
f.table = 0.5, 1.0
f.table = 3.0, 1.0
initial.radius = 1.0
flow.t_max = 1.0
";
        let err = ScenarioConfig::parse(doubled).unwrap().build().unwrap_err();
        assert!(matches!(&err, Error::Config(m) if m.contains("exactly one of f.constant")));

        let single = doubled
            .replace("f.constant = 0.5\n", "")
            .replace("f.table = 3.0, 1.0\n", "");
        let err = ScenarioConfig::parse(&single).unwrap().build().unwrap_err();
        assert!(matches!(&err, Error::Config(m) if m.contains("at least two rows")));
    }

    #[test]
    fn function_tokens_resolve_names_and_orders() {
        assert_eq!(function_from_token("gauss_root", 3).unwrap().name(), "gauss_root");
        assert_eq!(
            function_from_token("sigma_k_root:2", 3).unwrap().name(),
            "sigma_k_root:2"
        );
        // bare quotient defaults its order to the dimension
        let q = function_from_token("quotient", 3).unwrap();
        assert_eq!(q.name(), function_from_token("quotient:3", 3).unwrap().name());
        assert!(function_from_token("sigma_k_root", 3).is_err());
        assert!(function_from_token("sigma1:2", 3).is_err());
        assert!(function_from_token("frobnicate", 3).is_err());
    }

    #[test]
    fn shipped_example_scenarios_assemble() {
        let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../scenarios");
        let mut seen = 0;
        for entry in std::fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.extension().is_some_and(|e| e == "scn") {
                let cfg = ScenarioConfig::load(&path)
                    .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
                cfg.build().unwrap_or_else(|e| panic!("{}: {e}", path.display()));
                seen += 1;
            }
        }
        assert!(seen >= 4, "scenario examples went missing, found {seen}");
    }

    #[test]
    fn theta_accepts_auto_and_numbers() {
        let auto = ScenarioConfig::parse("flow.theta = auto\n").unwrap();
        assert!(matches!(auto.theta, Some(ThetaSpec::Auto)));
        let fixed = ScenarioConfig::parse("flow.theta = 0.25\n").unwrap();
        assert!(matches!(fixed.theta, Some(ThetaSpec::Value(v)) if v == 0.25));
        assert!(ScenarioConfig::parse("flow.theta = warm\n").is_err());
    }
}
