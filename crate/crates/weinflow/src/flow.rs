//! Explicit time integration of the scalar graph flow
//!
//!   du/dt = (F(kappa) - f(u)) * v
//!
//! for radial graphs r = u(angle) in a warped product. The sign is fixed by
//! the convention that centered slices have positive principal curvature
//! theta'/theta: with it, a hypersurface with F > f moves toward larger r,
//! the inequality F >= f is preserved along trajectories, and umbilic initial
//! data converges monotonically to the stationary radius.
//!
//! Stepping is the classical four-stage explicit scheme. The step size obeys
//! a parabolic bound dt = dt_safety * h^2 / D_max in the discretized classes,
//! where D_max bounds the largest eigenvalue of the linearized diffusion
//! coefficient v * F^{ij} in the profile direction; the umbilic class is an
//! ODE and uses dt = dt_safety / |d(du/dt)/du| instead. A run stops when both
//! the residual F - f and the velocity drop under their tolerances
//! (converged), when t_max is reached, when the profile leaves the ambient
//! domain, or when curvature/velocity blow up or leave the admissible cone.

use crate::ambient::WarpedProductSpace;
use crate::error::{Error, Result};
use crate::hypersurface::{admissibility, GeometryReport, GraphHypersurface, SurfaceClass};
use crate::monitors::{record, MonitorContext, MonitorRecord};
use crate::symfunc::{CurvatureFunction, CurvatureVector};

/// Curvature or velocity magnitudes beyond this stop the run as a blow-up.
pub const BLOWUP_THRESHOLD: f64 = 1e10;
/// Floor for the |d(du/dt)/du| denominator in the umbilic step rule.
const STIFFNESS_FLOOR: f64 = 1e-8;

/// Prescribed curvature as a function of the radial coordinate.
#[derive(Debug, Clone)]
pub enum TargetCurvature {
    Constant(f64),
    /// Coefficients in ascending powers of r.
    Polynomial(Vec<f64>),
    /// Sampled values with linear interpolation; extrapolates with the edge
    /// slope, so tables should cover the ambient domain.
    Table { rs: Vec<f64>, fs: Vec<f64> },
}

impl TargetCurvature {
    pub fn validate(&self) -> Result<()> {
        match self {
            TargetCurvature::Constant(c) => {
                if !c.is_finite() {
                    return Err(Error::Config("constant target curvature is not finite".into()));
                }
            }
            TargetCurvature::Polynomial(c) => {
                if c.is_empty() {
                    return Err(Error::Config("polynomial target needs coefficients".into()));
                }
                if c.iter().any(|x| !x.is_finite()) {
                    return Err(Error::Config("polynomial target has a non-finite coefficient".into()));
                }
            }
            TargetCurvature::Table { rs, fs } => {
                if rs.len() < 2 || rs.len() != fs.len() {
                    return Err(Error::Config(format!(
                        "target table needs matching r/f columns with at least two rows, got {}/{}",
                        rs.len(),
                        fs.len()
                    )));
                }
                if rs.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::Config("target table radii must increase strictly".into()));
                }
                if rs.iter().chain(fs).any(|x| !x.is_finite()) {
                    return Err(Error::Config("target table has a non-finite entry".into()));
                }
            }
        }
        Ok(())
    }

    /// Value and radial derivative at r.
    pub fn eval(&self, r: f64) -> (f64, f64) {
        match self {
            TargetCurvature::Constant(c) => (*c, 0.0),
            TargetCurvature::Polynomial(c) => {
                let mut val = 0.0;
                let mut slope = 0.0;
                for &a in c.iter().rev() {
                    slope = slope * r + val;
                    val = val * r + a;
                }
                (val, slope)
            }
            TargetCurvature::Table { rs, fs } => {
                let i = match rs.binary_search_by(|x| x.partial_cmp(&r).unwrap()) {
                    Ok(i) => i.min(rs.len() - 2),
                    Err(0) => 0,
                    Err(i) => (i - 1).min(rs.len() - 2),
                };
                let slope = (fs[i + 1] - fs[i]) / (rs[i + 1] - rs[i]);
                (fs[i] + slope * (r - rs[i]), slope)
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            TargetCurvature::Constant(c) => format!("constant {c}"),
            TargetCurvature::Polynomial(c) => format!("polynomial degree {}", c.len() - 1),
            TargetCurvature::Table { rs, .. } => format!("table with {} rows", rs.len()),
        }
    }
}

/// Floor for the radial support in the monitor weight w.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThetaSpec {
    /// Half the minimum initial support, resolved at the start of a run.
    Auto,
    Value(f64),
}

impl ThetaSpec {
    pub fn resolve(&self, initial: &GeometryReport) -> f64 {
        match self {
            ThetaSpec::Auto => initial.vtilde_min() / 2.0,
            ThetaSpec::Value(v) => *v,
        }
    }
}

/// Nodewise lower and upper comparison profiles the flow must stay between.
#[derive(Debug, Clone)]
pub struct Barriers {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct FlowConfig {
    pub function: CurvatureFunction,
    pub target: TargetCurvature,
    /// Weight of the convex potential in the monitor quantity w.
    pub lambda: f64,
    pub theta: ThetaSpec,
    /// Fraction of the stability step bound actually taken, in (0, 1].
    pub dt_safety: f64,
    pub tol_residual: f64,
    pub tol_velocity: f64,
    pub t_max: f64,
    /// Record a monitor row every this many steps.
    pub cadence: usize,
    /// Hard step budget; exhausting it is a configuration error, not a
    /// flow outcome.
    pub max_steps: usize,
    pub barriers: Option<Barriers>,
}

impl FlowConfig {
    pub fn new(function: CurvatureFunction, target: TargetCurvature, t_max: f64) -> Self {
        Self {
            function,
            target,
            lambda: 1.0,
            theta: ThetaSpec::Auto,
            dt_safety: 0.2,
            tol_residual: 1e-8,
            tol_velocity: 1e-10,
            t_max,
            cadence: 10,
            max_steps: 10_000_000,
            barriers: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.target.validate()?;
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::Config(format!("lambda = {} must be positive", self.lambda)));
        }
        if let ThetaSpec::Value(v) = self.theta {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("theta = {v} must be positive")));
            }
        }
        if !(self.dt_safety > 0.0 && self.dt_safety <= 1.0) {
            return Err(Error::Config(format!(
                "dt_safety = {} must lie in (0, 1]",
                self.dt_safety
            )));
        }
        if !(self.tol_residual > 0.0 && self.tol_velocity > 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(Error::Config(format!("t_max = {} must be positive", self.t_max)));
        }
        if self.cadence == 0 {
            return Err(Error::Config("cadence must be at least 1".into()));
        }
        if self.max_steps == 0 {
            return Err(Error::Config("max_steps must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct FlowState {
    pub t: f64,
    pub profile: Vec<f64>,
    pub report: GeometryReport,
    pub dt_last: f64,
}

impl FlowState {
    pub fn initial(surface: &GraphHypersurface, u0: &[f64]) -> Result<Self> {
        Ok(Self {
            t: 0.0,
            profile: u0.to_vec(),
            report: surface.geometry(u0)?,
            dt_last: 0.0,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// Residual and velocity both under tolerance.
    Residual,
    TMax,
    BlowUp,
    LeftDomain,
}

impl StopReason {
    pub fn label(&self) -> &'static str {
        match self {
            StopReason::Residual => "residual",
            StopReason::TMax => "t_max",
            StopReason::BlowUp => "blow_up",
            StopReason::LeftDomain => "left_domain",
        }
    }
}

#[derive(Debug, Clone)]
pub struct FlowSummary {
    pub converged: bool,
    pub reason: StopReason,
    pub t_final: f64,
    pub steps: usize,
    pub residual_min: f64,
    pub residual_max: f64,
    /// Final radius, umbilic class only.
    pub r_final: Option<f64>,
}

/// Nodewise du/dt = (F(kappa) - f(u)) * v. Errors if any node's curvature
/// leaves the admissible cone.
pub fn velocity(report: &GeometryReport, config: &FlowConfig) -> Result<Vec<f64>> {
    report
        .nodes
        .iter()
        .map(|node| {
            let big_f = config.function.evaluate(&node.kappa)?;
            let (f, _) = config.target.eval(node.u);
            let vel = (big_f - f) * node.v;
            if !vel.is_finite() {
                return Err(Error::NonFinite(format!("velocity at u = {}", node.u)));
            }
            Ok(vel)
        })
        .collect()
}

/// Stability-bounded step size at the current state; unbounded requests are
/// left to the caller's t_max cap.
pub fn propose_dt(
    surface: &GraphHypersurface,
    state: &FlowState,
    config: &FlowConfig,
) -> Result<f64> {
    match surface.class() {
        SurfaceClass::Umbilic { n } => {
            let u = state.profile[0];
            let (th, dth, ddth) = surface.space().theta(u)?;
            // d/du of s(u) = theta'/theta
            let ds = (ddth * th - dth * dth) / (th * th);
            let ones = CurvatureVector::new(vec![1.0; n])?;
            let f_ones = config.function.evaluate(&ones)?;
            let (_, df) = config.target.eval(u);
            let stiffness = (f_ones * ds - df).abs().max(STIFFNESS_FLOOR);
            Ok(config.dt_safety / stiffness)
        }
        _ => {
            let h = surface.parameter_step();
            let mut d_max: f64 = 0.0;
            for node in &state.report.nodes {
                let grad = config.function.gradient(&node.kappa)?;
                let sum: f64 = grad.iter().sum();
                d_max = d_max.max(sum / (node.theta * node.theta * node.v * node.v));
            }
            Ok(config.dt_safety * h * h / d_max.max(STIFFNESS_FLOOR))
        }
    }
}

/// One explicit four-stage step of the given size.
pub fn step_by(
    surface: &GraphHypersurface,
    state: &FlowState,
    config: &FlowConfig,
    dt: f64,
) -> Result<FlowState> {
    let n = state.profile.len();
    let at = |shift: f64, k: &[f64]| -> Vec<f64> {
        (0..n).map(|i| state.profile[i] + shift * k[i]).collect()
    };
    let k1 = velocity(&state.report, config)?;
    let u2 = at(0.5 * dt, &k1);
    let k2 = velocity(&surface.geometry(&u2)?, config)?;
    let u3 = at(0.5 * dt, &k2);
    let k3 = velocity(&surface.geometry(&u3)?, config)?;
    let u4 = at(dt, &k3);
    let k4 = velocity(&surface.geometry(&u4)?, config)?;
    let profile: Vec<f64> = (0..n)
        .map(|i| state.profile[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect();
    let report = surface.geometry(&profile)?;
    Ok(FlowState {
        t: state.t + dt,
        profile,
        report,
        dt_last: dt,
    })
}

/// One step at the stability-bounded size.
pub fn step(
    surface: &GraphHypersurface,
    state: &FlowState,
    config: &FlowConfig,
) -> Result<FlowState> {
    let dt = propose_dt(surface, state, config)?;
    step_by(surface, state, config, dt)
}

fn target_values(config: &FlowConfig, report: &GeometryReport) -> Vec<f64> {
    report
        .nodes
        .iter()
        .map(|node| config.target.eval(node.u).0)
        .collect()
}

/// Classify an in-flight error as a stop reason; configuration and argument
/// errors propagate instead.
fn stop_reason_for(err: &Error) -> Option<StopReason> {
    match err {
        Error::Domain { .. } => Some(StopReason::LeftDomain),
        Error::Admissibility { .. } | Error::NonFinite(_) | Error::Degenerate(_) => {
            Some(StopReason::BlowUp)
        }
        _ => None,
    }
}

/// Integrate from the given initial profile until convergence, t_max, or a
/// terminal event. Returns the recorded trajectory, the last valid state,
/// and the outcome summary.
pub fn run(
    surface: &GraphHypersurface,
    u0: &[f64],
    config: &FlowConfig,
) -> Result<(Vec<MonitorRecord>, FlowState, FlowSummary)> {
    config.validate()?;
    let mut state = FlowState::initial(surface, u0)?;

    // initial admissibility and residual floor, named by worst node
    let f_values = target_values(config, &state.report);
    for (i, node) in state.report.nodes.iter().enumerate() {
        let (inside, m) = config.function.cone().contains(node.kappa.as_slice());
        if !inside {
            return Err(Error::Validation(format!(
                "initial curvature outside the admissible cone at node {i} (margin {m:.3e})"
            )));
        }
    }
    let (worst_node, worst_res) = state
        .report
        .nodes
        .iter()
        .enumerate()
        .map(|(i, node)| (i, config.function.raw_value(node.kappa.as_slice()) - f_values[i]))
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .expect("geometry reports are nonempty");
    if worst_res < -config.tol_residual {
        return Err(Error::Validation(format!(
            "initial F < f at node {worst_node} (F - f = {worst_res:.3e})"
        )));
    }
    if let Some(barriers) = &config.barriers {
        if barriers.lower.len() != u0.len() || barriers.upper.len() != u0.len() {
            return Err(Error::Config(format!(
                "barrier profiles have {}/{} values for {} nodes",
                barriers.lower.len(),
                barriers.upper.len(),
                u0.len()
            )));
        }
        for (i, &u) in u0.iter().enumerate() {
            if u < barriers.lower[i] {
                return Err(Error::Validation(format!(
                    "initial profile below the lower barrier at node {i}"
                )));
            }
            if u > barriers.upper[i] {
                return Err(Error::Validation(format!(
                    "initial profile above the upper barrier at node {i}"
                )));
            }
        }
    }

    let theta = config.theta.resolve(&state.report);
    let ctx = MonitorContext {
        space: surface.space(),
        function: &config.function,
        target: &config.target,
        lambda: config.lambda,
        theta,
        barriers: config.barriers.as_ref(),
    };

    let mut trajectory = vec![record(&state.report, &ctx, state.t, state.dt_last)?];
    let mut last_recorded_step = 0usize;
    let mut steps = 0usize;
    let reason;
    let mut converged = false;

    loop {
        let f_values = target_values(config, &state.report);
        let (_, res_min, res_max) =
            admissibility(&state.report, &config.function, &f_values)?;
        let vel = match velocity(&state.report, config) {
            Ok(v) => v,
            Err(e) => match stop_reason_for(&e) {
                Some(r) => {
                    reason = r;
                    break;
                }
                None => return Err(e),
            },
        };
        let max_vel = vel.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let max_res = res_min.abs().max(res_max.abs());
        if max_res <= config.tol_residual && max_vel <= config.tol_velocity {
            converged = true;
            reason = StopReason::Residual;
            break;
        }
        if max_vel > BLOWUP_THRESHOLD
            || state.report.kappa_max().abs() > BLOWUP_THRESHOLD
            || state.report.kappa_min().abs() > BLOWUP_THRESHOLD
        {
            reason = StopReason::BlowUp;
            break;
        }
        if state.t >= config.t_max {
            reason = StopReason::TMax;
            break;
        }
        if steps >= config.max_steps {
            return Err(Error::Config(format!(
                "step budget of {} exhausted at t = {}; raise max_steps or lower t_max",
                config.max_steps, state.t
            )));
        }

        let proposed = match propose_dt(surface, &state, config) {
            Ok(dt) => dt,
            Err(e) => match stop_reason_for(&e) {
                Some(r) => {
                    reason = r;
                    break;
                }
                None => return Err(e),
            },
        };
        let remaining = config.t_max - state.t;
        let capped = proposed >= remaining;
        let dt = if capped { remaining } else { proposed };
        match step_by(surface, &state, config, dt) {
            Ok(mut next) => {
                if capped {
                    next.t = config.t_max;
                }
                state = next;
            }
            Err(e) => match stop_reason_for(&e) {
                Some(r) => {
                    reason = r;
                    break;
                }
                None => return Err(e),
            },
        }
        steps += 1;
        if steps.is_multiple_of(config.cadence) {
            trajectory.push(record(&state.report, &ctx, state.t, state.dt_last)?);
            last_recorded_step = steps;
        }
    }

    if last_recorded_step != steps {
        trajectory.push(record(&state.report, &ctx, state.t, state.dt_last)?);
    }
    let f_values = target_values(config, &state.report);
    let (_, res_min, res_max) = admissibility(&state.report, &config.function, &f_values)?;
    let r_final = match surface.class() {
        SurfaceClass::Umbilic { .. } => Some(state.profile[0]),
        _ => None,
    };
    let summary = FlowSummary {
        converged,
        reason,
        t_final: state.t,
        steps,
        residual_min: res_min,
        residual_max: res_max,
        r_final,
    };
    Ok((trajectory, state, summary))
}

/// Radius of the stationary centered slice: the root of
/// F(1,...,1) * theta'(r)/theta(r) = f, located by bisection to 1e-12.
pub fn umbilic_stationary_radius(
    space: &WarpedProductSpace,
    function: &CurvatureFunction,
    f_const: f64,
) -> Result<f64> {
    let ones = CurvatureVector::new(vec![1.0; function.n()])?;
    let f_ones = function.evaluate(&ones)?;
    let g = |r: f64| -> Result<f64> {
        let (th, dth, _) = space.theta(r)?;
        Ok(f_ones * dth / th - f_const)
    };
    let (mut lo, mut hi) = (space.r_lo(), space.r_hi());
    let (g_lo, g_hi) = (g(lo)?, g(hi)?);
    if g_lo == 0.0 {
        return Ok(lo);
    }
    if g_hi == 0.0 {
        return Ok(hi);
    }
    if g_lo.signum() == g_hi.signum() {
        return Err(Error::NoSolution(format!(
            "stationary radius: F(1,...,1) theta'/theta - f keeps sign {:+} on [{lo}, {hi}]",
            g_lo.signum()
        )));
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        let g_mid = g(mid)?;
        if g_mid == 0.0 {
            return Ok(mid);
        }
        if g_mid.signum() == g_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
