//! Per-step diagnostics of a flow trajectory and the a-posteriori bound
//! checks run on it afterwards.
//!
//! The central scalar is the node weight
//!
//!   w = log(kappa_max) - log(vtilde - theta) + lambda * chi(u),
//!
//! combining the largest principal curvature, the margin of the radial
//! support vtilde above its floor theta, and the convex potential chi of the
//! ambient space. Nodes where the support has dropped to the floor (or the
//! largest curvature to zero) record w = +infinity; a trajectory whose w
//! stays finite and bounded certifies that curvature stayed bounded and the
//! graph stayed uniformly starshaped.

use crate::ambient::WarpedProductSpace;
use crate::error::{Error, Result};
use crate::flow::{Barriers, TargetCurvature};
use crate::hypersurface::{admissibility, GeometryReport};
use crate::symfunc::{CurvatureFunction, SymmetricTensorPair};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Everything a monitor row needs beyond the geometry itself.
#[derive(Debug, Clone)]
pub struct MonitorContext<'a> {
    pub space: &'a WarpedProductSpace,
    pub function: &'a CurvatureFunction,
    pub target: &'a TargetCurvature,
    pub lambda: f64,
    pub theta: f64,
    pub barriers: Option<&'a Barriers>,
}

/// One trajectory row: extremes over nodes of the monitored scalars.
#[derive(Debug, Clone)]
pub struct MonitorRecord {
    pub t: f64,
    pub dt: f64,
    pub kappa_max: f64,
    pub kappa_min: f64,
    pub cone_margin: f64,
    pub vtilde_min: f64,
    pub residual_min: f64,
    pub residual_max: f64,
    /// +infinity when some node's support reached the floor theta or its
    /// largest curvature was nonpositive.
    pub w_max: f64,
    pub u_min: f64,
    pub u_max: f64,
    /// (min over nodes of u - lower, min of upper - u), when barriers are
    /// configured.
    pub barrier_margins: Option<(f64, f64)>,
}

/// Per-node weight w; +infinity where the logarithms are undefined.
pub fn w_profile(report: &GeometryReport, ctx: &MonitorContext) -> Result<Vec<f64>> {
    report
        .nodes
        .iter()
        .map(|node| {
            let zeta = node.kappa.max();
            let margin = node.vtilde - ctx.theta;
            if zeta <= 0.0 || margin <= 0.0 {
                return Ok(f64::INFINITY);
            }
            let chi = ctx.space.chi_eval(node.u)?.value;
            Ok(zeta.ln() - margin.ln() + ctx.lambda * chi)
        })
        .collect()
}

/// Aggregate one geometry snapshot into a monitor row.
pub fn record(
    report: &GeometryReport,
    ctx: &MonitorContext,
    t: f64,
    dt: f64,
) -> Result<MonitorRecord> {
    let f_values: Vec<f64> = report
        .nodes
        .iter()
        .map(|node| ctx.target.eval(node.u).0)
        .collect();
    let (cone_margin, residual_min, residual_max) =
        admissibility(report, ctx.function, &f_values)?;
    let w = w_profile(report, ctx)?;
    let w_max = w.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let barrier_margins = ctx.barriers.map(|b| {
        let mut lo = f64::INFINITY;
        let mut hi = f64::INFINITY;
        for (node, (l, u)) in report.nodes.iter().zip(b.lower.iter().zip(&b.upper)) {
            lo = lo.min(node.u - l);
            hi = hi.min(u - node.u);
        }
        (lo, hi)
    });
    Ok(MonitorRecord {
        t,
        dt,
        kappa_max: report.kappa_max(),
        kappa_min: report.kappa_min(),
        cone_margin,
        vtilde_min: report.vtilde_min(),
        residual_min,
        residual_max,
        w_max,
        u_min: report.u_min(),
        u_max: report.u_max(),
        barrier_margins,
    })
}

/// Trajectory-level verdicts. Each flag evaluates one quantified predicate
/// over the recorded rows; `data` fields carry the witnessing extremes.
#[derive(Debug, Clone)]
pub struct BoundsReport {
    /// min over time of residual_min stayed above -10 * tol_residual.
    pub preserved_f_ge_f: bool,
    pub worst_residual_min: f64,
    /// min over time of vtilde_min never dropped under theta.
    pub vtilde_floor: bool,
    pub min_vtilde: f64,
    /// sup of kappa_max stayed within a factor 10 of its level over the
    /// first tenth of the trajectory.
    pub kappa_bounded: bool,
    pub sup_kappa_max: f64,
    /// inf over time of cone_margin stayed positive; delta is that infimum.
    pub cone_compact: bool,
    pub cone_delta: f64,
    /// w_max stayed finite; sup reported.
    pub w_bounded: bool,
    pub sup_w_max: f64,
    /// both barrier margins stayed above -1e-8 (vacuously true without
    /// barriers).
    pub barriers_held: bool,
    pub worst_barrier_margin: Option<f64>,
}

impl BoundsReport {
    pub fn all_passed(&self) -> bool {
        self.preserved_f_ge_f
            && self.vtilde_floor
            && self.kappa_bounded
            && self.cone_compact
            && self.w_bounded
            && self.barriers_held
    }

    /// Flag names and values in a stable order, for summaries.
    pub fn flags(&self) -> [(&'static str, bool); 6] {
        [
            ("preserved_f_ge_f", self.preserved_f_ge_f),
            ("vtilde_floor", self.vtilde_floor),
            ("kappa_bounded", self.kappa_bounded),
            ("cone_compact", self.cone_compact),
            ("w_bounded", self.w_bounded),
            ("barriers_held", self.barriers_held),
        ]
    }
}

pub const BARRIER_TOLERANCE: f64 = 1e-8;

/// Evaluate the bound predicates over a recorded trajectory.
pub fn verify_bounds(
    trajectory: &[MonitorRecord],
    theta: f64,
    tol_residual: f64,
) -> Result<BoundsReport> {
    if trajectory.is_empty() {
        return Err(Error::Argument(
            "bounds verification needs a nonempty trajectory".into(),
        ));
    }
    let worst_residual_min = trajectory
        .iter()
        .map(|r| r.residual_min)
        .fold(f64::INFINITY, f64::min);
    let min_vtilde = trajectory
        .iter()
        .map(|r| r.vtilde_min)
        .fold(f64::INFINITY, f64::min);
    let sup_kappa_max = trajectory
        .iter()
        .map(|r| r.kappa_max)
        .fold(f64::NEG_INFINITY, f64::max);
    // curvature boundedness is tested as non-growth past the initial
    // transient: no better constant is available a priori
    let early = trajectory.len().div_ceil(10);
    let early_kappa = trajectory[..early]
        .iter()
        .map(|r| r.kappa_max)
        .fold(f64::NEG_INFINITY, f64::max);
    let cone_delta = trajectory
        .iter()
        .map(|r| r.cone_margin)
        .fold(f64::INFINITY, f64::min);
    let sup_w_max = trajectory
        .iter()
        .map(|r| r.w_max)
        .fold(f64::NEG_INFINITY, f64::max);
    let worst_barrier_margin = trajectory
        .iter()
        .filter_map(|r| r.barrier_margins.map(|(lo, hi)| lo.min(hi)))
        .fold(None, |acc: Option<f64>, m| {
            Some(acc.map_or(m, |a| a.min(m)))
        });
    Ok(BoundsReport {
        preserved_f_ge_f: worst_residual_min >= -10.0 * tol_residual,
        worst_residual_min,
        vtilde_floor: min_vtilde >= theta,
        min_vtilde,
        kappa_bounded: sup_kappa_max <= 10.0 * early_kappa,
        sup_kappa_max,
        cone_compact: cone_delta > 0.0,
        cone_delta,
        w_bounded: sup_w_max.is_finite(),
        sup_w_max,
        barriers_held: worst_barrier_margin.is_none_or(|m| m >= -BARRIER_TOLERANCE),
        worst_barrier_margin,
    })
}

/// Worst deviation between each sampled node's reported kappa_max and a
/// direct generalized eigenvalue solve of its (h, g) pair.
pub fn crosscheck_extreme_curvature(
    report: &GeometryReport,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let node = &report.nodes[rng.gen_range(0..report.nodes.len())];
        let pair = SymmetricTensorPair::new(&node.g, &node.h)?;
        let eig = pair.principal_curvatures()?;
        worst = worst.max((eig.max() - node.kappa.max()).abs());
    }
    Ok(worst)
}
