//! Run artifacts: the time-series CSV, the final-profile CSV, and the
//! structured-text summary. All numbers are written with 17 significant
//! digits so downstream convergence studies can difference near-equal
//! values, and every file is written atomically (temp + rename).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::flow::FlowSummary;
use crate::hypersurface::GeometryReport;
use crate::monitors::{BoundsReport, MonitorRecord};

pub const SERIES_HEADER: &str = "t, dt, u_min, u_max, kappa_min, kappa_max, \
cone_margin, vtilde_min, residual_min, residual_max, w_max";

/// Paths of the three files a run produces.
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub series: PathBuf,
    pub profile: PathBuf,
    pub summary: PathBuf,
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write `contents` to `path` through a sibling temp file and a rename, so
/// readers never observe a half-written artifact.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path
        .parent()
        .ok_or_else(|| Error::Argument(format!("no parent directory for {}", path.display())))?;
    fs::create_dir_all(dir)?;
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn series_csv(records: &[MonitorRecord]) -> String {
    let mut out = String::with_capacity(128 * (records.len() + 1));
    out.push_str(SERIES_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{}, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}",
            fmt(r.t),
            fmt(r.dt),
            fmt(r.u_min),
            fmt(r.u_max),
            fmt(r.kappa_min),
            fmt(r.kappa_max),
            fmt(r.cone_margin),
            fmt(r.vtilde_min),
            fmt(r.residual_min),
            fmt(r.residual_max),
            fmt(r.w_max),
        );
    }
    out
}

pub fn profile_csv(report: &GeometryReport) -> String {
    let m = report.nodes.first().map_or(0, |n| n.kappa.n());
    let mut out = String::new();
    out.push_str("node, coordinate, u");
    for i in 1..=m {
        let _ = write!(out, ", kappa_{i}");
    }
    out.push_str(", vtilde\n");
    for (i, node) in report.nodes.iter().enumerate() {
        let _ = write!(out, "{i}, {}, {}", fmt(node.angle), fmt(node.u));
        for &k in node.kappa.as_slice() {
            let _ = write!(out, ", {}", fmt(k));
        }
        let _ = writeln!(out, ", {}", fmt(node.vtilde));
    }
    out
}

pub fn summary_text(summary: &FlowSummary, bounds: &BoundsReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "converged = {}", summary.converged);
    let _ = writeln!(out, "reason = {}", summary.reason.label());
    let _ = writeln!(out, "t_final = {}", fmt(summary.t_final));
    let _ = writeln!(out, "steps = {}", summary.steps);
    let _ = writeln!(out, "residual_min = {}", fmt(summary.residual_min));
    let _ = writeln!(out, "residual_max = {}", fmt(summary.residual_max));
    if let Some(r) = summary.r_final {
        let _ = writeln!(out, "r_final = {}", fmt(r));
    }
    for (name, ok) in bounds.flags() {
        let _ = writeln!(out, "{name} = {ok}");
    }
    let _ = writeln!(out, "worst_residual_min = {}", fmt(bounds.worst_residual_min));
    let _ = writeln!(out, "min_vtilde = {}", fmt(bounds.min_vtilde));
    let _ = writeln!(out, "sup_kappa_max = {}", fmt(bounds.sup_kappa_max));
    let _ = writeln!(out, "cone_delta = {}", fmt(bounds.cone_delta));
    let _ = writeln!(out, "sup_w_max = {}", fmt(bounds.sup_w_max));
    if let Some(m) = bounds.worst_barrier_margin {
        let _ = writeln!(out, "worst_barrier_margin = {}", fmt(m));
    }
    out
}

/// Write series.csv, final_profile.csv, and summary.txt into `dir`.
pub fn write_run(
    dir: &Path,
    records: &[MonitorRecord],
    final_report: &GeometryReport,
    summary: &FlowSummary,
    bounds: &BoundsReport,
) -> Result<RunArtifacts> {
    let artifacts = RunArtifacts {
        series: dir.join("series.csv"),
        profile: dir.join("final_profile.csv"),
        summary: dir.join("summary.txt"),
    };
    write_atomic(&artifacts.series, &series_csv(records))?;
    write_atomic(&artifacts.profile, &profile_csv(final_report))?;
    write_atomic(&artifacts.summary, &summary_text(summary, bounds))?;
    Ok(artifacts)
}
