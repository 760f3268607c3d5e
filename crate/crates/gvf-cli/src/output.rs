//! CSV and report writers. Floats are printed with 17 significant digits so
//! identical runs produce byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use gvf_core::analysis::ConvergenceReport;
use gvf_core::sim::{FieldGrid, Termination, TrajectoryLog};

use crate::CliResult;

pub const TRAJECTORY_CSV_HEADER: &str =
    "t,px,py,psi,vx,vy,e,V1,V2,u_raw,u_clamped,chi_dot_d,beta,phi_cmd,align_err";

pub const FIELD_CSV_HEADER: &str = "x,y,ux,uy,degenerate";

/// 17 significant digits: enough to round-trip any f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn trajectory_csv(log: &TrajectoryLog) -> String {
    let mut out = String::with_capacity(log.records.len() * 160 + 128);
    out.push_str(TRAJECTORY_CSV_HEADER);
    out.push('\n');
    for r in &log.records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            fmt_f64(r.time),
            fmt_f64(r.position.x),
            fmt_f64(r.position.y),
            fmt_f64(r.yaw),
            fmt_f64(r.velocity.x),
            fmt_f64(r.velocity.y),
            fmt_f64(r.level_error),
            fmt_f64(r.v1),
            fmt_f64(r.v2),
            fmt_f64(r.yaw_rate_raw),
            fmt_f64(r.yaw_rate),
            fmt_f64(r.desired_course_rate),
            fmt_f64(r.sideslip),
            fmt_f64(r.bank_cmd),
            fmt_f64(r.alignment_error),
        );
    }
    out
}

pub fn field_csv(grid: &FieldGrid) -> String {
    let mut out = String::with_capacity(grid.nodes.len() * 80 + 32);
    out.push_str(FIELD_CSV_HEADER);
    out.push('\n');
    for n in &grid.nodes {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(n.position.x),
            fmt_f64(n.position.y),
            fmt_f64(n.direction.x),
            fmt_f64(n.direction.y),
            u8::from(n.degenerate),
        );
    }
    out
}

pub fn termination_label(t: &Termination) -> String {
    match t {
        Termination::Completed => "completed".to_string(),
        Termination::DegenerateField { time } => format!("degenerate_field at t={time}"),
        Termination::LowGroundSpeed { time } => format!("low_ground_speed at t={time}"),
        Termination::NonFinite { time } => format!("non_finite_state at t={time}"),
    }
}

/// Key-value report for one run; `report` is absent when the log was too
/// short to analyze.
pub fn run_report_text(
    name: &str,
    log: &TrajectoryLog,
    tolerance: f64,
    report: Option<&ConvergenceReport>,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario: {name}");
    let _ = writeln!(out, "termination: {}", termination_label(&log.termination));
    let _ = writeln!(out, "samples: {}", log.records.len());
    let _ = writeln!(out, "settle_tolerance: {tolerance}");
    match report {
        Some(r) => out.push_str(&r.to_kv_text()),
        None => out.push_str("analysis: skipped (log too short)\n"),
    }
    out
}

pub fn run_report_csv(name: &str, log: &TrajectoryLog, report: Option<&ConvergenceReport>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario,termination,samples,{}", ConvergenceReport::csv_header());
    let analysis_cols = ConvergenceReport::csv_header().split(',').count();
    let tail = match report {
        Some(r) => r.to_csv_row(),
        None => vec![""; analysis_cols].join(","),
    };
    let _ = writeln!(
        out,
        "{name},{},{},{tail}",
        termination_label(&log.termination).replace(',', ";"),
        log.records.len()
    );
    out
}

/// Resolve an output directory against `GVF_OUTPUT_ROOT` (relative paths
/// only) and create it.
pub fn prepare_out_dir(out: &Path) -> CliResult<PathBuf> {
    let resolved = match std::env::var_os(crate::OUTPUT_ROOT_ENV) {
        Some(root) if out.is_relative() => PathBuf::from(root).join(out),
        _ => out.to_path_buf(),
    };
    fs::create_dir_all(&resolved)?;
    Ok(resolved)
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> CliResult<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, contents)?;
    Ok(path)
}
