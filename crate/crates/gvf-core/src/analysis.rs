//! Lyapunov values and convergence diagnostics over trajectory logs.

use alloc::format;
use alloc::string::String;

use crate::math::{scalar, Vec2};
use crate::sim::TrajectoryLog;
use crate::{Error, Result};

/// Unit-norm tolerance for the alignment Lyapunov inputs.
pub const UNIT_TOL: f64 = 1e-9;

/// Allowed per-second V₂ increase between consecutive unclamped samples
/// before it counts as a violation (the certificate says V₂ never increases;
/// this absorbs integration and hold noise).
pub const V2_INCREASE_TOL_PER_S: f64 = 1e-4;

/// Tracking-error Lyapunov value `V₁ = ½·e²`.
#[inline]
pub fn lyapunov_v1(e: f64) -> f64 {
    0.5 * e * e
}

fn check_unit(v: Vec2) -> Result<()> {
    if scalar::abs(v.norm() - 1.0) > UNIT_TOL {
        return Err(Error::NotUnitVector);
    }
    Ok(())
}

/// Alignment Lyapunov value `V₂ = 1 − p̂ᵀp̂_d ∈ [0, 2]`, zero exactly when
/// the ground velocity is aligned with the field.
pub fn lyapunov_v2(p_hat: Vec2, p_d_hat: Vec2) -> Result<f64> {
    check_unit(p_hat)?;
    check_unit(p_d_hat)?;
    Ok(1.0 - p_hat.dot(p_d_hat))
}

/// Closed-form rate `dV₂/dt = −k_d·(p̂ᵀE p̂_d)²` under the control law:
/// never positive, zero exactly when the two directions are parallel.
pub fn v2_rate_closed_form(p_hat: Vec2, p_d_hat: Vec2, k_d: f64) -> Result<f64> {
    check_unit(p_hat)?;
    check_unit(p_d_hat)?;
    let s = p_hat.cross(p_d_hat);
    Ok(-k_d * s * s)
}

/// Convergence diagnostics for one trajectory log.
#[derive(Debug, Clone, Copy)]
pub struct ConvergenceReport {
    /// First time after which `|e|` stays below the tolerance; `None` when
    /// the log never settles.
    pub settle_time: Option<f64>,
    /// Largest `|e|` seen after settling.
    pub steady_state_error: Option<f64>,
    /// Largest bank magnitude demanded by the raw (unclamped) command (rad).
    pub max_bank: f64,
    /// Samples whose raw command exceeded the bank limit.
    pub bank_exceedance_count: usize,
    /// Consecutive unclamped samples where V₂ rose faster than the
    /// tolerance. Zero whenever the descent certificate applies.
    pub v2_violations: usize,
}

impl ConvergenceReport {
    /// Key-value text block, one `key: value` per line.
    pub fn to_kv_text(&self) -> String {
        let mut out = String::new();
        match self.settle_time {
            Some(t) => out.push_str(&format!("settle_time_s: {t}\n")),
            None => out.push_str("settle_time_s: never\n"),
        }
        match self.steady_state_error {
            Some(e) => out.push_str(&format!("steady_state_error: {e}\n")),
            None => out.push_str("steady_state_error: n/a\n"),
        }
        out.push_str(&format!("max_bank_rad: {}\n", self.max_bank));
        out.push_str(&format!("max_bank_deg: {}\n", self.max_bank.to_degrees()));
        out.push_str(&format!("bank_exceedance_count: {}\n", self.bank_exceedance_count));
        out.push_str(&format!("v2_violations: {}\n", self.v2_violations));
        out
    }

    pub fn csv_header() -> &'static str {
        "settle_time_s,steady_state_error,max_bank_rad,bank_exceedance_count,v2_violations"
    }

    /// One CSV row matching [`ConvergenceReport::csv_header`]; empty cells
    /// for diagnostics that do not apply. Floats carry 17 significant digits
    /// so rows reproduce bit-exactly.
    pub fn to_csv_row(&self) -> String {
        let settle = self.settle_time.map(|t| format!("{t:.16e}")).unwrap_or_default();
        let sse = self.steady_state_error.map(|e| format!("{e:.16e}")).unwrap_or_default();
        format!(
            "{settle},{sse},{:.16e},{},{}",
            self.max_bank, self.bank_exceedance_count, self.v2_violations
        )
    }
}

/// Scan a log for settling, bank usage and Lyapunov-descent violations.
/// `tolerance` is the settle threshold on `|e|` (dimensionless for level
/// functions like the ellipse's, meters for metric ones).
pub fn analyze(log: &TrajectoryLog, tolerance: f64) -> Result<ConvergenceReport> {
    if log.records.len() < 3 {
        return Err(Error::LogTooShort);
    }
    if !(tolerance > 0.0) || !tolerance.is_finite() {
        return Err(Error::InvalidConfig("settle tolerance must be positive"));
    }

    // Settle: walk backwards to the last sample at or above tolerance.
    let mut settle_idx = None;
    match log.records.iter().rposition(|r| scalar::abs(r.level_error) >= tolerance) {
        None => settle_idx = Some(0),
        Some(last_bad) => {
            if last_bad + 1 < log.records.len() {
                settle_idx = Some(last_bad + 1);
            }
        }
    }
    let settle_time = settle_idx.map(|i| log.records[i].time);
    let steady_state_error = settle_idx.map(|i| {
        log.records[i..].iter().map(|r| scalar::abs(r.level_error)).fold(0.0, f64::max)
    });

    let mut max_bank = 0.0f64;
    let mut exceedances = 0usize;
    for r in &log.records {
        let raw_bank = crate::gvf::bank_from_yaw_rate(r.yaw_rate_raw, log.meta.airspeed, log.meta.pitch)?;
        max_bank = max_bank.max(scalar::abs(raw_bank));
        if r.clamped {
            exceedances += 1;
        }
    }

    let mut v2_violations = 0usize;
    for w in log.records.windows(2) {
        if w[0].clamped || w[1].clamped {
            continue;
        }
        if w[1].v2 - w[0].v2 > V2_INCREASE_TOL_PER_S * log.meta.dt {
            v2_violations += 1;
        }
    }

    Ok(ConvergenceReport {
        settle_time,
        steady_state_error,
        max_bank,
        bank_exceedance_count: exceedances,
        v2_violations,
    })
}
