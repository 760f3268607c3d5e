//! The four subcommands. Each returns `Ok(())` for exit 0 or a typed error
//! that maps onto a distinct exit code.

use std::path::Path;

use gvf_core::analysis;
use gvf_core::curve::{fd_validate, ImplicitCurve};
use gvf_core::gvf::{tune_check, TuneSetup};
use gvf_core::math::Aabb;
use gvf_core::rng::SplitMix64;
use gvf_core::sim::{run, sample_field_grid};
use gvf_core::Vec2;

use crate::config::{self, Scenario};
use crate::output;
use crate::{CliError, CliResult};

/// Validation tolerance on relative derivative error (criterion shared with
/// the library's own test suite).
pub const FD_TOLERANCE: f64 = 1e-6;
/// Central-difference step used by `validate` (meters on O(100 m) scales).
pub const FD_STEP: f64 = 1e-5;
/// Probe count for `validate`.
pub const VALIDATE_PROBES: usize = 1000;
/// Band samples for `validate` regularity and `tune`.
pub const BAND_SAMPLES: usize = 4000;
/// Fixed seed: reports and CSVs must be reproducible run to run.
pub const SAMPLING_SEED: u64 = 0x67766673_65656431;

fn load(config_path: &Path) -> CliResult<Scenario> {
    config::load(config_path)
}

/// `gvf run`: simulate the scenario, write `trajectory.csv`, `report.txt`
/// and `report.csv` into the output directory.
pub fn cmd_run(config_path: &Path, out_dir: &Path) -> CliResult<()> {
    let scenario = load(config_path)?;
    let log = run(&scenario.curve, &scenario.sim)
        .map_err(|e| CliError::Validation(e.to_string()))?;

    let report = if log.records.len() >= 3 {
        Some(
            analysis::analyze(&log, scenario.settle_tolerance)
                .map_err(|e| CliError::Validation(e.to_string()))?,
        )
    } else {
        None
    };

    let dir = output::prepare_out_dir(out_dir)?;
    output::write_file(&dir, "trajectory.csv", &output::trajectory_csv(&log))?;
    let text = output::run_report_text(&scenario.name, &log, scenario.settle_tolerance, report.as_ref());
    output::write_file(&dir, "report.txt", &text)?;
    output::write_file(&dir, "report.csv", &output::run_report_csv(&scenario.name, &log, report.as_ref()))?;
    print!("{text}");

    if !log.termination.is_completed() {
        return Err(CliError::Singularity(output::termination_label(&log.termination)));
    }
    Ok(())
}

/// `gvf field`: export normalized field directions on a grid to `field.csv`.
pub fn cmd_field(
    config_path: &Path,
    bbox: Option<Aabb>,
    resolution: (usize, usize),
    out_dir: &Path,
) -> CliResult<()> {
    let scenario = load(config_path)?;
    let region = match bbox {
        Some(b) => b,
        None => scenario.curve.default_region(scenario.curve.c_star()),
    };
    let grid = sample_field_grid(
        &scenario.curve,
        region,
        resolution.0,
        resolution.1,
        &scenario.sim.gains,
        scenario.sim.direction,
    )
    .map_err(|e| CliError::Validation(e.to_string()))?;
    let dir = output::prepare_out_dir(out_dir)?;
    let path = output::write_file(&dir, "field.csv", &output::field_csv(&grid))?;
    let masked = grid.nodes.iter().filter(|n| n.degenerate).count();
    println!(
        "field grid {}x{} over [{}, {}] x [{}, {}] -> {} ({} degenerate nodes masked)",
        grid.nx,
        grid.ny,
        region.min.x,
        region.max.x,
        region.min.y,
        region.max.y,
        path.display(),
        masked
    );
    Ok(())
}

/// `gvf validate`: finite-difference check of the curve derivatives plus
/// regularity sampling of the band. Nonzero exit on violation.
pub fn cmd_validate(config_path: &Path) -> CliResult<()> {
    let scenario = load(config_path)?;
    let curve = &scenario.curve;
    let c_star = curve.c_star();
    let region = curve.default_region(c_star);

    let mut rng = SplitMix64::new(SAMPLING_SEED);
    let probes: Vec<Vec2> = (0..VALIDATE_PROBES)
        .map(|_| Vec2::new(rng.gen_range(region.min.x, region.max.x), rng.gen_range(region.min.y, region.max.y)))
        .collect();
    let report = fd_validate(curve, &probes, FD_STEP)
        .map_err(|e| CliError::Validation(e.to_string()))?;

    // Regularity: the gradient must not vanish anywhere in the band.
    let mut min_grad = f64::INFINITY;
    let mut accepted = 0usize;
    let mut tries = 0usize;
    while accepted < BAND_SAMPLES && tries < BAND_SAMPLES * 1000 {
        tries += 1;
        let p = Vec2::new(
            rng.gen_range(region.min.x, region.max.x),
            rng.gen_range(region.min.y, region.max.y),
        );
        let phi = curve.phi(p);
        if !phi.is_finite() || phi.abs() > c_star {
            continue;
        }
        accepted += 1;
        min_grad = min_grad.min(curve.grad(p).norm());
    }

    println!("probes: {}", report.probes_checked);
    println!("max_grad_rel_err: {:e}", report.max_grad_rel_err);
    println!("max_hessian_rel_err: {:e}", report.max_hessian_rel_err);
    println!("max_hessian_asymmetry: {:e}", report.max_hessian_asymmetry);
    println!("non_finite_probes: {}", report.non_finite_points.len());
    println!("band_samples: {accepted}");
    if accepted > 0 {
        println!("min_band_grad_norm: {min_grad:e}");
    }

    if !report.passes(FD_TOLERANCE) {
        return Err(CliError::CheckFailed(format!(
            "derivative mismatch: grad {:e}, hessian {:e} (tolerance {FD_TOLERANCE:e})",
            report.max_grad_rel_err, report.max_hessian_rel_err
        )));
    }
    if report.max_hessian_asymmetry > 1e-12 {
        return Err(CliError::CheckFailed(format!(
            "hessian asymmetry {:e} exceeds 1e-12",
            report.max_hessian_asymmetry
        )));
    }
    if accepted == 0 {
        return Err(CliError::CheckFailed("no samples landed in the band".into()));
    }
    if !(min_grad > 0.0) {
        return Err(CliError::CheckFailed(
            "gradient vanishes inside the band: regularity violated".into(),
        ));
    }
    println!("validation passed");
    Ok(())
}

/// `gvf tune`: offline bank-constraint check over the band.
pub fn cmd_tune(
    config_path: &Path,
    bank_limit_deg: Option<f64>,
    band: Option<f64>,
    wind_max: Option<f64>,
) -> CliResult<()> {
    let scenario = load(config_path)?;
    let curve = &scenario.curve;
    let band = band.unwrap_or_else(|| curve.c_star());
    if !band.is_finite() {
        return Err(CliError::Validation(
            "band is unbounded for this curve; pass --band explicitly".into(),
        ));
    }
    let bank_limit = bank_limit_deg.map(f64::to_radians).unwrap_or(scenario.sim.bank_limit);
    let wind_max = wind_max.unwrap_or_else(|| scenario.sim.wind.sup_norm());
    let setup = TuneSetup {
        band,
        airspeed: scenario.sim.airspeed,
        wind_max,
        pitch: scenario.sim.pitch,
        bank_limit,
        samples: BAND_SAMPLES,
        region: curve.default_region(band),
        seed: SAMPLING_SEED,
    };
    let report = tune_check(curve, &scenario.sim.gains, scenario.sim.direction, &setup)
        .map_err(|e| CliError::Validation(e.to_string()))?;

    println!("band: {band}");
    println!("worst_ground_speed_mps: {}", report.worst_ground_speed);
    println!("max_required_bank_rad: {}", report.max_required_bank);
    println!("max_required_bank_deg: {}", report.max_required_bank.to_degrees());
    println!("worst_point: ({}, {})", report.worst_point.x, report.worst_point.y);
    println!("accepted_samples: {}", report.accepted_samples);
    println!("skipped_degenerate: {}", report.skipped_degenerate);
    println!("bank_limit_deg: {}", bank_limit.to_degrees());
    println!("satisfied: {}", report.satisfied);

    if !report.satisfied {
        return Err(CliError::CheckFailed(format!(
            "required bank {:.2} deg exceeds the {:.2} deg limit",
            report.max_required_bank.to_degrees(),
            bank_limit.to_degrees()
        )));
    }
    Ok(())
}
