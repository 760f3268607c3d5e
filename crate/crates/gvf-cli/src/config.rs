//! Flat, human-editable scenario configs. Keys carry explicit units
//! (`airspeed_mps`, `rotation_alpha_deg`); angles are degrees in the file
//! and radians everywhere else.

use std::fs;
use std::path::Path;

use gvf_core::curve::{Circle, Ellipse, EllipseParams, ImplicitCurve, Line};
use gvf_core::gvf::{Direction, Gains};
use gvf_core::math::{Aabb, Mat2};
use gvf_core::sim::{SimConfig, VehicleState, WindModel};
use gvf_core::Vec2;
use serde::Deserialize;

use crate::{CliError, CliResult};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,

    /// `line`, `circle`, `ellipse`, or `corrupted-circle` (a validator
    /// self-test fixture whose gradient is deliberately wrong).
    pub curve: String,

    // line
    pub point_x_m: Option<f64>,
    pub point_y_m: Option<f64>,
    pub course_deg: Option<f64>,

    // circle / ellipse
    pub center_x_m: Option<f64>,
    pub center_y_m: Option<f64>,
    pub radius_m: Option<f64>,
    pub semi_axis_a_m: Option<f64>,
    pub semi_axis_b_m: Option<f64>,
    pub rotation_alpha_deg: Option<f64>,

    /// Regularity bound for the band `{|phi| <= c_star}`. Omit for a line
    /// (globally regular).
    pub c_star: Option<f64>,

    /// Traversal direction: `1` follows the level-set rotation as-is, `-1`
    /// reverses it.
    pub direction: i8,

    pub k_e: f64,
    pub k_d: f64,
    pub airspeed_mps: f64,

    /// `constant` or `sinusoidal_gust`.
    pub wind_model: String,
    pub wind_x_mps: f64,
    pub wind_y_mps: f64,
    pub gust_amplitude_mps: Option<f64>,
    pub gust_period_s: Option<f64>,

    pub initial_x_m: f64,
    pub initial_y_m: f64,
    pub initial_yaw_deg: f64,

    pub pitch_deg: f64,
    pub bank_limit_deg: f64,

    pub dt_s: f64,
    pub duration_s: f64,
    pub controller_rate_hz: f64,

    /// Settle threshold on `|e|` for the analysis report (dimensionless for
    /// the ellipse level function, meters for lines).
    pub settle_tolerance: f64,
}

/// A built curve, one variant per supported kind, usable as
/// `&dyn ImplicitCurve`.
#[derive(Debug, Clone)]
pub enum CurveInstance {
    Line(Line),
    Circle(Circle),
    Ellipse(Ellipse),
    /// Circle with its gradient doubled: exists so `gvf validate` can be
    /// shown to catch broken derivatives end to end.
    CorruptedCircle(Circle),
}

impl CurveInstance {
    /// A point roughly "at" the curve, for default sampling regions.
    pub fn reference_point(&self) -> Vec2 {
        match self {
            CurveInstance::Line(_) => Vec2::ZERO,
            CurveInstance::Circle(c) | CurveInstance::CorruptedCircle(c) => c.center(),
            CurveInstance::Ellipse(e) => e.params().center,
        }
    }

    /// Sampling region: the band hint when the curve has one, otherwise a
    /// 400 m box around the reference point.
    pub fn default_region(&self, band: f64) -> Aabb {
        let fallback = || {
            Aabb::centered(self.reference_point(), Vec2::new(200.0, 200.0))
                .expect("static box is valid")
        };
        if !band.is_finite() {
            return fallback();
        }
        self.band_hint(band).unwrap_or_else(fallback)
    }
}

impl ImplicitCurve for CurveInstance {
    fn phi(&self, p: Vec2) -> f64 {
        match self {
            CurveInstance::Line(c) => c.phi(p),
            CurveInstance::Circle(c) | CurveInstance::CorruptedCircle(c) => c.phi(p),
            CurveInstance::Ellipse(c) => c.phi(p),
        }
    }

    fn grad(&self, p: Vec2) -> Vec2 {
        match self {
            CurveInstance::Line(c) => c.grad(p),
            CurveInstance::Circle(c) => c.grad(p),
            CurveInstance::CorruptedCircle(c) => 2.0 * c.grad(p),
            CurveInstance::Ellipse(c) => c.grad(p),
        }
    }

    fn hessian(&self, p: Vec2) -> Mat2 {
        match self {
            CurveInstance::Line(c) => c.hessian(p),
            CurveInstance::Circle(c) | CurveInstance::CorruptedCircle(c) => c.hessian(p),
            CurveInstance::Ellipse(c) => c.hessian(p),
        }
    }

    fn c_star(&self) -> f64 {
        match self {
            CurveInstance::Line(c) => c.c_star(),
            CurveInstance::Circle(c) | CurveInstance::CorruptedCircle(c) => c.c_star(),
            CurveInstance::Ellipse(c) => c.c_star(),
        }
    }

    fn grad_scale(&self) -> f64 {
        match self {
            CurveInstance::Line(c) => c.grad_scale(),
            CurveInstance::Circle(c) | CurveInstance::CorruptedCircle(c) => c.grad_scale(),
            CurveInstance::Ellipse(c) => c.grad_scale(),
        }
    }

    fn band_hint(&self, c: f64) -> Option<Aabb> {
        match self {
            CurveInstance::Line(l) => l.band_hint(c),
            CurveInstance::Circle(ci) | CurveInstance::CorruptedCircle(ci) => ci.band_hint(c),
            CurveInstance::Ellipse(e) => e.band_hint(c),
        }
    }
}

/// Everything a command needs, built and validated from one config file.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub curve: CurveInstance,
    pub sim: SimConfig,
    pub settle_tolerance: f64,
}

pub fn load(path: &Path) -> CliResult<Scenario> {
    let text = fs::read_to_string(path).map_err(|e| {
        CliError::Parse(format!("cannot read {}: {e}", path.display()))
    })?;
    parse(&text)
}

pub fn parse(text: &str) -> CliResult<Scenario> {
    let cfg: ScenarioConfig =
        toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    build(&cfg)
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn require(field: Option<f64>, name: &str, curve: &str) -> CliResult<f64> {
    field.ok_or_else(|| invalid(format!("curve \"{curve}\" requires `{name}`")))
}

pub fn build(cfg: &ScenarioConfig) -> CliResult<Scenario> {
    let curve = build_curve(cfg)?;

    let direction = match cfg.direction {
        1 => Direction::Standard,
        -1 => Direction::Reversed,
        other => return Err(invalid(format!("direction must be 1 or -1, got {other}"))),
    };

    let gains = Gains::new(cfg.k_e, cfg.k_d)
        .map_err(|e| invalid(format!("gains: {e}")))?;

    let wind = match cfg.wind_model.as_str() {
        "constant" => WindModel::constant(Vec2::new(cfg.wind_x_mps, cfg.wind_y_mps))
            .map_err(|e| invalid(format!("wind: {e}")))?,
        "sinusoidal_gust" => {
            let amp = require(cfg.gust_amplitude_mps, "gust_amplitude_mps", "sinusoidal_gust")?;
            let period = require(cfg.gust_period_s, "gust_period_s", "sinusoidal_gust")?;
            WindModel::sinusoidal_gust(Vec2::new(cfg.wind_x_mps, cfg.wind_y_mps), amp, period)
                .map_err(|e| invalid(format!("wind: {e}")))?
        }
        other => return Err(invalid(format!("unknown wind_model \"{other}\""))),
    };

    // The reachability assumption: any course is flyable only while the
    // airspeed strictly exceeds the worst-case wind speed.
    if !(wind.sup_norm() < cfg.airspeed_mps) {
        return Err(invalid(format!(
            "wind speed bound {} m/s must be strictly less than airspeed {} m/s",
            wind.sup_norm(),
            cfg.airspeed_mps
        )));
    }

    let sim = SimConfig {
        direction,
        gains,
        airspeed: cfg.airspeed_mps,
        wind,
        initial: VehicleState::new(
            Vec2::new(cfg.initial_x_m, cfg.initial_y_m),
            cfg.initial_yaw_deg.to_radians(),
        ),
        pitch: cfg.pitch_deg.to_radians(),
        bank_limit: cfg.bank_limit_deg.to_radians(),
        dt: cfg.dt_s,
        duration: cfg.duration_s,
        controller_rate_hz: cfg.controller_rate_hz,
    };
    sim.validate().map_err(|e| invalid(e.to_string()))?;

    if !(cfg.settle_tolerance > 0.0) {
        return Err(invalid("settle_tolerance must be positive"));
    }

    Ok(Scenario { name: cfg.name.clone(), curve, sim, settle_tolerance: cfg.settle_tolerance })
}

fn build_curve(cfg: &ScenarioConfig) -> CliResult<CurveInstance> {
    let kind = cfg.curve.as_str();
    match kind {
        "line" => {
            let x = require(cfg.point_x_m, "point_x_m", kind)?;
            let y = require(cfg.point_y_m, "point_y_m", kind)?;
            let course = require(cfg.course_deg, "course_deg", kind)?;
            let mut line = Line::through(Vec2::new(x, y), course.to_radians())
                .map_err(|e| invalid(e.to_string()))?;
            if let Some(c) = cfg.c_star {
                line = line.with_c_star(c);
            }
            Ok(CurveInstance::Line(line))
        }
        "circle" | "corrupted-circle" => {
            let x = require(cfg.center_x_m, "center_x_m", kind)?;
            let y = require(cfg.center_y_m, "center_y_m", kind)?;
            let r = require(cfg.radius_m, "radius_m", kind)?;
            let mut circle =
                Circle::new(Vec2::new(x, y), r).map_err(|e| invalid(e.to_string()))?;
            if let Some(c) = cfg.c_star {
                circle = circle.with_c_star(c);
            }
            if kind == "circle" {
                Ok(CurveInstance::Circle(circle))
            } else {
                Ok(CurveInstance::CorruptedCircle(circle))
            }
        }
        "ellipse" => {
            let x = require(cfg.center_x_m, "center_x_m", kind)?;
            let y = require(cfg.center_y_m, "center_y_m", kind)?;
            let a = require(cfg.semi_axis_a_m, "semi_axis_a_m", kind)?;
            let b = require(cfg.semi_axis_b_m, "semi_axis_b_m", kind)?;
            let alpha = require(cfg.rotation_alpha_deg, "rotation_alpha_deg", kind)?;
            let mut ellipse = Ellipse::new(EllipseParams {
                center: Vec2::new(x, y),
                semi_axis_a: a,
                semi_axis_b: b,
                rotation: alpha.to_radians(),
            })
            .map_err(|e| invalid(e.to_string()))?;
            if let Some(c) = cfg.c_star {
                ellipse = ellipse.with_c_star(c);
            }
            Ok(CurveInstance::Ellipse(ellipse))
        }
        other => Err(invalid(format!("unknown curve kind \"{other}\""))),
    }
}
