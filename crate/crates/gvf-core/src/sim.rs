//! Closed-loop kinematic simulation: the unicycle-with-wind model
//!
//! ```text
//! ṗ = s·m(ψ) + w(t),   ψ̇ = u,   m(ψ) = (cos ψ, sin ψ)
//! ```
//!
//! integrated with classical RK4 while the guidance controller runs at a
//! fixed rate with zero-order hold between updates. The yaw rate is actuated
//! directly; the coordinated-turn bank equivalent is logged alongside.

use alloc::vec::Vec;

use crate::analysis::lyapunov_v1;
use crate::curve::ImplicitCurve;
use crate::gvf::{self, Direction, Gains, GuidanceCommand};
use crate::math::{scalar, wrap_angle, Aabb, Vec2};
use crate::{Error, Result};

/// Vehicle pose: position in the navigation frame and yaw in `(-pi, pi]`.
#[derive(Debug, Clone, Copy)]
pub struct VehicleState {
    pub position: Vec2,
    pub yaw: f64,
}

impl VehicleState {
    pub fn new(position: Vec2, yaw: f64) -> Self {
        VehicleState { position, yaw: wrap_angle(yaw) }
    }

    pub fn is_finite(&self) -> bool {
        self.position.is_finite() && self.yaw.is_finite()
    }
}

/// Wind disturbance in the navigation frame.
#[derive(Debug, Clone, Copy)]
pub enum WindModel {
    /// Fixed vector w.
    Constant { wind: Vec2 },
    /// Base vector plus a bounded sinusoid along the base direction
    /// (along +x when the base is zero):
    /// `w(t) = base + amplitude·sin(2πt/period)·base_hat`.
    SinusoidalGust { base: Vec2, amplitude: f64, period: f64 },
}

impl WindModel {
    pub fn constant(wind: Vec2) -> Result<Self> {
        if !wind.is_finite() {
            return Err(Error::NonFiniteInput);
        }
        Ok(WindModel::Constant { wind })
    }

    pub fn sinusoidal_gust(base: Vec2, amplitude: f64, period: f64) -> Result<Self> {
        if !base.is_finite() || !amplitude.is_finite() || !period.is_finite() {
            return Err(Error::NonFiniteInput);
        }
        if period <= 0.0 {
            return Err(Error::InvalidConfig("gust period must be positive"));
        }
        Ok(WindModel::SinusoidalGust { base, amplitude, period })
    }

    /// Wind vector at time `t`.
    pub fn sample(&self, t: f64) -> Vec2 {
        match *self {
            WindModel::Constant { wind } => wind,
            WindModel::SinusoidalGust { base, amplitude, period } => {
                let dir = base.normalized().unwrap_or(Vec2::new(1.0, 0.0));
                base + dir * (amplitude * scalar::sin(core::f64::consts::TAU * t / period))
            }
        }
    }

    /// Supremum of `‖w(t)‖` over all time.
    pub fn sup_norm(&self) -> f64 {
        match *self {
            WindModel::Constant { wind } => wind.norm(),
            WindModel::SinusoidalGust { base, amplitude, .. } => base.norm() + scalar::abs(amplitude),
        }
    }
}

/// Ground velocity `ṗ = s·m(ψ) + w(t)`.
pub fn ground_velocity(state: &VehicleState, airspeed: f64, wind: &WindModel, t: f64) -> Vec2 {
    airspeed * Vec2::from_angle(state.yaw) + wind.sample(t)
}

/// One classical RK4 step of the model with the yaw rate held constant.
/// Yaw is rewrapped into `(-pi, pi]` afterwards.
pub fn step(
    state: &VehicleState,
    yaw_rate: f64,
    airspeed: f64,
    wind: &WindModel,
    t: f64,
    dt: f64,
) -> Result<VehicleState> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::NonPositiveStep);
    }
    if !state.is_finite() || !yaw_rate.is_finite() || !airspeed.is_finite() || !t.is_finite() {
        return Err(Error::NonFiniteInput);
    }
    let deriv = |pos_yaw: (Vec2, f64), tt: f64| -> (Vec2, f64) {
        let (_, yaw) = pos_yaw;
        (airspeed * Vec2::from_angle(yaw) + wind.sample(tt), yaw_rate)
    };
    let y0 = (state.position, state.yaw);
    let k1 = deriv(y0, t);
    let k2 = deriv((y0.0 + k1.0 * (dt / 2.0), y0.1 + k1.1 * (dt / 2.0)), t + dt / 2.0);
    let k3 = deriv((y0.0 + k2.0 * (dt / 2.0), y0.1 + k2.1 * (dt / 2.0)), t + dt / 2.0);
    let k4 = deriv((y0.0 + k3.0 * dt, y0.1 + k3.1 * dt), t + dt);
    let position = y0.0 + (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0) * (dt / 6.0);
    let yaw = y0.1 + (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1) * (dt / 6.0);
    Ok(VehicleState::new(position, yaw))
}

/// Simulation setup. The curve is passed separately to [`run`].
#[derive(Debug, Clone, Copy)]
pub struct SimConfig {
    pub direction: Direction,
    pub gains: Gains,
    /// Constant airspeed s (m/s).
    pub airspeed: f64,
    pub wind: WindModel,
    pub initial: VehicleState,
    /// Trim pitch θ (rad), usually near zero.
    pub pitch: f64,
    /// Airframe bank limit φ* (rad); commands clamp to it.
    pub bank_limit: f64,
    /// Integration step (s).
    pub dt: f64,
    /// Simulated horizon (s).
    pub duration: f64,
    /// Controller update rate (Hz); must divide 1/dt evenly. The command is
    /// held between updates.
    pub controller_rate_hz: f64,
}

impl SimConfig {
    /// Integration steps per controller update.
    pub fn controller_stride(&self) -> Result<usize> {
        if !(self.controller_rate_hz > 0.0) || !(self.dt > 0.0) {
            return Err(Error::InvalidConfig("controller rate and dt must be positive"));
        }
        let steps = 1.0 / (self.controller_rate_hz * self.dt);
        let rounded = scalar::round(steps);
        if rounded < 1.0 || scalar::abs(steps - rounded) > 1e-6 * steps {
            return Err(Error::InvalidConfig(
                "controller rate must divide the integration rate evenly",
            ));
        }
        Ok(rounded as usize)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.airspeed > 0.0) || !self.airspeed.is_finite() {
            return Err(Error::NonPositiveAirspeed);
        }
        // Airspeed must strictly exceed the wind bound, otherwise some course
        // directions are unreachable and the field cannot be tracked.
        if !(self.wind.sup_norm() < self.airspeed) {
            return Err(Error::WindExceedsAirspeed);
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::NonPositiveStep);
        }
        if !(self.duration >= self.dt) || !self.duration.is_finite() {
            return Err(Error::InvalidConfig("duration must cover at least one step"));
        }
        if !(self.bank_limit > 0.0) || self.bank_limit >= core::f64::consts::FRAC_PI_2 {
            return Err(Error::BankOutOfRange);
        }
        if scalar::abs(self.pitch) >= core::f64::consts::FRAC_PI_2 || !self.pitch.is_finite() {
            return Err(Error::PitchOutOfRange);
        }
        if !self.initial.is_finite() {
            return Err(Error::NonFiniteInput);
        }
        self.controller_stride()?;
        Ok(())
    }
}

/// Why a run ended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination {
    /// Full horizon simulated.
    Completed,
    /// The controller reached a critical point of the field.
    DegenerateField { time: f64 },
    /// Ground speed collapsed below the usable threshold.
    LowGroundSpeed { time: f64 },
    /// The state stopped being finite.
    NonFinite { time: f64 },
}

impl Termination {
    pub fn is_completed(&self) -> bool {
        matches!(self, Termination::Completed)
    }
}

/// One log sample. Command fields (`yaw_rate*`, `desired_course_rate`,
/// `sideslip`, `bank_cmd`, `clamped`) reflect the zero-order-held command
/// active at this instant; the error, Lyapunov values and alignment are
/// evaluated fresh from the state.
#[derive(Debug, Clone, Copy)]
pub struct TrajectoryRecord {
    pub time: f64,
    pub position: Vec2,
    pub yaw: f64,
    /// Ground velocity ṗ at this instant (m/s).
    pub velocity: Vec2,
    pub level_error: f64,
    pub v1: f64,
    pub v2: f64,
    pub yaw_rate_raw: f64,
    pub yaw_rate: f64,
    pub desired_course_rate: f64,
    pub sideslip: f64,
    pub bank_cmd: f64,
    pub alignment_error: f64,
    pub clamped: bool,
}

/// Scenario constants a log carries so it can be analyzed on its own.
#[derive(Debug, Clone, Copy)]
pub struct LogMeta {
    pub airspeed: f64,
    pub pitch: f64,
    pub bank_limit: f64,
    pub k_d: f64,
    pub dt: f64,
    pub controller_stride: usize,
    pub wind_sup: f64,
}

/// Time series produced by [`run`]. Timestamps increase strictly and every
/// retained record is finite.
#[derive(Debug, Clone)]
pub struct TrajectoryLog {
    pub records: Vec<TrajectoryRecord>,
    pub meta: LogMeta,
    pub termination: Termination,
}

/// Simulate the closed loop over the configured horizon. The controller is
/// evaluated every `controller_stride` steps and held in between; the log
/// gets one record per integration step, including both endpoints.
///
/// A controller singularity (critical point, collapsed ground speed) ends
/// the run early with the partial log and the reason in `termination`.
pub fn run(curve: &dyn ImplicitCurve, config: &SimConfig) -> Result<TrajectoryLog> {
    config.validate()?;
    let stride = config.controller_stride()?;
    let steps = scalar::round(config.duration / config.dt) as usize;
    let meta = LogMeta {
        airspeed: config.airspeed,
        pitch: config.pitch,
        bank_limit: config.bank_limit,
        k_d: config.gains.k_d(),
        dt: config.dt,
        controller_stride: stride,
        wind_sup: config.wind.sup_norm(),
    };
    let mut records = Vec::with_capacity(steps + 1);
    let mut state = VehicleState::new(config.initial.position, config.initial.yaw);
    let mut termination = Termination::Completed;
    let mut held: Option<GuidanceCommand> = None;

    for i in 0..=steps {
        let t = i as f64 * config.dt;
        if !state.is_finite() {
            termination = Termination::NonFinite { time: t };
            break;
        }
        let velocity = ground_velocity(&state, config.airspeed, &config.wind, t);

        if i % stride == 0 {
            match gvf::control(
                curve,
                &state,
                velocity,
                config.airspeed,
                &config.gains,
                config.direction,
                config.pitch,
                config.bank_limit,
            ) {
                Ok(cmd) => held = Some(cmd),
                Err(Error::DegenerateField) => {
                    termination = Termination::DegenerateField { time: t };
                    break;
                }
                Err(Error::ZeroGroundSpeed) => {
                    termination = Termination::LowGroundSpeed { time: t };
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        let cmd = held.as_ref().ok_or(Error::InvalidConfig("controller never ran"))?;

        // Fresh per-sample diagnostics.
        let speed = velocity.norm();
        if speed < gvf::EPS_SPEED_MPS {
            termination = Termination::LowGroundSpeed { time: t };
            break;
        }
        let f = gvf::field(curve, state.position, &config.gains, config.direction);
        if f.degenerate {
            termination = Termination::DegenerateField { time: t };
            break;
        }
        let e = curve.phi(state.position);
        let p_hat = velocity * (1.0 / speed);
        let pd_hat = f.vector * (1.0 / f.vector.norm());
        records.push(TrajectoryRecord {
            time: t,
            position: state.position,
            yaw: state.yaw,
            velocity,
            level_error: e,
            v1: lyapunov_v1(e),
            v2: 1.0 - p_hat.dot(pd_hat),
            yaw_rate_raw: cmd.yaw_rate_raw,
            yaw_rate: cmd.yaw_rate,
            desired_course_rate: cmd.desired_course_rate,
            sideslip: cmd.sideslip,
            bank_cmd: cmd.bank_cmd,
            alignment_error: p_hat.cross(pd_hat),
            clamped: cmd.clamped,
        });

        if i < steps {
            state = step(&state, cmd.yaw_rate, config.airspeed, &config.wind, t, config.dt)?;
        }
    }

    Ok(TrajectoryLog { records, meta, termination })
}

/// One node of a sampled field grid.
#[derive(Debug, Clone, Copy)]
pub struct FieldGridNode {
    pub position: Vec2,
    /// Unit field direction; zero when `degenerate`.
    pub direction: Vec2,
    pub degenerate: bool,
}

/// Normalized field directions on a regular grid, for plotting by external
/// tooling. Nodes are stored row-major, y-major (x varies fastest).
#[derive(Debug, Clone)]
pub struct FieldGrid {
    pub nx: usize,
    pub ny: usize,
    pub nodes: Vec<FieldGridNode>,
}

/// Evaluate unit field directions on an `nx` x `ny` grid over `region`.
/// Critical points are masked instead of normalized.
pub fn sample_field_grid(
    curve: &dyn ImplicitCurve,
    region: Aabb,
    nx: usize,
    ny: usize,
    gains: &Gains,
    direction: Direction,
) -> Result<FieldGrid> {
    if nx < 2 || ny < 2 {
        return Err(Error::InvalidConfig("grid resolution must be at least 2 per axis"));
    }
    let mut nodes = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        let y = region.min.y + region.height() * j as f64 / (ny - 1) as f64;
        for i in 0..nx {
            let x = region.min.x + region.width() * i as f64 / (nx - 1) as f64;
            let p = Vec2::new(x, y);
            let f = gvf::field(curve, p, gains, direction);
            let node = match (f.degenerate, f.vector.normalized()) {
                (false, Some(dir)) => FieldGridNode { position: p, direction: dir, degenerate: false },
                _ => FieldGridNode { position: p, direction: Vec2::ZERO, degenerate: true },
            };
            nodes.push(node);
        }
    }
    Ok(FieldGrid { nx, ny, nodes })
}
