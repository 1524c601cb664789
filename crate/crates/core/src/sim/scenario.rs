use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::mfc::{ErrorConvention, Estimator};
use crate::turbine::TurbineParams;
use crate::wind::WindProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    /// Below rated wind: generator torque tracks the optimal tip-speed ratio.
    LowSpeed,
    /// Above rated wind: pitch holds rated speed, torque holds rated power.
    HighSpeed,
}

impl Region {
    pub fn as_str(self) -> &'static str {
        match self {
            Region::LowSpeed => "low_speed",
            Region::HighSpeed => "high_speed",
        }
    }
}

fn one() -> f64 {
    1.0
}

/// One iP loop.
///
/// The controller works in its own units: the actuator receives
/// `u·output_scale`, and `command_limits` are given in actuator units
/// (N·m for torque, degrees for pitch).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IpLoop {
    pub alpha: f64,
    pub k_p: f64,
    pub tau: f64,
    #[serde(default)]
    pub estimator: Estimator,
    #[serde(default = "one")]
    pub output_scale: f64,
    pub command_limits: [f64; 2],
}

/// One PI loop; units as for [`IpLoop`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PiLoop {
    pub k_p: f64,
    pub k_i: f64,
    #[serde(default = "one")]
    pub output_scale: f64,
    pub command_limits: [f64; 2],
}

/// Controller family and per-loop settings. The pitch loop exists only in
/// the high-speed region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ControllerSpec {
    Ip {
        torque: IpLoop,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pitch: Option<IpLoop>,
    },
    Pi {
        torque: PiLoop,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pitch: Option<PiLoop>,
    },
}

impl ControllerSpec {
    pub fn family(&self) -> &'static str {
        match self {
            ControllerSpec::Ip { .. } => "ip",
            ControllerSpec::Pi { .. } => "pi",
        }
    }

    fn has_pitch(&self) -> bool {
        match self {
            ControllerSpec::Ip { pitch, .. } => pitch.is_some(),
            ControllerSpec::Pi { pitch, .. } => pitch.is_some(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FaultKind {
    #[default]
    None,
    /// Actuator delivers `factor` times the command.
    EfficiencyLoss { factor: f64 },
    /// Actuator delivers the command plus `offset` (N·m).
    Bias { offset: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct FaultSpec {
    #[serde(default)]
    pub kind: FaultKind,
    #[serde(default)]
    pub t_onset: f64,
}

fn default_duration() -> f64 {
    600.0
}
fn default_dt() -> f64 {
    0.01
}
fn default_metrics_window() -> [f64; 2] {
    [60.0, 600.0]
}
fn default_pitch_rate() -> f64 {
    10.0
}
fn default_cut_in() -> f64 {
    4.0
}
fn default_cut_out() -> f64 {
    25.0
}

/// A complete experiment: plant, wind, controllers, fault and timing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub region: Region,
    pub wind: WindProfile,
    pub controller: ControllerSpec,
    #[serde(default)]
    pub error_convention: ErrorConvention,
    #[serde(default)]
    pub fault: FaultSpec,
    /// Simulated time (s).
    #[serde(default = "default_duration")]
    pub duration: f64,
    /// Integration and control period (s).
    #[serde(default = "default_dt")]
    pub dt: f64,
    /// Metrics are computed over `[t0, t1]` (s).
    #[serde(default = "default_metrics_window")]
    pub metrics_window: [f64; 2],
    /// Defaults to the reference speed at t = 0.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_omega: Option<f64>,
    /// Defaults to 0°.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_beta: Option<f64>,
    /// Generator torque before the first sample (N·m). Defaults to the
    /// torque balancing the rotor at low speed, rated torque at high speed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_torque: Option<f64>,
    /// First-order filter on the wind seen by the low-speed speed
    /// reference (s); 0 uses the instantaneous wind.
    #[serde(default)]
    pub reference_filter_tc: f64,
    /// First-order filter on the power measurement fed to the high-speed
    /// torque loop (s); 0 disables it.
    #[serde(default)]
    pub power_filter_tc: f64,
    /// Pitch slew limit (°/s).
    #[serde(default = "default_pitch_rate")]
    pub pitch_rate_limit: f64,
    /// Only used to warn when the wind leaves the operating envelope (m/s).
    #[serde(default = "default_cut_in")]
    pub cut_in: f64,
    #[serde(default = "default_cut_out")]
    pub cut_out: f64,
    #[serde(default)]
    pub turbine: TurbineParams,
}

/// Largest pitch the actuator can reach (°).
pub const MAX_PITCH: f64 = 90.0;

impl Scenario {
    /// Number of recorded samples, `duration/dt + 1`.
    pub fn sample_count(&self) -> usize {
        (self.duration / self.dt).round() as usize + 1
    }

    pub fn validate(&self) -> Result<()> {
        self.turbine.validate()?;
        self.wind.validate()?;
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(invalid("dt must be positive"));
        }
        if !(self.duration > 0.0) || !self.duration.is_finite() {
            return Err(invalid("duration must be positive"));
        }
        let steps = self.duration / self.dt;
        if (steps - steps.round()).abs() * self.dt > 1e-9 {
            return Err(invalid(format!(
                "dt = {} does not divide duration = {}",
                self.dt, self.duration
            )));
        }
        let [t0, t1] = self.metrics_window;
        if !(t0 >= 0.0 && t0 < t1 && t1 <= self.duration + 1e-9) {
            return Err(invalid(format!(
                "metrics window [{t0}, {t1}] must satisfy 0 ≤ t0 < t1 ≤ duration"
            )));
        }
        match (self.region, self.controller.has_pitch()) {
            (Region::LowSpeed, true) => {
                return Err(invalid("low-speed scenarios hold the pitch; remove the pitch loop"))
            }
            (Region::HighSpeed, false) => {
                return Err(invalid("high-speed scenarios need a pitch loop"))
            }
            _ => {}
        }
        match &self.controller {
            ControllerSpec::Ip { torque, pitch } => {
                validate_ip(torque, "torque", self.dt)?;
                if let Some(p) = pitch {
                    validate_ip(p, "pitch", self.dt)?;
                }
            }
            ControllerSpec::Pi { torque, pitch } => {
                validate_pi(torque, "torque")?;
                if let Some(p) = pitch {
                    validate_pi(p, "pitch")?;
                }
            }
        }
        match self.fault.kind {
            FaultKind::None => {}
            FaultKind::EfficiencyLoss { factor } => {
                if !(factor > 0.0 && factor <= 1.0) {
                    return Err(invalid("efficiency-loss factor must lie in (0, 1]"));
                }
            }
            FaultKind::Bias { offset } => {
                if !offset.is_finite() {
                    return Err(invalid("bias offset must be finite"));
                }
            }
        }
        if !(self.fault.t_onset >= 0.0) || !self.fault.t_onset.is_finite() {
            return Err(invalid("fault onset must be non-negative"));
        }
        for (name, v) in [
            ("initial_omega", self.initial_omega),
            ("initial_torque", self.initial_torque),
        ] {
            if let Some(v) = v {
                if !(v >= 0.0) || !v.is_finite() {
                    return Err(invalid(format!("{name} must be non-negative")));
                }
            }
        }
        if let Some(b) = self.initial_beta {
            if !(0.0..=MAX_PITCH).contains(&b) {
                return Err(invalid("initial_beta must lie in [0, 90] degrees"));
            }
        }
        for (name, v) in [
            ("reference_filter_tc", self.reference_filter_tc),
            ("power_filter_tc", self.power_filter_tc),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(invalid(format!("{name} must be non-negative")));
            }
        }
        if !(self.pitch_rate_limit > 0.0) {
            return Err(invalid("pitch_rate_limit must be positive"));
        }
        if !(self.cut_in > 0.0 && self.cut_in < self.cut_out) {
            return Err(invalid("cut_in must be positive and below cut_out"));
        }
        Ok(())
    }
}

fn validate_limits(limits: [f64; 2], scale: f64, loop_id: &str) -> Result<()> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(invalid(format!("{loop_id} loop: output_scale must be positive")));
    }
    if !(limits[0] < limits[1]) || !limits[0].is_finite() || !limits[1].is_finite() {
        return Err(invalid(format!(
            "{loop_id} loop: command_limits must be finite with min < max"
        )));
    }
    Ok(())
}

fn validate_ip(l: &IpLoop, loop_id: &str, dt: f64) -> Result<()> {
    validate_limits(l.command_limits, l.output_scale, loop_id)?;
    crate::mfc::UltraLocalConfig::new(l.alpha, l.k_p, l.tau, l.estimator, dt, ErrorConvention::default())
        .map(|_| ())
        .map_err(|e| invalid(format!("{loop_id} loop: {e}")))
}

fn validate_pi(l: &PiLoop, loop_id: &str) -> Result<()> {
    validate_limits(l.command_limits, l.output_scale, loop_id)?;
    if !l.k_p.is_finite() || !l.k_i.is_finite() {
        return Err(invalid(format!("{loop_id} loop: gains must be finite")));
    }
    Ok(())
}
