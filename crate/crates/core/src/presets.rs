//! The published experiments as ready-made scenarios.
//!
//! Torque loops command kN·m (`output_scale = 1000`) and the high-speed
//! torque loop measures power in W; pitch loops command degrees. With
//! these units the tabulated gains are used as printed. Torque commands may
//! reach twice the actuator limit so a degraded actuator can still be
//! driven to full torque.

use crate::config::ScenarioFile;
use crate::error::{invalid, Result};
use crate::mfc::{ErrorConvention, Estimator};
use crate::sim::{ControllerSpec, FaultKind, FaultSpec, IpLoop, PiLoop, Region, Scenario};
use crate::turbine::TurbineParams;
use crate::wind::{AmplitudeRule, WindProfile, WindSegment};

pub const PRESET_NAMES: [&str; 6] = [
    "low-ip",
    "low-pi",
    "high-ip",
    "high-pi",
    "fault-efficiency",
    "fault-bias",
];

const KN_M: f64 = 1000.0;
/// Wind-filter time constant of the low-speed speed reference (s).
pub const LOW_SPEED_REFERENCE_FILTER: f64 = 30.0;
/// Power-measurement filter of the high-speed torque loop (s).
pub const HIGH_SPEED_POWER_FILTER: f64 = 0.2;
/// Pitch at the start of high-speed runs (°).
pub const HIGH_SPEED_INITIAL_PITCH: f64 = 30.0;
pub const FAULT_ONSET: f64 = 300.0;
pub const EFFICIENCY_FACTOR: f64 = 0.85;
/// −50 kN·m.
pub const BIAS_OFFSET: f64 = -5.0e4;

fn schedule(points: &[(f64, f64)]) -> WindProfile {
    WindProfile {
        schedule: points
            .iter()
            .map(|&(t_start, v_mean)| WindSegment { t_start, v_mean })
            .collect(),
        amplitude_rule: AmplitudeRule::Table,
    }
}

fn torque_limits() -> [f64; 2] {
    [0.0, TurbineParams::default().max_generator_torque]
}

fn low_ip() -> ControllerSpec {
    ControllerSpec::Ip {
        torque: IpLoop {
            alpha: 0.0005,
            k_p: -0.45,
            tau: 20.0,
            estimator: Estimator::Algebraic,
            output_scale: KN_M,
            command_limits: torque_limits(),
        },
        pitch: None,
    }
}

fn low_pi() -> ControllerSpec {
    ControllerSpec::Pi {
        torque: PiLoop {
            k_p: 500.0,
            k_i: 10.0,
            output_scale: KN_M,
            command_limits: torque_limits(),
        },
        pitch: None,
    }
}

fn high_torque_limits() -> [f64; 2] {
    [0.0, 2.0 * TurbineParams::default().max_generator_torque]
}

fn high_ip() -> ControllerSpec {
    ControllerSpec::Ip {
        torque: IpLoop {
            alpha: 1000.0,
            k_p: 3.0,
            tau: 20.0,
            estimator: Estimator::Algebraic,
            output_scale: KN_M,
            command_limits: high_torque_limits(),
        },
        pitch: Some(IpLoop {
            alpha: 1.0,
            k_p: -4.0,
            tau: 20.0,
            estimator: Estimator::Algebraic,
            output_scale: 1.0,
            command_limits: [0.0, 90.0],
        }),
    }
}

fn high_pi() -> ControllerSpec {
    ControllerSpec::Pi {
        torque: PiLoop {
            k_p: -0.0003,
            k_i: -0.00026,
            output_scale: KN_M,
            command_limits: high_torque_limits(),
        },
        pitch: Some(PiLoop {
            k_p: -0.006,
            k_i: 0.52,
            output_scale: 1.0,
            command_limits: [0.0, 90.0],
        }),
    }
}

fn base(name: &str, region: Region, wind: WindProfile, controller: ControllerSpec) -> Scenario {
    let high = region == Region::HighSpeed;
    Scenario {
        name: name.to_owned(),
        region,
        wind,
        controller,
        error_convention: ErrorConvention::YMinusRef,
        fault: FaultSpec::default(),
        duration: 600.0,
        dt: 0.01,
        metrics_window: [60.0, 600.0],
        initial_omega: None,
        initial_beta: Some(if high { HIGH_SPEED_INITIAL_PITCH } else { 0.0 }),
        initial_torque: None,
        reference_filter_tc: if high { 0.0 } else { LOW_SPEED_REFERENCE_FILTER },
        power_filter_tc: if high { HIGH_SPEED_POWER_FILTER } else { 0.0 },
        pitch_rate_limit: 10.0,
        cut_in: 4.0,
        cut_out: 25.0,
        turbine: TurbineParams::default(),
    }
}

/// Build a preset scenario by name.
pub fn preset_scenario(name: &str) -> Result<Scenario> {
    let low_wind = || schedule(&[(0.0, 7.0), (200.0, 8.0), (400.0, 9.0)]);
    let high_wind = || schedule(&[(0.0, 16.0), (300.0, 20.0)]);
    let fault_wind = || schedule(&[(0.0, 16.0)]);
    let scenario = match name {
        "low-ip" => base(name, Region::LowSpeed, low_wind(), low_ip()),
        "low-pi" => base(name, Region::LowSpeed, low_wind(), low_pi()),
        "high-ip" => base(name, Region::HighSpeed, high_wind(), high_ip()),
        "high-pi" => base(name, Region::HighSpeed, high_wind(), high_pi()),
        "fault-efficiency" | "fault-bias" => {
            let mut s = base(name, Region::HighSpeed, fault_wind(), high_ip());
            s.fault = FaultSpec {
                kind: if name == "fault-bias" {
                    FaultKind::Bias { offset: BIAS_OFFSET }
                } else {
                    FaultKind::EfficiencyLoss { factor: EFFICIENCY_FACTOR }
                },
                t_onset: FAULT_ONSET,
            };
            s
        }
        other => {
            return Err(invalid(format!(
                "unknown preset `{other}`; valid presets: {}",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    Ok(scenario)
}

/// A preset wrapped as a scenario file.
pub fn preset(name: &str) -> Result<ScenarioFile> {
    preset_scenario(name).map(ScenarioFile::new)
}
