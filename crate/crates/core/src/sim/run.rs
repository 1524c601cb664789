use super::fault::{apply_fault, electrical_power};
use super::metrics::{compute_metrics, RunMetrics};
use super::reference::{reference_high_speed, SpeedReference};
use super::scenario::{ControllerSpec, IpLoop, PiLoop, Region, Scenario, MAX_PITCH};
use crate::error::{Error, Result};
use crate::mfc::{ErrorConvention, UltraLocalConfig, UltraLocalController};
use crate::pi::{PiConfig, PiController, PiState};
use crate::turbine::{self, aerodynamic_power, aerodynamic_torque, optimal_operating_point, OperatingPoint, TurbineState};

/// One recorded sample. Pitch and torque are the values held over the
/// following integration step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecordRow {
    pub t: f64,
    pub wind: f64,
    pub omega: f64,
    pub omega_ref: f64,
    /// Pitch after saturation and slew limiting (°).
    pub beta: f64,
    /// Torque requested by the controller (N·m).
    pub torque_cmd: f64,
    /// Torque delivered by the actuator (N·m).
    pub torque_act: f64,
    pub p_t: f64,
    pub p_e: f64,
    /// `F_est` of loop 1 and loop 2 when they are iP loops. Loop 1 is the
    /// torque loop at low speed and the pitch loop at high speed.
    pub f_est: [Option<f64>; 2],
}

/// Uniformly sampled time series, `duration/dt + 1` rows.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunRecord {
    pub rows: Vec<RecordRow>,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub record: RunRecord,
    pub metrics: RunMetrics,
    pub operating_point: OperatingPoint,
    /// Non-fatal notes, e.g. wind outside the cut-in/cut-out envelope.
    pub warnings: Vec<String>,
}

/// A monovariable loop of either family, in actuator units.
enum LoopController {
    Ip { ctl: UltraLocalController, scale: f64, limits: (f64, f64) },
    Pi { ctl: PiController, scale: f64 },
}

impl LoopController {
    fn ip(l: &IpLoop, dt: f64, convention: ErrorConvention) -> Result<Self> {
        let cfg = UltraLocalConfig::new(l.alpha, l.k_p, l.tau, l.estimator, dt, convention)?;
        Ok(LoopController::Ip {
            ctl: UltraLocalController::new(cfg)?,
            scale: l.output_scale,
            limits: (l.command_limits[0] / l.output_scale, l.command_limits[1] / l.output_scale),
        })
    }

    /// `initial_output` (actuator units) preloads the integrator.
    fn pi(l: &PiLoop, dt: f64, convention: ErrorConvention, initial_output: f64) -> Result<Self> {
        let cfg = PiConfig {
            k_p: l.k_p,
            k_i: l.k_i,
            dt,
            limits: (l.command_limits[0] / l.output_scale, l.command_limits[1] / l.output_scale),
            error_convention: convention,
        };
        let state = PiState::with_output(initial_output / l.output_scale, l.k_i);
        Ok(LoopController::Pi {
            ctl: PiController::new(cfg, state)?,
            scale: l.output_scale,
        })
    }

    /// Returns the command in actuator units and the iP estimate, if any.
    fn step(&mut self, y: f64, y_ref: f64, ydot_ref: f64) -> Result<(f64, Option<f64>)> {
        match self {
            LoopController::Ip { ctl, scale, limits } => {
                let out = ctl.step(y, y_ref, ydot_ref, *limits)?;
                Ok((out.u_applied * *scale, Some(out.f_est)))
            }
            LoopController::Pi { ctl, scale } => {
                let out = ctl.step(y, y_ref)?;
                Ok((out.u_applied * *scale, None))
            }
        }
    }
}

fn fault_at(t: f64, loop_id: &str) -> impl FnOnce(Error) -> Error + '_ {
    move |e| Error::ControllerFault {
        t,
        loop_id: loop_id.to_owned(),
        reason: e.to_string(),
    }
}

/// Initial conditions after defaults are applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialConditions {
    pub omega: f64,
    pub beta: f64,
    pub torque: f64,
}

/// Resolve the optional initial values of a scenario.
///
/// Rotor speed defaults to the reference at t = 0. Torque defaults to the
/// value that balances the rotor at low speed and to rated torque
/// `P_rated/ω_rated` at high speed.
pub fn initial_conditions(s: &Scenario, op: &OperatingPoint) -> Result<InitialConditions> {
    let p = &s.turbine;
    let v0 = s.wind.wind_speed(0.0);
    let omega = s.initial_omega.unwrap_or(match s.region {
        Region::LowSpeed => op.lambda_opt * v0 / p.radius,
        Region::HighSpeed => op.omega_rated,
    });
    let beta = s.initial_beta.unwrap_or(0.0);
    let torque = match s.initial_torque {
        Some(t) => t,
        None => match s.region {
            Region::LowSpeed => aerodynamic_torque(v0, omega, beta, p)? - p.damping * omega,
            Region::HighSpeed => p.rated_power / op.omega_rated,
        },
    }
    .clamp(0.0, p.max_generator_torque);
    Ok(InitialConditions { omega, beta, torque })
}

/// Simulate a scenario from t = 0 to its duration.
pub fn run_scenario(s: &Scenario) -> Result<RunOutput> {
    s.validate()?;
    let params = &s.turbine;
    let op = optimal_operating_point(params)?;
    let init = initial_conditions(s, &op)?;
    let dt = s.dt;
    let conv = s.error_convention;

    let (mut torque_loop, mut pitch_loop) = match &s.controller {
        ControllerSpec::Ip { torque, pitch } => (
            LoopController::ip(torque, dt, conv)?,
            pitch.as_ref().map(|p| LoopController::ip(p, dt, conv)).transpose()?,
        ),
        ControllerSpec::Pi { torque, pitch } => (
            LoopController::pi(torque, dt, conv, init.torque)?,
            pitch.as_ref().map(|p| LoopController::pi(p, dt, conv, init.beta)).transpose()?,
        ),
    };

    let mut speed_ref = SpeedReference::new(op, params.radius, s.reference_filter_tc, dt, s.wind.wind_speed(0.0));
    let (omega_rated, p_rated) = reference_high_speed(&op, params);

    let n = s.sample_count();
    let mut rows = Vec::with_capacity(n);
    let mut warnings = Vec::new();
    let (mut warned_low, mut warned_high) = (false, false);

    let mut omega = init.omega;
    let mut beta = init.beta;
    let mut torque_prev = init.torque;
    let mut p_meas = electrical_power(init.torque, init.omega);
    let max_slew = s.pitch_rate_limit * dt;
    let wind = |t: f64| s.wind.wind_speed(t);

    for k in 0..n {
        let t = k as f64 * dt;
        let v = wind(t);
        if v < s.cut_in && !warned_low {
            warned_low = true;
            warnings.push(format!("wind speed {v:.3} m/s below cut-in at t = {t} s"));
        }
        if v > s.cut_out && !warned_high {
            warned_high = true;
            warnings.push(format!("wind speed {v:.3} m/s above cut-off at t = {t} s"));
        }

        let (omega_ref, beta_target, torque_cmd, f_est) = match s.region {
            Region::LowSpeed => {
                let (w_ref, w_ref_dot) = speed_ref.update(v);
                let (tq, f1) = torque_loop.step(omega, w_ref, w_ref_dot).map_err(fault_at(t, "torque"))?;
                (w_ref, init.beta, tq, [f1, None])
            }
            Region::HighSpeed => {
                let raw = electrical_power(torque_prev, omega);
                if k > 0 && s.power_filter_tc > 0.0 {
                    p_meas += dt / s.power_filter_tc * (raw - p_meas);
                } else {
                    p_meas = raw;
                }
                let pitch = pitch_loop.as_mut().expect("validated: high speed has a pitch loop");
                let (b, f1) = pitch.step(omega, omega_rated, 0.0).map_err(fault_at(t, "pitch"))?;
                let (tq, f2) = torque_loop.step(p_meas, p_rated, 0.0).map_err(fault_at(t, "torque"))?;
                (omega_rated, b, tq, [f1, f2])
            }
        };

        let target = beta_target.clamp(0.0, MAX_PITCH);
        beta = (beta + (target - beta).clamp(-max_slew, max_slew)).clamp(0.0, MAX_PITCH);
        let torque_act = apply_fault(torque_cmd, &s.fault, t, params.max_generator_torque);
        let p_t = aerodynamic_power(v, omega, beta, params).map_err(fault_at(t, "plant"))?;
        let p_e = electrical_power(torque_act, omega);

        rows.push(RecordRow {
            t,
            wind: v,
            omega,
            omega_ref,
            beta,
            torque_cmd,
            torque_act,
            p_t,
            p_e,
            f_est,
        });

        if k + 1 < n {
            let next = turbine::step(&TurbineState::new(omega, t), torque_act, beta, wind, dt, params)
                .map_err(fault_at(t, "plant"))?;
            if !next.omega.is_finite() {
                return Err(Error::ControllerFault {
                    t,
                    loop_id: "plant".into(),
                    reason: "rotor speed diverged".into(),
                });
            }
            omega = next.omega;
        }
        torque_prev = torque_act;
    }

    let record = RunRecord { rows };
    let metrics = compute_metrics(&record, s.metrics_window, s.region, params.rated_power)?;
    Ok(RunOutput {
        record,
        metrics,
        operating_point: op,
        warnings,
    })
}
