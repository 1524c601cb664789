//! Rigid-drivetrain (one-mass) model of a three-blade, 600 kW turbine.
//!
//! The aerodynamic side is the usual empirical power coefficient
//!
//! ```text
//! Cp(λ, β)  = c1·(c2/λi − c3·β − c4)·exp(−c5/λi) + c6·λ
//! 1/λi      = 1/(λ + 0.08·β) − 0.035/(β³ + 1)
//! ```
//!
//! with β in degrees. Torque and power follow from `P = ½ρπR²·Cp·V³` and
//! `T = P/ω`, and the rotor obeys `J·ω̇ = T_t − K·ω − T_g`.
//!
//! Everything here is a pure function of its arguments.

use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Result};

/// Tip-speed ratios below this value are lifted to it before dividing by λ.
pub const LAMBDA_FLOOR: f64 = 0.1;

/// Coefficients `c1..c6` of the power coefficient surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CpCoefficients {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    pub c6: f64,
}

impl Default for CpCoefficients {
    fn default() -> Self {
        Self {
            c1: 0.4,
            c2: 116.0,
            c3: 0.4,
            c4: 5.0,
            c5: 21.0,
            c6: 0.02,
        }
    }
}

/// Physical constants of the turbine. SI units throughout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TurbineParams {
    /// Combined rotor and generator inertia (kg·m²).
    pub inertia: f64,
    /// Viscous damping (N·m per rad/s).
    pub damping: f64,
    /// Air density (kg/m³).
    pub air_density: f64,
    /// Blade radius (m).
    pub radius: f64,
    /// Generator torque limit (N·m).
    pub max_generator_torque: f64,
    /// Rated electrical power (W).
    pub rated_power: f64,
    #[serde(default)]
    pub cp: CpCoefficients,
}

impl Default for TurbineParams {
    fn default() -> Self {
        Self {
            inertia: 3.89e5,
            damping: 400.0,
            air_density: 1.29,
            radius: 21.65,
            max_generator_torque: 1.62e5,
            rated_power: 6.0e5,
            cp: CpCoefficients::default(),
        }
    }
}

impl TurbineParams {
    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("inertia", self.inertia > 0.0),
            ("damping", self.damping >= 0.0),
            ("air_density", self.air_density > 0.0),
            ("radius", self.radius > 0.0),
            ("max_generator_torque", self.max_generator_torque > 0.0),
            ("rated_power", self.rated_power > 0.0),
        ];
        for (name, ok) in checks {
            if !ok {
                return Err(invalid(format!("turbine parameter `{name}` out of range")));
            }
        }
        let c = &self.cp;
        if ![c.c1, c.c2, c.c3, c.c4, c.c5, c.c6]
            .iter()
            .all(|v| v.is_finite())
        {
            return Err(invalid("Cp coefficients must be finite"));
        }
        Ok(())
    }

    /// `½·ρ·π·R²`, the swept-area factor of the power equation.
    pub fn swept_area_factor(&self) -> f64 {
        0.5 * self.air_density * std::f64::consts::PI * self.radius * self.radius
    }
}

/// Rotor speed and simulation clock.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurbineState {
    /// Rotor angular speed (rad/s), never negative.
    pub omega: f64,
    /// Simulation time (s).
    pub t: f64,
}

impl TurbineState {
    pub fn new(omega: f64, t: f64) -> Self {
        Self {
            omega: omega.max(0.0),
            t,
        }
    }
}

fn inverse_lambda_i(lambda: f64, beta: f64) -> f64 {
    1.0 / (lambda + 0.08 * beta) - 0.035 / (beta * beta * beta + 1.0)
}

/// Unclamped power coefficient. Can be negative at large tip-speed ratios.
pub fn power_coefficient_raw(lambda: f64, beta: f64, cp: &CpCoefficients) -> Result<f64> {
    if !lambda.is_finite() || !beta.is_finite() {
        return Err(domain(format!(
            "power coefficient needs finite inputs (lambda = {lambda}, beta = {beta})"
        )));
    }
    if lambda <= 0.0 {
        return Err(domain(format!("tip-speed ratio must be positive, got {lambda}")));
    }
    if beta < 0.0 {
        return Err(domain(format!("pitch angle must be non-negative, got {beta}")));
    }
    if lambda + 0.08 * beta <= 0.0 {
        return Err(domain("lambda + 0.08·beta must be positive"));
    }
    let inv = inverse_lambda_i(lambda, beta);
    Ok(cp.c1 * (cp.c2 * inv - cp.c3 * beta - cp.c4) * (-cp.c5 * inv).exp() + cp.c6 * lambda)
}

/// Power coefficient clamped at zero; `beta` in degrees.
pub fn power_coefficient(lambda: f64, beta: f64, cp: &CpCoefficients) -> Result<f64> {
    power_coefficient_raw(lambda, beta, cp).map(|v| v.max(0.0))
}

/// `λ = R·ω/V`.
pub fn tip_speed_ratio(omega: f64, wind_speed: f64, radius: f64) -> Result<f64> {
    if !(wind_speed > 0.0) {
        return Err(domain(format!("wind speed must be positive, got {wind_speed}")));
    }
    if !(omega >= 0.0) {
        return Err(domain(format!("rotor speed must be non-negative, got {omega}")));
    }
    Ok(radius * omega / wind_speed)
}

fn effective_lambda(wind_speed: f64, omega: f64, params: &TurbineParams) -> Result<f64> {
    Ok(tip_speed_ratio(omega.max(0.0), wind_speed, params.radius)?.max(LAMBDA_FLOOR))
}

/// Aerodynamic rotor torque (N·m), evaluated at `max(λ, LAMBDA_FLOOR)`.
pub fn aerodynamic_torque(
    wind_speed: f64,
    omega: f64,
    beta: f64,
    params: &TurbineParams,
) -> Result<f64> {
    let lambda = effective_lambda(wind_speed, omega, params)?;
    let cp = power_coefficient(lambda, beta, &params.cp)?;
    Ok(params.swept_area_factor() * params.radius * wind_speed * wind_speed * cp / lambda)
}

/// Aerodynamic power (W). Uses the same λ floor as [`aerodynamic_torque`] so
/// that `T·ω = P` whenever `λ ≥ LAMBDA_FLOOR`.
pub fn aerodynamic_power(
    wind_speed: f64,
    omega: f64,
    beta: f64,
    params: &TurbineParams,
) -> Result<f64> {
    let lambda = effective_lambda(wind_speed, omega, params)?;
    let cp = power_coefficient(lambda, beta, &params.cp)?;
    Ok(params.swept_area_factor() * cp * wind_speed.powi(3))
}

/// `ω̇ = (T_t − K·ω − T_g)/J`.
pub fn rotor_acceleration(
    state: &TurbineState,
    generator_torque: f64,
    wind_speed: f64,
    beta: f64,
    params: &TurbineParams,
) -> Result<f64> {
    acceleration_at(state.omega, generator_torque, wind_speed, beta, params)
}

fn acceleration_at(
    omega: f64,
    generator_torque: f64,
    wind_speed: f64,
    beta: f64,
    params: &TurbineParams,
) -> Result<f64> {
    let aero = aerodynamic_torque(wind_speed, omega, beta, params)?;
    Ok((aero - params.damping * omega - generator_torque) / params.inertia)
}

/// One classical RK4 step of the rotor ODE.
///
/// Generator torque and pitch are held over the step; the wind is sampled at
/// `t`, `t + dt/2` and `t + dt`. The resulting speed is clamped at zero.
pub fn step<W>(
    state: &TurbineState,
    generator_torque: f64,
    beta: f64,
    wind: W,
    dt: f64,
    params: &TurbineParams,
) -> Result<TurbineState>
where
    W: Fn(f64) -> f64,
{
    if !(dt > 0.0) {
        return Err(domain(format!("time step must be positive, got {dt}")));
    }
    let t = state.t;
    let w0 = state.omega;
    let v_start = wind(t);
    let v_mid = wind(t + 0.5 * dt);
    let v_end = wind(t + dt);

    let f = |omega: f64, v: f64| acceleration_at(omega, generator_torque, v, beta, params);
    let k1 = f(w0, v_start)?;
    let k2 = f(w0 + 0.5 * dt * k1, v_mid)?;
    let k3 = f(w0 + 0.5 * dt * k2, v_mid)?;
    let k4 = f(w0 + dt * k3, v_end)?;
    let omega = w0 + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    Ok(TurbineState {
        omega: omega.max(0.0),
        t: t + dt,
    })
}

/// Peak of the β = 0 power-coefficient curve and the rated operating point it implies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    pub lambda_opt: f64,
    pub cp_max: f64,
    /// Wind speed at which the peak Cp yields rated power (m/s).
    pub v_rated: f64,
    /// `λ_opt·V_rated/R` (rad/s).
    pub omega_rated: f64,
}

const GRID_START: f64 = 0.5;
const GRID_END: f64 = 15.0;
const GRID_STEP: f64 = 1e-3;
const GOLDEN_TOL: f64 = 1e-6;

/// Grid scan over λ ∈ [0.5, 15] followed by golden-section refinement.
pub fn optimal_operating_point(params: &TurbineParams) -> Result<OperatingPoint> {
    params.validate()?;
    let cp_at = |lambda: f64| power_coefficient(lambda, 0.0, &params.cp);

    let n = ((GRID_END - GRID_START) / GRID_STEP).round() as usize;
    let mut best = (GRID_START, cp_at(GRID_START)?);
    for i in 1..=n {
        let lambda = GRID_START + i as f64 * GRID_STEP;
        let v = cp_at(lambda)?;
        if v > best.1 {
            best = (lambda, v);
        }
    }

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = (best.0 - GRID_STEP).max(GRID_START);
    let mut b = (best.0 + GRID_STEP).min(GRID_END);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = cp_at(x1)?;
    let mut f2 = cp_at(x2)?;
    while b - a > GOLDEN_TOL {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = cp_at(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = cp_at(x1)?;
        }
    }
    let refined = 0.5 * (a + b);
    let refined_cp = cp_at(refined)?;
    let (lambda_opt, cp_max) = if refined_cp >= best.1 {
        (refined, refined_cp)
    } else {
        best
    };

    let v_rated = (params.rated_power / (params.swept_area_factor() * cp_max)).cbrt();
    Ok(OperatingPoint {
        lambda_opt,
        cp_max,
        v_rated,
        omega_rated: lambda_opt * v_rated / params.radius,
    })
}
