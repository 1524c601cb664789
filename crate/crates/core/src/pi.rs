//! Discrete PI baseline with conditional-integration anti-windup.

use crate::error::{domain, invalid, Result};
use crate::mfc::ErrorConvention;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiConfig {
    pub k_p: f64,
    pub k_i: f64,
    pub dt: f64,
    /// `(u_min, u_max)`; use infinities for an unlimited controller.
    pub limits: (f64, f64),
    pub error_convention: ErrorConvention,
}

impl PiConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.k_p.is_finite() || !self.k_i.is_finite() {
            return Err(invalid("PI gains must be finite"));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(invalid("PI dt must be positive"));
        }
        if !(self.limits.0 < self.limits.1) {
            return Err(invalid(format!(
                "PI limits must satisfy min < max, got ({}, {})",
                self.limits.0, self.limits.1
            )));
        }
        Ok(())
    }
}

/// Integral accumulator (error·s).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PiState {
    pub integral: f64,
}

impl PiState {
    /// Preload the integrator so that a zero error reproduces `u0`
    /// (bumpless start). A zero `k_i` leaves it empty.
    pub fn with_output(u0: f64, k_i: f64) -> Self {
        let integral = if k_i != 0.0 { u0 / k_i } else { 0.0 };
        Self { integral }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiOutput {
    pub u_raw: f64,
    pub u_applied: f64,
}

/// One PI period on an already-formed error `e`.
///
/// The accumulator advances by `e·dt` (forward rectangle) only when the raw
/// output lies inside the limits or the integral term pulls it back inside.
pub fn pi_step(state: &PiState, e: f64, cfg: &PiConfig) -> Result<(PiOutput, PiState)> {
    if !e.is_finite() {
        return Err(domain(format!("non-finite PI error {e}")));
    }
    let (lo, hi) = cfg.limits;
    let u_raw = cfg.k_p * e + cfg.k_i * state.integral;
    let u_applied = u_raw.clamp(lo, hi);
    let push = cfg.k_i * e;
    let integrate = (u_raw >= lo && u_raw <= hi) || (u_raw > hi && push < 0.0) || (u_raw < lo && push > 0.0);
    let next = if integrate {
        PiState {
            integral: state.integral + e * cfg.dt,
        }
    } else {
        *state
    };
    Ok((PiOutput { u_raw, u_applied }, next))
}

/// Stateful wrapper that forms the error from measurement and reference.
#[derive(Debug, Clone, PartialEq)]
pub struct PiController {
    cfg: PiConfig,
    state: PiState,
}

impl PiController {
    pub fn new(cfg: PiConfig, state: PiState) -> Result<Self> {
        cfg.validate()?;
        Ok(Self { cfg, state })
    }

    pub fn config(&self) -> &PiConfig {
        &self.cfg
    }

    pub fn state(&self) -> PiState {
        self.state
    }

    pub fn step(&mut self, y: f64, y_ref: f64) -> Result<PiOutput> {
        if !y.is_finite() || !y_ref.is_finite() {
            return Err(domain(format!("non-finite PI input (y = {y}, y_ref = {y_ref})")));
        }
        let e = self.cfg.error_convention.error(y, y_ref);
        let (out, next) = pi_step(&self.state, e, &self.cfg)?;
        self.state = next;
        Ok(out)
    }
}
