//! Model-free control with a first-order ultra-local model `ẏ = F + α·u`.
//!
//! The intelligent proportional (iP) law
//!
//! ```text
//! u = −(F_est − ẏ* + K_P·e)/α
//! ```
//!
//! turns the loop into `ė + K_P·e = F − F_est`, so everything hinges on the
//! estimate of the lumped term `F`. Two estimators are provided, both
//! evaluated by the trapezoidal rule over a sliding window of past samples:
//!
//! * algebraic: `F_est = −(6/τ³)·∫₀^τ [(τ − 2σ)·y + α·σ(τ − σ)·u] dσ`,
//!   with σ the time since the start of the window. The kernel annihilates
//!   `y(0)` and is exact for a constant `F`;
//! * closed-loop: `F_est = (1/τ)·∫ (ẏ* − α·u − K_P·e) dσ`.
//!
//! Before the window is full, τ is replaced by the span actually covered,
//! `(n − 1)·dt`. The window stores the saturated (applied) input.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Result};

/// How the tracking error is formed from measurement and reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ErrorConvention {
    /// `e = y − y*`
    #[default]
    YMinusRef,
    /// `e = y* − y`
    RefMinusY,
}

impl ErrorConvention {
    pub const ALL: [ErrorConvention; 2] = [ErrorConvention::YMinusRef, ErrorConvention::RefMinusY];

    pub fn error(self, y: f64, y_ref: f64) -> f64 {
        match self {
            ErrorConvention::YMinusRef => y - y_ref,
            ErrorConvention::RefMinusY => y_ref - y,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorConvention::YMinusRef => "y_minus_ref",
            ErrorConvention::RefMinusY => "ref_minus_y",
        }
    }
}

impl std::fmt::Display for ErrorConvention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ErrorConvention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "y_minus_ref" => Ok(ErrorConvention::YMinusRef),
            "ref_minus_y" => Ok(ErrorConvention::RefMinusY),
            other => Err(format!(
                "unknown error convention `{other}` (expected y_minus_ref or ref_minus_y)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    #[default]
    Algebraic,
    ClosedLoop,
}

/// Parameters of one iP loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UltraLocalConfig {
    pub alpha: f64,
    pub k_p: f64,
    /// Estimation window length (s).
    pub tau: f64,
    pub estimator: Estimator,
    /// Controller sample period (s).
    pub dt: f64,
    pub error_convention: ErrorConvention,
}

impl UltraLocalConfig {
    pub fn new(
        alpha: f64,
        k_p: f64,
        tau: f64,
        estimator: Estimator,
        dt: f64,
        error_convention: ErrorConvention,
    ) -> Result<Self> {
        let cfg = Self {
            alpha,
            k_p,
            tau,
            estimator,
            dt,
            error_convention,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() || self.alpha == 0.0 {
            return Err(invalid("alpha must be finite and non-zero"));
        }
        if !self.k_p.is_finite() {
            return Err(invalid("k_p must be finite"));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(invalid("controller dt must be positive"));
        }
        if !(self.tau >= 2.0 * self.dt) || !self.tau.is_finite() {
            return Err(invalid("tau must be at least two sample periods"));
        }
        Ok(())
    }

    /// Samples held by the window: enough to span exactly τ.
    pub fn window_capacity(&self) -> usize {
        (self.tau / self.dt).round() as usize + 1
    }
}

/// One stored controller sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    /// Applied (saturated) input.
    pub u: f64,
    pub y: f64,
    pub ydot_ref: f64,
    pub e: f64,
}

/// Fixed-capacity FIFO of past samples, oldest first.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleWindow {
    samples: VecDeque<Sample>,
    capacity: usize,
}

impl SampleWindow {
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity < 2 {
            return Err(invalid("sample window needs a capacity of at least 2"));
        }
        Ok(Self {
            samples: VecDeque::with_capacity(capacity),
            capacity,
        })
    }

    pub fn push(&mut self, sample: Sample) {
        if self.samples.len() == self.capacity {
            self.samples.pop_front();
        }
        self.samples.push_back(sample);
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn is_full(&self) -> bool {
        self.samples.len() == self.capacity
    }

    pub fn iter(&self) -> impl Iterator<Item = &Sample> + '_ {
        self.samples.iter()
    }

    pub fn clear(&mut self) {
        self.samples.clear();
    }
}

/// Trapezoid weight of sample `j` out of `n`.
#[inline]
fn trapezoid_weight(j: usize, n: usize) -> f64 {
    if j == 0 || j + 1 == n {
        0.5
    } else {
        1.0
    }
}

/// Algebraic estimate of `F`, or `None` with fewer than two samples.
pub fn estimate_f_algebraic(window: &SampleWindow, alpha: f64, dt: f64) -> Option<f64> {
    let n = window.len();
    if n < 2 {
        return None;
    }
    let span = (n - 1) as f64 * dt;
    let mut acc = 0.0;
    for (j, s) in window.iter().enumerate() {
        let sigma = j as f64 * dt;
        let integrand = (span - 2.0 * sigma) * s.y + alpha * sigma * (span - sigma) * s.u;
        acc += trapezoid_weight(j, n) * integrand;
    }
    Some(-6.0 / span.powi(3) * acc * dt)
}

/// Closed-loop estimate of `F`, or `None` with fewer than two samples.
pub fn estimate_f_closed_loop(window: &SampleWindow, alpha: f64, k_p: f64, dt: f64) -> Option<f64> {
    let n = window.len();
    if n < 2 {
        return None;
    }
    let span = (n - 1) as f64 * dt;
    let acc: f64 = window
        .iter()
        .enumerate()
        .map(|(j, s)| trapezoid_weight(j, n) * (s.ydot_ref - alpha * s.u - k_p * s.e))
        .sum();
    Some(acc * dt / span)
}

/// `u = −(F_est − ẏ* + K_P·e)/α`; `e` already follows the configured convention.
pub fn ip_control(f_est: f64, ydot_ref: f64, e: f64, cfg: &UltraLocalConfig) -> f64 {
    -(f_est - ydot_ref + cfg.k_p * e) / cfg.alpha
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControllerOutput {
    pub u_raw: f64,
    pub u_applied: f64,
    pub f_est: f64,
}

/// An iP controller: configuration plus its window of past samples.
#[derive(Debug, Clone, PartialEq)]
pub struct UltraLocalController {
    cfg: UltraLocalConfig,
    window: SampleWindow,
}

impl UltraLocalController {
    pub fn new(cfg: UltraLocalConfig) -> Result<Self> {
        cfg.validate()?;
        let window = SampleWindow::new(cfg.window_capacity())?;
        Ok(Self { cfg, window })
    }

    pub fn config(&self) -> &UltraLocalConfig {
        &self.cfg
    }

    pub fn window(&self) -> &SampleWindow {
        &self.window
    }

    /// Current estimate of `F` from the stored samples (0 until two exist).
    pub fn estimate(&self) -> f64 {
        let est = match self.cfg.estimator {
            Estimator::Algebraic => estimate_f_algebraic(&self.window, self.cfg.alpha, self.cfg.dt),
            Estimator::ClosedLoop => {
                estimate_f_closed_loop(&self.window, self.cfg.alpha, self.cfg.k_p, self.cfg.dt)
            }
        };
        est.unwrap_or(0.0)
    }

    /// One control period: estimate from past samples, apply the iP law,
    /// saturate, then record the current sample.
    pub fn step(
        &mut self,
        y: f64,
        y_ref: f64,
        ydot_ref: f64,
        limits: (f64, f64),
    ) -> Result<ControllerOutput> {
        if !y.is_finite() || !y_ref.is_finite() || !ydot_ref.is_finite() {
            return Err(domain(format!(
                "non-finite controller input (y = {y}, y_ref = {y_ref}, ydot_ref = {ydot_ref})"
            )));
        }
        let (u_min, u_max) = limits;
        if !(u_min < u_max) {
            return Err(invalid(format!("actuator limits must satisfy min < max, got ({u_min}, {u_max})")));
        }
        let e = self.cfg.error_convention.error(y, y_ref);
        let f_est = self.estimate();
        let u_raw = ip_control(f_est, ydot_ref, e, &self.cfg);
        if !u_raw.is_finite() {
            return Err(domain(format!("non-finite command (F_est = {f_est})")));
        }
        let u_applied = u_raw.clamp(u_min, u_max);
        self.window.push(Sample {
            u: u_applied,
            y,
            ydot_ref,
            e,
        });
        Ok(ControllerOutput {
            u_raw,
            u_applied,
            f_est,
        })
    }

    pub fn reset(&mut self) {
        self.window.clear();
    }
}
