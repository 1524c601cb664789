//! Which error convention makes a scenario's printed gains stabilising.
//!
//! The tabulated gains carry signs that only produce a stable loop under
//! one way of forming the error. Rather than guessing, a scenario is run
//! under both conventions; exactly one must come out stable.

use serde::Serialize;

use super::run::run_scenario;
use super::scenario::{Region, Scenario};
use super::metrics::RunMetrics;
use crate::error::{Error, Result};
use crate::mfc::ErrorConvention;

/// Largest speed-tracking MAE (rad/s) a stable run may show.
pub const STABLE_MAE_OMEGA: f64 = 1.0;
/// Largest power-tracking MAE, as a fraction of rated power, at high speed.
pub const STABLE_MAE_P_E_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, Serialize)]
pub struct ConventionOutcome {
    pub convention: ErrorConvention,
    pub stable: bool,
    pub metrics: Option<RunMetrics>,
    /// Diagnostic when the run aborted.
    pub fault: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConventionResolution {
    pub scenario: String,
    pub chosen: ErrorConvention,
    pub outcomes: Vec<ConventionOutcome>,
}

/// A run is stable when it completes, tracks speed within
/// [`STABLE_MAE_OMEGA`] and, at high speed, power within
/// [`STABLE_MAE_P_E_FRACTION`] of rated.
pub fn is_stable(metrics: &RunMetrics, region: Region, rated_power: f64) -> bool {
    let omega_ok = metrics.mae_omega <= STABLE_MAE_OMEGA;
    let power_ok = match region {
        Region::LowSpeed => true,
        Region::HighSpeed => metrics
            .mae_p_e
            .is_some_and(|m| m <= STABLE_MAE_P_E_FRACTION * rated_power),
    };
    omega_ok && power_ok
}

fn evaluate(scenario: &Scenario, convention: ErrorConvention) -> Result<ConventionOutcome> {
    let mut s = scenario.clone();
    s.error_convention = convention;
    match run_scenario(&s) {
        Ok(out) => Ok(ConventionOutcome {
            convention,
            stable: is_stable(&out.metrics, s.region, s.turbine.rated_power),
            metrics: Some(out.metrics),
            fault: None,
        }),
        Err(e @ Error::ControllerFault { .. }) => Ok(ConventionOutcome {
            convention,
            stable: false,
            metrics: None,
            fault: Some(e.to_string()),
        }),
        Err(e) => Err(e),
    }
}

/// Run the scenario under both conventions (concurrently) and return the
/// single stable one, or [`Error::ConventionAmbiguity`].
pub fn resolve_convention(scenario: &Scenario) -> Result<ConventionResolution> {
    scenario.validate()?;
    let outcomes: Vec<ConventionOutcome> = std::thread::scope(|scope| {
        let handles: Vec<_> = ErrorConvention::ALL
            .iter()
            .map(|&c| scope.spawn(move || evaluate(scenario, c)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("convention worker panicked"))
            .collect::<Result<Vec<_>>>()
    })?;

    let stable: Vec<_> = outcomes.iter().filter(|o| o.stable).collect();
    if stable.len() != 1 {
        let detail = outcomes
            .iter()
            .map(|o| match (&o.metrics, &o.fault) {
                (_, Some(f)) => format!("{}: aborted ({f})", o.convention),
                (Some(m), None) => format!(
                    "{}: {} (MAE ω = {:.4} rad/s{})",
                    o.convention,
                    if o.stable { "stable" } else { "unstable" },
                    m.mae_omega,
                    m.mae_p_e.map(|p| format!(", MAE P_e = {:.0} W", p)).unwrap_or_default()
                ),
                (None, None) => format!("{}: no result", o.convention),
            })
            .collect::<Vec<_>>()
            .join("; ");
        let what = if stable.is_empty() { "no" } else { "both" };
        return Err(Error::ConventionAmbiguity {
            scenario: scenario.name.clone(),
            detail: format!("{what} error convention yields a stable loop: {detail}"),
        });
    }
    Ok(ConventionResolution {
        scenario: scenario.name.clone(),
        chosen: stable[0].convention,
        outcomes,
    })
}
