//! Model-free (iP) and PI control of a 600 kW wind turbine.
//!
//! The crate bundles a one-mass turbine model with the usual `Cp(λ, β)`
//! surface, a deterministic harmonic wind, the ultra-local-model controller
//! with its two `F` estimators, a PI baseline, and a fixed-step scenario
//! runner that produces time series and tracking metrics.
//!
//! ```
//! use mfcwind_core::{presets, sim};
//!
//! let mut scenario = presets::preset_scenario("low-ip").unwrap();
//! scenario.duration = 100.0;
//! scenario.metrics_window = [60.0, 100.0];
//! let run = sim::run_scenario(&scenario).unwrap();
//! assert_eq!(run.record.rows.len(), 10_001);
//! assert!(run.metrics.mae_omega < 1.0);
//! ```

// Range checks are written as `!(x > 0.0)` on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod mfc;
pub mod numfmt;
pub mod pi;
pub mod presets;
pub mod report;
pub mod sim;
pub mod turbine;
pub mod wind;

pub use config::ScenarioFile;
pub use error::{Error, Result};
pub use mfc::{ControllerOutput, ErrorConvention, Estimator, UltraLocalConfig, UltraLocalController};
pub use pi::{PiConfig, PiController, PiState};
pub use sim::{run_scenario, Region, RunMetrics, RunOutput, RunRecord, Scenario};
pub use turbine::{OperatingPoint, TurbineParams, TurbineState};
pub use wind::{AmplitudeRule, WindProfile};
