//! Scenario description, the fixed-step closed-loop simulation and its metrics.

mod convention;
mod fault;
mod metrics;
mod reference;
mod run;
mod scenario;

pub use convention::{
    is_stable, resolve_convention, ConventionOutcome, ConventionResolution, STABLE_MAE_OMEGA,
    STABLE_MAE_P_E_FRACTION,
};
pub use fault::{apply_fault, electrical_power};
pub use metrics::{compute_metrics, RunMetrics};
pub use reference::{reference_high_speed, reference_low_speed, SpeedReference};
pub use run::{initial_conditions, run_scenario, InitialConditions, RecordRow, RunOutput, RunRecord};
pub use scenario::{
    ControllerSpec, FaultKind, FaultSpec, IpLoop, PiLoop, Region, Scenario, MAX_PITCH,
};
