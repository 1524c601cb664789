//! Scenario fixtures shared by the benchmarks.

use mfcwind_core::{presets, Scenario};

/// A preset with its duration cut to `duration` seconds (and the metrics
/// window clipped to match).
pub fn preset_with_duration(name: &str, duration: f64) -> Scenario {
    let mut s = presets::preset_scenario(name).expect("preset names are fixed");
    s.duration = duration;
    s.metrics_window = [s.metrics_window[0].min(duration / 2.0), duration];
    s
}
