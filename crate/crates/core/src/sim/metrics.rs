use serde::{Deserialize, Serialize};

use super::run::RunRecord;
use super::scenario::Region;
use crate::error::{invalid, Result};
use crate::numfmt::quantize;

/// Tracking and power statistics over the metrics window.
///
/// Computed from the nine-digit values written to the time-series output,
/// so they can be reproduced exactly from that file. The `P_e` tracking
/// terms exist only in the high-speed region, where rated power is the target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    /// Mean of `|ω − ω_ref|` (rad/s).
    pub mae_omega: f64,
    /// Population standard deviation of `ω − ω_ref` (rad/s).
    pub std_omega: f64,
    /// Mean aerodynamic power (W).
    #[serde(rename = "mean_P_t")]
    pub mean_p_t: f64,
    /// Mean electrical power (W).
    #[serde(rename = "mean_P_e")]
    pub mean_p_e: f64,
    /// Mean of `|P_e − P_rated|` (W).
    #[serde(rename = "mae_P_e")]
    pub mae_p_e: Option<f64>,
    /// Population standard deviation of `P_e − P_rated` (W).
    #[serde(rename = "std_P_e")]
    pub std_p_e: Option<f64>,
    /// Samples inside the window.
    pub samples: usize,
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn mean_abs(xs: &[f64]) -> f64 {
    xs.iter().map(|x| x.abs()).sum::<f64>() / xs.len() as f64
}

/// Population standard deviation, two-pass.
fn std_dev(xs: &[f64]) -> f64 {
    let m = mean(xs);
    (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64).sqrt()
}

pub fn compute_metrics(
    record: &RunRecord,
    window: [f64; 2],
    region: Region,
    rated_power: f64,
) -> Result<RunMetrics> {
    const EPS: f64 = 1e-9;
    let rows: Vec<_> = record
        .rows
        .iter()
        .filter(|r| r.t >= window[0] - EPS && r.t <= window[1] + EPS)
        .collect();
    if rows.is_empty() {
        return Err(invalid("metrics window contains no samples"));
    }
    let e_omega: Vec<f64> = rows.iter().map(|r| quantize(r.omega) - quantize(r.omega_ref)).collect();
    let p_t: Vec<f64> = rows.iter().map(|r| quantize(r.p_t)).collect();
    let p_e: Vec<f64> = rows.iter().map(|r| quantize(r.p_e)).collect();
    let (mae_p_e, std_p_e) = match region {
        Region::LowSpeed => (None, None),
        Region::HighSpeed => {
            let e: Vec<f64> = p_e.iter().map(|p| p - rated_power).collect();
            (Some(mean_abs(&e)), Some(std_dev(&e)))
        }
    };
    Ok(RunMetrics {
        mae_omega: mean_abs(&e_omega),
        std_omega: std_dev(&e_omega),
        mean_p_t: mean(&p_t),
        mean_p_e: mean(&p_e),
        mae_p_e,
        std_p_e,
        samples: rows.len(),
    })
}
