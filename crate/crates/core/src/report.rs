//! Output artifacts: the time-series CSV, the run summary and comparisons.

use std::io::Write;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::numfmt::format_sig;
use crate::sim::{Region, RunMetrics, RunOutput, RunRecord, Scenario};

pub const CSV_HEADER: [&str; 11] = [
    "t",
    "V",
    "omega_t",
    "omega_ref",
    "beta_cmd",
    "T_g_cmd",
    "T_g_act",
    "P_t",
    "P_e",
    "F_est_loop1",
    "F_est_loop2",
];

fn csv_error(e: csv::Error) -> Error {
    Error::Io {
        path: "<csv>".into(),
        reason: e.to_string(),
    }
}

/// Write the record as LF-terminated CSV with nine significant digits.
/// Absent loops leave their `F_est` field empty.
pub fn write_timeseries<W: Write>(record: &RunRecord, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER).map_err(csv_error)?;
    let opt = |v: Option<f64>| v.map(format_sig).unwrap_or_default();
    for r in &record.rows {
        w.write_record([
            format_sig(r.t),
            format_sig(r.wind),
            format_sig(r.omega),
            format_sig(r.omega_ref),
            format_sig(r.beta),
            format_sig(r.torque_cmd),
            format_sig(r.torque_act),
            format_sig(r.p_t),
            format_sig(r.p_e),
            opt(r.f_est[0]),
            opt(r.f_est[1]),
        ])
        .map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::Io {
        path: "<csv>".into(),
        reason: e.to_string(),
    })
}

/// SHA-256 of the scenario's canonical JSON (typed, defaults filled in).
pub fn fingerprint(scenario: &Scenario) -> String {
    let canonical = serde_json::to_vec(scenario).expect("scenarios always serialize");
    hex::encode(Sha256::digest(&canonical))
}

#[derive(Debug, Clone, Serialize)]
pub struct BuildInfo {
    pub package: &'static str,
    pub version: &'static str,
}

impl BuildInfo {
    pub fn current() -> Self {
        Self {
            package: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub scenario: String,
    pub region: Region,
    pub controller: &'static str,
    pub error_convention: String,
    pub fingerprint: String,
    pub samples: usize,
    pub metrics: RunMetrics,
    pub lambda_opt: f64,
    pub omega_rated: f64,
    pub warnings: Vec<String>,
    pub build: BuildInfo,
}

impl Summary {
    pub fn new(scenario: &Scenario, run: &RunOutput) -> Self {
        Self {
            scenario: scenario.name.clone(),
            region: scenario.region,
            controller: scenario.controller.family(),
            error_convention: scenario.error_convention.to_string(),
            fingerprint: fingerprint(scenario),
            samples: run.record.rows.len(),
            metrics: run.metrics,
            lambda_opt: run.operating_point.lambda_opt,
            omega_rated: run.operating_point.omega_rated,
            warnings: run.warnings.clone(),
            build: BuildInfo::current(),
        }
    }

    pub fn to_json_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("summaries always serialize");
        s.push('\n');
        s
    }
}

/// `a/b`, with `0/0` read as 1.
pub fn ratio(a: f64, b: f64) -> f64 {
    if a == b {
        1.0
    } else {
        a / b
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Ratios {
    pub mae_omega: f64,
    pub std_omega: f64,
    #[serde(rename = "mean_P_t")]
    pub mean_p_t: f64,
    #[serde(rename = "mean_P_e")]
    pub mean_p_e: f64,
    #[serde(rename = "mae_P_e")]
    pub mae_p_e: Option<f64>,
    #[serde(rename = "std_P_e")]
    pub std_p_e: Option<f64>,
}

impl Ratios {
    pub fn of(a: &RunMetrics, b: &RunMetrics) -> Self {
        let both = |x: Option<f64>, y: Option<f64>| x.zip(y).map(|(x, y)| ratio(x, y));
        Self {
            mae_omega: ratio(a.mae_omega, b.mae_omega),
            std_omega: ratio(a.std_omega, b.std_omega),
            mean_p_t: ratio(a.mean_p_t, b.mean_p_t),
            mean_p_e: ratio(a.mean_p_e, b.mean_p_e),
            mae_p_e: both(a.mae_p_e, b.mae_p_e),
            std_p_e: both(a.std_p_e, b.std_p_e),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparedRun {
    pub scenario: String,
    pub controller: &'static str,
    pub fingerprint: String,
    pub metrics: RunMetrics,
}

/// Two runs over the same region and wind, plus `a/b` ratios.
#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub region: Region,
    pub a: ComparedRun,
    pub b: ComparedRun,
    pub ratios: Ratios,
}

impl Comparison {
    pub fn new(sa: &Scenario, ma: &RunMetrics, sb: &Scenario, mb: &RunMetrics) -> Self {
        let entry = |s: &Scenario, m: &RunMetrics| ComparedRun {
            scenario: s.name.clone(),
            controller: s.controller.family(),
            fingerprint: fingerprint(s),
            metrics: *m,
        };
        Self {
            region: sa.region,
            a: entry(sa, ma),
            b: entry(sb, mb),
            ratios: Ratios::of(ma, mb),
        }
    }

    pub fn to_json_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("comparisons always serialize");
        s.push('\n');
        s
    }

    /// Plain-text table: speed MAE and standard deviation, then mean
    /// aerodynamic power at low speed or power-tracking MAE and standard
    /// deviation at high speed (powers in kW).
    pub fn table(&self) -> String {
        let label = |r: &ComparedRun| format!("{} ({})", r.controller.to_uppercase().replace("IP", "iP"), r.scenario);
        let (wind, mut rows) = match self.region {
            Region::LowSpeed => ("Weak wind", Vec::new()),
            Region::HighSpeed => ("Strong wind", Vec::new()),
        };
        let (a, b) = (&self.a.metrics, &self.b.metrics);
        rows.push(("omega_t (rad/s)", "MAE", a.mae_omega, b.mae_omega));
        rows.push(("", "standard deviation", a.std_omega, b.std_omega));
        match self.region {
            Region::LowSpeed => rows.push(("P_t (kW)", "mean", a.mean_p_t / 1e3, b.mean_p_t / 1e3)),
            Region::HighSpeed => {
                let kw = |x: Option<f64>| x.unwrap_or(f64::NAN) / 1e3;
                rows.push(("P_e (kW)", "MAE", kw(a.mae_p_e), kw(b.mae_p_e)));
                rows.push(("", "standard deviation", kw(a.std_p_e), kw(b.std_p_e)));
            }
        }
        let (la, lb) = (label(&self.a), label(&self.b));
        let wa = la.len().max(12);
        let wb = lb.len().max(12);
        let mut out = format!("{:<11} | {:<15} | {:<18} || {:>wa$} | {:>wb$}\n", "", "", "Controller", la, lb);
        out.push_str(&format!("{}\n", "-".repeat(11 + 15 + 18 + wa + wb + 13)));
        for (i, (quantity, stat, x, y)) in rows.iter().enumerate() {
            let region = if i == 0 { wind } else { "" };
            out.push_str(&format!(
                "{:<11} | {:<15} | {:<18} || {:>wa$} | {:>wb$}\n",
                region,
                quantity,
                stat,
                format_sig(*x),
                format_sig(*y)
            ));
        }
        out
    }
}
