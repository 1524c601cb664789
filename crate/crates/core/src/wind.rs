//! Deterministic wind: a piecewise-constant mean speed modulated by four harmonics.
//!
//! `V(t) = V_mean·[1 + Σ A_k·sin(ω_k·t)]`, with the phases running on absolute
//! time so a change of mean speed produces a step in `V` but no phase reset.

use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Result};

/// Angular frequencies of the four harmonics (rad/s).
pub const FREQUENCIES: [f64; 4] = [0.1047, 0.2674, 1.309, 3.696];

/// Tabulated amplitudes, keyed by mean wind speed (m/s).
pub const AMPLITUDE_TABLE: [(f64, [f64; 4]); 5] = [
    (7.0, [0.029, 0.286, 0.143, 0.029]),
    (8.0, [0.025, 0.25, 0.125, 0.025]),
    (9.0, [0.022, 0.222, 0.111, 0.022]),
    (16.0, [0.0125, 0.125, 0.0625, 0.0125]),
    (20.0, [0.01, 0.1, 0.05, 0.01]),
];

const RECIPROCAL_NUMERATORS: [f64; 4] = [0.2, 2.0, 1.0, 0.2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum AmplitudeRule {
    /// Tabulated row when the mean matches one, reciprocal rule otherwise.
    #[default]
    Table,
    /// `(0.2, 2, 1, 0.2)/V_mean` for every mean speed.
    Reciprocal,
}

/// Harmonic amplitudes `(A1, A2, A3, A4)` for a mean wind speed.
pub fn amplitudes(v_mean: f64, rule: AmplitudeRule) -> Result<[f64; 4]> {
    if !(v_mean > 0.0) || !v_mean.is_finite() {
        return Err(domain(format!("mean wind speed must be positive, got {v_mean}")));
    }
    if rule == AmplitudeRule::Table {
        if let Some((_, row)) = AMPLITUDE_TABLE.iter().find(|(v, _)| *v == v_mean) {
            return Ok(*row);
        }
    }
    Ok(RECIPROCAL_NUMERATORS.map(|n| n / v_mean))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindSegment {
    /// Start of the segment (s).
    pub t_start: f64,
    /// Mean wind speed during the segment (m/s).
    pub v_mean: f64,
}

/// Mean-speed schedule plus amplitude rule.
///
/// Construct through [`WindProfile::new`] or call [`WindProfile::validate`]
/// after deserializing; evaluation assumes a valid profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindProfile {
    pub schedule: Vec<WindSegment>,
    #[serde(default)]
    pub amplitude_rule: AmplitudeRule,
}

impl WindProfile {
    pub fn new(schedule: Vec<WindSegment>, amplitude_rule: AmplitudeRule) -> Result<Self> {
        let profile = Self {
            schedule,
            amplitude_rule,
        };
        profile.validate()?;
        Ok(profile)
    }

    /// Constant mean speed from t = 0.
    pub fn constant(v_mean: f64) -> Result<Self> {
        Self::new(vec![WindSegment { t_start: 0.0, v_mean }], AmplitudeRule::Table)
    }

    pub fn validate(&self) -> Result<()> {
        let first = self
            .schedule
            .first()
            .ok_or_else(|| invalid("wind schedule is empty"))?;
        if first.t_start != 0.0 {
            return Err(invalid("wind schedule must start at t = 0"));
        }
        for pair in self.schedule.windows(2) {
            if !(pair[1].t_start > pair[0].t_start) {
                return Err(invalid("wind schedule start times must be strictly increasing"));
            }
        }
        for seg in &self.schedule {
            amplitudes(seg.v_mean, self.amplitude_rule).map_err(|e| invalid(e.to_string()))?;
        }
        Ok(())
    }

    fn segment_index(&self, t: f64) -> usize {
        // Times before the first segment fall back to it.
        self.schedule
            .iter()
            .rposition(|seg| seg.t_start <= t)
            .unwrap_or(0)
    }

    /// Mean speed active at `t`.
    pub fn mean_speed(&self, t: f64) -> f64 {
        self.schedule[self.segment_index(t)].v_mean
    }

    /// Instantaneous wind speed (m/s).
    pub fn wind_speed(&self, t: f64) -> f64 {
        let idx = self.segment_index(t);
        let v_mean = self.schedule[idx].v_mean;
        let amps = amplitudes(v_mean, self.amplitude_rule).unwrap_or([0.0; 4]);
        let modulation: f64 = amps
            .iter()
            .zip(FREQUENCIES)
            .map(|(a, w)| a * (w * t).sin())
            .sum();
        v_mean * (1.0 + modulation)
    }

    /// Largest `|V/V_mean − 1|` the harmonics can reach in any segment.
    pub fn max_relative_excursion(&self) -> f64 {
        self.schedule
            .iter()
            .filter_map(|s| amplitudes(s.v_mean, self.amplitude_rule).ok())
            .map(|a| a.iter().sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// Free-function form of [`WindProfile::wind_speed`].
pub fn wind_speed(profile: &WindProfile, t: f64) -> f64 {
    profile.wind_speed(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_step() -> WindProfile {
        WindProfile::new(
            vec![
                WindSegment { t_start: 0.0, v_mean: 7.0 },
                WindSegment { t_start: 200.0, v_mean: 8.0 },
                WindSegment { t_start: 400.0, v_mean: 9.0 },
            ],
            AmplitudeRule::Table,
        )
        .unwrap()
    }

    #[test]
    fn table_rows() {
        assert_eq!(amplitudes(7.0, AmplitudeRule::Table).unwrap(), [0.029, 0.286, 0.143, 0.029]);
        assert_eq!(amplitudes(16.0, AmplitudeRule::Table).unwrap(), [0.0125, 0.125, 0.0625, 0.0125]);
        assert_eq!(amplitudes(20.0, AmplitudeRule::Table).unwrap(), [0.01, 0.1, 0.05, 0.01]);
    }

    #[test]
    fn reciprocal_rule_and_fallback() {
        let expected = [0.02, 0.2, 0.1, 0.02];
        for rule in [AmplitudeRule::Reciprocal, AmplitudeRule::Table] {
            let got = amplitudes(10.0, rule).unwrap();
            for (g, e) in got.iter().zip(expected) {
                assert!((g - e).abs() < 1e-15);
            }
        }
        // Off-table mean under the reciprocal rule ignores the table.
        assert_eq!(amplitudes(16.0, AmplitudeRule::Reciprocal).unwrap()[0], 0.2 / 16.0);
        assert!(amplitudes(0.0, AmplitudeRule::Table).is_err());
        assert!(amplitudes(-2.0, AmplitudeRule::Reciprocal).is_err());
    }

    #[test]
    fn table_rows_follow_reciprocal_pattern_to_printed_precision() {
        for (v, row) in AMPLITUDE_TABLE {
            let rule = amplitudes(v, AmplitudeRule::Reciprocal).unwrap();
            for (a, b) in row.iter().zip(rule) {
                assert!((a - b).abs() <= 5e-4, "v = {v}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn starts_at_mean() {
        assert_eq!(three_step().wind_speed(0.0), 7.0);
    }

    #[test]
    fn schedule_lookup() {
        let w = three_step();
        assert_eq!(w.mean_speed(199.99), 7.0);
        assert_eq!(w.mean_speed(200.0), 8.0);
        assert_eq!(w.mean_speed(250.0), 8.0);
        assert_eq!(w.mean_speed(600.0), 9.0);
    }

    #[test]
    fn rejects_bad_schedules() {
        let seg = |t_start, v_mean| WindSegment { t_start, v_mean };
        assert!(WindProfile::new(vec![], AmplitudeRule::Table).is_err());
        assert!(WindProfile::new(vec![seg(1.0, 7.0)], AmplitudeRule::Table).is_err());
        assert!(WindProfile::new(vec![seg(0.0, 7.0), seg(0.0, 8.0)], AmplitudeRule::Table).is_err());
        assert!(WindProfile::new(vec![seg(0.0, -7.0)], AmplitudeRule::Table).is_err());
    }

    #[test]
    fn bounded_excursion() {
        let w = three_step();
        assert!((w.max_relative_excursion() - 0.487).abs() < 1e-12);
        for i in 0..20_000 {
            let t = i as f64 * 0.03;
            let rel = w.wind_speed(t) / w.mean_speed(t) - 1.0;
            assert!(rel.abs() <= 0.487 + 1e-12);
        }
    }

    #[test]
    fn bit_exact_repeat() {
        let w = three_step();
        assert_eq!(w.wind_speed(123.456).to_bits(), w.wind_speed(123.456).to_bits());
    }
}
