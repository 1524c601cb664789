use mfcwind_core::mfc::{
    estimate_f_algebraic, ErrorConvention, Estimator, Sample, SampleWindow, UltraLocalConfig,
    UltraLocalController,
};
use mfcwind_core::numfmt::{format_sig, quantize};
use mfcwind_core::pi::{pi_step, PiConfig, PiState};
use mfcwind_core::presets::preset_scenario;
use mfcwind_core::report::write_timeseries;
use mfcwind_core::sim::{apply_fault, run_scenario, FaultKind, FaultSpec, MAX_PITCH};
use mfcwind_core::turbine::{
    aerodynamic_power, aerodynamic_torque, power_coefficient, power_coefficient_raw, step,
    TurbineParams, TurbineState,
};
use mfcwind_core::wind::{AmplitudeRule, WindProfile, WindSegment, FREQUENCIES};
use proptest::prelude::*;

fn params() -> TurbineParams {
    TurbineParams::default()
}

proptest! {
    #[test]
    fn cp_is_clamped_raw(lambda in 0.5f64..15.0, beta in 0.0f64..30.0) {
        let cp = params().cp;
        let raw = power_coefficient_raw(lambda, beta, &cp).unwrap();
        let clamped = power_coefficient(lambda, beta, &cp).unwrap();
        prop_assert!(clamped >= 0.0);
        prop_assert_eq!(clamped, raw.max(0.0));
    }

    #[test]
    fn torque_times_speed_is_power(v in 3.0f64..25.0, lambda in 0.1f64..15.0, beta in 0.0f64..30.0) {
        let p = params();
        let omega = lambda * v / p.radius;
        let torque = aerodynamic_torque(v, omega, beta, &p).unwrap();
        let power = aerodynamic_power(v, omega, beta, &p).unwrap();
        prop_assert!((torque * omega - power).abs() <= 1e-12 * power.abs().max(1e-300));
    }

    #[test]
    fn cp_non_increasing_in_pitch_near_optimum(lambda in 5.5f64..8.6) {
        // Checked densely; outside roughly [5.4, 8.63] the property fails
        // (see `cp_rises_with_pitch_away_from_optimum`).
        let cp = params().cp;
        let mut prev = power_coefficient(lambda, 0.0, &cp).unwrap();
        for i in 1..=3000 {
            let c = power_coefficient(lambda, i as f64 * 0.01, &cp).unwrap();
            prop_assert!(c <= prev + 1e-15, "lambda {lambda}, beta {}", i as f64 * 0.01);
            prev = c;
        }
    }

    #[test]
    fn rotor_speed_never_negative(
        omega in 0.0f64..10.0,
        torque in 0.0f64..1.0e6,
        beta in 0.0f64..90.0,
        v in 1.0f64..30.0,
        dt in 0.001f64..0.5,
    ) {
        let next = step(&TurbineState::new(omega, 0.0), torque, beta, |_| v, dt, &params()).unwrap();
        prop_assert!(next.omega >= 0.0);
    }

    #[test]
    fn wind_excursion_bounded(v_mean in 3.0f64..25.0, t in 0.0f64..1000.0) {
        let w = WindProfile::new(vec![WindSegment { t_start: 0.0, v_mean }], AmplitudeRule::Table).unwrap();
        let bound = w.max_relative_excursion();
        let v = w.wind_speed(t);
        prop_assert!((v / v_mean - 1.0).abs() <= bound + 1e-12);
        prop_assert_eq!(v.to_bits(), w.wind_speed(t).to_bits());
    }

    #[test]
    fn algebraic_estimator_on_affine_output(
        f0 in -50.0f64..50.0,
        alpha in prop_oneof![-5.0f64..-0.1, 0.1f64..5.0],
        u in -10.0f64..10.0,
        y0 in -100.0f64..100.0,
    ) {
        let (dt, tau, n) = (0.01, 20.0, 2001);
        let slope = f0 + alpha * u;
        let mut w = SampleWindow::new(n).unwrap();
        for j in 0..n {
            w.push(Sample { u, y: y0 + slope * j as f64 * dt, ydot_ref: 0.0, e: 0.0 });
        }
        let est = estimate_f_algebraic(&w, alpha, dt).unwrap();
        // The trapezoid rule integrates the quadratic kernel with a known
        // residue; the estimate equals F0 plus that residue.
        let residue = dt * dt * (2.0 * slope + alpha * u) / (tau * tau);
        let scale = f0.abs().max(residue.abs()).max(1.0);
        prop_assert!((est - (f0 + residue)).abs() <= 1e-9 * scale, "est {est}, F0 {f0}");
        // With α·u = ẏ − F0 the residue is dt²·(3ẏ − F0)/τ², inside the 1e-6
        // exactness bound whenever the drift stays below max(1, |F0|) per second.
        if slope.abs() < 0.99 * f0.abs().max(1.0) {
            prop_assert!((est - f0).abs() <= 1e-6 * f0.abs().max(1.0));
        }
    }

    #[test]
    fn error_decays_at_k_p(f in -10.0f64..10.0, k_p in 0.2f64..1.2) {
        let (alpha, tau, dt) = (1.0, 20.0, 0.01);
        let cfg = UltraLocalConfig::new(alpha, k_p, tau, Estimator::Algebraic, dt, ErrorConvention::YMinusRef).unwrap();
        let mut ctl = UltraLocalController::new(cfg).unwrap();
        let y_ref = |t: f64| if t < 25.0 { 0.0 } else { 1.0 };
        let mut y = 0.0;
        let mut trace = Vec::with_capacity(3000);
        for k in 0..3000 {
            let t = k as f64 * dt;
            let out = ctl.step(y, y_ref(t), 0.0, (-1e9, 1e9)).unwrap();
            trace.push((y - y_ref(t), out.f_est));
            y += dt * (f + alpha * out.u_applied);
        }
        // Window full, loop at rest before the reference step.
        let (_, f_est) = trace[2400];
        prop_assert!((f_est - f).abs() <= 1e-6 * f.abs().max(1.0), "F_est {f_est}, F {f}");
        let (e0, _) = trace[2600];
        let (e1, _) = trace[2700];
        let expected = (-k_p * 1.0).exp();
        prop_assert!(((e1 / e0) - expected).abs() <= 0.01 * expected, "ratio {} vs {expected}", e1 / e0);
    }

    #[test]
    fn controller_is_causal(ys in proptest::collection::vec(-5.0f64..5.0, 20..200), cut in 1usize..20) {
        let cfg = UltraLocalConfig::new(0.7, 1.3, 0.5, Estimator::Algebraic, 0.01, ErrorConvention::YMinusRef).unwrap();
        let mut full = UltraLocalController::new(cfg).unwrap();
        let mut prefix = UltraLocalController::new(cfg).unwrap();
        let a: Vec<_> = ys.iter().map(|&y| full.step(y, 0.1, 0.0, (-3.0, 3.0)).unwrap()).collect();
        let b: Vec<_> = ys[..cut].iter().map(|&y| prefix.step(y, 0.1, 0.0, (-3.0, 3.0)).unwrap()).collect();
        prop_assert_eq!(&a[..cut], &b[..]);
    }

    #[test]
    fn pi_desaturates_within_one_step(k_p in 0.1f64..10.0, k_i in 0.1f64..10.0, e_sat in 1.0f64..100.0) {
        let cfg = PiConfig { k_p, k_i, dt: 0.01, limits: (-1.0, 1.0), error_convention: ErrorConvention::YMinusRef };
        let mut s = PiState::default();
        for _ in 0..500 {
            s = pi_step(&s, e_sat, &cfg).unwrap().1;
        }
        // Any error that would put the output inside the limits does so at once.
        let e_in = (0.5 - k_i * s.integral) / k_p;
        let (out, _) = pi_step(&s, e_in, &cfg).unwrap();
        prop_assert!((out.u_raw - out.u_applied).abs() < 1e-9);
    }

    #[test]
    fn no_fault_is_clamp_only(cmd in -1.0e5f64..4.0e5, t in 0.0f64..1.0e4) {
        let t_max = params().max_generator_torque;
        prop_assert_eq!(apply_fault(cmd, &FaultSpec::default(), t, t_max), cmd.clamp(0.0, t_max));
        let before = FaultSpec { kind: FaultKind::Bias { offset: -5.0e4 }, t_onset: t + 1.0 };
        prop_assert_eq!(apply_fault(cmd, &before, t, t_max), cmd.clamp(0.0, t_max));
    }

    #[test]
    fn quantize_is_stable(x in prop::num::f64::NORMAL) {
        let q = quantize(x);
        prop_assert_eq!(quantize(q), q);
        prop_assert_eq!(format_sig(q).parse::<f64>().unwrap(), q);
        prop_assert!((q - x).abs() <= 5e-9 * x.abs());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn short_runs_respect_actuator_limits(
        name in prop::sample::select(vec!["low-ip", "low-pi", "high-ip", "high-pi"]),
        v_shift in -1.0f64..1.0,
        dt in prop::sample::select(vec![0.01, 0.02, 0.05]),
    ) {
        let mut s = preset_scenario(name).unwrap();
        for seg in &mut s.wind.schedule {
            seg.v_mean += v_shift;
        }
        s.dt = dt;
        s.duration = 60.0;
        s.metrics_window = [10.0, 60.0];
        let run = run_scenario(&s).unwrap();
        prop_assert_eq!(run.record.rows.len(), s.sample_count());
        let t_max = s.turbine.max_generator_torque;
        let mut prev = s.initial_beta.unwrap_or(0.0);
        for r in &run.record.rows {
            prop_assert!((0.0..=t_max).contains(&r.torque_act));
            prop_assert!((0.0..=MAX_PITCH).contains(&r.beta));
            prop_assert!((r.beta - prev).abs() <= s.pitch_rate_limit * dt + 1e-9);
            prop_assert!(r.p_t >= 0.0 && r.p_e >= 0.0);
            prev = r.beta;
        }
    }
}

#[test]
fn cp_rises_with_pitch_away_from_optimum() {
    let cp = params().cp;
    let at = |l: f64, b: f64| power_coefficient(l, b, &cp).unwrap();
    assert!(at(4.0, 0.2) > at(4.0, 0.0) + 5e-4);
    assert!(at(12.0, 1.7) > at(12.0, 0.0) + 0.15);
}

/// Trapezoidal time-average of the wind over `[0, window]`.
fn average_wind(w: &WindProfile, window: f64) -> f64 {
    let n = (window / 0.005).round() as usize;
    let h = window / n as f64;
    let integral: f64 = (0..=n)
        .map(|i| {
            let wt = if i == 0 || i == n { 0.5 } else { 1.0 };
            wt * w.wind_speed(i as f64 * h)
        })
        .sum::<f64>()
        * h;
    integral / window
}

#[test]
fn wind_average_converges_to_mean() {
    // The harmonics are not commensurate, so a whole number of slow periods
    // does not cancel the faster ones; the residue is bounded by
    // Σ 2·A_k/(ω_k·T) and falls below 0.1 % only over long windows.
    let period = 2.0 * std::f64::consts::PI / FREQUENCIES[0];
    for v_mean in [7.0, 8.0, 9.0, 16.0, 20.0, 12.5] {
        let w = WindProfile::new(vec![WindSegment { t_start: 0.0, v_mean }], AmplitudeRule::Table).unwrap();
        let amps = mfcwind_core::wind::amplitudes(v_mean, AmplitudeRule::Table).unwrap();
        for cycles in [1.0, 3.0, 40.0] {
            let window = cycles * period;
            let bound: f64 = amps.iter().zip(FREQUENCIES).map(|(a, f)| 2.0 * a / (f * window)).sum();
            let rel = (average_wind(&w, window) / v_mean - 1.0).abs();
            assert!(rel <= bound + 1e-9, "v_mean {v_mean}, {cycles} cycles: {rel} > {bound}");
            if cycles >= 40.0 {
                assert!(rel <= 1e-3, "v_mean {v_mean}: {rel}");
            }
        }
    }
}

#[test]
fn wind_average_over_one_slow_period_is_off_by_percent() {
    let w = WindProfile::constant(7.0).unwrap();
    let period = 2.0 * std::f64::consts::PI / FREQUENCIES[0];
    let rel = average_wind(&w, period) / 7.0 - 1.0;
    assert!(rel > 0.03, "{rel}");
}

#[test]
#[allow(clippy::excessive_precision)]
fn wind_value_oracle() {
    let w = WindProfile::constant(7.0).unwrap();
    // 7·[1 + Σ A_k·sin(ω_k·15.0051)], evaluated at 40 digits.
    let expected = 6.2044059555570392227;
    assert!((w.wind_speed(15.0051) - expected).abs() <= 1e-12 * expected);
}

#[test]
fn saturated_run_stays_bounded() {
    // ẏ = 5 + u with |u| ≤ 1: the reference is unreachable for 600 s.
    let (f, dt) = (5.0, 0.01);
    let cfg = UltraLocalConfig::new(1.0, 2.0, 20.0, Estimator::Algebraic, dt, ErrorConvention::YMinusRef).unwrap();
    let mut ctl = UltraLocalController::new(cfg).unwrap();
    let mut y = 0.0;
    for k in 0..60_000 {
        let out = ctl.step(y, 0.0, 0.0, (-1.0, 1.0)).unwrap();
        assert!(out.u_raw.is_finite() && out.f_est.is_finite());
        // A two-sample window reads three times the slope; the slope never
        // exceeds |F| + |α|·u_max.
        assert!(out.f_est.abs() <= 3.0 * (f + 1.0) + 1e-9, "k = {k}: {}", out.f_est);
        if k > 2000 {
            assert!((out.f_est - f).abs() <= 1e-6 * f);
            assert_eq!(out.u_applied, -1.0);
        }
        y += dt * (f + out.u_applied);
    }
    assert!((y - 4.0 * 600.0).abs() < 0.1, "y = {y}");
}

#[test]
fn fault_free_path_is_identical_to_late_fault() {
    let base = preset_scenario("high-ip").unwrap();
    let mut s = base.clone();
    s.duration = 60.0;
    s.metrics_window = [10.0, 60.0];
    let mut late = s.clone();
    late.fault = FaultSpec { kind: FaultKind::EfficiencyLoss { factor: 0.85 }, t_onset: 1.0e6 };
    let csv = |sc| {
        let mut buf = Vec::new();
        write_timeseries(&run_scenario(sc).unwrap().record, &mut buf).unwrap();
        buf
    };
    assert_eq!(csv(&s), csv(&late));
}
