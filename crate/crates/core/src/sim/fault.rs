use super::scenario::{FaultKind, FaultSpec};

/// Electrical power of an ideal generator (W).
pub fn electrical_power(generator_torque: f64, omega: f64) -> f64 {
    generator_torque * omega
}

/// Torque delivered by the (possibly faulty) actuator, clamped to `[0, max_torque]`.
pub fn apply_fault(command: f64, fault: &FaultSpec, t: f64, max_torque: f64) -> f64 {
    let delivered = if t < fault.t_onset {
        command
    } else {
        match fault.kind {
            FaultKind::None => command,
            FaultKind::EfficiencyLoss { factor } => factor * command,
            FaultKind::Bias { offset } => command + offset,
        }
    };
    delivered.clamp(0.0, max_torque)
}

#[cfg(test)]
mod tests {
    use super::*;

    const T_MAX: f64 = 1.62e5;

    fn spec(kind: FaultKind) -> FaultSpec {
        FaultSpec { kind, t_onset: 300.0 }
    }

    #[test]
    fn identity_before_onset() {
        for kind in [FaultKind::EfficiencyLoss { factor: 0.85 }, FaultKind::Bias { offset: -5e4 }] {
            assert_eq!(apply_fault(1e5, &spec(kind), 299.99, T_MAX), 1e5);
        }
    }

    #[test]
    fn efficiency_loss() {
        let got = apply_fault(1e5, &spec(FaultKind::EfficiencyLoss { factor: 0.85 }), 300.0, T_MAX);
        assert!((got - 8.5e4).abs() < 1e-9);
    }

    #[test]
    fn bias() {
        assert_eq!(apply_fault(1e5, &spec(FaultKind::Bias { offset: -5e4 }), 300.0, T_MAX), 5e4);
        assert_eq!(apply_fault(2e4, &spec(FaultKind::Bias { offset: -5e4 }), 400.0, T_MAX), 0.0);
    }

    #[test]
    fn no_fault_only_clamps() {
        let f = FaultSpec::default();
        assert_eq!(apply_fault(1e5, &f, 1e4, T_MAX), 1e5);
        assert_eq!(apply_fault(3e5, &f, 0.0, T_MAX), T_MAX);
    }

    #[test]
    fn power() {
        let p = electrical_power(1.3e5, 4.615);
        assert!((p - 6.0e5).abs() / 6.0e5 < 1e-3);
        assert_eq!(electrical_power(1.3e5, 0.0), 0.0);
        assert_eq!(electrical_power(0.0, 4.0), 0.0);
    }
}
