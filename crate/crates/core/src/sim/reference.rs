use crate::turbine::{OperatingPoint, TurbineParams};

/// Rotor speed that puts the turbine at the optimal tip-speed ratio.
pub fn reference_low_speed(wind_speed: f64, op: &OperatingPoint, params: &TurbineParams) -> f64 {
    op.lambda_opt * wind_speed / params.radius
}

/// Constant high-speed references `(ω_rated, P_rated)`; their derivatives are zero.
pub fn reference_high_speed(op: &OperatingPoint, params: &TurbineParams) -> (f64, f64) {
    (op.omega_rated, params.rated_power)
}

/// Low-speed speed reference with optional first-order wind filtering and a
/// backward-difference derivative.
#[derive(Debug, Clone)]
pub struct SpeedReference {
    op: OperatingPoint,
    radius: f64,
    time_constant: f64,
    dt: f64,
    filtered_wind: f64,
    previous: Option<f64>,
}

impl SpeedReference {
    /// `initial_wind` seeds the filter state.
    pub fn new(op: OperatingPoint, radius: f64, time_constant: f64, dt: f64, initial_wind: f64) -> Self {
        Self {
            op,
            radius,
            time_constant,
            dt,
            filtered_wind: initial_wind,
            previous: None,
        }
    }

    /// Advance one sample; returns `(ω_ref, ω̇_ref)`.
    pub fn update(&mut self, wind_speed: f64) -> (f64, f64) {
        if self.time_constant > 0.0 {
            self.filtered_wind += self.dt / self.time_constant * (wind_speed - self.filtered_wind);
        } else {
            self.filtered_wind = wind_speed;
        }
        let omega_ref = self.op.lambda_opt * self.filtered_wind / self.radius;
        let derivative = self
            .previous
            .map_or(0.0, |prev| (omega_ref - prev) / self.dt);
        self.previous = Some(omega_ref);
        (omega_ref, derivative)
    }
}
