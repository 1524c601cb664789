//! Nine-significant-digit text form used for every emitted number.

/// Significant digits kept in emitted numbers.
pub const SIGNIFICANT_DIGITS: usize = 9;

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `%.9g`-style formatting: fixed notation for exponents in `[-5, 9)`,
/// scientific otherwise, trailing zeros removed. Zero (of either sign) is `0`.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_owned();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_owned()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(mantissa), exp.abs())
    }
}

/// The value a reader obtains by parsing [`format_sig`]'s output.
pub fn quantize(x: f64) -> f64 {
    format_sig(x).parse().unwrap_or(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_like_printf_g() {
        let cases = [
            (0.0, "0"),
            (-0.0, "0"),
            (1.0, "1"),
            (600.0, "600"),
            (0.01, "0.01"),
            (4.274796980852718, "4.27479698"),
            (123456789.4, "123456789"),
            (1234567894.0, "1.23456789e+09"),
            (-2.5e-7, "-2.5e-07"),
            (0.00012345678912, "0.000123456789"),
            (9.9999999996, "10"),
            (59.99999999999, "60"),
        ];
        for (x, expected) in cases {
            assert_eq!(format_sig(x), expected, "x = {x}");
        }
    }

    #[test]
    fn quantize_round_trips() {
        for x in [std::f64::consts::PI, -1.0 / 3.0, 6.0e5, 1e-12, 123.456] {
            let q = quantize(x);
            assert_eq!(quantize(q), q);
            assert!((q - x).abs() <= x.abs() * 5e-9);
        }
    }
}
