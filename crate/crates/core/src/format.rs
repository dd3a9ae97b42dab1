//! Number formatting shared by every text output.

/// Significant digits kept in CSV, JSON and console output.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds `x` to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("scientific notation round-trips")
}

/// Shortest decimal rendering of `x` after rounding to 12 significant
/// digits, e.g. `3.5000000000000004` prints as `3.5`.
pub fn fmt_sig(x: f64) -> String {
    fmt_plain(round_sig(x))
}

/// Shortest round-trip decimal literal; negative zero prints as `0`.
pub fn fmt_plain(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x}")
    }
}
