//! Angle literals: plain radians or rational multiples of π.

use std::f64::consts::PI;

/// Parses `"0.25"`, `"pi"`, `"-pi/4"`, `"5pi/4"`, `"3*pi/2"`, `"pi/60"` and
/// the same forms spelled with `π`. Returns radians.
pub fn parse_angle(text: &str) -> Option<f64> {
    let text = text.trim().to_ascii_lowercase().replace('π', "pi");
    let Some((coefficient, divisor)) = text.split_once("pi") else {
        return text.parse::<f64>().ok().filter(|v| v.is_finite());
    };
    let coefficient = coefficient.trim().trim_end_matches('*').trim();
    let numerator = match coefficient {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => parse_ratio(c)?,
    };
    let divisor = divisor.trim();
    let denominator = if divisor.is_empty() {
        1.0
    } else {
        divisor.strip_prefix('/')?.trim().parse::<f64>().ok()?
    };
    let value = numerator * PI / denominator;
    value.is_finite().then_some(value)
}

fn parse_ratio(text: &str) -> Option<f64> {
    match text.split_once('/') {
        Some((a, b)) => Some(a.trim().parse::<f64>().ok()? / b.trim().parse::<f64>().ok()?),
        None => text.parse().ok(),
    }
}

/// Comma-separated list of angles.
pub fn parse_angle_list(text: &str) -> Option<Vec<f64>> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(parse_angle)
        .collect()
}
