//! Numeric flag parsing with optional SI unit suffixes.
//!
//! A bare number is read in the flag's default unit; a suffixed number is
//! converted to SI (meters, seconds, hertz, meters per second).

fn split(text: &str) -> (&str, &str) {
    let text = text.trim();
    let idx = text
        .char_indices()
        .find(|&(i, c)| {
            c.is_alphabetic() && !(matches!(c, 'e' | 'E') && is_exponent(text, i))
                || c == 'µ'
                || c == '/'
        })
        .map_or(text.len(), |(i, _)| i);
    (text[..idx].trim(), text[idx..].trim())
}

/// `e` followed by a digit or sign is part of the number, not a unit.
fn is_exponent(text: &str, i: usize) -> bool {
    text[i + 1..]
        .chars()
        .next()
        .is_some_and(|c| c.is_ascii_digit() || c == '-' || c == '+')
}

fn parse_with(text: &str, default: f64, units: &[(&str, f64)], kind: &str) -> Result<f64, String> {
    let (num, unit) = split(text);
    let value: f64 = num
        .parse()
        .map_err(|_| format!("`{text}` is not a number with an optional {kind} unit"))?;
    let scale = if unit.is_empty() {
        default
    } else {
        units
            .iter()
            .find(|(u, _)| u.eq_ignore_ascii_case(unit))
            .map(|&(_, s)| s)
            .ok_or_else(|| {
                let known: Vec<&str> = units.iter().map(|(u, _)| *u).collect();
                format!(
                    "unknown {kind} unit `{unit}` (expected one of {})",
                    known.join(", ")
                )
            })?
    };
    let v = value * scale;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{text}` is not finite"))
    }
}

const LENGTH: &[(&str, f64)] = &[
    ("m", 1.0),
    ("cm", 1e-2),
    ("mm", 1e-3),
    ("um", 1e-6),
    ("µm", 1e-6),
    ("nm", 1e-9),
];
const TIME: &[(&str, f64)] = &[("s", 1.0), ("ms", 1e-3), ("us", 1e-6), ("min", 60.0)];
const FREQUENCY: &[(&str, f64)] = &[("Hz", 1.0), ("kHz", 1e3), ("MHz", 1e6)];
const VELOCITY: &[(&str, f64)] = &[
    ("m/s", 1.0),
    ("cm/s", 1e-2),
    ("mm/s", 1e-3),
    ("um/s", 1e-6),
    ("µm/s", 1e-6),
];

/// Length; bare numbers are millimeters.
pub fn length_mm(text: &str) -> Result<f64, String> {
    parse_with(text, 1e-3, LENGTH, "length")
}

/// Length; bare numbers are centimeters.
pub fn length_cm(text: &str) -> Result<f64, String> {
    parse_with(text, 1e-2, LENGTH, "length")
}

/// Duration; bare numbers are seconds.
pub fn seconds(text: &str) -> Result<f64, String> {
    parse_with(text, 1.0, TIME, "time")
}

/// Frequency; bare numbers are hertz.
pub fn hertz(text: &str) -> Result<f64, String> {
    parse_with(text, 1.0, FREQUENCY, "frequency")
}

/// Speed; bare numbers are millimeters per second.
pub fn velocity_mm_s(text: &str) -> Result<f64, String> {
    parse_with(text, 1e-3, VELOCITY, "velocity")
}

/// Two comma-separated numbers.
pub fn pair(text: &str) -> Result<(f64, f64), String> {
    let mut parts = text.split(',');
    let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(format!(
            "expected two comma-separated numbers, got `{text}`"
        ));
    };
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| format!("`{s}` is not a number"))
    };
    Ok((parse(a)?, parse(b)?))
}
