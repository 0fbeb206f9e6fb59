//! Plain-text CSV formats.
//!
//! ```text
//! # fs=90          # df=0.025
//! I,Q              f,mag          x
//! 1,0              0,0.1          0
//! ...              ...            ...
//! ```
//!
//! UTF-8, LF line endings, `.` decimal separator. Values are written with
//! Rust's shortest round-trip representation so a write/read cycle is exact.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::analysis::Spectrum;
use crate::error::{Error, Result};
use crate::signal::{IqSeries, MotionTrace};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

struct Table {
    meta: f64,
    columns: Vec<Vec<f64>>,
}

fn parse_table(text: &str, key: &str, header: &[&str]) -> Result<Table> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l.trim_end_matches('\r')));

    let (n, first) = lines
        .next()
        .ok_or_else(|| parse_err(1, format!("empty file; expected `# {key}=<float>`")))?;
    let meta_str = first
        .strip_prefix('#')
        .map(str::trim)
        .and_then(|s| s.strip_prefix(key))
        .and_then(|s| s.trim_start().strip_prefix('='))
        .ok_or_else(|| {
            parse_err(
                n,
                format!("expected `# {key}=<float>` header, found `{first}`"),
            )
        })?;
    let meta: f64 = meta_str
        .trim()
        .parse()
        .map_err(|_| parse_err(n, format!("`{}` is not a number", meta_str.trim())))?;
    if !(meta.is_finite() && meta > 0.0) {
        return Err(parse_err(
            n,
            format!("{key} must be a positive number, got {meta}"),
        ));
    }

    let (n, cols) = lines
        .next()
        .ok_or_else(|| parse_err(2, format!("missing column header `{}`", header.join(","))))?;
    let found: Vec<&str> = cols.split(',').map(str::trim).collect();
    if found != header {
        return Err(parse_err(
            n,
            format!(
                "expected column header `{}`, found `{cols}`",
                header.join(",")
            ),
        ));
    }

    let mut columns = vec![Vec::new(); header.len()];
    for (n, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != header.len() {
            return Err(parse_err(
                n,
                format!("expected {} fields, found {}", header.len(), fields.len()),
            ));
        }
        for (col, field) in columns.iter_mut().zip(fields) {
            let v: f64 = field
                .trim()
                .parse()
                .map_err(|_| parse_err(n, format!("`{}` is not a number", field.trim())))?;
            if !v.is_finite() {
                return Err(parse_err(n, format!("non-finite value `{}`", field.trim())));
            }
            col.push(v);
        }
    }
    Ok(Table { meta, columns })
}

pub fn parse_iq_csv(text: &str) -> Result<IqSeries> {
    let Table { meta, mut columns } = parse_table(text, "fs", &["I", "Q"])?;
    let q = columns.pop().unwrap_or_default();
    let i = columns.pop().unwrap_or_default();
    IqSeries::new(i, q, meta)
}

pub fn format_iq_csv(iq: &IqSeries) -> String {
    let mut out = String::with_capacity(iq.len() * 40);
    let _ = writeln!(out, "# fs={}", iq.sample_rate_hz());
    out.push_str("I,Q\n");
    for (i, q) in iq.i().iter().zip(iq.q()) {
        let _ = writeln!(out, "{i},{q}");
    }
    out
}

pub fn read_iq_csv(path: impl AsRef<Path>) -> Result<IqSeries> {
    parse_iq_csv(&fs::read_to_string(path)?)
}

pub fn write_iq_csv(iq: &IqSeries, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_iq_csv(iq))?;
    Ok(())
}

pub fn parse_motion_csv(text: &str) -> Result<MotionTrace> {
    let Table { meta, mut columns } = parse_table(text, "fs", &["x"])?;
    MotionTrace::new(columns.pop().unwrap_or_default(), meta)
}

pub fn format_motion_csv(trace: &MotionTrace) -> String {
    let mut out = String::with_capacity(trace.len() * 24);
    let _ = writeln!(out, "# fs={}", trace.sample_rate_hz());
    out.push_str("x\n");
    for x in trace.samples() {
        let _ = writeln!(out, "{x}");
    }
    out
}

pub fn read_motion_csv(path: impl AsRef<Path>) -> Result<MotionTrace> {
    parse_motion_csv(&fs::read_to_string(path)?)
}

pub fn write_motion_csv(trace: &MotionTrace, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_motion_csv(trace))?;
    Ok(())
}

pub fn format_spectrum_csv(spec: &Spectrum) -> String {
    let mut out = String::with_capacity(spec.len() * 40);
    let _ = writeln!(out, "# df={}", spec.resolution_hz);
    out.push_str("f,mag\n");
    for (f, m) in spec.freqs_hz.iter().zip(&spec.magnitudes) {
        let _ = writeln!(out, "{f},{m}");
    }
    out
}

/// Reads a spectrum back; magnitudes are taken as written (not re-normalized).
pub fn parse_spectrum_csv(text: &str) -> Result<Spectrum> {
    let Table { meta, mut columns } = parse_table(text, "df", &["f", "mag"])?;
    let magnitudes = columns.pop().unwrap_or_default();
    let freqs_hz = columns.pop().unwrap_or_default();
    let normalized = magnitudes.iter().cloned().fold(f64::NEG_INFINITY, f64::max) == 1.0;
    Ok(Spectrum {
        freqs_hz,
        magnitudes,
        resolution_hz: meta,
        normalized,
    })
}

pub fn write_spectrum_csv(spec: &Spectrum, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_spectrum_csv(spec))?;
    Ok(())
}
