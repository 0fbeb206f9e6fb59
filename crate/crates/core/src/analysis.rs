//! Post-processing and evaluation: smoothing, spectra, error metrics and the
//! analytic chord-approximation error model.

use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{invalid, Error, Result};
use crate::signal::MotionTrace;

/// Centred moving average of length `order`; the window is clipped to the
/// record near either end so the output keeps the input length.
pub fn moving_average(trace: &MotionTrace, order: usize) -> Result<MotionTrace> {
    let x = trace.samples();
    if order == 0 || order > x.len() {
        return Err(invalid(
            "order",
            format!("must be in [1, {}], got {order}", x.len()),
        ));
    }
    let back = (order - 1) / 2;
    let ahead = order / 2;
    let mut prefix = Vec::with_capacity(x.len() + 1);
    prefix.push(0.0);
    let mut acc = 0.0;
    for v in x {
        acc += v;
        prefix.push(acc);
    }
    let out = (0..x.len())
        .map(|n| {
            if order == 1 {
                return x[n];
            }
            let lo = n.saturating_sub(back);
            let hi = (n + ahead + 1).min(x.len());
            if hi - lo == order {
                x[lo..hi].iter().sum::<f64>() / order as f64
            } else {
                (prefix[hi] - prefix[lo]) / (hi - lo) as f64
            }
        })
        .collect();
    MotionTrace::new(out, trace.sample_rate_hz())
}

/// Magnitude response of a length-`order` moving average at `freq_hz`.
pub fn moving_average_gain(order: usize, freq_hz: f64, sample_rate_hz: f64) -> f64 {
    let w = PI * freq_hz / sample_rate_hz;
    if w.sin().abs() < 1e-15 {
        return 1.0;
    }
    ((order as f64 * w).sin() / (order as f64 * w.sin())).abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Window {
    None,
    #[default]
    Hann,
}

/// One-sided amplitude spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub freqs_hz: Vec<f64>,
    pub magnitudes: Vec<f64>,
    pub resolution_hz: f64,
    /// Magnitudes were scaled to a peak of 1.
    pub normalized: bool,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.freqs_hz.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs_hz.is_empty()
    }

    pub fn normalized(&self) -> Spectrum {
        let peak = self.magnitudes.iter().cloned().fold(0.0, f64::max);
        let scale = if peak > 0.0 { 1.0 / peak } else { 1.0 };
        Spectrum {
            freqs_hz: self.freqs_hz.clone(),
            magnitudes: self.magnitudes.iter().map(|m| m * scale).collect(),
            resolution_hz: self.resolution_hz,
            normalized: peak > 0.0,
        }
    }

    /// Bin indices whose frequency lies in `[lo, hi]`.
    pub fn band(&self, lo: f64, hi: f64) -> std::ops::Range<usize> {
        let eps = 1e-9 * self.resolution_hz;
        let start = self.freqs_hz.partition_point(|&f| f < lo - eps);
        let end = self.freqs_hz.partition_point(|&f| f <= hi + eps);
        start..end.max(start)
    }

    /// Index of the bin nearest to `freq_hz`.
    pub fn bin_of(&self, freq_hz: f64) -> usize {
        ((freq_hz / self.resolution_hz).round().max(0.0) as usize).min(self.len() - 1)
    }
}

/// Zero-padding request for [`spectrum`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroPad {
    /// Pad to `factor` times the input length.
    Factor(usize),
    /// Pad to this FFT length (at least the input length).
    Length(usize),
}

impl Default for ZeroPad {
    fn default() -> Self {
        ZeroPad::Factor(4)
    }
}

/// Mean-removed, optionally windowed, zero-padded one-sided DFT magnitude.
pub fn spectrum(trace: &MotionTrace, window: Window, pad: ZeroPad) -> Result<Spectrum> {
    let x = trace.samples();
    let n = x.len();
    if n < 2 {
        return Err(invalid("trace", "spectrum needs at least 2 samples"));
    }
    let nfft = match pad {
        ZeroPad::Factor(f) if f >= 1 => n * f,
        ZeroPad::Length(len) if len >= n => len,
        other => {
            return Err(invalid(
                "zero_pad",
                format!("{other:?} is shorter than the input"),
            ))
        }
    };
    let mean = x.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<Complex<f64>> = x
        .iter()
        .enumerate()
        .map(|(k, &v)| {
            let w = match window {
                Window::None => 1.0,
                Window::Hann => 0.5 - 0.5 * (2.0 * PI * k as f64 / (n - 1) as f64).cos(),
            };
            Complex::new((v - mean) * w, 0.0)
        })
        .collect();
    buf.resize(nfft, Complex::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(nfft).process(&mut buf);

    let bins = nfft / 2 + 1;
    let df = trace.sample_rate_hz() / nfft as f64;
    Ok(Spectrum {
        freqs_hz: (0..bins).map(|k| k as f64 * df).collect(),
        magnitudes: buf[..bins].iter().map(|c| c.norm()).collect(),
        resolution_hz: df,
        normalized: false,
    })
}

/// `1 − 2 sin(Δφ/2)/Δφ`: relative shortfall of a chord against its arc.
pub fn chord_error(delta_phi_rad: f64) -> Result<f64> {
    if !(0.0..=PI).contains(&delta_phi_rad) {
        return Err(invalid(
            "delta_phi_rad",
            format!("must be in [0, π], got {delta_phi_rad}"),
        ));
    }
    Ok(sinc_deficit(0.5 * delta_phi_rad))
}

/// `1 − sin(x)/x`, with the series used near zero to avoid cancellation.
fn sinc_deficit(x: f64) -> f64 {
    if x.abs() < 1e-3 {
        let x2 = x * x;
        x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0))
    } else {
        1.0 - x.sin() / x
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorModelPoint {
    pub velocity_m_s: f64,
    pub sample_rate_hz: f64,
    pub wavelength_m: f64,
    pub relative_error: f64,
}

/// Chord-approximation error for a target moving at `velocity_m_s`,
/// `1 − sin(2πv/(λ fs)) / (2πv/(λ fs))`, at each sampling rate.
pub fn error_vs_rate(
    velocity_m_s: f64,
    wavelength_m: f64,
    sample_rates: &[f64],
) -> Result<Vec<ErrorModelPoint>> {
    if !(velocity_m_s.is_finite() && velocity_m_s >= 0.0) {
        return Err(invalid(
            "velocity_m_s",
            format!("must be >= 0, got {velocity_m_s}"),
        ));
    }
    if !(wavelength_m.is_finite() && wavelength_m > 0.0) {
        return Err(invalid(
            "wavelength_m",
            format!("must be > 0, got {wavelength_m}"),
        ));
    }
    sample_rates
        .iter()
        .map(|&fs| {
            if !(fs.is_finite() && fs > 0.0) {
                return Err(invalid("sample_rate_hz", format!("must be > 0, got {fs}")));
            }
            let x = 2.0 * PI * velocity_m_s / (wavelength_m * fs);
            if x >= PI {
                return Err(invalid(
                    "sample_rate_hz",
                    format!("{fs} Hz leaves more than a half-turn of phase between samples"),
                ));
            }
            Ok(ErrorModelPoint {
                velocity_m_s,
                sample_rate_hz: fs,
                wavelength_m,
                relative_error: sinc_deficit(x),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Align {
    #[default]
    None,
    /// Least-squares scale `b` onto `a` first.
    Scale,
}

/// Root-mean-square difference `a − s·b`, where `s = 1` or the least-squares
/// scale `⟨a,b⟩/⟨b,b⟩`.
pub fn rms_error(a: &MotionTrace, b: &MotionTrace, align: Align) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(format!(
            "traces have {} and {} samples",
            a.len(),
            b.len()
        )));
    }
    let (xa, xb) = (a.samples(), b.samples());
    let s = match align {
        Align::None => 1.0,
        Align::Scale => {
            let bb: f64 = xb.iter().map(|v| v * v).sum();
            if bb == 0.0 {
                0.0
            } else {
                xa.iter().zip(xb).map(|(p, q)| p * q).sum::<f64>() / bb
            }
        }
    };
    let sse: f64 = xa.iter().zip(xb).map(|(p, q)| (p - s * q).powi(2)).sum();
    Ok((sse / xa.len() as f64).sqrt())
}

/// Frequency of the strongest bin in `[lo, hi]`, refined by a parabola
/// through the peak and its two neighbours.
pub fn peak_frequency(spec: &Spectrum, band_hz: (f64, f64)) -> Result<f64> {
    let (lo, hi) = band_hz;
    let range = spec.band(lo, hi);
    if lo > hi || range.is_empty() {
        return Err(Error::EmptyBand { lo, hi });
    }
    let m = &spec.magnitudes;
    let k = range
        .clone()
        .max_by(|&a, &b| m[a].total_cmp(&m[b]))
        .expect("band is non-empty");
    let mut f = spec.freqs_hz[k];
    if k > 0 && k + 1 < m.len() {
        let (y0, y1, y2) = (m[k - 1], m[k], m[k + 1]);
        let denom = y0 - 2.0 * y1 + y2;
        if denom < 0.0 {
            let delta = 0.5 * (y0 - y2) / denom;
            f += delta.clamp(-0.5, 0.5) * spec.resolution_hz;
        }
    }
    Ok(f)
}

/// Strongest in-band bin, its distance from an expected frequency in bins,
/// and its prominence over the in-band median.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakCheck {
    pub peak_hz: f64,
    pub bin_offset: usize,
    pub prominence: f64,
}

pub fn check_peak(spec: &Spectrum, band_hz: (f64, f64), expected_hz: f64) -> Result<PeakCheck> {
    let (lo, hi) = band_hz;
    let range = spec.band(lo, hi);
    if lo > hi || range.is_empty() {
        return Err(Error::EmptyBand { lo, hi });
    }
    let m = &spec.magnitudes;
    let k = range
        .clone()
        .max_by(|&a, &b| m[a].total_cmp(&m[b]))
        .expect("band is non-empty");
    let mut in_band: Vec<f64> = m[range].to_vec();
    in_band.sort_by(f64::total_cmp);
    let mid = in_band.len() / 2;
    let median = if in_band.len().is_multiple_of(2) {
        0.5 * (in_band[mid - 1] + in_band[mid])
    } else {
        in_band[mid]
    };
    Ok(PeakCheck {
        peak_hz: spec.freqs_hz[k],
        bin_offset: k.abs_diff(spec.bin_of(expected_hz)),
        prominence: if median > 0.0 {
            m[k] / median
        } else {
            f64::INFINITY
        },
    })
}
