//! Chord-approximation demodulation.
//!
//! Between two close samples on the constellation circle the chord length
//! `‖p[k] − p[k−1]‖` approximates the arc length `R·Δφ[k]`. Accumulating
//! signed chord lengths therefore recovers the Doppler phase (and hence the
//! motion) up to the scale `1/R`, without ever locating the circle centre:
//!
//! ```text
//! x[n] ≈ λ/(4πR) · Σ_{k=1..n} sign[k] · ‖p[k] − p[k−1]‖
//! ```
//!
//! The sign of each step comes from its projection onto a PCA line fitted to
//! the segment that contains it. Segment lines are oriented consistently
//! along the record: the first one from its first sample toward its last,
//! every later one toward the most recent well-conditioned line (scatter
//! eigenvalue ratio at least [`SegmentationPlan::min_anisotropy`]).
//! Orienting each segment only by its own endpoints would make every
//! monotone segment count forward and rectify the motion.

use std::f64::consts::PI;
use std::ops::Range;

use crate::error::{invalid, Error, Result};
use crate::line_fit::{pca_fit, DirectedLine, FitDiagnostics};
use crate::signal::{IqPoint, IqSeries, MotionTrace};

/// Default eigenvalue ratio a segment needs before it may serve as the
/// orientation reference for the segments after it.
pub const DEFAULT_MIN_ANISOTROPY: f64 = 4.0;

/// Admissible samples-per-segment for a motion of speed `v`, from the
/// requirement that a segment spans between π/12 and π of Doppler phase:
/// `λ·fs/(48v) < N < λ·fs/(4v)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SegmentBounds {
    pub n_min: usize,
    pub n_max: usize,
    /// Rounded geometric mean of the bounds.
    pub n_default: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SegmentPick {
    Lower,
    #[default]
    GeometricMean,
    Upper,
}

impl SegmentBounds {
    pub fn pick(&self, pick: SegmentPick) -> usize {
        match pick {
            SegmentPick::Lower => self.n_min,
            SegmentPick::GeometricMean => self.n_default,
            SegmentPick::Upper => self.n_max,
        }
    }
}

pub fn select_segment_len(
    wavelength_m: f64,
    sample_rate_hz: f64,
    velocity_m_s: f64,
) -> Result<SegmentBounds> {
    for (name, v) in [
        ("wavelength_m", wavelength_m),
        ("sample_rate_hz", sample_rate_hz),
        ("velocity_m_s", velocity_m_s),
    ] {
        if !(v.is_finite() && v > 0.0) {
            return Err(invalid(name, format!("must be > 0, got {v}")));
        }
    }
    let lower = wavelength_m * sample_rate_hz / (48.0 * velocity_m_s);
    let upper = wavelength_m * sample_rate_hz / (4.0 * velocity_m_s);
    // Both inequalities are strict.
    let n_min = ((lower.floor() + 1.0) as usize).max(2);
    let n_max_f = upper.ceil() - 1.0;
    if n_max_f < n_min as f64 {
        return Err(Error::EmptySegmentRange {
            lower,
            upper,
            min_sample_rate_hz: 8.0 * velocity_m_s / wavelength_m,
        });
    }
    let n_max = n_max_f as usize;
    let n_default = ((n_min as f64 * n_max as f64).sqrt().round() as usize).clamp(n_min, n_max);
    Ok(SegmentBounds {
        n_min,
        n_max,
        n_default,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentationPlan {
    pub segment_len: usize,
    /// Speed the length was derived from, if it was.
    pub velocity_hint_m_s: Option<f64>,
    pub min_anisotropy: f64,
}

impl SegmentationPlan {
    pub fn new(segment_len: usize) -> Result<Self> {
        if segment_len < 2 {
            return Err(invalid(
                "segment_len",
                format!("must be >= 2, got {segment_len}"),
            ));
        }
        Ok(Self {
            segment_len,
            velocity_hint_m_s: None,
            min_anisotropy: DEFAULT_MIN_ANISOTROPY,
        })
    }

    pub fn from_velocity(
        wavelength_m: f64,
        sample_rate_hz: f64,
        velocity_m_s: f64,
        pick: SegmentPick,
    ) -> Result<Self> {
        let bounds = select_segment_len(wavelength_m, sample_rate_hz, velocity_m_s)?;
        let mut plan = Self::new(bounds.pick(pick))?;
        plan.velocity_hint_m_s = Some(velocity_m_s);
        Ok(plan)
    }

    pub fn with_min_anisotropy(mut self, ratio: f64) -> Result<Self> {
        if !(ratio >= 1.0) {
            return Err(invalid(
                "min_anisotropy",
                format!("must be >= 1, got {ratio}"),
            ));
        }
        self.min_anisotropy = ratio;
        Ok(self)
    }

    /// Consecutive non-overlapping segments covering `len` samples. A short
    /// tail (fewer than N/2 samples, or a single sample) joins the previous
    /// segment.
    pub fn segments(&self, len: usize) -> Vec<Range<usize>> {
        let n = self.segment_len;
        let mut out: Vec<Range<usize>> = (0..len / n).map(|s| s * n..(s + 1) * n).collect();
        let tail = len % n;
        if tail > 0 {
            let start = len - tail;
            match out.last_mut() {
                Some(last) if 2 * tail < n || tail < 2 => last.end = len,
                _ => out.push(start..len),
            }
        }
        out
    }
}

/// How the accumulated chord lengths are scaled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Normalization {
    /// Divide by the circle radius `R`; with a wavelength the result is
    /// `λ/(4πR)·Σ`, in the units of `λ` when `R` matches the I/Q amplitude.
    Radius { r: f64, wavelength_m: Option<f64> },
    /// Rescale so that the peak absolute value is 1.
    Peak,
}

impl Default for Normalization {
    fn default() -> Self {
        Normalization::Radius {
            r: 1.0,
            wavelength_m: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizationRecord {
    pub mode: Normalization,
    /// Factor applied to the raw cumulative chord sum.
    pub scale: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentFit {
    pub range: Range<usize>,
    /// `None` for a segment whose samples are all identical.
    pub line: Option<DirectedLine>,
    pub diagnostics: Option<FitDiagnostics>,
    /// Direction was flipped to agree with the orientation reference.
    pub reoriented: bool,
    /// This segment became the orientation reference.
    pub is_reference: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DemodResult {
    /// Demodulated motion; `motion[0] == 0`.
    pub motion: MotionTrace,
    /// `sign_bits[k - 1]` is the sign applied to step `k`.
    pub sign_bits: Vec<i8>,
    /// Unsigned chord lengths, `chord_lengths[k - 1] = ‖p[k] − p[k−1]‖`.
    pub chord_lengths: Vec<f64>,
    pub segment_fits: Vec<SegmentFit>,
    pub normalization: NormalizationRecord,
    pub plan: SegmentationPlan,
}

impl DemodResult {
    /// Signed, scaled per-step phase increments.
    pub fn increments(&self) -> Vec<f64> {
        self.sign_bits
            .iter()
            .zip(&self.chord_lengths)
            .map(|(&s, &l)| f64::from(s) * l * self.normalization.scale)
            .collect()
    }
}

fn fit_segments(points: &[IqPoint], plan: &SegmentationPlan) -> Result<Vec<SegmentFit>> {
    let mut fits = Vec::new();
    let mut reference: Option<IqPoint> = None;
    for (index, range) in plan.segments(points.len()).into_iter().enumerate() {
        let seg = &points[range.clone()];
        let (first, last) = (seg[0], seg[seg.len() - 1]);
        let (line, diag) = match pca_fit(seg, first, last) {
            Ok(fit) => fit,
            Err(Error::DegenerateFit { .. }) if seg.iter().all(|&p| p == first) => {
                fits.push(SegmentFit {
                    range,
                    line: None,
                    diagnostics: None,
                    reoriented: false,
                    is_reference: false,
                });
                continue;
            }
            Err(Error::DegenerateFit { reason, .. }) => {
                return Err(Error::DegenerateFit {
                    segment: Some(index),
                    reason,
                })
            }
            Err(e) => return Err(e),
        };
        let (line, reoriented) = match reference {
            Some(r) if line.direction.dot(r) < 0.0 => (
                DirectedLine {
                    centroid: line.centroid,
                    direction: line.direction * -1.0,
                    normal: line.normal * -1.0,
                },
                true,
            ),
            _ => (line, false),
        };
        let is_reference = reference.is_none() || diag.anisotropy() >= plan.min_anisotropy;
        if is_reference {
            reference = Some(line.direction);
        }
        fits.push(SegmentFit {
            range,
            line: Some(line),
            diagnostics: Some(diag),
            reoriented,
            is_reference,
        });
    }
    Ok(fits)
}

fn assign_signs(points: &[IqPoint], fits: &[SegmentFit]) -> Vec<i8> {
    let mut signs = Vec::with_capacity(points.len().saturating_sub(1));
    let mut sign = 1i8;
    for fit in fits {
        // A step straddling a boundary belongs to the later segment.
        for k in fit.range.start.max(1)..fit.range.end {
            if let Some(line) = &fit.line {
                let along = (points[k] - points[k - 1]).dot(line.direction);
                if along > 0.0 {
                    sign = 1;
                } else if along < 0.0 {
                    sign = -1;
                }
            }
            signs.push(sign);
        }
    }
    signs
}

fn chord_lengths(points: &[IqPoint]) -> Vec<f64> {
    points.windows(2).map(|w| (w[1] - w[0]).norm()).collect()
}

fn accumulate(
    lengths: &[f64],
    signs: &[i8],
    norm: Normalization,
    sample_rate_hz: f64,
) -> Result<(MotionTrace, NormalizationRecord)> {
    let mut raw = Vec::with_capacity(lengths.len() + 1);
    let mut acc = 0.0;
    raw.push(acc);
    for (&l, &s) in lengths.iter().zip(signs) {
        acc += f64::from(s) * l;
        raw.push(acc);
    }
    let scale = match norm {
        Normalization::Radius { r, wavelength_m } => {
            if !(r.is_finite() && r > 0.0) {
                return Err(invalid("r", format!("radius must be > 0, got {r}")));
            }
            match wavelength_m {
                Some(lambda) if lambda.is_finite() && lambda > 0.0 => lambda / (4.0 * PI * r),
                Some(lambda) => {
                    return Err(invalid(
                        "wavelength_m",
                        format!("must be > 0, got {lambda}"),
                    ))
                }
                None => 1.0 / r,
            }
        }
        Normalization::Peak => {
            let peak = raw.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if peak > 0.0 {
                1.0 / peak
            } else {
                1.0
            }
        }
    };
    for v in &mut raw {
        *v *= scale;
    }
    Ok((
        MotionTrace::new(raw, sample_rate_hz)?,
        NormalizationRecord { mode: norm, scale },
    ))
}

/// Demodulates `iq` by chord accumulation.
pub fn demodulate(
    iq: &IqSeries,
    plan: &SegmentationPlan,
    norm: Normalization,
) -> Result<DemodResult> {
    if iq.len() < plan.segment_len {
        return Err(invalid(
            "iq",
            format!(
                "record has {} samples, fewer than the segment length {}",
                iq.len(),
                plan.segment_len
            ),
        ));
    }
    let points = iq.points();
    let fits = fit_segments(&points, plan)?;
    let signs = assign_signs(&points, &fits);
    let lengths = chord_lengths(&points);
    let (motion, normalization) = accumulate(&lengths, &signs, norm, iq.sample_rate_hz())?;
    Ok(DemodResult {
        motion,
        sign_bits: signs,
        chord_lengths: lengths,
        segment_fits: fits,
        normalization,
        plan: *plan,
    })
}

/// Re-runs sign assignment with a different segment length, keeping the
/// chord magnitudes and normalization mode of `result`.
pub fn relabel_signs(iq: &IqSeries, result: &DemodResult, window: usize) -> Result<DemodResult> {
    if iq.len() != result.motion.len() {
        return Err(Error::LengthMismatch(format!(
            "record has {} samples, result has {}",
            iq.len(),
            result.motion.len()
        )));
    }
    let plan = SegmentationPlan::new(window)?.with_min_anisotropy(result.plan.min_anisotropy)?;
    if iq.len() < window {
        return Err(invalid(
            "window",
            format!("{window} exceeds record length {}", iq.len()),
        ));
    }
    let points = iq.points();
    let fits = fit_segments(&points, &plan)?;
    let signs = assign_signs(&points, &fits);
    let (motion, normalization) = accumulate(
        &result.chord_lengths,
        &signs,
        result.normalization.mode,
        iq.sample_rate_hz(),
    )?;
    Ok(DemodResult {
        motion,
        sign_bits: signs,
        chord_lengths: result.chord_lengths.clone(),
        segment_fits: fits,
        normalization,
        plan,
    })
}
