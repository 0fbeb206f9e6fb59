//! Ground-truth motions and the quadrature Doppler signal model.
//!
//! A point target at displacement `x[n]` illuminated by a CW carrier of
//! wavelength `λ` produces
//!
//! ```text
//! I[n] = A_I cos(θ0 + 4π x[n] / λ + φ0[n]) + DC_I[n]
//! Q[n] = A_Q sin(θ0 + 4π x[n] / λ + φ0[n]) + DC_Q[n]
//! ```
//!
//! so the constellation is an arc of a circle (ellipse when `A_I != A_Q`)
//! centred on the DC offset.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{invalid, Error, Result};

/// Standard gravity used by the pendulum model, in m/s².
pub const GRAVITY: f64 = 9.8;

/// A point in the I/Q plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct IqPoint {
    pub i: f64,
    pub q: f64,
}

impl IqPoint {
    pub const fn new(i: f64, q: f64) -> Self {
        Self { i, q }
    }

    pub fn dot(self, other: IqPoint) -> f64 {
        self.i * other.i + self.q * other.q
    }

    pub fn norm(self) -> f64 {
        self.i.hypot(self.q)
    }

    /// Rotation by `angle` radians about the origin.
    pub fn rotated(self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(c * self.i - s * self.q, s * self.i + c * self.q)
    }
}

impl Add for IqPoint {
    type Output = IqPoint;
    fn add(self, rhs: IqPoint) -> IqPoint {
        IqPoint::new(self.i + rhs.i, self.q + rhs.q)
    }
}

impl Sub for IqPoint {
    type Output = IqPoint;
    fn sub(self, rhs: IqPoint) -> IqPoint {
        IqPoint::new(self.i - rhs.i, self.q - rhs.q)
    }
}

impl Mul<f64> for IqPoint {
    type Output = IqPoint;
    fn mul(self, rhs: f64) -> IqPoint {
        IqPoint::new(self.i * rhs, self.q * rhs)
    }
}

fn check_rate(sample_rate_hz: f64) -> Result<()> {
    if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
        return Err(invalid(
            "sample_rate_hz",
            format!("must be > 0, got {sample_rate_hz}"),
        ));
    }
    Ok(())
}

fn check_finite(samples: &[f64]) -> Result<()> {
    match samples.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

/// A sampled displacement waveform.
///
/// Samples are meters for ground truth, or arbitrary normalized units when
/// produced by a demodulator.
#[derive(Debug, Clone, PartialEq)]
pub struct MotionTrace {
    samples: Vec<f64>,
    sample_rate_hz: f64,
}

impl MotionTrace {
    pub fn new(samples: Vec<f64>, sample_rate_hz: f64) -> Result<Self> {
        check_rate(sample_rate_hz)?;
        if samples.is_empty() {
            return Err(invalid("samples", "motion trace must be non-empty"));
        }
        check_finite(&samples)?;
        Ok(Self {
            samples,
            sample_rate_hz,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn peak_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn peak_to_peak(&self) -> f64 {
        let (lo, hi) = self
            .samples
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        hi - lo
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.samples.iter().map(|v| v * factor).collect(),
            self.sample_rate_hz,
        )
    }
}

/// Paired in-phase / quadrature samples.
#[derive(Debug, Clone, PartialEq)]
pub struct IqSeries {
    i: Vec<f64>,
    q: Vec<f64>,
    sample_rate_hz: f64,
}

impl IqSeries {
    pub fn new(i: Vec<f64>, q: Vec<f64>, sample_rate_hz: f64) -> Result<Self> {
        check_rate(sample_rate_hz)?;
        if i.len() != q.len() {
            return Err(Error::LengthMismatch(format!(
                "I has {} samples, Q has {}",
                i.len(),
                q.len()
            )));
        }
        if i.len() < 2 {
            return Err(invalid(
                "iq",
                format!("need at least 2 samples, got {}", i.len()),
            ));
        }
        check_finite(&i)?;
        check_finite(&q)?;
        Ok(Self {
            i,
            q,
            sample_rate_hz,
        })
    }

    pub fn from_points(points: &[IqPoint], sample_rate_hz: f64) -> Result<Self> {
        Self::new(
            points.iter().map(|p| p.i).collect(),
            points.iter().map(|p| p.q).collect(),
            sample_rate_hz,
        )
    }

    pub fn i(&self) -> &[f64] {
        &self.i
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn len(&self) -> usize {
        self.i.len()
    }

    pub fn is_empty(&self) -> bool {
        self.i.is_empty()
    }

    pub fn point(&self, n: usize) -> IqPoint {
        IqPoint::new(self.i[n], self.q[n])
    }

    pub fn points(&self) -> Vec<IqPoint> {
        self.i
            .iter()
            .zip(&self.q)
            .map(|(&i, &q)| IqPoint::new(i, q))
            .collect()
    }

    /// Adds a constant offset to every sample.
    pub fn translated(&self, offset: IqPoint) -> Self {
        Self {
            i: self.i.iter().map(|v| v + offset.i).collect(),
            q: self.q.iter().map(|v| v + offset.q).collect(),
            sample_rate_hz: self.sample_rate_hz,
        }
    }

    /// Rotates every sample by `angle` radians about `pivot`.
    pub fn rotated_about(&self, pivot: IqPoint, angle: f64) -> Self {
        let pts: Vec<IqPoint> = self
            .points()
            .into_iter()
            .map(|p| (p - pivot).rotated(angle) + pivot)
            .collect();
        Self {
            i: pts.iter().map(|p| p.i).collect(),
            q: pts.iter().map(|p| p.q).collect(),
            sample_rate_hz: self.sample_rate_hz,
        }
    }

    /// Scales every sample about the origin.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            i: self.i.iter().map(|v| v * factor).collect(),
            q: self.q.iter().map(|v| v * factor).collect(),
            sample_rate_hz: self.sample_rate_hz,
        }
    }
}

/// DC offset on one channel: fixed, or drifting sample by sample.
#[derive(Debug, Clone, PartialEq)]
pub enum DcOffset {
    Constant(f64),
    PerSample(Vec<f64>),
}

impl Default for DcOffset {
    fn default() -> Self {
        DcOffset::Constant(0.0)
    }
}

impl DcOffset {
    fn at(&self, n: usize) -> f64 {
        match self {
            DcOffset::Constant(v) => *v,
            DcOffset::PerSample(v) => v[n],
        }
    }

    fn check(&self, name: &'static str, len: usize) -> Result<()> {
        match self {
            DcOffset::Constant(v) if !v.is_finite() => Err(invalid(name, "must be finite")),
            DcOffset::PerSample(v) if v.len() != len => Err(Error::LengthMismatch(format!(
                "{name} has {} samples, motion has {len}",
                v.len()
            ))),
            DcOffset::PerSample(v) => check_finite(v),
            _ => Ok(()),
        }
    }
}

/// Radar front-end parameters of the quadrature signal model.
#[derive(Debug, Clone, PartialEq)]
pub struct RadarConfig {
    pub wavelength_m: f64,
    pub amp_i: f64,
    pub amp_q: f64,
    pub dc_i: DcOffset,
    pub dc_q: DcOffset,
    pub theta0_rad: f64,
    /// Standard deviation of the residual receiver phase noise.
    pub phase_noise_std_rad: f64,
    pub sample_rate_hz: f64,
}

impl RadarConfig {
    /// Unit amplitudes, no DC, no phase noise.
    pub fn ideal(wavelength_m: f64, sample_rate_hz: f64) -> Self {
        Self {
            wavelength_m,
            amp_i: 1.0,
            amp_q: 1.0,
            dc_i: DcOffset::default(),
            dc_q: DcOffset::default(),
            theta0_rad: 0.0,
            phase_noise_std_rad: 0.0,
            sample_rate_hz,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("wavelength_m", self.wavelength_m),
            ("amp_i", self.amp_i),
            ("amp_q", self.amp_q),
            ("sample_rate_hz", self.sample_rate_hz),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(name, format!("must be > 0, got {v}")));
            }
        }
        if !(self.phase_noise_std_rad.is_finite() && self.phase_noise_std_rad >= 0.0) {
            return Err(invalid("phase_noise_std_rad", "must be >= 0"));
        }
        if !self.theta0_rad.is_finite() {
            return Err(invalid("theta0_rad", "must be finite"));
        }
        Ok(())
    }

    /// Doppler phase `4π x / λ` for a displacement.
    pub fn doppler_phase(&self, displacement_m: f64) -> f64 {
        4.0 * PI * displacement_m / self.wavelength_m
    }
}

/// `amplitude · sin(2π f n / fs + phase)` for `floor(duration · fs)` samples.
pub fn gen_sinusoid(
    amplitude_m: f64,
    freq_hz: f64,
    sample_rate_hz: f64,
    duration_s: f64,
    phase_rad: f64,
) -> Result<MotionTrace> {
    check_rate(sample_rate_hz)?;
    if !(amplitude_m.is_finite() && amplitude_m >= 0.0) {
        return Err(invalid("amplitude_m", "must be >= 0"));
    }
    if !(freq_hz.is_finite() && freq_hz >= 0.0) {
        return Err(invalid("freq_hz", "must be >= 0"));
    }
    if sample_rate_hz <= 2.0 * freq_hz {
        return Err(invalid(
            "sample_rate_hz",
            format!(
                "{sample_rate_hz} Hz aliases a {freq_hz} Hz tone (needs > {})",
                2.0 * freq_hz
            ),
        ));
    }
    if !(duration_s.is_finite() && duration_s > 0.0) {
        return Err(invalid("duration_s", "must be > 0"));
    }
    // Guard against products like 0.29 * 100 = 28.999999999999996.
    let len = (duration_s * sample_rate_hz * (1.0 + 1e-12)).floor() as usize;
    let w = 2.0 * PI * freq_hz / sample_rate_hz;
    let samples = (0..len)
        .map(|n| amplitude_m * (w * n as f64 + phase_rad).sin())
        .collect();
    MotionTrace::new(samples, sample_rate_hz)
}

/// Oscillation frequency of a pendulum with effective length `h`,
/// from `T = 2π sqrt(h / g)`.
pub fn pendulum_frequency(h_m: f64) -> Result<f64> {
    if !(h_m.is_finite() && h_m > 0.0) {
        return Err(invalid("h_m", format!("must be > 0, got {h_m}")));
    }
    Ok(1.0 / (2.0 * PI * (h_m / GRAVITY).sqrt()))
}

/// Pointwise sum of traces sharing rate and length.
pub fn gen_composite(traces: &[MotionTrace]) -> Result<MotionTrace> {
    let first = traces
        .first()
        .ok_or_else(|| invalid("traces", "need at least one trace"))?;
    let mut sum = vec![0.0; first.len()];
    for (k, t) in traces.iter().enumerate() {
        if t.len() != first.len() {
            return Err(Error::LengthMismatch(format!(
                "trace {k} has {} samples, trace 0 has {}",
                t.len(),
                first.len()
            )));
        }
        if t.sample_rate_hz() != first.sample_rate_hz() {
            return Err(invalid(
                "traces",
                format!(
                    "trace {k} sampled at {} Hz, trace 0 at {} Hz",
                    t.sample_rate_hz(),
                    first.sample_rate_hz()
                ),
            ));
        }
        for (s, v) in sum.iter_mut().zip(t.samples()) {
            *s += v;
        }
    }
    MotionTrace::new(sum, first.sample_rate_hz())
}

/// Renders the quadrature outputs for a motion under `cfg`.
///
/// Phase noise, when enabled, is i.i.d. Gaussian from a generator seeded
/// with `seed`.
pub fn synthesize_iq(motion: &MotionTrace, cfg: &RadarConfig, seed: u64) -> Result<IqSeries> {
    cfg.validate()?;
    let len = motion.len();
    cfg.dc_i.check("dc_i", len)?;
    cfg.dc_q.check("dc_q", len)?;
    if (motion.sample_rate_hz() - cfg.sample_rate_hz).abs() > 1e-9 * cfg.sample_rate_hz {
        return Err(invalid(
            "sample_rate_hz",
            format!(
                "motion sampled at {} Hz but radar configured for {} Hz",
                motion.sample_rate_hz(),
                cfg.sample_rate_hz
            ),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phase_noise = if cfg.phase_noise_std_rad > 0.0 {
        let normal = Normal::new(0.0, cfg.phase_noise_std_rad)
            .map_err(|e| invalid("phase_noise_std_rad", e.to_string()))?;
        Some(normal)
    } else {
        None
    };

    let mut i = Vec::with_capacity(len);
    let mut q = Vec::with_capacity(len);
    for (n, &x) in motion.samples().iter().enumerate() {
        let jitter = phase_noise.as_ref().map_or(0.0, |d| d.sample(&mut rng));
        let phase = cfg.theta0_rad + cfg.doppler_phase(x) + jitter;
        let (s, c) = phase.sin_cos();
        i.push(cfg.amp_i * c + cfg.dc_i.at(n));
        q.push(cfg.amp_q * s + cfg.dc_q.at(n));
    }
    IqSeries::new(i, q, cfg.sample_rate_hz)
}

/// Mean-removed power of one channel.
pub fn ac_power(samples: &[f64]) -> f64 {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    samples.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n
}

/// Adds white Gaussian noise to both channels at the requested SNR.
///
/// The signal reference is the AC power averaged over the two channels, and
/// the same noise variance is applied to I and Q, so the added noise is
/// isotropic in the constellation. `snr_db = +inf` returns the input
/// unchanged, as does a signal with no AC content.
pub fn add_noise(iq: &IqSeries, snr_db: f64, seed: u64) -> Result<IqSeries> {
    if snr_db.is_nan() {
        return Err(invalid("snr_db", "must not be NaN"));
    }
    let signal_power = 0.5 * (ac_power(iq.i()) + ac_power(iq.q()));
    if snr_db == f64::INFINITY || signal_power == 0.0 {
        return Ok(iq.clone());
    }
    let noise_std = (signal_power / 10f64.powf(snr_db / 10.0)).sqrt();
    add_white_noise(iq, noise_std, seed)
}

/// Adds i.i.d. Gaussian noise of the given standard deviation to I and Q.
pub fn add_white_noise(iq: &IqSeries, noise_std: f64, seed: u64) -> Result<IqSeries> {
    let normal = Normal::new(0.0, noise_std).map_err(|e| invalid("noise_std", e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let i = iq.i().iter().map(|v| v + normal.sample(&mut rng)).collect();
    let q = iq.q().iter().map(|v| v + normal.sample(&mut rng)).collect();
    IqSeries::new(i, q, iq.sample_rate_hz())
}
