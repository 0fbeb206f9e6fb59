//! Chord-based phase demodulation for continuous-wave Doppler radar.
//!
//! The demodulator integrates the lengths of successive chords traced by the
//! I/Q constellation and signs each step by projecting it onto a line fitted
//! to its segment. It never needs the circle centre, so it is immune to DC
//! offsets. Arctangent and DACM baselines, a centre estimator, a signal
//! simulator and spectral post-processing are included for comparison.

// Negated comparisons are used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod baseline;
pub mod chord;
pub mod error;
pub mod io;
pub mod line_fit;
pub mod signal;

pub use analysis::{
    check_peak, chord_error, error_vs_rate, moving_average, peak_frequency, rms_error, spectrum,
    Align, ErrorModelPoint, PeakCheck, Spectrum, Window, ZeroPad,
};
pub use baseline::{
    arctan_demod, dacm_demod, estimate_center, CenterInit, CenterSearch, CircleEstimate,
};
pub use chord::{
    demodulate, relabel_signs, select_segment_len, DemodResult, Normalization, SegmentBounds,
    SegmentPick, SegmentationPlan,
};
pub use error::{Error, Result};
pub use line_fit::{ls_fit, pca_fit, DirectedLine, FitDiagnostics, LineSlope};
pub use signal::{
    add_noise, gen_composite, gen_sinusoid, pendulum_frequency, synthesize_iq, DcOffset, IqPoint,
    IqSeries, MotionTrace, RadarConfig,
};
