use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    #[error("sample {index} is not finite")]
    NonFinite { index: usize },

    /// No principal direction exists (identical points or an isotropic cloud).
    #[error("degenerate line fit{}: {reason}", segment.map(|s| format!(" in segment {s}")).unwrap_or_default())]
    DegenerateFit {
        segment: Option<usize>,
        reason: &'static str,
    },

    /// Least squares of Q on I is undefined when every abscissa is equal.
    #[error("least-squares fit is vertical-degenerate (all abscissae equal)")]
    VerticalDegenerate,

    #[error("phase undefined at sample {index}: point coincides with the circle center")]
    UndefinedPhase { index: usize },

    #[error("points are collinear; no circle can be fitted")]
    NoCircle,

    #[error(
        "no admissible segment length: bounds ({lower:.3}, {upper:.3}) are empty; \
         a sampling rate above {min_sample_rate_hz:.3} Hz is required for N = 2"
    )]
    EmptySegmentRange {
        lower: f64,
        upper: f64,
        min_sample_rate_hz: f64,
    },

    #[error("frequency band [{lo}, {hi}] Hz contains no spectral bins")]
    EmptyBand { lo: f64, hi: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
