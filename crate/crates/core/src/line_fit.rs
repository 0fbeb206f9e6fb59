//! Oriented line fitting in the I/Q plane.
//!
//! [`pca_fit`] takes the principal axis of the centred 2×2 scatter matrix
//! `M·Mᵀ` and therefore minimises perpendicular distances; it handles any
//! orientation, including vertical point sets. [`ls_fit`] regresses Q on I
//! and minimises vertical distances only, which collapses toward horizontal
//! for near-vertical data. It is kept as the comparison baseline.
//!
//! All second moments are accumulated relative to the first point, so
//! translating the input by a constant that is exactly representable
//! leaves every intermediate value bit-identical.

use crate::error::{Error, Result};
use crate::signal::IqPoint;

/// Eigenvalue gap below which a cloud is treated as isotropic.
const ISOTROPY_RTOL: f64 = 1e-12;

/// Line through `centroid` with unit `direction`; `normal` is the direction
/// rotated by +90°.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectedLine {
    pub centroid: IqPoint,
    pub direction: IqPoint,
    pub normal: IqPoint,
}

impl DirectedLine {
    fn from_direction(centroid: IqPoint, direction: IqPoint) -> Self {
        Self {
            centroid,
            direction,
            normal: IqPoint::new(-direction.q, direction.i),
        }
    }

    fn flipped(self) -> Self {
        Self::from_direction(self.centroid, self.direction * -1.0)
    }

    /// Undirected line angle against the I axis, in degrees on `[0, 180)`.
    pub fn angle_deg(&self) -> f64 {
        let a = self.direction.q.atan2(self.direction.i).to_degrees();
        let a = a.rem_euclid(180.0);
        if a >= 180.0 {
            0.0
        } else {
            a
        }
    }

    /// Signed perpendicular distance of `p` from the line.
    pub fn offset_of(&self, p: IqPoint) -> f64 {
        (p - self.centroid).dot(self.normal)
    }
}

/// `y = k·x + b` form of a fitted line, when it exists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LineSlope {
    Finite { slope: f64, intercept: f64 },
    Vertical,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitDiagnostics {
    /// Eigenvalues of the scatter matrix `M·Mᵀ`, descending.
    pub singular_values: [f64; 2],
    pub slope: LineSlope,
    /// The orientation vector was perpendicular to the fitted line, so the
    /// computed eigenvector sign was kept.
    pub orientation_tie: bool,
}

impl FitDiagnostics {
    /// `λ_max / λ_min`; infinite for exactly collinear points.
    pub fn anisotropy(&self) -> f64 {
        let [hi, lo] = self.singular_values;
        if lo > 0.0 {
            hi / lo
        } else {
            f64::INFINITY
        }
    }
}

/// Centred second moments of a point set.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Scatter {
    pub centroid: IqPoint,
    pub sxx: f64,
    pub sxy: f64,
    pub syy: f64,
}

impl Scatter {
    pub fn of(points: &[IqPoint]) -> Self {
        let anchor = points[0];
        let n = points.len() as f64;
        let (mut si, mut sq) = (0.0, 0.0);
        for p in points {
            si += p.i - anchor.i;
            sq += p.q - anchor.q;
        }
        let mean = IqPoint::new(si / n, sq / n);
        let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
        for p in points {
            let di = (p.i - anchor.i) - mean.i;
            let dq = (p.q - anchor.q) - mean.q;
            sxx += di * di;
            sxy += di * dq;
            syy += dq * dq;
        }
        Self {
            centroid: anchor + mean,
            sxx,
            sxy,
            syy,
        }
    }

    /// Eigenvalues `(λ_max, λ_min)` in closed form.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let half_tr = 0.5 * (self.sxx + self.syy);
        let half_diff = 0.5 * (self.sxx - self.syy);
        let hi = half_tr + half_diff.hypot(self.sxy);
        let lo = if hi > 0.0 {
            ((self.sxx * self.syy - self.sxy * self.sxy) / hi).max(0.0)
        } else {
            0.0
        };
        (hi, lo)
    }

    /// Unit eigenvector of `λ_max`, choosing the better-conditioned of the
    /// two equivalent closed forms.
    pub fn principal_direction(&self, hi: f64) -> IqPoint {
        let a = IqPoint::new(self.sxy, hi - self.sxx);
        let b = IqPoint::new(hi - self.syy, self.sxy);
        let v = if a.norm() >= b.norm() { a } else { b };
        v * (1.0 / v.norm())
    }
}

fn check_points(points: &[IqPoint]) -> Result<()> {
    if points.len() < 2 {
        return Err(Error::InvalidParameter {
            name: "points",
            reason: format!("need at least 2 points, got {}", points.len()),
        });
    }
    Ok(())
}

fn orient(line: DirectedLine, orient_from: IqPoint, orient_to: IqPoint) -> (DirectedLine, bool) {
    let along = (orient_to - orient_from).dot(line.direction);
    if along < 0.0 {
        (line.flipped(), false)
    } else {
        (line, along == 0.0)
    }
}

fn slope_of(line: &DirectedLine) -> LineSlope {
    let [n1, n2] = [line.normal.i, line.normal.q];
    if n2 == 0.0 {
        LineSlope::Vertical
    } else {
        let slope = -n1 / n2;
        LineSlope::Finite {
            slope,
            intercept: line.centroid.q - slope * line.centroid.i,
        }
    }
}

/// Principal-component line fit, oriented so that
/// `(orient_to − orient_from) · direction ≥ 0`.
pub fn pca_fit(
    points: &[IqPoint],
    orient_from: IqPoint,
    orient_to: IqPoint,
) -> Result<(DirectedLine, FitDiagnostics)> {
    check_points(points)?;
    let scatter = Scatter::of(points);
    let (hi, lo) = scatter.eigenvalues();
    if hi == 0.0 {
        return Err(Error::DegenerateFit {
            segment: None,
            reason: "all points are identical",
        });
    }
    if hi - lo <= ISOTROPY_RTOL * hi {
        return Err(Error::DegenerateFit {
            segment: None,
            reason: "isotropic scatter has no principal direction",
        });
    }
    let line = DirectedLine::from_direction(scatter.centroid, scatter.principal_direction(hi));
    let (line, orientation_tie) = orient(line, orient_from, orient_to);
    let diag = FitDiagnostics {
        singular_values: [hi, lo],
        slope: slope_of(&line),
        orientation_tie,
    };
    Ok((line, diag))
}

/// Ordinary least squares of Q on I, oriented as in [`pca_fit`].
pub fn ls_fit(
    points: &[IqPoint],
    orient_from: IqPoint,
    orient_to: IqPoint,
) -> Result<(DirectedLine, FitDiagnostics)> {
    check_points(points)?;
    let scatter = Scatter::of(points);
    if scatter.sxx == 0.0 {
        return Err(Error::VerticalDegenerate);
    }
    let slope = scatter.sxy / scatter.sxx;
    let dir = IqPoint::new(1.0, slope);
    let line = DirectedLine::from_direction(scatter.centroid, dir * (1.0 / dir.norm()));
    let (line, orientation_tie) = orient(line, orient_from, orient_to);
    let (hi, lo) = scatter.eigenvalues();
    let diag = FitDiagnostics {
        singular_values: [hi, lo],
        slope: LineSlope::Finite {
            slope,
            intercept: scatter.centroid.q - slope * scatter.centroid.i,
        },
        orientation_tie,
    };
    Ok((line, diag))
}

/// Sum of squared perpendicular distances from `line`.
pub fn perpendicular_residual(points: &[IqPoint], line: &DirectedLine) -> f64 {
    points.iter().map(|&p| line.offset_of(p).powi(2)).sum()
}
