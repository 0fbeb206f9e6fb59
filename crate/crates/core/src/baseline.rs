//! Reference demodulators that need the circle centre: direct arctangent,
//! DACM phase accumulation, and centre estimation by an algebraic circle
//! fit refined with gradient descent.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::line_fit::Scatter;
use crate::signal::{IqPoint, IqSeries, MotionTrace};

fn scale_for(wavelength_m: Option<f64>) -> Result<f64> {
    match wavelength_m {
        None => Ok(1.0),
        Some(l) if l.is_finite() && l > 0.0 => Ok(l / (4.0 * PI)),
        Some(l) => Err(invalid("wavelength_m", format!("must be > 0, got {l}"))),
    }
}

/// Four-quadrant arctangent about `center`, unwrapped at jumps larger than
/// π. Returns radians, or meters when `wavelength_m` is given.
pub fn arctan_demod(
    iq: &IqSeries,
    center: IqPoint,
    wavelength_m: Option<f64>,
) -> Result<MotionTrace> {
    let scale = scale_for(wavelength_m)?;
    let mut out = Vec::with_capacity(iq.len());
    let mut prev = 0.0;
    let mut unwrap = 0.0;
    for n in 0..iq.len() {
        let p = iq.point(n) - center;
        if p.i == 0.0 && p.q == 0.0 {
            return Err(Error::UndefinedPhase { index: n });
        }
        let wrapped = p.q.atan2(p.i);
        if n > 0 {
            let jump = wrapped - prev;
            if jump > PI {
                unwrap -= 2.0 * PI;
            } else if jump < -PI {
                unwrap += 2.0 * PI;
            }
        }
        prev = wrapped;
        out.push((wrapped + unwrap) * scale);
    }
    MotionTrace::new(out, iq.sample_rate_hz())
}

/// Differentiate-and-cross-multiply demodulation about `center`:
///
/// ```text
/// Δφ[k] = (I[k−1]·(Q[k]−Q[k−1]) − Q[k−1]·(I[k]−I[k−1])) / (I[k−1]² + Q[k−1]²)
/// ```
///
/// accumulated from zero.
pub fn dacm_demod(
    iq: &IqSeries,
    center: IqPoint,
    wavelength_m: Option<f64>,
) -> Result<MotionTrace> {
    let scale = scale_for(wavelength_m)?;
    let mut out = Vec::with_capacity(iq.len());
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..iq.len() {
        let prev = iq.point(k - 1) - center;
        let cur = iq.point(k) - center;
        let r2 = prev.dot(prev);
        if r2 == 0.0 {
            return Err(Error::UndefinedPhase { index: k - 1 });
        }
        let d = cur - prev;
        acc += (prev.i * d.q - prev.q * d.i) / r2;
        out.push(acc * scale);
    }
    MotionTrace::new(out, iq.sample_rate_hz())
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum CenterInit {
    /// Algebraic (Kåsa) least-squares circle fit.
    #[default]
    Algebraic,
    Point(IqPoint),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CenterSearch {
    pub init: CenterInit,
    pub max_iters: usize,
    /// Stop once an accepted step lowers the loss by less than
    /// `rel_tol · initial_loss`.
    pub rel_tol: f64,
}

impl Default for CenterSearch {
    fn default() -> Self {
        Self {
            init: CenterInit::Algebraic,
            max_iters: 500,
            rel_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircleEstimate {
    pub center: IqPoint,
    pub radius: f64,
    pub iterations: usize,
    pub final_loss: f64,
    pub converged: bool,
    /// Loss before the first step and after each accepted step.
    pub loss_history: Vec<f64>,
}

/// Algebraic circle fit: minimises `Σ (u² + v² + D u + E v + F)²` over the
/// mean-centred points. Returns centre and radius.
pub fn algebraic_circle(points: &[IqPoint]) -> Result<(IqPoint, f64)> {
    if points.len() < 3 {
        return Err(invalid(
            "points",
            format!("need at least 3 points, got {}", points.len()),
        ));
    }
    let scatter = Scatter::of(points);
    let (hi, lo) = scatter.eigenvalues();
    if hi == 0.0 || lo <= 1e-12 * hi {
        return Err(Error::NoCircle);
    }
    let mean = scatter.centroid;
    let (mut suz, mut svz, mut sz) = (0.0, 0.0, 0.0);
    for &p in points {
        let d = p - mean;
        let z = d.dot(d);
        suz += d.i * z;
        svz += d.q * z;
        sz += z;
    }
    let (suu, suv, svv) = (scatter.sxx, scatter.sxy, scatter.syy);
    let det = suu * svv - suv * suv;
    if det <= 1e-12 * (suu + svv).powi(2) {
        return Err(Error::NoCircle);
    }
    let d = -(svv * suz - suv * svz) / det;
    let e = -(suu * svz - suv * suz) / det;
    let f = -sz / points.len() as f64;
    let offset = IqPoint::new(-0.5 * d, -0.5 * e);
    let r2 = offset.dot(offset) - f;
    if !(r2 > 0.0) {
        return Err(Error::NoCircle);
    }
    Ok((mean + offset, r2.sqrt()))
}

/// Loss `Σ (d_k − d̄)²` and its gradient with respect to the centre.
fn radial_loss(points: &[IqPoint], c: IqPoint) -> (f64, IqPoint, f64) {
    let dist: Vec<f64> = points.iter().map(|&p| (p - c).norm()).collect();
    let mean = dist.iter().sum::<f64>() / dist.len() as f64;
    let mut loss = 0.0;
    let mut grad = IqPoint::default();
    for (&p, &d) in points.iter().zip(&dist) {
        let r = d - mean;
        loss += r * r;
        if d > 0.0 {
            // Σ r_k = 0, so d̄'s own derivative drops out.
            grad = grad + (c - p) * (2.0 * r / d);
        }
    }
    (loss, grad, mean)
}

/// Estimates the circle centre (the DC offset) of a constellation.
pub fn estimate_center(iq: &IqSeries, search: &CenterSearch) -> Result<CircleEstimate> {
    if !(search.rel_tol >= 0.0) {
        return Err(invalid("rel_tol", "must be >= 0"));
    }
    let points = iq.points();
    let start = match search.init {
        CenterInit::Algebraic => algebraic_circle(&points)?.0,
        CenterInit::Point(p) => {
            algebraic_circle(&points)?;
            p
        }
    };

    let (mut loss, mut grad, mut radius) = radial_loss(&points, start);
    let mut center = start;
    let tol = search.rel_tol * loss;
    let mut history = vec![loss];
    let mut step = 1.0 / points.len() as f64;
    let mut iterations = 0;
    let mut converged = loss == 0.0;

    while !converged && iterations < search.max_iters {
        iterations += 1;
        let mut accepted = None;
        let mut t = step;
        for _ in 0..60 {
            let trial = center - grad * t;
            let (l, g, r) = radial_loss(&points, trial);
            if l < loss {
                accepted = Some((trial, l, g, r));
                break;
            }
            t *= 0.5;
        }
        match accepted {
            Some((c, l, g, r)) => {
                let decrease = loss - l;
                center = c;
                loss = l;
                grad = g;
                radius = r;
                history.push(l);
                step = 2.0 * t;
                if decrease < tol {
                    converged = true;
                }
            }
            // No descent along the gradient: stationary to machine precision.
            None => converged = true,
        }
    }

    Ok(CircleEstimate {
        center,
        radius,
        iterations,
        final_loss: loss,
        converged,
        loss_history: history,
    })
}
