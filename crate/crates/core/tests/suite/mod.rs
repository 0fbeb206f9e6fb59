//! Module invariants as property checks, shared by the `invariants` test
//! target and the acceptance runner.
#![allow(dead_code)]

use std::f64::consts::PI;

use chordmod::analysis::moving_average;
use chordmod::baseline::algebraic_circle;
use chordmod::io::{format_iq_csv, format_motion_csv, parse_iq_csv, parse_motion_csv};
use chordmod::line_fit::perpendicular_residual;
use chordmod::signal::add_white_noise;
use chordmod::*;
use proptest::prelude::*;
use proptest::test_runner::{TestError, TestRunner};

const FS: f64 = 90.0;

pub type Outcome = std::result::Result<(), String>;

pub fn runner() -> TestRunner {
    TestRunner::new(ProptestConfig {
        cases: 64,
        failure_persistence: None,
        ..ProptestConfig::default()
    })
}

fn run<S: Strategy>(
    runner: &mut TestRunner,
    strategy: &S,
    test: impl Fn(S::Value) -> std::result::Result<(), TestCaseError>,
) -> Outcome
where
    S::Value: std::fmt::Debug,
{
    runner.run(strategy, test).map_err(|e| match e {
        TestError::Fail(reason, value) => format!("{reason}; minimal input: {value:?}"),
        TestError::Abort(reason) => format!("aborted: {reason}"),
    })
}

fn circle_points(center: IqPoint, r: f64, phases: &[f64]) -> Vec<IqPoint> {
    phases
        .iter()
        .map(|&a| center + IqPoint::new(r * a.cos(), r * a.sin()))
        .collect()
}

/// Phase track of a sum of two tones, in radians.
fn phase_track(n: usize, a1: f64, f1: f64, a2: f64, f2: f64, p0: f64) -> Vec<f64> {
    (0..n)
        .map(|k| {
            let t = k as f64 / FS;
            p0 + a1 * (2.0 * PI * f1 * t).sin() + a2 * (2.0 * PI * f2 * t + 1.0).sin()
        })
        .collect()
}

prop_compose! {
    fn oscillating_record()(
        n in 60usize..300,
        a1 in 0.5f64..3.0,
        f1 in 0.2f64..1.5,
        a2 in 0.0f64..0.3,
        f2 in 1.0f64..3.0,
        p0 in -PI..PI,
        ci in -5.0f64..5.0,
        cq in -5.0f64..5.0,
        r in 0.3f64..3.0,
    ) -> (IqSeries, Vec<f64>, f64) {
        let phases = phase_track(n, a1, f1, a2, f2, p0);
        let pts = circle_points(IqPoint::new(ci, cq), r, &phases);
        (IqSeries::from_points(&pts, FS).unwrap(), phases, r)
    }
}

prop_compose! {
    /// Points scattered along a line with a clear principal direction; the
    /// abscissae are sorted so the first and last points orient it firmly.
    fn elongated_cloud()(
        n in 5usize..40,
        angle in 0.0f64..PI,
        cx in -10.0f64..10.0,
        cy in -10.0f64..10.0,
        raw in prop::collection::vec((-1.0f64..1.0, -0.05f64..0.05), 40),
    ) -> Vec<IqPoint> {
        let mut along: Vec<(f64, f64)> = raw.into_iter().take(n).collect();
        along.sort_by(|a, b| a.0.total_cmp(&b.0));
        along[0].0 = -1.0;
        along[n - 1].0 = 1.0;
        let d = IqPoint::new(angle.cos(), angle.sin());
        let nrm = IqPoint::new(-angle.sin(), angle.cos());
        along
            .into_iter()
            .map(|(t, e)| IqPoint::new(cx, cy) + d * t + nrm * e)
            .collect()
    }
}

fn plan(n: usize) -> SegmentationPlan {
    SegmentationPlan::new(n).unwrap()
}

fn unit_radius() -> Normalization {
    Normalization::Radius {
        r: 1.0,
        wavelength_m: None,
    }
}

/// Rounds to a multiple of 2⁻²⁰ so that adding multiples of 2⁻¹⁰ is exact.
fn dyadic(v: f64) -> f64 {
    (v * 1_048_576.0).round() / 1_048_576.0
}

pub fn noiseless_points_lie_on_the_ellipse(runner: &mut TestRunner) -> Outcome {
    let strategy = (
        0.0f64..5e-3,
        0.1f64..5.0,
        0.1f64..10.0,
        0.1f64..10.0,
        -PI..PI,
    );
    run(runner, &strategy, |(amp, f, ai, aq, theta0)| {
        let x = gen_sinusoid(amp, f, FS, 3.0, 0.3).unwrap();
        let mut c = RadarConfig::ideal(12.5e-3, FS);
        c.amp_i = ai;
        c.amp_q = aq;
        c.theta0_rad = theta0;
        let iq = synthesize_iq(&x, &c, 0).unwrap();
        for (i, q) in iq.i().iter().zip(iq.q()) {
            prop_assert!(((i / ai).powi(2) + (q / aq).powi(2) - 1.0).abs() < 1e-12);
        }
        Ok(())
    })
}

pub fn arctangent_recovers_doppler_phase(runner: &mut TestRunner) -> Outcome {
    let strategy = (0.0f64..5e-3, 0.1f64..5.0, -PI..PI);
    run(runner, &strategy, |(amp, f, theta0)| {
        let lambda = 12.5e-3;
        let x = gen_sinusoid(amp, f, FS, 3.0, 0.0).unwrap();
        let mut c = RadarConfig::ideal(lambda, FS);
        c.theta0_rad = theta0;
        let iq = synthesize_iq(&x, &c, 0).unwrap();
        for (k, &xk) in x.samples().iter().enumerate() {
            let want = theta0 + 4.0 * PI * xk / lambda;
            let got = iq.q()[k].atan2(iq.i()[k]);
            let diff = (got - want).rem_euclid(2.0 * PI);
            prop_assert!(diff.min(2.0 * PI - diff) < 1e-12);
        }
        Ok(())
    })
}

pub fn noise_shifts_means_by_less_than_three_sigma(runner: &mut TestRunner) -> Outcome {
    let strategy = (any::<u64>(), 0.01f64..1.0);
    run(runner, &strategy, |(seed, sigma)| {
        let iq = IqSeries::new(vec![0.7; 4000], vec![-0.2; 4000], FS).unwrap();
        let noisy = add_white_noise(&iq, sigma, seed).unwrap();
        let bound = 3.0 * sigma / (iq.len() as f64).sqrt();
        let mi = noisy.i().iter().sum::<f64>() / 4000.0;
        let mq = noisy.q().iter().sum::<f64>() / 4000.0;
        // A 3σ bound fails with probability 0.27% per channel; allow the
        // rare outlier a second look at a fresh seed.
        if (mi - 0.7).abs() >= bound || (mq + 0.2).abs() >= bound {
            let again = add_white_noise(&iq, sigma, seed ^ 0x9e37_79b9).unwrap();
            let mi = again.i().iter().sum::<f64>() / 4000.0;
            let mq = again.q().iter().sum::<f64>() / 4000.0;
            prop_assert!((mi - 0.7).abs() < bound && (mq + 0.2).abs() < bound);
        }
        Ok(())
    })
}

pub fn noise_meets_requested_snr(runner: &mut TestRunner) -> Outcome {
    let strategy = (any::<u64>(), -5.0f64..30.0);
    run(runner, &strategy, |(seed, snr)| {
        let phases: Vec<f64> = (0..10_000).map(|k| 0.01 * k as f64).collect();
        let pts = circle_points(IqPoint::new(2.0, -1.0), 1.0, &phases);
        let iq = IqSeries::from_points(&pts, FS).unwrap();
        let noisy = add_noise(&iq, snr, seed).unwrap();
        let signal =
            0.5 * (chordmod::signal::ac_power(iq.i()) + chordmod::signal::ac_power(iq.q()));
        let mut noise = 0.0;
        for k in 0..iq.len() {
            noise += (noisy.i()[k] - iq.i()[k]).powi(2) + (noisy.q()[k] - iq.q()[k]).powi(2);
        }
        noise /= 2.0 * iq.len() as f64;
        let measured = 10.0 * (signal / noise).log10();
        prop_assert!((measured - snr).abs() < 0.5, "{measured} vs {snr}");
        Ok(())
    })
}

pub fn iq_csv_round_trip_is_exact(runner: &mut TestRunner) -> Outcome {
    let strategy = (
        prop::collection::vec((any::<f64>(), any::<f64>()), 2..50),
        1e-3f64..1e6,
    );
    run(runner, &strategy, |(vals, fs)| {
        let (i, q): (Vec<f64>, Vec<f64>) = vals
            .into_iter()
            .map(|(a, b)| {
                (
                    if a.is_finite() { a } else { 0.0 },
                    if b.is_finite() { b } else { 1.0 },
                )
            })
            .unzip();
        let iq = IqSeries::new(i, q, fs).unwrap();
        prop_assert_eq!(parse_iq_csv(&format_iq_csv(&iq)).unwrap(), iq);
        Ok(())
    })
}

pub fn motion_csv_round_trip_is_exact(runner: &mut TestRunner) -> Outcome {
    let strategy = (prop::collection::vec(-1e3f64..1e3, 1..50),);
    run(runner, &strategy, |(vals,)| {
        let t = MotionTrace::new(vals, FS).unwrap();
        prop_assert_eq!(parse_motion_csv(&format_motion_csv(&t)).unwrap(), t);
        Ok(())
    })
}

pub fn pca_orientation_contract(runner: &mut TestRunner) -> Outcome {
    let strategy = (
        prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 3..30),
        (-5.0f64..5.0, -5.0f64..5.0),
        (-5.0f64..5.0, -5.0f64..5.0),
    );
    run(runner, &strategy, |(pts, from, to)| {
        let pts: Vec<IqPoint> = pts.into_iter().map(|(a, b)| IqPoint::new(a, b)).collect();
        let (from, to) = (IqPoint::new(from.0, from.1), IqPoint::new(to.0, to.1));
        if let Ok((line, _)) = pca_fit(&pts, from, to) {
            prop_assert!((to - from).dot(line.direction) >= 0.0);
            prop_assert!((line.direction.norm() - 1.0).abs() < 1e-12);
        }
        Ok(())
    })
}

pub fn pca_rotates_with_the_data(runner: &mut TestRunner) -> Outcome {
    let strategy = (elongated_cloud(), -PI..PI);
    run(runner, &strategy, |(pts, alpha)| {
        let (a, _) = pca_fit(&pts, pts[0], pts[pts.len() - 1]).unwrap();
        let rot: Vec<IqPoint> = pts.iter().map(|p| p.rotated(alpha)).collect();
        let (b, _) = pca_fit(&rot, rot[0], rot[rot.len() - 1]).unwrap();
        let want = a.direction.rotated(alpha);
        prop_assert!((b.direction - want).norm() < 1e-9);
        Ok(())
    })
}

pub fn pca_ignores_translation(runner: &mut TestRunner) -> Outcome {
    let strategy = (elongated_cloud(), -1e3f64..1e3, -1e3f64..1e3);
    run(runner, &strategy, |(pts, dx, dy)| {
        let (a, _) = pca_fit(&pts, pts[0], pts[pts.len() - 1]).unwrap();
        let off = IqPoint::new(dx, dy);
        let moved: Vec<IqPoint> = pts.iter().map(|&p| p + off).collect();
        let (b, _) = pca_fit(&moved, moved[0], moved[moved.len() - 1]).unwrap();
        prop_assert!((b.direction - a.direction).norm() < 1e-9);
        Ok(())
    })
}

pub fn pca_ignores_scale(runner: &mut TestRunner) -> Outcome {
    let strategy = (elongated_cloud(), 1e-3f64..1e3);
    run(runner, &strategy, |(pts, c)| {
        let (a, _) = pca_fit(&pts, pts[0], pts[pts.len() - 1]).unwrap();
        let scaled: Vec<IqPoint> = pts
            .iter()
            .map(|&p| a.centroid + (p - a.centroid) * c)
            .collect();
        let (b, _) = pca_fit(&scaled, scaled[0], scaled[scaled.len() - 1]).unwrap();
        prop_assert!((b.direction - a.direction).norm() < 1e-9);
        Ok(())
    })
}

pub fn collinear_points_fit_exactly(runner: &mut TestRunner) -> Outcome {
    let strategy = (
        prop::collection::vec(-10.0f64..10.0, 3..30),
        0.0f64..PI,
        -10.0f64..10.0,
        -10.0f64..10.0,
    );
    run(runner, &strategy, |(ts, angle, cx, cy)| {
        let d = IqPoint::new(angle.cos(), angle.sin());
        let pts: Vec<IqPoint> = ts.iter().map(|&t| IqPoint::new(cx, cy) + d * t).collect();
        prop_assume!(ts.iter().any(|&t| (t - ts[0]).abs() > 1e-3));
        let (line, diag) = pca_fit(&pts, pts[0], pts[pts.len() - 1]).unwrap();
        prop_assert!(
            perpendicular_residual(&pts, &line) < 1e-12 * (1.0 + cx.abs() + cy.abs()).powi(2)
        );
        prop_assert!(diag.singular_values[1] < 1e-9);
        Ok(())
    })
}

pub fn pca_minimises_perpendicular_residual(runner: &mut TestRunner) -> Outcome {
    let strategy = (prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 3..12),);
    run(runner, &strategy, |(pts,)| {
        let pts: Vec<IqPoint> = pts.into_iter().map(|(a, b)| IqPoint::new(a, b)).collect();
        if let Ok((line, _)) = pca_fit(&pts, pts[0], pts[pts.len() - 1]) {
            let best = perpendicular_residual(&pts, &line);
            for deg in [-1.0f64, 1.0] {
                let d = line.direction.rotated(deg.to_radians());
                let n = d.rotated(PI / 2.0);
                let other: f64 = pts
                    .iter()
                    .map(|&p| (p - line.centroid).dot(n).powi(2))
                    .sum();
                prop_assert!(other >= best - 1e-12 * (1.0 + best));
            }
        }
        Ok(())
    })
}

pub fn dc_offset_is_bitwise_invisible(runner: &mut TestRunner) -> Outcome {
    let strategy = (
        oscillating_record(),
        6usize..30,
        -4096i32..4096,
        -4096i32..4096,
    );
    run(runner, &strategy, |((iq, _, _), n, oi, oq)| {
        let q: Vec<IqPoint> = iq
            .points()
            .into_iter()
            .map(|p| IqPoint::new(dyadic(p.i), dyadic(p.q)))
            .collect();
        let iq = IqSeries::from_points(&q, FS).unwrap();
        let off = IqPoint::new(oi as f64 / 1024.0, oq as f64 / 1024.0);
        let a = demodulate(&iq, &plan(n), unit_radius()).unwrap();
        let b = demodulate(&iq.translated(off), &plan(n), unit_radius()).unwrap();
        prop_assert_eq!(a.motion, b.motion);
        prop_assert_eq!(a.sign_bits, b.sign_bits);
        Ok(())
    })
}

pub fn dc_offset_is_invisible_for_any_constant(runner: &mut TestRunner) -> Outcome {
    let strategy = (
        oscillating_record(),
        6usize..30,
        -50.0f64..50.0,
        -50.0f64..50.0,
    );
    run(runner, &strategy, |((iq, _, _), n, oi, oq)| {
        let a = demodulate(&iq, &plan(n), unit_radius()).unwrap();
        let b = demodulate(
            &iq.translated(IqPoint::new(oi, oq)),
            &plan(n),
            unit_radius(),
        )
        .unwrap();
        prop_assert_eq!(&a.sign_bits, &b.sign_bits);
        for (x, y) in a.motion.samples().iter().zip(b.motion.samples()) {
            prop_assert!((x - y).abs() < 1e-9);
        }
        Ok(())
    })
}

pub fn rotation_leaves_the_waveform_unchanged(runner: &mut TestRunner) -> Outcome {
    let strategy = (
        oscillating_record(),
        6usize..30,
        -PI..PI,
        (-5.0f64..5.0, -5.0f64..5.0),
    );
    run(runner, &strategy, |((iq, _, _), n, alpha, pivot)| {
        let a = demodulate(&iq, &plan(n), unit_radius()).unwrap();
        let rotated = iq.rotated_about(IqPoint::new(pivot.0, pivot.1), alpha);
        let b = demodulate(&rotated, &plan(n), unit_radius()).unwrap();
        for (x, y) in a.chord_lengths.iter().zip(&b.chord_lengths) {
            prop_assert!((x - y).abs() < 1e-9);
        }
        for (x, y) in a.motion.samples().iter().zip(b.motion.samples()) {
            prop_assert!((x - y).abs() < 1e-9);
        }
        Ok(())
    })
}

pub fn scaling_scales_the_waveform(runner: &mut TestRunner) -> Outcome {
    let strategy = (oscillating_record(), 6usize..30, 0.01f64..100.0);
    run(runner, &strategy, |((iq, _, _), n, c)| {
        let a = demodulate(&iq, &plan(n), unit_radius()).unwrap();
        let b = demodulate(&iq.scaled(c), &plan(n), unit_radius()).unwrap();
        let peak = a.motion.peak_abs().max(1.0);
        for (x, y) in a.motion.samples().iter().zip(b.motion.samples()) {
            prop_assert!((c * x - y).abs() < 1e-9 * c * peak);
        }
        Ok(())
    })
}

pub fn per_step_error_follows_the_chord_formula(runner: &mut TestRunner) -> Outcome {
    // Segments stay under ~1.2 rad of sweep so consecutive fitted
    // directions turn by less than a right angle.
    let strategy = (
        prop::collection::vec(1e-3f64..0.1, 30..200),
        any::<bool>(),
        -PI..PI,
        0.3f64..3.0,
        4usize..12,
    );
    run(runner, &strategy, |(steps, descending, start, r, n)| {
        let dir = if descending { -1.0 } else { 1.0 };
        let mut phases = vec![start];
        for s in &steps {
            phases.push(phases.last().unwrap() + dir * s);
        }
        let pts = circle_points(IqPoint::new(1.5, -0.5), r, &phases);
        let iq = IqSeries::from_points(&pts, FS).unwrap();
        prop_assume!(iq.len() >= n);
        let res = demodulate(
            &iq,
            &plan(n),
            Normalization::Radius {
                r,
                wavelength_m: None,
            },
        )
        .unwrap();
        // The overall sign is fixed by the first segment's direction of travel.
        let incs = res.increments();
        let lead = incs[0].signum();
        for (inc, &s) in incs.iter().zip(&steps) {
            prop_assert_eq!(inc.signum(), lead);
            let rel = (s - inc.abs()) / s;
            let predicted = 1.0 - 2.0 * (s / 2.0).sin() / s;
            prop_assert!((rel - predicted).abs() < 1e-9, "{rel} vs {predicted}");
        }
        Ok(())
    })
}

pub fn output_shape_and_determinism(runner: &mut TestRunner) -> Outcome {
    let strategy = (oscillating_record(), 2usize..30);
    run(runner, &strategy, |((iq, _, _), n)| {
        let a = demodulate(&iq, &plan(n), unit_radius()).unwrap();
        let b = demodulate(&iq, &plan(n), unit_radius()).unwrap();
        prop_assert_eq!(a.motion.len(), iq.len());
        prop_assert_eq!(a.motion.samples()[0], 0.0);
        prop_assert_eq!(a.sign_bits.len(), iq.len() - 1);
        prop_assert_eq!(a.motion, b.motion);
        Ok(())
    })
}

pub fn relabel_with_the_same_window_is_identity(runner: &mut TestRunner) -> Outcome {
    let strategy = (oscillating_record(), 4usize..30);
    run(runner, &strategy, |((iq, _, _), n)| {
        let a = demodulate(&iq, &plan(n), unit_radius()).unwrap();
        let b = relabel_signs(&iq, &a, n).unwrap();
        prop_assert_eq!(a.motion, b.motion);
        Ok(())
    })
}

pub fn monotone_arc_signs_do_not_depend_on_window(runner: &mut TestRunner) -> Outcome {
    let strategy = (
        prop::collection::vec(1e-3f64..0.02, 60..140),
        4usize..30,
        4usize..30,
    );
    run(runner, &strategy, |(steps, w1, w2)| {
        // Total sweep stays below π, so every segment is an arc less than a half-turn.
        let mut phases = vec![0.3];
        for s in &steps {
            phases.push(phases.last().unwrap() + s);
        }
        let pts = circle_points(IqPoint::default(), 1.0, &phases);
        let iq = IqSeries::from_points(&pts, FS).unwrap();
        let a = demodulate(&iq, &plan(w1), unit_radius()).unwrap();
        let b = relabel_signs(&iq, &a, w2).unwrap();
        prop_assert_eq!(a.sign_bits, b.sign_bits);
        Ok(())
    })
}

pub fn arctangent_is_an_exact_oracle(runner: &mut TestRunner) -> Outcome {
    let strategy = (
        0.0f64..5e-3,
        0.1f64..3.0,
        -PI..PI,
        (-3.0f64..3.0, -3.0f64..3.0),
    );
    run(runner, &strategy, |(amp, f, theta0, dc)| {
        let lambda = 12.5e-3;
        let x = gen_sinusoid(amp, f, FS, 4.0, 0.7).unwrap();
        let mut c = RadarConfig::ideal(lambda, FS);
        c.theta0_rad = theta0;
        c.dc_i = DcOffset::Constant(dc.0);
        c.dc_q = DcOffset::Constant(dc.1);
        let iq = synthesize_iq(&x, &c, 0).unwrap();
        let out = arctan_demod(&iq, IqPoint::new(dc.0, dc.1), Some(lambda)).unwrap();
        let (x0, y0) = (x.samples()[0], out.samples()[0]);
        for (xt, y) in x.samples().iter().zip(out.samples()) {
            prop_assert!(((y - y0) - (xt - x0)).abs() < 1e-9);
        }
        Ok(())
    })
}

pub fn dacm_tracks_arctangent_to_third_order(runner: &mut TestRunner) -> Outcome {
    let strategy = (oscillating_record(),);
    run(runner, &strategy, |((iq, phases, _),)| {
        // Recentre the generated circle at the origin with unit radius.
        let pts: Vec<IqPoint> = phases
            .iter()
            .map(|a| IqPoint::new(a.cos(), a.sin()))
            .collect();
        let iq = IqSeries::from_points(&pts, iq.sample_rate_hz()).unwrap();
        let at = arctan_demod(&iq, IqPoint::default(), None).unwrap();
        let dc = dacm_demod(&iq, IqPoint::default(), None).unwrap();
        let mut budget = 0.0;
        for k in 1..phases.len() {
            budget += (phases[k] - phases[k - 1]).abs().powi(3) / 5.0;
            let diff = (dc.samples()[k] - (at.samples()[k] - at.samples()[0])).abs();
            prop_assert!(diff <= budget + 1e-12, "{diff} > {budget} at {k}");
        }
        Ok(())
    })
}

pub fn centre_estimate_moves_with_the_data(runner: &mut TestRunner) -> Outcome {
    let strategy = (
        -PI..PI,
        (PI / 2.0)..(2.0 * PI),
        (-3.0f64..3.0, -3.0f64..3.0),
        0.3f64..3.0,
        (-20.0f64..20.0, -20.0f64..20.0),
    );
    run(runner, &strategy, |(start, span, c, r, off)| {
        let phases: Vec<f64> = (0..60).map(|k| start + span * k as f64 / 59.0).collect();
        let pts = circle_points(IqPoint::new(c.0, c.1), r, &phases);
        let iq = IqSeries::from_points(&pts, FS).unwrap();
        let off = IqPoint::new(off.0, off.1);
        let a = estimate_center(&iq, &CenterSearch::default()).unwrap();
        let b = estimate_center(&iq.translated(off), &CenterSearch::default()).unwrap();
        prop_assert!((b.center - (a.center + off)).norm() < 1e-9);
        prop_assert!((b.radius - a.radius).abs() < 1e-9);
        Ok(())
    })
}

pub fn centre_search_loss_never_increases(runner: &mut TestRunner) -> Outcome {
    let strategy = (
        oscillating_record(),
        any::<u64>(),
        0.0f64..0.3,
        (-1.0f64..1.0, -1.0f64..1.0),
    );
    run(runner, &strategy, |((iq, _, _), seed, sigma, start)| {
        let noisy = if sigma > 0.0 {
            add_white_noise(&iq, sigma, seed).unwrap()
        } else {
            iq
        };
        prop_assume!(algebraic_circle(&noisy.points()).is_ok());
        let search = CenterSearch {
            init: CenterInit::Point(IqPoint::new(start.0, start.1)),
            ..CenterSearch::default()
        };
        let est = estimate_center(&noisy, &search).unwrap();
        prop_assert!(est.loss_history.windows(2).all(|w| w[1] <= w[0]));
        prop_assert_eq!(*est.loss_history.last().unwrap(), est.final_loss);
        Ok(())
    })
}

pub fn chord_error_is_increasing(runner: &mut TestRunner) -> Outcome {
    let strategy = (1e-6f64..PI, 1e-6f64..PI);
    run(runner, &strategy, |(a, b)| {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assume!(hi - lo > 1e-9);
        prop_assert!(chord_error(lo).unwrap() < chord_error(hi).unwrap());
        Ok(())
    })
}

pub fn moving_average_preserves_the_mean_in_the_interior(runner: &mut TestRunner) -> Outcome {
    let strategy = (
        -10.0f64..10.0,
        2usize..25,
        prop::collection::vec(-1.0f64..1.0, 25),
        3usize..8,
    );
    run(runner, &strategy, |(level, order, shape, periods)| {
        // A zero-mean pattern of period `order` averages out over any full window.
        let pattern: Vec<f64> = shape[..order].to_vec();
        let mean = pattern.iter().sum::<f64>() / order as f64;
        let x: Vec<f64> = (0..order * periods)
            .map(|k| level + pattern[k % order] - mean)
            .collect();
        let y = moving_average(&MotionTrace::new(x, FS).unwrap(), order).unwrap();
        let back = (order - 1) / 2;
        let ahead = order / 2;
        for v in &y.samples()[back..y.len() - ahead] {
            prop_assert!((v - level).abs() < 1e-12);
        }
        Ok(())
    })
}

pub fn chord_error_is_quadratic_near_zero(_: &mut TestRunner) -> Outcome {
    for d in [1e-3f64, 1e-2, 1e-1] {
        let residual = chord_error(d).unwrap() - d * d / 24.0;
        // Next term of the series is Δφ⁴/1920.
        let next = d.powi(4) / 1920.0;
        if (residual + next).abs() >= 1e-3 * next + 1e-18 {
            return Err(format!("{d}: residual {residual}"));
        }
    }
    Ok(())
}

pub type Property = fn(&mut TestRunner) -> Outcome;

/// Every property, by name.
pub const ALL: &[(&str, Property)] = &[
    (
        "noiseless_points_lie_on_the_ellipse",
        noiseless_points_lie_on_the_ellipse,
    ),
    (
        "arctangent_recovers_doppler_phase",
        arctangent_recovers_doppler_phase,
    ),
    (
        "noise_shifts_means_by_less_than_three_sigma",
        noise_shifts_means_by_less_than_three_sigma,
    ),
    ("noise_meets_requested_snr", noise_meets_requested_snr),
    ("iq_csv_round_trip_is_exact", iq_csv_round_trip_is_exact),
    (
        "motion_csv_round_trip_is_exact",
        motion_csv_round_trip_is_exact,
    ),
    ("pca_orientation_contract", pca_orientation_contract),
    ("pca_rotates_with_the_data", pca_rotates_with_the_data),
    ("pca_ignores_translation", pca_ignores_translation),
    ("pca_ignores_scale", pca_ignores_scale),
    ("collinear_points_fit_exactly", collinear_points_fit_exactly),
    (
        "pca_minimises_perpendicular_residual",
        pca_minimises_perpendicular_residual,
    ),
    (
        "dc_offset_is_bitwise_invisible",
        dc_offset_is_bitwise_invisible,
    ),
    (
        "dc_offset_is_invisible_for_any_constant",
        dc_offset_is_invisible_for_any_constant,
    ),
    (
        "rotation_leaves_the_waveform_unchanged",
        rotation_leaves_the_waveform_unchanged,
    ),
    ("scaling_scales_the_waveform", scaling_scales_the_waveform),
    (
        "per_step_error_follows_the_chord_formula",
        per_step_error_follows_the_chord_formula,
    ),
    ("output_shape_and_determinism", output_shape_and_determinism),
    (
        "relabel_with_the_same_window_is_identity",
        relabel_with_the_same_window_is_identity,
    ),
    (
        "monotone_arc_signs_do_not_depend_on_window",
        monotone_arc_signs_do_not_depend_on_window,
    ),
    (
        "arctangent_is_an_exact_oracle",
        arctangent_is_an_exact_oracle,
    ),
    (
        "dacm_tracks_arctangent_to_third_order",
        dacm_tracks_arctangent_to_third_order,
    ),
    (
        "centre_estimate_moves_with_the_data",
        centre_estimate_moves_with_the_data,
    ),
    (
        "centre_search_loss_never_increases",
        centre_search_loss_never_increases,
    ),
    ("chord_error_is_increasing", chord_error_is_increasing),
    (
        "moving_average_preserves_the_mean_in_the_interior",
        moving_average_preserves_the_mean_in_the_interior,
    ),
    (
        "chord_error_is_quadratic_near_zero",
        chord_error_is_quadratic_near_zero,
    ),
];
