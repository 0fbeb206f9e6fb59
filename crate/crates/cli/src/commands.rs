use std::fmt::Write as _;
use std::path::Path;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use chordmod::analysis::{check_peak, moving_average, PeakCheck};
use chordmod::io::{
    read_iq_csv, read_motion_csv, write_iq_csv, write_motion_csv, write_spectrum_csv,
};
use chordmod::*;
use serde_json::json;

use crate::manifest::{manifest_path, RunManifest};
use crate::{
    usage_error, ChordOptions, CompareArgs, DemodArgs, ErrorModelArgs, Method, NrangeArgs, Pick,
    Preset, SimulateArgs, SpectrumArgs, WindowArg,
};

/// Separates the phase-noise stream from the additive-noise stream.
const PHASE_NOISE_STREAM: u64 = 0x9e37_79b9_7f4a_7c15;

fn finish(manifest: &mut RunManifest, out: &Path, explicit: Option<&Path>) -> Result<()> {
    let path = manifest_path(out, explicit);
    manifest.write(&path)?;
    println!("wrote {} (manifest {})", out.display(), path.display());
    Ok(())
}

// -------------------------------------------------------------- simulate

fn motion_for(a: &SimulateArgs) -> Result<MotionTrace> {
    if a.h_cm.is_some() && a.preset != Preset::Pendulum {
        usage_error("--h-cm only applies to --preset pendulum");
    }
    if a.preset == Preset::Pendulum && a.h_cm.is_some() && a.freq.is_some() {
        usage_error("--freq and --h-cm both set the pendulum frequency; give one");
    }
    if a.preset == Preset::Composite && (a.amplitude.is_some() || a.freq.is_some()) {
        usage_error("--amplitude and --freq do not apply to --preset composite");
    }
    let fs = a.fs;
    if a.preset == Preset::Composite {
        let dur = a.duration.unwrap_or(40.0);
        let resp = gen_sinusoid(5e-3, 0.25, fs, dur, 0.0)?;
        let heart = gen_sinusoid(0.1e-3, 1.2, fs, dur, 0.0)?;
        return Ok(gen_composite(&[resp, heart])?);
    }
    let (amp, freq) = match a.preset {
        Preset::HeartbeatSim => (1e-3, 1.3),
        Preset::Actuator => (0.2e-3, 0.8),
        Preset::Pendulum => (1e-3, pendulum_frequency(a.h_cm.unwrap_or(0.14))?),
        Preset::Composite => unreachable!(),
    };
    let amp = a.amplitude.unwrap_or(amp);
    let freq = a.freq.unwrap_or(freq);
    Ok(gen_sinusoid(
        amp,
        freq,
        fs,
        a.duration.unwrap_or(10.0),
        0.0,
    )?)
}

pub fn simulate(a: &SimulateArgs) -> Result<()> {
    let mut manifest = RunManifest::new("simulate", a, Some(a.common.seed))?;
    let motion = manifest.time("motion", || motion_for(a))?;
    let cfg = RadarConfig {
        wavelength_m: a.wavelength,
        amp_i: a.amp.0,
        amp_q: a.amp.1,
        dc_i: DcOffset::Constant(a.dc.0),
        dc_q: DcOffset::Constant(a.dc.1),
        theta0_rad: a.theta0_deg.to_radians(),
        phase_noise_std_rad: a.phase_noise_rad,
        sample_rate_hz: a.fs,
    };
    let seed = a.common.seed;
    let iq = manifest.time("synthesize", || -> Result<IqSeries> {
        let clean = synthesize_iq(&motion, &cfg, seed ^ PHASE_NOISE_STREAM)?;
        Ok(match a.snr_db {
            Some(snr) => add_noise(&clean, snr, seed)?,
            None => clean,
        })
    })?;
    write_iq_csv(&iq, &a.common.out)
        .with_context(|| format!("writing {}", a.common.out.display()))?;
    manifest.outputs.push(a.common.out.clone());
    if let Some(truth) = &a.truth_out {
        write_motion_csv(&motion, truth).with_context(|| format!("writing {}", truth.display()))?;
        manifest.outputs.push(truth.clone());
    }
    finish(&mut manifest, &a.common.out, a.common.manifest.as_deref())
}

// ----------------------------------------------------------------- demod

fn plan_for(opts: &ChordOptions, wavelength: f64, fs: f64) -> Result<SegmentationPlan> {
    let plan = match opts.segment_n {
        Some(n) => SegmentationPlan::new(n)?,
        None => {
            let pick = match opts.segment_pick {
                Pick::Lower => SegmentPick::Lower,
                Pick::Geomean => SegmentPick::GeometricMean,
                Pick::Upper => SegmentPick::Upper,
            };
            SegmentationPlan::from_velocity(wavelength, fs, opts.velocity_hint, pick)?
        }
    };
    Ok(plan.with_min_anisotropy(opts.min_anisotropy)?)
}

fn normalization_for(r_norm: &str, wavelength: f64) -> Result<Normalization> {
    if r_norm.eq_ignore_ascii_case("peak") {
        return Ok(Normalization::Peak);
    }
    let r: f64 = r_norm
        .parse()
        .with_context(|| format!("--r-norm expects a radius or `peak`, got `{r_norm}`"))?;
    Ok(Normalization::Radius {
        r,
        wavelength_m: Some(wavelength),
    })
}

fn center_for(spec: &str, iq: &IqSeries) -> Result<(IqPoint, Option<CircleEstimate>)> {
    if spec.eq_ignore_ascii_case("auto") {
        let est = estimate_center(iq, &CenterSearch::default())?;
        return Ok((est.center, Some(est)));
    }
    let (i, q) = crate::units::pair(spec).map_err(anyhow::Error::msg)?;
    Ok((IqPoint::new(i, q), None))
}

fn smooth(motion: &MotionTrace, order: usize) -> Result<MotionTrace> {
    if order == 0 {
        bail!("--filter-order must be at least 1");
    }
    Ok(moving_average(motion, order.min(motion.len()))?)
}

pub fn demod(a: &DemodArgs) -> Result<()> {
    let mut manifest = RunManifest::new("demod", a, Some(a.common.seed))?;
    let iq = manifest
        .time("read", || read_iq_csv(&a.input))
        .with_context(|| format!("reading {}", a.input.display()))?;
    manifest.inputs.push(a.input.clone());
    let mut derived = serde_json::Map::new();

    let raw = match a.method {
        Method::Chord => {
            let plan = plan_for(&a.chord, a.wavelength, iq.sample_rate_hz())?;
            let norm = normalization_for(&a.r_norm, a.wavelength)?;
            derived.insert("segment_len".into(), json!(plan.segment_len));
            let out = manifest.time("demodulate", || demodulate(&iq, &plan, norm))?;
            derived.insert("scale".into(), json!(out.normalization.scale));
            out.motion
        }
        Method::Dacm | Method::Arctan => {
            let (center, est) = manifest.time("center", || center_for(&a.center, &iq))?;
            derived.insert("center".into(), json!([center.i, center.q]));
            if let Some(est) = est {
                derived.insert("center_iterations".into(), json!(est.iterations));
                derived.insert("center_converged".into(), json!(est.converged));
            }
            manifest.time("demodulate", || {
                if a.method == Method::Dacm {
                    dacm_demod(&iq, center, Some(a.wavelength))
                } else {
                    arctan_demod(&iq, center, Some(a.wavelength))
                }
            })?
        }
    };
    let motion = manifest.time("filter", || smooth(&raw, a.filter_order))?;
    write_motion_csv(&motion, &a.common.out)
        .with_context(|| format!("writing {}", a.common.out.display()))?;
    manifest.outputs.push(a.common.out.clone());

    let spec = manifest.time("spectrum", || {
        spectrum(&motion, Window::Hann, ZeroPad::default())
    })?;
    match check_peak(&spec, a.band, a.band.0) {
        Ok(c) => {
            println!(
                "{:?}: {} samples, peak {:.4} Hz in [{}, {}] Hz (prominence {:.1})",
                a.method,
                motion.len(),
                c.peak_hz,
                a.band.0,
                a.band.1,
                c.prominence
            );
            derived.insert("peak_hz".into(), json!(c.peak_hz));
        }
        Err(e) => eprintln!("note: {e}"),
    }
    if let Some(path) = &a.spectrum_out {
        write_spectrum_csv(&spec, path).with_context(|| format!("writing {}", path.display()))?;
        manifest.outputs.push(path.clone());
    }
    manifest.parameters["derived"] = serde_json::Value::Object(derived);
    finish(&mut manifest, &a.common.out, a.common.manifest.as_deref())
}

// -------------------------------------------------------------- spectrum

pub fn spectrum_cmd(a: &SpectrumArgs) -> Result<()> {
    let mut manifest = RunManifest::new("spectrum", a, Some(a.common.seed))?;
    let motion =
        read_motion_csv(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    manifest.inputs.push(a.input.clone());
    let window = match a.window {
        WindowArg::None => Window::None,
        WindowArg::Hann => Window::Hann,
    };
    let spec = manifest.time("spectrum", || {
        chordmod::spectrum(&motion, window, ZeroPad::Factor(a.zero_pad))
    })?;
    let spec = if a.normalize { spec.normalized() } else { spec };
    write_spectrum_csv(&spec, &a.common.out)
        .with_context(|| format!("writing {}", a.common.out.display()))?;
    manifest.outputs.push(a.common.out.clone());
    finish(&mut manifest, &a.common.out, a.common.manifest.as_deref())
}

// --------------------------------------------------------------- compare

fn median_time(reps: usize, mut f: impl FnMut() -> Result<()>) -> Result<Duration> {
    let mut times = Vec::with_capacity(reps);
    for _ in 0..reps {
        let start = Instant::now();
        f()?;
        times.push(start.elapsed());
    }
    times.sort();
    Ok(times[reps / 2])
}

struct MethodReport {
    name: &'static str,
    peak: PeakCheck,
    rms_m: Option<f64>,
    median: Duration,
}

pub fn compare(a: &CompareArgs) -> Result<()> {
    if a.reps < 10 {
        usage_error("--reps must be at least 10");
    }
    let mut manifest = RunManifest::new("compare", a, Some(a.common.seed))?;
    let iq = read_iq_csv(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    manifest.inputs.push(a.input.clone());
    let truth = match &a.truth {
        Some(path) => {
            let t = read_motion_csv(path).with_context(|| format!("reading {}", path.display()))?;
            if t.len() != iq.len() {
                bail!(
                    "truth has {} samples but the recording has {}",
                    t.len(),
                    iq.len()
                );
            }
            manifest.inputs.push(path.clone());
            let x0 = t.samples()[0];
            Some(MotionTrace::new(
                t.samples().iter().map(|v| v - x0).collect(),
                t.sample_rate_hz(),
            )?)
        }
        None => None,
    };

    let plan = plan_for(&a.chord, a.wavelength, iq.sample_rate_hz())?;
    let norm = Normalization::Radius {
        r: 1.0,
        wavelength_m: Some(a.wavelength),
    };
    let chord_out = demodulate(&iq, &plan, norm)?.motion;
    let chord_time = median_time(a.reps, || {
        std::hint::black_box(demodulate(&iq, &plan, norm)?);
        Ok(())
    })?;
    let est = estimate_center(&iq, &CenterSearch::default())?;
    let dacm_out = dacm_demod(&iq, est.center, Some(a.wavelength))?;
    let dacm_time = median_time(a.reps, || {
        let c = estimate_center(&iq, &CenterSearch::default())?;
        std::hint::black_box(dacm_demod(&iq, c.center, Some(a.wavelength))?);
        Ok(())
    })?;
    manifest
        .timings_ms
        .insert("chord_median".into(), chord_time.as_secs_f64() * 1e3);
    manifest
        .timings_ms
        .insert("dacm_median".into(), dacm_time.as_secs_f64() * 1e3);

    let expect = a.expect.unwrap_or(a.band.0);
    let mut reports = Vec::new();
    for (name, out, median) in [
        ("chord", &chord_out, chord_time),
        ("dacm", &dacm_out, dacm_time),
    ] {
        let spec = spectrum(
            &smooth(out, a.filter_order)?,
            Window::Hann,
            ZeroPad::default(),
        )?;
        let peak = check_peak(&spec, a.band, expect)?;
        let rms_m = truth
            .as_ref()
            .map(|t| rms_error(t, out, Align::Scale))
            .transpose()?;
        reports.push(MethodReport {
            name,
            peak,
            rms_m,
            median,
        });
    }

    let mut csv = String::from("method,peak_hz,prominence,within_one_bin,rms_m,median_ms\n");
    let mut text = format!(
        "{} samples at {} Hz, N = {}, estimated centre ({:.6}, {:.6})\n",
        iq.len(),
        iq.sample_rate_hz(),
        plan.segment_len,
        est.center.i,
        est.center.q
    );
    for r in &reports {
        let within = a.expect.map(|_| r.peak.bin_offset <= 1);
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            r.name,
            r.peak.peak_hz,
            r.peak.prominence,
            within.map_or(String::new(), |w| w.to_string()),
            r.rms_m.map_or(String::new(), |v| v.to_string()),
            r.median.as_secs_f64() * 1e3
        );
        let _ = write!(
            text,
            "{:<6} peak {:.4} Hz (prominence {:.1})",
            r.name, r.peak.peak_hz, r.peak.prominence
        );
        if let Some(w) = within {
            let _ = write!(text, ", {}", if w { "on target" } else { "off target" });
        }
        if let Some(rms) = r.rms_m {
            let _ = write!(text, ", aligned RMS {:.3e} m", rms);
        }
        let _ = writeln!(text, ", median {:.3?}", r.median);
    }
    let _ = writeln!(
        text,
        "speed-up {:.1}x",
        dacm_time.as_secs_f64() / chord_time.as_secs_f64()
    );
    std::fs::write(&a.common.out, csv)
        .with_context(|| format!("writing {}", a.common.out.display()))?;
    manifest.outputs.push(a.common.out.clone());
    print!("{text}");
    finish(&mut manifest, &a.common.out, a.common.manifest.as_deref())
}

// ----------------------------------------------------------- error-model

pub fn error_model(a: &ErrorModelArgs) -> Result<()> {
    if !(a.fs_step > 0.0 && a.fs_min > 0.0 && a.fs_max >= a.fs_min) {
        bail!("need 0 < --fs-min <= --fs-max and --fs-step > 0");
    }
    let mut manifest = RunManifest::new("error-model", a, Some(a.common.seed))?;
    let count = ((a.fs_max - a.fs_min) / a.fs_step + 1e-9).floor() as usize + 1;
    let rates: Vec<f64> = (0..count)
        .map(|k| a.fs_min + k as f64 * a.fs_step)
        .collect();
    let mut csv = String::from("velocity_m_s,sample_rate_hz,wavelength_m,relative_error\n");
    for &v in &a.velocities {
        for p in error_vs_rate(v, a.wavelength, &rates)? {
            let _ = writeln!(
                csv,
                "{},{},{},{}",
                p.velocity_m_s, p.sample_rate_hz, p.wavelength_m, p.relative_error
            );
        }
    }
    std::fs::write(&a.common.out, csv)
        .with_context(|| format!("writing {}", a.common.out.display()))?;
    manifest.outputs.push(a.common.out.clone());
    finish(&mut manifest, &a.common.out, a.common.manifest.as_deref())
}

// ---------------------------------------------------------------- nrange

pub fn nrange(a: &NrangeArgs) -> Result<()> {
    let b = select_segment_len(a.wavelength, a.fs, a.velocity)?;
    println!(
        "N in [{}, {}], geometric mean {}",
        b.n_min, b.n_max, b.n_default
    );
    Ok(())
}
