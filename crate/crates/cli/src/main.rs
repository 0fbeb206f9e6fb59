//! `chordmod`: simulate, demodulate and compare continuous-wave Doppler
//! radar recordings.
//!
//! Numeric flags accept SI suffixes: lengths `m cm mm um nm`, times
//! `s ms us min`, frequencies `Hz kHz MHz`, speeds `m/s cm/s mm/s um/s`.
//! A bare number is read in the unit named in the flag's help.

mod commands;
mod manifest;
mod units;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "chordmod",
    version,
    about = "Chord-approximation Doppler radar demodulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize an I/Q recording (IQ CSV)
    Simulate(SimulateArgs),
    /// Demodulate an I/Q recording into a motion trace (motion CSV)
    Demod(DemodArgs),
    /// Amplitude spectrum of a motion trace (spectrum CSV)
    Spectrum(SpectrumArgs),
    /// Run chord and DACM side by side on one recording
    Compare(CompareArgs),
    /// Tabulate the chord-approximation error against sampling rate
    ErrorModel(ErrorModelArgs),
    /// Print the admissible samples-per-segment range
    Nrange(NrangeArgs),
}

#[derive(Args, Serialize, Debug, Clone)]
pub struct Common {
    /// Output path
    #[arg(long)]
    pub out: PathBuf,
    /// Random seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Manifest path [default: <out>.manifest.json]
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(ValueEnum, Serialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// 1 mm, 1.3 Hz, 90 Hz sampling, 10 s
    HeartbeatSim,
    /// Pendulum swing at the frequency set by `--h-cm`
    Pendulum,
    /// 0.2 mm, 0.8 Hz
    Actuator,
    /// 5 mm / 0.25 Hz respiration plus 0.1 mm / 1.2 Hz heartbeat, 40 s
    Composite,
}

#[derive(Args, Serialize, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value = "heartbeat-sim")]
    pub preset: Preset,
    /// Motion amplitude (mm) [default: per preset]
    #[arg(long, value_parser = units::length_mm)]
    pub amplitude: Option<f64>,
    /// Motion frequency (Hz) [default: per preset]
    #[arg(long, value_parser = units::hertz)]
    pub freq: Option<f64>,
    /// Pendulum effective length (cm); pendulum preset only
    #[arg(long, value_parser = units::length_cm)]
    pub h_cm: Option<f64>,
    /// Record length (s) [default: per preset]
    #[arg(long, value_parser = units::seconds)]
    pub duration: Option<f64>,
    /// Sampling rate (Hz)
    #[arg(long, value_parser = units::hertz, default_value = "90")]
    pub fs: f64,
    /// Carrier wavelength (mm)
    #[arg(long, value_parser = units::length_mm, default_value = "12.5")]
    pub wavelength: f64,
    /// Per-channel SNR in dB; omit for a noiseless record
    #[arg(long, allow_negative_numbers = true)]
    pub snr_db: Option<f64>,
    /// Constant phase offset θ0 (degrees)
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta0_deg: f64,
    /// I and Q amplitudes
    #[arg(long, value_parser = units::pair, default_value = "1,1")]
    pub amp: (f64, f64),
    /// I and Q DC offsets
    #[arg(long, value_parser = units::pair, default_value = "0,0", allow_negative_numbers = true)]
    pub dc: (f64, f64),
    /// Residual phase noise standard deviation (radians)
    #[arg(long, default_value_t = 0.0)]
    pub phase_noise_rad: f64,
    /// Also write the ground-truth motion (motion CSV)
    #[arg(long)]
    pub truth_out: Option<PathBuf>,
}

#[derive(ValueEnum, Serialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Chord,
    Dacm,
    Arctan,
}

#[derive(ValueEnum, Serialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Pick {
    Lower,
    Geomean,
    Upper,
}

#[derive(Args, Serialize, Debug, Clone)]
pub struct ChordOptions {
    /// Samples per segment; overrides `--velocity-hint`
    #[arg(long)]
    pub segment_n: Option<usize>,
    /// Expected peak speed used to size segments (mm/s)
    #[arg(long, value_parser = units::velocity_mm_s, default_value = "10")]
    pub velocity_hint: f64,
    /// Which end of the admissible segment range to use
    #[arg(long, value_enum, default_value = "upper")]
    pub segment_pick: Pick,
    /// Eigenvalue ratio a segment needs to anchor orientation for the next
    #[arg(long, default_value_t = chordmod::chord::DEFAULT_MIN_ANISOTROPY)]
    pub min_anisotropy: f64,
}

#[derive(Args, Serialize, Debug)]
pub struct DemodArgs {
    #[command(flatten)]
    pub common: Common,
    /// Input IQ CSV
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "chord")]
    pub method: Method,
    #[command(flatten)]
    pub chord: ChordOptions,
    /// Carrier wavelength (mm)
    #[arg(long, value_parser = units::length_mm, default_value = "12.5")]
    pub wavelength: f64,
    /// Chord normalization: circle radius, or `peak` for unit peak
    #[arg(long, default_value = "1")]
    pub r_norm: String,
    /// Circle centre for dacm/arctan: `auto` or `<I>,<Q>`
    #[arg(long, default_value = "auto", allow_negative_numbers = true)]
    pub center: String,
    /// Moving-average length applied to the output (1 disables)
    #[arg(long, default_value_t = 20)]
    pub filter_order: usize,
    /// Also write the spectrum of the output (spectrum CSV)
    #[arg(long)]
    pub spectrum_out: Option<PathBuf>,
    /// Band searched for the reported peak (Hz)
    #[arg(long, value_parser = units::pair, default_value = "0.8,2.5")]
    pub band: (f64, f64),
}

#[derive(ValueEnum, Serialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum WindowArg {
    None,
    Hann,
}

#[derive(Args, Serialize, Debug)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub common: Common,
    /// Input motion CSV
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "hann")]
    pub window: WindowArg,
    /// FFT length as a multiple of the record length
    #[arg(long, default_value_t = 4)]
    pub zero_pad: usize,
    /// Scale magnitudes to a peak of 1
    #[arg(long)]
    pub normalize: bool,
}

#[derive(Args, Serialize, Debug)]
pub struct CompareArgs {
    #[command(flatten)]
    pub common: Common,
    /// Input IQ CSV
    #[arg(long)]
    pub input: PathBuf,
    /// Ground-truth motion CSV
    #[arg(long)]
    pub truth: Option<PathBuf>,
    #[command(flatten)]
    pub chord: ChordOptions,
    /// Carrier wavelength (mm)
    #[arg(long, value_parser = units::length_mm, default_value = "12.5")]
    pub wavelength: f64,
    /// Moving-average length applied before the spectrum
    #[arg(long, default_value_t = 20)]
    pub filter_order: usize,
    /// Band searched for the peak (Hz)
    #[arg(long, value_parser = units::pair, default_value = "0.8,2.5")]
    pub band: (f64, f64),
    /// Expected peak frequency (Hz); adds a within-one-bin verdict
    #[arg(long, value_parser = units::hertz)]
    pub expect: Option<f64>,
    /// Timing repetitions per method (at least 10)
    #[arg(long, default_value_t = 10)]
    pub reps: usize,
}

#[derive(Args, Serialize, Debug)]
pub struct ErrorModelArgs {
    #[command(flatten)]
    pub common: Common,
    /// Target speeds (mm/s), comma separated
    #[arg(long, value_parser = units::velocity_mm_s, value_delimiter = ',', default_value = "1,2.5,5,10")]
    pub velocities: Vec<f64>,
    /// Carrier wavelength (mm)
    #[arg(long, value_parser = units::length_mm, default_value = "12.5")]
    pub wavelength: f64,
    /// Lowest sampling rate (Hz)
    #[arg(long, value_parser = units::hertz, default_value = "10")]
    pub fs_min: f64,
    /// Highest sampling rate (Hz)
    #[arg(long, value_parser = units::hertz, default_value = "500")]
    pub fs_max: f64,
    /// Sampling-rate step (Hz)
    #[arg(long, value_parser = units::hertz, default_value = "10")]
    pub fs_step: f64,
}

#[derive(Args, Serialize, Debug)]
pub struct NrangeArgs {
    /// Carrier wavelength (mm)
    #[arg(long, value_parser = units::length_mm, default_value = "12.5")]
    pub wavelength: f64,
    /// Sampling rate (Hz)
    #[arg(long, value_parser = units::hertz)]
    pub fs: f64,
    /// Target speed (mm/s)
    #[arg(long, value_parser = units::velocity_mm_s)]
    pub velocity: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate(a) => commands::simulate(a),
        Command::Demod(a) => commands::demod(a),
        Command::Spectrum(a) => commands::spectrum_cmd(a),
        Command::Compare(a) => commands::compare(a),
        Command::ErrorModel(a) => commands::error_model(a),
        Command::Nrange(a) => commands::nrange(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

/// Reports an invalid flag combination with usage text and exits.
pub fn usage_error(msg: &str) -> ! {
    use clap::CommandFactory;
    Cli::command()
        .error(clap::error::ErrorKind::ArgumentConflict, msg)
        .exit()
}
