//! gridframe command line: scenario synthesis, static transforms, adaptive
//! estimation, and balance diagnostics with CSV/JSON I/O.

mod demo;
mod scenario;

use std::env;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use gridframe_core::adaptive_estimator::{run_pipeline, EstimatorConfig, Vuf, DEFAULT_MU};
use gridframe_core::diagnostics::{circularity, classify, DEFAULT_BALANCE_THRESHOLD};
use gridframe_core::error::{Error, Result};
use gridframe_core::io;
use gridframe_core::signal_model::{phasor_vector, synth_seeded};
use gridframe_core::subspace::{empirical_covariance, rank_estimate};
use gridframe_core::transforms::{
    clarke_complex, clarke_full, clarke_reduced, nominal_theta, park, symmetrical,
};

use scenario::Scenario;

#[derive(Parser)]
#[command(
    name = "gridframe",
    version,
    about = "Three-phase transforms, subspace analysis, and adaptive frequency/imbalance tracking"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    /// Reduced Clarke (alpha-beta) transform.
    Clarke,
    /// Full three-component Clarke transform.
    Clarke3,
    /// Park (dq) transform of an alpha-beta series.
    Park,
    /// Symmetrical-component transform of a configuration's phasors.
    Symmetrical,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a three-phase series from a scenario file.
    Synth {
        /// Scenario JSON file.
        #[arg(long)]
        config: PathBuf,
        /// Output CSV file, `-` for stdout.
        #[arg(long, default_value = "-")]
        output: String,
    },
    /// Apply a static transform to an input series or configuration.
    Transform {
        #[arg(long, value_enum)]
        which: Which,
        /// Input CSV file, `-` for stdin.
        #[arg(long, default_value = "-")]
        input: String,
        #[arg(long, default_value = "-")]
        output: String,
        /// Three-phase configuration JSON (symmetrical only).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Park rotation frequency in rad/sample; overrides the Hz pair.
        #[arg(long)]
        omega0: Option<f64>,
        /// Park rotation frequency in Hz.
        #[arg(long, default_value_t = 50.0)]
        nominal_freq_hz: f64,
        #[arg(long, default_value_t = 1000.0)]
        sample_rate_hz: f64,
        /// Output format; series transforms are CSV, symmetrical is JSON.
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Run the adaptive Clarke/Park estimator over a series.
    Estimate {
        #[arg(long, default_value = "-")]
        input: String,
        #[arg(long, default_value = "-")]
        output: String,
        /// ACLMS learning rate.
        #[arg(long, default_value_t = DEFAULT_MU)]
        mu: f64,
        #[arg(long, default_value_t = 1000.0)]
        sample_rate_hz: f64,
    },
    /// Rank, circularity, and balance diagnosis of a series.
    Diagnose {
        #[arg(long, default_value = "-")]
        input: String,
        #[arg(long, default_value = "-")]
        output: String,
        #[arg(long, default_value_t = DEFAULT_MU)]
        mu: f64,
        #[arg(long, default_value_t = 1000.0)]
        sample_rate_hz: f64,
        /// |kappa| cutoff for the Balanced verdict.
        #[arg(long, default_value_t = DEFAULT_BALANCE_THRESHOLD)]
        threshold: f64,
        /// Relative eigenvalue cutoff for the rank estimate.
        #[arg(long, default_value_t = 1e-6)]
        rank_tol: f64,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Regenerate the demonstration scenarios and their artifacts.
    Demo {
        /// Output directory.
        #[arg(long, default_value = "demo_out")]
        output: PathBuf,
    },
}

fn open_input(path: &str) -> Result<Box<dyn BufRead>> {
    if path == "-" {
        Ok(Box::new(BufReader::new(std::io::stdin())))
    } else {
        Ok(Box::new(BufReader::new(fs::File::open(path)?)))
    }
}

fn open_output(path: &str) -> Result<Box<dyn Write>> {
    if path == "-" {
        Ok(Box::new(BufWriter::new(std::io::stdout())))
    } else {
        Ok(Box::new(BufWriter::new(fs::File::create(path)?)))
    }
}

fn noise_seed() -> Result<u64> {
    match env::var("GRIDFRAME_SEED") {
        Ok(text) => text.trim().parse().map_err(|_| {
            Error::Validation(format!(
                "GRIDFRAME_SEED must be an unsigned integer, got `{text}`"
            ))
        }),
        Err(_) => Ok(0),
    }
}

fn require_format(requested: Option<Format>, supported: Format, what: &str) -> Result<()> {
    if let Some(f) = requested {
        if f != supported {
            let name = match supported {
                Format::Csv => "csv",
                Format::Json => "json",
            };
            return Err(Error::Validation(format!(
                "{what} output is only available as {name}"
            )));
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct DiagnoseJson {
    circularity: io::CircularityJson,
    verdict: io::VerdictJson,
    rank: usize,
    kappa: io::ComplexJson,
    frequency_hz: f64,
    low_confidence: bool,
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Synth { config, output } => {
            let text = fs::read_to_string(&config)?;
            let scenario = Scenario::from_json(&text)?;
            let series = synth_seeded(&scenario.config, scenario.duration, noise_seed()?)?;
            let mut out = open_output(&output)?;
            io::write_sample_series_csv(&mut out, &series)?;
            out.flush()?;
        }
        Command::Transform {
            which,
            input,
            output,
            config,
            omega0,
            nominal_freq_hz,
            sample_rate_hz,
            format,
        } => match which {
            Which::Clarke => {
                require_format(format, Format::Csv, "clarke")?;
                let series = io::read_sample_series_csv(open_input(&input)?)?;
                let mut out = open_output(&output)?;
                io::write_alpha_beta_csv(&mut out, &clarke_reduced(&series))?;
                out.flush()?;
            }
            Which::Clarke3 => {
                require_format(format, Format::Csv, "clarke3")?;
                let series = io::read_sample_series_csv(open_input(&input)?)?;
                let mut out = open_output(&output)?;
                io::write_clarke_csv(&mut out, &clarke_full(&series))?;
                out.flush()?;
            }
            Which::Park => {
                require_format(format, Format::Csv, "park")?;
                if sample_rate_hz.is_nan() || sample_rate_hz <= 0.0 {
                    return Err(Error::Validation(format!(
                        "sample rate must be positive, got {sample_rate_hz}"
                    )));
                }
                let w0 = omega0
                    .unwrap_or(2.0 * std::f64::consts::PI * nominal_freq_hz / sample_rate_hz);
                let ab = io::read_alpha_beta_csv(open_input(&input)?)?;
                let theta = nominal_theta(ab.start_index, ab.samples.len(), w0);
                let dq = park(&ab, &theta)?;
                let mut out = open_output(&output)?;
                io::write_park_csv(&mut out, &dq)?;
                out.flush()?;
            }
            Which::Symmetrical => {
                require_format(format, Format::Json, "symmetrical")?;
                let path = config.ok_or_else(|| {
                    Error::Validation(
                        "`transform --which symmetrical` needs --config <three-phase JSON>".into(),
                    )
                })?;
                let cfg = io::config_from_json(&fs::read_to_string(&path)?)?;
                let seq = symmetrical(&phasor_vector(&cfg)?);
                let mut out = open_output(&output)?;
                writeln!(out, "{}", io::sequence_phasors_json(&seq))?;
                out.flush()?;
            }
        },
        Command::Estimate {
            input,
            output,
            mu,
            sample_rate_hz,
        } => {
            let series = io::read_sample_series_csv(open_input(&input)?)?;
            let trace = run_pipeline(&series, &EstimatorConfig::new(mu, sample_rate_hz))?;
            let mut out = open_output(&output)?;
            io::write_trace_csv(&mut out, &trace)?;
            out.flush()?;
        }
        Command::Diagnose {
            input,
            output,
            mu,
            sample_rate_hz,
            threshold,
            rank_tol,
            format,
        } => {
            require_format(format, Format::Json, "diagnose")?;
            if rank_tol.is_nan() || rank_tol <= 0.0 {
                return Err(Error::Validation(format!(
                    "rank tolerance must be positive, got {rank_tol}"
                )));
            }
            let series = io::read_sample_series_csv(open_input(&input)?)?;
            let cov = empirical_covariance(&series)?;
            let rank = rank_estimate(&cov, rank_tol);
            let report = circularity(&clarke_complex(&series))?;
            let trace = run_pipeline(&series, &EstimatorConfig::new(mu, sample_rate_hz))?;
            let last = trace
                .final_record()
                .ok_or_else(|| Error::Validation("estimator trace is empty".into()))?;
            let vuf = Vuf {
                kappa: last.kappa,
                low_confidence: last.low_confidence,
            };
            let verdict = classify(&vuf, threshold)?;
            let payload = DiagnoseJson {
                circularity: (&report).into(),
                verdict: (&verdict).into(),
                rank,
                kappa: last.kappa.into(),
                frequency_hz: last.freq_hz,
                low_confidence: last.low_confidence,
            };
            let mut out = open_output(&output)?;
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&payload).expect("serializable")
            )?;
            out.flush()?;
        }
        Command::Demo { output } => {
            let summaries = demo::run(&output, noise_seed()?)?;
            for line in summaries {
                println!("{line}");
            }
            println!("wrote demo artifacts to {}", output.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        // A downstream consumer closing the pipe early is not an error.
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Divergence { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
