use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::{info, warn};
use mfcwind_core::report::{write_timeseries, Comparison, Summary};
use mfcwind_core::{presets, run_scenario, ErrorConvention, Error, RunOutput, ScenarioFile};

/// Simulate model-free (iP) and PI control of a 600 kW wind turbine.
#[derive(Debug, Parser)]
#[command(name = "mfcwind", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one scenario and write timeseries.csv and summary.json.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Override the integration/control period (s).
        #[arg(long)]
        dt: Option<f64>,
        /// Override the simulated duration (s); the metrics window is clipped to it.
        #[arg(long)]
        duration: Option<f64>,
        /// Override the error convention (y_minus_ref or ref_minus_y).
        #[arg(long)]
        error_convention: Option<ErrorConvention>,
    },
    /// Run two scenarios over the same region and wind and compare their metrics.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print a built-in scenario file.
    Presets {
        /// One of low-ip, low-pi, high-ip, high-pi, fault-efficiency, fault-bias.
        name: String,
        /// Write to this file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure with its process exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io { .. } => 1,
            Error::InvalidConfig(_) | Error::Domain(_) | Error::ConventionAmbiguity { .. } => 2,
            Error::ControllerFault { .. } => 3,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: 1,
        message: format!("{}: {e}", path.display()),
    }
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| io_failure(path, e))
}

fn create_dir(path: &Path) -> Result<(), Failure> {
    fs::create_dir_all(path).map_err(|e| io_failure(path, e))
}

fn report_warnings(name: &str, run: &RunOutput) {
    for w in &run.warnings {
        warn!("{name}: {w}");
    }
}

fn cmd_run(
    config: &Path,
    out: &Path,
    dt: Option<f64>,
    duration: Option<f64>,
    convention: Option<ErrorConvention>,
) -> Result<(), Failure> {
    let mut file = ScenarioFile::load(config)?;
    let s = &mut file.scenario;
    if let Some(dt) = dt {
        s.dt = dt;
    }
    if let Some(d) = duration {
        s.duration = d;
        s.metrics_window[1] = s.metrics_window[1].min(d);
    }
    if let Some(c) = convention {
        s.error_convention = c;
    }
    file.validate()?;
    let scenario = &file.scenario;

    info!("running `{}` ({} samples)", scenario.name, scenario.sample_count());
    let run = run_scenario(scenario)?;
    report_warnings(&scenario.name, &run);

    create_dir(out)?;
    if file.output.timeseries {
        let path = out.join("timeseries.csv");
        let f = fs::File::create(&path).map_err(|e| io_failure(&path, e))?;
        write_timeseries(&run.record, std::io::BufWriter::new(f))?;
    }
    let summary = Summary::new(scenario, &run);
    write_file(&out.join("summary.json"), summary.to_json_pretty().as_bytes())
}

fn cmd_compare(a: &Path, b: &Path, out: &Path) -> Result<(), Failure> {
    let fa = ScenarioFile::load(a)?;
    let fb = ScenarioFile::load(b)?;
    let (sa, sb) = (&fa.scenario, &fb.scenario);
    if sa.region != sb.region || sa.wind != sb.wind {
        return Err(Failure {
            code: 4,
            message: format!(
                "`{}` and `{}` differ in region or wind and cannot be compared",
                sa.name, sb.name
            ),
        });
    }
    let (ra, rb) = std::thread::scope(|scope| {
        let ha = scope.spawn(|| run_scenario(sa));
        let hb = scope.spawn(|| run_scenario(sb));
        (
            ha.join().expect("scenario thread panicked"),
            hb.join().expect("scenario thread panicked"),
        )
    });
    let (ra, rb) = (ra?, rb?);
    report_warnings(&sa.name, &ra);
    report_warnings(&sb.name, &rb);

    let cmp = Comparison::new(sa, &ra.metrics, sb, &rb.metrics);
    let table = cmp.table();
    create_dir(out)?;
    write_file(&out.join("comparison.json"), cmp.to_json_pretty().as_bytes())?;
    write_file(&out.join("comparison.txt"), table.as_bytes())?;
    print!("{table}");
    Ok(())
}

fn cmd_presets(name: &str, out: Option<&Path>) -> Result<(), Failure> {
    let text = presets::preset(name)?.to_json_pretty();
    match out {
        Some(path) => write_file(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run {
            config,
            out,
            dt,
            duration,
            error_convention,
        } => cmd_run(config, out, *dt, *duration, *error_convention),
        Command::Compare { a, b, out } => cmd_compare(a, b, out),
        Command::Presets { name, out } => cmd_presets(name, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("mfcwind: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
