//! The `qgas` command-line front end.
//!
//! Exit codes: 0 success, 1 usage, 2 domain error, 3 numeric failure
//! (series truncation, quadrature or solver non-convergence), 4 file I/O.
//! Output is fully rendered before anything is written, so stdout only ever
//! carries data on success.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::error::Error;
use crate::regime::{self, FermiSeries, RegimeReport};
use crate::special_functions::{self, SeriesParams};
use crate::sweep_report::{self, OccupationBranch, SweepMode, SweepRow, SweepSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

/// Options shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct CliConfig {
    /// Series term cutoff, also used as the root-finding tolerance.
    #[arg(long, global = true, env = "QGAS_TOL", default_value_t = 1e-12)]
    pub tolerance: f64,

    #[arg(long, global = true, default_value_t = 100_000)]
    pub max_terms: usize,

    /// Relative half-width used to match the named threshold momenta.
    #[arg(long, global = true, env = "QGAS_WINDOW", default_value_t = regime::DEFAULT_WINDOW)]
    pub window: f64,

    /// Fermi series used for the anomalous branch.
    #[arg(long, global = true, env = "QGAS_SERIES", value_enum, default_value_t = FermiSeries::Truncated)]
    pub series: FermiSeries,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Parser)]
#[command(name = "qgas", version, about = "Mono-energetic Bose gas regimes")]
struct Cli {
    #[command(flatten)]
    config: CliConfig,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolylogKind {
    /// g_{3/2}
    Bose,
    /// f_{3/2}, full series
    Fermi,
    /// f_{3/2}, three terms
    Fermi3,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate g_{3/2} or f_{3/2} at a fugacity.
    Polylog {
        #[arg(long, value_enum)]
        kind: PolylogKind,
        #[arg(long, allow_negative_numbers = true)]
        z: f64,
    },
    /// Threshold momenta for condensation and dilution.
    Thresholds {
        #[arg(long, allow_negative_numbers = true)]
        b: Option<f64>,
    },
    /// Classify a single momentum.
    Classify {
        #[arg(long, allow_negative_numbers = true)]
        p0: f64,
        #[arg(long, value_enum, default_value_t = SweepMode::Both)]
        mode: SweepMode,
    },
    /// Classify a linear grid of momenta.
    Sweep {
        #[arg(long, allow_negative_numbers = true)]
        p_min: f64,
        #[arg(long, allow_negative_numbers = true)]
        p_max: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = SweepMode::Both)]
        mode: SweepMode,
    },
    /// Tabulate the occupation number against βε.
    Occupation {
        #[arg(long, allow_negative_numbers = true)]
        z: f64,
        #[arg(long, allow_negative_numbers = true)]
        beta_eps_min: f64,
        #[arg(long, allow_negative_numbers = true)]
        beta_eps_max: f64,
        #[arg(long, default_value_t = 11)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = OccupationBranch::Bose)]
        branch: OccupationBranch,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Numeric(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Numeric(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Io(_) => EXIT_IO,
            Failure::Numeric(e) => exit_code_for(e),
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) | Failure::Io(m) => m.clone(),
            Failure::Numeric(e) => e.to_string(),
        }
    }
}

/// Exit code for a library error.
pub fn exit_code_for(err: &Error) -> i32 {
    match err.root_cause() {
        Error::InvalidInput(_) => EXIT_USAGE,
        Error::Domain(_) | Error::Singularity { .. } => EXIT_DOMAIN,
        Error::Truncation { .. } | Error::Quadrature { .. } | Error::NonConvergence { .. } => {
            EXIT_NUMERIC
        }
        Error::AtMomentum { .. } => unreachable!("root_cause unwraps context"),
    }
}

impl CliConfig {
    fn series_params(&self) -> Result<SeriesParams, Failure> {
        SeriesParams::new(self.tolerance, self.max_terms).map_err(|e| Failure::Usage(e.to_string()))
    }

    fn validate(&self) -> Result<(), Failure> {
        if !(self.window > 0.0 && self.window.is_finite()) {
            return Err(Failure::Usage(format!(
                "--window must be positive, got {}",
                self.window
            )));
        }
        self.series_params().map(|_| ())
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn num(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_else(|| "-".into())
}

fn cmd_polylog(kind: PolylogKind, z: f64, cfg: &CliConfig) -> Result<String, Failure> {
    let params = cfg.series_params()?;
    let value = match kind {
        PolylogKind::Bose => special_functions::bose_g32(z, &params)?,
        PolylogKind::Fermi => special_functions::fermi_f32_full(z, &params)?,
        PolylogKind::Fermi3 => special_functions::fermi_f32_truncated(z)?,
    };
    let name = kind
        .to_possible_value()
        .map(|v| v.get_name().to_owned())
        .unwrap_or_default();
    Ok(match cfg.format {
        Format::Text => format!("{value}\n"),
        Format::Csv => format!("kind,z,value\n{name},{z},{value}\n"),
        Format::Json => to_json(&json!({ "kind": name, "z": z, "value": value })),
    })
}

#[derive(Debug, Serialize)]
struct ThresholdRow {
    threshold: &'static str,
    b: f64,
    p0: f64,
}

fn cmd_thresholds(b: Option<f64>, cfg: &CliConfig) -> Result<String, Failure> {
    let rows = match b {
        Some(b) => vec![
            ThresholdRow {
                threshold: "dilution",
                b,
                p0: regime::threshold_dilution(b)?,
            },
            ThresholdRow {
                threshold: "condensation",
                b,
                p0: regime::threshold_condensation(b)?,
            },
        ],
        None => {
            let params = cfg.series_params()?;
            let onset = regime::condensation_onset(cfg.tolerance, &params)?;
            vec![
                ThresholdRow {
                    threshold: "dilution",
                    b: regime::DILUTE_B,
                    p0: regime::threshold_dilution(regime::DILUTE_B)?,
                },
                ThresholdRow {
                    threshold: "condensation",
                    b: regime::PAPER_CONDENSATION_B,
                    p0: regime::threshold_condensation(regime::PAPER_CONDENSATION_B)?,
                },
                ThresholdRow {
                    threshold: "selfconsistent_condensation",
                    b: onset.b,
                    p0: regime::threshold_condensation(onset.b)?,
                },
            ]
        }
    };
    Ok(match cfg.format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut s = String::from("threshold,b,p0\n");
            for r in &rows {
                s.push_str(&format!("{},{},{}\n", r.threshold, r.b, r.p0));
            }
            s
        }
        Format::Text => {
            let mut s = format!("{:<28} {:>12} {:>12}\n", "threshold", "b", "p0");
            for r in &rows {
                s.push_str(&format!(
                    "{:<28} {:>12.6} {:>12.4}\n",
                    r.threshold, r.b, r.p0
                ));
            }
            s
        }
    })
}

fn report_text(r: &RegimeReport) -> String {
    let label = |l: Option<regime::RegimeLabel>| l.map(|l| l.as_str()).unwrap_or("-");
    let flags: Vec<&str> = r.flags.iter().map(|f| f.as_str()).collect();
    format!(
        "p0: {}\nK: {}\npaper: {}\nself-consistent: {}\nbranch: {}\nz: {}\nz': {}\nb: {}\nflags: {}\n",
        r.p0,
        r.coupling.value(),
        label(r.paper_label),
        label(r.selfconsistent_label),
        r.branch.map(|b| b.as_str()).unwrap_or("-"),
        num(r.fugacity.map(|f| f.z)),
        num(r.fugacity.map(|f| f.z_prime)),
        num(r.fugacity.map(|f| f.b)),
        if flags.is_empty() { "-".into() } else { flags.join(", ") },
    )
}

fn sweep_spec(p_min: f64, p_max: f64, steps: usize, mode: SweepMode, cfg: &CliConfig) -> SweepSpec {
    SweepSpec {
        p_min,
        p_max,
        steps,
        mode,
        series: cfg.series,
        window: cfg.window,
        tol: cfg.tolerance,
        params: cfg.series_params().unwrap_or_default(),
    }
}

fn cmd_classify(p0: f64, mode: SweepMode, cfg: &CliConfig) -> Result<String, Failure> {
    let report = sweep_spec(p0, p0, 1, mode, cfg).classify(p0)?;
    Ok(match cfg.format {
        Format::Text => report_text(&report),
        Format::Json => to_json(&report),
        Format::Csv => sweep_report::emit_csv(&[SweepRow::from(report)]),
    })
}

fn rows_text(rows: &[SweepRow]) -> String {
    let label = |l: Option<regime::RegimeLabel>| l.map(|l| l.as_str()).unwrap_or("-");
    let mut s = format!(
        "{:>10} {:>9} {:<19} {:<19} {:<6} {:>9} {:>9} {:>9}  flags\n",
        "p0", "K", "paper", "self", "branch", "z", "z'", "b"
    );
    let fmt = |x: Option<f64>| x.map(|v| format!("{v:.6}")).unwrap_or_else(|| "-".into());
    for r in rows {
        let flags: Vec<&str> = r.flags.iter().map(|f| f.as_str()).collect();
        s.push_str(&format!(
            "{:>10.4} {:>9.5} {:<19} {:<19} {:<6} {:>9} {:>9} {:>9}  {}\n",
            r.p0,
            r.k,
            label(r.paper_label),
            label(r.selfconsistent_label),
            r.branch.map(|b| b.as_str()).unwrap_or("-"),
            fmt(r.z),
            fmt(r.z_prime),
            fmt(r.b),
            flags.join("|"),
        ));
    }
    s
}

fn cmd_sweep(
    p_min: f64,
    p_max: f64,
    steps: usize,
    mode: SweepMode,
    cfg: &CliConfig,
) -> Result<String, Failure> {
    let spec = sweep_spec(p_min, p_max, steps, mode, cfg);
    let rows = sweep_report::run_sweep(&spec)?;
    Ok(match cfg.format {
        Format::Csv => sweep_report::emit_csv(&rows),
        Format::Json => {
            let mut s = sweep_report::emit_json(&rows);
            s.push('\n');
            s
        }
        Format::Text => rows_text(&rows),
    })
}

fn cmd_occupation(
    z: f64,
    min: f64,
    max: f64,
    steps: usize,
    branch: OccupationBranch,
    cfg: &CliConfig,
) -> Result<String, Failure> {
    let curve = sweep_report::occupation_curve(z, min, max, steps, branch)?;
    Ok(match cfg.format {
        Format::Json => to_json(
            &curve
                .iter()
                .map(|&(be, n)| json!({ "beta_eps": be, "occupation": n }))
                .collect::<Vec<_>>(),
        ),
        Format::Csv => {
            let mut s = String::from("beta_eps,occupation\n");
            for (be, n) in &curve {
                s.push_str(&format!("{be},{n}\n"));
            }
            s
        }
        Format::Text => curve
            .iter()
            .map(|(be, n)| format!("{be:>12.6} {n:>16.9}\n"))
            .collect(),
    })
}

fn dispatch(cli: &Cli) -> Result<String, Failure> {
    let cfg = &cli.config;
    cfg.validate()?;
    match cli.command {
        Command::Polylog { kind, z } => cmd_polylog(kind, z, cfg),
        Command::Thresholds { b } => cmd_thresholds(b, cfg),
        Command::Classify { p0, mode } => cmd_classify(p0, mode, cfg),
        Command::Sweep {
            p_min,
            p_max,
            steps,
            mode,
        } => cmd_sweep(p_min, p_max, steps, mode, cfg),
        Command::Occupation {
            z,
            beta_eps_min,
            beta_eps_max,
            steps,
            branch,
        } => cmd_occupation(z, beta_eps_min, beta_eps_max, steps, branch, cfg),
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(rendered.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(rendered.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };

    let result = dispatch(&cli).and_then(|text| match &cli.config.out {
        Some(path) => std::fs::write(path, text.as_bytes())
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(format!("cannot write to stdout: {e}"))),
    });

    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "qgas: {}", f.message());
            f.exit_code()
        }
    }
}
