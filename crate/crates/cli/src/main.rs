//! `beaconrate` — analyze beacon captures, emulate normal-mode card
//! filters, reproduce the standard test scenarios with the seeded
//! simulator, and merge per-mode reports side by side.
//!
//! Exit codes: 0 success, 1 usage error, 2 parse/IO error, 3 no data.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use beaconrate::metrics::CaptureMode;

#[derive(Parser)]
#[command(name = "beaconrate", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

fn parse_mode(s: &str) -> Result<CaptureMode, String> {
    s.parse()
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a capture: per-AP rate, miss-rate, availability and interval histograms
    Analyze(AnalyzeArgs),
    /// Emulate normal-mode card filters on a capture and rewrite the surviving beacons
    Filter(FilterArgs),
    /// Run a seeded scenario simulation: session pcaps, ground truth and a report
    Simulate(SimulateArgs),
    /// Merge a normal-mode report with a monitor-mode report side by side
    Compare(CompareArgs),
}

#[derive(clap::Args)]
struct AnalyzeArgs {
    /// Input capture: classic pcap, radiotap or plain 802.11 link type
    pcap: PathBuf,
    /// Capture mode the session was recorded in (monitor | normal)
    #[arg(long, value_parser = parse_mode)]
    mode: CaptureMode,
    /// Configured session length in seconds (trailing silence counts)
    #[arg(long)]
    duration_s: f64,
    /// Availability window in seconds
    #[arg(long, default_value_t = 1.0)]
    window_s: f64,
    /// Interval histogram bin width in milliseconds
    #[arg(long, default_value_t = 100.0)]
    bin_width_ms: f64,
    /// Report and histogram file format
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Scenario label for the report rows (default: pcap file stem)
    #[arg(long)]
    scenario: Option<String>,
}

#[derive(clap::Args)]
struct FilterArgs {
    /// Input capture (radiotap link type)
    pcap: PathBuf,
    /// Keep only beacons of this SSID
    #[arg(long)]
    ssid: Option<String>,
    /// Keep only beacons on this 2.4 GHz channel (1–11)
    #[arg(long)]
    channel: Option<u8>,
    /// Reporting cadence in time units (1024 µs each); 100 keeps a clean
    /// nominal stream intact, 1000 emulates the normal-mode cadence
    #[arg(long, default_value_t = 100)]
    interval_tu: u32,
    /// Output pcap path
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args)]
struct SimulateArgs {
    /// Scenario preset, e.g. "traffic,monitor" or "cpu-80,normal,ralink"
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    /// Scenario config file (TOML naming every scenario field)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed override
    #[arg(long)]
    seed: Option<u64>,
    /// Session count override
    #[arg(long)]
    sessions: Option<u32>,
    /// Report format
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(clap::Args)]
struct CompareArgs {
    /// Report file (CSV or JSON) from the normal-mode runs
    normal_report: PathBuf,
    /// Report file (CSV or JSON) from the monitor-mode runs
    monitor_report: PathBuf,
    /// Merged table format
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse(String),
    NoData(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse(_) => 2,
            CliError::NoData(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Parse(msg) | CliError::NoData(msg) => {
                f.write_str(msg)
            }
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Parse(err.to_string())
    }
}

impl From<beaconrate::pcap::PcapError> for CliError {
    fn from(err: beaconrate::pcap::PcapError) -> Self {
        CliError::Parse(err.to_string())
    }
}

impl From<beaconrate::metrics::MetricsError> for CliError {
    fn from(err: beaconrate::metrics::MetricsError) -> Self {
        CliError::Parse(err.to_string())
    }
}

impl From<beaconrate::sim::SimError> for CliError {
    fn from(err: beaconrate::sim::SimError) -> Self {
        match err {
            beaconrate::sim::SimError::UnknownPreset(_) => CliError::Usage(format!(
                "{err}; valid presets: {}",
                beaconrate::sim::preset_names().join(" ")
            )),
            other => CliError::Parse(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help/--version arrive here too and are not failures
            let code = match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Analyze(args) => commands::analyze::run(args),
        Command::Filter(args) => commands::filter::run(args),
        Command::Simulate(args) => commands::simulate::run(args),
        Command::Compare(args) => commands::compare::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
