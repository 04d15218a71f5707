//! The `sideinfo` command.
//!
//! Exit status: 0 on success, 1 when an enforced check fails (artifacts are
//! still written), 2 for usage, configuration or parameter errors, 3 for IO
//! errors. Errors are reported on stderr as one JSON object.

use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::config::{Experiment, Format, RunConfig};
use crate::error::{CliError, Result};
use crate::experiments::run_to_dir;
use crate::output::csv_field;
use crate::presets::{self, Preset};

#[derive(Debug, Parser)]
#[command(
    name = "sideinfo",
    version,
    about = "Source coding with distortion side information"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rate-distortion curves of the four side-information scenarios.
    RdCurves(RunArgs),
    /// Encoder-only side information matches both on a group instance.
    CheckTheorem1(RunArgs),
    /// Decoder-only side information is useless on a separable instance.
    CheckTheorem3(RunArgs),
    /// Round trips of the polynomial curve-fit coder over GF(2^m).
    MdsDemo(RunArgs),
    /// Band-limited DFT interpolation quantizer on Gaussian blocks.
    DftDemo(RunArgs),
    /// Two-stage transform quantizer against the informed baseline.
    TwoStage(RunArgs),
    /// Closed-form and Monte-Carlo rate penalty per side-information law.
    RateGap(RunArgs),
    /// Rate penalty measured by the oracle on a quantized Gaussian source.
    PenaltyCheck(RunArgs),
    /// Lists the built-in runs.
    ListPresets(ListArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// TOML run configuration.
    #[arg(long, conflicts_with = "preset")]
    pub config: Option<PathBuf>,
    /// Built-in run (see `list-presets`); the default is the first preset
    /// of the subcommand.
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory, created if missing.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Worker threads.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct ListArgs {
    #[arg(long)]
    pub tag: Option<String>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

/// The configuration `args` asks for under subcommand `kind`, with the
/// flag overrides applied. Relative instance paths resolve against the
/// returned directory.
pub fn resolve(kind: &str, args: &RunArgs) -> Result<(RunConfig, PathBuf)> {
    let (mut config, base) = match (&args.config, &args.preset) {
        (Some(path), _) => {
            let base = path.parent().map_or_else(PathBuf::new, Path::to_path_buf);
            (RunConfig::load(path)?, base)
        }
        (None, Some(name)) => {
            let p =
                presets::find(name).ok_or_else(|| CliError::Config(format!("unknown preset `{name}`")))?;
            (p.config, PathBuf::new())
        }
        (None, None) => {
            let config = presets::default_for(kind).map_or_else(
                || RunConfig::new(0, Experiment::default_for(kind).expect("known kind")),
                |p| p.config,
            );
            (config, PathBuf::new())
        }
    };
    if config.experiment.kind() != kind {
        return Err(CliError::Config(format!(
            "configuration is a `{}` experiment, not `{kind}`",
            config.experiment.kind()
        )));
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(jobs) = args.jobs {
        config.jobs = Some(jobs);
    }
    if let Some(format) = args.format {
        config.format = format;
    }
    config.validate()?;
    Ok((config, base))
}

fn list(args: &ListArgs) -> String {
    let selected: Vec<Preset> = match &args.tag {
        Some(tag) => presets::with_tag(tag),
        None => presets::presets(),
    };
    match args.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&json!({ "presets": selected })).expect("json");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from("name,kind,tags,description\n");
            for p in &selected {
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    p.name,
                    p.kind,
                    p.tags.join(";"),
                    csv_field(p.description)
                ));
            }
            s
        }
    }
}

/// Runs the parsed command and returns what goes to stdout.
pub fn execute(cli: &Cli) -> Result<String> {
    let (kind, args) = match &cli.command {
        Command::ListPresets(a) => return Ok(list(a)),
        Command::RdCurves(a) => ("rd-curves", a),
        Command::CheckTheorem1(a) => ("check-theorem1", a),
        Command::CheckTheorem3(a) => ("check-theorem3", a),
        Command::MdsDemo(a) => ("mds-demo", a),
        Command::DftDemo(a) => ("dft-demo", a),
        Command::TwoStage(a) => ("two-stage", a),
        Command::RateGap(a) => ("rate-gap", a),
        Command::PenaltyCheck(a) => ("penalty-check", a),
    };
    let (config, base) = resolve(kind, args)?;
    let paths = run_to_dir(&config, &base, &args.out)?;
    Ok(paths.iter().map(|p| format!("{}\n", p.display())).collect())
}

/// Parses `args` (program name first), runs, and returns the exit status.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let report = json!({
                "error": "usage",
                "message": e.render().to_string().trim_end(),
                "exit_code": 2,
            });
            eprintln!("{report}");
            return 2;
        }
    };
    match execute(&cli) {
        Ok(out) => {
            let _ = std::io::stdout().write_all(out.as_bytes());
            0
        }
        Err(e) => {
            eprintln!("{}", e.report());
            e.exit_code()
        }
    }
}
