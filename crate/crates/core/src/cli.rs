//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 input or data error. Results go
//! to standard output and diagnostics to standard error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bitext_map::{bounds, parse_points, BitextMap};
use crate::detector::{detect, Axis, DetectOptions, Method};
use crate::geometry::Threshold;
use crate::report;
use crate::simulator::{run_experiment, run_sweep, write_sweep_text, ExperimentConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "adomit",
    version,
    about = "Find omissions in translations from bitext maps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that a map file is a valid bitext map.
    Validate(MapArgs),
    /// List omitted segments, longest first.
    Detect(DetectArgs),
    /// Measure recall on simulated omissions.
    Evaluate(EvaluateArgs),
    /// Measure recall across several thresholds.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
struct MapArgs {
    /// Map file: one `X<TAB>Y` point per line.
    #[arg(long)]
    map: PathBuf,
    /// Length of the original text in characters.
    #[arg(long, required_unless_present = "fit_bounds")]
    width: Option<u64>,
    /// Length of the translation in characters.
    #[arg(long, required_unless_present = "fit_bounds")]
    height: Option<u64>,
    /// Take the text lengths from the map's largest offsets.
    #[arg(long, conflicts_with_all = ["width", "height"])]
    fit_bounds: bool,
    /// Add the corners (0, 0) and (width, height) when missing.
    #[arg(long)]
    add_corners: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AxisArg {
    Translation,
    Original,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Basic,
    Adomit,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Basic => Method::Basic,
            MethodArg::Adomit => Method::Adomit,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Records,
}

fn parse_threshold(s: &str) -> Result<f64, String> {
    let degrees: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    Threshold::from_degrees(degrees)
        .map(|t| t.degrees())
        .map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
struct DetectArgs {
    #[command(flatten)]
    map: MapArgs,
    /// Slope angle below which a segment counts as omitted.
    #[arg(long, default_value = "37", value_parser = parse_threshold)]
    threshold_degrees: f64,
    #[arg(long, value_enum, default_value = "adomit")]
    method: MethodArg,
    /// Which text to search for omissions.
    #[arg(long, value_enum, default_value = "translation")]
    axis: AxisArg,
    /// Drop segments shorter than this many characters.
    #[arg(long, default_value_t = 0)]
    min_length: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    /// Experiment config (TOML). Defaults apply to anything left out.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the config's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the config's threshold.
    #[arg(long, value_parser = parse_threshold)]
    threshold_degrees: Option<f64>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated thresholds in degrees.
    #[arg(long, required = true, num_args = 1.., value_delimiter = ',', value_parser = parse_threshold)]
    thresholds: Vec<f64>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

/// Parse `args` (program name first) and run the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Validate(args) => cmd_validate(&args, out),
        Command::Detect(args) => cmd_detect(&args, out),
        Command::Evaluate(args) => cmd_evaluate(&args, out),
        Command::Sweep(args) => cmd_sweep(&args, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_DATA
        }
    }
}

fn load_map(args: &MapArgs) -> Result<BitextMap> {
    let file =
        File::open(&args.map).with_context(|| format!("cannot read {}", args.map.display()))?;
    let parsed =
        parse_points(BufReader::new(file)).with_context(|| args.map.display().to_string())?;
    let (width, height) = if args.fit_bounds {
        bounds(parsed.iter().map(|p| p.point))
    } else {
        (
            args.width.expect("required by clap"),
            args.height.expect("required by clap"),
        )
    };
    let map = BitextMap::from_parsed(parsed, width, height)
        .with_context(|| args.map.display().to_string())?;
    Ok(if args.add_corners {
        map.with_corners()
    } else {
        map
    })
}

fn cmd_validate(args: &MapArgs, out: &mut dyn Write) -> Result<()> {
    let map = load_map(args)?;
    writeln!(
        out,
        "{}: ok, {} points, {} segments, {}x{} space",
        args.map.display(),
        map.len(),
        map.segments().len(),
        map.width(),
        map.height()
    )?;
    Ok(())
}

fn cmd_detect(args: &DetectArgs, out: &mut dyn Write) -> Result<()> {
    let map = load_map(&args.map)?;
    let threshold = Threshold::from_degrees(args.threshold_degrees)?;
    let axes: &[Axis] = match args.axis {
        AxisArg::Translation => &[Axis::Translation],
        AxisArg::Original => &[Axis::Original],
        AxisArg::Both => &[Axis::Translation, Axis::Original],
    };
    for &axis in axes {
        let options = DetectOptions {
            threshold,
            method: args.method.into(),
            axis,
            min_length: args.min_length,
        };
        let report = detect(&map, options)?;
        match args.format {
            Format::Text => report::write_text(out, &report)?,
            Format::Records => report::write_records(out, &report)?,
        }
    }
    Ok(())
}

fn load_config(path: Option<&Path>, seed: Option<u64>) -> Result<ExperimentConfig> {
    let mut config = match path {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            ExperimentConfig::from_toml(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = seed {
        config.seed = seed;
    }
    Ok(config)
}

fn cmd_evaluate(args: &EvaluateArgs, out: &mut dyn Write) -> Result<()> {
    let mut config = load_config(args.config.as_deref(), args.seed)?;
    if args.threshold_degrees.is_some() {
        config.threshold_degrees = args.threshold_degrees;
    }
    let result = run_experiment(&config)?;
    match args.format {
        Format::Text => result.write_text(out)?,
        Format::Records => result.write_records(out)?,
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> Result<()> {
    let config = load_config(args.config.as_deref(), args.seed)?;
    let results = run_sweep(&config, &args.thresholds)?;
    match args.format {
        Format::Text => write_sweep_text(out, &results)?,
        Format::Records => {
            for r in &results {
                r.write_records(out)?;
            }
        }
    }
    Ok(())
}
