use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use minklab::config::{parse_grid, Config};
use minklab::demos::{run_demo, TableFormat, DEMOS};
use minklab::error::{CliError, Result};
use minklab::suites::run_suite;

/// Verification suites and demos for Minkowski-space geometry.
#[derive(Parser)]
#[command(name = "minklab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and write its report.
    Run(RunArgs),
    /// Write demo data files.
    Demo(DemoArgs),
}

#[derive(Args)]
#[group(multiple = false)]
struct FormatFlags {
    /// JSON output (default for reports)
    #[arg(long)]
    json: bool,
    /// CSV output (default for demo tables)
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct RunArgs {
    /// core, isometry, kinematics, projective, simultaneity, lattice, rigid or all
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(
        ["core", "isometry", "kinematics", "projective", "simultaneity", "lattice", "rigid", "all"]))]
    suite: String,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// key = value file overriding tolerances, steps and sample counts
    #[arg(long)]
    config: Option<PathBuf>,
    /// Report path; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
    /// Lattice grid, e.g. 41x41 (overrides the config file)
    #[arg(long)]
    grid: Option<String>,
    #[command(flatten)]
    format: FormatFlags,
}

#[derive(Args)]
struct DemoArgs {
    /// rindler, rotating-disk, fig2, fl-slab or image-lines
    #[arg(value_parser = clap::builder::PossibleValuesParser::new(DEMOS))]
    name: String,
    /// Parameter as key=value; repeatable
    #[arg(long = "param", short = 'p', value_parser = parse_param)]
    params: Vec<(String, String)>,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Grid for the fig2 demo, same as --param grid=WxH
    #[arg(long)]
    grid: Option<String>,
    #[command(flatten)]
    format: FormatFlags,
}

fn parse_param(s: &str) -> std::result::Result<(String, String), String> {
    s.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .ok_or_else(|| format!("expected key=value, got {s:?}"))
}

/// Caps the global rayon pool from MINKLAB_THREADS.
fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("MINKLAB_THREADS") else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("MINKLAB_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn run(args: RunArgs) -> Result<bool> {
    let mut cfg = match &args.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    if let Some(g) = &args.grid {
        cfg.set("grid", g)?;
    }
    let report = run_suite(&args.suite, args.seed, &cfg)?;
    let text = if args.format.csv { report.to_csv()? } else { report.to_json() };
    match &args.out {
        Some(path) => std::fs::write(path, &text)
            .map_err(|source| CliError::Write { path: path.display().to_string(), source })?,
        None => print!("{text}"),
    }
    for c in report.failed() {
        eprintln!("FAILED {}: residual {:?}, tolerance {:e}. {}", c.name, c.residual, c.tolerance, c.note);
    }
    Ok(report.passed)
}

fn demo(args: DemoArgs) -> Result<()> {
    let mut params = args.params;
    if let Some(g) = args.grid {
        parse_grid(&g)?;
        params.push(("grid".into(), g));
    }
    let format = if args.format.json { TableFormat::Json } else { TableFormat::Csv };
    for path in run_demo(&args.name, &params, &args.out, format)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_threads().and_then(|()| match cli.command {
        Command::Run(a) => run(a),
        Command::Demo(a) => demo(a).map(|()| true),
    });
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("minklab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
