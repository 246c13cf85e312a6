//! Batch front end for the secular-equation analyses: grid evaluation,
//! subsonic root search, upper half-plane zero scans, invariant
//! verification and impedance existence maps.

// `!(x > 0.0)` guards reject NaN where `x <= 0.0` would let it through
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{EXIT_NUMERIC, EXIT_VALIDATION};
use config::{ConfigError, RunConfig};

#[derive(Parser)]
#[command(
    name = "rayscan",
    about = "Secular-equation analysis for Rayleigh-type surface waves under \
             impedance boundary conditions",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate |R| over a real interval or complex rectangle, as CSV.
    Eval(CommonArgs),
    /// Locate the subsonic surface-wave root for impedance parameters.
    Root(CommonArgs),
    /// Count secular-function zeros over an upper half-plane rectangle.
    /// Exits 3 when zeros are present.
    Scan(CommonArgs),
    /// Run the invariant-verification battery for the configured boundary.
    /// Exits 4 when an applicable check fails.
    Verify(CommonArgs),
    /// Sweep (Z1, Z2) and record where the subsonic root exists, as CSV.
    #[command(name = "existence-map")]
    ExistenceMap(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Override a config field: --set scan.im_floor=1e-3 (repeatable).
    #[arg(long = "set", value_name = "PATH=VALUE")]
    set: Vec<String>,
    /// Override output.path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for grid and tile parallelism (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Print the fully resolved configuration and exit.
    #[arg(long)]
    dump_config: bool,
}

fn load(args: &CommonArgs) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(&args.config).map_err(|e| ConfigError {
        field: "--config".into(),
        message: format!("{}: {e}", args.config.display()),
    })?;
    let mut cfg = config::load_config(&text, &args.set)?;
    if let Some(out) = &args.out {
        cfg.output.path = Some(out.display().to_string());
    }
    Ok(cfg)
}

fn run(command: &Command) -> anyhow::Result<i32> {
    let args = match command {
        Command::Eval(a)
        | Command::Root(a)
        | Command::Scan(a)
        | Command::Verify(a)
        | Command::ExistenceMap(a) => a,
    };
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| anyhow::anyhow!("thread pool: {e}"))?;
    }
    let mut cfg = load(args)?;
    let mat = cfg.material.build()?;
    let bp = cfg.boundary.build()?;

    // resolve defaults for the section this command uses, so the echoed
    // config is self-describing
    match command {
        Command::Root(_) => {
            cfg.root.get_or_insert_with(Default::default);
        }
        Command::Scan(_) => {
            let spec = cfg.scan.get_or_insert_with(Default::default);
            spec.resolve(&mat);
        }
        Command::Verify(_) => {
            cfg.verify.get_or_insert_with(Default::default);
        }
        Command::ExistenceMap(_) => {
            let spec = cfg.existence_map.get_or_insert_with(Default::default);
            spec.resolve(&mat);
        }
        Command::Eval(_) => {}
    }

    if args.dump_config {
        let mut text = serde_json::to_string_pretty(&cfg)?;
        text.push('\n');
        print!("{text}");
        return Ok(commands::EXIT_OK);
    }

    match command {
        Command::Eval(_) => commands::cmd_eval(&cfg, &mat, &bp),
        Command::Root(_) => commands::cmd_root(&cfg, &mat, &bp),
        Command::Scan(_) => commands::cmd_scan(&cfg, &mat, &bp),
        Command::Verify(_) => commands::cmd_verify(&cfg, &mat, &bp),
        Command::ExistenceMap(_) => commands::cmd_existence_map(&cfg, &mat, &bp),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            // configuration problems exit 2; anything else is a numeric or
            // I/O failure
            let code = if e.downcast_ref::<ConfigError>().is_some()
                || e.downcast_ref::<rayscan_core::Error>().is_some_and(|k| {
                    matches!(
                        k,
                        rayscan_core::Error::InvalidArgument(_)
                            | rayscan_core::Error::InvalidMaterial(_)
                            | rayscan_core::Error::RegimeMismatch { .. }
                    )
                }) {
                EXIT_VALIDATION
            } else {
                EXIT_NUMERIC
            };
            eprintln!("error: {e}");
            for cause in e.chain().skip(1) {
                eprintln!("  caused by: {cause}");
            }
            ExitCode::from(code as u8)
        }
    }
}
