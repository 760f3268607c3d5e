use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gvf_core::math::Aabb;
use gvf_core::Vec2;

use gvf_cli::{commands, CliError};

#[derive(Parser)]
#[command(
    name = "gvf",
    about = "Guiding-vector-field path following: run scenarios, export fields, validate curves, check gains",
    after_help = "Exit codes: 0 ok, 1 check failed, 2 config parse error, \
                  3 config validation error, 4 runtime singularity, 5 io error.\n\
                  GVF_OUTPUT_ROOT re-roots relative output directories."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArg {
    /// Scenario config (TOML).
    #[arg(long)]
    config: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a scenario and write trajectory.csv, report.txt, report.csv.
    Run {
        #[command(flatten)]
        config: ConfigArg,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Sample the guidance field on a grid and write field.csv.
    Field {
        #[command(flatten)]
        config: ConfigArg,
        /// Region as minx,miny,maxx,maxy (default: the curve's band box).
        #[arg(long, value_parser = parse_bbox)]
        bbox: Option<Aabb>,
        /// Grid resolution as N or NXxNY.
        #[arg(long, default_value = "25", value_parser = parse_resolution)]
        resolution: (usize, usize),
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Check analytic derivatives against finite differences and sample the
    /// band for regularity.
    Validate {
        #[command(flatten)]
        config: ConfigArg,
    },
    /// Offline bank-constraint check of the gains over the band.
    Tune {
        #[command(flatten)]
        config: ConfigArg,
        /// Bank limit override (degrees); defaults to the scenario's.
        #[arg(long = "bank-limit-deg")]
        bank_limit_deg: Option<f64>,
        /// Band half-width c; defaults to the curve's c_star.
        #[arg(long)]
        band: Option<f64>,
        /// Worst-case wind speed (m/s); defaults to the scenario wind bound.
        #[arg(long = "wind-max")]
        wind_max: Option<f64>,
    },
}

fn parse_bbox(s: &str) -> Result<Aabb, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    if parts.len() != 4 {
        return Err("expected minx,miny,maxx,maxy".into());
    }
    Aabb::new(Vec2::new(parts[0], parts[1]), Vec2::new(parts[2], parts[3]))
        .map_err(|e| e.to_string())
}

fn parse_resolution(s: &str) -> Result<(usize, usize), String> {
    let parse = |p: &str| p.trim().parse::<usize>().map_err(|e| e.to_string());
    match s.split_once('x') {
        Some((nx, ny)) => Ok((parse(nx)?, parse(ny)?)),
        None => {
            let n = parse(s)?;
            Ok((n, n))
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config, out } => commands::cmd_run(&config.config, &out),
        Command::Field { config, bbox, resolution, out } => {
            commands::cmd_field(&config.config, bbox, resolution, &out)
        }
        Command::Validate { config } => commands::cmd_validate(&config.config),
        Command::Tune { config, bank_limit_deg, band, wind_max } => {
            commands::cmd_tune(&config.config, bank_limit_deg, band, wind_max)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
