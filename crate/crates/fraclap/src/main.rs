use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fraclap::config::{ContourName, ProblemConfig};
use fraclap::examples::{self, ExampleName, Overrides};
use fraclap::exec::RayonExecutor;
use fraclap::regions::{write_contour_dump, write_region_curves};
use fraclap::run::{run_problem, x_grid};
use fraclap::Error;
use fraclap_core::solver::split_windows;

/// Exit status of a run that finished but did not meet every certificate.
const NOT_CERTIFIED: u8 = 2;

#[derive(Parser)]
#[command(name = "fraclap", version, about = "Contour-integral solver for fractional Kelvin-Voigt beams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the problem described by a TOML file.
    Solve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run one of the built-in problems.
    Example {
        name: ExampleName,
        #[arg(long)]
        nu: Option<f64>,
        #[arg(long)]
        omega: Option<f64>,
        #[arg(long)]
        accuracy: Option<f64>,
        #[arg(long, value_enum)]
        contour: Option<ContourName>,
        /// Fixed node half-count (the reference count for `convergence`).
        #[arg(long = "N")]
        nodes: Option<usize>,
        #[arg(long)]
        t0: Option<f64>,
        #[arg(long)]
        t1: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        x_points: Option<usize>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Boundary curves of the uncertified region for eps in {0, 1, 5, 10}.
    Curves {
        #[arg(long)]
        nu: f64,
        #[arg(long = "M")]
        m: f64,
        #[arg(long, default_value = "regions.csv")]
        out: PathBuf,
    },
    /// Nodes and weights of the contour for the first time window.
    ContourDump {
        #[arg(long, conflicts_with = "example")]
        config: Option<PathBuf>,
        #[arg(long)]
        example: Option<ExampleName>,
        #[arg(long = "N", default_value_t = 64)]
        nodes: usize,
        #[arg(long, default_value = "contour.csv")]
        out: PathBuf,
    },
}

fn load(path: &Path) -> Result<ProblemConfig, Error> {
    ProblemConfig::from_toml(&std::fs::read_to_string(path)?)
}

fn example_config(name: ExampleName) -> ProblemConfig {
    let o = Overrides::default();
    match name {
        ExampleName::Example1 => examples::example1_config(5.0, &o),
        ExampleName::Example1Free => examples::example1_free_config(examples::EXAMPLE1_NU, &o),
        ExampleName::Example2 => examples::example2_config(0.5, &o),
        ExampleName::Example3 => examples::example2_config(1.2, &o),
        ExampleName::Convergence => examples::convergence_config(&o),
    }
}

fn certified_status(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(NOT_CERTIFIED)
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let exec = RayonExecutor::from_env();
    match cli.command {
        Command::Solve { config, out } => {
            let cfg = load(&config)?;
            let prob = cfg.build()?;
            let files = (cfg.output.solution.as_str(), cfg.output.energy.as_str());
            let (report, _, _) = run_problem("solve", &prob, &cfg.to_toml(), &cfg.times(), &x_grid(cfg.output.x_points), &out, files, &exec)?;
            println!("{}", report.line());
            Ok(certified_status(report.certificates_met))
        }
        Command::Example { name, nu, omega, accuracy, contour, nodes, t0, t1, samples, x_points, out } => {
            let o = Overrides { nu, omega, accuracy, contour, nodes, t0, t1, samples, x_points };
            let outcome = examples::run_example(name, &o, &out, &exec)?;
            for n in &outcome.notes {
                println!("{n}");
            }
            for r in &outcome.reports {
                println!("{}", r.line());
            }
            Ok(certified_status(outcome.certified()))
        }
        Command::Curves { nu, m, out } => {
            write_region_curves(&out, nu, m)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::ContourDump { config, example, nodes, out } => {
            let cfg = match (config, example) {
                (Some(p), _) => load(&p)?,
                (None, Some(name)) => example_config(name),
                (None, None) => return Err(Error::Config("contour-dump needs --config or --example".into())),
            };
            let prob = cfg.build()?;
            let win = split_windows(prob.window.t0, prob.window.t1)?[0];
            write_contour_dump(&out, &prob, win, nodes, &cfg.to_toml())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
