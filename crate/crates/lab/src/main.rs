use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use jumpspace_lab::{execute, ExperimentConfig, ExperimentKind};

#[derive(Parser, Debug)]
#[command(name = "jumpspace", version, about = "Exact experiments on the jump-level product space")]
struct Cli {
    /// Flat key-value TOML config; flags given on the command line win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write the merged config to this path before running.
    #[arg(long, global = true)]
    save_config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// d_p, d_inf and the 3 d_inf comparison for --base/--height and --other.
    Distance(ExperimentConfig),
    /// Ball decomposition and exact measure.
    Ball(ExperimentConfig),
    /// Exact ratio mu(B(x,4r))/mu(B(x,r)) at r = 2^-(n+2) per level n.
    Nondoubling(ExperimentConfig),
    /// Three-rectangle cover; without --radius the largest admissible 2^-j is used.
    Cover(ExperimentConfig),
    /// Approximate-differentiability defect of a field.
    Approxdiff(ExperimentConfig),
    /// Porosity witnesses of a set at a point.
    Porosity(ExperimentConfig),
    /// Certified lower bound for the measure porosity gamma.
    Gamma(ExperimentConfig),
    /// Chart uniqueness constant of a block of increments.
    Uniqueness(ExperimentConfig),
    /// Library against enumerating oracles at depth <= 5.
    Selftest(ExperimentConfig),
    /// Runs the experiment named by the config's `experiment` key.
    Run(ExperimentConfig),
}

impl Command {
    fn split(self) -> (Option<ExperimentKind>, ExperimentConfig) {
        match self {
            Self::Distance(c) => (Some(ExperimentKind::Distance), c),
            Self::Ball(c) => (Some(ExperimentKind::Ball), c),
            Self::Nondoubling(c) => (Some(ExperimentKind::Nondoubling), c),
            Self::Cover(c) => (Some(ExperimentKind::Cover), c),
            Self::Approxdiff(c) => (Some(ExperimentKind::Approxdiff), c),
            Self::Porosity(c) => (Some(ExperimentKind::Porosity), c),
            Self::Gamma(c) => (Some(ExperimentKind::Gamma), c),
            Self::Uniqueness(c) => (Some(ExperimentKind::Uniqueness), c),
            Self::Selftest(c) => (Some(ExperimentKind::Selftest), c),
            Self::Run(c) => (None, c),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, flags) = cli.command.split();
    let file = match &cli.config {
        Some(path) => match ExperimentConfig::load(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
        },
        None => ExperimentConfig::default(),
    };
    if let (Some(k), Some(f)) = (kind, file.experiment) {
        if k != f {
            eprintln!("error: config is for `{f}` but the subcommand is `{k}`");
            return ExitCode::from(2);
        }
    }
    let mut cfg = file.overlay(flags);
    let Some(kind) = kind.or(cfg.experiment) else {
        eprintln!("error: no experiment kind: use a subcommand or set `experiment` in the config");
        return ExitCode::from(2);
    };
    cfg.experiment = Some(kind);
    if let Some(path) = &cli.save_config {
        if let Err(e) = cfg.save(path) {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    }
    let code = execute(kind, &cfg, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    ExitCode::from(code)
}
