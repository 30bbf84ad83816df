use std::path::PathBuf;
use std::process::ExitCode;

use casimir_cli::config::{self, EngineChoice, GapName, OutputFormat, Task};
use casimir_cli::{parse_config, run, CliError, RunConfig};
use casimir_core::quadrature::QuadratureSpec;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "casimir", version, about = "Casimir forces and stresses in medium-filled planar cavities")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Args)]
struct Overrides {
    /// Relative quadrature tolerance.
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    /// Absolute quadrature tolerance (Pa).
    #[arg(long, global = true)]
    abs_tol: Option<f64>,
    /// Node budget per quadrature axis.
    #[arg(long, global = true)]
    max_nodes: Option<usize>,
    /// Output file; a `.json` extension selects JSON output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Lorentz,
    Minkowski,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum GapArg {
    Gap1,
    Gap3,
}

#[derive(Subcommand)]
enum Command {
    /// Net force on the plate.
    Force {
        config: PathBuf,
        #[arg(long, value_enum)]
        engine: Option<EngineArg>,
    },
    /// Lorentz stress at interior points of one gap.
    StressProfile {
        config: PathBuf,
        #[arg(long, value_enum)]
        gap: Option<GapArg>,
        #[arg(long)]
        points: Option<usize>,
    },
    /// Lorentz and Minkowski forces and their ratio.
    Ratio { config: PathBuf },
    /// Ideal-mirror closed forms for the static medium.
    ClosedForm { config: PathBuf },
    /// Mode-sum factor table.
    Oracle { config: PathBuf },
    /// Built-in validation bundle.
    Validate { config: Option<PathBuf> },
    /// Force over the values of the config's sweep block.
    Sweep { config: PathBuf },
    /// Whatever task the config names.
    Run { config: PathBuf },
}

fn load(path: &PathBuf) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

/// Replaces the task, dropping a sweep block that only the sweep task uses.
fn with_task(mut cfg: RunConfig, task: Task) -> Result<RunConfig, CliError> {
    if task == Task::Sweep && cfg.sweep.is_none() {
        return Err(CliError::Parse {
            path: "sweep".into(),
            message: "task sweep requires a sweep block".into(),
        });
    }
    if task != Task::Sweep {
        cfg.sweep = None;
    }
    cfg.task = task;
    Ok(cfg)
}

fn apply(cfg: &mut RunConfig, o: &Overrides) -> Result<(), CliError> {
    let q = cfg.quadrature;
    cfg.quadrature = QuadratureSpec::new(
        o.rel_tol.unwrap_or(q.rel_tol()),
        o.abs_tol.unwrap_or(q.abs_tol()),
        o.max_nodes.unwrap_or(q.max_nodes_per_axis()),
        q.mapping(),
    )
    .map_err(|e| CliError::Parse {
        path: "quadrature".into(),
        message: e.to_string(),
    })?;
    if let Some(p) = &o.output {
        if p.extension().is_some_and(|e| e == "json") {
            cfg.output.format = OutputFormat::Json;
        }
        cfg.output.path = Some(p.display().to_string());
    }
    Ok(())
}

fn build(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.command {
        Command::Force { config, engine } => {
            let mut c = with_task(load(config)?, Task::Force)?;
            if let Some(e) = engine {
                c.engine = match e {
                    EngineArg::Lorentz => EngineChoice::Lorentz,
                    EngineArg::Minkowski => EngineChoice::Minkowski,
                    EngineArg::Both => EngineChoice::Both,
                };
            }
            c
        }
        Command::StressProfile { config, gap, points } => {
            let c = load(config)?;
            let (g0, p0) = match c.task {
                Task::StressProfile { gap, points } => (gap, points),
                _ => (GapName::Gap3, 9),
            };
            let gap = match gap {
                Some(GapArg::Gap1) => GapName::Gap1,
                Some(GapArg::Gap3) => GapName::Gap3,
                None => g0,
            };
            let points = points.unwrap_or(p0);
            if points < 2 {
                return Err(CliError::Parse {
                    path: "--points".into(),
                    message: "a profile needs at least 2 points".into(),
                });
            }
            with_task(c, Task::StressProfile { gap, points })?
        }
        Command::Ratio { config } => with_task(load(config)?, Task::Ratio)?,
        Command::ClosedForm { config } => with_task(load(config)?, Task::ClosedForm)?,
        Command::Oracle { config } => {
            let c = load(config)?;
            let task = match c.task {
                Task::Oracle { .. } => c.task.clone(),
                _ => Task::Oracle { media: None },
            };
            with_task(c, task)?
        }
        Command::Validate { config } => {
            let c = match config {
                Some(p) => load(p)?,
                None => config::vacuum_mirror_config(),
            };
            with_task(c, Task::Validate)?
        }
        Command::Sweep { config } => with_task(load(config)?, Task::Sweep)?,
        Command::Run { config } => load(config)?,
    };
    apply(&mut cfg, &cli.overrides)?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match build(&cli).and_then(|cfg| run(&cfg)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("casimir: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
