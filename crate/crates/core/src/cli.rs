//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 for configuration errors, 3 for numerical or
//! I/O failures.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::ConfigFile;
use crate::error::Error;
use crate::output::{write_comparison, write_outputs, ComparisonSummary};
use crate::simulation::{compare, run_with, Preset, Scenario, SolverChoice};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "lwr-merge", version, about = "LWR traffic on a 2-to-1 merge")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a scenario described by a JSON config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's output_dir.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one of the built-in experiments.
    Preset {
        #[arg(value_enum)]
        name: PresetArg,
        #[command(flatten)]
        overrides: Overrides,
        #[arg(long, value_enum)]
        solver: Option<SolverArg>,
        /// Print the equivalent config file instead of running.
        #[arg(long)]
        dump_config: bool,
    },
    /// Run both solvers on the same input and report their differences.
    Compare {
        #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
        config: Option<PathBuf>,
        #[arg(long, value_enum)]
        preset: Option<PresetArg>,
        #[command(flatten)]
        overrides: Overrides,
    },
}

#[derive(Debug, Args)]
struct Overrides {
    #[arg(long)]
    cells: Option<usize>,
    #[arg(long)]
    cfl: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PresetArg {
    Exp1,
    Exp2,
    Exp3,
}

impl From<PresetArg> for Preset {
    fn from(p: PresetArg) -> Self {
        match p {
            PresetArg::Exp1 => Preset::Exp1,
            PresetArg::Exp2 => Preset::Exp2,
            PresetArg::Exp3 => Preset::Exp3,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SolverArg {
    Relaxation,
    Classical,
    Both,
}

impl From<SolverArg> for SolverChoice {
    fn from(s: SolverArg) -> Self {
        match s {
            SolverArg::Relaxation => SolverChoice::Relaxation,
            SolverArg::Classical => SolverChoice::Classical,
            SolverArg::Both => SolverChoice::Both,
        }
    }
}

#[derive(Debug)]
enum Failure {
    Config(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_config() {
            Failure::Config(e.to_string())
        } else {
            Failure::Numerical(e.to_string())
        }
    }
}

fn io_failure(dir: &Path) -> impl FnOnce(std::io::Error) -> Failure + '_ {
    move |e| Failure::Numerical(format!("writing {}: {e}", dir.display()))
}

/// Parses `argv` (including the program name) and runs the command.
pub fn main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => EXIT_OK,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            EXIT_CONFIG
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            EXIT_NUMERICAL
        }
    }
}

fn apply(overrides: &Overrides, scenario: &mut Scenario) {
    if let Some(m) = overrides.cells {
        scenario.cells = m;
    }
    if let Some(c) = overrides.cfl {
        scenario.cfl = c;
    }
    if let Some(l) = overrides.lambda {
        scenario.lambda = Some(l);
    }
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Run { config, out } => {
            let cfg = ConfigFile::load(&config)?;
            let scenario = cfg.to_scenario()?;
            let dir = out.or(cfg.output_dir).unwrap_or_else(|| PathBuf::from("out"));
            execute(&scenario, &dir)
        }
        Command::Preset {
            name,
            overrides,
            solver,
            dump_config,
        } => {
            let preset = Preset::from(name);
            let mut scenario = preset.scenario(solver.map(SolverChoice::from).unwrap_or(SolverChoice::Relaxation));
            apply(&overrides, &mut scenario);
            if dump_config {
                let cfg = ConfigFile::from_scenario(&scenario, overrides.out.clone());
                println!("{}", cfg.to_json());
                return Ok(());
            }
            scenario.validate()?;
            let dir = overrides
                .out
                .unwrap_or_else(|| PathBuf::from("out").join(preset.name()));
            execute(&scenario, &dir)
        }
        Command::Compare {
            config,
            preset,
            overrides,
        } => {
            let (mut scenario, default_dir) = match (config, preset) {
                (Some(path), _) => {
                    let cfg = ConfigFile::load(&path)?;
                    let dir = cfg.output_dir.clone();
                    (cfg.to_scenario()?, dir)
                }
                (None, Some(p)) => {
                    let p = Preset::from(p);
                    (p.scenario(SolverChoice::Both), Some(PathBuf::from("out").join(p.name())))
                }
                (None, None) => return Err(Failure::Config("compare needs --config or --preset".into())),
            };
            apply(&overrides, &mut scenario);
            scenario.solver = SolverChoice::Both;
            let dir = overrides
                .out
                .or(default_dir)
                .unwrap_or_else(|| PathBuf::from("out"));
            execute(&scenario, &dir)
        }
    }
}

fn execute(scenario: &Scenario, dir: &Path) -> Result<(), Failure> {
    match scenario.solver {
        SolverChoice::Both => {
            let cmp = compare(scenario)?;
            write_comparison(&cmp, dir).map_err(io_failure(dir))?;
            let summary = ComparisonSummary::new(&cmp);
            let mut stdout = std::io::stdout().lock();
            for d in &summary.differences {
                let _ = writeln!(
                    stdout,
                    "road {}: relative L1 difference {:.3e}, relative Linf difference {:.3e}",
                    d.road, d.rel_l1, d.rel_linf
                );
            }
        }
        single => {
            let kind = single.kinds()[0];
            let result = run_with(scenario, kind)?;
            write_outputs(&result, dir).map_err(io_failure(dir))?;
            println!(
                "{kind}: {} steps to t = {}, mass defect {:.3e}, outputs in {}",
                result.steps(),
                result.final_time,
                result.mass.defect,
                dir.display()
            );
        }
    }
    Ok(())
}
