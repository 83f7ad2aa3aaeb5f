use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context as _};
use clap::{Parser, Subcommand, ValueEnum};

use flowforms::forms::SampleGrid;
use flowforms::harness::{self, catalog, RunOptions};
use flowforms::report::Tolerances;
use flowforms::{fluid, Scenario};

#[derive(Parser)]
#[command(name = "flowforms", version, about = "Verify exterior-calculus identities of incompressible flows")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run identity checks on a scenario.
    Verify {
        /// Catalog name or scenario file.
        #[arg(long)]
        scenario: String,
        /// `all` or a comma-separated list of check groups.
        #[arg(long, default_value = "all")]
        checks: String,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Points per spatial axis.
        #[arg(long)]
        grid: Option<usize>,
        /// Residual tolerance for every symbolic check.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Print the symmetry hierarchy u₀, W_k, h_k, ξ_k.
    Hierarchy {
        #[arg(long)]
        scenario: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Midpoint-rule helicity ∫ v·curl v over the periodic box at t = 0.
    HelicityIntegral {
        #[arg(long)]
        scenario: String,
        #[arg(long, default_value_t = 64)]
        resolution: usize,
    },
    /// List or show the built-in scenarios.
    Catalog {
        #[command(subcommand)]
        action: Option<CatalogAction>,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Show { name: String },
}

/// Input errors exit with 2, failed checks with 1.
enum Outcome {
    Pass,
    Fail,
}

fn load(name: &str, grid: Option<usize>, tol: Option<f64>) -> anyhow::Result<Scenario> {
    let mut s = harness::load_scenario(name)?;
    if let Some(n) = grid {
        if n == 0 {
            bail!("--grid must be positive");
        }
        s.grid = SampleGrid::uniform(n);
    }
    if let Some(t) = tol {
        if !(t.is_finite() && t > 0.0) {
            bail!("--tol must be a positive number");
        }
        s.tol = Tolerances::uniform(t);
    }
    Ok(s)
}

fn run(cmd: Command) -> anyhow::Result<Outcome> {
    match cmd {
        Command::Verify { scenario, checks, depth, grid, tol, seed, out, format } => {
            let groups = harness::parse_selection(&checks)?;
            if depth == 0 {
                bail!("--depth must be at least 1");
            }
            let s = load(&scenario, grid, tol)?;
            let opts = RunOptions { groups, depth, seed, ..Default::default() };
            let report = harness::run_checks(&s, &opts);
            let body = match format {
                Format::Json => report.to_json() + "\n",
                Format::Text => report.to_text(),
            };
            match out {
                Some(path) => {
                    std::fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
                    print!("{}", report.to_text());
                }
                None => print!("{body}"),
            }
            Ok(if report.all_pass() { Outcome::Pass } else { Outcome::Fail })
        }
        Command::Hierarchy { scenario, depth } => {
            let s = load(&scenario, None, None)?;
            let hier = fluid::build_hierarchy(&s, depth)?;
            println!("s  = {:+}", hier.sign);
            println!("u0 = {}", hier.u0.simplify());
            for k in 1..=hier.depth() {
                println!("W{k} = {}", hier.w(k).simplify());
                println!("h{k} = {}", hier.h(k).simplify());
                println!("xi{k} = {}", hier.xi(k).simplify());
            }
            Ok(Outcome::Pass)
        }
        Command::HelicityIntegral { scenario, resolution } => {
            let s = load(&scenario, None, None)?;
            let value: f64 = fluid::helicity_integral(&s.v, resolution)?;
            let box_volume = std::f64::consts::TAU.powi(3);
            println!("I = {value:.12e}");
            println!("I/(2π)³ = {:.12}", value / box_volume);
            Ok(Outcome::Pass)
        }
        Command::Catalog { action } => {
            match action {
                None | Some(CatalogAction::List) => {
                    for name in catalog::names() {
                        println!("{name}");
                    }
                }
                Some(CatalogAction::Show { name }) => match catalog::source(&name) {
                    Some(src) => print!("{src}"),
                    None => bail!("no catalog scenario named '{name}'"),
                },
            }
            Ok(Outcome::Pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
