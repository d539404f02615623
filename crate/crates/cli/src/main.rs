use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fracjet_cli::commands::{
    cmd_analyze, cmd_kernel, cmd_selftest, cmd_simulate, KernelConfig, SimulateConfig, EXIT_PARSE,
};

/// Constraint analysis, dynamics and path-integral kernels for singular
/// second-order Lagrangians.
#[derive(Parser)]
#[command(name = "fracjet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the constraint derivation; optionally write it as JSON.
    Analyze {
        model: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate the equations of motion and report the action.
    Simulate {
        model: PathBuf,
        /// `x1=0,v1=1,...` or 4n positional values (x.., v.., p.., pi..).
        #[arg(long, allow_hyphen_values = true)]
        init: String,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long, default_value_t = 1.0)]
        tend: f64,
        /// `zero`, `hold` or `constant:<value>`.
        #[arg(long, default_value = "zero")]
        gauge: String,
        /// Trajectory CSV destination.
        #[arg(long, default_value = "trajectory.csv")]
        csv: PathBuf,
    },
    /// Discretize the action along the classical path and evaluate the kernel.
    Kernel {
        model: PathBuf,
        /// Number of time slices; the oracle runs for at most 4.
        #[arg(long)]
        slices: usize,
        #[arg(long, default_value_t = 1.0)]
        tend: f64,
        /// Initial phase values; defaults to unit velocity on the first regular coordinate.
        #[arg(long, allow_hyphen_values = true)]
        init: Option<String>,
        /// Coordinates kept on the grid, e.g. `1,2`.
        #[arg(long, value_delimiter = ',')]
        coords: Option<Vec<u32>>,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
    },
    /// Run the built-in operator and Poisson-algebra checks.
    Selftest,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_PARSE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = match cli.command {
        Command::Analyze { model, out: json } => cmd_analyze(&model, json.as_deref(), &mut out),
        Command::Simulate {
            model,
            init,
            dt,
            tend,
            gauge,
            csv,
        } => cmd_simulate(
            &model,
            &SimulateConfig {
                init,
                dt,
                t_end: tend,
                gauge,
                csv: Some(csv),
            },
            &mut out,
        ),
        Command::Kernel {
            model,
            slices,
            tend,
            init,
            coords,
            dt,
            hbar,
        } => cmd_kernel(
            &model,
            &KernelConfig {
                slices,
                t_end: tend,
                init,
                coords,
                dt,
                hbar,
            },
            &mut out,
        ),
        Command::Selftest => cmd_selftest(&mut out),
    };
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
