use std::path::PathBuf;

use clap::{Parser, Subcommand};

use dsw_mol::cli::{self, Mode, Overrides};
use dsw_mol::dsw::SolutionVariant;
use dsw_mol::kernel::KernelFamily;

/// Meshless RBF method-of-lines solver for the coupled
/// Drinfeld-Sokolov-Wilson system.
#[derive(Parser)]
#[command(name = "dsw-mol", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Flat key = value config file; command-line flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// RBF family: mq, imq or ga.
    #[arg(long, global = true)]
    kernel: Option<KernelFamily>,

    /// Kernel shape parameter.
    #[arg(long, global = true)]
    shape: Option<f64>,

    /// Wave speed c of the reference solution.
    #[arg(long, global = true)]
    wave_speed: Option<f64>,

    /// Wave number k of the reference solution.
    #[arg(long, global = true)]
    wave_number: Option<f64>,

    /// Left domain endpoint.
    #[arg(long, global = true)]
    domain_a: Option<f64>,

    /// Right domain endpoint.
    #[arg(long, global = true)]
    domain_b: Option<f64>,

    /// Uniform node spacing.
    #[arg(long, global = true)]
    h: Option<f64>,

    /// Time step.
    #[arg(long, global = true)]
    dt: Option<f64>,

    /// Final time.
    #[arg(long, global = true)]
    t_end: Option<f64>,

    /// Reference-solution constant: paper or corrected.
    #[arg(long, global = true)]
    variant: Option<SolutionVariant>,

    /// Output directory for CSV files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Relative pivot threshold of the linear solver.
    #[arg(long, global = true)]
    pivot_tol: Option<f64>,

    /// Comma-separated x locations for the error tables.
    #[arg(long, global = true, value_delimiter = ',')]
    sample_xs: Option<Vec<f64>>,

    /// Comma-separated snapshot times.
    #[arg(long, global = true, value_delimiter = ',')]
    sample_ts: Option<Vec<f64>>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one solve and write error tables, summary and profiles.
    Solve,
    /// Solve once per shape and write the error-vs-shape table.
    Sweep {
        /// Comma-separated shape parameters.
        #[arg(long, value_delimiter = ',')]
        shapes: Vec<f64>,
    },
    /// Refinement study over node spacing or time step.
    Converge {
        /// Comma-separated decreasing node spacings.
        #[arg(long, value_delimiter = ',')]
        h_list: Option<Vec<f64>>,
        /// Comma-separated decreasing time steps.
        #[arg(long, value_delimiter = ',')]
        dt_list: Option<Vec<f64>>,
    },
    /// Sample the reference-solution residuals over (x, t).
    Residual,
}

fn main() {
    let args = Cli::parse();

    let (mode, shapes, h_list, dt_list) = match &args.command {
        Command::Solve => (Mode::Solve, None, None, None),
        Command::Sweep { shapes } => (Mode::Sweep, Some(shapes.clone()), None, None),
        Command::Converge { h_list, dt_list } => {
            (Mode::Converge, None, h_list.clone(), dt_list.clone())
        }
        Command::Residual => (Mode::Residual, None, None, None),
    };

    let overrides = Overrides {
        kernel: args.kernel,
        shape: args.shape,
        wave_speed: args.wave_speed,
        wave_number: args.wave_number,
        domain_a: args.domain_a,
        domain_b: args.domain_b,
        spacing: args.h,
        dt: args.dt,
        t_end: args.t_end,
        sample_xs: args.sample_xs,
        sample_ts: args.sample_ts,
        variant: args.variant,
        pivot_tol: args.pivot_tol,
        shapes,
        h_list,
        dt_list,
        out_dir: args.out,
    };

    let result = cli::parse_config(mode, args.config.as_deref(), &overrides)
        .and_then(|cfg| cli::run(&cfg));
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
