use clap::Parser;
use std::path::PathBuf;

/// Minimax and minimal-L1 Chebyshev polynomials on unions of intervals,
/// with certificates, plus logarithmic-capacity estimates.
#[derive(Parser)]
#[command(name = "chebk", version, about)]
struct Cli {
    /// Problem document (or a result document for the sample task).
    spec: PathBuf,

    /// Override the task named in the problem document
    /// (cheb1, cheb1-restricted, cheb2, capacity, sample).
    #[arg(long)]
    task: Option<String>,

    /// Result document path (default: replace the input extension
    /// with .result.txt).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Write a sample grid with this many points per interval.
    #[arg(long)]
    samples: Option<usize>,

    /// Escalate the moment degree until delta falls below this target.
    #[arg(long, value_name = "DELTA")]
    delta_target: Option<f64>,

    /// Moment truncation degree for cheb2 (or the escalation start).
    #[arg(long)]
    d: Option<usize>,

    /// Interior-point tolerance.
    #[arg(long)]
    tol: Option<f64>,

    /// Interior-point iteration cap.
    #[arg(long)]
    max_iter: Option<usize>,

    /// Run all post-hoc checks; exit nonzero on violation.
    #[arg(long)]
    verify: bool,
}

fn main() {
    let cli = Cli::parse();
    let flags = chebk_cli::RunFlags {
        task: cli.task,
        out: cli.out,
        samples: cli.samples,
        delta_target: cli.delta_target,
        d: cli.d,
        tol: cli.tol,
        max_iter: cli.max_iter,
        verify: cli.verify,
    };
    std::process::exit(chebk_cli::run_file(&cli.spec, &flags));
}
