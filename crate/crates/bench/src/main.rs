use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wml_bench::config::{ExperimentConfig, ModeName, OrderingName};
use wml_bench::error::{BenchError, Result};
use wml_bench::run::{simulate, sweep, write_json, write_sweep_csv};
use wml_bench::tomography::{compare_tomography, write_tomography_csv};
use wml_bench::verify::{verify_lemmas, VerifyOptions};
use wml_bench::{prep, Overrides};

#[derive(Debug, Parser)]
#[command(
    name = "wml-bench",
    version,
    about = "Wave matrix Lindbladization experiments"
)]
struct Cli {
    /// Experiment config (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Accuracy for matrix exponentials and invariant checks.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum)]
    ordering: Option<OrderingName>,
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeName>,
    /// Record wall-clock times in the output.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one algorithm once and write a JSON report.
    Simulate,
    /// Run every n in the config and write CSV with fitted slopes.
    Sweep,
    /// Check the underlying identities on random inputs.
    VerifyLemmas {
        #[arg(long, default_value_t = 50)]
        trials: usize,
        /// Drop the normalization of M (negative control).
        #[arg(long)]
        corrupt_m: bool,
    },
    /// Tabulate tomography lower bounds against WML copy counts.
    CompareTomography {
        #[arg(long = "d", value_delimiter = ',', default_values_t = vec![2, 4, 8, 16])]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
    },
    /// Prepare the combined program state coherently and report its cost.
    PrepState,
}

fn load(cli: &Cli) -> Result<ExperimentConfig> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| BenchError::Config("--config is required".into()))?;
    ExperimentConfig::load(path)
}

fn output(cli: &Cli, cfg: Option<&ExperimentConfig>) -> Result<Box<dyn Write>> {
    let path = cli
        .out
        .clone()
        .or_else(|| cfg.and_then(|c| c.output_path.clone()));
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn execute(cli: &Cli) -> Result<()> {
    let ov = Overrides {
        seed: cli.seed,
        tol: cli.tol,
        ordering: cli.ordering,
        mode: cli.mode,
        timing: cli.timing,
    };
    match &cli.command {
        Command::Simulate => {
            let cfg = load(cli)?;
            let report = simulate(&cfg, &ov)?;
            let mut out = output(cli, Some(&cfg))?;
            write_json(&report, &mut out)?;
            out.flush()?;
        }
        Command::Sweep => {
            let cfg = load(cli)?;
            let mut builder = rayon::ThreadPoolBuilder::new();
            if let Some(n) = cli.threads {
                builder = builder.num_threads(n);
            }
            let pool = builder
                .build()
                .map_err(|e| BenchError::Config(e.to_string()))?;
            let result = pool.install(|| sweep(&cfg, &ov))?;
            let mut out = output(cli, Some(&cfg))?;
            write_sweep_csv(&result, &mut out)?;
            out.flush()?;
        }
        Command::VerifyLemmas { trials, corrupt_m } => {
            if *trials == 0 {
                return Err(BenchError::Config("trials must be at least 1".into()));
            }
            let opts = VerifyOptions {
                seed: cli.seed.unwrap_or(0),
                trials: *trials,
                corrupt_m: *corrupt_m,
                tol: cli.tol,
            };
            let report = verify_lemmas(&opts)?;
            let mut out = output(cli, None)?;
            write_json(&report, &mut out)?;
            out.flush()?;
            if !report.all_passed() {
                return Err(BenchError::LemmaFailure(report.failures().join(", ")));
            }
        }
        Command::CompareTomography { dims, epsilon, t } => {
            let rows = compare_tomography(dims, *epsilon, *t)?;
            let mut out = output(cli, None)?;
            write_tomography_csv(&rows, &mut out)?;
            out.flush()?;
        }
        Command::PrepState => {
            let cfg = load(cli)?;
            let report = prep::prep_state(&cfg.spec)?;
            let mut out = output(cli, Some(&cfg))?;
            write_json(&report, &mut out)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
