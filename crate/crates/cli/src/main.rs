use std::path::PathBuf;
use std::process::ExitCode;

use belief_axes_cli::{cmd_all, cmd_evaluate, cmd_measure, cmd_salience, Overrides, Report, RunConfig};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "belief-axes", version, about = "Measure identities along semantic axes and validate against surveys")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Run configuration (TOML).
    #[arg(long, global = true, default_value = "belief-axes.toml")]
    config: PathBuf,

    /// Overrides the seed in the config.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Overrides the output directory in the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Rank beliefs with the run's raw orientation.
    #[arg(long, global = true)]
    no_sign_align: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Score identities for every embedding, dimension, and measure.
    Measure,
    /// Measure, then compare against the surveys.
    Evaluate,
    /// Fit the labeling regressions.
    Salience,
    /// Everything above.
    All,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();

    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }

    let overrides = Overrides {
        seed: cli.seed,
        output_dir: cli.out,
        no_sign_align: cli.no_sign_align,
    };
    let result = RunConfig::load(&cli.config)
        .map(|c| c.apply(&overrides))
        .and_then(|config| match cli.command {
            Command::Measure => cmd_measure(&config),
            Command::Evaluate => cmd_evaluate(&config),
            Command::Salience => cmd_salience(&config),
            Command::All => cmd_all(&config),
        });
    match result {
        Ok(report) => {
            print_report(&report);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn print_report(report: &Report) {
    println!("wrote {} files to {}", report.files.len(), report.output_dir.display());
    if !report.warnings.is_empty() {
        println!("{} warnings; see warnings.json", report.warnings.len());
    }
}
