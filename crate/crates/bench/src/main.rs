use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::Parser;
use wsub_bench::{run_experiment, verify_fixtures, write_outputs, ExperimentConfig, ExperimentKind};

const EXIT_CONFIG: u8 = 1;
const EXIT_VERIFY: u8 = 2;

/// Runs the residual random greedy against standard greedy and random
/// baselines on synthetic instances.
#[derive(Debug, Parser)]
#[command(name = "wsub-bench", version)]
struct Cli {
    /// linreg-graphic, linreg-partition, dpp-interval, logistic-onehot or fixture-verify.
    #[arg(long)]
    experiment: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    /// Master seed; per-trial seeds are derived from it.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Samples (linreg, logistic) or feature dimension (dpp).
    #[arg(long)]
    n: Option<usize>,
    /// Features (linreg), items (dpp) or one-hot columns (logistic).
    #[arg(long)]
    p: Option<usize>,
    /// Partition blocks for linreg-partition.
    #[arg(long)]
    blocks: Option<usize>,
    /// Gaussian kernel bandwidth for dpp-interval.
    #[arg(long)]
    bandwidth: Option<f64>,
    /// Items per interval for dpp-interval.
    #[arg(long)]
    interval: Option<usize>,
    /// JSON config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Also write gnuplot data (summary.dat).
    #[arg(long)]
    dat: bool,
    /// Monte Carlo seeds per fixture for fixture-verify.
    #[arg(long)]
    fixture_seeds: Option<usize>,
}

fn build_config(cli: &Cli) -> Result<ExperimentConfig> {
    let kind = cli.experiment.as_deref().map(ExperimentKind::parse).transpose()?;
    let mut c = match (&cli.config, kind) {
        (Some(path), _) => ExperimentConfig::from_json_file(path)?,
        (None, Some(k)) => ExperimentConfig::new(k),
        (None, None) => ExperimentConfig::default(),
    };
    if let Some(k) = kind {
        if cli.config.is_some() && k != c.experiment {
            let defaults = ExperimentConfig::new(k);
            c.n = defaults.n;
            c.p = defaults.p;
        }
        c.experiment = k;
    }
    c.trials = cli.trials.unwrap_or(c.trials);
    c.master_seed = cli.seed.unwrap_or(c.master_seed);
    c.output_dir = cli.out.clone().unwrap_or(c.output_dir);
    c.n = cli.n.unwrap_or(c.n);
    c.p = cli.p.unwrap_or(c.p);
    c.num_blocks = cli.blocks.unwrap_or(c.num_blocks);
    c.bandwidth = cli.bandwidth.unwrap_or(c.bandwidth);
    c.interval = cli.interval.unwrap_or(c.interval);
    c.fixture_seeds = cli.fixture_seeds.unwrap_or(c.fixture_seeds);
    c.plot_data |= cli.dat;
    c.validate()?;
    Ok(c)
}

fn run(c: &ExperimentConfig) -> Result<bool> {
    if c.experiment == ExperimentKind::FixtureVerify {
        let report = verify_fixtures(c.fixture_seeds, c.master_seed)?;
        println!("{report}");
        std::fs::create_dir_all(&c.output_dir)?;
        let path = c.output_dir.join("fixtures.txt");
        std::fs::write(&path, report.to_string())?;
        println!("wrote {}", path.display());
        return Ok(report.all_passed());
    }
    let table = run_experiment(c)?;
    write_outputs(&table, &c.output_dir, c.plot_data)?;
    for (alg, flags) in &table.solver_flags {
        for f in flags {
            eprintln!("warning: {alg}: {f}");
        }
    }
    for alg in wsub_bench::results::ALGORITHMS {
        let (mean, std) = wsub_bench::results::mean_std(&table.terminal_values(alg));
        println!("{alg:<8} terminal mean {mean:.6} (std {std:.6})");
    }
    let truth = table.terminal_values(wsub_bench::results::GROUND_TRUTH);
    if !truth.is_empty() {
        let (mean, _) = wsub_bench::results::mean_std(&truth);
        println!("ground truth mean {mean:.6}");
    }
    println!("wrote {}", c.output_dir.display());
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match build_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e:#}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    match run(&config) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_VERIFY),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}
