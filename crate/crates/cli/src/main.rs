use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;

/// Simulation experiments on homophily and contagion in social networks.
#[derive(Debug, Parser)]
#[command(name = "netconfound", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Nominee/nominator asymmetry regressions under latent homophily.
    #[command(after_help = ASYMMETRY_FILES)]
    Asymmetry(AsymmetryArgs),
    /// Noisy voter model on homophilous and control networks.
    #[command(after_help = VOTER_FILES)]
    Voter(VoterArgs),
    /// Random-halves contagion test, on simulated panels or an imported one.
    #[command(after_help = HALVES_FILES)]
    Halves(HalvesArgs),
    /// Open back-door paths between two nodes of a causal DAG.
    Dag(DagArgs),
}

const ASYMMETRY_FILES: &str = "\
Files written to --out-dir (CSV format version 1):
  summary.json                  aggregates and the effective configuration
  replications.csv              replication,intercept,own_lag,named,namer,named_lag0,namer_lag0,mutual,normalized_difference
  hist_named.csv, hist_namer.csv, hist_mutual.csv, hist_normalized_difference.csv
                                lower,upper,count
  manifest.json                 configuration, artifacts, duration, version";

const VOTER_FILES: &str = "\
Files written to --out-dir (CSV format version 1):
  summary.json                  aggregates and the effective configuration
  series.csv                    replication,network,step,slope,standard_error,z,ci_lower,ci_upper,separated
  states.csv                    replication,network,step,node_id,trait,choice
  networks/pair<r>_<network>.edges
                                edge list (\"i j\" per line, both directions) per run
  manifest.json                 configuration, artifacts, duration, version";

const HALVES_FILES: &str = "\
Files written to --out-dir (CSV format version 1):
  summary.json                  aggregates (or the single test result with --panel)
  runs.csv                      run,statistic,dispersion,p_value,reject
  manifest.json                 configuration, artifacts, duration, version
An imported --panel is a CSV with columns t,node_id,y.";

#[derive(Debug, Args)]
struct Common {
    /// Master seed.
    #[arg(long)]
    seed: u64,
    /// Output directory, created if missing.
    #[arg(long, default_value = "results")]
    out_dir: PathBuf,
    /// Worker threads; 0 uses every core. Results do not depend on it.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Flat `key = value` configuration file; flags take precedence over it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of nodes.
    #[arg(long)]
    n: Option<usize>,
    /// Number of replications (paired seeds for voter, panels for halves).
    #[arg(long)]
    reps: Option<usize>,
}

#[derive(Debug, Args)]
struct AsymmetryArgs {
    #[command(flatten)]
    common: Common,
    /// homophilous or independent.
    #[arg(long)]
    generator: Option<String>,
    #[arg(long)]
    nominations: Option<usize>,
    #[arg(long)]
    noise_sd: Option<f64>,
    #[arg(long)]
    trend: Option<f64>,
    /// Bins per histogram.
    #[arg(long, default_value_t = 50)]
    bins: usize,
}

#[derive(Debug, Args)]
struct VoterArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    p_in: Option<f64>,
    #[arg(long)]
    p_out: Option<f64>,
    #[arg(long)]
    flip_prob: Option<f64>,
    #[arg(long)]
    steps: Option<u64>,
    #[arg(long)]
    stride: Option<u64>,
    /// Skip states.csv and the per-run edge lists.
    #[arg(long)]
    no_snapshots: bool,
}

#[derive(Debug, Args)]
struct HalvesArgs {
    #[command(flatten)]
    common: Common,
    /// contagion or latent_trend.
    #[arg(long)]
    scenario: Option<String>,
    #[arg(long)]
    strength: Option<f64>,
    #[arg(long)]
    horizon: Option<usize>,
    /// Random bipartitions per test.
    #[arg(long)]
    repetitions: Option<usize>,
    #[arg(long)]
    null_draws: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    contagion_degree: Option<f64>,
    #[arg(long)]
    contagion_noise_sd: Option<f64>,
    #[arg(long)]
    noise_sd: Option<f64>,
    #[arg(long)]
    trend: Option<f64>,
    /// Test this panel (t,node_id,y) once instead of simulating.
    #[arg(long)]
    panel: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DagArgs {
    /// Built-in graph: fig1, fig3a, fig3b, fig4 or fig5.
    #[arg(long, conflicts_with = "file", required_unless_present = "file")]
    template: Option<String>,
    /// Graph in the text edge-list format.
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long)]
    treatment: String,
    #[arg(long)]
    outcome: String,
    /// Condition on every observed node except treatment and outcome.
    #[arg(long)]
    condition_on_observed: bool,
    /// Conditioning nodes, comma separated or repeated.
    #[arg(long, value_delimiter = ',')]
    condition: Vec<String>,
    /// Write the graph in text form and exit.
    #[arg(long)]
    export: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match cli.command {
        Command::Asymmetry(a) => commands::asymmetry(a),
        Command::Voter(a) => commands::voter(a),
        Command::Halves(a) => commands::halves(a),
        Command::Dag(a) => commands::dag(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
