use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use netconfound::causal_dag::{CausalDag, Template};
use netconfound::dynamics::{OutcomeKind, OutcomePanel};
use netconfound::experiments::{
    histogram, run_asymmetry_experiment, run_halves_experiment, run_halves_test, run_voter_experiment,
    ExperimentConfig, ExperimentKind, HalvesOptions,
};
use netconfound::seed::substream;
use serde::Serialize;

use crate::config::{opt, resolve, Failure};
use crate::{AsymmetryArgs, Common, DagArgs, HalvesArgs, VoterArgs};

#[derive(Serialize)]
struct RunManifest<'a> {
    command: &'a str,
    version: &'a str,
    seed: u64,
    workers: usize,
    config: &'a ExperimentConfig,
    artifacts: Vec<String>,
    duration_seconds: f64,
}

/// Tracks files written under the output directory.
struct Outputs {
    dir: PathBuf,
    written: Vec<String>,
}

impl Outputs {
    fn new(dir: &Path) -> Result<Self, Failure> {
        fs::create_dir_all(dir).map_err(|e| Failure::runtime(format!("cannot create {}: {e}", dir.display())))?;
        Ok(Self { dir: dir.to_path_buf(), written: Vec::new() })
    }

    fn create(&mut self, name: &str) -> Result<BufWriter<File>, Failure> {
        let path = self.dir.join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| Failure::runtime(format!("cannot create {}: {e}", parent.display())))?;
        }
        let file = File::create(&path).map_err(|e| Failure::runtime(format!("cannot write {}: {e}", path.display())))?;
        self.written.push(name.to_string());
        Ok(BufWriter::new(file))
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), Failure> {
        let mut w = self.create(name)?;
        serde_json::to_writer_pretty(&mut w, value).map_err(Failure::runtime)?;
        writeln!(w).and_then(|_| w.flush()).map_err(Failure::runtime)
    }

    fn csv<T: Serialize>(&mut self, name: &str, rows: impl IntoIterator<Item = T>) -> Result<(), Failure> {
        let mut w = csv::Writer::from_writer(self.create(name)?);
        for row in rows {
            w.serialize(row).map_err(Failure::runtime)?;
        }
        w.flush().map_err(Failure::runtime)
    }

    fn finish(mut self, command: &str, common: &Common, cfg: &ExperimentConfig, start: Instant) -> Result<(), Failure> {
        let mut artifacts = self.written.clone();
        artifacts.push("manifest.json".to_string());
        let manifest = RunManifest {
            command,
            version: env!("CARGO_PKG_VERSION"),
            seed: cfg.seed,
            workers: common.workers,
            config: cfg,
            artifacts,
            duration_seconds: start.elapsed().as_secs_f64(),
        };
        self.json("manifest.json", &manifest)
    }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool, Failure> {
    rayon::ThreadPoolBuilder::new().num_threads(workers).build().map_err(Failure::runtime)
}

fn common_flags(c: &Common) -> Vec<(&'static str, Option<String>)> {
    vec![("n", opt(&c.n)), ("replications", opt(&c.reps))]
}

pub fn asymmetry(args: AsymmetryArgs) -> Result<(), Failure> {
    let start = Instant::now();
    let c = &args.common;
    let mut flags = common_flags(c);
    flags.extend([
        ("generator", args.generator.clone()),
        ("nominations", opt(&args.nominations)),
        ("noise_sd", opt(&args.noise_sd)),
        ("trend", opt(&args.trend)),
    ]);
    let cfg = resolve(ExperimentKind::Asymmetry, c.seed, c.config.as_deref(), &flags)?;
    let summary = pool(c.workers)?.install(|| run_asymmetry_experiment(&cfg)).map_err(Failure::runtime)?;

    let mut out = Outputs::new(&c.out_dir)?;
    out.json("summary.json", &summary)?;
    out.csv("replications.csv", &summary.records)?;
    let panels: [(&str, fn(&netconfound::experiments::AsymmetryRecord) -> f64); 4] = [
        ("hist_named.csv", |r| r.named),
        ("hist_namer.csv", |r| r.namer),
        ("hist_mutual.csv", |r| r.mutual),
        ("hist_normalized_difference.csv", |r| r.normalized_difference),
    ];
    for (name, pick) in panels {
        let values: Vec<f64> = summary.records.iter().map(pick).collect();
        out.csv(name, histogram(&values, args.bins))?;
    }
    out.finish("asymmetry", c, &cfg, start)?;

    println!("replications used: {} of {}", summary.used, summary.replications);
    println!("fraction named < 0: {:.4}", summary.fraction_named_negative);
    println!("fraction normalized difference > 0: {:.4}", summary.fraction_normalized_difference_positive);
    Ok(())
}

#[derive(Serialize)]
struct SeriesRow<'a> {
    replication: usize,
    network: &'a str,
    step: u64,
    slope: f64,
    standard_error: f64,
    z: f64,
    ci_lower: f64,
    ci_upper: f64,
    separated: bool,
}

#[derive(Serialize)]
struct StateRow<'a> {
    replication: usize,
    network: &'a str,
    step: u64,
    node_id: usize,
    #[serde(rename = "trait")]
    trait_value: f64,
    choice: f64,
}

pub fn voter(args: VoterArgs) -> Result<(), Failure> {
    let start = Instant::now();
    let c = &args.common;
    let mut flags = common_flags(c);
    flags.extend([
        ("p_in", opt(&args.p_in)),
        ("p_out", opt(&args.p_out)),
        ("flip_prob", opt(&args.flip_prob)),
        ("steps", opt(&args.steps)),
        ("stride", opt(&args.stride)),
    ]);
    let cfg = resolve(ExperimentKind::Voter, c.seed, c.config.as_deref(), &flags)?;
    let summary = pool(c.workers)?.install(|| run_voter_experiment(&cfg)).map_err(Failure::runtime)?;

    let mut out = Outputs::new(&c.out_dir)?;
    out.json("summary.json", &summary)?;
    let runs = || summary.runs.iter().flat_map(|p| [(p, "homophilous", &p.homophilous), (p, "control", &p.control)]);
    out.csv(
        "series.csv",
        runs().flat_map(|(p, network, run)| {
            run.fits.iter().map(move |f| SeriesRow {
                replication: p.replication,
                network,
                step: f.step,
                slope: f.slope,
                standard_error: f.standard_error,
                z: f.z,
                ci_lower: f.ci_lower,
                ci_upper: f.ci_upper,
                separated: f.separated,
            })
        }),
    )?;
    if !args.no_snapshots {
        out.csv(
            "states.csv",
            runs().flat_map(|(p, network, run)| {
                run.panel.times().iter().zip(run.panel.slices()).flat_map(move |(&step, slice)| {
                    slice.iter().enumerate().map(move |(node_id, &choice)| StateRow {
                        replication: p.replication,
                        network,
                        step,
                        node_id,
                        trait_value: p.traits[node_id],
                        choice,
                    })
                })
            }),
        )?;
        for (p, network, run) in runs() {
            let mut w = out.create(&format!("networks/pair{}_{network}.edges", p.replication))?;
            run.network.write_edge_list(&mut w).map_err(Failure::runtime)?;
            w.flush().map_err(Failure::runtime)?;
        }
    }
    out.finish("voter", c, &cfg, start)?;

    println!("mean |slope| homophilous {:.4}, control {:.4}, ratio {:.3}", summary.homophilous_mean_abs_slope, summary.control_mean_abs_slope, summary.slope_ratio);
    println!("homophilous runs reaching |z| >= 1.96: {:.3}", summary.fraction_homophilous_significant);
    Ok(())
}

#[derive(Serialize)]
struct PanelSummary<'a> {
    config: &'a ExperimentConfig,
    panel: String,
    nodes: usize,
    time_slices: usize,
    result: netconfound::experiments::HalvesResult,
}

pub fn halves(args: HalvesArgs) -> Result<(), Failure> {
    let start = Instant::now();
    let c = &args.common;
    let mut flags = common_flags(c);
    flags.extend([
        ("scenario", args.scenario.clone()),
        ("strength", opt(&args.strength)),
        ("horizon", opt(&args.horizon)),
        ("halves_repetitions", opt(&args.repetitions)),
        ("null_draws", opt(&args.null_draws)),
        ("alpha", opt(&args.alpha)),
        ("contagion_degree", opt(&args.contagion_degree)),
        ("contagion_noise_sd", opt(&args.contagion_noise_sd)),
        ("noise_sd", opt(&args.noise_sd)),
        ("trend", opt(&args.trend)),
    ]);
    let cfg = resolve(ExperimentKind::Halves, c.seed, c.config.as_deref(), &flags)?;
    let mut out;

    if let Some(path) = &args.panel {
        let file = File::open(path).map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))?;
        let panel: OutcomePanel<f64> = OutcomePanel::read_csv(OutcomeKind::Continuous, file).map_err(Failure::config)?;
        let opts = HalvesOptions { repetitions: cfg.halves_repetitions, null_draws: cfg.null_draws, alpha: cfg.alpha };
        let result = run_halves_test(&panel, opts, &mut substream(cfg.seed, 0)).map_err(Failure::runtime)?;
        out = Outputs::new(&c.out_dir)?;
        out.json(
            "summary.json",
            &PanelSummary {
                config: &cfg,
                panel: path.display().to_string(),
                nodes: panel.node_count(),
                time_slices: panel.len(),
                result,
            },
        )?;
        println!("statistic {:.6}, p-value {:.4}, reject: {}", result.statistic, result.p_value, result.reject);
    } else {
        let summary = pool(c.workers)?.install(|| run_halves_experiment(&cfg)).map_err(Failure::runtime)?;
        out = Outputs::new(&c.out_dir)?;
        out.json("summary.json", &summary)?;
        out.csv("runs.csv", &summary.records)?;
        println!("rejection rate {:.4} over {} runs", summary.rejection_rate, summary.runs);
    }
    out.finish("halves", c, &cfg, start)
}

pub fn dag(args: DagArgs) -> Result<(), Failure> {
    let dag = match (&args.template, &args.file) {
        (Some(name), _) => CausalDag::template(name.parse::<Template>().map_err(Failure::config)?),
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))?;
            CausalDag::parse(&text).map_err(Failure::config)?
        }
        (None, None) => return Err(Failure::config("either --template or --file is required")),
    };
    if let Some(path) = &args.export {
        return fs::write(path, dag.to_text()).map_err(|e| Failure::runtime(format!("cannot write {}: {e}", path.display())));
    }
    let mut conditioning = args.condition.clone();
    if args.condition_on_observed {
        for name in dag.observed_except(&[&args.treatment, &args.outcome]) {
            if !conditioning.contains(&name) {
                conditioning.push(name);
            }
        }
    }
    let paths = dag.open_backdoor_paths_observed(&args.treatment, &args.outcome, &conditioning).map_err(Failure::config)?;
    if paths.is_empty() {
        println!("UNCONFOUNDED");
    } else {
        for p in paths {
            println!("{}", p.render(&dag));
        }
    }
    Ok(())
}
