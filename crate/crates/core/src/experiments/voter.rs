use serde::Serialize;

use super::{fraction, mean, replicate, ExperimentConfig, ExperimentKind};
use crate::dynamics::{stride_checkpoints, voter_init, voter_run, OutcomePanel};
use crate::inference::{logistic_irls, DesignMatrix, IrlsOptions};
use crate::network::SocialNetwork;
use crate::population::{matched_control_network, planted_partition_network};
use crate::seed::substream;
use crate::{Error, Result};

const Z95: f64 = 1.96;

/// Logistic regression of current choice on trait at one checkpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CheckpointFit {
    pub step: u64,
    pub slope: f64,
    pub standard_error: f64,
    pub z: f64,
    pub ci_lower: f64,
    pub ci_upper: f64,
    /// Separation or a constant response; excluded from every aggregate.
    pub separated: bool,
}

impl CheckpointFit {
    fn significant(&self) -> bool {
        !self.separated && self.z.abs() >= Z95
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VoterRun {
    pub network: SocialNetwork,
    pub mean_degree: f64,
    pub panel: OutcomePanel<f64>,
    pub fits: Vec<CheckpointFit>,
}

impl VoterRun {
    pub fn hit_significance(&self) -> bool {
        self.fits.iter().any(CheckpointFit::significant)
    }
}

/// Homophilous run and its density-matched control, sharing the traits.
#[derive(Debug, Clone, PartialEq)]
pub struct VoterPair {
    pub replication: usize,
    pub traits: Vec<f64>,
    pub homophilous: VoterRun,
    pub control: VoterRun,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VoterSummary {
    pub config: ExperimentConfig,
    pub pairs: usize,
    pub checkpoints: Vec<u64>,
    pub homophilous_mean_abs_slope: f64,
    pub control_mean_abs_slope: f64,
    pub slope_ratio: f64,
    pub fraction_homophilous_significant: f64,
    pub fraction_control_significant: f64,
    pub fraction_initial_nonsignificant: f64,
    pub separated_checkpoints_homophilous: usize,
    pub separated_checkpoints_control: usize,
    /// Mean |slope| per checkpoint over non-separated fits.
    pub homophilous_mean_abs_slope_series: Vec<f64>,
    pub control_mean_abs_slope_series: Vec<f64>,
    #[serde(skip)]
    pub runs: Vec<VoterPair>,
}

/// Paired noisy-voter runs on a two-cluster homophilous network and an
/// Erdős–Rényi control of the same realised mean degree, with choices
/// regressed on the cluster trait at every checkpoint.
pub fn run_voter_experiment(cfg: &ExperimentConfig) -> Result<VoterSummary> {
    cfg.expect_kind(ExperimentKind::Voter)?;
    let checkpoints = stride_checkpoints(cfg.steps, cfg.stride);
    let runs = replicate(cfg.replications, |r| one_pair(cfg, r, &checkpoints)).into_iter().collect::<Result<Vec<_>>>()?;

    let all = |pick: fn(&VoterPair) -> &VoterRun| -> Vec<&CheckpointFit> {
        runs.iter().flat_map(|p| pick(p).fits.iter()).filter(|f| !f.separated).collect()
    };
    let h = all(|p| &p.homophilous);
    let c = all(|p| &p.control);
    let h_mean = mean(h.iter().map(|f| f.slope.abs()));
    let c_mean = mean(c.iter().map(|f| f.slope.abs()));
    let series = |pick: fn(&VoterPair) -> &VoterRun| -> Vec<f64> {
        (0..checkpoints.len())
            .map(|k| mean(runs.iter().map(|p| pick(p).fits[k]).filter(|f| !f.separated).map(|f| f.slope.abs())))
            .collect()
    };
    let initial: Vec<&CheckpointFit> = runs
        .iter()
        .flat_map(|p| [&p.homophilous.fits[0], &p.control.fits[0]])
        .filter(|f| !f.separated)
        .collect();
    let separated = |pick: fn(&VoterPair) -> &VoterRun| -> usize {
        runs.iter().map(|p| pick(p).fits.iter().filter(|f| f.separated).count()).sum()
    };

    Ok(VoterSummary {
        config: cfg.clone(),
        pairs: runs.len(),
        homophilous_mean_abs_slope: h_mean,
        control_mean_abs_slope: c_mean,
        slope_ratio: h_mean / c_mean,
        fraction_homophilous_significant: fraction(runs.iter().filter(|p| p.homophilous.hit_significance()).count(), runs.len()),
        fraction_control_significant: fraction(runs.iter().filter(|p| p.control.hit_significance()).count(), runs.len()),
        fraction_initial_nonsignificant: fraction(initial.iter().filter(|f| !f.significant()).count(), initial.len()),
        separated_checkpoints_homophilous: separated(|p| &p.homophilous),
        separated_checkpoints_control: separated(|p| &p.control),
        homophilous_mean_abs_slope_series: series(|p| &p.homophilous),
        control_mean_abs_slope_series: series(|p| &p.control),
        checkpoints,
        runs,
    })
}

fn one_pair(cfg: &ExperimentConfig, r: usize, checkpoints: &[u64]) -> Result<VoterPair> {
    let mut rng = substream(cfg.seed, r as u64);
    let (traits, homophilous) = planted_partition_network::<f64, _>(cfg.n, cfg.p_in, cfg.p_out, &mut rng)?;
    let degree = homophilous.mean_degree();
    if degree == 0.0 {
        return Err(Error::argument("homophilous network has no edges; raise p_in or n"));
    }
    let control = matched_control_network(cfg.n, degree, &mut rng)?;
    let x = traits.latent().to_vec();
    let design = DesignMatrix::from_columns(true, vec![("trait".to_string(), x.clone())])?;

    let mut run = |network: SocialNetwork| -> Result<VoterRun> {
        let y0 = voter_init(cfg.n, &mut rng);
        let panel: OutcomePanel<f64> = voter_run(&network, &y0, cfg.steps, cfg.flip_prob, checkpoints, &mut rng)?;
        let fits = checkpoints
            .iter()
            .zip(panel.slices())
            .map(|(&step, y)| checkpoint_fit(&design, y, step))
            .collect::<Result<Vec<_>>>()?;
        Ok(VoterRun { mean_degree: network.mean_degree(), network, panel, fits })
    };
    let homophilous = run(homophilous)?;
    let control = run(control)?;
    Ok(VoterPair { replication: r, traits: x, homophilous, control })
}

fn checkpoint_fit(design: &DesignMatrix<f64>, y: &[f64], step: u64) -> Result<CheckpointFit> {
    let fit = logistic_irls(design, y, IrlsOptions::default())?;
    let (lo, hi) = fit.wald_interval(1, Z95);
    Ok(CheckpointFit {
        step,
        slope: fit.coefficients[1],
        standard_error: fit.standard_errors[1],
        z: fit.statistics[1],
        ci_lower: lo,
        ci_upper: hi,
        separated: fit.separated || !fit.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(ExperimentKind::Voter, seed);
        c.n = 60;
        c.replications = 4;
        c.steps = 600;
        c.stride = 100;
        c
    }

    #[test]
    fn pairs_are_density_matched() {
        let s = run_voter_experiment(&small(2)).unwrap();
        assert_eq!(s.checkpoints, vec![0, 100, 200, 300, 400, 500, 600]);
        for p in &s.runs {
            assert_eq!(p.homophilous.fits.len(), 7);
            assert!(p.homophilous.network.is_symmetric() && p.control.network.is_symmetric());
            // control drawn at the realised homophilous density
            let (h, c) = (p.homophilous.mean_degree, p.control.mean_degree);
            assert!((h - c).abs() < 0.6 * h, "{h} {c}");
        }
        assert!((0.0..=1.0).contains(&s.fraction_initial_nonsignificant));
    }

    #[test]
    fn ci_brackets_slope() {
        let s = run_voter_experiment(&small(3)).unwrap();
        for f in s.runs.iter().flat_map(|p| &p.homophilous.fits).filter(|f| !f.separated) {
            assert!(f.ci_lower <= f.slope && f.slope <= f.ci_upper);
            assert!((f.z * f.standard_error - f.slope).abs() < 1e-9);
        }
    }

    #[test]
    fn deterministic_across_pools() {
        let cfg = small(4);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let three = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let a = one.install(|| run_voter_experiment(&cfg)).unwrap();
        let b = three.install(|| run_voter_experiment(&cfg)).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn odd_n_is_a_config_error() {
        let mut c = small(1);
        c.n = 61;
        assert!(run_voter_experiment(&c).is_err());
    }
}
