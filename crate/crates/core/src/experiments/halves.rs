//! Random-halves test for contagion that never looks at the network.
//!
//! Each repetition splits the nodes by fair coin into `J₁` and `J₂`. For
//! `i ∈ J₁` the one-step change `Y_i(t) − Y_i(t−1)`, with a per-node fixed
//! effect, is regressed on the mean of `J₂` at `t − 1`. Differencing plays the
//! role of controlling for the node's own previous value. The statistic is
//! the cross-half coefficient averaged over repetitions; its null
//! distribution comes from flipping the sign of each node's demeaned change
//! series, the same flip for a node in every repetition.

use rand::Rng;
use serde::Serialize;

use super::{fraction, mean, replicate, ExperimentConfig, ExperimentKind, HalvesScenario};
use crate::dynamics::{contagion_panel, latent_trend_panel, OutcomePanel};
use crate::inference::DesignMatrix;
use crate::population::{matched_control_network, nomination_network, sample_latent_uniform};
use crate::seed::substream;
use crate::{Error, Real, Result};

/// Sole regressor of a halves-test repetition.
pub const HALVES_REGRESSOR: &str = "other_half_lag_mean";

const MAX_REDRAWS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalvesOptions {
    pub repetitions: usize,
    pub null_draws: usize,
    pub alpha: f64,
}

impl Default for HalvesOptions {
    fn default() -> Self {
        Self { repetitions: 20, null_draws: 199, alpha: 0.05 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HalvesResult {
    /// Cross-half coefficient averaged over repetitions.
    pub statistic: f64,
    /// Standard deviation of the per-repetition coefficients.
    pub dispersion: f64,
    /// Two-sided Monte Carlo p-value, `(1 + #{|null| ≥ |obs|}) / (B + 1)`.
    pub p_value: f64,
    pub reject: bool,
    pub repetitions: usize,
    pub null_draws: usize,
}

/// Demeaned change series per node and the time index length.
struct Prepared {
    /// `u[i][t]`, change into time `t + 1`, demeaned over `t`.
    u: Vec<Vec<f64>>,
    levels: Vec<Vec<f64>>,
    n: usize,
    steps: usize,
}

fn prepare<T: Real>(panel: &OutcomePanel<T>) -> Result<Prepared> {
    if panel.len() < 3 {
        return Err(Error::argument(
            "halves test needs at least three time slices (two changes) to separate node effects",
        ));
    }
    let n = panel.node_count();
    if n < 4 {
        return Err(Error::InsufficientData { rows: n, columns: 4 });
    }
    let levels: Vec<Vec<f64>> = panel.slices().iter().map(|s| s.iter().map(|v| v.as_f64()).collect()).collect();
    let steps = levels.len() - 1;
    let u = (0..n)
        .map(|i| {
            let d: Vec<f64> = (0..steps).map(|t| levels[t + 1][i] - levels[t][i]).collect();
            demean(&d)
        })
        .collect();
    Ok(Prepared { u, levels, n, steps })
}

fn demean(v: &[f64]) -> Vec<f64> {
    let m = v.iter().sum::<f64>() / v.len() as f64;
    v.iter().map(|x| x - m).collect()
}

/// Demeaned lagged `J₂` mean series, `None` when it has no variation.
fn other_half_series(p: &Prepared, first: &[bool]) -> Option<Vec<f64>> {
    let others: Vec<usize> = (0..p.n).filter(|&i| !first[i]).collect();
    let m: Vec<f64> =
        (0..p.steps).map(|t| others.iter().map(|&j| p.levels[t][j]).sum::<f64>() / others.len() as f64).collect();
    let m = demean(&m);
    let ss: f64 = m.iter().map(|v| v * v).sum();
    (ss > 0.0 && ss.is_finite()).then_some(m)
}

fn draw_partition<R: Rng + ?Sized>(p: &Prepared, rng: &mut R) -> Result<(Vec<bool>, Vec<f64>)> {
    for _ in 0..MAX_REDRAWS {
        let first: Vec<bool> = (0..p.n).map(|_| rng.random_bool(0.5)).collect();
        let size = first.iter().filter(|&&b| b).count();
        if size < 3 || size == p.n {
            continue;
        }
        if let Some(m) = other_half_series(p, &first) {
            return Ok((first, m));
        }
    }
    Err(Error::argument("could not draw a usable partition; the panel may be constant over time"))
}

/// Runs the test on `panel` (at least three slices).
pub fn run_halves_test<T: Real, R: Rng + ?Sized>(
    panel: &OutcomePanel<T>,
    opts: HalvesOptions,
    rng: &mut R,
) -> Result<HalvesResult> {
    if opts.repetitions < 1 || opts.null_draws < 1 {
        return Err(Error::argument("repetitions and null_draws must be at least 1"));
    }
    let p = prepare(panel)?;
    // The aggregate is linear in the per-node series: Σ_i g_i.
    let mut g = vec![0.0; p.n];
    let mut per_rep = Vec::with_capacity(opts.repetitions);
    for _ in 0..opts.repetitions {
        let (first, m) = draw_partition(&p, rng)?;
        let size = first.iter().filter(|&&b| b).count() as f64;
        let ss: f64 = m.iter().map(|v| v * v).sum();
        let mut coef = 0.0;
        for i in (0..p.n).filter(|&i| first[i]) {
            let c = m.iter().zip(&p.u[i]).map(|(a, b)| a * b).sum::<f64>() / (size * ss);
            coef += c;
            g[i] += c / opts.repetitions as f64;
        }
        per_rep.push(coef);
    }
    let statistic: f64 = g.iter().sum();
    let dispersion = if per_rep.len() > 1 {
        let m = mean(per_rep.iter().copied());
        (per_rep.iter().map(|c| (c - m).powi(2)).sum::<f64>() / (per_rep.len() - 1) as f64).sqrt()
    } else {
        0.0
    };
    let exceed = (0..opts.null_draws)
        .filter(|_| {
            let null: f64 = g.iter().map(|&gi| if rng.random_bool(0.5) { gi } else { -gi }).sum();
            null.abs() >= statistic.abs()
        })
        .count();
    let p_value = (1 + exceed) as f64 / (opts.null_draws + 1) as f64;
    Ok(HalvesResult {
        statistic,
        dispersion,
        p_value,
        reject: p_value <= opts.alpha,
        repetitions: opts.repetitions,
        null_draws: opts.null_draws,
    })
}

/// Stacked regression for one repetition with first half `first`: rows are
/// `(i, t)` for `i ∈ J₁`, the response is the node-demeaned change and the
/// only column is [`HALVES_REGRESSOR`]. Its least-squares slope is the
/// repetition's cross-half coefficient.
pub fn halves_repetition_design<T: Real>(
    panel: &OutcomePanel<T>,
    first: &[bool],
) -> Result<(DesignMatrix<f64>, Vec<f64>)> {
    let p = prepare(panel)?;
    Error::check_len(p.n, first.len())?;
    if first.iter().all(|&b| b) || !first.iter().any(|&b| b) {
        return Err(Error::argument("both halves must be non-empty"));
    }
    let m = other_half_series(&p, first).ok_or_else(|| Error::argument("other-half mean is constant over time"))?;
    let mut col = Vec::new();
    let mut y = Vec::new();
    for i in (0..p.n).filter(|&i| first[i]) {
        col.extend_from_slice(&m);
        y.extend_from_slice(&p.u[i]);
    }
    Ok((DesignMatrix::from_columns(false, vec![(HALVES_REGRESSOR.to_string(), col)])?, y))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HalvesRecord {
    pub run: usize,
    pub statistic: f64,
    pub dispersion: f64,
    pub p_value: f64,
    pub reject: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HalvesSummary {
    pub config: ExperimentConfig,
    pub runs: usize,
    pub rejections: usize,
    pub rejection_rate: f64,
    pub mean_statistic: f64,
    pub mean_p_value: f64,
    #[serde(skip)]
    pub records: Vec<HalvesRecord>,
}

/// Calibration harness: simulates `replications` panels from the configured
/// scenario and applies [`run_halves_test`] to each.
pub fn run_halves_experiment(cfg: &ExperimentConfig) -> Result<HalvesSummary> {
    cfg.expect_kind(ExperimentKind::Halves)?;
    let opts = HalvesOptions { repetitions: cfg.halves_repetitions, null_draws: cfg.null_draws, alpha: cfg.alpha };
    let records = replicate(cfg.replications, |r| -> Result<HalvesRecord> {
        let mut rng = substream(cfg.seed, r as u64);
        let panel: OutcomePanel<f64> = match cfg.scenario {
            HalvesScenario::Contagion => {
                let net = matched_control_network(cfg.n, cfg.contagion_degree, &mut rng)?;
                contagion_panel(&net, cfg.strength, cfg.horizon, cfg.contagion_noise_sd, &mut rng)?
            }
            HalvesScenario::LatentTrend => {
                let traits = sample_latent_uniform(cfg.n, &mut rng)?;
                // The network is realised for fidelity to the scenario; the test never sees it.
                let _net = nomination_network(&traits, cfg.nominations, &mut rng)?;
                latent_trend_panel(&traits, cfg.noise_sd, cfg.trend, &mut rng)?
            }
        };
        let res = run_halves_test(&panel, opts, &mut rng)?;
        Ok(HalvesRecord { run: r, statistic: res.statistic, dispersion: res.dispersion, p_value: res.p_value, reject: res.reject })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let rejections = records.iter().filter(|r| r.reject).count();
    Ok(HalvesSummary {
        config: cfg.clone(),
        runs: records.len(),
        rejections,
        rejection_rate: fraction(rejections, records.len()),
        mean_statistic: mean(records.iter().map(|r| r.statistic)),
        mean_p_value: mean(records.iter().map(|r| r.p_value)),
        records,
    })
}
