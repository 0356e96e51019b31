use std::collections::BTreeMap;

use serde::Serialize;

use super::{fraction, mean, replicate, AsymmetryGenerator, ExperimentConfig, ExperimentKind};
use crate::inference::{build_asymmetry_design, contrast, ols, AsymmetryColumns as C, AsymmetryDesignOptions};
use crate::population::{mean_pool_probability, nomination_network, sample_latent_uniform, uniform_nomination_network};
use crate::seed::substream;
use crate::{Error, Result};

/// Coefficients of one replication's asymmetry regression.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymmetryRecord {
    pub replication: usize,
    pub intercept: f64,
    pub own_lag: f64,
    /// β₂, effect of the nominee's lagged outcome.
    pub named: f64,
    /// β₃, effect of the nominator's lagged outcome.
    pub namer: f64,
    pub named_lag0: f64,
    pub namer_lag0: f64,
    /// β₂ + β₃, the implied effect across a mutual tie.
    pub mutual: f64,
    /// (β₂ − β₃) over its standard error.
    pub normalized_difference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicationSummary {
    pub config: ExperimentConfig,
    pub replications: usize,
    pub used: usize,
    pub excluded: usize,
    pub exclusion_reasons: BTreeMap<String, usize>,
    pub fraction_named_negative: f64,
    pub fraction_named_positive: f64,
    pub fraction_normalized_difference_positive: f64,
    pub mean_named: f64,
    pub mean_namer: f64,
    pub mean_mutual: f64,
    pub mean_normalized_difference: f64,
    #[serde(skip)]
    pub records: Vec<AsymmetryRecord>,
}

/// Regenerates traits, network and outcomes in every replication, fits the
/// six-column regression by least squares and summarises the nominee and
/// nominator coefficients.
pub fn run_asymmetry_experiment(cfg: &ExperimentConfig) -> Result<ReplicationSummary> {
    cfg.expect_kind(ExperimentKind::Asymmetry)?;
    let null_pool = mean_pool_probability();
    let outcomes = replicate(cfg.replications, |r| one_replication(cfg, r, null_pool));

    let mut records = Vec::with_capacity(cfg.replications);
    let mut reasons: BTreeMap<String, usize> = BTreeMap::new();
    for outcome in outcomes {
        match outcome {
            Ok(rec) => records.push(rec),
            Err(e @ (Error::SingularDesign { .. } | Error::InsufficientData { .. })) => {
                *reasons.entry(exclusion_label(&e)).or_default() += 1;
            }
            Err(e) => return Err(e),
        }
    }
    let used = records.len();
    let count = |f: fn(&AsymmetryRecord) -> bool| records.iter().filter(|r| f(r)).count();
    Ok(ReplicationSummary {
        config: cfg.clone(),
        replications: cfg.replications,
        used,
        excluded: cfg.replications - used,
        exclusion_reasons: reasons,
        fraction_named_negative: fraction(count(|r| r.named < 0.0), used),
        fraction_named_positive: fraction(count(|r| r.named > 0.0), used),
        fraction_normalized_difference_positive: fraction(count(|r| r.normalized_difference > 0.0), used),
        mean_named: mean(records.iter().map(|r| r.named)),
        mean_namer: mean(records.iter().map(|r| r.namer)),
        mean_mutual: mean(records.iter().map(|r| r.mutual)),
        mean_normalized_difference: mean(records.iter().map(|r| r.normalized_difference)),
        records,
    })
}

fn exclusion_label(e: &Error) -> String {
    match e {
        Error::SingularDesign { name, .. } => format!("singular design ({name})"),
        _ => "insufficient data".to_string(),
    }
}

fn one_replication(cfg: &ExperimentConfig, r: usize, null_pool: f64) -> Result<AsymmetryRecord> {
    let mut rng = substream(cfg.seed, r as u64);
    let traits = sample_latent_uniform::<f64, _>(cfg.n, &mut rng)?;
    let net = match cfg.generator {
        AsymmetryGenerator::Homophilous => nomination_network(&traits, cfg.nominations, &mut rng)?,
        AsymmetryGenerator::Independent => uniform_nomination_network(cfg.n, null_pool, cfg.nominations, &mut rng)?,
    };
    let panel = crate::dynamics::latent_trend_panel(&traits, cfg.noise_sd, cfg.trend, &mut rng)?;
    let (x, y) = build_asymmetry_design(&net, &panel, AsymmetryDesignOptions::default())?;
    let fit = ols(&x, &y)?;
    let b = &fit.coefficients;
    let mut c = [0.0; 6];
    c[C::NOMINEE_LAG1] = 1.0;
    c[C::NOMINATOR_LAG1] = -1.0;
    let diff = contrast(&fit, &c)?;
    Ok(AsymmetryRecord {
        replication: r,
        intercept: b[C::INTERCEPT],
        own_lag: b[C::OWN_LAG],
        named: b[C::NOMINEE_LAG1],
        namer: b[C::NOMINATOR_LAG1],
        named_lag0: b[C::NOMINEE_LAG0],
        namer_lag0: b[C::NOMINATOR_LAG0],
        mutual: b[C::NOMINEE_LAG1] + b[C::NOMINATOR_LAG1],
        normalized_difference: diff.statistic,
    })
}
