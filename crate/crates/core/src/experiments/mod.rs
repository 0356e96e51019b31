//! Seeded Monte Carlo harness.
//!
//! Replication `r` of a run with master seed `s` draws only from
//! [`substream(s, r)`](crate::seed::substream), and per-replication results
//! are collected in index order before any reduction, so summaries are
//! identical for any size of the rayon pool they run on.

mod asymmetry;
mod halves;
mod spurious;
mod voter;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use asymmetry::{run_asymmetry_experiment, AsymmetryRecord, ReplicationSummary};
pub use halves::{
    halves_repetition_design, run_halves_experiment, run_halves_test, HalvesOptions, HalvesRecord, HalvesResult,
    HalvesSummary, HALVES_REGRESSOR,
};
pub use spurious::{simulate_spurious_coefficient, spurious_coefficient};
pub use voter::{run_voter_experiment, CheckpointFit, VoterPair, VoterRun, VoterSummary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Asymmetry,
    Voter,
    Halves,
}

/// Network generator for the asymmetry experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AsymmetryGenerator {
    /// Trait-driven pool and nomination.
    Homophilous,
    /// Erdős–Rényi pool at the homophilous pool's mean density, uniform nomination.
    Independent,
}

/// Outcome process fed to the random-halves harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HalvesScenario {
    /// Linear contagion on an Erdős–Rényi graph.
    Contagion,
    /// Latent-trend outcomes on a homophilous nomination network, no contagion.
    LatentTrend,
}

macro_rules! str_enum {
    ($ty:ty { $($name:literal => $variant:expr),+ $(,)? }) => {
        impl FromStr for $ty {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok($variant),)+
                    _ => Err(Error::argument(format!("unknown value `{s}`, expected one of: {}", [$($name),+].join(", ")))),
                }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let name = match self {
                    $(v if *v == $variant => $name,)+
                    _ => unreachable!(),
                };
                f.write_str(name)
            }
        }
    };
}

str_enum!(ExperimentKind { "asymmetry" => ExperimentKind::Asymmetry, "voter" => ExperimentKind::Voter, "halves" => ExperimentKind::Halves });
str_enum!(AsymmetryGenerator { "homophilous" => AsymmetryGenerator::Homophilous, "independent" => AsymmetryGenerator::Independent });
str_enum!(HalvesScenario { "contagion" => HalvesScenario::Contagion, "latent_trend" => HalvesScenario::LatentTrend });

/// Every knob of the three simulation experiments. Fields irrelevant to
/// `kind` are carried along and echoed but unused.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub n: usize,
    pub replications: usize,
    pub seed: u64,

    // asymmetry
    pub generator: AsymmetryGenerator,
    pub nominations: usize,
    pub noise_sd: f64,
    pub trend: f64,

    // voter
    pub p_in: f64,
    pub p_out: f64,
    pub flip_prob: f64,
    pub steps: u64,
    pub stride: u64,

    // halves
    pub scenario: HalvesScenario,
    pub halves_repetitions: usize,
    pub null_draws: usize,
    pub alpha: f64,
    pub strength: f64,
    pub horizon: usize,
    pub contagion_degree: f64,
    pub contagion_noise_sd: f64,
}

impl ExperimentConfig {
    /// Published settings for `kind`: 400 nodes and 5000 replications for the
    /// asymmetry experiment, 200 nodes for the others with 30 paired voter
    /// seeds or 200 halves-test runs.
    pub fn new(kind: ExperimentKind, seed: u64) -> Self {
        let (n, replications) = match kind {
            ExperimentKind::Asymmetry => (400, 5000),
            ExperimentKind::Voter => (200, 30),
            ExperimentKind::Halves => (200, 200),
        };
        Self {
            kind,
            n,
            replications,
            seed,
            generator: AsymmetryGenerator::Homophilous,
            nominations: 1,
            noise_sd: 0.02,
            trend: 0.4,
            p_in: 0.10,
            p_out: 0.01,
            flip_prob: 0.01,
            steps: 3000,
            stride: 50,
            scenario: HalvesScenario::Contagion,
            halves_repetitions: 20,
            null_draws: 199,
            alpha: 0.05,
            strength: 0.5,
            horizon: 20,
            contagion_degree: 5.0,
            contagion_noise_sd: 1.0,
        }
    }

    /// Names accepted by [`set`](Self::set), in declaration order.
    pub const KEYS: [&'static str; 22] = [
        "kind",
        "n",
        "replications",
        "seed",
        "generator",
        "nominations",
        "noise_sd",
        "trend",
        "p_in",
        "p_out",
        "flip_prob",
        "steps",
        "stride",
        "scenario",
        "halves_repetitions",
        "null_draws",
        "alpha",
        "strength",
        "horizon",
        "contagion_degree",
        "contagion_noise_sd",
        "reps",
    ];

    /// Sets one field from its textual value. `reps` is an alias of `replications`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn parse<V: FromStr>(key: &str, value: &str) -> Result<V> {
            value.trim().parse().map_err(|_| Error::argument(format!("bad value `{value}` for `{key}`")))
        }
        let v = value.trim();
        match key.trim() {
            "kind" => self.kind = v.parse()?,
            "n" => self.n = parse(key, v)?,
            "replications" | "reps" => self.replications = parse(key, v)?,
            "seed" => self.seed = parse(key, v)?,
            "generator" => self.generator = v.parse()?,
            "nominations" => self.nominations = parse(key, v)?,
            "noise_sd" => self.noise_sd = parse(key, v)?,
            "trend" => self.trend = parse(key, v)?,
            "p_in" => self.p_in = parse(key, v)?,
            "p_out" => self.p_out = parse(key, v)?,
            "flip_prob" => self.flip_prob = parse(key, v)?,
            "steps" => self.steps = parse(key, v)?,
            "stride" => self.stride = parse(key, v)?,
            "scenario" => self.scenario = v.parse()?,
            "halves_repetitions" => self.halves_repetitions = parse(key, v)?,
            "null_draws" => self.null_draws = parse(key, v)?,
            "alpha" => self.alpha = parse(key, v)?,
            "strength" => self.strength = parse(key, v)?,
            "horizon" => self.horizon = parse(key, v)?,
            "contagion_degree" => self.contagion_degree = parse(key, v)?,
            "contagion_noise_sd" => self.contagion_noise_sd = parse(key, v)?,
            other => return Err(Error::argument(format!("unknown configuration key `{other}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Argument(msg));
        if self.replications < 1 {
            return fail("replications must be at least 1".into());
        }
        if self.n < 2 {
            return fail(format!("n = {} must be at least 2", self.n));
        }
        let prob = |name: &str, p: f64| -> Result<()> {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(Error::argument(format!("{name} = {p} is not a probability")))
            }
        };
        let positive = |name: &str, v: f64| -> Result<()> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::argument(format!("{name} = {v} must be positive")))
            }
        };
        match self.kind {
            ExperimentKind::Asymmetry => {
                if self.nominations < 1 {
                    return fail("nominations must be at least 1".into());
                }
                positive("noise_sd", self.noise_sd)?;
                if !self.trend.is_finite() {
                    return fail("trend must be finite".into());
                }
                // six coefficients need at least seven rows for a residual variance
                if self.n < 7 {
                    return fail(format!("n = {} is too small for the asymmetry regression", self.n));
                }
            }
            ExperimentKind::Voter => {
                prob("p_in", self.p_in)?;
                prob("p_out", self.p_out)?;
                if self.p_out > self.p_in {
                    return fail(format!("p_out = {} exceeds p_in = {}", self.p_out, self.p_in));
                }
                if self.n % 2 != 0 {
                    return fail(format!("n = {} must be even for two equal clusters", self.n));
                }
                if !(0.0..0.5).contains(&self.flip_prob) {
                    return fail(format!("flip_prob = {} must lie in [0, 0.5)", self.flip_prob));
                }
                if self.stride < 1 {
                    return fail("stride must be at least 1".into());
                }
            }
            ExperimentKind::Halves => {
                if self.n < 4 {
                    return fail(format!("n = {} is too small to split into halves", self.n));
                }
                if self.halves_repetitions < 1 || self.null_draws < 1 {
                    return fail("halves_repetitions and null_draws must be at least 1".into());
                }
                if !(self.alpha > 0.0 && self.alpha < 1.0) {
                    return fail(format!("alpha = {} must lie in (0, 1)", self.alpha));
                }
                match self.scenario {
                    HalvesScenario::Contagion => {
                        if self.horizon < 2 {
                            return fail("horizon must be at least 2".into());
                        }
                        positive("contagion_noise_sd", self.contagion_noise_sd)?;
                        if !(self.contagion_degree > 0.0 && self.contagion_degree < (self.n - 1) as f64) {
                            return fail(format!("contagion_degree = {} out of range", self.contagion_degree));
                        }
                        if !self.strength.is_finite() {
                            return fail("strength must be finite".into());
                        }
                    }
                    HalvesScenario::LatentTrend => {
                        positive("noise_sd", self.noise_sd)?;
                        if self.nominations < 1 {
                            return fail("nominations must be at least 1".into());
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn expect_kind(&self, kind: ExperimentKind) -> Result<()> {
        if self.kind == kind {
            self.validate()
        } else {
            Err(Error::argument(format!("config is for `{}`, not `{kind}`", self.kind)))
        }
    }
}

/// Runs `f(0..count)` on the current rayon pool and returns results in index order.
fn replicate<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..count).into_par_iter().map(f).collect()
}

/// One histogram bin over `[lower, upper)`; the last bin is closed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bin {
    pub lower: f64,
    pub upper: f64,
    pub count: usize,
}

/// Equal-width histogram over the finite range of `values`.
pub fn histogram(values: &[f64], bins: usize) -> Vec<Bin> {
    let finite: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    if finite.is_empty() || bins == 0 {
        return Vec::new();
    }
    let lo = finite.iter().copied().fold(f64::INFINITY, f64::min);
    let mut hi = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi == lo {
        hi = lo + 1.0;
    }
    let width = (hi - lo) / bins as f64;
    let mut out: Vec<Bin> = (0..bins)
        .map(|b| Bin { lower: lo + b as f64 * width, upper: lo + (b + 1) as f64 * width, count: 0 })
        .collect();
    out[bins - 1].upper = hi;
    for v in finite {
        let b = (((v - lo) / width) as usize).min(bins - 1);
        out[b].count += 1;
    }
    out
}

fn fraction(hits: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        hits as f64 / total as f64
    }
}

fn mean(v: impl IntoIterator<Item = f64>) -> f64 {
    let (s, c) = v.into_iter().fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
    if c == 0 {
        f64::NAN
    } else {
        s / c as f64
    }
}
