//! Outcome processes on a fixed network.
//!
//! * [`latent_trend_panel`]: outcomes driven only by each node's latent trait, no interaction.
//! * [`voter_run`]: noisy voter model, choices copied from random neighbours.
//! * [`contagion_panel`]: linear influence from the out-neighbour mean.

use std::io::{Read, Write};

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::network::SocialNetwork;
use crate::population::{TraitAssignment, TraitKind};
use crate::{Error, Real, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutcomeKind {
    Continuous,
    Binary,
}

/// Time-major table `values[k][i]`: outcome of node `i` at the `k`-th recorded
/// time, whose label is `times[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomePanel<T> {
    kind: OutcomeKind,
    times: Vec<u64>,
    values: Vec<Vec<T>>,
}

impl<T: Real> OutcomePanel<T> {
    pub fn new(kind: OutcomeKind, times: Vec<u64>, values: Vec<Vec<T>>) -> Result<Self> {
        Error::check_len(times.len(), values.len())?;
        let n = values.first().map(Vec::len).ok_or_else(|| Error::argument("panel has no time slices"))?;
        if n == 0 {
            return Err(Error::argument("panel has no nodes"));
        }
        for slice in &values {
            Error::check_len(n, slice.len())?;
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::argument("panel times must be strictly increasing"));
        }
        if kind == OutcomeKind::Binary
            && values.iter().flatten().any(|&v| v != T::zero() && v != T::one())
        {
            return Err(Error::argument("binary panel contains values other than 0 and 1"));
        }
        Ok(Self { kind, times, values })
    }

    pub fn kind(&self) -> OutcomeKind {
        self.kind
    }

    pub fn node_count(&self) -> usize {
        self.values[0].len()
    }

    /// Number of recorded time slices.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn times(&self) -> &[u64] {
        &self.times
    }

    pub fn slice(&self, k: usize) -> &[T] {
        &self.values[k]
    }

    pub fn slices(&self) -> &[Vec<T>] {
        &self.values
    }

    /// Long-format CSV with columns `t,node_id,y`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["t", "node_id", "y"])?;
        for (t, slice) in self.times.iter().zip(&self.values) {
            for (i, y) in slice.iter().enumerate() {
                out.write_record([t.to_string(), i.to_string(), y.to_string()])?;
            }
        }
        out.flush()?;
        Ok(())
    }

    /// Reads the long format back. Every `(t, node)` cell must be present exactly once.
    pub fn read_csv<R: Read>(kind: OutcomeKind, r: R) -> Result<Self> {
        #[derive(Deserialize)]
        struct Row {
            t: u64,
            node_id: usize,
            y: f64,
        }
        let rows: Vec<Row> = csv::Reader::from_reader(r).deserialize().collect::<Result<_, _>>()?;
        let mut times: Vec<u64> = rows.iter().map(|r| r.t).collect();
        times.sort_unstable();
        times.dedup();
        let n = rows.iter().map(|r| r.node_id + 1).max().unwrap_or(0);
        let mut values = vec![vec![None; n]; times.len()];
        for (k, row) in rows.iter().enumerate() {
            let slot = times.binary_search(&row.t).expect("time collected above");
            let cell = &mut values[slot][row.node_id];
            if cell.replace(T::of(row.y)).is_some() {
                return Err(Error::Parse { line: k + 2, message: "duplicate (t, node_id)".into() });
            }
        }
        let values = values
            .into_iter()
            .map(|s| s.into_iter().collect::<Option<Vec<T>>>())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::argument("panel CSV is not rectangular"))?;
        Self::new(kind, times, values)
    }
}

fn gaussian(sd: f64) -> Result<Normal<f64>> {
    if !(sd > 0.0 && sd.is_finite()) {
        return Err(Error::argument(format!("noise sd must be positive, got {sd}")));
    }
    Normal::new(0.0, sd).map_err(|e| Error::argument(e.to_string()))
}

/// Three-slice panel with a trait-dependent cubic level and linear trend:
///
/// ```text
/// Y(0) = (X − ½)³        + ε₀
/// Y(1) = Y(0) + trend·X  + ε₁
/// Y(2) = Y(1) + trend·X  + ε₂      ε ~ N(0, noise_sd²) independent
/// ```
pub fn latent_trend_panel<T: Real, R: Rng + ?Sized>(
    traits: &TraitAssignment<T>,
    noise_sd: f64,
    trend: f64,
    rng: &mut R,
) -> Result<OutcomePanel<T>> {
    if traits.kind() != TraitKind::Continuous {
        return Err(Error::argument("latent trend panel needs continuous traits"));
    }
    let noise = gaussian(noise_sd)?;
    let x = traits.latent();
    let trend = T::of(trend);
    let half = T::of(0.5);
    let y0: Vec<T> = x.iter().map(|&v| (v - half).powi(3) + T::of(noise.sample(rng))).collect();
    let step = |prev: &[T], rng: &mut R| -> Vec<T> {
        prev.iter().zip(x).map(|(&p, &v)| p + trend * v + T::of(noise.sample(rng))).collect()
    };
    let y1 = step(&y0, rng);
    let y2 = step(&y1, rng);
    OutcomePanel::new(OutcomeKind::Continuous, vec![0, 1, 2], vec![y0, y1, y2])
}

/// Fair-coin initial choices, independent of everything else.
pub fn voter_init<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<u8> {
    (0..n).map(|_| u8::from(rng.random_bool(0.5))).collect()
}

/// Noisy voter model on a symmetric network.
///
/// Each step picks an updater uniformly from all nodes and a neighbour
/// uniformly from its neighbours; the updater copies the neighbour's choice,
/// or takes the opposite choice with probability `flip_prob`. Isolated
/// updaters keep their choice.
#[derive(Debug, Clone)]
pub struct VoterChain<'a> {
    net: &'a SocialNetwork,
    state: Vec<u8>,
    flip_prob: f64,
    steps: u64,
}

impl<'a> VoterChain<'a> {
    pub fn new(net: &'a SocialNetwork, y0: Vec<u8>, flip_prob: f64) -> Result<Self> {
        if !net.is_symmetric() {
            return Err(Error::argument("voter model needs a symmetric network"));
        }
        if y0.is_empty() {
            return Err(Error::argument("initial configuration is empty"));
        }
        Error::check_len(net.node_count(), y0.len())?;
        if y0.iter().any(|&v| v > 1) {
            return Err(Error::argument("initial configuration must be binary"));
        }
        if !(0.0..0.5).contains(&flip_prob) {
            return Err(Error::argument(format!("flip probability {flip_prob} outside [0, 0.5)")));
        }
        Ok(Self { net, state: y0, flip_prob, steps: 0 })
    }

    pub fn state(&self) -> &[u8] {
        &self.state
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Advances one update; returns the updater unless it was isolated.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Option<usize> {
        self.steps += 1;
        let n = self.state.len();
        let updater = rng.random_range(0..n);
        let nbrs = self.net.out_neighbors(updater);
        if nbrs.is_empty() {
            return None;
        }
        let source = nbrs[rng.random_range(0..nbrs.len())];
        let copied = self.state[source];
        let flipped = self.flip_prob > 0.0 && rng.random::<f64>() < self.flip_prob;
        self.state[updater] = if flipped { 1 - copied } else { copied };
        Some(updater)
    }

    fn snapshot<T: Real>(&self) -> Vec<T> {
        self.state.iter().map(|&v| T::of(f64::from(v))).collect()
    }
}

/// Checkpoints `0, stride, 2·stride, …` up to and including `steps`.
pub fn stride_checkpoints(steps: u64, stride: u64) -> Vec<u64> {
    let stride = stride.max(1);
    let mut out: Vec<u64> = (0..=steps).step_by(stride as usize).collect();
    if out.last() != Some(&steps) {
        out.push(steps);
    }
    out
}

/// Runs [`VoterChain`] for `steps` updates, recording the configuration at each
/// of `checkpoints` (strictly increasing, at most `steps`).
pub fn voter_run<T: Real, R: Rng + ?Sized>(
    net: &SocialNetwork,
    y0: &[u8],
    steps: u64,
    flip_prob: f64,
    checkpoints: &[u64],
    rng: &mut R,
) -> Result<OutcomePanel<T>> {
    let mut chain = VoterChain::new(net, y0.to_vec(), flip_prob)?;
    if checkpoints.is_empty() || checkpoints.last().is_some_and(|&c| c > steps) {
        return Err(Error::argument("checkpoints must be non-empty and no later than the horizon"));
    }
    let mut values = Vec::with_capacity(checkpoints.len());
    for &cp in checkpoints {
        while chain.steps() < cp {
            chain.step(rng);
        }
        values.push(chain.snapshot());
    }
    while chain.steps() < steps {
        chain.step(rng);
    }
    OutcomePanel::new(OutcomeKind::Binary, checkpoints.to_vec(), values)
}

/// Linear contagion: `Y(0) ~ N(0, 1)` and
/// `Y(t) = Y(t−1) + strength · mean_{j ∈ out(i)} Y_j(t−1) + N(0, noise_sd²)`,
/// with the mean taken as zero for nodes without out-neighbours.
pub fn contagion_panel<T: Real, R: Rng + ?Sized>(
    net: &SocialNetwork,
    strength: f64,
    horizon: usize,
    noise_sd: f64,
    rng: &mut R,
) -> Result<OutcomePanel<T>> {
    let start = gaussian(1.0)?;
    let y0: Vec<T> = (0..net.node_count()).map(|_| T::of(start.sample(rng))).collect();
    contagion_panel_from(net, y0, strength, horizon, noise_sd, rng)
}

/// [`contagion_panel`] from a given initial slice.
pub fn contagion_panel_from<T: Real, R: Rng + ?Sized>(
    net: &SocialNetwork,
    y0: Vec<T>,
    strength: f64,
    horizon: usize,
    noise_sd: f64,
    rng: &mut R,
) -> Result<OutcomePanel<T>> {
    if horizon == 0 {
        return Err(Error::argument("contagion panel needs at least one step"));
    }
    Error::check_len(net.node_count(), y0.len())?;
    let noise = gaussian(noise_sd)?;
    let n = net.node_count();
    let strength = T::of(strength);
    let mut values: Vec<Vec<T>> = Vec::with_capacity(horizon + 1);
    values.push(y0);
    for _ in 0..horizon {
        let prev = values.last().expect("initial slice pushed");
        let next = (0..n)
            .map(|i| {
                let nbrs = net.out_neighbors(i);
                let influence = if nbrs.is_empty() {
                    T::zero()
                } else {
                    nbrs.iter().map(|&j| prev[j]).sum::<T>() / T::of(nbrs.len() as f64)
                };
                prev[i] + strength * influence + T::of(noise.sample(rng))
            })
            .collect();
        values.push(next);
    }
    OutcomePanel::new(OutcomeKind::Continuous, (0..=horizon as u64).collect(), values)
}
