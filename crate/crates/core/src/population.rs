//! Node traits and the network generators built on them.
//!
//! Two homophilous generators are provided: the two-stage nomination network
//! (continuous latent trait, directed nominations) and a planted two-block
//! partition (binary trait, undirected). Each has a trait-independent
//! counterpart of matched density used as a control.

use std::io::{Read, Write};

use rand::distr::{Distribution, Open01};
use rand::seq::index::sample_weighted;
use rand::Rng;
use rand_distr::Normal;
use serde::{Deserialize, Serialize};

use crate::network::SocialNetwork;
use crate::scalar::inv_logit;
use crate::{Error, Real, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TraitKind {
    Continuous,
    Binary,
}

/// Per-node latent trait `x` and optional observed trait `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct TraitAssignment<T> {
    kind: TraitKind,
    x: Vec<T>,
    z: Option<Vec<T>>,
}

impl<T: Real> TraitAssignment<T> {
    /// Continuous traits must lie in `[0, 1]`, binary traits in `{0, 1}`.
    pub fn new(kind: TraitKind, x: Vec<T>) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::argument("trait vector is empty"));
        }
        let ok = match kind {
            TraitKind::Continuous => x.iter().all(|&v| v >= T::zero() && v <= T::one()),
            TraitKind::Binary => x.iter().all(|&v| v == T::zero() || v == T::one()),
        };
        if !ok {
            return Err(Error::argument(format!("trait values outside the {kind:?} domain")));
        }
        Ok(Self { kind, x, z: None })
    }

    pub fn with_observed(mut self, z: Vec<T>) -> Result<Self> {
        Error::check_len(self.x.len(), z.len())?;
        self.z = Some(z);
        Ok(self)
    }

    /// Attaches `z = x + N(0, noise_sd²)`, a noisy observable proxy for the latent trait.
    pub fn with_noisy_observed<R: Rng + ?Sized>(self, noise_sd: f64, rng: &mut R) -> Result<Self> {
        let noise = normal(noise_sd)?;
        let z = self.x.iter().map(|&v| v + T::of(noise.sample(rng))).collect();
        self.with_observed(z)
    }

    pub fn kind(&self) -> TraitKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn latent(&self) -> &[T] {
        &self.x
    }

    pub fn observed(&self) -> Option<&[T]> {
        self.z.as_deref()
    }

    /// CSV with columns `node_id,x,z`; `z` is empty when absent.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["node_id", "x", "z"])?;
        for (i, v) in self.x.iter().enumerate() {
            let z = self.z.as_ref().map(|z| z[i].to_string()).unwrap_or_default();
            out.write_record([i.to_string(), v.to_string(), z])?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(kind: TraitKind, r: R) -> Result<Self> {
        #[derive(Deserialize)]
        struct Row {
            node_id: usize,
            x: f64,
            z: Option<f64>,
        }
        let mut rows: Vec<Row> = csv::Reader::from_reader(r).deserialize().collect::<Result<_, _>>()?;
        rows.sort_by_key(|r| r.node_id);
        for (k, row) in rows.iter().enumerate() {
            if row.node_id != k {
                return Err(Error::Parse { line: k + 2, message: format!("missing node {k}") });
            }
        }
        let traits = Self::new(kind, rows.iter().map(|r| T::of(r.x)).collect())?;
        let zs: Vec<Option<f64>> = rows.iter().map(|r| r.z).collect();
        if zs.iter().all(Option::is_some) {
            traits.with_observed(zs.into_iter().map(|z| T::of(z.unwrap())).collect())
        } else if zs.iter().all(Option::is_none) {
            Ok(traits)
        } else {
            Err(Error::argument("observed trait column is only partially filled"))
        }
    }
}

fn normal(sd: f64) -> Result<Normal<f64>> {
    Normal::new(0.0, sd).map_err(|e| Error::argument(format!("normal sd {sd}: {e}")))
}

/// `n` independent Uniform(0, 1) latent traits.
pub fn sample_latent_uniform<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<TraitAssignment<T>> {
    if n == 0 {
        return Err(Error::argument("n must be at least 1"));
    }
    let x = (0..n).map(|_| T::of(Open01.sample(rng))).collect();
    TraitAssignment::new(TraitKind::Continuous, x)
}

/// Probability that two nodes share a pool (acquaintance) edge.
pub fn pool_edge_probability<T: Real>(xi: T, xj: T) -> T {
    inv_logit(T::of(-3.0) * (xi - xj).abs())
}

/// Unnormalised weight with which a node is chosen as a nominee: centrally
/// placed nodes are preferred regardless of the nominator's own trait.
pub fn nomination_weight<T: Real>(xj: T) -> T {
    inv_logit(-(xj - T::of(0.5)).abs())
}

/// Expected pool-edge probability for two independent Uniform(0, 1) traits,
/// `∫₀¹ 2(1 − d) σ(−3d) dd`, by composite Simpson's rule.
pub fn mean_pool_probability() -> f64 {
    let m = 2000;
    let h = 1.0 / m as f64;
    let f = |d: f64| 2.0 * (1.0 - d) * pool_edge_probability(0.0, d);
    let mut acc = f(0.0) + f(1.0);
    for k in 1..m {
        acc += if k % 2 == 1 { 4.0 } else { 2.0 } * f(k as f64 * h);
    }
    acc * h / 3.0
}

/// Two-stage homophilous nomination network (see [`nomination_network_with_pool`]).
pub fn nomination_network<T: Real, R: Rng + ?Sized>(
    traits: &TraitAssignment<T>,
    nominations_per_node: usize,
    rng: &mut R,
) -> Result<SocialNetwork> {
    nomination_network_with_pool(traits, nominations_per_node, rng).map(|(net, _)| net)
}

/// Stage 1 links every unordered pair into an undirected pool with
/// probability `σ(−3|xᵢ − xⱼ|)`. Stage 2 lets each node nominate
/// `nominations_per_node` distinct pool neighbours without replacement,
/// weighted by `σ(−|xⱼ − ½|)`. Nodes with fewer pool neighbours nominate all of
/// them; nodes with an empty pool keep out-degree zero.
///
/// Returns the directed nomination network and the symmetric pool.
pub fn nomination_network_with_pool<T: Real, R: Rng + ?Sized>(
    traits: &TraitAssignment<T>,
    nominations_per_node: usize,
    rng: &mut R,
) -> Result<(SocialNetwork, SocialNetwork)> {
    if traits.kind() != TraitKind::Continuous {
        return Err(Error::argument("nomination network needs continuous traits"));
    }
    let x = traits.latent();
    let pool = bernoulli_pool(x.len(), rng, |i, j| pool_edge_probability(x[i], x[j]).as_f64())?;
    let weights: Vec<f64> = x.iter().map(|&v| nomination_weight(v).as_f64()).collect();
    let net = nominate(&pool, nominations_per_node, rng, |j| weights[j])?;
    Ok((net, pool))
}

/// Trait-independent counterpart of [`nomination_network`]: an Erdős–Rényi
/// pool with edge probability `pool_probability`, from which each node
/// nominates uniformly at random.
pub fn uniform_nomination_network<R: Rng + ?Sized>(
    n: usize,
    pool_probability: f64,
    nominations_per_node: usize,
    rng: &mut R,
) -> Result<SocialNetwork> {
    check_probability("pool_probability", pool_probability)?;
    let pool = bernoulli_pool(n, rng, |_, _| pool_probability)?;
    nominate(&pool, nominations_per_node, rng, |_| 1.0)
}

fn nominate<R, F>(pool: &SocialNetwork, k: usize, rng: &mut R, weight: F) -> Result<SocialNetwork>
where
    R: Rng + ?Sized,
    F: Fn(usize) -> f64,
{
    if k == 0 {
        return Err(Error::argument("nominations_per_node must be at least 1"));
    }
    let mut edges = Vec::with_capacity(pool.node_count() * k);
    for i in 0..pool.node_count() {
        let nbrs = pool.out_neighbors(i);
        if nbrs.len() <= k {
            edges.extend(nbrs.iter().map(|&j| (i, j)));
            continue;
        }
        let picked = sample_weighted(rng, nbrs.len(), |m| weight(nbrs[m]), k)
            .map_err(|e| Error::argument(format!("nomination weights: {e}")))?;
        edges.extend(picked.into_iter().map(|m| (i, nbrs[m])));
    }
    SocialNetwork::from_edges(pool.node_count(), edges)
}

/// Symmetric network linking each unordered pair independently.
fn bernoulli_pool<R, F>(n: usize, rng: &mut R, prob: F) -> Result<SocialNetwork>
where
    R: Rng + ?Sized,
    F: Fn(usize, usize) -> f64,
{
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() < prob(i, j) {
                pairs.push((i, j));
            }
        }
    }
    SocialNetwork::from_undirected(n, pairs)
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::argument(format!("{name} = {p} is not a probability")))
    }
}

/// Two equal clusters with binary trait equal to the cluster label; pairs link
/// with `p_in` inside a cluster and `p_out` across.
pub fn planted_partition_network<T: Real, R: Rng + ?Sized>(
    n: usize,
    p_in: f64,
    p_out: f64,
    rng: &mut R,
) -> Result<(TraitAssignment<T>, SocialNetwork)> {
    check_probability("p_in", p_in)?;
    check_probability("p_out", p_out)?;
    if p_out > p_in {
        return Err(Error::argument(format!("p_out = {p_out} exceeds p_in = {p_in}")));
    }
    if n < 2 || n % 2 != 0 {
        return Err(Error::argument(format!("planted partition needs an even n >= 2, got {n}")));
    }
    let label = |i: usize| usize::from(i >= n / 2);
    let traits = TraitAssignment::new(TraitKind::Binary, (0..n).map(|i| T::of(label(i) as f64)).collect())?;
    let net = bernoulli_pool(n, rng, |i, j| if label(i) == label(j) { p_in } else { p_out })?;
    Ok((traits, net))
}

/// Erdős–Rényi control graph with expected mean degree `target_avg_degree`.
pub fn matched_control_network<R: Rng + ?Sized>(
    n: usize,
    target_avg_degree: f64,
    rng: &mut R,
) -> Result<SocialNetwork> {
    if n < 2 || !(target_avg_degree > 0.0 && target_avg_degree < (n - 1) as f64) {
        return Err(Error::argument(format!(
            "target degree {target_avg_degree} must lie in (0, {})",
            n.saturating_sub(1)
        )));
    }
    let p = target_avg_degree / (n - 1) as f64;
    bernoulli_pool(n, rng, |_, _| p)
}

/// Fraction of edges joining nodes with the same binary trait.
pub fn same_trait_edge_fraction<T: Real>(net: &SocialNetwork, traits: &TraitAssignment<T>) -> f64 {
    let x = traits.latent();
    let (mut same, mut total) = (0usize, 0usize);
    for (i, j) in net.edges() {
        total += 1;
        same += usize::from(x[i] == x[j]);
    }
    if total == 0 {
        0.0
    } else {
        same as f64 / total as f64
    }
}
