//! Classic single-layer generators used as comparison baselines.

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{stream_rng, GenError};
use crate::embed::from_homogeneous;
use crate::graph::Hmn;

/// Baseline model and its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Baseline {
    /// Barabási–Albert with `m` edges per arriving node.
    BarabasiAlbert { n: u32, m: u32 },
    /// Erdős–Rényi `G(n, p)`.
    ErdosRenyi { n: u32, p: f64 },
    /// Uniform random graph with exactly `m` edges.
    Gnm { n: u32, m: u64 },
}

pub fn generate_baseline(kind: Baseline, seed: u64) -> Result<Hmn, GenError> {
    match kind {
        Baseline::BarabasiAlbert { n, m } => barabasi_albert(n, m, seed),
        Baseline::ErdosRenyi { n, p } => erdos_renyi(n, p, seed),
        Baseline::Gnm { n, m } => gnm(n, m, seed),
    }
}

/// Starts from a star on `m + 1` nodes; each later node attaches to `m`
/// distinct nodes drawn from the list of edge endpoints.
pub fn barabasi_albert(n: u32, m: u32, seed: u64) -> Result<Hmn, GenError> {
    if m < 1 || m >= n {
        return Err(GenError::Baseline(format!(
            "BA needs 1 <= m < n, got m = {m}, n = {n}"
        )));
    }
    let mut rng = stream_rng(seed, 0);
    let mut edges: Vec<(u32, u32)> = (1..=m).map(|leaf| (0, leaf)).collect();
    let mut repeated: Vec<u32> = Vec::with_capacity(2 * (n as usize) * (m as usize));
    for &(a, b) in &edges {
        repeated.push(a);
        repeated.push(b);
    }
    let mut targets: Vec<u32> = Vec::with_capacity(m as usize);
    for source in (m + 1)..n {
        targets.clear();
        while targets.len() < m as usize {
            let t = repeated[rng.random_range(0..repeated.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((source, t));
            repeated.push(t);
            repeated.push(source);
        }
    }
    Ok(from_homogeneous(n, &edges, false)?)
}

/// Each of the `n (n - 1) / 2` pairs is an edge independently with
/// probability `p`.
pub fn erdos_renyi(n: u32, p: f64, seed: u64) -> Result<Hmn, GenError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GenError::Baseline(format!("p must lie in [0, 1], got {p}")));
    }
    let mut rng = stream_rng(seed, 0);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            if rng.random_bool(p) {
                edges.push((a, b));
            }
        }
    }
    Ok(from_homogeneous(n, &edges, false)?)
}

/// `m` distinct pairs drawn uniformly.
pub fn gnm(n: u32, m: u64, seed: u64) -> Result<Hmn, GenError> {
    let pairs = n as u64 * (n as u64).saturating_sub(1) / 2;
    if m > pairs {
        return Err(GenError::Baseline(format!(
            "{m} edges requested but only {pairs} pairs exist"
        )));
    }
    let pairs = usize::try_from(pairs)
        .map_err(|_| GenError::Baseline("too many node pairs".into()))?;
    let mut rng = stream_rng(seed, 0);
    let mut picks: Vec<usize> = index::sample(&mut rng, pairs, m as usize).into_vec();
    picks.sort_unstable();
    let edges: Vec<(u32, u32)> = picks.into_iter().map(|k| pair_of(k as u64)).collect();
    Ok(from_homogeneous(n, &edges, false)?)
}

/// Inverse of the row-major numbering of pairs `(a, b)` with `a < b`, where
/// pair `(a, b)` has index `b (b - 1) / 2 + a`.
fn pair_of(k: u64) -> (u32, u32) {
    let mut b = ((1.0 + (1.0 + 8.0 * k as f64).sqrt()) / 2.0).floor() as u64;
    while b * (b - 1) / 2 > k {
        b -= 1;
    }
    while (b + 1) * b / 2 <= k {
        b += 1;
    }
    let a = k - b * (b - 1) / 2;
    (a as u32, b as u32)
}
