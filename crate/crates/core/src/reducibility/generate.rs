//! Random networks for tests and parameter studies.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::network::SpringNetwork;

use super::linear::{linear_effective_params, LinearConnectionSpec};

/// Random linear connection with `branches` branches of 2 to `max_len`
/// springs and parameters drawn uniformly from `[lo, hi]`. Draws again
/// until the result is generic.
pub fn random_linear_spec<R: Rng>(
    rng: &mut R,
    branches: usize,
    max_len: usize,
    lo: f64,
    hi: f64,
) -> LinearConnectionSpec {
    assert!(branches >= 1 && max_len >= 2 && 0.0 < lo && lo < hi);
    loop {
        let mut breaks = vec![1];
        let mut params = Vec::with_capacity(branches);
        for _ in 0..branches {
            let len = rng.random_range(2..=max_len);
            breaks.push(breaks[breaks.len() - 1] + len - 1);
            params.push(
                (0..len)
                    .map(|_| (rng.random_range(lo..hi), rng.random_range(lo..hi)))
                    .collect(),
            );
        }
        let spec = LinearConnectionSpec::new(breaks, params).expect("consistent by construction");
        if linear_effective_params(&spec).generic() {
            return spec;
        }
    }
}

/// Adds `extra` springs between random node pairs (never the driven pair)
/// with stiffness `a_extra` and yield force `r_extra` to a linear backbone.
pub fn perturbed_backbone<R: Rng>(
    rng: &mut R,
    spec: &LinearConnectionSpec,
    extra: usize,
    a_extra: f64,
    r_extra: f64,
) -> Result<SpringNetwork> {
    let n = spec.node_count();
    let mut springs = spec.springs();
    for _ in 0..extra {
        let (i, j) = random_pair(rng, n);
        springs.push((i, j, a_extra, r_extra));
    }
    SpringNetwork::new(n, &springs)
}

/// Five springs on four nodes: `1-2, 1-3, 2-3, 2-4, 3-4`.
pub fn random_bridge<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> SpringNetwork {
    let springs: Vec<_> = [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)]
        .into_iter()
        .map(|(i, j)| (i, j, rng.random_range(lo..hi), rng.random_range(lo..hi)))
        .collect();
    SpringNetwork::new(4, &springs).expect("bridge is connected")
}

/// Random spanning tree on `nodes` nodes plus extra edges up to `springs`
/// in total. Parameters are uniform in `[lo, hi]`.
pub fn random_connected<R: Rng>(
    rng: &mut R,
    nodes: usize,
    springs: usize,
    lo: f64,
    hi: f64,
) -> SpringNetwork {
    assert!(nodes >= 3 && springs >= nodes - 1);
    let mut order: Vec<usize> = (1..=nodes).collect();
    order.shuffle(rng);
    let mut edges = Vec::with_capacity(springs);
    for k in 1..nodes {
        // attach to an earlier node, avoiding the driven pair
        loop {
            let parent = order[rng.random_range(0..k)];
            let (i, j) = (parent.min(order[k]), parent.max(order[k]));
            if !(i == 1 && j == nodes) {
                edges.push((i, j));
                break;
            }
            if k == 1 {
                // only the driven pair is available; restart with a new order
                return random_connected(rng, nodes, springs, lo, hi);
            }
        }
    }
    while edges.len() < springs {
        edges.push(random_pair(rng, nodes));
    }
    let list: Vec<_> = edges
        .into_iter()
        .map(|(i, j)| (i, j, rng.random_range(lo..hi), rng.random_range(lo..hi)))
        .collect();
    SpringNetwork::new(nodes, &list).expect("spanning tree makes it connected")
}

fn random_pair<R: Rng>(rng: &mut R, n: usize) -> (usize, usize) {
    loop {
        let i = rng.random_range(1..=n);
        let j = rng.random_range(1..=n);
        let (lo, hi) = (i.min(j), i.max(j));
        if lo != hi && !(lo == 1 && hi == n) {
            return (lo, hi);
        }
    }
}
