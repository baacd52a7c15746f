//! Linear connections: `S` disjoint paths from node 1 to node N.
//!
//! Branch `n` runs through the nodes `1, i_n + 1, ..., i_{n+1}, N` where
//! `1 = i_0 < i_1 < ... < i_S = N - 1`. Every spring on a branch carries the
//! same stress, which follows a single effective stop of the input.

use crate::error::{Error, Result};
use crate::network::SpringNetwork;

/// Relative tolerance under which two thresholds or ratios count as equal.
const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearConnectionSpec {
    breaks: Vec<usize>,
    branches: Vec<Vec<(f64, f64)>>,
}

impl LinearConnectionSpec {
    /// `breaks` are `i_0, ..., i_S`; `branches[n]` lists `(a, r)` of the
    /// springs along branch `n` from node 1 to node N.
    pub fn new(breaks: Vec<usize>, branches: Vec<Vec<(f64, f64)>>) -> Result<Self> {
        if breaks.len() < 2 || breaks[0] != 1 {
            return Err(Error::InvalidNetwork(
                "branch breaks must start at node 1 and hold at least two entries".into(),
            ));
        }
        if breaks.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidNetwork("branch breaks must increase".into()));
        }
        if branches.len() != breaks.len() - 1 {
            return Err(Error::InvalidNetwork(format!(
                "{} branches given for {} breaks",
                branches.len(),
                breaks.len()
            )));
        }
        for (n, b) in branches.iter().enumerate() {
            let expected = breaks[n + 1] - breaks[n] + 1;
            if b.len() != expected {
                return Err(Error::InvalidNetwork(format!(
                    "branch {n} needs {expected} springs, got {}",
                    b.len()
                )));
            }
        }
        Ok(Self { breaks, branches })
    }

    pub fn breaks(&self) -> &[usize] {
        &self.breaks
    }

    pub fn branches(&self) -> &[Vec<(f64, f64)>] {
        &self.branches
    }

    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    pub fn node_count(&self) -> usize {
        self.breaks[self.breaks.len() - 1] + 1
    }

    /// Nodes along branch `n`, from 1 to N.
    pub fn branch_nodes(&self, n: usize) -> Vec<usize> {
        let mut nodes = vec![1];
        nodes.extend(self.breaks[n] + 1..=self.breaks[n + 1]);
        nodes.push(self.node_count());
        nodes
    }

    /// Springs `(i, j, a, r)` of every branch, branch by branch.
    pub fn springs(&self) -> Vec<(usize, usize, f64, f64)> {
        (0..self.branch_count())
            .flat_map(|n| {
                let nodes = self.branch_nodes(n);
                nodes
                    .windows(2)
                    .zip(&self.branches[n])
                    .map(|(w, &(a, r))| (w[0], w[1], a, r))
                    .collect::<Vec<_>>()
            })
            .collect()
    }

    pub fn to_network(&self) -> Result<SpringNetwork> {
        SpringNetwork::new(self.node_count(), &self.springs())
    }
}

/// Effective stop of one branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchEffective {
    /// Harmonic sum of the stiffnesses.
    pub a: f64,
    /// Smallest yield force on the branch.
    pub r: f64,
    /// Effective elastic limit `r / a`.
    pub rho: f64,
}

/// Stiffnesses in series add harmonically; the weakest spring yields first.
pub fn branch_effective(springs: &[(f64, f64)]) -> BranchEffective {
    let a = 1.0 / springs.iter().map(|s| 1.0 / s.0).sum::<f64>();
    let r = springs.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
    BranchEffective { a, r, rho: r / a }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GenericityTie {
    /// Two springs `(first, second)` on `branch` share a yield force.
    Threshold {
        branch: usize,
        first: usize,
        second: usize,
    },
    /// Two branches reach their yield force at the same input.
    Ratio { first: usize, second: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearEffective {
    pub branches: Vec<BranchEffective>,
    pub ties: Vec<GenericityTie>,
}

impl LinearEffective {
    pub fn generic(&self) -> bool {
        self.ties.is_empty()
    }
}

fn tied(x: f64, y: f64) -> bool {
    (x - y).abs() <= TIE_TOL * x.abs().max(y.abs())
}

/// Effective stop per branch plus the genericity ties: equal yield forces
/// within a branch and equal effective elastic limits across branches.
pub fn linear_effective_params(spec: &LinearConnectionSpec) -> LinearEffective {
    let branches: Vec<BranchEffective> =
        spec.branches.iter().map(|b| branch_effective(b)).collect();
    let mut ties = Vec::new();
    for (n, b) in spec.branches.iter().enumerate() {
        for p in 0..b.len() {
            for q in p + 1..b.len() {
                if tied(b[p].1, b[q].1) {
                    ties.push(GenericityTie::Threshold {
                        branch: n,
                        first: p,
                        second: q,
                    });
                }
            }
        }
    }
    for p in 0..branches.len() {
        for q in p + 1..branches.len() {
            if tied(branches[p].rho, branches[q].rho) {
                ties.push(GenericityTie::Ratio {
                    first: p,
                    second: q,
                });
            }
        }
    }
    LinearEffective { branches, ties }
}
