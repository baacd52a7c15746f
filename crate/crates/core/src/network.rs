//! Spring networks and their configuration-space geometry.
//!
//! Nodes are numbered `1..=N`; the moving constraint acts on the distance
//! between nodes 1 and N. Springs are kept in a canonical order (by
//! `(min(i,j), max(i,j))`, parallel springs in insertion order) and every
//! m-vector in this crate uses that order. The deformation of spring `(i,j)`
//! with `i < j` is `x_j - x_i` relative to the zero configuration.

use std::collections::VecDeque;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::linalg::{dot, project_onto};

/// Default relative tolerance for rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spring {
    /// Lower node index (1-based).
    pub i: usize,
    /// Upper node index (1-based).
    pub j: usize,
    /// Stiffness in the elastic regime.
    pub a: f64,
    /// Maximal force magnitude.
    pub r: f64,
}

impl Spring {
    /// Elastic limit `r / a`.
    pub fn rho(&self) -> f64 {
        self.r / self.a
    }

    pub fn label(&self) -> String {
        format!("{}_{}", self.i, self.j)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpringNetwork {
    node_count: usize,
    springs: Vec<Spring>,
}

impl SpringNetwork {
    /// Builds a network driven on the pair `(1, node_count)`. Springs are
    /// given as `(i, j, a, r)` with 1-based nodes in any orientation.
    pub fn new(node_count: usize, springs: &[(usize, usize, f64, f64)]) -> Result<Self> {
        if node_count < 2 {
            return Err(Error::InvalidNetwork(format!(
                "need at least two nodes, got {node_count}"
            )));
        }
        let mut list = Vec::with_capacity(springs.len());
        for (k, &(i, j, a, r)) in springs.iter().enumerate() {
            if i == j {
                return Err(Error::InvalidNetwork(format!(
                    "spring {k} connects node {i} to itself"
                )));
            }
            if i == 0 || j == 0 || i > node_count || j > node_count {
                return Err(Error::InvalidNetwork(format!(
                    "spring {k} references a node outside 1..={node_count}"
                )));
            }
            let (lo, hi) = (i.min(j), i.max(j));
            if lo == 1 && hi == node_count {
                return Err(Error::InvalidNetwork(format!(
                    "spring {k} coincides with the driven pair (1, {node_count})"
                )));
            }
            if !(a > 0.0 && a.is_finite()) || !(r > 0.0 && r.is_finite()) {
                return Err(Error::InvalidNetwork(format!(
                    "spring {k} needs positive finite stiffness and yield force"
                )));
            }
            list.push(Spring { i: lo, j: hi, a, r });
        }
        // stable sort keeps insertion order among parallel springs
        list.sort_by_key(|s| (s.i, s.j));
        let net = Self {
            node_count,
            springs: list,
        };
        net.check_connected()?;
        Ok(net)
    }

    fn check_connected(&self) -> Result<()> {
        let n = self.node_count;
        let mut adj = vec![Vec::new(); n + 1];
        for s in &self.springs {
            adj[s.i].push(s.j);
            adj[s.j].push(s.i);
        }
        let mut seen = vec![false; n + 1];
        let mut queue = VecDeque::from([1]);
        seen[1] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        match (1..=n).find(|&v| !seen[v]) {
            Some(v) => Err(Error::Disconnected(v)),
            None => Ok(()),
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn springs(&self) -> &[Spring] {
        &self.springs
    }

    pub fn spring_count(&self) -> usize {
        self.springs.len()
    }

    /// Indices of springs attached to node 1.
    pub fn springs_at_first_node(&self) -> impl Iterator<Item = usize> + '_ {
        self.springs
            .iter()
            .enumerate()
            .filter(|(_, s)| s.i == 1)
            .map(|(k, _)| k)
    }

    /// Spring deformations produced by the node displacement `y` (indexed by
    /// 1-based node, `y[0]` unused).
    pub fn deformation_of(&self, y: &[f64]) -> Vec<f64> {
        self.springs.iter().map(|s| y[s.j] - y[s.i]).collect()
    }

    fn unit_displacement(&self, node: usize) -> Vec<f64> {
        let mut y = vec![0.0; self.node_count + 1];
        y[node] = 1.0;
        self.deformation_of(&y)
    }
}

/// Configuration geometry of a network in rescaled coordinates
/// `u = A^{1/2} e`.
#[derive(Debug, Clone)]
pub struct ConfigurationGeometry {
    sqrt_a: Vec<f64>,
    halfwidths: Vec<f64>,
    w_basis: Vec<Vec<f64>>,
    v_basis: Vec<Vec<f64>>,
    k0: Vec<f64>,
    f0: Vec<f64>,
}

impl ConfigurationGeometry {
    pub fn build(net: &SpringNetwork) -> Result<Self> {
        Self::build_with_tol(net, DEFAULT_RANK_TOL)
    }

    pub fn build_with_tol(net: &SpringNetwork, rank_tol: f64) -> Result<Self> {
        let m = net.spring_count();
        let sqrt_a: Vec<f64> = net.springs().iter().map(|s| s.a.sqrt()).collect();
        let halfwidths = net
            .springs()
            .iter()
            .zip(&sqrt_a)
            .map(|(s, q)| s.r / q)
            .collect();
        let w_basis: Vec<Vec<f64>> = (2..net.node_count())
            .map(|v| net.unit_displacement(v))
            .collect();
        let k0 = net.unit_displacement(net.node_count());

        // U = A^{1/2} W; V is its orthogonal complement, read off as the unit
        // eigenspace of I - P_U.
        let p_v = if w_basis.is_empty() {
            DMatrix::<f64>::identity(m, m)
        } else {
            let u_mat = DMatrix::from_fn(m, w_basis.len(), |r, c| sqrt_a[r] * w_basis[c][r]);
            let svd = u_mat.svd(true, false);
            let u = svd.u.expect("requested U");
            let smax = svd.singular_values.max();
            let mut p = DMatrix::<f64>::identity(m, m);
            for (c, &s) in svd.singular_values.iter().enumerate() {
                if s > rank_tol * smax {
                    let col = u.column(c);
                    p -= col * col.transpose();
                }
            }
            p
        };
        let eig = SymmetricEigen::new(p_v);
        let mut order: Vec<usize> = (0..m).filter(|&k| eig.eigenvalues[k] > 0.5).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let mut v_basis: Vec<Vec<f64>> = order
            .iter()
            .map(|&k| eig.eigenvectors.column(k).iter().copied().collect())
            .collect();
        // deterministic signs: largest-magnitude entry positive
        for v in &mut v_basis {
            let lead = v.iter().copied().fold(
                0.0_f64,
                |best, x| if x.abs() > best.abs() { x } else { best },
            );
            if lead < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
        }

        let drive: Vec<f64> = k0.iter().zip(&sqrt_a).map(|(k, q)| k * q).collect();
        let f0 = project_onto(&v_basis, &drive);
        if crate::linalg::norm(&f0) <= rank_tol * crate::linalg::norm(&drive) {
            return Err(Error::DegenerateDrive);
        }
        Ok(Self {
            sqrt_a,
            halfwidths,
            w_basis,
            v_basis,
            k0,
            f0,
        })
    }

    pub fn dim(&self) -> usize {
        self.sqrt_a.len()
    }

    pub fn sqrt_a(&self) -> &[f64] {
        &self.sqrt_a
    }

    /// Half-widths `r / sqrt(a)` of the scaled box of admissible stresses.
    pub fn halfwidths(&self) -> &[f64] {
        &self.halfwidths
    }

    pub fn w_basis(&self) -> &[Vec<f64>] {
        &self.w_basis
    }

    /// Orthonormal basis of the subspace V.
    pub fn v_basis(&self) -> &[Vec<f64>] {
        &self.v_basis
    }

    pub fn k0(&self) -> &[f64] {
        &self.k0
    }

    /// Projection of `A^{1/2} k0` onto V.
    pub fn f0(&self) -> &[f64] {
        &self.f0
    }

    pub fn project_v(&self, x: &[f64]) -> Vec<f64> {
        project_onto(&self.v_basis, x)
    }

    pub fn clamp_box(&self, x: &mut [f64]) {
        for (xi, b) in x.iter_mut().zip(&self.halfwidths) {
            *xi = xi.clamp(-b, *b);
        }
    }

    /// Largest violation of the box bounds (zero when inside).
    pub fn box_excess(&self, x: &[f64]) -> (usize, f64) {
        x.iter()
            .zip(&self.halfwidths)
            .enumerate()
            .map(|(k, (xi, b))| (k, xi.abs() - b))
            .fold((0, f64::NEG_INFINITY), |best, cur| {
                if cur.1 > best.1 {
                    cur
                } else {
                    best
                }
            })
    }

    /// Smallest box half-width.
    pub fn min_halfwidth(&self) -> f64 {
        self.halfwidths
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Spring stresses `sigma = A^{1/2} u` and the constraint reaction
    /// `R = -sum_{(1j)} sigma_1j`.
    pub fn stresses_and_reaction(
        &self,
        net: &SpringNetwork,
        u: &[f64],
        tol: f64,
    ) -> Result<(Vec<f64>, f64)> {
        let (index, excess) = self.box_excess(u);
        if excess > tol * self.halfwidths[index].max(1.0) {
            return Err(Error::Infeasible { index, excess });
        }
        let sigma: Vec<f64> = u.iter().zip(&self.sqrt_a).map(|(x, q)| x * q).collect();
        let reaction = -net.springs_at_first_node().map(|k| sigma[k]).sum::<f64>();
        Ok((sigma, reaction))
    }

    /// Force balance at the interior nodes: `|<sigma, w>| <= tol * |sigma|`
    /// for every generator `w` of W.
    pub fn validate_balance(&self, sigma: &[f64], tol: f64) -> bool {
        let scale = crate::linalg::norm(sigma);
        self.w_basis
            .iter()
            .all(|w| dot(sigma, w).abs() <= tol * scale)
    }
}
