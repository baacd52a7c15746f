//! Exact vector loading curve.
//!
//! Under the increasing input `g(t) = t` the state moves from the origin
//! with velocity `f0`, hits a box facet, then slides with the projection of
//! `f0` onto the subspace of `V` that keeps every tight coordinate fixed,
//! and so on until the projected velocity vanishes. The resulting polyline
//! `B_0 B_1 ... B_l` parametrized by input distance is the vector loading
//! curve `u*`.

use crate::error::{Error, Result};
use crate::hysteresis::{EvalMode, MainExtremaMemory};
use crate::linalg::{axpy, dot, norm, norm_inf, OrthoBasis};
use crate::network::ConfigurationGeometry;

/// A tight box constraint: coordinate `index` sits at `sign * halfwidth`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ActiveConstraint {
    pub index: usize,
    pub sign: i8,
}

/// A link whose sliding direction would need a negative normal-cone
/// multiplier, i.e. the tight constraint would want to release.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReleaseEvent {
    pub link: usize,
    pub constraint: ActiveConstraint,
    pub multiplier: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceConfig {
    /// Relative tolerance for simultaneous facet hits.
    pub tie_tol: f64,
    /// `|f_k| <= saturation_tol * |f0|` ends the trace.
    pub saturation_tol: f64,
    /// Relative tolerance for rank decisions among facet normals.
    pub rank_tol: f64,
}

impl Default for TraceConfig {
    fn default() -> Self {
        Self {
            tie_tol: 1e-9,
            saturation_tol: 1e-10,
            rank_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolylineTrace {
    points: Vec<Vec<f64>>,
    distances: Vec<f64>,
    active_sets: Vec<Vec<ActiveConstraint>>,
    normal_ranks: Vec<usize>,
    directions: Vec<Vec<f64>>,
    releases: Vec<ReleaseEvent>,
    saturated: bool,
}

impl PolylineTrace {
    /// Vertices `B_0 = 0, B_1, ..., B_l`.
    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// Input distances `d_0 = 0 < d_1 < ... < d_l`.
    pub fn distances(&self) -> &[f64] {
        &self.distances
    }

    /// Tight constraints at each vertex; nondecreasing along the trace.
    pub fn active_sets(&self) -> &[Vec<ActiveConstraint>] {
        &self.active_sets
    }

    /// Rank of the facet normals of the active set at each vertex.
    pub fn normal_ranks(&self) -> &[usize] {
        &self.normal_ranks
    }

    /// Velocity `du*/dd` on each link.
    pub fn directions(&self) -> &[Vec<f64>] {
        &self.directions
    }

    pub fn releases(&self) -> &[ReleaseEvent] {
        &self.releases
    }

    pub fn saturated(&self) -> bool {
        self.saturated
    }

    /// Number of links `l`.
    pub fn link_count(&self) -> usize {
        self.points.len() - 1
    }

    /// Total input length `L = d_l`.
    pub fn length(&self) -> f64 {
        *self.distances.last().expect("trace has a first vertex")
    }

    /// Link displacements `B_k - B_{k-1}`.
    pub fn links(&self) -> Vec<Vec<f64>> {
        self.points
            .windows(2)
            .map(|w| w[1].iter().zip(&w[0]).map(|(a, b)| a - b).collect())
            .collect()
    }

    /// Builds a trace from raw vertices and distances, e.g. for testing the
    /// geometric checks on synthetic polylines. Active sets and directions
    /// are left empty.
    pub fn from_vertices(points: Vec<Vec<f64>>, distances: Vec<f64>) -> Result<Self> {
        if points.len() != distances.len() || points.is_empty() {
            return Err(Error::Trace("vertex and distance counts differ".into()));
        }
        if distances[0] != 0.0 || distances.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Trace(
                "distances must start at 0 and increase".into(),
            ));
        }
        let directions = points
            .windows(2)
            .zip(distances.windows(2))
            .map(|(p, d)| {
                p[1].iter()
                    .zip(&p[0])
                    .map(|(a, b)| (a - b) / (d[1] - d[0]))
                    .collect()
            })
            .collect();
        Ok(Self {
            active_sets: vec![Vec::new(); points.len()],
            normal_ranks: vec![0; points.len()],
            points,
            distances,
            directions,
            releases: Vec::new(),
            saturated: true,
        })
    }

    /// `u*(d)` with odd extension to negative arguments.
    pub fn u_star(&self, d: f64, mode: EvalMode) -> Result<Vec<f64>> {
        let length = self.length();
        if mode == EvalMode::Strict && d.abs() > length {
            return Err(Error::HorizonExceeded {
                value: d.abs(),
                horizon: length,
            });
        }
        let x = d.abs();
        let sign = if d < 0.0 { -1.0 } else { 1.0 };
        if x >= length {
            return Ok(self.points[self.points.len() - 1]
                .iter()
                .map(|v| sign * v)
                .collect());
        }
        let k = self.distances.partition_point(|&dk| dk <= x);
        let (d0, d1) = (self.distances[k - 1], self.distances[k]);
        let frac = (x - d0) / (d1 - d0);
        let (b0, b1) = (&self.points[k - 1], &self.points[k]);
        Ok(b0
            .iter()
            .zip(b1)
            .map(|(p, q)| sign * (p + frac * (q - p)))
            .collect())
    }

    /// Vector memory formula
    /// `u = u*(G_1) + 2 sum_{i>=2} u*((G_i - G_{i-1}) / 2)`.
    pub fn memory_evaluate(&self, mem: &MainExtremaMemory, mode: EvalMode) -> Result<Vec<f64>> {
        let mut u = vec![0.0; self.points[0].len()];
        for (c, x) in mem.terms() {
            axpy(c, &self.u_star(x, mode)?, &mut u);
        }
        Ok(u)
    }
}

/// Follows the loading polyline from the origin to saturation.
pub fn trace_loading_polyline(
    geom: &ConfigurationGeometry,
    cfg: &TraceConfig,
) -> Result<PolylineTrace> {
    let m = geom.dim();
    let f0 = geom.f0().to_vec();
    let f0_norm = norm(&f0);
    if f0_norm == 0.0 {
        return Err(Error::DegenerateDrive);
    }
    let bounds = geom.halfwidths();

    let mut point = vec![0.0; m];
    let mut distance: f64 = 0.0;
    let mut active: Vec<ActiveConstraint> = Vec::new();
    let mut normals = OrthoBasis::new();
    let mut direction = f0.clone();

    let mut trace = PolylineTrace {
        points: vec![point.clone()],
        distances: vec![0.0],
        active_sets: vec![Vec::new()],
        normal_ranks: vec![0],
        directions: Vec::new(),
        releases: Vec::new(),
        saturated: false,
    };

    for link in 0..=m {
        if norm(&direction) <= cfg.saturation_tol * f0_norm {
            trace.saturated = true;
            return Ok(trace);
        }
        let speed_floor = 1e-14 * norm_inf(&direction);
        let hits: Vec<(usize, f64, i8)> = (0..m)
            .filter(|&i| !active.iter().any(|c| c.index == i))
            .filter(|&i| direction[i].abs() > speed_floor)
            .map(|i| {
                let sign: i8 = if direction[i] > 0.0 { 1 } else { -1 };
                let gap = f64::from(sign) * bounds[i] - point[i];
                (i, (gap / direction[i]).max(0.0), sign)
            })
            .collect();
        let step = hits.iter().map(|h| h.1).fold(f64::INFINITY, f64::min);
        if !step.is_finite() {
            return Err(Error::Trace(format!("link {link} never reaches a facet")));
        }
        let cutoff = step * (1.0 + cfg.tie_tol) + f64::EPSILON * distance.max(1.0);

        axpy(step, &direction, &mut point);
        distance += step;
        trace.directions.push(direction.clone());
        for &(index, _, sign) in hits.iter().filter(|h| h.1 <= cutoff) {
            active.push(ActiveConstraint { index, sign });
            point[index] = f64::from(sign) * bounds[index];
            let mut e = vec![0.0; m];
            e[index] = 1.0;
            normals.push(&geom.project_v(&e), cfg.rank_tol);
        }
        trace.points.push(point.clone());
        trace.distances.push(distance);
        trace.active_sets.push(active.clone());
        trace.normal_ranks.push(normals.rank());

        direction = normals.reject(&f0);
        // tight coordinates stay put; drop rounding residue so long links
        // do not drift off their facets
        for c in &active {
            direction[c.index] = 0.0;
        }
        if let Some(ev) = negative_multiplier(geom, &active, &f0, &direction, link + 1, cfg) {
            trace.releases.push(ev);
        }
    }
    Err(Error::Trace(format!("no saturation after {} links", m + 1)))
}

/// Solves `f0 - f = sum_i lambda_i n_i` over the outward unit normals of the
/// active set and reports the most negative multiplier, if any. Skipped when
/// the normals are linearly dependent (multipliers are then not unique).
fn negative_multiplier(
    geom: &ConfigurationGeometry,
    active: &[ActiveConstraint],
    f0: &[f64],
    f: &[f64],
    link: usize,
    cfg: &TraceConfig,
) -> Option<ReleaseEvent> {
    let m = geom.dim();
    let normals: Vec<Vec<f64>> = active
        .iter()
        .map(|c| {
            let mut e = vec![0.0; m];
            e[c.index] = f64::from(c.sign);
            let n = geom.project_v(&e);
            let len = norm(&n);
            n.iter().map(|x| x / len).collect()
        })
        .collect();
    let k = normals.len();
    let gram = nalgebra::DMatrix::from_fn(k, k, |r, c| dot(&normals[r], &normals[c]));
    let residual: Vec<f64> = f0.iter().zip(f).map(|(a, b)| a - b).collect();
    let rhs = nalgebra::DVector::from_fn(k, |r, _| dot(&normals[r], &residual));
    let lambda = gram.cholesky()?.solve(&rhs);
    let scale = norm(f0);
    lambda
        .iter()
        .enumerate()
        .filter(|(_, &l)| l < -cfg.rank_tol.sqrt() * scale)
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(pos, &multiplier)| ReleaseEvent {
            link,
            constraint: active[pos],
            multiplier,
        })
}
