//! Geometric conditions under which a network acts as a PI operator, and
//! the effective loading curves it then has.

use crate::error::Result;
use crate::hysteresis::LoadingCurve;
use crate::linalg::norm;
use crate::network::{ConfigurationGeometry, SpringNetwork};
use crate::trace::PolylineTrace;

/// Default relative margin for the geometric checks.
pub const DEFAULT_CHECK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    NestedFaces,
    UnitDimDrops,
    InteriorVertices,
    OmegaContained,
    Invertible,
}

impl Condition {
    pub fn name(self) -> &'static str {
        match self {
            Condition::NestedFaces => "nested_faces",
            Condition::UnitDimDrops => "unit_dim_drops",
            Condition::InteriorVertices => "interior_vertices",
            Condition::OmegaContained => "omega_contained",
            Condition::Invertible => "invertible",
        }
    }
}

/// Where and by how much a condition fails.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub condition: Condition,
    /// Vertex or link index along the trace.
    pub vertex: usize,
    pub coordinate: Option<usize>,
    /// Signed slack; negative or zero means violated.
    pub margin: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReducibilityReport {
    pub nested_faces: bool,
    pub unit_dim_drops: bool,
    pub interior_vertices: bool,
    pub omega_contained: bool,
    pub invertible: bool,
    pub witnesses: Vec<Witness>,
}

impl ReducibilityReport {
    pub fn overall(&self) -> bool {
        self.nested_faces
            && self.unit_dim_drops
            && self.interior_vertices
            && self.omega_contained
            && self.invertible
    }
}

/// Checks every condition on a saturated trace and collects witnesses for
/// the failures.
pub fn check_reducibility(
    geom: &ConfigurationGeometry,
    trace: &PolylineTrace,
    tol: f64,
) -> ReducibilityReport {
    let mut witnesses = Vec::new();
    let ell = trace.link_count();
    let active = trace.active_sets();
    let ranks = trace.normal_ranks();
    let bounds = geom.halfwidths();

    for k in 0..ell {
        let grows = active[k].iter().all(|c| active[k + 1].contains(c))
            && active[k + 1].len() > active[k].len();
        if !grows {
            witnesses.push(Witness {
                condition: Condition::NestedFaces,
                vertex: k + 1,
                coordinate: None,
                margin: 0.0,
                detail: "active set does not grow strictly".into(),
            });
        }
    }
    for ev in trace.releases() {
        witnesses.push(Witness {
            condition: Condition::NestedFaces,
            vertex: ev.link,
            coordinate: Some(ev.constraint.index),
            margin: ev.multiplier,
            detail: "tight constraint would release".into(),
        });
    }

    for k in 1..ell {
        let drop = ranks[k] as i64 - ranks[k - 1] as i64;
        if drop != 1 {
            witnesses.push(Witness {
                condition: Condition::UnitDimDrops,
                vertex: k,
                coordinate: None,
                margin: 1.0 - drop as f64,
                detail: format!("face dimension drops by {drop}"),
            });
        }
    }

    for (k, (b, act)) in trace
        .points()
        .iter()
        .zip(active.iter())
        .enumerate()
        .take(ell)
        .skip(1)
    {
        for i in 0..geom.dim() {
            if act.iter().any(|c| c.index == i) {
                continue;
            }
            let slack = bounds[i] * (1.0 - tol) - b[i].abs();
            if slack <= 0.0 {
                witnesses.push(Witness {
                    condition: Condition::InteriorVertices,
                    vertex: k,
                    coordinate: Some(i),
                    margin: slack,
                    detail: "inactive coordinate touches its bound".into(),
                });
            }
        }
    }

    if let Some((i, slack)) = omega_violation(trace, bounds, tol) {
        witnesses.push(Witness {
            condition: Condition::OmegaContained,
            vertex: ell,
            coordinate: Some(i),
            margin: slack,
            detail: "parallelepiped leaves the box".into(),
        });
    }

    if !trace.saturated() {
        witnesses.push(Witness {
            condition: Condition::Invertible,
            vertex: ell,
            coordinate: None,
            margin: 0.0,
            detail: "trace did not saturate".into(),
        });
    }
    for (k, link) in trace.links().iter().enumerate() {
        if norm(link) == 0.0 || norm(&trace.directions()[k]) == 0.0 {
            witnesses.push(Witness {
                condition: Condition::Invertible,
                vertex: k + 1,
                coordinate: None,
                margin: 0.0,
                detail: "degenerate link".into(),
            });
        }
    }

    let fails = |c: Condition| witnesses.iter().any(|w| w.condition == c);
    ReducibilityReport {
        nested_faces: !fails(Condition::NestedFaces),
        unit_dim_drops: !fails(Condition::UnitDimDrops),
        interior_vertices: !fails(Condition::InteriorVertices),
        omega_contained: !fails(Condition::OmegaContained),
        invertible: !fails(Condition::Invertible),
        witnesses,
    }
}

/// Coordinate with the least slack in `sum_k |Δ_k,i| <= b_i (1 + tol)`, if
/// negative.
fn omega_violation(trace: &PolylineTrace, bounds: &[f64], tol: f64) -> Option<(usize, f64)> {
    let links = trace.links();
    (0..bounds.len())
        .map(|i| {
            let reach: f64 = links.iter().map(|l| l[i].abs()).sum();
            (i, bounds[i] * (1.0 + tol) - reach)
        })
        .filter(|&(_, slack)| slack < 0.0)
        .min_by(|a, b| a.1.total_cmp(&b.1))
}

/// Whether `{sum_k tau_k Δ_k : |tau_k| <= 1}` lies in the box. The box is a
/// product of intervals, so the worst corner per coordinate takes
/// `tau_k = sign(Δ_k,i)`.
pub fn omega_contained(trace: &PolylineTrace, geom: &ConfigurationGeometry, tol: f64) -> bool {
    omega_violation(trace, geom.halfwidths(), tol).is_none()
}

/// Same test against explicit half-widths.
pub fn omega_contained_in(trace: &PolylineTrace, bounds: &[f64], tol: f64) -> bool {
    omega_violation(trace, bounds, tol).is_none()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveCurves {
    /// Loading curve of each spring, canonical order.
    pub springs: Vec<LoadingCurve>,
    /// Sum over the springs at node 1; the reaction is minus this operator.
    pub reaction: LoadingCurve,
}

/// Per-spring curves `sqrt(a_i) * u*_i` and their sum over node 1.
pub fn effective_pi_curves(
    net: &SpringNetwork,
    geom: &ConfigurationGeometry,
    trace: &PolylineTrace,
) -> Result<EffectiveCurves> {
    let springs = (0..geom.dim())
        .map(|i| {
            let q = geom.sqrt_a()[i];
            let points = trace
                .distances()
                .iter()
                .zip(trace.points())
                .map(|(&d, b)| (d, q * b[i]))
                .collect();
            LoadingCurve::new(points, 0.0).map(|c| c.simplified())
        })
        .collect::<Result<Vec<_>>>()?;
    let reaction = net
        .springs_at_first_node()
        .map(|k| springs[k].clone())
        .reduce(|acc, c| acc.sum(&c))
        .unwrap_or_else(|| LoadingCurve::single_stop(0.0, 1.0));
    Ok(EffectiveCurves { springs, reaction })
}
