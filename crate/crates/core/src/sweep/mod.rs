//! Catch-up time stepping of the stop-type sweeping process
//! `-u' + f0 g' ∈ N_{Π∩V}(u)`.
//!
//! Each step moves the state by `f0 * Δg` and projects back onto the
//! polytope. Steps are sized by the input increment, never by time, so the
//! output depends only on the path of `g`.

mod active_set;
mod dykstra;

pub use active_set::project_active_set;
pub use dykstra::project_dykstra;

use crate::error::Result;
use crate::hysteresis::Signal;
use crate::linalg::norm_inf;
use crate::network::{ConfigurationGeometry, SpringNetwork};

/// Default projector tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Relative slack allowed on the box bounds when converting states to
/// stresses.
const FEASIBILITY_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Projector {
    #[default]
    Dykstra,
    ActiveSet,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionConfig {
    pub projector: Projector,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for ProjectionConfig {
    fn default() -> Self {
        Self {
            projector: Projector::Dykstra,
            tol: DEFAULT_TOL,
            max_iter: 2_000_000,
        }
    }
}

/// Euclidean projection onto `Π ∩ V`.
pub fn project_polytope(
    geom: &ConfigurationGeometry,
    p: &[f64],
    cfg: &ProjectionConfig,
) -> Result<Vec<f64>> {
    match cfg.projector {
        Projector::Dykstra => project_dykstra(geom, p, cfg.tol, cfg.max_iter),
        Projector::ActiveSet => project_active_set(geom, p, cfg.tol),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepingState {
    pub u: Vec<f64>,
    pub g: f64,
    pub t: f64,
}

impl SweepingState {
    pub fn relaxed(geom: &ConfigurationGeometry) -> Self {
        Self {
            u: vec![0.0; geom.dim()],
            g: 0.0,
            t: 0.0,
        }
    }
}

/// One implicit catch-up step: `u' = proj(u + f0 Δg)`.
pub fn sweep_step(
    state: &SweepingState,
    geom: &ConfigurationGeometry,
    delta_g: f64,
    cfg: &ProjectionConfig,
) -> Result<SweepingState> {
    if delta_g == 0.0 {
        return Ok(state.clone());
    }
    let mut p = state.u.clone();
    crate::linalg::axpy(delta_g, geom.f0(), &mut p);
    Ok(SweepingState {
        u: project_polytope(geom, &p, cfg)?,
        g: state.g + delta_g,
        t: state.t,
    })
}

/// Largest input step that moves every coordinate by at most one
/// hundredth of the smallest box half-width.
pub fn default_max_dg(geom: &ConfigurationGeometry) -> f64 {
    geom.min_halfwidth() / (100.0 * norm_inf(geom.f0()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig {
    /// Largest input increment per step.
    pub max_dg: f64,
    pub projection: ProjectionConfig,
}

impl SimulationConfig {
    pub fn for_geometry(geom: &ConfigurationGeometry) -> Self {
        Self {
            max_dg: default_max_dg(geom),
            projection: ProjectionConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub g: f64,
    pub u: Vec<f64>,
    pub sigma: Vec<f64>,
    pub reaction: f64,
    /// Index of the signal breakpoint this sample sits on, if any.
    pub breakpoint: Option<usize>,
}

/// Runs the catch-up scheme along `signal` from the relaxed state. Each
/// monotone piece is cut into `ceil(|Δg| / max_dg)` equal input steps; one
/// sample is emitted per step plus the initial state.
pub fn simulate(
    net: &SpringNetwork,
    geom: &ConfigurationGeometry,
    signal: &Signal,
    cfg: &SimulationConfig,
) -> Result<Vec<Sample>> {
    let times = signal.times();
    let values = signal.values();
    let mut state = SweepingState::relaxed(geom);
    state.t = times[0];
    let mut out = Vec::new();
    out.push(sample(net, geom, &state, Some(0))?);
    for seg in 1..times.len() {
        let (t0, t1) = (times[seg - 1], times[seg]);
        let (g0, g1) = (values[seg - 1], values[seg]);
        let span = g1 - g0;
        let steps = ((span.abs() / cfg.max_dg).ceil() as usize).max(1);
        for k in 1..=steps {
            let (g, t) = if k == steps {
                (g1, t1)
            } else {
                let frac = k as f64 / steps as f64;
                (g0 + frac * span, t0 + frac * (t1 - t0))
            };
            let mut next = sweep_step(&state, geom, g - state.g, &cfg.projection)?;
            next.g = g;
            next.t = t;
            state = next;
            let tag = (k == steps).then_some(seg);
            out.push(sample(net, geom, &state, tag)?);
        }
    }
    Ok(out)
}

fn sample(
    net: &SpringNetwork,
    geom: &ConfigurationGeometry,
    state: &SweepingState,
    breakpoint: Option<usize>,
) -> Result<Sample> {
    let (sigma, reaction) = geom.stresses_and_reaction(net, &state.u, FEASIBILITY_TOL)?;
    Ok(Sample {
        t: state.t,
        g: state.g,
        u: state.u.clone(),
        sigma,
        reaction,
        breakpoint,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    fn chain() -> (SpringNetwork, ConfigurationGeometry) {
        let net = SpringNetwork::new(3, &[(1, 2, 1.0, 1.0), (2, 3, 1.0, 2.0)]).unwrap();
        let geom = ConfigurationGeometry::build(&net).unwrap();
        (net, geom)
    }

    #[test]
    fn projection_of_feasible_point_is_identity() {
        let (_, geom) = chain();
        for projector in [Projector::Dykstra, Projector::ActiveSet] {
            let cfg = ProjectionConfig {
                projector,
                ..Default::default()
            };
            let x = project_polytope(&geom, &[0.3, 0.3], &cfg).unwrap();
            assert!((x[0] - 0.3).abs() < 1e-12 && (x[1] - 0.3).abs() < 1e-12);
        }
    }

    #[test]
    fn projection_onto_segment() {
        let (_, geom) = chain();
        for projector in [Projector::Dykstra, Projector::ActiveSet] {
            let cfg = ProjectionConfig {
                projector,
                ..Default::default()
            };
            let x = project_polytope(&geom, &[2.0, 2.0], &cfg).unwrap();
            assert!(
                (x[0] - 1.0).abs() < 1e-9 && (x[1] - 1.0).abs() < 1e-9,
                "{x:?}"
            );
        }
    }

    #[test]
    fn free_flow_and_zero_step() {
        let (_, geom) = chain();
        let cfg = ProjectionConfig::default();
        let s0 = SweepingState::relaxed(&geom);
        let s1 = sweep_step(&s0, &geom, 0.2, &cfg).unwrap();
        assert!((s1.u[0] - 0.1).abs() < 1e-15 && (s1.u[1] - 0.1).abs() < 1e-15);
        assert_eq!(sweep_step(&s1, &geom, 0.0, &cfg).unwrap(), s1);
    }

    #[test]
    fn loading_saturates_on_facet() {
        let (net, geom) = chain();
        let signal = Signal::from_values(&[4.0]).unwrap();
        let cfg = SimulationConfig {
            max_dg: 0.01,
            projection: ProjectionConfig::default(),
        };
        let out = simulate(&net, &geom, &signal, &cfg).unwrap();
        let last = out.last().unwrap();
        assert!((last.u[0] - 1.0).abs() < 1e-9 && (last.u[1] - 1.0).abs() < 1e-9);
        assert_eq!(last.breakpoint, Some(1));
        assert_eq!(out.len(), 401);
    }

    #[test]
    fn zero_signal_gives_zero_output() {
        let (net, geom) = chain();
        let signal = Signal::from_values(&[0.0, 0.0]).unwrap();
        let out = simulate(&net, &geom, &signal, &SimulationConfig::for_geometry(&geom)).unwrap();
        assert!(out
            .iter()
            .all(|s| s.sigma.iter().all(|&x| x == 0.0) && s.reaction == 0.0));
    }

    #[test]
    fn chain_traces_effective_stop_loop() {
        // series rule: a = 1/(1+1), r = min(1, 2) = 1, so rho = 2
        let (net, geom) = chain();
        let signal = Signal::from_values(&[4.0, -4.0, 1.0]).unwrap();
        let cfg = SimulationConfig {
            max_dg: 0.05,
            projection: ProjectionConfig::default(),
        };
        let out = simulate(&net, &geom, &signal, &cfg).unwrap();
        let mut e: f64 = 0.0;
        let mut g_prev = 0.0;
        for s in &out {
            e = (e + s.g - g_prev).clamp(-2.0, 2.0);
            g_prev = s.g;
            for &sig in &s.sigma {
                assert!(
                    (sig - 0.5 * e).abs() < 1e-9,
                    "g={} sigma={sig} expected {}",
                    s.g,
                    0.5 * e
                );
            }
        }
    }

    #[test]
    fn refining_the_step_keeps_breakpoint_outputs() {
        let net = SpringNetwork::new(
            4,
            &[
                (1, 2, 1.0, 0.8),
                (1, 3, 2.0, 1.5),
                (2, 3, 0.7, 0.5),
                (2, 4, 1.2, 1.0),
                (3, 4, 0.9, 2.0),
            ],
        )
        .unwrap();
        let geom = ConfigurationGeometry::build(&net).unwrap();
        let signal = Signal::from_values(&[2.5, -1.0, 1.7, -3.0]).unwrap();
        let run = |max_dg: f64| {
            let cfg = SimulationConfig {
                max_dg,
                projection: ProjectionConfig {
                    projector: Projector::ActiveSet,
                    tol: 1e-12,
                    ..Default::default()
                },
            };
            simulate(&net, &geom, &signal, &cfg).unwrap()
        };
        let coarse = run(0.02);
        let fine = run(0.01);
        let mut matched = 0;
        for c in &coarse {
            if let Some(f) = fine.iter().find(|f| f.t == c.t) {
                matched += 1;
                assert!(max_abs_diff(&c.sigma, &f.sigma) <= 1e-9);
            }
        }
        assert!(matched >= signal.values().len());
    }
}
