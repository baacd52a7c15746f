//! Discrepancy between the simulated stresses and the PI prediction built
//! from the loading trace.

use crate::error::{Error, Result};
use crate::hysteresis::{EvalMode, MainExtremaMemory, Signal};
use crate::linalg::max_abs_diff;
use crate::network::{ConfigurationGeometry, SpringNetwork};
use crate::sweep::{simulate, Sample, SimulationConfig};
use crate::trace::PolylineTrace;

#[derive(Debug, Clone, PartialEq)]
pub struct ComparePoint {
    pub t: f64,
    pub g: f64,
    /// `max_i |sigma_sweep,i - sigma_pi,i|`.
    pub discrepancy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub points: Vec<ComparePoint>,
    pub max: f64,
    /// Input step bound used by the simulation.
    pub max_dg: f64,
}

/// PI prediction of the stresses along the sampled input path.
pub fn predicted_stresses(
    geom: &ConfigurationGeometry,
    trace: &PolylineTrace,
    inputs: &[f64],
) -> Result<Vec<Vec<f64>>> {
    let mut mem = MainExtremaMemory::new(f64::INFINITY);
    inputs
        .iter()
        .map(|&g| {
            mem.update(g)?;
            let u = trace.memory_evaluate(&mem, EvalMode::Extend)?;
            Ok(u.iter().zip(geom.sqrt_a()).map(|(x, q)| x * q).collect())
        })
        .collect()
}

/// Runs the sweep and evaluates the PI prediction at every sample. In
/// `Strict` mode the signal must stay within the trace length.
pub fn compare(
    net: &SpringNetwork,
    geom: &ConfigurationGeometry,
    trace: &PolylineTrace,
    signal: &Signal,
    cfg: &SimulationConfig,
    mode: EvalMode,
) -> Result<Comparison> {
    if mode == EvalMode::Strict && signal.max_abs() > trace.length() {
        return Err(Error::HorizonExceeded {
            value: signal.max_abs(),
            horizon: trace.length(),
        });
    }
    let samples = simulate(net, geom, signal, cfg)?;
    compare_samples(geom, trace, &samples, cfg.max_dg)
}

/// Discrepancy series for samples that are already computed.
pub fn compare_samples(
    geom: &ConfigurationGeometry,
    trace: &PolylineTrace,
    samples: &[Sample],
    max_dg: f64,
) -> Result<Comparison> {
    let inputs: Vec<f64> = samples.iter().map(|s| s.g).collect();
    let predicted = predicted_stresses(geom, trace, &inputs)?;
    let points: Vec<ComparePoint> = samples
        .iter()
        .zip(&predicted)
        .map(|(s, p)| ComparePoint {
            t: s.t,
            g: s.g,
            discrepancy: max_abs_diff(&s.sigma, p),
        })
        .collect();
    let max = points.iter().map(|p| p.discrepancy).fold(0.0, f64::max);
    Ok(Comparison {
        points,
        max,
        max_dg,
    })
}
