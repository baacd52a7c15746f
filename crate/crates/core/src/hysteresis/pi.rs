use crate::error::{Error, Result};

use super::curve::LoadingCurve;
use super::signal::Signal;
use super::stop::StopState;

/// One weighted stop: weight (stiffness) and threshold (elastic limit).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stop {
    pub weight: f64,
    pub threshold: f64,
}

impl Stop {
    /// Maximal force of the stop, `weight * threshold`.
    pub fn yield_force(&self) -> f64 {
        self.weight * self.threshold
    }
}

/// Prandtl-Ishlinskii operator: a positively weighted sum of stops with
/// strictly increasing thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct PiOperator {
    stops: Vec<Stop>,
    states: Vec<StopState>,
}

impl PiOperator {
    pub fn new(stops: Vec<Stop>) -> Result<Self> {
        if stops.is_empty() {
            return Err(Error::InvalidParameter(
                "a PI operator needs at least one stop".into(),
            ));
        }
        for s in &stops {
            if !(s.weight > 0.0 && s.weight.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "stop weight {} is not positive",
                    s.weight
                )));
            }
            if !(s.threshold > 0.0 && s.threshold.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "stop threshold {} is not positive",
                    s.threshold
                )));
            }
        }
        if stops.windows(2).any(|w| !(w[1].threshold > w[0].threshold)) {
            return Err(Error::InvalidParameter(
                "stop thresholds must be strictly increasing".into(),
            ));
        }
        let states = stops
            .iter()
            .map(|s| StopState::relaxed(s.threshold))
            .collect();
        Ok(Self { stops, states })
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|&(weight, threshold)| Stop { weight, threshold })
                .collect(),
        )
    }

    pub fn stops(&self) -> &[Stop] {
        &self.stops
    }

    pub fn states(&self) -> &[StopState] {
        &self.states
    }

    pub fn reset(&mut self) {
        for s in &mut self.states {
            s.e = 0.0;
        }
    }

    pub fn output(&self) -> f64 {
        self.stops
            .iter()
            .zip(&self.states)
            .map(|(s, st)| s.weight * st.e)
            .sum()
    }

    /// Advances every stop by one monotone increment and returns the output.
    pub fn advance(&mut self, delta: f64) -> f64 {
        for st in &mut self.states {
            *st = st.step(delta);
        }
        self.output()
    }

    /// Output at every breakpoint of `signal`, starting from the relaxed
    /// state.
    pub fn apply_direct(&self, signal: &Signal) -> Vec<f64> {
        let mut op = self.clone();
        op.reset();
        let g = signal.values();
        let mut out = Vec::with_capacity(g.len());
        out.push(op.output());
        for w in g.windows(2) {
            out.push(op.advance(w[1] - w[0]));
        }
        out
    }

    /// Response to the identity input: slope `a_k + ... + a_K` on
    /// `[rho_{k-1}, rho_k)` and flat after the last threshold.
    pub fn loading_curve(&self) -> LoadingCurve {
        let mut points = vec![(0.0, 0.0)];
        let mut slope: f64 = self.stops.iter().map(|s| s.weight).sum();
        let mut prev = (0.0, 0.0);
        for s in &self.stops {
            let y = prev.1 + slope * (s.threshold - prev.0);
            prev = (s.threshold, y);
            points.push(prev);
            slope -= s.weight;
        }
        LoadingCurve::new(points, 0.0).expect("thresholds are strictly increasing")
    }
}
