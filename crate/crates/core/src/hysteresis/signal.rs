use crate::error::{Error, Result};

/// Piecewise-linear scalar input `g(t)` given by its breakpoints.
///
/// Times are strictly increasing and the first value is zero: every model in
/// this crate starts from the relaxed state.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl Signal {
    pub fn new(points: &[(f64, f64)]) -> Result<Self> {
        let (first_t, first_g) = *points
            .first()
            .ok_or_else(|| Error::InvalidSignal("no breakpoints".into()))?;
        if first_g != 0.0 {
            return Err(Error::InvalidSignal(format!(
                "first value must be 0, got {first_g}"
            )));
        }
        if !(first_t >= 0.0) {
            return Err(Error::InvalidSignal(format!(
                "first time must be non-negative, got {first_t}"
            )));
        }
        for (k, w) in points.windows(2).enumerate() {
            if !(w[1].0 > w[0].0) || !w[1].0.is_finite() {
                return Err(Error::InvalidSignal(format!(
                    "times must be strictly increasing (breakpoint {})",
                    k + 1
                )));
            }
            if !w[1].1.is_finite() {
                return Err(Error::InvalidSignal(format!(
                    "non-finite value at breakpoint {}",
                    k + 1
                )));
            }
        }
        Ok(Self {
            times: points.iter().map(|p| p.0).collect(),
            values: points.iter().map(|p| p.1).collect(),
        })
    }

    /// Signal through `0, values[0], values[1], ...` at unit time spacing.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        let pts: Vec<(f64, f64)> = std::iter::once(0.0)
            .chain(values.iter().copied())
            .enumerate()
            .map(|(k, g)| (k as f64, g))
            .collect();
        Self::new(&pts)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, g| m.max(g.abs()))
    }

    pub fn negated(&self) -> Self {
        Self {
            times: self.times.clone(),
            values: self.values.iter().map(|g| -g).collect(),
        }
    }

    /// Applies a time change to the breakpoints. The map must be strictly
    /// increasing on the breakpoint times.
    pub fn reparametrized(&self, time_map: impl Fn(f64) -> f64) -> Result<Self> {
        let pts: Vec<(f64, f64)> = self
            .times
            .iter()
            .zip(&self.values)
            .map(|(&t, &g)| (time_map(t), g))
            .collect();
        Self::new(&pts)
    }
}
