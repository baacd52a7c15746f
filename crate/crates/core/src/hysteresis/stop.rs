/// Clamp to `[-rho, rho]`.
pub fn clamp_stop(x: f64, rho: f64) -> f64 {
    x.clamp(-rho, rho)
}

/// State of a scalar stop operator: elastic deformation `e` with `|e| <= rho`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopState {
    pub rho: f64,
    pub e: f64,
}

impl StopState {
    pub fn relaxed(rho: f64) -> Self {
        Self { rho, e: 0.0 }
    }

    /// Advance by one monotone input increment. On a monotone piece the new
    /// elastic deformation is the clamp of the old one shifted by the
    /// increment.
    pub fn step(self, delta_eps: f64) -> Self {
        Self {
            rho: self.rho,
            e: clamp_stop(self.e + delta_eps, self.rho),
        }
    }
}
