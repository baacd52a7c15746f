//! Running main extremum values of a scalar input.
//!
//! The memory holds `G_1, ..., G_q` where `G_1` is the input value at the
//! last instant of maximal magnitude and the following entries alternate
//! between the running minimum and maximum of the remaining history. The
//! last entry is always the current input value.

use crate::error::{Error, Result};

use super::curve::{EvalMode, LoadingCurve};

#[derive(Debug, Clone, PartialEq)]
pub struct MainExtremaMemory {
    extrema: Vec<f64>,
    horizon: f64,
}

impl MainExtremaMemory {
    /// Relaxed memory (input at zero). `horizon` bounds `|g|`; use
    /// `f64::INFINITY` for no bound.
    pub fn new(horizon: f64) -> Self {
        Self {
            extrema: vec![0.0],
            horizon,
        }
    }

    /// Memory with the given extrema; checks the alternation and
    /// monotone-difference invariants.
    pub fn from_extrema(extrema: Vec<f64>, horizon: f64) -> Result<Self> {
        if extrema.is_empty() {
            return Err(Error::InvalidParameter(
                "memory needs at least one entry".into(),
            ));
        }
        if let Some(g) = extrema.iter().find(|g| g.abs() > horizon) {
            return Err(Error::HorizonExceeded {
                value: g.abs(),
                horizon,
            });
        }
        let mem = Self { extrema, horizon };
        if !mem.chain_holds() {
            return Err(Error::InvalidParameter(format!(
                "extrema {:?} do not form an alternating shrinking chain",
                mem.extrema
            )));
        }
        Ok(mem)
    }

    pub fn extrema(&self) -> &[f64] {
        &self.extrema
    }

    pub fn current(&self) -> f64 {
        *self.extrema.last().expect("memory is never empty")
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Moves the input monotonically from the current value to `g_new`.
    pub fn update(&mut self, g_new: f64) -> Result<()> {
        if g_new.abs() > self.horizon {
            return Err(Error::HorizonExceeded {
                value: g_new.abs(),
                horizon: self.horizon,
            });
        }
        let current = self.current();
        if g_new == current {
            return Ok(());
        }
        let q = self.extrema.len();
        if q >= 2 {
            let previous_move = current - self.extrema[q - 2];
            if previous_move * (g_new - current) > 0.0 {
                // same direction: the current value is no longer a turning point
                self.extrema.pop();
            }
        }
        self.extrema.push(g_new);
        self.wipe_out();
        Ok(())
    }

    fn wipe_out(&mut self) {
        loop {
            let q = self.extrema.len();
            let x = self.extrema[q - 1];
            if q == 1 {
                return;
            }
            if q == 2 {
                if x.abs() >= self.extrema[0].abs() {
                    self.extrema = vec![x];
                }
                return;
            }
            // extrema[q-3] is the previous turning point of the same kind as x
            let rival = self.extrema[q - 3];
            let pivot = self.extrema[q - 2];
            let passed = if x > pivot { x >= rival } else { x <= rival };
            if !passed {
                return;
            }
            self.extrema.truncate(q - 3);
            self.extrema.push(x);
        }
    }

    /// `2|G_1| >= |G_2 - G_1| >= |G_3 - G_2| >= ...` with alternating signs
    /// of consecutive differences.
    pub fn chain_holds(&self) -> bool {
        let e = &self.extrema;
        let mut bound = 2.0 * e[0].abs();
        let mut last_sign = if e[0] >= 0.0 { 1.0 } else { -1.0 };
        for w in e.windows(2) {
            let d = w[1] - w[0];
            if d == 0.0 || d.abs() > bound {
                return false;
            }
            // the first difference points back towards zero
            if d.signum() == last_sign {
                return false;
            }
            last_sign = d.signum();
            bound = d.abs();
        }
        true
    }

    /// Coefficient/argument pairs of the memory formula:
    /// `(1, G_1), (2, (G_2 - G_1)/2), (2, (G_3 - G_2)/2), ...`.
    pub fn terms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        std::iter::once((1.0, self.extrema[0]))
            .chain(self.extrema.windows(2).map(|w| (2.0, (w[1] - w[0]) / 2.0)))
    }
}

/// `phi(G_1) + 2 * sum_k phi((G_k - G_{k-1}) / 2)`.
pub fn memory_evaluate(
    curve: &LoadingCurve,
    mem: &MainExtremaMemory,
    mode: EvalMode,
) -> Result<f64> {
    let mut total = 0.0;
    for (c, x) in mem.terms() {
        total += c * curve.eval_mode(x, mode)?;
    }
    Ok(total)
}
