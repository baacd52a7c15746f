//! Piecewise-linear loading curves and their algebra.
//!
//! A [`LoadingCurve`] is stored on `[0, domain_end]` by its breakpoints and
//! continues linearly with `tail_slope` past the last one. Negative
//! arguments use the odd extension `phi(-x) = -phi(x)`.

use crate::error::{Error, Result};

use super::pi::{PiOperator, Stop};

/// Relative tolerance used when merging collinear pieces and coincident
/// abscissae.
const MERGE_TOL: f64 = 1e-12;

/// How to treat arguments beyond the stored domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EvalMode {
    /// Arguments with `|x| > domain_end` are an error.
    Strict,
    /// Continue with the tail slope (flat for saturated curves).
    #[default]
    Extend,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadingCurve {
    points: Vec<(f64, f64)>,
    tail_slope: f64,
}

impl LoadingCurve {
    pub fn new(points: Vec<(f64, f64)>, tail_slope: f64) -> Result<Self> {
        match points.first() {
            Some(&(0.0, 0.0)) => {}
            Some(p) => {
                return Err(Error::InvalidCurve(format!(
                    "first breakpoint must be (0, 0), got {p:?}"
                )))
            }
            None => return Err(Error::InvalidCurve("no breakpoints".into())),
        }
        for w in points.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::InvalidCurve(format!(
                    "abscissae must be strictly increasing: {} then {}",
                    w[0].0, w[1].0
                )));
            }
        }
        if points.iter().any(|p| !p.0.is_finite() || !p.1.is_finite()) || !tail_slope.is_finite() {
            return Err(Error::InvalidCurve("non-finite breakpoint or slope".into()));
        }
        Ok(Self { points, tail_slope })
    }

    /// `phi(x) = x`.
    pub fn identity() -> Self {
        Self {
            points: vec![(0.0, 0.0)],
            tail_slope: 1.0,
        }
    }

    /// Loading curve of a single stop of weight `a` and threshold `rho`:
    /// `a * min(x, rho)`.
    pub fn single_stop(a: f64, rho: f64) -> Self {
        Self {
            points: vec![(0.0, 0.0), (rho, a * rho)],
            tail_slope: 0.0,
        }
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn tail_slope(&self) -> f64 {
        self.tail_slope
    }

    pub fn domain_end(&self) -> f64 {
        self.points.last().map(|p| p.0).unwrap_or(0.0)
    }

    /// Slopes of the stored pieces, excluding the tail.
    pub fn slopes(&self) -> Vec<f64> {
        self.points
            .windows(2)
            .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
            .collect()
    }

    /// Value with odd extension and tail continuation.
    pub fn eval(&self, x: f64) -> f64 {
        if x < 0.0 {
            return -self.eval_nonneg(-x);
        }
        self.eval_nonneg(x)
    }

    pub fn eval_mode(&self, x: f64, mode: EvalMode) -> Result<f64> {
        if mode == EvalMode::Strict && x.abs() > self.domain_end() {
            return Err(Error::HorizonExceeded {
                value: x.abs(),
                horizon: self.domain_end(),
            });
        }
        Ok(self.eval(x))
    }

    fn eval_nonneg(&self, x: f64) -> f64 {
        let pts = &self.points;
        let (xl, yl) = pts[pts.len() - 1];
        if x >= xl {
            return yl + self.tail_slope * (x - xl);
        }
        // first breakpoint strictly greater than x
        let k = pts.partition_point(|p| p.0 <= x);
        let (x0, y0) = pts[k - 1];
        let (x1, y1) = pts[k];
        if x == x0 {
            return y0;
        }
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    /// Supremum of the curve on `[0, inf)` for nondecreasing curves.
    fn saturation_level(&self) -> f64 {
        if self.tail_slope > 0.0 {
            f64::INFINITY
        } else {
            self.points.last().map(|p| p.1).unwrap_or(0.0)
        }
    }

    fn strictly_increasing_pieces(&self) -> bool {
        self.points.windows(2).all(|w| w[1].1 > w[0].1)
    }

    pub fn is_concave_nondecreasing(&self) -> bool {
        let mut slopes = self.slopes();
        slopes.push(self.tail_slope);
        slopes.iter().all(|&s| s >= 0.0)
            && slopes
                .windows(2)
                .all(|w| w[1] <= w[0] + MERGE_TOL * w[0].abs().max(1.0))
    }

    /// Drops breakpoints joining collinear pieces.
    pub fn simplified(&self) -> Self {
        let mut slopes = self.slopes();
        slopes.push(self.tail_slope);
        let mut points = vec![self.points[0]];
        for k in 1..self.points.len() {
            let (before, after) = (slopes[k - 1], slopes[k]);
            let scale = before.abs().max(after.abs()).max(f64::MIN_POSITIVE);
            if (before - after).abs() > MERGE_TOL * scale {
                points.push(self.points[k]);
            }
        }
        Self {
            points,
            tail_slope: self.tail_slope,
        }
    }

    /// Pointwise maximum deviation on the union of both breakpoint sets and
    /// the tail slopes.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let xs = merged_abscissae(&[self, other]);
        let values = xs
            .iter()
            .fold(0.0_f64, |m, &x| m.max((self.eval(x) - other.eval(x)).abs()));
        values.max((self.tail_slope - other.tail_slope).abs())
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            points: self.points.iter().map(|&(x, y)| (x, c * y)).collect(),
            tail_slope: c * self.tail_slope,
        }
    }

    /// Pointwise sum; the loading curve of the parallel connection.
    pub fn sum(&self, other: &Self) -> Self {
        let xs = merged_abscissae(&[self, other]);
        Self {
            points: xs
                .iter()
                .map(|&x| (x, self.eval(x) + other.eval(x)))
                .collect(),
            tail_slope: self.tail_slope + other.tail_slope,
        }
        .simplified()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Self {
        // outer breakpoints, odd-extended
        let mut levels: Vec<f64> = self.points.iter().skip(1).map(|p| p.0).collect();
        levels.extend(levels.clone().iter().map(|x| -x));

        let mut xs: Vec<f64> = inner.points.iter().map(|p| p.0).collect();
        let push_crossings = |x0: f64, y0: f64, slope: f64, x_end: f64, xs: &mut Vec<f64>| {
            if slope == 0.0 {
                return;
            }
            for &level in &levels {
                let x = x0 + (level - y0) / slope;
                if x > x0 && x < x_end {
                    xs.push(x);
                }
            }
        };
        for w in inner.points.windows(2) {
            let slope = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
            push_crossings(w[0].0, w[0].1, slope, w[1].0, &mut xs);
        }
        let (xl, yl) = *inner.points.last().unwrap();
        push_crossings(xl, yl, inner.tail_slope, f64::INFINITY, &mut xs);
        let xs = dedup_sorted(xs);

        let tail_slope = if inner.tail_slope == 0.0 {
            0.0
        } else {
            inner.tail_slope * self.tail_slope
        };
        Self {
            points: xs.iter().map(|&x| (x, self.eval(inner.eval(x)))).collect(),
            tail_slope,
        }
        .simplified()
    }

    /// Inverse function. Requires every piece and the tail to be strictly
    /// increasing.
    pub fn inverse(&self) -> Result<Self> {
        if !self.strictly_increasing_pieces() {
            return Err(Error::NotInvertible(
                "curve has a non-increasing piece".into(),
            ));
        }
        if !(self.tail_slope > 0.0) {
            return Err(Error::NotInvertible(
                "curve saturates; its inverse is unbounded".into(),
            ));
        }
        Ok(Self {
            points: self.points.iter().map(|&(x, y)| (y, x)).collect(),
            tail_slope: 1.0 / self.tail_slope,
        })
    }

    /// Smallest argument `x >= 0` with `phi(x) = level`, for a curve whose
    /// pieces are strictly increasing and `0 <= level <= saturation`.
    fn preimage(&self, level: f64) -> f64 {
        let pts = &self.points;
        let (xl, yl) = pts[pts.len() - 1];
        if level >= yl {
            return if self.tail_slope > 0.0 {
                xl + (level - yl) / self.tail_slope
            } else {
                xl
            };
        }
        let k = pts.partition_point(|p| p.1 <= level);
        let (x0, y0) = pts[k - 1];
        let (x1, y1) = pts[k];
        if level == y0 {
            return x0;
        }
        x0 + (x1 - x0) * (level - y0) / (y1 - y0)
    }

    /// Series connection: the deformations add at equal force,
    /// `(phi_a^-1 + phi_b^-1)^-1`. Saturated curves are allowed; the result
    /// saturates at the smaller force level.
    pub fn series(&self, other: &Self) -> Result<Self> {
        for c in [self, other] {
            if !c.strictly_increasing_pieces() || c.tail_slope < 0.0 {
                return Err(Error::NotInvertible(
                    "series connection needs increasing curves".into(),
                ));
            }
        }
        let cap = self.saturation_level().min(other.saturation_level());
        if !(cap > 0.0) {
            return Err(Error::NotInvertible("curve saturates at zero force".into()));
        }
        let mut levels: Vec<f64> = self
            .points
            .iter()
            .chain(&other.points)
            .map(|p| p.1)
            .filter(|&y| y < cap)
            .collect();
        if cap.is_finite() {
            levels.push(cap);
        }
        let levels = dedup_sorted(levels);
        let points = levels
            .iter()
            .map(|&f| (self.preimage(f) + other.preimage(f), f))
            .collect::<Vec<_>>();
        let tail_slope = if cap.is_finite() {
            0.0
        } else {
            1.0 / (1.0 / self.tail_slope + 1.0 / other.tail_slope)
        };
        Ok(Self {
            points: dedup_points(points),
            tail_slope,
        }
        .simplified())
    }

    /// Weighted-stop representation. The curve must be concave,
    /// nondecreasing and eventually flat.
    pub fn to_pi(&self) -> Result<PiOperator> {
        let c = self.simplified();
        if !c.is_concave_nondecreasing() {
            return Err(Error::InvalidCurve(
                "curve is not concave nondecreasing".into(),
            ));
        }
        if c.tail_slope != 0.0 {
            return Err(Error::InvalidCurve(
                "curve does not saturate; a finite stop sum needs a flat tail".into(),
            ));
        }
        let mut slopes = c.slopes();
        slopes.push(0.0);
        let stops = c
            .points
            .iter()
            .skip(1)
            .enumerate()
            .map(|(k, &(x, _))| Stop {
                weight: slopes[k] - slopes[k + 1],
                threshold: x,
            })
            .collect();
        PiOperator::new(stops)
    }
}

fn merged_abscissae(curves: &[&LoadingCurve]) -> Vec<f64> {
    let xs: Vec<f64> = curves
        .iter()
        .flat_map(|c| c.points.iter().map(|p| p.0))
        .collect();
    dedup_sorted(xs)
}

fn dedup_sorted(mut xs: Vec<f64>) -> Vec<f64> {
    xs.sort_by(|a, b| a.total_cmp(b));
    let mut out: Vec<f64> = Vec::with_capacity(xs.len());
    for x in xs {
        match out.last() {
            Some(&prev) if x - prev <= MERGE_TOL * prev.abs().max(1.0) => {}
            _ => out.push(x),
        }
    }
    out
}

fn dedup_points(points: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(points.len());
    for p in points {
        match out.last() {
            Some(prev) if p.0 - prev.0 <= MERGE_TOL * prev.0.abs().max(1.0) => {}
            _ => out.push(p),
        }
    }
    out
}
