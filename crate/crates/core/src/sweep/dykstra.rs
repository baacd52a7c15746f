use crate::error::{Error, Result};
use crate::network::ConfigurationGeometry;

/// Nearest point of `Π ∩ V` to `p` by Dykstra's alternating projections
/// between the box `Π` and the subspace `V`.
///
/// Only the box needs a correction term because `V` is a linear subspace.
/// Stops once both the iterate and the box correction move by at most
/// `tol`; a steady iterate alone is not enough because the correction can
/// keep growing while the clamp holds the iterate still. The returned point
/// lies in `V`.
pub fn project_dykstra(
    geom: &ConfigurationGeometry,
    p: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<Vec<f64>> {
    let m = p.len();
    let mut x = p.to_vec();
    let mut correction = vec![0.0; m];
    let mut y = vec![0.0; m];
    let mut residual = f64::INFINITY;
    for _ in 0..max_iter {
        for k in 0..m {
            y[k] = x[k] + correction[k];
        }
        geom.clamp_box(&mut y);
        let mut shift: f64 = 0.0;
        for k in 0..m {
            correction[k] += x[k] - y[k];
            shift = shift.max((x[k] - y[k]).abs());
        }
        let next = geom.project_v(&y);
        residual = crate::linalg::max_abs_diff(&next, &x).max(shift);
        x = next;
        if residual <= tol && geom.box_excess(&x).1 <= tol {
            return Ok(x);
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual,
    })
}
