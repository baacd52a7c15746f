use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, norm};
use crate::network::ConfigurationGeometry;

/// Nearest point of `Π ∩ V` to `p` by a primal active-set method.
///
/// Works in orthonormal coordinates `c` of `V` (`x = Q c`), where the
/// problem is `min ½|c - Qᵀp|²` subject to `±Q_i c <= b_i`. Starts from a
/// feasible scaling of the unconstrained optimum.
pub fn project_active_set(geom: &ConfigurationGeometry, p: &[f64], tol: f64) -> Result<Vec<f64>> {
    let basis = geom.v_basis();
    let m = p.len();
    let bounds = geom.halfwidths();
    let target: Vec<f64> = basis.iter().map(|v| dot(v, p)).collect();

    // constraint 2i: +Q_i c <= b_i, constraint 2i+1: -Q_i c <= b_i
    let constraints: Vec<(Vec<f64>, f64)> = (0..m)
        .flat_map(|i| {
            let row: Vec<f64> = basis.iter().map(|v| v[i]).collect();
            let neg: Vec<f64> = row.iter().map(|x| -x).collect();
            [(row, bounds[i]), (neg, bounds[i])]
        })
        .collect();

    let mut scale: f64 = 1.0;
    for (row, b) in &constraints {
        let v = dot(row, &target);
        if v > *b {
            scale = scale.min(b / v);
        }
    }
    let mut c: Vec<f64> = target.iter().map(|t| t * scale).collect();
    let mut working: Vec<usize> = Vec::new();
    let cap = 50 * (constraints.len() + basis.len() + 1);
    let step_tol = 1e-14 * (1.0 + norm(&target));

    for _ in 0..cap {
        let (optimum, lambda) = equality_qp(&target, &working, &constraints);
        let step: Vec<f64> = optimum.iter().zip(&c).map(|(a, b)| a - b).collect();
        if norm(&step) <= step_tol {
            let worst = lambda.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1));
            match worst {
                Some((pos, &l)) if l < -tol => {
                    working.remove(pos);
                    continue;
                }
                _ => {
                    let mut x = vec![0.0; m];
                    for (ci, v) in c.iter().zip(basis) {
                        axpy(*ci, v, &mut x);
                    }
                    return Ok(x);
                }
            }
        }
        let mut alpha = 1.0;
        let mut blocking = None;
        for (j, (row, b)) in constraints.iter().enumerate() {
            if working.contains(&j) {
                continue;
            }
            let rate = dot(row, &step);
            if rate <= 0.0 {
                continue;
            }
            let slack = (b - dot(row, &c)).max(0.0);
            if slack / rate < alpha {
                alpha = slack / rate;
                blocking = Some(j);
            }
        }
        for (ci, si) in c.iter_mut().zip(&step) {
            *ci += alpha * si;
        }
        if let Some(j) = blocking {
            working.push(j);
        }
    }
    Err(Error::NoConvergence {
        iterations: cap,
        residual: f64::NAN,
    })
}

/// Minimizer of `½|c - target|²` on the working-set equalities together
/// with the multipliers of those equalities.
fn equality_qp(
    target: &[f64],
    working: &[usize],
    constraints: &[(Vec<f64>, f64)],
) -> (Vec<f64>, Vec<f64>) {
    if working.is_empty() {
        return (target.to_vec(), Vec::new());
    }
    let g = DMatrix::from_fn(working.len(), target.len(), |r, col| {
        constraints[working[r]].0[col]
    });
    let h = DVector::from_iterator(working.len(), working.iter().map(|&j| constraints[j].1));
    let t = DVector::from_column_slice(target);
    let gram = &g * g.transpose();
    let rhs = &g * &t - h;
    let lambda = match gram.clone().cholesky() {
        Some(ch) => ch.solve(&rhs),
        None => gram
            .svd(true, true)
            .solve(&rhs, 1e-12)
            .expect("both SVD factors were computed"),
    };
    let c = t - g.transpose() * &lambda;
    (
        c.iter().copied().collect(),
        lambda.iter().copied().collect(),
    )
}
