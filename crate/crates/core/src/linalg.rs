//! Small dense vector helpers. Vectors are plain `[f64]` slices in the
//! canonical spring order of a network.

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

pub fn norm_inf(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// y += alpha * x
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn sub(x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

pub fn scaled(alpha: f64, x: &[f64]) -> Vec<f64> {
    x.iter().map(|v| alpha * v).collect()
}

pub fn max_abs_diff(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
}

/// Orthogonal projection of `x` onto the span of the orthonormal `basis`.
pub fn project_onto(basis: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; x.len()];
    for q in basis {
        axpy(dot(q, x), q, &mut out);
    }
    out
}

/// Incremental Gram-Schmidt with one re-orthogonalization pass.
///
/// Vectors whose residual falls below `tol` times their original norm are
/// rejected as linearly dependent on the current basis.
#[derive(Debug, Clone, Default)]
pub struct OrthoBasis {
    vectors: Vec<Vec<f64>>,
}

impl OrthoBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    /// Returns true if `v` extended the basis.
    pub fn push(&mut self, v: &[f64], tol: f64) -> bool {
        let scale = norm(v);
        if scale == 0.0 {
            return false;
        }
        let mut r = v.to_vec();
        for _ in 0..2 {
            for q in &self.vectors {
                let c = dot(q, &r);
                axpy(-c, q, &mut r);
            }
        }
        let n = norm(&r);
        if n <= tol * scale {
            return false;
        }
        r.iter_mut().for_each(|x| *x /= n);
        self.vectors.push(r);
        true
    }

    /// Component of `x` orthogonal to the basis.
    pub fn reject(&self, x: &[f64]) -> Vec<f64> {
        let mut r = x.to_vec();
        for _ in 0..2 {
            for q in &self.vectors {
                let c = dot(q, &r);
                axpy(-c, q, &mut r);
            }
        }
        r
    }
}
