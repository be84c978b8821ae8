//! Two-class linear discriminant with a shared within-class covariance.

use ndarray::{Array1, Array2};

use super::csp::two_classes;
use crate::error::{Error, Result};
use crate::linalg::{cholesky_solve, trace};
use crate::scalar::Scalar;

/// Relative shrinkage `eps * trace / F` on the pooled covariance.
pub const LDA_SHRINKAGE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct LdaModel<T> {
    weights: Array1<T>,
    bias: T,
    classes: [usize; 2],
}

impl<T: Scalar> LdaModel<T> {
    pub fn weights(&self) -> &Array1<T> {
        &self.weights
    }

    pub fn bias(&self) -> T {
        self.bias
    }

    /// `w^T x + b`; positive favours the higher label.
    pub fn score(&self, x: &Array1<T>) -> T {
        self.weights.dot(x) + self.bias
    }

    /// Predicts the higher label when the score is `>= 0` (ties go to it).
    pub fn predict(&self, x: &Array1<T>) -> usize {
        if self.score(x) >= T::zero() {
            self.classes[1]
        } else {
            self.classes[0]
        }
    }
}

/// Fits `w = S_w^-1 (mu_1 - mu_0)` with the boundary at the midpoint of the
/// projected class means.
pub fn lda_fit<T: Scalar>(features: &[Array1<T>], labels: &[usize]) -> Result<LdaModel<T>> {
    if features.len() != labels.len() {
        return Err(Error::ShapeMismatch {
            expected: format!("{} labels", features.len()),
            got: format!("{} labels", labels.len()),
        });
    }
    let classes = two_classes(labels.iter().copied())?;
    let dim = features[0].len();
    let mut means = [Array1::<T>::zeros(dim), Array1::<T>::zeros(dim)];
    let mut counts = [0usize; 2];
    for (x, &y) in features.iter().zip(labels) {
        if x.len() != dim {
            return Err(Error::ShapeMismatch {
                expected: format!("{dim} features"),
                got: format!("{} features", x.len()),
            });
        }
        let k = usize::from(y == classes[1]);
        means[k] += x;
        counts[k] += 1;
    }
    for k in 0..2 {
        means[k] /= T::from_usize_lossy(counts[k]);
    }

    let mut scatter = Array2::<T>::zeros((dim, dim));
    for (x, &y) in features.iter().zip(labels) {
        let d = x - &means[usize::from(y == classes[1])];
        for i in 0..dim {
            for j in 0..dim {
                scatter[[i, j]] += d[i] * d[j];
            }
        }
    }
    let dof = (features.len().saturating_sub(2)).max(1);
    let mut pooled = scatter / T::from_usize_lossy(dof);
    let shrink = T::lit(LDA_SHRINKAGE) * trace(pooled.view()) / T::from_usize_lossy(dim);
    for i in 0..dim {
        pooled[[i, i]] += shrink;
    }

    let diff = &means[1] - &means[0];
    let weights = cholesky_solve(pooled.view(), &diff)?;
    let mid = (&means[0] + &means[1]) * T::lit(0.5);
    let bias = -weights.dot(&mid);
    if !bias.is_finite() || weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::Degenerate);
    }
    Ok(LdaModel {
        weights,
        bias,
        classes,
    })
}
