//! Common spatial patterns for two-class variance discrimination.

use ndarray::{Array1, Array2, Axis};

use crate::data::Trial;
use crate::error::{Error, Result};
use crate::align::inv_sqrt_spd;
use crate::linalg::{symmetric_eigen, trace};
use crate::scalar::Scalar;

/// Relative shrinkage added to the composite covariance before whitening.
pub const CSP_SHRINKAGE: f64 = 1e-10;

/// Fitted spatial filters, one per column.
///
/// The first `F/2` columns maximize the variance of the lower class label
/// relative to the composite, the last `F/2` minimize it; each half is
/// ordered from the most extreme eigenvalue inward.
#[derive(Debug, Clone, PartialEq)]
pub struct CspModel<T> {
    filters: Array2<T>,
    eigenvalues: Vec<T>,
    classes: [usize; 2],
}

impl<T: Scalar> CspModel<T> {
    /// `C x F` filter matrix.
    pub fn filters(&self) -> &Array2<T> {
        &self.filters
    }

    /// Generalized eigenvalue of each selected filter, in column order.
    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    pub fn n_filters(&self) -> usize {
        self.filters.ncols()
    }

    pub fn classes(&self) -> [usize; 2] {
        self.classes
    }

    /// Normalized log-variance features `log(var_k / sum_j var_j)`.
    pub fn features(&self, trial: &Trial<T>) -> Result<Array1<T>> {
        if trial.channels() != self.filters.nrows() {
            return Err(Error::ShapeMismatch {
                expected: format!("{} channels", self.filters.nrows()),
                got: format!("{} channels", trial.channels()),
            });
        }
        let projected = self.filters.t().dot(&trial.samples);
        let var: Array1<T> = projected.var_axis(Axis(1), T::zero());
        let total = var.sum();
        if !(total > T::zero()) || var.iter().any(|v| !(*v > T::zero())) {
            return Err(Error::ZeroVariance);
        }
        Ok(var.mapv(|v| (v / total).ln()))
    }
}

/// Effective filter count: `requested` clamped to the largest even number not above `channels`.
pub fn effective_filter_count(requested: usize, channels: usize) -> Result<usize> {
    if requested == 0 || requested % 2 != 0 {
        return Err(Error::FilterCount(requested));
    }
    if requested <= channels {
        return Ok(requested);
    }
    let clamped = channels - channels % 2;
    if clamped == 0 {
        return Err(Error::FilterCount(requested));
    }
    log::warn!("requested {requested} CSP filters on {channels} channels; using {clamped}");
    Ok(clamped)
}

/// Solves `s0 w = lambda (s0 + s1) w` by whitening the composite covariance.
pub fn csp_from_covariances<T: Scalar>(
    s0: &Array2<T>,
    s1: &Array2<T>,
    n_filters: usize,
    classes: [usize; 2],
) -> Result<CspModel<T>> {
    let c = s0.nrows();
    if s0.dim() != (c, c) || s1.dim() != (c, c) {
        return Err(Error::ShapeMismatch {
            expected: format!("{c}x{c}"),
            got: format!("{:?} and {:?}", s0.dim(), s1.dim()),
        });
    }
    let f = effective_filter_count(n_filters, c)?;
    let mut composite = s0 + s1;
    let shrink = T::lit(CSP_SHRINKAGE) * trace(composite.view()) / T::from_usize_lossy(c);
    for i in 0..c {
        composite[[i, i]] += shrink;
    }
    let whiten = inv_sqrt_spd(&composite)?;
    let rotated = whiten.dot(s0).dot(&whiten);
    let eig = symmetric_eigen(rotated.view())?;

    let half = f / 2;
    let picks: Vec<usize> = (0..half).chain((c - half..c).rev()).collect();
    let filters = whiten.dot(&eig.vectors.select(Axis(1), &picks));
    let eigenvalues = picks.iter().map(|&k| eig.values[k]).collect();
    Ok(CspModel {
        filters,
        eigenvalues,
        classes,
    })
}

/// Distinct labels of a two-class training set, ascending.
pub(crate) fn two_classes(labels: impl Iterator<Item = usize>) -> Result<[usize; 2]> {
    let mut seen: Vec<usize> = labels.collect();
    seen.sort_unstable();
    seen.dedup();
    match seen.as_slice() {
        [a, b] => Ok([*a, *b]),
        other => Err(Error::ClassCount(other.len())),
    }
}

/// Fits CSP on labeled trials using per-trial trace-normalized covariances.
pub fn csp_fit<T: Scalar>(trials: &[Trial<T>], n_filters: usize) -> Result<CspModel<T>> {
    if trials.iter().any(|t| t.held_out) {
        return Err(Error::TestLeak("CSP fitting"));
    }
    let classes = two_classes(trials.iter().map(|t| t.label))?;
    let c = trials[0].channels();
    let mut sums = [Array2::<T>::zeros((c, c)), Array2::<T>::zeros((c, c))];
    let mut counts = [0usize; 2];
    for t in trials {
        if t.channels() != c {
            return Err(Error::ShapeMismatch {
                expected: format!("{c} channels"),
                got: format!("{} channels", t.channels()),
            });
        }
        let cov = t.samples.dot(&t.samples.t());
        let tr = trace(cov.view());
        if !(tr > T::zero()) || !tr.is_finite() {
            return Err(Error::ZeroVariance);
        }
        let k = usize::from(t.label == classes[1]);
        sums[k] += &(cov / tr);
        counts[k] += 1;
    }
    let [s0, s1] = sums;
    let s0 = s0 / T::from_usize_lossy(counts[0]);
    let s1 = s1 / T::from_usize_lossy(counts[1]);
    csp_from_covariances(&s0, &s1, n_filters, classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn axis_aligned_toy() {
        let s0 = array![[2.0f64, 0.0], [0.0, 1.0]];
        let s1 = array![[1.0f64, 0.0], [0.0, 2.0]];
        let m = csp_from_covariances(&s0, &s1, 2, [0, 1]).unwrap();
        let w = m.filters();
        for col in w.columns() {
            let (a, b) = (col[0].abs(), col[1].abs());
            assert!(a.max(b) > 100.0 * a.min(b).max(1e-300));
        }
        // first filter favours class 0, which dominates channel 0
        assert!(w[[0, 0]].abs() > w[[1, 0]].abs());
        assert!(m.eigenvalues()[0] > m.eigenvalues()[1]);
    }

    #[test]
    fn whitening_constraint() {
        let s0 = array![[3.0f64, 0.4, 0.1], [0.4, 1.0, 0.2], [0.1, 0.2, 0.5]];
        let s1 = array![[1.0f64, -0.3, 0.0], [-0.3, 2.0, 0.1], [0.0, 0.1, 1.5]];
        let m = csp_from_covariances(&s0, &s1, 2, [0, 1]).unwrap();
        let w = m.filters();
        let g = w.t().dot(&(&s0 + &s1)).dot(w);
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g[[i, j]] - want).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn clamp_rule() {
        assert_eq!(effective_filter_count(10, 3).unwrap(), 2);
        assert_eq!(effective_filter_count(10, 22).unwrap(), 10);
        assert!(effective_filter_count(3, 22).is_err());
        assert!(effective_filter_count(2, 1).is_err());
    }

    #[test]
    fn single_class_rejected() {
        let t = Trial::new(array![[1.0f64, 2.0], [0.5, -1.0]], 1.0, 0, 0);
        assert!(matches!(csp_fit(&[t.clone(), t], 2), Err(Error::ClassCount(1))));
    }

    #[test]
    fn feature_scale_invariance_and_normalization() {
        let s0 = array![[2.0f64, 0.3], [0.3, 1.0]];
        let s1 = array![[1.0f64, 0.0], [0.0, 2.0]];
        let m = csp_from_covariances(&s0, &s1, 2, [0, 1]).unwrap();
        let x = array![[1.0f64, -2.0, 0.5, 3.0], [0.2, 0.1, -1.0, 0.4]];
        let f = m.features(&Trial::new(x.clone(), 1.0, 0, 0)).unwrap();
        let g = m.features(&Trial::new(x * 7.5, 1.0, 0, 0)).unwrap();
        for (a, b) in f.iter().zip(&g) {
            assert!((a - b).abs() < 1e-12);
        }
        let total: f64 = f.iter().map(|v| v.exp()).sum();
        assert!((total - 1.0).abs() < 1e-12);
        let zero = Trial::new(Array2::<f64>::zeros((2, 4)), 1.0, 0, 0);
        assert!(matches!(m.features(&zero), Err(Error::ZeroVariance)));
    }

    #[test]
    fn single_direction_signal_maximizes_its_feature() {
        let s0 = array![[2.0f64, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        let s1 = array![[1.0f64, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 2.0]];
        let m = csp_from_covariances(&s0, &s1, 2, [0, 1]).unwrap();
        // signal living on channel 0 only: the class-0 filter picks it up
        let x = array![[1.0f64, -1.0, 2.0, -2.0], [0.0, 0.0, 0.0, 0.001], [0.001, 0.0, 0.0, 0.0]];
        let f = m.features(&Trial::new(x, 1.0, 0, 0)).unwrap();
        assert!(f[0] > f[1]);
    }
}
