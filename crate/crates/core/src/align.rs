//! Euclidean alignment: whiten each subject's trials by the inverse square
//! root of their mean spatial covariance.
//!
//! The reference keeps the *unregularized* running mean so that incremental
//! updates reproduce the batch mean exactly; regularization is applied only
//! when the whitening matrix is formed.

use ndarray::Array2;

use crate::data::Trial;
use crate::error::{Error, Result};
use crate::linalg::{is_symmetric, spectral_map, trace};
use crate::scalar::Scalar;

/// Eigenvalues of the reference are floored at `EA_SHRINKAGE * trace / C`.
pub const EA_SHRINKAGE: f64 = 1e-8;

/// Spatial covariance `X X^T / (T - 1)` of one trial (no demeaning).
pub fn trial_covariance<T: Scalar>(x: &Array2<T>) -> Array2<T> {
    let denom = T::from_usize_lossy(x.ncols().saturating_sub(1).max(1));
    x.dot(&x.t()) / denom
}

/// Mean trial covariance of one subject plus the number of trials in it.
#[derive(Debug, Clone, PartialEq)]
pub struct EaReference<T> {
    mean: Array2<T>,
    count: usize,
}

impl<T: Scalar> EaReference<T> {
    /// Reference from a single covariance matrix counted as one trial.
    pub fn from_covariance(cov: Array2<T>) -> Self {
        Self {
            mean: cov,
            count: 1,
        }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn channels(&self) -> usize {
        self.mean.nrows()
    }

    /// Unregularized mean covariance.
    pub fn mean(&self) -> &Array2<T> {
        &self.mean
    }

    fn floor(&self) -> T {
        let c = self.mean.nrows();
        let floor = T::lit(EA_SHRINKAGE) * trace(self.mean.view()) / T::from_usize_lossy(c.max(1));
        if floor > T::zero() {
            floor
        } else {
            T::min_positive_value().sqrt()
        }
    }

    /// Mean covariance with its spectrum floored; SPD for finite data.
    pub fn matrix(&self) -> Result<Array2<T>> {
        let floor = self.floor();
        spectral_map(self.mean.view(), |l| Ok(l.max(floor)))
    }

    /// `matrix()^(-1/2)`.
    pub fn whitener(&self) -> Result<Array2<T>> {
        let floor = self.floor();
        spectral_map(self.mean.view(), |l| Ok(T::one() / l.max(floor).sqrt()))
    }

    /// Folds one more trial into the running mean.
    pub fn update(&mut self, trial: &Trial<T>) -> Result<()> {
        check_shape(self.channels(), trial)?;
        let cov = trial_covariance(&trial.samples);
        let n = T::from_usize_lossy(self.count);
        let n1 = T::from_usize_lossy(self.count + 1);
        self.mean.zip_mut_with(&cov, |m, &c| *m = (*m * n + c) / n1);
        self.count += 1;
        Ok(())
    }

    /// Non-mutating form of [`EaReference::update`].
    pub fn updated(&self, trial: &Trial<T>) -> Result<Self> {
        let mut next = self.clone();
        next.update(trial)?;
        Ok(next)
    }
}

fn check_shape<T: Scalar>(channels: usize, trial: &Trial<T>) -> Result<()> {
    if trial.channels() != channels {
        return Err(Error::ShapeMismatch {
            expected: format!("{channels} channels"),
            got: format!("{} channels", trial.channels()),
        });
    }
    Ok(())
}

/// Batch reference over one subject's labeled trials.
///
/// Held-out trials are refused: test data may only enter through
/// [`EaStream`].
pub fn ea_reference<T: Scalar>(trials: &[Trial<T>]) -> Result<EaReference<T>> {
    let first = trials.first().ok_or(Error::Empty)?;
    let c = first.channels();
    let mut sum = Array2::<T>::zeros((c, c));
    for (i, t) in trials.iter().enumerate() {
        if t.held_out {
            return Err(Error::TestLeak("EA reference seeding"));
        }
        check_shape(c, t)?;
        if !t.is_finite() {
            return Err(Error::NonFinite { trial: i });
        }
        sum += &trial_covariance(&t.samples);
    }
    let n = T::from_usize_lossy(trials.len());
    Ok(EaReference {
        mean: sum / n,
        count: trials.len(),
    })
}

/// `Q diag(lambda^-1/2) Q^T` of a symmetric positive-definite matrix.
pub fn inv_sqrt_spd<T: Scalar>(m: &Array2<T>) -> Result<Array2<T>> {
    if !is_symmetric(m.view(), T::lit(1e-10)) || m.iter().any(|v| !v.is_finite()) {
        return Err(Error::NotSpd);
    }
    spectral_map(m.view(), |l| {
        if l > T::zero() {
            Ok(T::one() / l.sqrt())
        } else {
            Err(Error::NotSpd)
        }
    })
}

/// Aligns one trial with a precomputed whitening matrix.
pub fn align_with<T: Scalar>(trial: &Trial<T>, whitener: &Array2<T>) -> Result<Trial<T>> {
    check_shape(whitener.nrows(), trial)?;
    Ok(Trial {
        samples: whitener.dot(&trial.samples),
        ..trial.clone()
    })
}

/// `R^(-1/2) X`.
pub fn ea_apply<T: Scalar>(trial: &Trial<T>, reference: &EaReference<T>) -> Result<Trial<T>> {
    align_with(trial, &reference.whitener()?)
}

/// Batch-aligns a subject's trials with their own reference.
pub fn align_subject<T: Scalar>(trials: &[Trial<T>]) -> Result<Vec<Trial<T>>> {
    let w = ea_reference(trials)?.whitener()?;
    trials.iter().map(|t| align_with(t, &w)).collect()
}

/// Test-time alignment of a target subject's unlabeled stream.
///
/// Each arriving trial first updates the reference (seeded from calibration
/// trials, or from the first test trial when there are none) and is then
/// aligned with the updated reference. Labels are never read.
#[derive(Debug, Clone)]
pub struct EaStream<T> {
    reference: Option<EaReference<T>>,
}

impl<T: Scalar> EaStream<T> {
    pub fn new(seed: Option<EaReference<T>>) -> Self {
        Self { reference: seed }
    }

    pub fn reference(&self) -> Option<&EaReference<T>> {
        self.reference.as_ref()
    }

    pub fn observe(&mut self, trial: &Trial<T>) -> Result<Trial<T>> {
        match &mut self.reference {
            Some(r) => r.update(trial)?,
            None => {
                self.reference = Some(EaReference::from_covariance(trial_covariance(&trial.samples)))
            }
        }
        let r = self.reference.as_ref().expect("reference set above");
        ea_apply(trial, r)
    }
}
