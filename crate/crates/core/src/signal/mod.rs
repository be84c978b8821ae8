//! DSP primitives: zero-phase Butterworth band-pass, notch, resampling,
//! analytic signal and frequency shifting.
//!
//! All operations are pure functions of 1-D series. [`Recipe`] chains
//! them over every channel of a trial.

mod hilbert;
mod iir;
mod resample;

use std::fmt;
use std::str::FromStr;

use ndarray::Array2;

pub use hilbert::{analytic_signal, freq_shift};
pub use iir::{butter_bandpass, iir_notch, Biquad, Sos};
pub use resample::{rational_ratio, resample};

use crate::data::Trial;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default notch quality factor (about 1.7 Hz wide at 50 Hz).
pub const NOTCH_QUALITY: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FilterSpec {
    /// Butterworth band-pass; `order` is the analog prototype order.
    Bandpass { lo_hz: f64, hi_hz: f64, order: usize },
    Notch { f0_hz: f64, quality: f64 },
}

impl FilterSpec {
    pub fn bandpass(lo_hz: f64, hi_hz: f64) -> Self {
        FilterSpec::Bandpass {
            lo_hz,
            hi_hz,
            order: 4,
        }
    }

    pub fn notch(f0_hz: f64) -> Self {
        FilterSpec::Notch {
            f0_hz,
            quality: NOTCH_QUALITY,
        }
    }

    pub fn design(&self, fs: f64) -> Result<Sos> {
        match *self {
            FilterSpec::Bandpass { lo_hz, hi_hz, order } => butter_bandpass(order, lo_hz, hi_hz, fs),
            FilterSpec::Notch { f0_hz, quality } => iir_notch(f0_hz, quality, fs),
        }
    }
}

impl fmt::Display for FilterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FilterSpec::Bandpass { lo_hz, hi_hz, order } => {
                write!(f, "bandpass {lo_hz} {hi_hz} {order}")
            }
            FilterSpec::Notch { f0_hz, quality } => write!(f, "notch {f0_hz} {quality}"),
        }
    }
}

impl FromStr for FilterSpec {
    type Err = Error;

    /// `bandpass <lo> <hi> [order]` or `notch <f0> [quality]`.
    fn from_str(s: &str) -> Result<Self> {
        let words: Vec<&str> = s.split_whitespace().collect();
        let num = |w: &str| -> Result<f64> {
            w.parse()
                .map_err(|_| Error::Config(format!("bad number `{w}` in filter `{s}`")))
        };
        match words.as_slice() {
            ["bandpass", lo, hi] => Ok(FilterSpec::bandpass(num(lo)?, num(hi)?)),
            ["bandpass", lo, hi, order] => Ok(FilterSpec::Bandpass {
                lo_hz: num(lo)?,
                hi_hz: num(hi)?,
                order: order
                    .parse()
                    .map_err(|_| Error::Config(format!("bad order `{order}`")))?,
            }),
            ["notch", f0] => Ok(FilterSpec::notch(num(f0)?)),
            ["notch", f0, q] => Ok(FilterSpec::Notch {
                f0_hz: num(f0)?,
                quality: num(q)?,
            }),
            _ => Err(Error::Config(format!("unrecognized filter `{s}`"))),
        }
    }
}

/// Zero-phase Butterworth band-pass of one series.
pub fn bandpass_zero_phase<T: Scalar>(x: &[T], fs: f64, lo_hz: f64, hi_hz: f64, order: usize) -> Result<Vec<T>> {
    butter_bandpass(order, lo_hz, hi_hz, fs)?.filtfilt(x)
}

/// Zero-phase notch of one series.
pub fn notch<T: Scalar>(x: &[T], fs: f64, f0_hz: f64, quality: f64) -> Result<Vec<T>> {
    iir_notch(f0_hz, quality, fs)?.filtfilt(x)
}

/// Applies `f` to every row of a `C x T` matrix.
pub fn map_rows<T: Scalar>(
    samples: &Array2<T>,
    mut f: impl FnMut(&[T]) -> Result<Vec<T>>,
) -> Result<Array2<T>> {
    let mut rows = Vec::with_capacity(samples.nrows());
    for row in samples.rows() {
        let row = row.to_vec();
        rows.push(f(&row)?);
    }
    let width = rows.first().map_or(0, Vec::len);
    let flat: Vec<T> = rows.into_iter().flatten().collect();
    Array2::from_shape_vec((samples.nrows(), width), flat)
        .map_err(|e| Error::PayloadShape(e.to_string()))
}

/// A preprocessing chain: filters in order, then an optional resample.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Recipe {
    pub filters: Vec<FilterSpec>,
    pub resample_hz: Option<f64>,
}

impl Recipe {
    pub fn is_identity(&self) -> bool {
        self.filters.is_empty() && self.resample_hz.is_none()
    }

    pub fn apply<T: Scalar>(&self, trial: &Trial<T>) -> Result<Trial<T>> {
        let mut samples = trial.samples.clone();
        for spec in &self.filters {
            let sos = spec.design(trial.fs)?;
            samples = map_rows(&samples, |r| sos.filtfilt(r))?;
        }
        let mut fs = trial.fs;
        if let Some(target) = self.resample_hz {
            samples = map_rows(&samples, |r| resample(r, fs, target))?;
            fs = target;
        }
        Ok(Trial {
            samples,
            fs,
            ..trial.clone()
        })
    }
}
