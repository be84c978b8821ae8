//! Trials, trial sets and epoch segmentation.

mod eegt;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use ndarray::{s, Array2, ArrayView2};

pub use eegt::{decode_eegt, encode_eegt, read_trialset, sidecar_path, write_trialset};

use crate::error::{Error, Result};
use crate::montage::Montage;
use crate::scalar::Scalar;

/// Recording paradigm; decides how reflection treats labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Paradigm {
    /// Left/right hand motor imagery. Labels are exactly 0 = left, 1 = right.
    MiLr,
    /// Motor imagery with a different class pair (e.g. feet/left hand).
    MiOther,
    Ssvep,
    P300,
    Seizure,
}

impl Paradigm {
    pub(crate) fn code(self) -> u8 {
        match self {
            Paradigm::MiLr => 0,
            Paradigm::MiOther => 1,
            Paradigm::Ssvep => 2,
            Paradigm::P300 => 3,
            Paradigm::Seizure => 4,
        }
    }

    pub(crate) fn from_code(code: u8) -> Option<Self> {
        Some(match code {
            0 => Paradigm::MiLr,
            1 => Paradigm::MiOther,
            2 => Paradigm::Ssvep,
            3 => Paradigm::P300,
            4 => Paradigm::Seizure,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Paradigm::MiLr => "MI_LR",
            Paradigm::MiOther => "MI_OTHER",
            Paradigm::Ssvep => "SSVEP",
            Paradigm::P300 => "P300",
            Paradigm::Seizure => "SEIZURE",
        }
    }

    /// Class-imbalanced paradigms are scored with balanced accuracy.
    pub fn is_imbalanced(self) -> bool {
        matches!(self, Paradigm::P300 | Paradigm::Seizure)
    }
}

impl fmt::Display for Paradigm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Paradigm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Paradigm::MiLr,
            Paradigm::MiOther,
            Paradigm::Ssvep,
            Paradigm::P300,
            Paradigm::Seizure,
        ]
        .into_iter()
        .find(|p| p.as_str().eq_ignore_ascii_case(s))
        .ok_or_else(|| Error::Config(format!("unknown paradigm `{s}`")))
    }
}

/// Which augmenter produced a trial copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AugmentTag {
    Noise,
    Flip,
    ScaleUp,
    ScaleDown,
    FreqUp,
    FreqDown,
    Symm,
    Rs,
    Cr,
}

/// One epoch: `C x T` samples plus metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Trial<T> {
    /// Amplitudes in microvolts, row = channel.
    pub samples: Array2<T>,
    pub fs: f64,
    pub label: usize,
    pub subject: u32,
    /// Augmenters applied to produce this trial, oldest first. Empty for recorded trials.
    pub origin: Vec<AugmentTag>,
    /// Set on target-subject test trials; fitting paths refuse such trials.
    pub held_out: bool,
}

impl<T: Scalar> Trial<T> {
    pub fn new(samples: Array2<T>, fs: f64, label: usize, subject: u32) -> Self {
        Self {
            samples,
            fs,
            label,
            subject,
            origin: Vec::new(),
            held_out: false,
        }
    }

    pub fn channels(&self) -> usize {
        self.samples.nrows()
    }

    pub fn len(&self) -> usize {
        self.samples.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn is_original(&self) -> bool {
        self.origin.is_empty()
    }

    /// Copy with new samples and an extra provenance tag.
    pub(crate) fn derive(&self, samples: Array2<T>, label: usize, tag: AugmentTag) -> Self {
        let mut origin = self.origin.clone();
        origin.push(tag);
        Self {
            samples,
            fs: self.fs,
            label,
            subject: self.subject,
            origin,
            held_out: self.held_out,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.samples.iter().all(|v| v.is_finite())
    }
}

/// A homogeneous, chronologically ordered collection of trials bound to one montage.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialSet<T> {
    montage: Montage,
    paradigm: Paradigm,
    class_count: usize,
    fs: f64,
    samples_per_trial: usize,
    declared_subjects: u32,
    trials: Vec<Trial<T>>,
}

impl<T: Scalar> TrialSet<T> {
    /// Validates and wraps `trials`. `fs` and `T` are taken from the first
    /// trial; an empty set gets `fs = 0`.
    pub fn new(
        montage: Montage,
        paradigm: Paradigm,
        class_count: usize,
        trials: Vec<Trial<T>>,
    ) -> Result<Self> {
        let fs = trials.first().map_or(0.0, |t| t.fs);
        let samples_per_trial = trials.first().map_or(0, |t| t.len());
        let declared = trials.iter().map(|t| t.subject + 1).max().unwrap_or(0);
        Self::with_header(montage, paradigm, class_count, fs, samples_per_trial, declared, trials)
    }

    pub(crate) fn with_header(
        montage: Montage,
        paradigm: Paradigm,
        class_count: usize,
        fs: f64,
        samples_per_trial: usize,
        declared_subjects: u32,
        trials: Vec<Trial<T>>,
    ) -> Result<Self> {
        if class_count < 2 || class_count > u16::MAX as usize {
            return Err(Error::InvalidData(format!("class_count {class_count} out of range")));
        }
        if paradigm == Paradigm::MiLr && class_count != 2 {
            return Err(Error::InvalidData(
                "left/right MI sets must have exactly two classes".into(),
            ));
        }
        if !trials.is_empty() && !(fs.is_finite() && fs > 0.0) {
            return Err(Error::InvalidData(format!("sample rate {fs} must be positive")));
        }
        for (i, t) in trials.iter().enumerate() {
            if t.channels() != montage.len() || t.len() != samples_per_trial || t.len() == 0 {
                return Err(Error::PayloadShape(format!(
                    "trial {i} is {}x{}, expected {}x{}",
                    t.channels(),
                    t.len(),
                    montage.len(),
                    samples_per_trial
                )));
            }
            if t.fs != fs {
                return Err(Error::InvalidData(format!(
                    "trial {i} sampled at {} Hz, set at {fs} Hz",
                    t.fs
                )));
            }
            if t.label >= class_count {
                return Err(Error::LabelRange {
                    label: t.label,
                    class_count,
                });
            }
            if t.subject >= declared_subjects {
                return Err(Error::InvalidData(format!(
                    "trial {i} subject {} exceeds declared {declared_subjects}",
                    t.subject
                )));
            }
            if !t.is_finite() {
                return Err(Error::NonFinite { trial: i });
            }
        }
        Ok(Self {
            montage,
            paradigm,
            class_count,
            fs,
            samples_per_trial,
            declared_subjects,
            trials,
        })
    }

    pub fn montage(&self) -> &Montage {
        &self.montage
    }

    pub fn paradigm(&self) -> Paradigm {
        self.paradigm
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn fs(&self) -> f64 {
        self.fs
    }

    pub fn samples_per_trial(&self) -> usize {
        self.samples_per_trial
    }

    pub fn declared_subjects(&self) -> u32 {
        self.declared_subjects
    }

    pub fn trials(&self) -> &[Trial<T>] {
        &self.trials
    }

    pub fn into_trials(self) -> Vec<Trial<T>> {
        self.trials
    }

    pub fn len(&self) -> usize {
        self.trials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trials.is_empty()
    }

    /// Distinct subject ids, ascending.
    pub fn subjects(&self) -> Vec<u32> {
        self.trials
            .iter()
            .map(|t| t.subject)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// Trials of one subject, in chronological order.
    pub fn subject_trials(&self, subject: u32) -> Vec<Trial<T>> {
        self.trials
            .iter()
            .filter(|t| t.subject == subject)
            .cloned()
            .collect()
    }

    /// Same header, different trials.
    pub fn with_trials(&self, trials: Vec<Trial<T>>) -> Result<Self> {
        let declared = trials
            .iter()
            .map(|t| t.subject + 1)
            .max()
            .unwrap_or(0)
            .max(self.declared_subjects);
        Self::with_header(
            self.montage.clone(),
            self.paradigm,
            self.class_count,
            self.fs,
            self.samples_per_trial,
            declared,
            trials,
        )
    }
}

/// Cuts a continuous `C x N` recording into non-overlapping windows of
/// `window_s` seconds. The trailing partial window is dropped.
pub fn segment<T: Scalar>(
    recording: ArrayView2<'_, T>,
    fs: f64,
    window_s: f64,
    labels: &[usize],
    subject: u32,
) -> Result<Vec<Trial<T>>> {
    let exact = window_s * fs;
    let width = exact.round();
    if !(width >= 1.0) || (exact - width).abs() > 1e-9 * exact.abs().max(1.0) {
        return Err(Error::WindowLength(exact));
    }
    let width = width as usize;
    let count = recording.ncols() / width;
    if labels.len() != count {
        return Err(Error::InvalidData(format!(
            "{} labels for {count} windows",
            labels.len()
        )));
    }
    Ok((0..count)
        .map(|w| {
            let block = recording.slice(s![.., w * width..(w + 1) * width]).to_owned();
            Trial::new(block, fs, labels[w], subject)
        })
        .collect())
}
