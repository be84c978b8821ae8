//! Channel reflection augmentation for EEG decoding.
//!
//! Reflection swaps symmetric left/right hemisphere channels of a trial; for
//! left/right-hand motor imagery the label is swapped too. The crate also
//! carries the surrounding evaluation stack: montages, a binary trial
//! format, zero-phase filtering, baseline augmentations, Euclidean
//! alignment, CSP+LDA decoding, a synthetic EEG generator with planted
//! hemispheric symmetry, and a scenario runner.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below name the common instantiations.

pub mod align;
pub mod augment;
pub mod data;
pub mod decode;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod montage;
pub mod scalar;
pub mod signal;
pub mod synth;
mod textcfg;

pub use data::{Paradigm, Trial, TrialSet};
pub use error::{Error, Result};
pub use montage::{builtin_montage, parse_montage, ChannelId, ChannelKind, Dataset, Montage};
pub use scalar::Scalar;

pub type Trial32 = Trial<f32>;
pub type Trial64 = Trial<f64>;
pub type TrialSet32 = TrialSet<f32>;
pub type TrialSet64 = TrialSet<f64>;
