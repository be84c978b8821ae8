//! Trial augmentations: channel reflection (CR), its label-preserving
//! variant (Symm), random hemisphere shuffling (RS), and the amplitude and
//! frequency baselines (Noise, Flip, Scale, Freq).

use std::fmt;
use std::str::FromStr;

use ndarray::{Array2, Axis};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::data::{AugmentTag, Paradigm, Trial, TrialSet};
use crate::error::{Error, Result};
use crate::montage::Montage;
use crate::scalar::Scalar;
use crate::signal::{freq_shift, map_rows};

pub const DEFAULT_NOISE: f64 = 2.0;
pub const DEFAULT_SCALE: f64 = 0.05;
pub const DEFAULT_FREQ: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AugmentKind {
    None,
    /// Uniform noise with amplitude `std / C_noise`.
    Noise(f64),
    Flip,
    /// Two copies scaled by `1 + C` and `1 - C`.
    Scale(f64),
    /// Two copies shifted by `+C` and `-C` Hz.
    Freq(f64),
    Symm,
    Rs,
    Cr,
}

impl AugmentKind {
    pub fn name(&self) -> &'static str {
        match self {
            AugmentKind::None => "none",
            AugmentKind::Noise(_) => "noise",
            AugmentKind::Flip => "flip",
            AugmentKind::Scale(_) => "scale",
            AugmentKind::Freq(_) => "freq",
            AugmentKind::Symm => "symm",
            AugmentKind::Rs => "rs",
            AugmentKind::Cr => "cr",
        }
    }

    /// Training-set growth factor of one application.
    pub fn multiplicity(&self) -> usize {
        match self {
            AugmentKind::None => 1,
            AugmentKind::Scale(_) | AugmentKind::Freq(_) => 3,
            _ => 2,
        }
    }

    pub fn is_reflection(&self) -> bool {
        matches!(self, AugmentKind::Symm | AugmentKind::Rs | AugmentKind::Cr)
    }

    pub fn validate(&self, fs: f64) -> Result<()> {
        match *self {
            AugmentKind::Noise(c) if !(c > 0.0) => {
                Err(Error::Config(format!("noise divisor must be positive, got {c}")))
            }
            AugmentKind::Scale(c) if !(c > 0.0 && c < 1.0) => {
                Err(Error::Config(format!("scale factor must lie in (0, 1), got {c}")))
            }
            AugmentKind::Freq(c) if !(c > 0.0 && c < fs / 2.0) => Err(Error::Config(format!(
                "frequency shift must lie in (0, {}) Hz, got {c}",
                fs / 2.0
            ))),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for AugmentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AugmentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "none" => AugmentKind::None,
            "noise" => AugmentKind::Noise(DEFAULT_NOISE),
            "flip" => AugmentKind::Flip,
            "scale" => AugmentKind::Scale(DEFAULT_SCALE),
            "freq" => AugmentKind::Freq(DEFAULT_FREQ),
            "symm" => AugmentKind::Symm,
            "rs" => AugmentKind::Rs,
            "cr" => AugmentKind::Cr,
            other => return Err(Error::Config(format!("unknown augmentation `{other}`"))),
        })
    }
}

/// Augmenters applied in sequence, each to the output of the previous one.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentChain(pub Vec<AugmentKind>);

impl AugmentChain {
    pub fn none() -> Self {
        AugmentChain(vec![AugmentKind::None])
    }

    pub fn kinds(&self) -> &[AugmentKind] {
        &self.0
    }

    /// Overall growth factor for paradigms where every augmenter applies.
    pub fn multiplicity(&self) -> usize {
        self.0.iter().map(AugmentKind::multiplicity).product()
    }

    /// Replaces the hyperparameter of every matching augmenter.
    pub fn with_params(mut self, noise: Option<f64>, scale: Option<f64>, freq: Option<f64>) -> Self {
        for k in &mut self.0 {
            match k {
                AugmentKind::Noise(c) => *c = noise.unwrap_or(*c),
                AugmentKind::Scale(c) => *c = scale.unwrap_or(*c),
                AugmentKind::Freq(c) => *c = freq.unwrap_or(*c),
                _ => {}
            }
        }
        self
    }
}

impl fmt::Display for AugmentChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.0.iter().map(AugmentKind::name).collect();
        f.write_str(&names.join("+"))
    }
}

impl FromStr for AugmentChain {
    type Err = Error;

    /// `cr+freq` or `cr,freq`.
    fn from_str(s: &str) -> Result<Self> {
        let kinds: Vec<AugmentKind> = s
            .split(['+', ','])
            .map(str::parse)
            .collect::<Result<_>>()?;
        if kinds.is_empty() {
            return Err(Error::Config("empty augmentation chain".into()));
        }
        Ok(AugmentChain(kinds))
    }
}

/// Rows of `samples` permuted so that output row `c` is input row `perm[c]`.
pub fn permute_rows<T: Scalar>(samples: &Array2<T>, perm: &[usize]) -> Array2<T> {
    samples.select(Axis(0), perm)
}

/// Channel reflection: swap each left/right pair; for left/right-hand
/// motor imagery the label becomes `1 - y`, otherwise it is kept.
pub fn cr<T: Scalar>(
    trial: &Trial<T>,
    montage: &Montage,
    paradigm: Paradigm,
    class_count: usize,
) -> Result<Trial<T>> {
    let perm = montage.reflection_permutation()?;
    check_channels(trial, montage)?;
    let label = if paradigm == Paradigm::MiLr {
        if class_count != 2 || trial.label > 1 {
            return Err(Error::ClassCount(class_count));
        }
        1 - trial.label
    } else {
        trial.label
    };
    Ok(trial.derive(permute_rows(&trial.samples, &perm), label, AugmentTag::Cr))
}

/// Same channel swap as [`cr`], label always unchanged.
pub fn symm<T: Scalar>(trial: &Trial<T>, montage: &Montage) -> Result<Trial<T>> {
    let perm = montage.reflection_permutation()?;
    check_channels(trial, montage)?;
    Ok(trial.derive(permute_rows(&trial.samples, &perm), trial.label, AugmentTag::Symm))
}

/// Random shuffle: draws a uniform bijection from left to right channels
/// and swaps each left channel with its image. Label unchanged.
pub fn rs<T: Scalar, R: Rng + ?Sized>(
    trial: &Trial<T>,
    montage: &Montage,
    rng: &mut R,
) -> Result<Trial<T>> {
    if montage.pair_count() == 0 {
        return Err(Error::PairlessMontage);
    }
    check_channels(trial, montage)?;
    let mut targets: Vec<usize> = montage.right().to_vec();
    targets.shuffle(rng);
    let mut perm: Vec<usize> = (0..montage.len()).collect();
    for (&l, &r) in montage.left().iter().zip(&targets) {
        perm[l] = r;
        perm[r] = l;
    }
    Ok(trial.derive(permute_rows(&trial.samples, &perm), trial.label, AugmentTag::Rs))
}

/// Adds `u * std(X_c) / c_noise` per sample, `u ~ U[-1, 1]`.
pub fn noise<T: Scalar, R: Rng + ?Sized>(trial: &Trial<T>, c_noise: f64, rng: &mut R) -> Result<Trial<T>> {
    AugmentKind::Noise(c_noise).validate(trial.fs)?;
    let mut out = trial.samples.clone();
    let div = T::lit(c_noise);
    for mut row in out.rows_mut() {
        let amp = row.std(T::zero()) / div;
        for v in row.iter_mut() {
            let u: f64 = rng.random_range(-1.0..=1.0);
            *v += T::lit(u) * amp;
        }
    }
    Ok(trial.derive(out, trial.label, AugmentTag::Noise))
}

/// Amplitude flip `max(X_c) - X_c`, per channel.
pub fn flip<T: Scalar>(trial: &Trial<T>) -> Trial<T> {
    let mut out = trial.samples.clone();
    for mut row in out.rows_mut() {
        let max = row.iter().copied().fold(T::neg_infinity(), T::max);
        row.mapv_inplace(|v| max - v);
    }
    trial.derive(out, trial.label, AugmentTag::Flip)
}

/// Two copies scaled by `1 + c` and `1 - c`.
pub fn scale<T: Scalar>(trial: &Trial<T>, c_scale: f64) -> Result<(Trial<T>, Trial<T>)> {
    AugmentKind::Scale(c_scale).validate(trial.fs)?;
    let up = &trial.samples * T::lit(1.0 + c_scale);
    let down = &trial.samples * T::lit(1.0 - c_scale);
    Ok((
        trial.derive(up, trial.label, AugmentTag::ScaleUp),
        trial.derive(down, trial.label, AugmentTag::ScaleDown),
    ))
}

/// Two copies with every channel shifted by `+c` and `-c` Hz.
pub fn freq<T: Scalar>(trial: &Trial<T>, c_freq: f64) -> Result<(Trial<T>, Trial<T>)> {
    AugmentKind::Freq(c_freq).validate(trial.fs)?;
    let up = map_rows(&trial.samples, |r| freq_shift(r, trial.fs, c_freq))?;
    let down = map_rows(&trial.samples, |r| freq_shift(r, trial.fs, -c_freq))?;
    Ok((
        trial.derive(up, trial.label, AugmentTag::FreqUp),
        trial.derive(down, trial.label, AugmentTag::FreqDown),
    ))
}

fn check_channels<T: Scalar>(trial: &Trial<T>, montage: &Montage) -> Result<()> {
    if trial.channels() != montage.len() {
        return Err(Error::ShapeMismatch {
            expected: format!("{} channels", montage.len()),
            got: format!("{} channels", trial.channels()),
        });
    }
    Ok(())
}

/// Deterministic per-(stage, trial) RNG seed (splitmix64 finalizer).
pub(crate) fn stream_seed(base: u64, parts: &[u64]) -> u64 {
    let mut z = base;
    for &p in parts {
        z = z.wrapping_add(p.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
    }
    z
}

/// Copies one augmenter produces for one trial.
fn copies_of<T: Scalar>(
    kind: AugmentKind,
    trial: &Trial<T>,
    montage: &Montage,
    paradigm: Paradigm,
    class_count: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Trial<T>>> {
    if kind.is_reflection() && paradigm == Paradigm::MiOther {
        return Ok(Vec::new());
    }
    Ok(match kind {
        AugmentKind::None => Vec::new(),
        AugmentKind::Noise(c) => vec![noise(trial, c, rng)?],
        AugmentKind::Flip => vec![flip(trial)],
        AugmentKind::Scale(c) => {
            let (a, b) = scale(trial, c)?;
            vec![a, b]
        }
        AugmentKind::Freq(c) => {
            let (a, b) = freq(trial, c)?;
            vec![a, b]
        }
        AugmentKind::Symm => vec![symm(trial, montage)?],
        AugmentKind::Rs => vec![rs(trial, montage, rng)?],
        AugmentKind::Cr => vec![cr(trial, montage, paradigm, class_count)?],
    })
}

/// Expands a training set: each augmenter in the chain appends its copies
/// of every trial produced so far (originals first, then copies in trial
/// order). Reflection-family augmenters add nothing for `MiOther` sets.
///
/// Randomness is drawn from one stream per (stage, trial index), so the
/// result does not depend on thread scheduling.
pub fn augment_trainset<T: Scalar>(
    set: &TrialSet<T>,
    chain: &AugmentChain,
    seed: u64,
) -> Result<TrialSet<T>> {
    if set.trials().iter().any(|t| t.held_out) {
        return Err(Error::TestLeak("augmentation"));
    }
    for kind in chain.kinds() {
        kind.validate(set.fs())?;
    }
    let mut current: Vec<Trial<T>> = set.trials().to_vec();
    for (stage, &kind) in chain.kinds().iter().enumerate() {
        if kind == AugmentKind::None {
            continue;
        }
        let extra: Vec<Vec<Trial<T>>> = current
            .par_iter()
            .enumerate()
            .map(|(i, t)| {
                let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, &[stage as u64, i as u64]));
                copies_of(kind, t, set.montage(), set.paradigm(), set.class_count(), &mut rng)
                    .map_err(|e| e.with_subject(t.subject))
            })
            .collect::<Result<_>>()?;
        current.extend(extra.into_iter().flatten());
    }
    set.with_trials(current)
}
