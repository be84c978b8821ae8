//! Surrogate EEG with planted, mirror-symmetric class structure.
//!
//! Every channel carries an independent narrowband 10 Hz rhythm on top of
//! white plus 1/f background noise. For left/right-hand motor imagery the
//! left-hand class attenuates the rhythm on the right-hemisphere channels
//! by `erd_depth` and the right-hand class mirrors this exactly, so the
//! generative law is invariant under (reflect channels, swap labels). Each
//! subject's sources pass through a mixing matrix that commutes with the
//! reflection, which keeps the invariance per subject while making the
//! subjects differ.

use std::str::FromStr;

use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal, StandardNormal};
use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

use crate::augment::stream_seed;
use crate::data::{Paradigm, Trial, TrialSet};
use crate::error::{Error, Result};
use crate::montage::{builtin_montage, parse_montage, Dataset, Montage};
use crate::scalar::Scalar;
use crate::textcfg;

/// Centre and half-width of the planted rhythm, Hz.
pub const RHYTHM_HZ: f64 = 10.0;
pub const RHYTHM_HALF_WIDTH_HZ: f64 = 2.0;
/// Share of background variance that is 1/f (the rest is white).
pub const PINK_SHARE: f64 = 0.8;
/// Log-normal sigma of the per-trial rhythm gain.
pub const TRIAL_GAIN_SIGMA: f64 = 0.25;

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub montage: Montage,
    pub paradigm: Paradigm,
    pub subjects: usize,
    pub trials_per_class: usize,
    pub fs: f64,
    pub trial_s: f64,
    /// Fractional rhythm attenuation (MI) or ERP amplitude relative to the rhythm (imbalanced sets).
    pub erd_depth: f64,
    /// Background noise standard deviation, in units of the rhythm amplitude.
    pub noise_sigma: f64,
    /// Scale of the per-subject mixing perturbation.
    pub subject_shift_sigma: f64,
    pub seed: u64,
}

impl SynthSpec {
    /// MI-I layout, 9 subjects of 72 trials, 4 s at 250 Hz. ERD depth and
    /// noise put CSP+LDA with 10 labeled trials per class near 73%.
    pub fn mi_default(seed: u64) -> Self {
        Self {
            montage: builtin_montage(Dataset::MiI),
            paradigm: Paradigm::MiLr,
            subjects: 9,
            trials_per_class: 36,
            fs: 250.0,
            trial_s: 4.0,
            erd_depth: 0.2,
            noise_sigma: 1.2,
            subject_shift_sigma: 0.3,
            seed,
        }
    }

    pub fn samples_per_trial(&self) -> usize {
        (self.fs * self.trial_s).round() as usize
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.erd_depth) {
            return Err(Error::Config(format!("erd_depth {} outside [0, 1]", self.erd_depth)));
        }
        if self.subjects == 0 || self.trials_per_class == 0 || self.samples_per_trial() < 2 {
            return Err(Error::Config("subjects, trials and samples must be at least 1".into()));
        }
        if !(self.fs > 2.0 * (RHYTHM_HZ + RHYTHM_HALF_WIDTH_HZ)) {
            return Err(Error::Config(format!("fs {} too low for the 10 Hz rhythm", self.fs)));
        }
        if !(self.noise_sigma >= 0.0 && self.subject_shift_sigma >= 0.0) {
            return Err(Error::Config("noise scales must be non-negative".into()));
        }
        Ok(())
    }

    /// Key/value text, one `key value` per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("paradigm {}\n", self.paradigm));
        out.push_str(&format!("subjects {}\n", self.subjects));
        out.push_str(&format!("trials_per_class {}\n", self.trials_per_class));
        out.push_str(&format!("fs {}\n", self.fs));
        out.push_str(&format!("trial_s {}\n", self.trial_s));
        out.push_str(&format!("erd_depth {}\n", self.erd_depth));
        out.push_str(&format!("noise_sigma {}\n", self.noise_sigma));
        out.push_str(&format!("subject_shift_sigma {}\n", self.subject_shift_sigma));
        out.push_str(&format!("seed {}\n", self.seed));
        for line in self.montage.render().lines() {
            out.push_str(line);
            out.push('\n');
        }
        out
    }
}

impl FromStr for SynthSpec {
    type Err = Error;

    /// Parses a synth spec. Starts from [`SynthSpec::mi_default`]; a
    /// `montage <dataset>` line selects a built-in layout, while `channel` and
    /// `pair` lines give a custom one. Optional `minority_fraction` lines are
    /// accepted and ignored here (see [`parse_synth_file`]).
    fn from_str(s: &str) -> Result<Self> {
        parse_synth_file(s).map(|(spec, _)| spec)
    }
}

/// Parses a synth spec file, returning the spec and an optional minority fraction
/// (present when an imbalanced set is requested).
pub fn parse_synth_file(text: &str) -> Result<(SynthSpec, Option<f64>)> {
    let mut spec = SynthSpec::mi_default(0);
    let mut montage_lines = String::new();
    let mut minority = None;
    for line in textcfg::lines(text) {
        if line.key == "channel" || line.key == "pair" {
            montage_lines.push_str(line.key);
            for a in &line.args {
                montage_lines.push(' ');
                montage_lines.push_str(a);
            }
            montage_lines.push('\n');
            continue;
        }
        line.expect_args(1)?;
        let v = line.args[0];
        let num = |v: &str| -> Result<f64> {
            v.parse().map_err(|_| line.err(format!("bad number `{v}`")))
        };
        let int = |v: &str| -> Result<usize> {
            v.parse().map_err(|_| line.err(format!("bad count `{v}`")))
        };
        match line.key {
            "montage" => {
                let d: Dataset = v.parse()?;
                spec.montage = builtin_montage(d);
            }
            "paradigm" => spec.paradigm = v.parse()?,
            "subjects" => spec.subjects = int(v)?,
            "trials_per_class" => spec.trials_per_class = int(v)?,
            "fs" => spec.fs = num(v)?,
            "trial_s" => spec.trial_s = num(v)?,
            "erd_depth" => spec.erd_depth = num(v)?,
            "noise_sigma" => spec.noise_sigma = num(v)?,
            "subject_shift_sigma" => spec.subject_shift_sigma = num(v)?,
            "seed" => spec.seed = v.parse().map_err(|_| line.err(format!("bad seed `{v}`")))?,
            "minority_fraction" => minority = Some(num(v)?),
            other => return Err(line.err(format!("unknown key `{other}`"))),
        }
    }
    if !montage_lines.is_empty() {
        spec.montage = parse_montage(&montage_lines)?;
    }
    Ok((spec, minority))
}

/// Gaussian-coefficient spectra turned into real series by one inverse FFT.
struct NoiseShaper {
    n: usize,
    fft: Arc<dyn Fft<f64>>,
    /// Per-bin standard deviation for bins `1..n/2`.
    rhythm: Vec<f64>,
    pink: Vec<f64>,
}

impl NoiseShaper {
    fn new(n: usize, fs: f64) -> Self {
        let fft = FftPlanner::new().plan_fft_inverse(n);
        let half = n.div_ceil(2);
        let freq = |k: usize| k as f64 * fs / n as f64;
        let mut rhythm: Vec<f64> = (0..half)
            .map(|k| {
                let f = freq(k);
                if k > 0 && (f - RHYTHM_HZ).abs() <= RHYTHM_HALF_WIDTH_HZ {
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
        if rhythm.iter().all(|&g| g == 0.0) {
            // series too short to resolve the band: nearest bin
            let k = ((RHYTHM_HZ * n as f64 / fs).round() as usize).clamp(1, half - 1);
            rhythm[k] = 1.0;
        }
        let mut pink: Vec<f64> = (0..half)
            .map(|k| if k == 0 { 0.0 } else { 1.0 / freq(k).sqrt() })
            .collect();
        normalize_power(&mut rhythm);
        normalize_power(&mut pink);
        Self { n, fft, rhythm, pink }
    }

    /// Series whose variance has expectation one.
    fn draw(&self, profile: &[f64], rng: &mut ChaCha8Rng) -> Vec<f64> {
        let mut buf = vec![Complex::new(0.0, 0.0); self.n];
        for (k, &g) in profile.iter().enumerate().skip(1) {
            if g == 0.0 {
                continue;
            }
            let a: f64 = StandardNormal.sample(rng);
            let b: f64 = StandardNormal.sample(rng);
            let c = Complex::new(a, b) * (g / 2.0);
            buf[k] = c;
            buf[self.n - k] = c.conj();
        }
        self.fft.process(&mut buf);
        buf.into_iter().map(|z| z.re).collect()
    }
}

/// Scales per-bin deviations so the resulting series has unit expected variance.
fn normalize_power(profile: &mut [f64]) {
    let total: f64 = profile.iter().map(|g| g * g).sum();
    if total > 0.0 {
        let s = total.sqrt().recip();
        profile.iter_mut().for_each(|g| *g *= s);
    }
}

/// `I + sigma * (A + P A P^T) / 2`, which commutes with the reflection `P`.
fn subject_mixing(perm: &[usize], sigma: f64, rng: &mut ChaCha8Rng) -> Array2<f64> {
    let c = perm.len();
    let scale = sigma / (c as f64).sqrt();
    let a = Array2::from_shape_fn((c, c), |_| {
        let z: f64 = StandardNormal.sample(rng);
        z * scale
    });
    Array2::from_shape_fn((c, c), |(i, j)| {
        let base = if i == j { 1.0 } else { 0.0 };
        base + 0.5 * (a[[i, j]] + a[[perm[i], perm[j]]])
    })
}

fn balanced_labels(counts: &[usize], rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut labels: Vec<usize> = counts
        .iter()
        .enumerate()
        .flat_map(|(class, &n)| std::iter::repeat_n(class, n))
        .collect();
    labels.shuffle(rng);
    labels
}

struct TrialRecipe<'a> {
    shaper: &'a NoiseShaper,
    mixing: &'a Array2<f64>,
    noise_sigma: f64,
}

impl TrialRecipe<'_> {
    /// Mixed sources: `rhythm_gain[c] * rhythm_c + background_c + erp[c] * waveform`.
    fn render(
        &self,
        rhythm_gain: &[f64],
        erp: Option<(&[f64], &[f64])>,
        rng: &mut ChaCha8Rng,
    ) -> Array2<f64> {
        let c = rhythm_gain.len();
        let n = self.shaper.n;
        let trial_gain = LogNormal::new(0.0, TRIAL_GAIN_SIGMA)
            .expect("valid log-normal")
            .sample(rng);
        let white_sd = (1.0 - PINK_SHARE).sqrt();
        let pink_sd = PINK_SHARE.sqrt();
        let mut sources = Array2::<f64>::zeros((c, n));
        for ch in 0..c {
            let rhythm = self.shaper.draw(&self.shaper.rhythm, rng);
            let pink = self.shaper.draw(&self.shaper.pink, rng);
            let amp = rhythm_gain[ch] * trial_gain;
            for (t, slot) in sources.row_mut(ch).iter_mut().enumerate() {
                let w: f64 = StandardNormal.sample(rng);
                *slot = amp * rhythm[t] + self.noise_sigma * (pink_sd * pink[t] + white_sd * w);
            }
            if let Some((weights, wave)) = erp {
                for (slot, &v) in sources.row_mut(ch).iter_mut().zip(wave) {
                    *slot += weights[ch] * v;
                }
            }
        }
        self.mixing.dot(&sources)
    }
}

fn to_scalar<T: Scalar>(x: Array2<f64>) -> Array2<T> {
    x.mapv(T::lit)
}

/// Generates a left/right-hand motor-imagery set with mirror-symmetric ERD.
pub fn synth_mi<T: Scalar>(spec: &SynthSpec) -> Result<TrialSet<T>> {
    spec.validate()?;
    if spec.paradigm != Paradigm::MiLr {
        return Err(Error::Config(format!(
            "synth_mi generates MI_LR data, spec asks for {}",
            spec.paradigm
        )));
    }
    let perm = spec.montage.reflection_permutation()?;
    let n = spec.samples_per_trial();
    let shaper = NoiseShaper::new(n, spec.fs);
    let c = spec.montage.len();

    let per_subject: Vec<Vec<Trial<T>>> = (0..spec.subjects)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(spec.seed, &[s as u64]));
            let mixing = subject_mixing(&perm, spec.subject_shift_sigma, &mut rng);
            let labels = balanced_labels(&[spec.trials_per_class; 2], &mut rng);
            let recipe = TrialRecipe {
                shaper: &shaper,
                mixing: &mixing,
                noise_sigma: spec.noise_sigma,
            };
            labels
                .iter()
                .map(|&label| {
                    // left-hand imagery (0) desynchronizes the right hemisphere
                    let attenuated = if label == 0 { spec.montage.right() } else { spec.montage.left() };
                    let mut gain = vec![1.0; c];
                    for &ch in attenuated {
                        gain[ch] = 1.0 - spec.erd_depth;
                    }
                    let x = recipe.render(&gain, None, &mut rng);
                    Trial::new(to_scalar(x), spec.fs, label, s as u32)
                })
                .collect()
        })
        .collect();

    TrialSet::new(spec.montage.clone(), Paradigm::MiLr, 2, per_subject.concat())
}

/// Generates an imbalanced two-class set whose minority class (label 1)
/// carries a hemispherically symmetric evoked response peaking at 300 ms.
/// Each subject has `2 * trials_per_class` trials in total.
pub fn synth_imbalanced<T: Scalar>(spec: &SynthSpec, minority_fraction: f64) -> Result<TrialSet<T>> {
    spec.validate()?;
    if !(minority_fraction > 0.0 && minority_fraction < 0.5) {
        return Err(Error::Config(format!(
            "minority fraction {minority_fraction} outside (0, 0.5)"
        )));
    }
    let paradigm = match spec.paradigm {
        Paradigm::MiLr | Paradigm::MiOther => Paradigm::P300,
        p => p,
    };
    let perm: Vec<usize> = (0..spec.montage.len()).collect();
    let n = spec.samples_per_trial();
    let shaper = NoiseShaper::new(n, spec.fs);
    let c = spec.montage.len();
    let total = 2 * spec.trials_per_class;
    let minority = ((total as f64) * minority_fraction).round() as usize;
    let wave: Vec<f64> = (0..n)
        .map(|t| {
            let time = t as f64 / spec.fs;
            (-(time - 0.3).powi(2) / (2.0 * 0.05f64.powi(2))).exp() * spec.erd_depth * 2.0
        })
        .collect();
    let weights = vec![1.0; c];

    let per_subject: Vec<Vec<Trial<T>>> = (0..spec.subjects)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(spec.seed, &[s as u64]));
            // symmetric mixing: average of A and its mirror image is all that matters
            let mirror = spec
                .montage
                .reflection_permutation()
                .unwrap_or_else(|_| perm.clone());
            let mixing = subject_mixing(&mirror, spec.subject_shift_sigma, &mut rng);
            let labels = balanced_labels(&[total - minority, minority], &mut rng);
            let recipe = TrialRecipe {
                shaper: &shaper,
                mixing: &mixing,
                noise_sigma: spec.noise_sigma,
            };
            let gain = vec![1.0; c];
            labels
                .iter()
                .map(|&label| {
                    let erp = (label == 1).then_some((weights.as_slice(), wave.as_slice()));
                    let x = recipe.render(&gain, erp, &mut rng);
                    Trial::new(to_scalar(x), spec.fs, label, s as u32)
                })
                .collect()
        })
        .collect();

    TrialSet::new(spec.montage.clone(), paradigm, 2, per_subject.concat())
}
