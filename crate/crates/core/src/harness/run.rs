use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use super::config::{ScenarioConfig, ScenarioKind};
use super::report::ResultTable;
use super::split::split_continuous_block;
use crate::align::{align_subject, align_with, ea_reference, EaStream};
use crate::augment::{augment_trainset, stream_seed, AugmentChain, AugmentKind};
use crate::data::{read_trialset, Trial, TrialSet};
use crate::decode::{accuracy, bca, CspLda};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Reads an EEGT file, or `data.eegt` inside a directory.
pub fn load_dataset(path: impl AsRef<Path>) -> Result<TrialSet<f64>> {
    let path = path.as_ref();
    let file: PathBuf = if path.is_dir() {
        path.join("data.eegt")
    } else {
        path.to_path_buf()
    };
    read_trialset(file)
}

/// Runs the configured scenario on the dataset named in `config.data`.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ResultTable> {
    let path = config
        .data
        .as_ref()
        .ok_or_else(|| Error::Config("no dataset path configured".into()))?;
    let set = load_dataset(path)?;
    run_scenario_on(&set, config)
}

fn preprocess<T: Scalar>(set: &TrialSet<T>, config: &ScenarioConfig) -> Result<TrialSet<T>> {
    if config.recipe.is_identity() {
        return Ok(set.clone());
    }
    let trials: Vec<Trial<T>> = set
        .trials()
        .par_iter()
        .map(|t| config.recipe.apply(t).map_err(|e| e.with_subject(t.subject)))
        .collect::<Result<_>>()?;
    TrialSet::new(set.montage().clone(), set.paradigm(), set.class_count(), trials)
}

/// Runs the scenario on an in-memory set. Every (repeat, target) pair is an
/// independent job with its own seed `stream_seed(seed + repeat, [target])`.
pub fn run_scenario_on<T: Scalar>(set: &TrialSet<T>, config: &ScenarioConfig) -> Result<ResultTable> {
    config.validate()?;
    let chain = config.effective_chain();
    let set = preprocess(set, config)?;
    let all = set.subjects();
    let targets = match config.target_subject {
        Some(t) if all.contains(&t) => vec![t],
        Some(t) => return Err(Error::Config(format!("target subject {t} not in dataset"))),
        None => all.clone(),
    };
    if targets.is_empty() {
        return Err(Error::Empty);
    }
    let cross = config.scenario != ScenarioKind::Within;
    if cross && all.len() < 2 {
        return Err(Error::Config("cross-subject scenarios need at least two subjects".into()));
    }

    // every source subject is aligned once with its own full reference
    let sources: BTreeMap<u32, Vec<Trial<T>>> = if cross {
        all.par_iter()
            .map(|&s| {
                align_subject(&set.subject_trials(s))
                    .map(|v| (s, v))
                    .map_err(|e| e.with_subject(s))
            })
            .collect::<Result<_>>()?
    } else {
        BTreeMap::new()
    };

    let jobs: Vec<(usize, u32)> = (0..config.repeats)
        .flat_map(|r| targets.iter().map(move |&t| (r, t)))
        .collect();
    let scores: Vec<f64> = jobs
        .par_iter()
        .map(|&(r, target)| {
            let seed = stream_seed(config.seed.wrapping_add(r as u64), &[target as u64]);
            evaluate_target(&set, config, &chain, &sources, target, seed).map_err(|e| e.with_subject(target))
        })
        .collect::<Result<_>>()?;

    let values = scores.chunks(targets.len()).map(<[f64]>::to_vec).collect();
    ResultTable::new(chain.to_string(), targets, values)
}

fn evaluate_target<T: Scalar>(
    set: &TrialSet<T>,
    config: &ScenarioConfig,
    chain: &AugmentChain,
    sources: &BTreeMap<u32, Vec<Trial<T>>>,
    target: u32,
    seed: u64,
) -> Result<f64> {
    let own = set.subject_trials(target);
    let (block, rest) = split_continuous_block(&own, config.n_labeled_per_class, set.class_count())?;

    let mut train = Vec::new();
    let calibration = if block.is_empty() {
        None
    } else {
        let reference = ea_reference(&block)?;
        let w = reference.whitener()?;
        for t in &block {
            train.push(align_with(t, &w)?);
        }
        Some(reference)
    };
    if config.scenario != ScenarioKind::Within {
        for (_, trials) in sources.iter().filter(|(&s, _)| s != target) {
            train.extend(trials.iter().cloned());
        }
    }
    let train = augment_trainset(&set.with_trials(train)?, chain, seed)?;
    let model = CspLda::fit(train.trials(), config.n_filters)?;

    let mut stream = EaStream::new(calibration);
    let mut preds = Vec::with_capacity(rest.len());
    let mut labels = Vec::with_capacity(rest.len());
    for mut t in rest {
        t.held_out = true;
        let aligned = stream.observe(&t)?;
        preds.push(model.predict(&aligned)?);
        labels.push(t.label);
    }
    if set.paradigm().is_imbalanced() {
        bca(&preds, &labels)
    } else {
        accuracy(&preds, &labels)
    }
}

/// The augmentation constant a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Noise,
    Scale,
    Freq,
}

impl SweepParam {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepParam::Noise => "noise",
            SweepParam::Scale => "scale",
            SweepParam::Freq => "freq",
        }
    }

    pub fn default_grid(self) -> Vec<f64> {
        match self {
            SweepParam::Noise => vec![0.25, 0.5, 1.0, 2.0, 4.0],
            SweepParam::Scale => vec![0.005, 0.01, 0.05, 0.1, 0.2],
            SweepParam::Freq => vec![0.1, 0.2, 0.3, 0.4, 0.5],
        }
    }

    fn used_by(self, chain: &AugmentChain) -> bool {
        chain.kinds().iter().any(|k| {
            matches!(
                (self, k),
                (SweepParam::Noise, AugmentKind::Noise(_))
                    | (SweepParam::Scale, AugmentKind::Scale(_))
                    | (SweepParam::Freq, AugmentKind::Freq(_))
            )
        })
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "noise" => Ok(SweepParam::Noise),
            "scale" => Ok(SweepParam::Scale),
            "freq" => Ok(SweepParam::Freq),
            _ => Err(Error::Config(format!("unknown sweep parameter `{s}`"))),
        }
    }
}

/// One table per grid value, each labeled `<chain>[<param>=<value>]`.
pub fn sweep<T: Scalar>(
    set: &TrialSet<T>,
    config: &ScenarioConfig,
    param: SweepParam,
    grid: &[f64],
) -> Result<Vec<ResultTable>> {
    if !param.used_by(&config.chain) {
        return Err(Error::Config(format!(
            "chain `{}` has no {param} parameter to sweep",
            config.chain
        )));
    }
    if grid.is_empty() {
        return Err(Error::Config("empty sweep grid".into()));
    }
    grid.iter()
        .map(|&v| {
            let mut cfg = config.clone();
            match param {
                SweepParam::Noise => cfg.c_noise = Some(v),
                SweepParam::Scale => cfg.c_scale = Some(v),
                SweepParam::Freq => cfg.c_freq = Some(v),
            }
            let mut table = run_scenario_on(set, &cfg)?;
            table.method = format!("{}[{param}={v}]", config.chain);
            Ok(table)
        })
        .collect()
}
