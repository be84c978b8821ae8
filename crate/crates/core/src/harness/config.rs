use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::augment::{AugmentChain, AugmentKind};
use crate::decode::DEFAULT_FILTERS;
use crate::error::{Error, Result};
use crate::signal::{FilterSpec, Recipe};
use crate::textcfg;

pub const DEFAULT_REPEATS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioKind {
    /// Train on a labeled block of the target subject only.
    Within,
    /// Train on all other subjects; the target is unlabeled.
    CrossUnsupervised,
    /// Train on all other subjects plus a labeled block of the target.
    CrossSupervised,
}

impl ScenarioKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::Within => "within",
            ScenarioKind::CrossUnsupervised => "cross-unsup",
            ScenarioKind::CrossSupervised => "cross-sup",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "within" | "within-subject" => Ok(ScenarioKind::Within),
            "cross-unsup" | "cross-unsupervised" => Ok(ScenarioKind::CrossUnsupervised),
            "cross-sup" | "cross-supervised" => Ok(ScenarioKind::CrossSupervised),
            _ => Err(Error::Config(format!("unknown scenario `{s}`"))),
        }
    }
}

/// One evaluation protocol over one dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    /// EEGT file, or a directory holding `data.eegt`.
    pub data: Option<PathBuf>,
    /// Evaluate one target only; `None` runs every subject as target.
    pub target_subject: Option<u32>,
    pub n_labeled_per_class: usize,
    pub chain: AugmentChain,
    pub c_noise: Option<f64>,
    pub c_scale: Option<f64>,
    pub c_freq: Option<f64>,
    pub seed: u64,
    pub repeats: usize,
    pub recipe: Recipe,
    pub n_filters: usize,
}

impl ScenarioConfig {
    pub fn new(scenario: ScenarioKind) -> Self {
        Self {
            scenario,
            data: None,
            target_subject: None,
            n_labeled_per_class: 0,
            chain: AugmentChain::none(),
            c_noise: None,
            c_scale: None,
            c_freq: None,
            seed: 0,
            repeats: DEFAULT_REPEATS,
            recipe: Recipe::default(),
            n_filters: DEFAULT_FILTERS,
        }
    }

    /// The chain with hyperparameter overrides applied.
    pub fn effective_chain(&self) -> AugmentChain {
        self.chain.clone().with_params(self.c_noise, self.c_scale, self.c_freq)
    }

    pub fn validate(&self) -> Result<()> {
        if self.repeats == 0 {
            return Err(Error::Config("repeats must be at least 1".into()));
        }
        match self.scenario {
            ScenarioKind::CrossUnsupervised if self.n_labeled_per_class != 0 => {
                return Err(Error::Config(
                    "cross-unsup uses no labeled target trials; set n_labeled to 0".into(),
                ))
            }
            ScenarioKind::Within if self.n_labeled_per_class == 0 => {
                return Err(Error::Config("within-subject needs n_labeled of at least 1".into()))
            }
            _ => {}
        }
        for c in [self.c_noise, self.c_scale, self.c_freq].into_iter().flatten() {
            if !(c.is_finite() && c > 0.0) {
                return Err(Error::Config(format!("augmentation constant {c} must be positive")));
            }
        }
        if self.chain.kinds().len() > 1 && self.chain.kinds().contains(&AugmentKind::None) {
            return Err(Error::Config("`none` cannot be combined with other augmenters".into()));
        }
        Ok(())
    }

    /// Line-oriented text, the inverse of [`FromStr`].
    pub fn render(&self) -> String {
        let mut out = format!("scenario {}\n", self.scenario);
        if let Some(p) = &self.data {
            out.push_str(&format!("data {}\n", p.display()));
        }
        if let Some(t) = self.target_subject {
            out.push_str(&format!("target {t}\n"));
        }
        out.push_str(&format!("n_labeled {}\n", self.n_labeled_per_class));
        out.push_str(&format!("augment {}\n", self.chain));
        for (key, v) in [("noise", self.c_noise), ("scale", self.c_scale), ("freq", self.c_freq)] {
            if let Some(v) = v {
                out.push_str(&format!("{key} {v}\n"));
            }
        }
        out.push_str(&format!("seed {}\n", self.seed));
        out.push_str(&format!("repeats {}\n", self.repeats));
        out.push_str(&format!("filters {}\n", self.n_filters));
        for f in &self.recipe.filters {
            out.push_str(&format!("filter {f}\n"));
        }
        if let Some(hz) = self.recipe.resample_hz {
            out.push_str(&format!("resample {hz}\n"));
        }
        out
    }
}

impl FromStr for ScenarioConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut cfg = ScenarioConfig::new(ScenarioKind::Within);
        for line in textcfg::lines(text) {
            if line.key == "filter" {
                let spec: FilterSpec = line
                    .args
                    .join(" ")
                    .parse()
                    .map_err(|e: Error| line.err(e.to_string()))?;
                cfg.recipe.filters.push(spec);
                continue;
            }
            line.expect_args(1)?;
            let v = line.args[0];
            let num = |v: &str| -> Result<f64> { v.parse().map_err(|_| line.err(format!("bad number `{v}`"))) };
            let int = |v: &str| -> Result<u64> { v.parse().map_err(|_| line.err(format!("bad integer `{v}`"))) };
            match line.key {
                "scenario" => cfg.scenario = v.parse().map_err(|e: Error| line.err(e.to_string()))?,
                "data" => cfg.data = Some(PathBuf::from(v)),
                "target" => cfg.target_subject = Some(int(v)? as u32),
                "n_labeled" => cfg.n_labeled_per_class = int(v)? as usize,
                "augment" => cfg.chain = v.parse().map_err(|e: Error| line.err(e.to_string()))?,
                "noise" => cfg.c_noise = Some(num(v)?),
                "scale" => cfg.c_scale = Some(num(v)?),
                "freq" => cfg.c_freq = Some(num(v)?),
                "seed" => cfg.seed = int(v)?,
                "repeats" => cfg.repeats = int(v)? as usize,
                "filters" => cfg.n_filters = int(v)? as usize,
                "resample" => cfg.recipe.resample_hz = Some(num(v)?),
                other => return Err(line.err(format!("unknown key `{other}`"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}
