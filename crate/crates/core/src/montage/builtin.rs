//! Built-in layouts of the eight benchmark datasets.
//!
//! Left/right lists are kept in the printed order of the electrode table;
//! the remaining recorded channels are midline.

use std::fmt;
use std::str::FromStr;

use super::{ChannelId, ChannelKind, Montage};
use crate::data::Paradigm;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dataset {
    MiI,
    MiII,
    MiIII,
    Ssvep,
    P300I,
    P300II,
    SeizureI,
    SeizureII,
}

impl Dataset {
    pub const ALL: [Dataset; 8] = [
        Dataset::MiI,
        Dataset::MiII,
        Dataset::MiIII,
        Dataset::Ssvep,
        Dataset::P300I,
        Dataset::P300II,
        Dataset::SeizureI,
        Dataset::SeizureII,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Dataset::MiI => "MI-I",
            Dataset::MiII => "MI-II",
            Dataset::MiIII => "MI-III",
            Dataset::Ssvep => "SSVEP",
            Dataset::P300I => "P300-I",
            Dataset::P300II => "P300-II",
            Dataset::SeizureI => "Seizure-I",
            Dataset::SeizureII => "Seizure-II",
        }
    }

    pub fn paradigm(self) -> Paradigm {
        match self {
            Dataset::MiI | Dataset::MiII | Dataset::MiIII => Paradigm::MiLr,
            Dataset::Ssvep => Paradigm::Ssvep,
            Dataset::P300I | Dataset::P300II => Paradigm::P300,
            Dataset::SeizureI | Dataset::SeizureII => Paradigm::Seizure,
        }
    }

    /// Sample rate after preprocessing, in Hz.
    pub fn sample_rate(self) -> f64 {
        match self {
            Dataset::MiI | Dataset::MiII | Dataset::MiIII => 250.0,
            Dataset::Ssvep | Dataset::P300I | Dataset::P300II | Dataset::SeizureI => 256.0,
            Dataset::SeizureII => 500.0,
        }
    }

    /// Trial length in seconds.
    pub fn trial_seconds(self) -> f64 {
        match self {
            Dataset::MiI | Dataset::SeizureI | Dataset::SeizureII => 4.0,
            Dataset::MiII => 4.5,
            Dataset::MiIII => 3.0,
            Dataset::Ssvep | Dataset::P300I => 1.0,
            Dataset::P300II => 0.8,
        }
    }
}

impl fmt::Display for Dataset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Dataset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Dataset::ALL
            .into_iter()
            .find(|d| d.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown dataset `{s}`")))
    }
}

struct Layout {
    kind: ChannelKind,
    channels: &'static [&'static str],
    left: &'static [&'static str],
    right: &'static [&'static str],
}

const MI_I: Layout = Layout {
    kind: ChannelKind::Unipolar,
    channels: &[
        "Fz", "FC3", "FC1", "FCz", "FC2", "FC4", "C5", "C3", "C1", "Cz", "C2", "C4", "C6", "CP3",
        "CP1", "CPz", "CP2", "CP4", "P1", "Pz", "P2", "POz",
    ],
    left: &["FC3", "FC1", "C5", "C3", "C1", "CP3", "CP1", "P1"],
    right: &["FC4", "FC2", "C6", "C4", "C2", "CP4", "CP2", "P2"],
};

const MI_II: Layout = Layout {
    kind: ChannelKind::Unipolar,
    channels: &["C3", "Cz", "C4"],
    left: &["C3"],
    right: &["C4"],
};

const MI_III: Layout = Layout {
    kind: ChannelKind::Unipolar,
    channels: &[
        "AF3", "AF4", "F5", "F3", "F1", "Fz", "F2", "F4", "F6", "FC5", "FC3", "FC1", "FCz", "FC2",
        "FC4", "FC6", "CFC7", "CFC5", "CFC3", "CFC1", "CFC2", "CFC4", "CFC6", "CFC8", "T7", "C5",
        "C3", "C1", "Cz", "C2", "C4", "C6", "T8", "CCP7", "CCP5", "CCP3", "CCP1", "CCP2", "CCP4",
        "CCP6", "CCP8", "CP5", "CP3", "CP1", "CPz", "CP2", "CP4", "CP6", "P5", "P3", "P1", "Pz",
        "P2", "P4", "P6", "PO1", "PO2", "O1", "O2",
    ],
    left: &[
        "AF3", "F5", "F3", "F1", "FC5", "FC3", "FC1", "CFC7", "CFC5", "CFC3", "CFC1", "T7", "C5",
        "C3", "C1", "CCP7", "CCP5", "CCP3", "CCP1", "CP5", "CP3", "CP1", "P5", "P3", "P1", "PO1",
        "O1",
    ],
    right: &[
        "AF4", "F6", "F4", "F2", "FC6", "FC4", "FC2", "CFC8", "CFC6", "CFC4", "CFC2", "T8", "C6",
        "C4", "C2", "CCP8", "CCP6", "CCP4", "CCP2", "CP6", "CP4", "CP2", "P6", "P4", "P2", "PO2",
        "O2",
    ],
};

const SSVEP: Layout = Layout {
    kind: ChannelKind::Unipolar,
    channels: &["P7", "P3", "POz", "P4", "P8", "O1", "Oz", "O2"],
    left: &["P7", "P3", "O1"],
    right: &["P8", "P4", "O2"],
};

const P300_I: Layout = Layout {
    kind: ChannelKind::Unipolar,
    channels: &["Fz", "Cz", "Pz", "Oz", "P3", "P4", "PO7", "PO8"],
    left: &["P3", "PO7"],
    right: &["P4", "PO8"],
};

const P300_II: Layout = Layout {
    kind: ChannelKind::Unipolar,
    channels: &[
        "Fz", "FCz", "Cz", "CPz", "Pz", "Oz", "F3", "F4", "C3", "C4", "CP3", "CP4", "P3", "P4",
        "PO7", "PO8",
    ],
    left: &["F3", "C3", "CP3", "P3", "PO7"],
    right: &["F4", "C4", "CP4", "P4", "PO8"],
};

const SEIZURE: Layout = Layout {
    kind: ChannelKind::Bipolar,
    channels: &[
        "Fp2-F4", "F4-C4", "C4-P4", "P4-O2", "Fp1-F3", "F3-C3", "C3-P3", "P3-O1", "Fp2-F8",
        "F8-T4", "T4-T6", "T6-O2", "Fp1-F7", "F7-T3", "T3-T5", "T5-O1", "Fz-Cz", "Cz-Pz",
    ],
    left: &[
        "Fp1-F3", "F3-C3", "C3-P3", "P3-O1", "Fp1-F7", "F7-T3", "T3-T5", "T5-O1",
    ],
    right: &[
        "Fp2-F4", "F4-C4", "C4-P4", "P4-O2", "Fp2-F8", "F8-T4", "T4-T6", "T6-O2",
    ],
};

/// The electrode layout of one of the eight benchmark datasets.
pub fn builtin_montage(dataset: Dataset) -> Montage {
    let layout = match dataset {
        Dataset::MiI => &MI_I,
        Dataset::MiII => &MI_II,
        Dataset::MiIII => &MI_III,
        Dataset::Ssvep => &SSVEP,
        Dataset::P300I => &P300_I,
        Dataset::P300II => &P300_II,
        Dataset::SeizureI | Dataset::SeizureII => &SEIZURE,
    };
    let channels = layout
        .channels
        .iter()
        .map(|n| ChannelId::new(*n, layout.kind).expect("static channel name"))
        .collect();
    Montage::from_names(channels, layout.left, layout.right).expect("static layout is valid")
}
