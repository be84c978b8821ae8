use std::io;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    // montage
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("duplicate channel name `{0}`")]
    DuplicateChannel(String),
    #[error("unknown channel `{0}`")]
    UnknownChannel(String),
    #[error("channel `{0}` assigned to more than one of left/right/midline")]
    ChannelReassigned(String),
    #[error("left list has {left} channels but right list has {right}")]
    UnequalPairLists { left: usize, right: usize },
    #[error("invalid channel name `{0}`")]
    InvalidChannelName(String),
    #[error("montage has no left/right pairs; reflection is undefined")]
    PairlessMontage,

    // data
    #[error("bad magic bytes, not an EEGT file")]
    BadMagic,
    #[error("unsupported EEGT version {0}")]
    UnsupportedVersion(u32),
    #[error("payload shape mismatch: {0}")]
    PayloadShape(String),
    #[error("non-finite sample in trial {trial}")]
    NonFinite { trial: usize },
    #[error("label {label} out of range for {class_count} classes")]
    LabelRange { label: usize, class_count: usize },
    #[error("window of {0} samples is not a positive integer")]
    WindowLength(f64),
    #[error("invalid data: {0}")]
    InvalidData(String),
    #[error(transparent)]
    Io(#[from] io::Error),

    // signal
    #[error("series of length {len} too short, need more than {need}")]
    SeriesTooShort { len: usize, need: usize },
    #[error("invalid filter: {0}")]
    InvalidFilter(String),
    #[error("cannot express resampling ratio {0} as a bounded rational")]
    InvalidRatio(f64),

    // align / decode
    #[error("empty input")]
    Empty,
    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },
    #[error("matrix is not symmetric positive definite")]
    NotSpd,
    #[error("need exactly two classes, found {0}")]
    ClassCount(usize),
    #[error("number of spatial filters must be a positive even number, got {0}")]
    FilterCount(usize),
    #[error("total variance of projected trial is zero")]
    ZeroVariance,
    #[error("degenerate covariance could not be inverted")]
    Degenerate,

    // harness
    #[error("config error: {0}")]
    Config(String),
    #[error("subject {subject} has too few trials of class {class} (need {need})")]
    InsufficientTrials { subject: u32, class: usize, need: usize },
    #[error("held-out test trial reached a fitting path ({0})")]
    TestLeak(&'static str),
    #[error("subject {subject}: {source}")]
    Subject {
        subject: u32,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// True for errors caused by an invalid configuration rather than by the data.
    pub fn is_config(&self) -> bool {
        match self {
            Error::Parse { .. }
            | Error::DuplicateChannel(_)
            | Error::UnknownChannel(_)
            | Error::ChannelReassigned(_)
            | Error::UnequalPairLists { .. }
            | Error::InvalidChannelName(_)
            | Error::InvalidFilter(_)
            | Error::InvalidRatio(_)
            | Error::FilterCount(_)
            | Error::WindowLength(_)
            | Error::Config(_) => true,
            Error::Subject { source, .. } => source.is_config(),
            _ => false,
        }
    }

    pub(crate) fn with_subject(self, subject: u32) -> Self {
        match self {
            e @ Error::Subject { .. } => e,
            e => Error::Subject {
                subject,
                source: Box::new(e),
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
