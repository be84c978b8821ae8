//! EEGT binary trial format.
//!
//! Little-endian layout:
//!
//! ```text
//! magic "EEGT" | version u32 = 1 | paradigm u8 | class_count u16 | C u32 | T u32
//! | fs f64 | n_subjects u32 | n_trials u32
//! then n_trials records: subject u32 | label u16 | C*T f32 row-major [channel][time]
//! ```
//!
//! The montage lives in a sidecar montage-config file with the same stem
//! and a `.montage` extension.

use std::fs;
use std::path::{Path, PathBuf};

use ndarray::Array2;

use super::{Paradigm, Trial, TrialSet};
use crate::error::{Error, Result};
use crate::montage::{parse_montage, Montage};
use crate::scalar::Scalar;

const MAGIC: &[u8; 4] = b"EEGT";
const VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 1 + 2 + 4 + 4 + 8 + 4 + 4;

pub fn sidecar_path(path: &Path) -> PathBuf {
    path.with_extension("montage")
}

/// Serializes a trial set. Samples are narrowed to `f32`.
pub fn encode_eegt<T: Scalar>(set: &TrialSet<T>) -> Vec<u8> {
    let c = set.montage().len();
    let t = set.samples_per_trial();
    let mut out = Vec::with_capacity(HEADER_LEN + set.len() * (6 + 4 * c * t));
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.push(set.paradigm().code());
    out.extend_from_slice(&(set.class_count() as u16).to_le_bytes());
    out.extend_from_slice(&(c as u32).to_le_bytes());
    out.extend_from_slice(&(t as u32).to_le_bytes());
    out.extend_from_slice(&set.fs().to_le_bytes());
    out.extend_from_slice(&set.declared_subjects().to_le_bytes());
    out.extend_from_slice(&(set.len() as u32).to_le_bytes());
    for trial in set.trials() {
        out.extend_from_slice(&trial.subject.to_le_bytes());
        out.extend_from_slice(&(trial.label as u16).to_le_bytes());
        for v in trial.samples.iter() {
            out.extend_from_slice(&v.as_f32().to_le_bytes());
        }
    }
    out
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N]> {
        let end = self.pos + N;
        let bytes = self.buf.get(self.pos..end).ok_or_else(|| {
            Error::PayloadShape(format!("file ends at byte {}, need {end}", self.buf.len()))
        })?;
        self.pos = end;
        Ok(bytes.try_into().expect("slice length checked"))
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take::<1>()?[0])
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take()?))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take()?))
    }

    fn f32(&mut self) -> Result<f32> {
        Ok(f32::from_le_bytes(self.take()?))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take()?))
    }
}

/// Parses EEGT bytes against a montage, validating every set invariant.
pub fn decode_eegt<T: Scalar>(bytes: &[u8], montage: Montage) -> Result<TrialSet<T>> {
    let mut cur = Cursor { buf: bytes, pos: 0 };
    if bytes.len() < 4 || &cur.take::<4>()? != MAGIC {
        return Err(Error::BadMagic);
    }
    let version = cur.u32()?;
    if version != VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let paradigm_code = cur.u8()?;
    let paradigm = Paradigm::from_code(paradigm_code)
        .ok_or_else(|| Error::InvalidData(format!("unknown paradigm code {paradigm_code}")))?;
    let class_count = cur.u16()? as usize;
    let c = cur.u32()? as usize;
    let t = cur.u32()? as usize;
    let fs = cur.f64()?;
    let n_subjects = cur.u32()?;
    let n_trials = cur.u32()? as usize;

    if c != montage.len() {
        return Err(Error::PayloadShape(format!(
            "header declares {c} channels, montage has {}",
            montage.len()
        )));
    }
    let record = 6 + 4 * c * t;
    let expected = HEADER_LEN + n_trials * record;
    if bytes.len() != expected {
        return Err(Error::PayloadShape(format!(
            "{n_trials} trials of {c}x{t} need {expected} bytes, file has {}",
            bytes.len()
        )));
    }

    let mut trials = Vec::with_capacity(n_trials);
    for i in 0..n_trials {
        let subject = cur.u32()?;
        let label = cur.u16()? as usize;
        let mut data = Vec::with_capacity(c * t);
        for _ in 0..c * t {
            let v = cur.f32()?;
            if !v.is_finite() {
                return Err(Error::NonFinite { trial: i });
            }
            data.push(T::lit(v as f64));
        }
        let samples = Array2::from_shape_vec((c, t), data)
            .map_err(|e| Error::PayloadShape(e.to_string()))?;
        trials.push(Trial::new(samples, fs, label, subject));
    }
    TrialSet::with_header(montage, paradigm, class_count, fs, t, n_subjects, trials)
}

/// Writes `path` (EEGT) and its montage sidecar.
pub fn write_trialset<T: Scalar>(set: &TrialSet<T>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_eegt(set))?;
    fs::write(sidecar_path(path), set.montage().render())?;
    Ok(())
}

/// Reads `path` (EEGT) bound to its montage sidecar.
pub fn read_trialset<T: Scalar>(path: impl AsRef<Path>) -> Result<TrialSet<T>> {
    let path = path.as_ref();
    let montage = parse_montage(&fs::read_to_string(sidecar_path(path))?)?;
    decode_eegt(&fs::read(path)?, montage)
}
