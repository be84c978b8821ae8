//! Electrode layouts and the left/right reflection permutation.
//!
//! A [`Montage`] is an ordered channel list (row order of every trial bound
//! to it) plus two positional index lists: `left[k]` mirrors `right[k]`.
//! Everything not paired is midline and stays fixed under reflection.
//! Pairing is always explicit; nothing is inferred from 10-20 names.

mod builtin;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

pub use builtin::{builtin_montage, Dataset};

use crate::error::{Error, Result};
use crate::textcfg;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    Unipolar,
    Bipolar,
}

impl ChannelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ChannelKind::Unipolar => "unipolar",
            ChannelKind::Bipolar => "bipolar",
        }
    }
}

impl FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unipolar" => Ok(ChannelKind::Unipolar),
            "bipolar" => Ok(ChannelKind::Bipolar),
            other => Err(Error::Config(format!("unknown channel kind `{other}`"))),
        }
    }
}

/// A channel label: a 10-20 electrode (`C3`) or a bipolar derivation (`Fp1-F3`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChannelId {
    name: String,
    kind: ChannelKind,
}

impl ChannelId {
    pub fn new(name: impl Into<String>, kind: ChannelKind) -> Result<Self> {
        let name = name.into();
        let valid_label = |s: &str| {
            !s.is_empty() && !s.contains('-') && !s.chars().any(char::is_whitespace)
        };
        let ok = match kind {
            ChannelKind::Unipolar => valid_label(&name),
            ChannelKind::Bipolar => match name.split_once('-') {
                Some((a, b)) => valid_label(a) && valid_label(b),
                None => false,
            },
        };
        if ok {
            Ok(Self { name, kind })
        } else {
            Err(Error::InvalidChannelName(name))
        }
    }

    pub fn unipolar(name: &str) -> Result<Self> {
        Self::new(name, ChannelKind::Unipolar)
    }

    pub fn bipolar(name: &str) -> Result<Self> {
        Self::new(name, ChannelKind::Bipolar)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }
}

/// Ordered channel layout with a positional left/right pair map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Montage {
    channels: Vec<ChannelId>,
    left: Vec<usize>,
    right: Vec<usize>,
    midline: Vec<usize>,
}

impl Montage {
    /// Builds a montage from channel rows and index pairs `(left, right)`.
    pub fn new(channels: Vec<ChannelId>, left: Vec<usize>, right: Vec<usize>) -> Result<Self> {
        let mut seen = HashMap::with_capacity(channels.len());
        for ch in &channels {
            if seen.insert(ch.name.as_str(), ()).is_some() {
                return Err(Error::DuplicateChannel(ch.name.clone()));
            }
        }
        if left.len() != right.len() {
            return Err(Error::UnequalPairLists {
                left: left.len(),
                right: right.len(),
            });
        }
        let c = channels.len();
        let mut assigned = vec![false; c];
        for &idx in left.iter().chain(&right) {
            let slot = assigned
                .get_mut(idx)
                .ok_or_else(|| Error::UnknownChannel(format!("#{idx}")))?;
            if *slot {
                return Err(Error::ChannelReassigned(channels[idx].name.clone()));
            }
            *slot = true;
        }
        let midline = (0..c).filter(|&i| !assigned[i]).collect();
        Ok(Self {
            channels,
            left,
            right,
            midline,
        })
    }

    /// Builds a montage from channel rows and name lists, as printed in
    /// electrode tables.
    pub fn from_names(channels: Vec<ChannelId>, left: &[&str], right: &[&str]) -> Result<Self> {
        let index: HashMap<&str, usize> = channels
            .iter()
            .enumerate()
            .map(|(i, ch)| (ch.name(), i))
            .collect();
        let lookup = |names: &[&str]| -> Result<Vec<usize>> {
            names
                .iter()
                .map(|n| {
                    index
                        .get(n)
                        .copied()
                        .ok_or_else(|| Error::UnknownChannel((*n).to_string()))
                })
                .collect()
        };
        let l = lookup(left)?;
        let r = lookup(right)?;
        Self::new(channels, l, r)
    }

    pub fn channels(&self) -> &[ChannelId] {
        &self.channels
    }

    /// Number of channels `C`.
    pub fn len(&self) -> usize {
        self.channels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }

    /// Number of symmetric pairs `K`.
    pub fn pair_count(&self) -> usize {
        self.left.len()
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    pub fn midline(&self) -> &[usize] {
        &self.midline
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.channels.iter().position(|c| c.name == name)
    }

    /// The channel permutation that swaps every `left[k]` with `right[k]`.
    ///
    /// `perm[c]` is the source row for output row `c`. The result is an
    /// involution with exactly `C - 2K` fixed points.
    pub fn reflection_permutation(&self) -> Result<Vec<usize>> {
        if self.left.is_empty() {
            return Err(Error::PairlessMontage);
        }
        let mut perm: Vec<usize> = (0..self.len()).collect();
        for (&l, &r) in self.left.iter().zip(&self.right) {
            perm[l] = r;
            perm[r] = l;
        }
        Ok(perm)
    }

    /// Canonical montage-config text: channels first, then pairs.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for ch in &self.channels {
            out.push_str(&format!("channel {} {}\n", ch.name, ch.kind.as_str()));
        }
        for (&l, &r) in self.left.iter().zip(&self.right) {
            out.push_str(&format!(
                "pair {} {}\n",
                self.channels[l].name, self.channels[r].name
            ));
        }
        out
    }
}

impl fmt::Display for Montage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl FromStr for Montage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_montage(s)
    }
}

/// Parses the montage-config format.
///
/// ```text
/// # MI-II
/// channel C3 unipolar
/// channel Cz unipolar
/// channel C4 unipolar
/// pair C3 C4
/// ```
pub fn parse_montage(text: &str) -> Result<Montage> {
    let mut channels: Vec<ChannelId> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut paired = HashMap::new();

    for line in textcfg::lines(text) {
        match line.key {
            "channel" => {
                line.expect_args(2)?;
                let kind: ChannelKind = line.args[1].parse().map_err(|_| {
                    line.err(format!("unknown channel kind `{}`", line.args[1]))
                })?;
                let ch = ChannelId::new(line.args[0], kind)?;
                if index.contains_key(ch.name()) {
                    return Err(Error::DuplicateChannel(ch.name));
                }
                index.insert(ch.name.clone(), channels.len());
                channels.push(ch);
            }
            "pair" => {
                line.expect_args(2)?;
                let mut idx = [0usize; 2];
                for (slot, name) in idx.iter_mut().zip(&line.args) {
                    *slot = *index
                        .get(*name)
                        .ok_or_else(|| Error::UnknownChannel((*name).to_string()))?;
                    if paired.insert(*slot, ()).is_some() {
                        return Err(Error::ChannelReassigned((*name).to_string()));
                    }
                }
                left.push(idx[0]);
                right.push(idx[1]);
            }
            other => return Err(line.err(format!("unknown directive `{other}`"))),
        }
    }
    Montage::new(channels, left, right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const MI2: &str = "channel C3 unipolar\nchannel Cz unipolar\nchannel C4 unipolar\npair C3 C4\n";

    #[test]
    fn parses_three_channel_layout() {
        let m = parse_montage(MI2).unwrap();
        assert_eq!(m.left(), &[0]);
        assert_eq!(m.right(), &[2]);
        assert_eq!(m.midline(), &[1]);
        assert_eq!(m.reflection_permutation().unwrap(), vec![2, 1, 0]);
    }

    #[test]
    fn pairless_montage_is_constructible() {
        let m = parse_montage("channel Cz unipolar").unwrap();
        assert_eq!(m.pair_count(), 0);
        assert_eq!(m.midline(), &[0]);
        assert!(matches!(
            m.reflection_permutation(),
            Err(Error::PairlessMontage)
        ));
    }

    #[test]
    fn channel_in_two_pairs_rejected() {
        let text = "channel C3 unipolar\nchannel C4 unipolar\nchannel CP4 unipolar\n\
                    pair C3 C4\npair C3 CP4\n";
        assert!(matches!(
            parse_montage(text),
            Err(Error::ChannelReassigned(n)) if n == "C3"
        ));
    }

    #[test]
    fn self_pair_rejected() {
        let text = "channel C3 unipolar\npair C3 C3\n";
        assert!(matches!(parse_montage(text), Err(Error::ChannelReassigned(_))));
    }

    #[test]
    fn duplicate_and_unknown_channels() {
        assert!(matches!(
            parse_montage("channel C3 unipolar\nchannel C3 unipolar\n"),
            Err(Error::DuplicateChannel(_))
        ));
        assert!(matches!(
            parse_montage("channel C3 unipolar\npair C3 C4\n"),
            Err(Error::UnknownChannel(n)) if n == "C4"
        ));
    }

    #[test]
    fn names_are_case_sensitive() {
        let text = "channel C3 unipolar\nchannel c3 unipolar\npair C3 c3\n";
        let m = parse_montage(text).unwrap();
        assert_eq!(m.pair_count(), 1);
        assert!(matches!(
            parse_montage("channel C3 unipolar\nchannel C4 unipolar\npair c3 C4\n"),
            Err(Error::UnknownChannel(_))
        ));
    }

    #[test]
    fn bipolar_names_need_one_dash() {
        assert!(ChannelId::bipolar("Fp1-F3").is_ok());
        assert!(ChannelId::bipolar("Fp1F3").is_err());
        assert!(ChannelId::bipolar("Fp1-F3-C3").is_err());
        assert!(ChannelId::bipolar("-F3").is_err());
        assert!(ChannelId::unipolar("Fp1-F3").is_err());
    }

    #[test]
    fn unequal_index_lists() {
        let chans = vec![ChannelId::unipolar("A").unwrap(), ChannelId::unipolar("B").unwrap()];
        assert!(matches!(
            Montage::new(chans, vec![0], vec![]),
            Err(Error::UnequalPairLists { left: 1, right: 0 })
        ));
    }

    #[test]
    fn bad_directive_reports_line() {
        match parse_montage("channel C3 unipolar\n\nelectrode C4\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    fn arb_montage() -> impl Strategy<Value = Montage> {
        (1usize..24)
            .prop_flat_map(|c| (Just(c), Just((0..c).collect::<Vec<_>>()).prop_shuffle(), 0..=c / 2))
            .prop_map(|(c, order, k)| {
                let channels = (0..c)
                    .map(|i| ChannelId::unipolar(&format!("E{i}")).unwrap())
                    .collect();
                let left = order[..k].to_vec();
                let right = order[k..2 * k].to_vec();
                Montage::new(channels, left, right).unwrap()
            })
    }

    proptest! {
        #[test]
        fn reflection_is_involution_with_fixed_points(m in arb_montage()) {
            prop_assume!(m.pair_count() > 0);
            let p = m.reflection_permutation().unwrap();
            for c in 0..m.len() {
                prop_assert_eq!(p[p[c]], c);
            }
            let fixed = (0..m.len()).filter(|&c| p[c] == c).count();
            prop_assert_eq!(fixed, m.len() - 2 * m.pair_count());
        }

        #[test]
        fn render_parse_round_trip(m in arb_montage()) {
            let back = parse_montage(&m.render()).unwrap();
            prop_assert_eq!(back, m);
        }
    }
}
