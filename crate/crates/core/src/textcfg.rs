//! Line-oriented `keyword arg...` text shared by the montage and scenario
//! config formats: `#` starts a comment, blank lines are ignored.

use crate::error::{Error, Result};

/// One significant line, split on whitespace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Line<'a> {
    pub number: usize,
    pub key: &'a str,
    pub args: Vec<&'a str>,
}

impl Line<'_> {
    pub fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: self.number,
            msg: msg.into(),
        }
    }

    pub fn expect_args(&self, n: usize) -> Result<()> {
        if self.args.len() == n {
            Ok(())
        } else {
            Err(self.err(format!(
                "`{}` expects {} argument(s), got {}",
                self.key,
                n,
                self.args.len()
            )))
        }
    }
}

pub(crate) fn lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let content = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let mut words = content.split_whitespace();
        let key = words.next()?;
        Some(Line {
            number: i + 1,
            key,
            args: words.collect(),
        })
    })
}
