//! The unwanted-character table.

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::script::{is_arabic_digit, is_arabic_letter, is_protected_punctuation};
use crate::{Error, Result};

const DEFAULT_TABLE: &str = include_str!("../../data/unwanted_chars.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RemovalClass {
    Pictograph,
    Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeRange {
    pub start: u32,
    pub end: u32,
    pub class: RemovalClass,
}

impl CodeRange {
    fn range(&self) -> RangeInclusive<u32> {
        self.start..=self.end
    }
}

/// Sorted list of code point ranges scheduled for removal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemovalTable {
    ranges: Vec<CodeRange>,
}

impl Default for RemovalTable {
    fn default() -> Self {
        Self::parse(DEFAULT_TABLE).expect("bundled unwanted-character table is valid")
    }
}

/// Characters that must survive every cleaning stage.
pub fn is_protected(c: char) -> bool {
    c.is_whitespace()
        || c.is_ascii_alphanumeric()
        || is_arabic_letter(c)
        || is_arabic_digit(c)
        || is_protected_punctuation(c)
}

impl RemovalTable {
    pub fn parse(text: &str) -> Result<Self> {
        let mut ranges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let span = fields.next().unwrap_or_default();
            let class = match fields.next() {
                Some("pictograph") | None => RemovalClass::Pictograph,
                Some("format") => RemovalClass::Format,
                Some(other) => {
                    return Err(Error::Config(format!(
                        "removal table line {}: unknown class `{other}`",
                        idx + 1
                    )))
                }
            };
            ranges.push(
                parse_span(span, class).map_err(|msg| {
                    Error::Config(format!("removal table line {}: {msg}", idx + 1))
                })?,
            );
        }
        Ok(Self::from_ranges(ranges))
    }

    /// Parses a comma-separated inline list such as `1F900-1F9FF,2728`.
    /// Inline entries are pictographs.
    pub fn parse_inline(list: &str) -> Result<Vec<CodeRange>> {
        list.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| parse_span(s, RemovalClass::Pictograph).map_err(Error::Config))
            .collect()
    }

    pub fn from_ranges(mut ranges: Vec<CodeRange>) -> Self {
        ranges.sort_by_key(|r| (r.start, r.end));
        Self { ranges }
    }

    pub fn extend(&mut self, extra: impl IntoIterator<Item = CodeRange>) {
        self.ranges.extend(extra);
        self.ranges.sort_by_key(|r| (r.start, r.end));
    }

    pub fn ranges(&self) -> &[CodeRange] {
        &self.ranges
    }

    /// Removal class of `c`, or `None` if it is kept. Protected characters
    /// are always kept.
    pub fn lookup(&self, c: char) -> Option<RemovalClass> {
        if is_protected(c) {
            return None;
        }
        let cp = c as u32;
        let idx = self.ranges.partition_point(|r| r.start <= cp);
        // overlapping entries are allowed, so scan back over candidates
        self.ranges[..idx]
            .iter()
            .rev()
            .find(|r| r.range().contains(&cp))
            .map(|r| r.class)
    }
}

fn parse_span(span: &str, class: RemovalClass) -> std::result::Result<CodeRange, String> {
    let parse_cp = |s: &str| {
        u32::from_str_radix(s, 16)
            .ok()
            .filter(|&cp| cp <= 0x10FFFF)
            .ok_or_else(|| format!("bad code point `{s}`"))
    };
    let (start, end) = match span.split_once('-') {
        Some((a, b)) => (parse_cp(a)?, parse_cp(b)?),
        None => {
            let cp = parse_cp(span)?;
            (cp, cp)
        }
    };
    if start > end {
        return Err(format!("empty range `{span}`"));
    }
    Ok(CodeRange { start, end, class })
}
