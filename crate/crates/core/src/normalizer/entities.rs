//! URL, email and mention detection.

use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntityKind {
    Url,
    Email,
    Mention,
}

/// Number of spans replaced per entity class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityCounts {
    pub url: usize,
    pub email: usize,
    pub mention: usize,
}

impl EntityCounts {
    pub fn bump(&mut self, kind: EntityKind) {
        match kind {
            EntityKind::Url => self.url += 1,
            EntityKind::Email => self.email += 1,
            EntityKind::Mention => self.mention += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.url + self.email + self.mention
    }

    pub fn add(&mut self, other: EntityCounts) {
        self.url += other.url;
        self.email += other.email;
        self.mention += other.mention;
    }
}

static URL: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"(?i)(?:https?://|www\.)\S+|\b(?:t\.co|bit\.ly|goo\.gl|ow\.ly|buff\.ly|dlvr\.it|fb\.me|youtu\.be|tinyurl\.com)/\S*",
    )
    .unwrap()
});

static EMAIL: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"[A-Za-z0-9._%+\-]+@[A-Za-z0-9\-]+(?:\.[A-Za-z0-9\-]+)*\.[A-Za-z]{2,}").unwrap()
});

/// `@` followed by 1 to 15 handle characters.
static MENTION: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"@[A-Za-z0-9_]{1,15}").unwrap());

/// Detection order doubles as the tie-break priority.
const PATTERNS: [(EntityKind, &LazyLock<Regex>); 3] = [
    (EntityKind::Url, &URL),
    (EntityKind::Email, &EMAIL),
    (EntityKind::Mention, &MENTION),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EntitySpan {
    pub start: usize,
    pub end: usize,
    pub kind: EntityKind,
}

/// Leftmost-longest, non-overlapping entity spans. When two classes start
/// at the same offset the longer match wins, ties going to URL, then email,
/// then mention, so `a@b.com` is an email and never a mention.
pub fn find_entities(text: &str) -> Vec<EntitySpan> {
    let mut out = Vec::new();
    let mut next: [Option<(usize, usize)>; 3] = [None; 3];
    let mut pos = 0;
    while pos <= text.len() {
        for (slot, (_, re)) in next.iter_mut().zip(PATTERNS.iter()) {
            let stale = match slot {
                Some((s, _)) => *s < pos,
                None => true,
            };
            if stale {
                *slot = re.find_at(text, pos).map(|m| (m.start(), m.end()));
            }
        }
        let best = next
            .iter()
            .enumerate()
            .filter_map(|(i, m)| m.map(|(s, e)| (s, e, i)))
            // smallest start, then longest, then pattern priority
            .min_by_key(|&(s, e, i)| (s, std::cmp::Reverse(e), i));
        let Some((start, end, idx)) = best else {
            break;
        };
        out.push(EntitySpan {
            start,
            end,
            kind: PATTERNS[idx].0,
        });
        pos = end;
        // cached matches that start before `end` are recomputed next round
    }
    out
}

pub fn contains_entity(text: &str) -> bool {
    PATTERNS.iter().any(|(_, re)| re.is_match(text))
}
