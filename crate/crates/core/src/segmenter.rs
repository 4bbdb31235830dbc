//! Light clitic segmentation producing `+`-marked tokens.
//!
//! Tokens are split greedily: the longest proclitic sequence (at most two
//! clitics) and the longest enclitic whose remaining stem is a lexicon entry
//! win. If no split reaches the lexicon, only a fallback proclitic (the
//! article by default) may be removed. Everything else is left whole.
//!
//! Rendering follows the common convention `و+ ال+ كتاب +ها`: proclitics
//! carry a trailing `+`, enclitics a leading one, all space separated.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::normalizer::{
    DEFAULT_EMAIL_PLACEHOLDER, DEFAULT_MENTION_PLACEHOLDER, DEFAULT_URL_PLACEHOLDER,
};
use crate::script::{is_arabic_mark, is_arabic_word};
use crate::{Error, Result};

const BUILTIN_LEXICON: &str = include_str!("../data/lexicon.txt");

pub const MAX_PROCLITICS: usize = 2;

#[derive(Debug, Clone)]
pub struct Lexicon {
    stems: HashSet<String>,
    source: String,
}

impl Lexicon {
    pub fn load(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        let mut stems = HashSet::new();
        for (idx, raw) in bytes.split(|&b| b == b'\n').enumerate() {
            let line = std::str::from_utf8(raw).map_err(|_| Error::Utf8 {
                path: path.to_path_buf(),
                line: idx + 1,
            })?;
            if let Some(stem) = parse_line(line, idx == 0) {
                stems.insert(stem.to_string());
            }
        }
        if stems.is_empty() {
            return Err(Error::EmptyLexicon(path.to_path_buf()));
        }
        Ok(Self {
            stems,
            source: path.display().to_string(),
        })
    }

    /// The bundled starter lexicon.
    pub fn builtin() -> Self {
        let stems = BUILTIN_LEXICON
            .lines()
            .enumerate()
            .filter_map(|(i, l)| parse_line(l, i == 0))
            .map(str::to_string)
            .collect();
        Self {
            stems,
            source: "builtin".into(),
        }
    }

    pub fn from_stems<I, S>(stems: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let stems: HashSet<String> = stems.into_iter().map(Into::into).collect();
        if stems.is_empty() {
            return Err(Error::EmptyLexicon(PathBuf::from("<memory>")));
        }
        Ok(Self {
            stems,
            source: "memory".into(),
        })
    }

    pub fn contains(&self, stem: &str) -> bool {
        self.stems.contains(stem)
    }

    pub fn len(&self) -> usize {
        self.stems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stems.is_empty()
    }

    pub fn source(&self) -> &str {
        &self.source
    }
}

fn parse_line(line: &str, first: bool) -> Option<&str> {
    let line = if first {
        line.trim_start_matches('\u{FEFF}')
    } else {
        line
    };
    let line = line.trim();
    (!line.is_empty() && !line.starts_with('#')).then_some(line)
}

/// Clitic inventories. Compound proclitics such as `وال` are allowed and are
/// rendered as their parts (`و+ ال+`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliticRules {
    proclitics: Vec<String>,
    enclitics: Vec<String>,
    min_stem_len: usize,
    fallback_proclitics: Vec<String>,
}

impl Default for CliticRules {
    fn default() -> Self {
        let v = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect();
        Self {
            proclitics: v(&[
                "وال", "فال", "بال", "كال", "لل", "ال", "و", "ف", "ب", "ك", "ل",
            ]),
            enclitics: v(&[
                "كما", "هما", "هم", "هن", "ها", "كم", "كن", "نا", "ني", "ه", "ك", "ي",
            ]),
            min_stem_len: 2,
            fallback_proclitics: v(&["ال"]),
        }
    }
}

impl CliticRules {
    pub fn new(
        proclitics: Vec<String>,
        enclitics: Vec<String>,
        min_stem_len: usize,
    ) -> Result<Self> {
        // keep the article fallback only when the article is in the list
        let fallback_proclitics = proclitics.iter().filter(|p| *p == "ال").cloned().collect();
        let rules = Self {
            proclitics,
            enclitics,
            min_stem_len,
            fallback_proclitics,
        };
        rules.validate()?;
        Ok(rules)
    }

    /// Proclitics that may be removed from words missing from the lexicon.
    pub fn with_fallback_proclitics(mut self, fallback: Vec<String>) -> Result<Self> {
        self.fallback_proclitics = fallback;
        self.validate()?;
        Ok(self)
    }

    pub fn proclitics(&self) -> &[String] {
        &self.proclitics
    }

    pub fn enclitics(&self) -> &[String] {
        &self.enclitics
    }

    pub fn min_stem_len(&self) -> usize {
        self.min_stem_len
    }

    pub fn fallback_proclitics(&self) -> &[String] {
        &self.fallback_proclitics
    }

    pub fn validate(&self) -> Result<()> {
        if self.min_stem_len == 0 {
            return Err(Error::Config("min_stem_len must be at least 1".into()));
        }
        for (name, list) in [
            ("proclitics", &self.proclitics),
            ("enclitics", &self.enclitics),
        ] {
            if list.is_empty() {
                return Err(Error::Config(format!("{name} list is empty")));
            }
            if let Some(bad) = list.iter().find(|c| !is_arabic_word(c)) {
                return Err(Error::Config(format!(
                    "{name}: `{bad}` is not an Arabic string"
                )));
            }
        }
        // a shorter entry listed before a longer one it begins (ends) would
        // shadow it under first-match scanning
        for (i, early) in self.proclitics.iter().enumerate() {
            if let Some(late) = self.proclitics[i + 1..]
                .iter()
                .find(|late| late.len() > early.len() && late.starts_with(early.as_str()))
            {
                return Err(Error::Config(format!(
                    "proclitic `{early}` is listed before the longer `{late}`"
                )));
            }
        }
        for (i, early) in self.enclitics.iter().enumerate() {
            if let Some(late) = self.enclitics[i + 1..]
                .iter()
                .find(|late| late.len() > early.len() && late.ends_with(early.as_str()))
            {
                return Err(Error::Config(format!(
                    "enclitic `{early}` is listed before the longer `{late}`"
                )));
            }
        }
        if let Some(bad) = self
            .fallback_proclitics
            .iter()
            .find(|f| !self.proclitics.contains(f))
        {
            return Err(Error::Config(format!(
                "fallback proclitic `{bad}` is not in the proclitic list"
            )));
        }
        Ok(())
    }

    /// Splits a proclitic entry into its atomic parts.
    fn atoms(&self, entry: &str) -> Vec<String> {
        for (k, _) in entry.char_indices().skip(1) {
            let (head, tail) = entry.split_at(k);
            let known = |s: &str| self.proclitics.iter().any(|p| p == s);
            if known(head) && known(tail) {
                let mut out = self.atoms(head);
                out.extend(self.atoms(tail));
                return out;
            }
        }
        vec![entry.to_string()]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentedToken {
    pub proclitics: Vec<String>,
    pub stem: String,
    pub enclitics: Vec<String>,
    pub surface: String,
}

impl SegmentedToken {
    fn whole(token: &str) -> Self {
        Self {
            proclitics: Vec::new(),
            stem: token.to_string(),
            enclitics: Vec::new(),
            surface: token.to_string(),
        }
    }

    pub fn is_split(&self) -> bool {
        !self.proclitics.is_empty() || !self.enclitics.is_empty()
    }

    pub fn render(&self) -> String {
        let mut parts: Vec<String> = self.proclitics.iter().map(|p| format!("{p}+")).collect();
        parts.push(self.stem.clone());
        parts.extend(self.enclitics.iter().map(|e| format!("+{e}")));
        parts.join(" ")
    }
}

struct Prefix {
    text: String,
    atoms: Vec<String>,
}

/// Segmenter bound to a rule set and lexicon.
pub struct Segmenter<'a> {
    rules: &'a CliticRules,
    lexicon: &'a Lexicon,
    prefixes: Vec<Prefix>,
    protected: Vec<Vec<String>>,
}

impl<'a> Segmenter<'a> {
    pub fn new(rules: &'a CliticRules, lexicon: &'a Lexicon) -> Self {
        let singles: Vec<Prefix> = rules
            .proclitics
            .iter()
            .map(|p| Prefix {
                text: p.clone(),
                atoms: rules.atoms(p),
            })
            .filter(|p| p.atoms.len() <= MAX_PROCLITICS)
            .collect();
        let mut prefixes: Vec<Prefix> = Vec::new();
        let mut push = |p: Prefix| {
            if !prefixes.iter().any(|q| q.atoms == p.atoms) {
                prefixes.push(p);
            }
        };
        for first in &singles {
            push(Prefix {
                text: first.text.clone(),
                atoms: first.atoms.clone(),
            });
            for second in &singles {
                if first.atoms.len() + second.atoms.len() <= MAX_PROCLITICS {
                    let mut atoms = first.atoms.clone();
                    atoms.extend(second.atoms.iter().cloned());
                    push(Prefix {
                        text: format!("{}{}", first.text, second.text),
                        atoms,
                    });
                }
            }
        }
        let protected = [
            DEFAULT_URL_PLACEHOLDER,
            DEFAULT_EMAIL_PLACEHOLDER,
            DEFAULT_MENTION_PLACEHOLDER,
        ]
        .iter()
        .map(|p| p.split_whitespace().map(str::to_string).collect())
        .collect();
        Self {
            rules,
            lexicon,
            prefixes,
            protected,
        }
    }

    /// Replaces the phrases passed through verbatim by [`Self::segment_text`].
    pub fn with_protected<S: AsRef<str>>(mut self, phrases: &[S]) -> Self {
        self.protected = phrases
            .iter()
            .map(|p| p.as_ref().split_whitespace().map(str::to_string).collect())
            .filter(|p: &Vec<String>| !p.is_empty())
            .collect();
        self
    }

    fn stem_ok(&self, stem: &str) -> bool {
        stem.chars().count() >= self.rules.min_stem_len && !stem.starts_with(is_arabic_mark)
    }

    pub fn segment_token(&self, token: &str) -> SegmentedToken {
        if !is_arabic_word(token) || self.lexicon.contains(token) {
            return SegmentedToken::whole(token);
        }

        let none = Prefix {
            text: String::new(),
            atoms: Vec::new(),
        };
        let mut best: Option<(usize, usize, &Prefix, Option<&String>)> = None;
        for prefix in std::iter::once(&none).chain(&self.prefixes) {
            let Some(rest) = token.strip_prefix(prefix.text.as_str()) else {
                continue;
            };
            let suffixes = std::iter::once(None).chain(self.rules.enclitics.iter().map(Some));
            for suffix in suffixes {
                let stem = match suffix {
                    Some(s) => match rest.strip_suffix(s.as_str()) {
                        Some(stem) => stem,
                        None => continue,
                    },
                    None => rest,
                };
                if !self.stem_ok(stem) || !self.lexicon.contains(stem) {
                    continue;
                }
                let key = (prefix.text.len(), suffix.map_or(0, String::len));
                if best.is_none_or(|(p, s, _, _)| key > (p, s)) {
                    best = Some((key.0, key.1, prefix, suffix));
                }
            }
        }

        if let Some((_, _, prefix, suffix)) = best {
            let mut stem = &token[prefix.text.len()..];
            if let Some(s) = suffix {
                stem = &stem[..stem.len() - s.len()];
            }
            return SegmentedToken {
                proclitics: prefix.atoms.clone(),
                stem: stem.to_string(),
                enclitics: suffix.into_iter().cloned().collect(),
                surface: token.to_string(),
            };
        }

        for f in &self.rules.fallback_proclitics {
            if let Some(stem) = token.strip_prefix(f.as_str()) {
                if self.stem_ok(stem) && is_arabic_word(stem) {
                    return SegmentedToken {
                        proclitics: vec![f.clone()],
                        stem: stem.to_string(),
                        enclitics: Vec::new(),
                        surface: token.to_string(),
                    };
                }
            }
        }
        SegmentedToken::whole(token)
    }

    pub fn segment_text(&self, text: &str) -> String {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let mut out: Vec<String> = Vec::with_capacity(tokens.len());
        let mut i = 0;
        'outer: while i < tokens.len() {
            for phrase in &self.protected {
                let n = phrase.len();
                if i + n <= tokens.len()
                    && tokens[i..i + n].iter().zip(phrase).all(|(a, b)| *a == b)
                {
                    out.extend(tokens[i..i + n].iter().map(|t| t.to_string()));
                    i += n;
                    continue 'outer;
                }
            }
            out.push(self.segment_token(tokens[i]).render());
            i += 1;
        }
        out.join(" ")
    }
}

pub fn segment_token(token: &str, rules: &CliticRules, lexicon: &Lexicon) -> SegmentedToken {
    Segmenter::new(rules, lexicon).segment_token(token)
}

pub fn segment_text(text: &str, rules: &CliticRules, lexicon: &Lexicon) -> String {
    Segmenter::new(rules, lexicon).segment_text(text)
}

fn proclitic_marker(token: &str) -> Option<&str> {
    token.strip_suffix('+').filter(|body| is_arabic_word(body))
}

fn enclitic_marker(token: &str) -> Option<&str> {
    token.strip_prefix('+').filter(|body| is_arabic_word(body))
}

/// Removes `+` markers and glues clitics back onto their stems.
///
/// Marker tokens are an Arabic clitic followed (proclitic) or preceded
/// (enclitic) by `+`. Other tokens containing `+` pass through, except a bare
/// `+`, which is always an error.
pub fn desegment(text: &str) -> Result<String> {
    let mut out: Vec<String> = Vec::new();
    let mut pending = String::new();
    for (idx, token) in text.split_whitespace().enumerate() {
        if token == "+" {
            return Err(Error::Segmentation(format!(
                "dangling `+` at token {}",
                idx + 1
            )));
        }
        if let Some(body) = proclitic_marker(token) {
            pending.push_str(body);
            continue;
        }
        if let Some(body) = enclitic_marker(token) {
            if !pending.is_empty() {
                return Err(Error::Segmentation(format!(
                    "enclitic `{token}` follows a proclitic with no stem"
                )));
            }
            match out.last_mut() {
                Some(last) => last.push_str(body),
                None => {
                    return Err(Error::Segmentation(format!(
                        "enclitic `{token}` has no preceding stem"
                    )))
                }
            }
            continue;
        }
        let mut word = std::mem::take(&mut pending);
        word.push_str(token);
        out.push(word);
    }
    if !pending.is_empty() {
        return Err(Error::Segmentation(format!(
            "proclitic `{pending}+` has no following stem"
        )));
    }
    Ok(out.join(" "))
}
