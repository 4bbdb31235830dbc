//! Tweet normalization.
//!
//! The pipeline runs, in order: markup stripping, entity replacement,
//! unwanted-character removal, repeat collapsing, boundary insertion and
//! space collapsing. Entity replacement has to precede boundary insertion,
//! which would otherwise split URLs apart before they could be matched.
//!
//! Every stage is also exposed as a standalone function over `&str`.

mod charset;
mod config;
mod entities;
mod markup;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use charset::{is_protected, CodeRange, RemovalClass, RemovalTable};
pub use config::{
    NormalizationConfig, CONFIG_KEYS, DEFAULT_EMAIL_PLACEHOLDER, DEFAULT_MENTION_PLACEHOLDER,
    DEFAULT_URL_PLACEHOLDER,
};
pub use entities::{contains_entity, find_entities, EntityCounts, EntityKind, EntitySpan};
pub use markup::{decode_entities, strip_markup};

use crate::script::{classify, is_arabic_mark, units, UnitClass, TATWEEL};

/// Upper bound on re-running the pipeline while its output keeps changing.
/// Later stages can expose new matches for earlier ones (collapsing
/// `htttps://` yields a URL scheme, deleting an emoji can join `@` to a
/// handle), so one pass is not always a fixed point.
const MAX_PASSES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    MarkupStrip,
    EntityReplace,
    UnwantedChars,
    RepeatCollapse,
    BoundaryInsert,
    SpaceCollapse,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::MarkupStrip => "markup_strip",
            Rule::EntityReplace => "entity_replace",
            Rule::UnwantedChars => "unwanted_chars",
            Rule::RepeatCollapse => "repeat_collapse",
            Rule::BoundaryInsert => "boundary_insert",
            Rule::SpaceCollapse => "space_collapse",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizedText {
    pub original: String,
    pub normalized: String,
    pub rules_applied: Vec<Rule>,
    pub entity_counts: EntityCounts,
}

/// Deletes characters listed in the removal table. A run of removed
/// pictographs sitting between two non-space characters turns into a single
/// space; format characters vanish without a trace.
pub fn remove_unwanted_chars(text: &str, config: &NormalizationConfig) -> String {
    clean_chars(text, Some(&config.removal), config.strip_tatweel_diacritics)
}

fn clean_chars(text: &str, table: Option<&RemovalTable>, strip_marks: bool) -> String {
    let mut out = String::with_capacity(text.len());
    let mut dropped_visible = false;
    for c in text.chars() {
        if strip_marks && (c == TATWEEL || is_arabic_mark(c)) {
            continue;
        }
        match table.and_then(|t| t.lookup(c)) {
            Some(RemovalClass::Pictograph) => dropped_visible = true,
            Some(RemovalClass::Format) => {}
            None => {
                if dropped_visible
                    && !c.is_whitespace()
                    && out.chars().next_back().is_some_and(|p| !p.is_whitespace())
                {
                    out.push(' ');
                }
                dropped_visible = false;
                out.push(c);
            }
        }
    }
    out
}

/// Truncates every run of identical units (grapheme clusters, see
/// [`crate::script::units`]) longer than `max_run` to exactly `max_run`.
pub fn collapse_repeats(text: &str, max_run: usize) -> String {
    let max_run = max_run.max(1);
    let mut out = String::with_capacity(text.len());
    let mut prev: Option<&str> = None;
    let mut run = 0usize;
    for unit in units(text) {
        if prev == Some(unit) {
            run += 1;
        } else {
            prev = Some(unit);
            run = 1;
        }
        if run <= max_run {
            out.push_str(unit);
        }
    }
    out
}

fn needs_boundary(a: UnitClass, b: UnitClass) -> bool {
    use UnitClass::*;
    if a == Space || b == Space {
        return false;
    }
    if a == Paren || b == Paren {
        return true;
    }
    let alnum = |c| matches!(c, AsciiLetter | AsciiDigit | ArabicDigit);
    if (a == ArabicLetter && alnum(b)) || (b == ArabicLetter && alnum(a)) {
        return true;
    }
    // edges of ASCII digit runs
    (a == AsciiDigit) != (b == AsciiDigit)
}

/// Inserts one space between an Arabic letter and an ASCII letter or digit,
/// around `(` and `)`, and around runs of ASCII digits. Pairs already
/// separated by whitespace are left alone.
pub fn insert_boundaries(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + text.len() / 4);
    let mut prev: Option<UnitClass> = None;
    for unit in units(text) {
        let class = classify(unit);
        if prev.is_some_and(|p| needs_boundary(p, class)) {
            out.push(' ');
        }
        out.push_str(unit);
        prev = Some(class);
    }
    out
}

/// Replaces URLs, emails and mentions with the configured placeholders.
pub fn replace_entities(text: &str, config: &NormalizationConfig) -> (String, EntityCounts) {
    let mut counts = EntityCounts::default();
    let mut out = String::with_capacity(text.len());
    let mut last = 0;
    for span in find_entities(text) {
        out.push_str(&text[last..span.start]);
        out.push_str(placeholder_for(config, span.kind));
        counts.bump(span.kind);
        last = span.end;
    }
    out.push_str(&text[last..]);
    (out, counts)
}

fn placeholder_for(config: &NormalizationConfig, kind: EntityKind) -> &str {
    match kind {
        EntityKind::Url => &config.placeholder_url,
        EntityKind::Email => &config.placeholder_email,
        EntityKind::Mention => &config.placeholder_mention,
    }
}

/// Collapses whitespace runs to one space and trims both ends.
pub fn collapse_spaces(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

enum Piece<'c> {
    Text(String),
    Placeholder(&'c str),
}

/// Splits out literal placeholder occurrences so later stages leave them
/// untouched.
fn split_placeholders<'c>(text: &str, config: &'c NormalizationConfig) -> Vec<Piece<'c>> {
    let literals = config.placeholders().map(|(_, p)| p);
    let mut pieces = Vec::new();
    let mut rest = text;
    loop {
        let hit = literals
            .iter()
            .filter_map(|p| rest.find(p).map(|at| (at, *p)))
            .min_by_key(|&(at, p)| (at, std::cmp::Reverse(p.len())));
        let Some((at, lit)) = hit else {
            break;
        };
        if at > 0 {
            pieces.push(Piece::Text(rest[..at].to_string()));
        }
        pieces.push(Piece::Placeholder(lit));
        rest = &rest[at + lit.len()..];
    }
    if !rest.is_empty() {
        pieces.push(Piece::Text(rest.to_string()));
    }
    pieces
}

fn map_text(pieces: &mut [Piece<'_>], f: impl Fn(&str) -> String) {
    for piece in pieces {
        if let Piece::Text(t) = piece {
            *t = f(t);
        }
    }
}

fn run_pass(text: &str, config: &NormalizationConfig, counts: &mut EntityCounts) -> String {
    let mut pieces = split_placeholders(text, config);
    if config.markup_strip {
        map_text(&mut pieces, strip_markup);
    }
    if config.entity_replace {
        let mut split = Vec::with_capacity(pieces.len());
        for piece in pieces {
            let Piece::Text(t) = piece else {
                split.push(piece);
                continue;
            };
            let mut last = 0;
            for span in find_entities(&t) {
                if span.start > last {
                    split.push(Piece::Text(t[last..span.start].to_string()));
                }
                split.push(Piece::Placeholder(placeholder_for(config, span.kind)));
                counts.bump(span.kind);
                last = span.end;
            }
            if last < t.len() {
                split.push(Piece::Text(t[last..].to_string()));
            }
        }
        pieces = split;
    }
    if config.unwanted_chars || config.strip_tatweel_diacritics {
        let table = config.unwanted_chars.then_some(&config.removal);
        map_text(&mut pieces, |t| {
            clean_chars(t, table, config.strip_tatweel_diacritics)
        });
    }
    if config.repeat_collapse {
        map_text(&mut pieces, |t| collapse_repeats(t, config.max_repeat_run));
    }
    if config.boundary_insert {
        map_text(&mut pieces, insert_boundaries);
    }

    let mut out = String::with_capacity(text.len());
    let mut after_placeholder = false;
    for piece in &pieces {
        match piece {
            Piece::Placeholder(p) => {
                if out.chars().next_back().is_some_and(|c| !c.is_whitespace()) {
                    out.push(' ');
                }
                out.push_str(p);
                after_placeholder = true;
            }
            Piece::Text(t) => {
                if after_placeholder && t.chars().next().is_some_and(|c| !c.is_whitespace()) {
                    out.push(' ');
                }
                out.push_str(t);
                after_placeholder = false;
            }
        }
    }
    if config.space_collapse {
        out = collapse_spaces(&out);
    }
    out
}

pub fn enabled_rules(config: &NormalizationConfig) -> Vec<Rule> {
    [
        (config.markup_strip, Rule::MarkupStrip),
        (config.entity_replace, Rule::EntityReplace),
        (
            config.unwanted_chars || config.strip_tatweel_diacritics,
            Rule::UnwantedChars,
        ),
        (config.repeat_collapse, Rule::RepeatCollapse),
        (config.boundary_insert, Rule::BoundaryInsert),
        (config.space_collapse, Rule::SpaceCollapse),
    ]
    .into_iter()
    .filter_map(|(on, rule)| on.then_some(rule))
    .collect()
}

/// Runs the full pipeline until its output is stable.
pub fn normalize(text: &str, config: &NormalizationConfig) -> NormalizedText {
    let mut counts = EntityCounts::default();
    let mut current = run_pass(text, config, &mut counts);
    for _ in 1..MAX_PASSES {
        let next = run_pass(&current, config, &mut counts);
        if next == current {
            break;
        }
        current = next;
    }
    NormalizedText {
        original: text.to_string(),
        normalized: current,
        rules_applied: enabled_rules(config),
        entity_counts: counts,
    }
}

/// Normalizes many texts in parallel; output order follows input order.
pub fn normalize_batch<S: AsRef<str> + Sync>(
    texts: &[S],
    config: &NormalizationConfig,
) -> Vec<NormalizedText> {
    texts
        .par_iter()
        .map(|t| normalize(t.as_ref(), config))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> NormalizationConfig {
        NormalizationConfig::default()
    }

    #[test]
    fn unwanted_chars_examples() {
        assert_eq!(remove_unwanted_chars("جميل 😂😂", &cfg()), "جميل ");
        assert_eq!(remove_unwanted_chars("hello", &cfg()), "hello");
        assert_eq!(remove_unwanted_chars("😂🔥👍🏽", &cfg()), "");
        assert_eq!(remove_unwanted_chars("حلو😍مره", &cfg()), "حلو مره");
        assert_eq!(remove_unwanted_chars("ك\u{200F}لمة", &cfg()), "كلمة");
        assert_eq!(remove_unwanted_chars("a\tb\nc", &cfg()), "a\tb\nc");
    }

    #[test]
    fn tatweel_and_diacritics_kept_unless_asked() {
        assert_eq!(
            remove_unwanted_chars("جـــميل كِتَاب", &cfg()),
            "جـــميل كِتَاب"
        );
        let mut strip = cfg();
        strip.strip_tatweel_diacritics = true;
        assert_eq!(remove_unwanted_chars("جـــميل كِتَاب", &strip), "جميل كتاب");
    }

    #[test]
    fn collapse_repeats_examples() {
        assert_eq!(collapse_repeats("ههههههه", 2), "هه");
        assert_eq!(collapse_repeats("جميل", 2), "جميل");
        assert_eq!(collapse_repeats("cooool!!!!", 2), "cool!!");
        assert_eq!(collapse_repeats("aaaa", 1), "a");
        // letter + diacritic is one unit
        assert_eq!(collapse_repeats("بَبَبَبَ", 2), "بَبَ");
        assert_eq!(collapse_repeats("", 2), "");
    }

    #[test]
    fn insert_boundaries_examples() {
        assert_eq!(insert_boundaries("عام2021"), "عام 2021");
        assert_eq!(insert_boundaries("(نص)"), "( نص )");
        assert_eq!(insert_boundaries("كلمة كلمة"), "كلمة كلمة");
        assert_eq!(insert_boundaries("2021عام"), "2021 عام");
        assert_eq!(insert_boundaries("abc123def"), "abc 123 def");
        assert_eq!(insert_boundaries("مرحباhello"), "مرحبا hello");
        assert_eq!(insert_boundaries("عام٢٠٢١"), "عام ٢٠٢١");
        assert_eq!(insert_boundaries("[ رابط ]"), "[ رابط ]");
        assert_eq!(insert_boundaries("a ( b"), "a ( b");
    }

    #[test]
    fn replace_entities_examples() {
        let (out, counts) = replace_entities("شاهد http://t.co/abc", &cfg());
        assert_eq!(out, "شاهد [ رابط ]");
        assert_eq!(
            counts,
            EntityCounts {
                url: 1,
                ..Default::default()
            }
        );

        let (out, counts) = replace_entities("@user1 مرحبا", &cfg());
        assert_eq!(out, "[ مستخدم ] مرحبا");
        assert_eq!(counts.mention, 1);

        let (out, counts) = replace_entities("لا روابط هنا", &cfg());
        assert_eq!(out, "لا روابط هنا");
        assert_eq!(counts.total(), 0);

        let (out, counts) = replace_entities("راسلني a@b.com", &cfg());
        assert_eq!(out, "راسلني [ بريد ]");
        assert_eq!((counts.email, counts.mention), (1, 0));
    }

    #[test]
    fn collapse_spaces_examples() {
        assert_eq!(collapse_spaces("  ا  ب "), "ا ب");
        assert_eq!(collapse_spaces("اب"), "اب");
        assert_eq!(collapse_spaces("ا\t\nب"), "ا ب");
    }

    #[test]
    fn full_pipeline() {
        let out = normalize("جمييييييل 😂 @user http://x.co", &cfg());
        assert_eq!(out.normalized, "جمييل [ مستخدم ] [ رابط ]");
        assert_eq!(out.entity_counts.url, 1);
        assert_eq!(out.entity_counts.mention, 1);
        assert_eq!(out.rules_applied.len(), 6);
        assert_eq!(out.rules_applied[0], Rule::MarkupStrip);
        assert_eq!(out.rules_applied[5], Rule::SpaceCollapse);
    }

    #[test]
    fn empty_input() {
        let out = normalize("", &cfg());
        assert_eq!(out.normalized, "");
        assert_eq!(out.entity_counts.total(), 0);
    }

    #[test]
    fn placeholders_are_padded() {
        assert_eq!(normalize("اهلا@user", &cfg()).normalized, "اهلا [ مستخدم ]");
        assert_eq!(
            normalize("http://a.b/c,وكمان", &cfg()).normalized,
            "[ رابط ]"
        );
    }

    #[test]
    fn entities_revealed_by_later_stages_are_caught() {
        // collapsing the elongated scheme produces a real URL
        assert_eq!(normalize("htttps://x.com", &cfg()).normalized, "[ رابط ]");
        // deleting a format character joins `@` and the handle
        let out = normalize("@\u{200F}user", &cfg());
        assert_eq!(out.normalized, "[ مستخدم ]");
        assert_eq!(out.entity_counts.mention, 1);
    }

    #[test]
    fn custom_placeholders_survive_markup_stripping() {
        let mut c = cfg();
        c.placeholder_url = "<URL>".into();
        let once = normalize("see http://x.y/z", &c).normalized;
        assert_eq!(once, "see <URL>");
        assert_eq!(normalize(&once, &c).normalized, once);
    }

    #[test]
    fn disabled_stages_are_skipped() {
        let mut c = cfg();
        c.repeat_collapse = false;
        c.entity_replace = false;
        let out = normalize("ههههه @user", &c);
        assert_eq!(out.normalized, "ههههه @user");
        assert!(!out.rules_applied.contains(&Rule::RepeatCollapse));
    }

    #[test]
    fn batch_preserves_order() {
        let texts = ["ا", "ب😂", "ججججج"];
        let out = normalize_batch(&texts, &cfg());
        let got: Vec<_> = out.iter().map(|n| n.normalized.as_str()).collect();
        assert_eq!(got, vec!["ا", "ب", "جج"]);
    }
}
