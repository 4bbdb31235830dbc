mod common;

use arsarc::normalizer::{normalize, NormalizationConfig};
use arsarc::segmenter::{
    desegment, segment_text, segment_token, CliticRules, Lexicon, Segmenter, MAX_PROCLITICS,
};
use rand::prelude::*;
use serde::Deserialize;

const PROCLITICS: &[&str] = &[
    "", "", "", "و", "ف", "ب", "ل", "ك", "ال", "وال", "بال", "فال", "لل", "وب", "ول",
];
const ENCLITICS: &[&str] = &[
    "", "", "", "ه", "ها", "هم", "هن", "ك", "كم", "كما", "نا", "ي", "ني",
];
const STEMS: &[&str] = &[
    "كتاب",
    "بيت",
    "قلم",
    "مدرسة",
    "سيارة",
    "يوم",
    "ناس",
    "حب",
    "عمل",
    "وقت",
    "لعب",
    "كلام",
];
const LETTERS: &[char] = &[
    'ا', 'ب', 'ت', 'ث', 'ج', 'ح', 'خ', 'د', 'ر', 'س', 'ع', 'ف', 'ق', 'ك', 'ل', 'م', 'ن', 'ه', 'و',
    'ي', 'ة', 'ى', 'ء', 'أ', 'إ', 'ـ', 'َ', 'ّ',
];
const OTHER: &[&str] = &[
    "hello",
    "2021",
    "٣٤",
    "!!",
    "؟",
    "(",
    ")",
    "[ رابط ]",
    "[ مستخدم ]",
    "x1",
    "C#",
    "😂",
];

fn random_token(rng: &mut impl Rng) -> String {
    if rng.random_bool(0.1) {
        return OTHER.choose(rng).unwrap().to_string();
    }
    let stem = if rng.random_bool(0.5) {
        STEMS.choose(rng).unwrap().to_string()
    } else {
        (0..rng.random_range(1..7))
            .map(|_| *LETTERS.choose(rng).unwrap())
            .collect()
    };
    format!(
        "{}{}{}",
        PROCLITICS.choose(rng).unwrap(),
        stem,
        ENCLITICS.choose(rng).unwrap()
    )
}

fn random_sequence(rng: &mut impl Rng) -> String {
    let n = rng.random_range(0..12);
    (0..n)
        .map(|_| random_token(rng))
        .collect::<Vec<_>>()
        .join(" ")
}

#[test]
fn round_trip_on_random_sequences() {
    let rules = CliticRules::default();
    let lexicon = Lexicon::builtin();
    let seg = Segmenter::new(&rules, &lexicon);
    let mut rng = common::rng(3);
    let mut split = 0;
    for _ in 0..10_000 {
        let text = random_sequence(&mut rng);
        let segmented = seg.segment_text(&text);
        split += usize::from(segmented.contains('+'));
        assert_eq!(desegment(&segmented).unwrap(), text, "via {segmented:?}");
    }
    // the generator must actually exercise splitting
    assert!(split > 5_000, "only {split} sequences were split");
}

#[test]
fn tokens_reassemble_and_respect_limits() {
    let rules = CliticRules::default();
    let lexicon = Lexicon::builtin();
    let seg = Segmenter::new(&rules, &lexicon);
    let mut rng = common::rng(4);
    for _ in 0..10_000 {
        let token = random_token(&mut rng);
        let t = seg.segment_token(&token);
        let joined: String = t
            .proclitics
            .iter()
            .chain([&t.stem])
            .chain(&t.enclitics)
            .cloned()
            .collect();
        assert_eq!(joined, token);
        assert_eq!(t.surface, token);
        assert!(t.proclitics.len() <= MAX_PROCLITICS, "{token}: {t:?}");
        assert!(t.enclitics.len() <= 1, "{token}: {t:?}");
        assert!(!t.stem.is_empty());
    }
}

#[derive(Deserialize)]
struct Golden {
    input: String,
    expected: String,
}

#[test]
fn round_trip_on_golden_corpus() {
    let rules = CliticRules::default();
    let lexicon = Lexicon::builtin();
    let cfg = NormalizationConfig::default();
    for line in include_str!("fixtures/normalizer_golden.jsonl").lines() {
        let g: Golden = serde_json::from_str(line).unwrap();
        for text in [g.expected, normalize(&g.input, &cfg).normalized] {
            let s = segment_text(&text, &rules, &lexicon);
            assert_eq!(desegment(&s).unwrap(), text);
        }
    }
}

fn lexicon(stems: &[&str]) -> Lexicon {
    Lexicon::from_stems(stems.iter().copied()).unwrap()
}

#[test]
fn article_is_split_from_known_stem() {
    let rules = CliticRules::default();
    let lex = lexicon(&["كتاب"]);
    let t = segment_token("الكتاب", &rules, &lex);
    assert_eq!(t.proclitics, ["ال"]);
    assert_eq!(t.stem, "كتاب");
    assert!(t.enclitics.is_empty());
    assert_eq!(t.render(), "ال+ كتاب");

    let t = segment_token("كتاب", &rules, &lex);
    assert!(!t.is_split());
    assert_eq!(t.render(), "كتاب");
}

#[test]
fn longer_proclitic_dominates() {
    // both و + الكتاب and وال + كتاب reach the lexicon
    let rules = CliticRules::default();
    let lex = lexicon(&["كتاب", "الكتاب"]);
    let t = segment_token("والكتاب", &rules, &lex);
    assert_eq!(t.proclitics, ["و", "ال"]);
    assert_eq!(t.stem, "كتاب");
    assert_eq!(t.render(), "و+ ال+ كتاب");
}

#[test]
fn longer_enclitic_dominates() {
    let s = |xs: &[&str]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let rules = CliticRules::new(s(&["و", "ال"]), s(&["هم", "م"]), 2).unwrap();
    let lex = lexicon(&["كتاب", "كتابه"]);
    let t = segment_token("كتابهم", &rules, &lex);
    assert_eq!(t.stem, "كتاب");
    assert_eq!(t.enclitics, ["هم"]);
}

#[test]
fn proclitic_length_outranks_enclitic() {
    // وال + كتاب + ه beats و + الكتابه
    let rules = CliticRules::default();
    let lex = lexicon(&["كتاب", "الكتابه"]);
    let t = segment_token("والكتابه", &rules, &lex);
    assert_eq!(t.render(), "و+ ال+ كتاب +ه");
}

#[test]
fn full_clitic_stack() {
    let rules = CliticRules::default();
    let lex = lexicon(&["كتاب"]);
    assert_eq!(
        segment_token("وبكتابها", &rules, &lex).render(),
        "و+ ب+ كتاب +ها"
    );
    assert_eq!(
        segment_token("فالكتاب", &rules, &lex).render(),
        "ف+ ال+ كتاب"
    );
    // three proclitics are never stripped
    assert!(!segment_token("وبالكتاب", &rules, &lex).is_split());
}

#[test]
fn lexicon_miss_only_strips_the_article() {
    let rules = CliticRules::default();
    let lex = lexicon(&["كتاب"]);
    assert_eq!(segment_token("الزبرجد", &rules, &lex).render(), "ال+ زبرجد");
    assert!(!segment_token("وزبرجد", &rules, &lex).is_split());
    assert!(!segment_token("زبرجدها", &rules, &lex).is_split());
    // the stem would be shorter than min_stem_len
    assert!(!segment_token("الب", &rules, &lex).is_split());
}

#[test]
fn placeholders_and_foreign_tokens_pass_through() {
    let rules = CliticRules::default();
    let lex = lexicon(&["كتاب"]);
    assert_eq!(
        segment_text("[ رابط ] والكتاب hello 2021 [ مستخدم ]", &rules, &lex),
        "[ رابط ] و+ ال+ كتاب hello 2021 [ مستخدم ]"
    );
    assert_eq!(
        segment_text("no arabic here", &rules, &lex),
        "no arabic here"
    );
}

#[test]
fn custom_placeholders_are_protected() {
    let rules = CliticRules::default();
    let lex = lexicon(&["رابط"]);
    let seg = Segmenter::new(&rules, &lex).with_protected(&["<< والرابط >>"]);
    assert_eq!(
        seg.segment_text("<< والرابط >> والرابط"),
        "<< والرابط >> و+ ال+ رابط"
    );
}

#[test]
fn lexicon_file_loading() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("lex.txt");
    std::fs::write(&p, "\u{feff}# stems\nكتاب\n\n  قلم  \n").unwrap();
    let lex = Lexicon::load(&p).unwrap();
    assert_eq!(lex.len(), 2);
    assert!(lex.contains("قلم"));

    std::fs::write(&p, "# nothing\n").unwrap();
    assert!(Lexicon::load(&p).is_err());
    let missing = dir.path().join("absent.txt");
    assert!(Lexicon::load(&missing).is_err());
    std::fs::write(&p, b"ok\n\xff\xfe\n").unwrap();
    let msg = Lexicon::load(&p).unwrap_err().to_string();
    assert!(msg.contains(":2:"), "{msg}");
}

#[test]
fn lexicon_words_stay_whole() {
    let rules = CliticRules::default();
    let lexicon = Lexicon::builtin();
    assert_eq!(segment_token("الله", &rules, &lexicon).render(), "الله");
    assert_eq!(segment_token("والله", &rules, &lexicon).render(), "و+ الله");
}
