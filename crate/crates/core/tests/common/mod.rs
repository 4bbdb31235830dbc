//! Fixture generators shared by the integration tests.
#![allow(dead_code)]

use std::path::Path;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Joint (sarcasm, sentiment) counts whose marginals are 12548 records,
/// FALSE 10380 / TRUE 2168 and NEG 4621 / NEU 5747 / POS 2180.
pub const JOINT_COUNTS: [(&str, &str, usize); 6] = [
    ("TRUE", "NEG", 1500),
    ("TRUE", "NEU", 500),
    ("TRUE", "POS", 168),
    ("FALSE", "NEG", 3121),
    ("FALSE", "NEU", 5247),
    ("FALSE", "POS", 2012),
];

pub const DIALECTS: [&str; 5] = ["msa", "egypt", "gulf", "levant", "magreb"];

const POS_WORDS: [&str; 10] = [
    "رائع",
    "جميل",
    "ممتاز",
    "سعيد",
    "احب",
    "افضل",
    "شكرا",
    "حلو",
    "مبروك",
    "نجاح",
];
const NEG_WORDS: [&str; 10] = [
    "سيء",
    "مزعج",
    "فاشل",
    "حزين",
    "اكره",
    "غاضب",
    "ظلم",
    "كارثة",
    "خسارة",
    "مشكلة",
];
const NEU_WORDS: [&str; 10] = [
    "خبر",
    "اليوم",
    "الساعة",
    "مباراة",
    "اجتماع",
    "تقرير",
    "الحكومة",
    "الطقس",
    "الاسبوع",
    "موعد",
];
const SARC_WORDS: [&str; 6] = ["ياسلام", "طبعا", "اكيد", "عبقري", "ماشاءالله", "تصدق"];
const FILLER: [&str; 14] = [
    "في",
    "من",
    "على",
    "هذا",
    "كان",
    "الناس",
    "والله",
    "بعد",
    "كل",
    "مع",
    "الى",
    "عن",
    "لما",
    "هو",
];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone)]
pub struct Row {
    pub text: String,
    pub sarcasm: &'static str,
    pub sentiment: &'static str,
    pub dialect: &'static str,
}

fn elongate(word: &str, rng: &mut impl Rng) -> String {
    let chars: Vec<char> = word.chars().collect();
    let at = rng.random_range(0..chars.len());
    let mut out = String::new();
    for (i, c) in chars.iter().enumerate() {
        out.push(*c);
        if i == at {
            for _ in 0..rng.random_range(2..6) {
                out.push(*c);
            }
        }
    }
    out
}

/// Tweet-like text for one label pair: class vocabulary, filler, and noise
/// (emoji, mentions, links, digits glued to words, markup, elongation).
/// `noise_words` of the sentiment words are drawn from other classes.
pub fn tweet(sarcasm: &str, sentiment: &str, rng: &mut impl Rng, noise_words: f64) -> String {
    let own: &[&str] = match sentiment {
        "POS" => &POS_WORDS,
        "NEG" => &NEG_WORDS,
        _ => &NEU_WORDS,
    };
    let all = [&POS_WORDS[..], &NEG_WORDS[..], &NEU_WORDS[..]];
    let mut words: Vec<String> = Vec::new();
    for _ in 0..rng.random_range(2..4) {
        let w = if rng.random_bool(noise_words) {
            all[rng.random_range(0..3)].choose(rng).unwrap()
        } else {
            own.choose(rng).unwrap()
        };
        words.push(if rng.random_bool(0.2) {
            elongate(w, rng)
        } else {
            w.to_string()
        });
    }
    if sarcasm == "TRUE" {
        words.push(SARC_WORDS.choose(rng).unwrap().to_string());
        if rng.random_bool(0.5) {
            words.push("😂😂".into());
        }
    }
    for _ in 0..rng.random_range(2..6) {
        words.push(FILLER.choose(rng).unwrap().to_string());
    }
    words.shuffle(rng);
    if rng.random_bool(0.3) {
        words.insert(0, format!("@user{}", rng.random_range(0..1000)));
    }
    if rng.random_bool(0.2) {
        words.push(format!("https://t.co/{:x}", rng.random::<u32>()));
    }
    if rng.random_bool(0.15) {
        let i = rng.random_range(0..words.len());
        words[i] = format!("{}{}", words[i], rng.random_range(1..2030));
    }
    if rng.random_bool(0.1) {
        words.push("<br>".into());
    }
    if rng.random_bool(0.2) {
        words.push("❤️".into());
    }
    words.join(" ")
}

/// Rows with exactly [`JOINT_COUNTS`], in shuffled order.
pub fn marginal_rows(seed: u64) -> Vec<Row> {
    let mut rng = rng(seed);
    let mut rows = Vec::new();
    for (sarcasm, sentiment, n) in JOINT_COUNTS {
        for _ in 0..n {
            rows.push(Row {
                text: tweet(sarcasm, sentiment, &mut rng, 0.1),
                sarcasm,
                sentiment,
                dialect: DIALECTS.choose(&mut rng).unwrap(),
            });
        }
    }
    rows.shuffle(&mut rng);
    rows
}

/// A labelled corpus of `n` tweets with roughly the real label skew.
pub fn synthetic_rows(n: usize, seed: u64) -> Vec<Row> {
    let mut rng = rng(seed);
    (0..n)
        .map(|_| {
            let sentiment = match rng.random_range(0..100) {
                0..=44 => "NEU",
                45..=81 => "NEG",
                _ => "POS",
            };
            let sarcasm = if rng.random_bool(0.17) {
                "TRUE"
            } else {
                "FALSE"
            };
            Row {
                text: tweet(sarcasm, sentiment, &mut rng, 0.15),
                sarcasm,
                sentiment,
                dialect: DIALECTS.choose(&mut rng).unwrap(),
            }
        })
        .collect()
}

pub fn write_csv(path: &Path, rows: &[Row]) {
    let mut w = csv::Writer::from_path(path).unwrap();
    w.write_record(["tweet", "sarcasm", "sentiment", "dialect"])
        .unwrap();
    for r in rows {
        w.write_record([r.text.as_str(), r.sarcasm, r.sentiment, r.dialect])
            .unwrap();
    }
    w.flush().unwrap();
}

/// The separable training set: 20 examples, two labels. Every "A" text
/// contains the marker word `الف`, every "B" text `باء`; the remaining words
/// are shared filler, so a single feature separates the classes.
pub fn separable_set() -> Vec<(String, String)> {
    (0..20)
        .map(|i| {
            let filler = format!(
                "{} {}",
                FILLER[i % FILLER.len()],
                FILLER[(i * 7 + 3) % FILLER.len()]
            );
            if i % 2 == 0 {
                (format!("{filler} الف"), "A".to_string())
            } else {
                (format!("باء {filler}"), "B".to_string())
            }
        })
        .collect()
}

/// Random strings mixing Arabic, Latin, digits, emoji, whitespace, markup
/// and entity fragments.
pub fn random_text(rng: &mut impl Rng, max_len: usize) -> String {
    const PIECES: &[&str] = &[
        "ا",
        "ب",
        "ت",
        "ه",
        "ـ",
        "َ",
        "ً",
        "ة",
        "ى",
        "ء",
        "ال",
        "٣",
        "a",
        "Z",
        "o",
        "0",
        "7",
        " ",
        "  ",
        "\t",
        "\n",
        "(",
        ")",
        "[",
        "]",
        "!",
        "؟",
        ".",
        ",",
        ":",
        "/",
        "@",
        "_",
        "😂",
        "❤️",
        "👍🏽",
        "\u{200f}",
        "\u{200b}",
        "&amp;",
        "&lt;",
        "&#1575;",
        "&bogus;",
        "<br>",
        "<b>",
        "</p>",
        "http://",
        "https://",
        "www.",
        "t.co/",
        ".com",
        "@user",
        "a@b.com",
        "[ رابط ]",
        "[ مستخدم ]",
        "tt",
        "hh",
        "&",
        "<",
        ">",
        "\u{0}",
        "\r",
        "\u{a0}",
        "é",
        "е\u{301}",
        "中",
    ];
    let n = rng.random_range(0..=max_len);
    (0..n).map(|_| *PIECES.choose(rng).unwrap()).collect()
}
