use arsarc::normalizer::{normalize, NormalizationConfig};
use serde::Deserialize;

#[derive(Deserialize)]
struct Case {
    rule: String,
    input: String,
    expected: String,
}

fn cases() -> Vec<Case> {
    include_str!("fixtures/normalizer_golden.jsonl")
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn corpus_is_large_enough() {
    let cases = cases();
    assert!(cases.len() >= 40, "only {} golden cases", cases.len());
    for rule in [
        "markup", "unwanted", "repeat", "boundary", "entity", "spaces", "pipeline",
    ] {
        assert!(
            cases.iter().any(|c| c.rule.starts_with(rule)),
            "no case for {rule}"
        );
    }
}

#[test]
fn golden_pairs_match_byte_exactly() {
    let cfg = NormalizationConfig::default();
    let mut failures = Vec::new();
    for c in cases() {
        let got = normalize(&c.input, &cfg).normalized;
        if got != c.expected {
            failures.push(format!(
                "[{}] {:?}: expected {:?}, got {:?}",
                c.rule, c.input, c.expected, got
            ));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn golden_outputs_are_fixed_points() {
    let cfg = NormalizationConfig::default();
    for c in cases() {
        assert_eq!(
            normalize(&c.expected, &cfg).normalized,
            c.expected,
            "{:?}",
            c.input
        );
    }
}
