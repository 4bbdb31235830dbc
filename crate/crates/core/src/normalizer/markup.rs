use std::borrow::Cow;
use std::sync::LazyLock;

use regex::{Captures, Regex};

static ENTITY: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"&(?:#([0-9]{1,7})|#[xX]([0-9A-Fa-f]{1,6})|([A-Za-z][A-Za-z0-9]{1,31}));").unwrap()
});

static TAG: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?s)<!--.*?-->|<!?/?[A-Za-z][A-Za-z0-9:-]*(?:\s[^<>]*)?/?>").unwrap()
});

fn named_entity(name: &str) -> Option<char> {
    Some(match name {
        "amp" => '&',
        "lt" => '<',
        "gt" => '>',
        "quot" => '"',
        "apos" => '\'',
        "nbsp" => '\u{00A0}',
        "hellip" => '…',
        "mdash" => '—',
        "ndash" => '–',
        "lsquo" => '‘',
        "rsquo" => '’',
        "ldquo" => '“',
        "rdquo" => '”',
        "laquo" => '«',
        "raquo" => '»',
        "copy" => '©',
        "reg" => '®',
        "trade" => '™',
        "deg" => '°',
        "times" => '×',
        "divide" => '÷',
        "hearts" => '♥',
        "middot" => '·',
        "bull" => '•',
        _ => return None,
    })
}

/// Decodes HTML character references. Known named and valid numeric
/// references are decoded; anything else matching the reference syntax is
/// dropped.
pub fn decode_entities(text: &str) -> Cow<'_, str> {
    ENTITY.replace_all(text, |caps: &Captures<'_>| {
        let decoded = if let Some(dec) = caps.get(1) {
            dec.as_str().parse::<u32>().ok().and_then(char::from_u32)
        } else if let Some(hex) = caps.get(2) {
            u32::from_str_radix(hex.as_str(), 16)
                .ok()
                .and_then(char::from_u32)
        } else {
            caps.get(3).and_then(|m| named_entity(m.as_str()))
        };
        match decoded {
            Some('\0') | None => String::new(),
            Some(c) => c.to_string(),
        }
    })
}

/// Removes HTML line breaks, tags and character references. Each tag
/// becomes a single space so adjacent words do not fuse.
pub fn strip_markup(text: &str) -> String {
    let decoded = decode_entities(text);
    TAG.replace_all(&decoded, " ").into_owned()
}
