//! Character classes shared by the normalizer, segmenter and featurizer.

use unicode_segmentation::UnicodeSegmentation;

pub const TATWEEL: char = '\u{0640}';

/// Arabic-script letters, including extended and presentation-form letters.
/// Tatweel, digits, punctuation and combining marks are excluded.
pub fn is_arabic_letter(c: char) -> bool {
    matches!(c,
        '\u{0620}'..='\u{063F}'
        | '\u{0641}'..='\u{064A}'
        | '\u{066E}'..='\u{066F}'
        | '\u{0671}'..='\u{06D3}'
        | '\u{06D5}'
        | '\u{06EE}'..='\u{06EF}'
        | '\u{06FA}'..='\u{06FC}'
        | '\u{06FF}'
        | '\u{0750}'..='\u{077F}'
        | '\u{08A0}'..='\u{08C9}'
        | '\u{FB50}'..='\u{FBB1}'
        | '\u{FBD3}'..='\u{FD3D}'
        | '\u{FD50}'..='\u{FDC7}'
        | '\u{FDF0}'..='\u{FDFB}'
        | '\u{FE70}'..='\u{FE74}'
        | '\u{FE76}'..='\u{FEFC}')
}

/// Arabic combining marks (harakat, tanween, shadda, Quranic annotation).
pub fn is_arabic_mark(c: char) -> bool {
    matches!(c,
        '\u{0610}'..='\u{061A}'
        | '\u{064B}'..='\u{065F}'
        | '\u{0670}'
        | '\u{06D6}'..='\u{06DC}'
        | '\u{06DF}'..='\u{06E4}'
        | '\u{06E7}'..='\u{06E8}'
        | '\u{06EA}'..='\u{06ED}'
        | '\u{08CA}'..='\u{08E1}'
        | '\u{08E3}'..='\u{08FF}')
}

/// Arabic-Indic and extended Arabic-Indic digits.
pub fn is_arabic_digit(c: char) -> bool {
    matches!(c, '\u{0660}'..='\u{0669}' | '\u{06F0}'..='\u{06F9}')
}

/// Punctuation that no cleaning stage may delete: ASCII, Arabic and the
/// General Punctuation block.
pub fn is_protected_punctuation(c: char) -> bool {
    c.is_ascii_punctuation()
        || matches!(c,
            '\u{00A1}' | '\u{00A7}' | '\u{00AB}' | '\u{00B6}' | '\u{00B7}' | '\u{00BB}' | '\u{00BF}'
            | '\u{060C}' | '\u{060D}' | '\u{061B}' | '\u{061E}' | '\u{061F}'
            | '\u{066A}'..='\u{066D}'
            | '\u{06D4}'
            | '\u{2010}'..='\u{2027}'
            | '\u{2030}'..='\u{205E}'
            | '\u{2E00}'..='\u{2E4F}'
            | '\u{FD3E}'..='\u{FD3F}')
}

/// True when a token is made of Arabic letters, Arabic marks and tatweel
/// only, with at least one letter.
pub fn is_arabic_word(token: &str) -> bool {
    let mut letters = 0usize;
    for c in token.chars() {
        if is_arabic_letter(c) {
            letters += 1;
        } else if !(is_arabic_mark(c) || c == TATWEEL) {
            return false;
        }
    }
    letters > 0
}

/// Coarse class of a text unit, decided by its first character.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitClass {
    Space,
    ArabicLetter,
    AsciiLetter,
    AsciiDigit,
    ArabicDigit,
    Paren,
    Other,
}

pub fn classify(unit: &str) -> UnitClass {
    let Some(c) = unit.chars().next() else {
        return UnitClass::Other;
    };
    if c.is_whitespace() {
        UnitClass::Space
    } else if is_arabic_letter(c) {
        UnitClass::ArabicLetter
    } else if c.is_ascii_alphabetic() {
        UnitClass::AsciiLetter
    } else if c.is_ascii_digit() {
        UnitClass::AsciiDigit
    } else if is_arabic_digit(c) {
        UnitClass::ArabicDigit
    } else if c == '(' || c == ')' {
        UnitClass::Paren
    } else {
        UnitClass::Other
    }
}

/// Splits text into extended grapheme clusters, except that whitespace
/// characters always stand alone: a cluster such as `" \u{301}"` yields
/// `" "` and `"\u{301}"`, and `"\r\n"` yields two units.
///
/// Keeping whitespace out of clusters means deleting or collapsing spaces
/// never changes the identity of the neighbouring units.
pub fn units(text: &str) -> Vec<&str> {
    let mut out = Vec::with_capacity(text.len());
    for g in text.graphemes(true) {
        let mut rest = g;
        while let Some(c) = rest.chars().next() {
            if !c.is_whitespace() {
                break;
            }
            let (ws, tail) = rest.split_at(c.len_utf8());
            out.push(ws);
            rest = tail;
        }
        if !rest.is_empty() {
            out.push(rest);
        }
    }
    out
}
