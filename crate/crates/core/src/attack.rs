//! Brute-force decipherment of numeric ciphertexts: try every conventional
//! alphabet in a base range, decode, and rank the results by how much they
//! look like English.

use std::cmp::Ordering;

use num_bigint::BigUint;
use thiserror::Error;

use crate::digitset::DigitSet;
use crate::numeric::render_digits;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AttackError {
    #[error("candidate alphabets cover bases 2 through 64, got {0}")]
    BadBase(u32),
    #[error("ciphertext segment {0:?} is not a decimal number")]
    NotNumeric(String),
}

/// English letter frequencies (Lewand's corpus-derived table), indexed
/// a..=z. Any fixed table works for ranking; this one is pinned so scores
/// and rankings are reproducible.
const ENGLISH_LETTER_FREQUENCIES: [f64; 26] = [
    0.08167, 0.01492, 0.02782, 0.04253, 0.12702, 0.02228, 0.02015, 0.06094, 0.06966, 0.00153,
    0.00772, 0.04025, 0.02406, 0.06749, 0.07507, 0.01929, 0.00095, 0.05987, 0.06327, 0.09056,
    0.02758, 0.00978, 0.02360, 0.00150, 0.01974, 0.00074,
];

/// The punctuation tail of the conventional alphabets, in pinned order.
const PUNCTUATION: &str = ".,;:!?'\"()-[]{}/\\@#$%&*+=_<>";

/// The conventional alphabet for `base`: decimal digits, then lowercase
/// letters, then space, then punctuation, truncated to `base` symbols.
pub fn candidate_alphabet(base: u32) -> Result<DigitSet, AttackError> {
    if !(2..=64).contains(&base) {
        return Err(AttackError::BadBase(base));
    }
    let full: String = ('0'..='9')
        .chain('a'..='z')
        .chain(std::iter::once(' '))
        .chain(PUNCTUATION.chars())
        .collect();
    let alphabet: String = full.chars().take(base as usize).collect();
    Ok(DigitSet::from_alphabet(&alphabet).expect("prefix of a duplicate-free alphabet"))
}

fn alphabet_rule(base: u32) -> &'static str {
    match base {
        2..=10 => "digits",
        11..=36 => "digits+lowercase",
        37 => "digits+lowercase+space",
        _ => "digits+lowercase+space+punctuation",
    }
}

/// One decipherment attempt: the tried base and what the ciphertext decodes
/// to under its conventional alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct AttackCandidate {
    pub base: u32,
    pub alphabet_rule: String,
    pub decoded_text: String,
    pub score: f64,
}

/// Decodes `cipher_body` (decimal numbers joined by `separator`) under every
/// candidate base in `lo..=hi` and returns all attempts, best first. Ties
/// rank the smaller base first.
///
/// Chunks decoded under a base below 37 have no space in their alphabet, so
/// they are joined with single spaces; from base 37 on the alphabet itself
/// carries the word spacing and chunks are concatenated directly.
pub fn brute_force(
    cipher_body: &str,
    separator: char,
    lo: u32,
    hi: u32,
) -> Result<Vec<AttackCandidate>, AttackError> {
    if !(2..=64).contains(&lo) || lo > hi {
        return Err(AttackError::BadBase(lo));
    }
    if !(2..=64).contains(&hi) {
        return Err(AttackError::BadBase(hi));
    }
    let values: Vec<BigUint> = if cipher_body.is_empty() {
        Vec::new()
    } else {
        cipher_body
            .split(separator)
            .map(|segment| {
                BigUint::parse_bytes(segment.as_bytes(), 10)
                    .ok_or_else(|| AttackError::NotNumeric(segment.to_string()))
            })
            .collect::<Result<_, _>>()?
    };

    let mut candidates = Vec::with_capacity((hi - lo + 1) as usize);
    for base in lo..=hi {
        let set = candidate_alphabet(base)?;
        let chunks: Vec<String> = values.iter().map(|v| render_digits(v, &set, 0)).collect();
        let decoded_text = chunks.join(if base < 37 { " " } else { "" });
        let score = score_englishness(&decoded_text);
        candidates.push(AttackCandidate {
            base,
            alphabet_rule: alphabet_rule(base).to_string(),
            decoded_text,
            score,
        });
    }
    candidates.sort_by(|a, b| {
        b.score
            .partial_cmp(&a.score)
            .unwrap_or(Ordering::Equal)
            .then(a.base.cmp(&b.base))
    });
    Ok(candidates)
}

/// How English a string looks, in [0, 1]. Half the score is the fraction of
/// codepoints in a–z or space; the other half is one minus the normalized
/// chi-square distance between the text's letter distribution and the pinned
/// English table (per letter, divided by 10, clamped to [0, 1]). Empty text
/// scores 0; text without letters takes the maximal distance.
pub fn score_englishness(text: &str) -> f64 {
    let total = text.chars().count();
    if total == 0 {
        return 0.0;
    }
    let friendly = text.chars().filter(|c| c.is_ascii_lowercase() || *c == ' ').count();
    let fraction = friendly as f64 / total as f64;

    let mut letter_counts = [0u64; 26];
    for c in text.chars() {
        if c.is_ascii_lowercase() {
            letter_counts[(c as u8 - b'a') as usize] += 1;
        }
    }
    let letters: u64 = letter_counts.iter().sum();
    let distance = if letters == 0 {
        1.0
    } else {
        let chi_square: f64 = letter_counts
            .iter()
            .zip(ENGLISH_LETTER_FREQUENCIES)
            .map(|(&obs, freq)| {
                let expected = letters as f64 * freq;
                let d = obs as f64 - expected;
                d * d / expected
            })
            .sum();
        (chi_square / letters as f64 / 10.0).clamp(0.0, 1.0)
    };
    0.5 * fraction + 0.5 * (1.0 - distance)
}

/// The attack report: `<rank>\t<base>\t<score>\t<first 60 codepoints>`, one
/// line per candidate, LF endings.
pub fn report(candidates: &[AttackCandidate]) -> String {
    let mut out = String::new();
    for (i, c) in candidates.iter().enumerate() {
        let preview: String = c.decoded_text.chars().take(60).collect();
        out.push_str(&format!("{}\t{}\t{:.4}\t{}\n", i + 1, c.base, c.score, preview));
    }
    out
}
