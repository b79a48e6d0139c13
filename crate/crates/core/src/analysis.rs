//! Measurements around the codec: digit-length tables for powers of ten,
//! compression accounting, digit-frequency signatures, and the coarse token
//! statistics a cryptanalyst would start from.

use num_bigint::BigUint;

use crate::codec::CipherDocument;
use crate::digitset::DigitSet;
use crate::numeric::{place_length, Natural, NumericError};

/// Digit counts of 10^p across several bases, one row per power.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthTable {
    pub bases: Vec<u64>,
    /// `(10^p, length in each base)` for p = 0..=max_power.
    pub rows: Vec<(Natural, Vec<u64>)>,
}

impl LengthTable {
    /// CSV form: header `value,base<b1>,base<b2>,...`, one row per power,
    /// LF line endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("value");
        for b in &self.bases {
            out.push_str(&format!(",base{b}"));
        }
        out.push('\n');
        for (value, lengths) in &self.rows {
            out.push_str(&value.to_string());
            for len in lengths {
                out.push_str(&format!(",{len}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Builds the table of place lengths pl(10^p, b) for p = 0..=max_power.
pub fn length_table(max_power: u32, bases: &[u64]) -> Result<LengthTable, NumericError> {
    let mut rows = Vec::with_capacity(max_power as usize + 1);
    for p in 0..=max_power {
        let value = BigUint::from(10u32).pow(p);
        let lengths = bases
            .iter()
            .map(|&b| place_length(&value, b))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push((value, lengths));
    }
    Ok(LengthTable { bases: bases.to_vec(), rows })
}

/// An exact quotient of two counts. The denominator may be zero for
/// degenerate (empty) inputs; `as_f64` reports that as `None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactRatio {
    pub numerator: u64,
    pub denominator: u64,
}

impl ExactRatio {
    pub fn as_f64(&self) -> Option<f64> {
        if self.denominator == 0 {
            None
        } else {
            Some(self.numerator as f64 / self.denominator as f64)
        }
    }
}

impl std::fmt::Display for ExactRatio {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

/// Scalar and UTF-8 byte counts for a plaintext/ciphertext pair. Pure
/// measurement: nothing is compressed, the numbers merely expose whether a
/// large-base re-encoding saved characters, bytes, neither, or both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressionReport {
    pub plain_chars: u64,
    pub plain_utf8_bytes: u64,
    pub cipher_chars: u64,
    pub cipher_utf8_bytes: u64,
}

impl CompressionReport {
    pub fn char_ratio(&self) -> ExactRatio {
        ExactRatio { numerator: self.cipher_chars, denominator: self.plain_chars }
    }

    pub fn byte_ratio(&self) -> ExactRatio {
        ExactRatio { numerator: self.cipher_utf8_bytes, denominator: self.plain_utf8_bytes }
    }
}

/// Counts both sides of an encoding. The cipher side measures the body —
/// chunks plus separators — not the optional header line.
pub fn compression_report(plaintext: &str, doc: &CipherDocument) -> CompressionReport {
    let body = doc.body_string();
    CompressionReport {
        plain_chars: plaintext.chars().count() as u64,
        plain_utf8_bytes: plaintext.len() as u64,
        cipher_chars: body.chars().count() as u64,
        cipher_utf8_bytes: body.len() as u64,
    }
}

/// Digit-value histogram of a cipher body and its chi-square distance from
/// the uniform distribution over the whole set.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencySignature {
    /// Count per digit value; indices are digit values, length is the base.
    pub histogram: Vec<u64>,
    pub chi_square_vs_uniform: f64,
}

/// Histograms `body` over `set`. The caller strips separators first; any
/// non-member codepoint is an error.
pub fn digit_frequency(body: &str, set: &DigitSet) -> Result<FrequencySignature, NumericError> {
    let mut histogram = vec![0u64; set.base() as usize];
    for (index, codepoint) in body.chars().enumerate() {
        match set.value_of(codepoint) {
            Some(v) => histogram[v as usize] += 1,
            None => return Err(NumericError::ForeignDigit { codepoint, index }),
        }
    }
    let n: u64 = histogram.iter().sum();
    let chi_square_vs_uniform = if n == 0 {
        0.0
    } else {
        let expected = n as f64 / set.base() as f64;
        histogram
            .iter()
            .map(|&obs| {
                let d = obs as f64 - expected;
                d * d / expected
            })
            .sum()
    };
    Ok(FrequencySignature { histogram, chi_square_vs_uniform })
}

/// Token counts per sentence: sentences split on `.`, `!`, `?`; tokens split
/// on whitespace runs; sentences without tokens are dropped.
pub fn tokens_per_sentence(text: &str) -> Vec<usize> {
    text.split(['.', '!', '?'])
        .map(|sentence| sentence.split_whitespace().count())
        .filter(|&n| n > 0)
        .collect()
}

/// The value-list form of a digit string: decimal digit values joined by
/// hyphens, most significant first.
pub fn pretty_print_decomposition(digits: &str, set: &DigitSet) -> Result<String, NumericError> {
    let values = digits
        .chars()
        .enumerate()
        .map(|(index, codepoint)| {
            set.value_of(codepoint)
                .map(|v| v.to_string())
                .ok_or(NumericError::ForeignDigit { codepoint, index })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(values.join("-"))
}
