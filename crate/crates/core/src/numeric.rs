//! Exact evaluation and rendering of digit strings, and direct chunk
//! conversion between digit sets.
//!
//! A digit string `d_m ... d_0` over a set of base `b` denotes
//! `sum(d_n * b^n)` with `n = 0` at the rightmost digit. All arithmetic is
//! arbitrary precision; values that fit in a machine word take a fast path.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::digitset::DigitSet;

/// Arbitrary-precision non-negative integer, the value of a chunk.
pub type Natural = BigUint;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NumericError {
    #[error("digit {codepoint:?} at index {index} is not in the digit set")]
    ForeignDigit { codepoint: char, index: usize },
    #[error("base must be at least 2, got {0}")]
    BadBase(u64),
    #[error("the empty digit string is not a number")]
    EmptyDigitString,
}

/// Largest power of `base` that fits in a u64, with its exponent. Grouping
/// digits this way keeps big-integer operations per group instead of per
/// digit.
fn super_base(base: u64) -> (u64, usize) {
    let mut power = base;
    let mut exponent = 1;
    while let Some(next) = power.checked_mul(base) {
        power = next;
        exponent += 1;
    }
    (power, exponent)
}

/// Evaluates a digit string over `set`. Leading value-0 digits are legal:
/// chunks of plaintext may begin with the zero symbol.
pub fn evaluate_digits(digits: &str, set: &DigitSet) -> Result<Natural, NumericError> {
    let mut values: Vec<u32> = Vec::new();
    for (index, codepoint) in digits.chars().enumerate() {
        match set.value_of(codepoint) {
            Some(v) => values.push(v),
            None => return Err(NumericError::ForeignDigit { codepoint, index }),
        }
    }
    if values.is_empty() {
        return Err(NumericError::EmptyDigitString);
    }
    let base = set.base() as u64;

    // Fast path: the whole value fits in a u64.
    let mut small: u64 = 0;
    let mut fits = true;
    for &v in &values {
        match small.checked_mul(base).and_then(|x| x.checked_add(v as u64)) {
            Some(x) => small = x,
            None => {
                fits = false;
                break;
            }
        }
    }
    if fits {
        return Ok(BigUint::from(small));
    }

    let (super_base, digits_per) = super_base(base);
    let mut acc = BigUint::zero();
    for group in values.chunks(digits_per) {
        let mut packed: u64 = 0;
        for &v in group {
            packed = packed * base + v as u64;
        }
        let factor = if group.len() == digits_per {
            super_base
        } else {
            base.pow(group.len() as u32)
        };
        acc = acc * factor + packed;
    }
    Ok(acc)
}

/// The digit values of `value` in `base`, most significant first.
/// Zero yields `[0]`.
fn digit_values(value: &Natural, base: u64) -> Vec<u64> {
    if value.is_zero() {
        return vec![0];
    }
    let mut out: Vec<u64> = Vec::new();
    if let Some(mut v) = value.to_u64() {
        while v > 0 {
            out.push(v % base);
            v /= base;
        }
        out.reverse();
        return out;
    }

    let (super_base, digits_per) = super_base(base);
    let big_super = BigUint::from(super_base);
    let mut groups: Vec<u64> = Vec::new();
    let mut quotient = value.clone();
    while !quotient.is_zero() {
        use num_integer::Integer;
        let (q, r) = quotient.div_rem(&big_super);
        groups.push(r.to_u64().expect("remainder below super base"));
        quotient = q;
    }
    // Every group but the most significant expands to exactly `digits_per`
    // digits; zeros inside a group are significant.
    for (i, &group) in groups.iter().enumerate() {
        let mut g = group;
        if i + 1 == groups.len() {
            while g > 0 {
                out.push(g % base);
                g /= base;
            }
        } else {
            for _ in 0..digits_per {
                out.push(g % base);
                g /= base;
            }
        }
    }
    out.reverse();
    out
}

/// Renders `value` as the shortest digit string over `set`, left-padded with
/// the value-0 digit up to `min_width`. Zero renders as the single value-0
/// digit.
pub fn render_digits(value: &Natural, set: &DigitSet, min_width: usize) -> String {
    let digits = digit_values(value, set.base() as u64);
    let mut out = String::new();
    for _ in 0..min_width.saturating_sub(digits.len()) {
        out.push(set.zero_digit());
    }
    for v in digits {
        out.push(set.char_of(v as u32).expect("digit below base"));
    }
    out
}

/// Re-renders a chunk from its own set into `dst`. Leading value-0 digits in
/// the chunk contribute nothing to the value; restoring the original width on
/// the way back is the caller's duty via `min_width`.
pub fn convert_chunk(
    chunk: &str,
    src: &DigitSet,
    dst: &DigitSet,
    min_width: usize,
) -> Result<String, NumericError> {
    Ok(render_digits(&evaluate_digits(chunk, src)?, dst, min_width))
}

/// Number of digit positions `value` occupies in `base`; zero occupies one.
pub fn place_length(value: &Natural, base: u64) -> Result<u64, NumericError> {
    if base < 2 {
        return Err(NumericError::BadBase(base));
    }
    if value.is_zero() {
        return Ok(1);
    }
    if let Some(mut v) = value.to_u64() {
        let mut length = 0;
        while v > 0 {
            v /= base;
            length += 1;
        }
        return Ok(length);
    }
    let (super_base, digits_per) = super_base(base);
    let big_super = BigUint::from(super_base);
    let mut quotient = value.clone();
    let mut groups: u64 = 0;
    let mut leading: u64 = 0;
    while !quotient.is_zero() {
        use num_integer::Integer;
        let (q, r) = quotient.div_rem(&big_super);
        leading = r.to_u64().expect("remainder below super base");
        groups += 1;
        quotient = q;
    }
    let mut length = (groups - 1) * digits_per as u64;
    while leading > 0 {
        leading /= base;
        length += 1;
    }
    Ok(length)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digitset::{ExclusionPolicy, Preset};
    use num_traits::One;
    use proptest::prelude::*;

    fn set(preset: Preset) -> DigitSet {
        DigitSet::preset(preset)
    }

    #[test]
    fn evaluate_demo_values() {
        assert_eq!(evaluate_digits("this", &set(Preset::Base36)).unwrap(), 1375732u32.into());
        assert_eq!(evaluate_digits("ABC", &set(Preset::HexUpper)).unwrap(), 2748u32.into());
        assert_eq!(evaluate_digits("is an", &set(Preset::Base37)).unwrap(), 35202859u32.into());
        assert_eq!(evaluate_digits("0", &set(Preset::Decimal)).unwrap(), 0u32.into());
    }

    #[test]
    fn evaluate_rejects_foreign_digit() {
        assert_eq!(
            evaluate_digits("a-b", &set(Preset::Base36)),
            Err(NumericError::ForeignDigit { codepoint: '-', index: 1 })
        );
    }

    #[test]
    fn evaluate_rejects_empty() {
        assert_eq!(evaluate_digits("", &set(Preset::Decimal)), Err(NumericError::EmptyDigitString));
    }

    #[test]
    fn render_demo_values() {
        assert_eq!(render_digits(&1375732u32.into(), &set(Preset::Base36), 0), "this");
        assert_eq!(render_digits(&25714u32.into(), &set(Preset::HexUpper), 0), "6472");
        assert_eq!(render_digits(&0u32.into(), &set(Preset::Decimal), 3), "000");
        assert_eq!(render_digits(&0u32.into(), &set(Preset::Decimal), 0), "0");
    }

    #[test]
    fn convert_demo_chunks() {
        let b37 = set(Preset::Base37);
        let dec = set(Preset::Decimal);
        let hex = set(Preset::HexUpper);
        assert_eq!(convert_chunk("is ", &b37, &dec, 0).unwrap(), "25714");
        assert_eq!(convert_chunk("35202859", &dec, &hex, 0).unwrap(), "219272B");
        assert_eq!(convert_chunk("007", &dec, &dec, 3).unwrap(), "007");
    }

    #[test]
    fn place_length_examples() {
        assert_eq!(place_length(&2748u32.into(), 16), Ok(3));
        assert_eq!(place_length(&0u32.into(), 2), Ok(1));
        assert_eq!(place_length(&1_000_000u32.into(), 2), Ok(20));
        assert_eq!(place_length(&1u32.into(), 1), Err(NumericError::BadBase(1)));
    }

    #[test]
    fn place_length_on_wide_values() {
        // 2^200 has 201 binary digits; cross-check a few large bases too.
        let wide = BigUint::one() << 200u32;
        assert_eq!(place_length(&wide, 2), Ok(201));
        for base in [3u64, 10, 16, 50000, 1_000_000_007] {
            let rendered_len = digit_values(&wide, base).len() as u64;
            assert_eq!(place_length(&wide, base), Ok(rendered_len));
        }
    }

    #[test]
    fn origin_does_not_affect_value() {
        // Same value map expressed as preset vs explicit alphabet.
        let preset = set(Preset::Base36);
        let explicit = DigitSet::from_alphabet("0123456789abcdefghijklmnopqrstuvwxyz").unwrap();
        assert_eq!(
            evaluate_digits("example", &preset).unwrap(),
            evaluate_digits("example", &explicit).unwrap()
        );
    }

    #[test]
    fn small_oracle_agreement() {
        // Independent repeated-division oracle over machine integers.
        fn oracle(mut v: u64, base: u64, set: &DigitSet) -> String {
            if v == 0 {
                return set.zero_digit().to_string();
            }
            let mut digits = Vec::new();
            while v > 0 {
                digits.push((v % base) as u32);
                v /= base;
            }
            digits.iter().rev().map(|&d| set.char_of(d).unwrap()).collect()
        }
        for base in 2..=20u32 {
            let set = DigitSet::from_unicode_range(base, &ExclusionPolicy::default()).unwrap();
            for v in 0..5000u64 {
                assert_eq!(render_digits(&v.into(), &set, 0), oracle(v, base as u64, &set));
            }
        }
    }

    fn arbitrary_set() -> impl Strategy<Value = DigitSet> {
        prop_oneof![
            Just(DigitSet::preset(Preset::Decimal)),
            Just(DigitSet::preset(Preset::Base37)),
            Just(DigitSet::preset(Preset::HexUpper)),
            (2u32..2000).prop_map(|b| {
                DigitSet::from_unicode_range(b, &ExclusionPolicy::default()).unwrap()
            }),
            (2u32..64, 0u64..1000).prop_map(|(b, seed)| {
                DigitSet::from_unicode_range(b, &ExclusionPolicy::default())
                    .unwrap()
                    .permute(seed)
            }),
        ]
    }

    proptest! {
        #[test]
        fn value_round_trip(bytes in proptest::collection::vec(any::<u8>(), 0..512), set in arbitrary_set()) {
            let value = BigUint::from_bytes_be(&bytes);
            let rendered = render_digits(&value, &set, 0);
            prop_assert_eq!(evaluate_digits(&rendered, &set).unwrap(), value);
        }

        #[test]
        fn width_round_trip(values in proptest::collection::vec(0u32..37, 1..40)) {
            let set = DigitSet::preset(Preset::Base37);
            let digits: String = values.iter().map(|&v| set.char_of(v).unwrap()).collect();
            let value = evaluate_digits(&digits, &set).unwrap();
            prop_assert_eq!(render_digits(&value, &set, values.len()), digits);
        }

        #[test]
        fn converted_width_is_bounded(values in proptest::collection::vec(0u32..37, 1..30), dst_base in 2u32..3000) {
            let src = DigitSet::preset(Preset::Base37);
            let dst = DigitSet::from_unicode_range(dst_base, &ExclusionPolicy::default()).unwrap();
            let chunk: String = values.iter().map(|&v| src.char_of(v).unwrap()).collect();
            let converted = convert_chunk(&chunk, &src, &dst, 0).unwrap();
            let max_value = BigUint::from(37u32).pow(values.len() as u32) - 1u32;
            let bound = place_length(&max_value, dst_base as u64).unwrap();
            prop_assert!(converted.chars().count() as u64 <= bound);
        }
    }
}
