//! Ordered digit sets: explicit alphabets, Unicode-rank sets with exclusions,
//! presets, and keyed permutations.
//!
//! A digit set maps each member codepoint to its index in the inventory; the
//! inventory size is the base of the positional system it defines.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

/// Largest codepoint plus one (`U+10FFFF + 1`).
const CODEPOINT_LIMIT: u32 = 0x11_0000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DigitSetError {
    #[error("duplicate digit {codepoint:?} at index {index}")]
    DuplicateDigit { codepoint: char, index: usize },
    #[error("digit set needs at least 2 symbols, got {0}")]
    SetTooSmall(usize),
    #[error("U+{0:04X} is not a Unicode scalar value")]
    InvalidScalar(u32),
    #[error("not enough non-excluded codepoints for base {requested} (only {available} available)")]
    SetExhausted { requested: u64, available: u64 },
    #[error("cannot derive a base from empty text")]
    EmptyText,
    #[error("bad digit set spec {spec:?}: {reason}")]
    BadSpec { spec: String, reason: String },
}

/// The built-in digit inventories.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// `0`-`9`, `A`-`F`.
    HexUpper,
    /// `0`-`9`, `a`-`z`.
    Base36,
    /// `0`-`9`, `a`-`z`, then space as the last symbol (value 36).
    Base37,
    /// `0`-`9`.
    Decimal,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::HexUpper => "hexUpper",
            Preset::Base36 => "base36",
            Preset::Base37 => "base37",
            Preset::Decimal => "decimal",
        }
    }

    pub fn from_name(name: &str) -> Option<Preset> {
        match name {
            "hexUpper" => Some(Preset::HexUpper),
            "base36" => Some(Preset::Base36),
            "base37" => Some(Preset::Base37),
            "decimal" => Some(Preset::Decimal),
            _ => None,
        }
    }

    fn alphabet(self) -> String {
        const B36: &str = "0123456789abcdefghijklmnopqrstuvwxyz";
        match self {
            Preset::HexUpper => "0123456789ABCDEF".to_string(),
            Preset::Base36 => B36.to_string(),
            Preset::Base37 => format!("{B36} "),
            Preset::Decimal => "0123456789".to_string(),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How a digit set was constructed. Carried for spec-string serialization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OriginTag {
    Explicit,
    UnicodeRange(u32),
    Preset(Preset),
    Permuted { seed: u64, parent: Box<OriginTag> },
}

/// Which codepoints are skipped when building a Unicode-rank set.
///
/// Surrogates are always excluded; they are not scalar values. The default
/// policy additionally drops C0/C1 controls, noncharacters, and the bidi
/// control characters that scramble terminal output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExclusionPolicy {
    pub exclude_c0_c1_controls: bool,
    pub exclude_noncharacters: bool,
    pub exclude_bidi_controls: bool,
    pub extra_exclusions: BTreeSet<u32>,
}

impl Default for ExclusionPolicy {
    fn default() -> Self {
        ExclusionPolicy {
            exclude_c0_c1_controls: true,
            exclude_noncharacters: true,
            exclude_bidi_controls: true,
            extra_exclusions: BTreeSet::new(),
        }
    }
}

impl ExclusionPolicy {
    /// Excludes nothing beyond the surrogate range.
    pub fn surrogates_only() -> Self {
        ExclusionPolicy {
            exclude_c0_c1_controls: false,
            exclude_noncharacters: false,
            exclude_bidi_controls: false,
            extra_exclusions: BTreeSet::new(),
        }
    }

    pub fn with_extra_exclusions<I: IntoIterator<Item = u32>>(mut self, extra: I) -> Self {
        self.extra_exclusions.extend(extra);
        self
    }

    /// True when `cp` is skipped while ranking codepoints.
    pub fn excludes(&self, cp: u32) -> bool {
        if (0xD800..=0xDFFF).contains(&cp) {
            return true;
        }
        if self.exclude_c0_c1_controls && (cp <= 0x1F || (0x7F..=0x9F).contains(&cp)) {
            return true;
        }
        if self.exclude_noncharacters
            && ((0xFDD0..=0xFDEF).contains(&cp) || matches!(cp & 0xFFFF, 0xFFFE | 0xFFFF))
        {
            return true;
        }
        if self.exclude_bidi_controls
            && matches!(cp, 0x200E | 0x200F | 0x202A..=0x202E | 0x2066..=0x2069)
        {
            return true;
        }
        self.extra_exclusions.contains(&cp)
    }
}

/// An ordered, duplicate-free sequence of codepoints. The digit at index `i`
/// has value `i`; the base equals the inventory size.
///
/// Immutable after construction; cheap to share across threads.
#[derive(Debug, Clone)]
pub struct DigitSet {
    codepoints: Vec<char>,
    values: HashMap<char, u32>,
    origin: OriginTag,
}

impl PartialEq for DigitSet {
    fn eq(&self, other: &Self) -> bool {
        self.codepoints == other.codepoints
    }
}

impl Eq for DigitSet {}

impl DigitSet {
    fn build(codepoints: Vec<char>, origin: OriginTag) -> Result<Self, DigitSetError> {
        if codepoints.len() < 2 {
            return Err(DigitSetError::SetTooSmall(codepoints.len()));
        }
        let mut values = HashMap::with_capacity(codepoints.len());
        for (i, &c) in codepoints.iter().enumerate() {
            if values.insert(c, i as u32).is_some() {
                return Err(DigitSetError::DuplicateDigit {
                    codepoint: c,
                    index: i,
                });
            }
        }
        Ok(DigitSet {
            codepoints,
            values,
            origin,
        })
    }

    /// Builds a set from an explicit ordered alphabet.
    pub fn from_alphabet(alphabet: &str) -> Result<Self, DigitSetError> {
        Self::build(alphabet.chars().collect(), OriginTag::Explicit)
    }

    /// Builds a set from raw codepoint numbers, rejecting surrogates.
    pub fn from_codepoints(codepoints: &[u32]) -> Result<Self, DigitSetError> {
        let chars = codepoints
            .iter()
            .map(|&cp| char::from_u32(cp).ok_or(DigitSetError::InvalidScalar(cp)))
            .collect::<Result<Vec<_>, _>>()?;
        Self::build(chars, OriginTag::Explicit)
    }

    /// Takes the first `base` scalar values, in ascending codepoint order,
    /// that survive `policy`. Excluding a codepoint shifts every later
    /// survivor's value down by one.
    pub fn from_unicode_range(base: u32, policy: &ExclusionPolicy) -> Result<Self, DigitSetError> {
        if base < 2 {
            return Err(DigitSetError::SetTooSmall(base as usize));
        }
        let mut codepoints = Vec::with_capacity(base as usize);
        for cp in 0..CODEPOINT_LIMIT {
            if policy.excludes(cp) {
                continue;
            }
            // Non-excluded codepoints are scalar values: surrogates are
            // always excluded.
            codepoints.push(char::from_u32(cp).expect("surrogates are excluded"));
            if codepoints.len() == base as usize {
                return Self::build(codepoints, OriginTag::UnicodeRange(base));
            }
        }
        Err(DigitSetError::SetExhausted {
            requested: base as u64,
            available: codepoints.len() as u64,
        })
    }

    pub fn preset(preset: Preset) -> Self {
        let alphabet: Vec<char> = preset.alphabet().chars().collect();
        Self::build(alphabet, OriginTag::Preset(preset)).expect("presets are valid")
    }

    /// Shuffles the inventory with Fisher-Yates driven by splitmix64.
    ///
    /// The algorithm is pinned so that both ends of a channel derive the same
    /// order from the same seed: iterate `i` from `base - 1` down to `1`,
    /// swap index `i` with `next_u64() % (i + 1)`.
    pub fn permute(&self, seed: u64) -> Self {
        let mut codepoints = self.codepoints.clone();
        let mut rng = SplitMix64::new(seed);
        for i in (1..codepoints.len()).rev() {
            let j = (rng.next_u64() % (i as u64 + 1)) as usize;
            codepoints.swap(i, j);
        }
        let origin = OriginTag::Permuted {
            seed,
            parent: Box::new(self.origin.clone()),
        };
        Self::build(codepoints, origin).expect("permutation preserves membership")
    }

    pub fn base(&self) -> u32 {
        self.codepoints.len() as u32
    }

    /// The numeric value of a member codepoint.
    pub fn value_of(&self, c: char) -> Option<u32> {
        self.values.get(&c).copied()
    }

    /// The codepoint carrying value `v`.
    pub fn char_of(&self, v: u32) -> Option<char> {
        self.codepoints.get(v as usize).copied()
    }

    /// The value-0 digit, used for left padding.
    pub fn zero_digit(&self) -> char {
        self.codepoints[0]
    }

    pub fn contains(&self, c: char) -> bool {
        self.values.contains_key(&c)
    }

    pub fn codepoints(&self) -> &[char] {
        &self.codepoints
    }

    pub fn origin(&self) -> &OriginTag {
        &self.origin
    }

    /// Serializes this set as a spec string: `u<N>` for default-policy
    /// Unicode ranges, `p:<name>` for presets, `a:<hex,...>` for explicit
    /// alphabets, with a `~perm:<seed>` suffix for one level of permutation.
    /// Sets that the grammar cannot express fall back to the explicit form.
    pub fn to_spec(&self) -> String {
        fn core_spec(origin: &OriginTag, codepoints: &[char]) -> Option<String> {
            match origin {
                OriginTag::UnicodeRange(n) => Some(format!("u{n}")),
                OriginTag::Preset(p) => Some(format!("p:{}", p.name())),
                OriginTag::Explicit => Some(explicit_spec(codepoints)),
                OriginTag::Permuted { .. } => None,
            }
        }
        fn explicit_spec(codepoints: &[char]) -> String {
            let list: Vec<String> = codepoints.iter().map(|c| format!("{:X}", *c as u32)).collect();
            format!("a:{}", list.join(","))
        }
        match &self.origin {
            OriginTag::Permuted { seed, parent } => {
                // The parent inventory is recovered by sorting permuted
                // codepoints back into their original order, which only
                // works for origins with a canonical order.
                match parent.as_ref() {
                    OriginTag::UnicodeRange(n) => format!("u{n}~perm:{seed}"),
                    OriginTag::Preset(p) => format!("p:{}~perm:{seed}", p.name()),
                    _ => explicit_spec(&self.codepoints),
                }
            }
            other => core_spec(other, &self.codepoints).unwrap(),
        }
    }

    /// Parses the spec-string grammar emitted by [`DigitSet::to_spec`].
    /// Parsing is case-sensitive; hex codepoints use uppercase digits.
    pub fn from_spec(spec: &str) -> Result<Self, DigitSetError> {
        let bad = |reason: &str| DigitSetError::BadSpec {
            spec: spec.to_string(),
            reason: reason.to_string(),
        };
        let (core, seed) = match spec.split_once("~perm:") {
            Some((core, seed_str)) => {
                let seed: u64 = seed_str
                    .parse()
                    .map_err(|_| bad("permutation seed must be a decimal u64"))?;
                (core, Some(seed))
            }
            None => (spec, None),
        };
        let set = if let Some(n) = core.strip_prefix('u') {
            let base: u32 = n.parse().map_err(|_| bad("base after 'u' must be a decimal integer"))?;
            DigitSet::from_unicode_range(base, &ExclusionPolicy::default())?
        } else if let Some(name) = core.strip_prefix("p:") {
            let preset = Preset::from_name(name).ok_or_else(|| bad("unknown preset name"))?;
            DigitSet::preset(preset)
        } else if let Some(list) = core.strip_prefix("a:") {
            let codepoints = list
                .split(',')
                .map(parse_upper_hex)
                .collect::<Option<Vec<u32>>>()
                .ok_or_else(|| bad("explicit alphabet must be uppercase hex codepoints"))?;
            DigitSet::from_codepoints(&codepoints)?
        } else {
            return Err(bad("expected u<N>, p:<preset>, or a:<hex,...>"));
        };
        Ok(match seed {
            Some(seed) => set.permute(seed),
            None => set,
        })
    }
}

pub(crate) fn parse_upper_hex(s: &str) -> Option<u32> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit() || (b'A'..=b'F').contains(&b)) {
        return None;
    }
    u32::from_str_radix(s, 16).ok()
}

/// The smallest base whose default Unicode-rank set covers `text`:
/// the highest codepoint plus one, clamped up to 2.
pub fn minimal_source_base(text: &str) -> Result<u32, DigitSetError> {
    let max = text
        .chars()
        .map(|c| c as u32)
        .max()
        .ok_or(DigitSetError::EmptyText)?;
    Ok((max + 1).max(2))
}

/// splitmix64, as specified for the permutation step. The constants are the
/// reference ones; output must be bit-exact across implementations.
pub(crate) struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub(crate) fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub(crate) fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}
