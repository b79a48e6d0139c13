//! The encode/decode pipeline: escape newlines, pad, chunk, evaluate each
//! chunk over the source set, apply addends and key hiding, render over the
//! target set, and assemble the ciphertext document — plus the exact inverse.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::digitset::{
    minimal_source_base, parse_upper_hex, DigitSet, DigitSetError, ExclusionPolicy, Preset,
};
use crate::numeric::{evaluate_digits, place_length, render_digits, Natural, NumericError};
use crate::sequences::{Builtin, Integer, SequenceError, SequenceKey, SequenceProvider, Source};

#[derive(Debug, Error)]
pub enum CodecError {
    #[error("cannot encode empty text")]
    EmptyText,
    #[error("escape sequence already occurs in the text")]
    EscapeCollision,
    #[error("separator {0:?} is a digit of the target set")]
    SeparatorInTargetSet(char),
    #[error("pad codepoint {0:?} is not a digit of the source set")]
    PadNotInSourceSet(char),
    #[error("pad codepoint {0:?} occurs in the final chunk; decoding would strip it")]
    PadInFinalChunk(char),
    #[error(
        "the final chunk starts with the value-0 digit; without padding its length cannot be \
         recovered (enable padding or reshape the text)"
    )]
    AmbiguousFinalChunk,
    #[error("addend at chunk {index} drives the value below zero")]
    NegativeValue { index: usize },
    #[error("chunk {index} decodes to a value too large for its planned size — wrong base or config?")]
    ChunkOverflow { index: usize },
    #[error("chunk {index} needs {width} digits but the fixed-width frame allows {max}")]
    ChunkWidthExceeded { index: usize, width: u64, max: u64 },
    #[error("the chunk plan ran out of sizes at chunk {index}")]
    PlanExhausted { index: usize },
    #[error("chunk {index} has invalid planned size {size} (sizes must be at least 1)")]
    BadChunkSize { index: usize, size: Integer },
    #[error("addend list must not be empty")]
    EmptyAddends,
    #[error("invalid configuration: {0}")]
    BadConfig(String),
    #[error("invalid header: {0}")]
    BadHeader(String),
    #[error("invalid ciphertext body: {0}")]
    BadBody(String),
    #[error("key affix mismatch: expected {expected}, found {found:?}")]
    KeyMismatch { expected: u32, found: String },
    #[error("unsupported character {0:?} in word mode")]
    UnsupportedChar(char),
    #[error("an auto source set cannot be used for decoding; supply the resolved set")]
    SourceAutoAtDecode,
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Set(#[from] DigitSetError),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
}

/// How plaintext is sliced before conversion.
#[derive(Debug, Clone, PartialEq)]
pub enum ChunkPlan {
    /// Every chunk has `k` characters (the last may be shorter).
    Fixed(usize),
    /// Chunk lengths are the provider's terms, consumed in order. Explicit
    /// lists cycle; builtin and OEIS streams do not.
    Sequence(SequenceProvider),
}

impl ChunkPlan {
    pub fn fixed(k: usize) -> Self {
        ChunkPlan::Fixed(k)
    }

    pub fn sequence(provider: SequenceProvider) -> Self {
        ChunkPlan::Sequence(provider)
    }

    /// An explicit, cycling list of chunk sizes.
    pub fn list(sizes: Vec<i64>) -> Self {
        ChunkPlan::Sequence(SequenceProvider::explicit(sizes))
    }

    fn sizes(&self) -> PlanSizes<'_> {
        match self {
            ChunkPlan::Fixed(k) => PlanSizes::Fixed(*k),
            ChunkPlan::Sequence(p) => PlanSizes::Seq(p.iter()),
        }
    }

    /// The `chunk=` field of the header grammar: `fixed:<k>`, `seq:<KEY>`,
    /// or `list:<csv>`.
    pub fn header_value(&self) -> String {
        match self {
            ChunkPlan::Fixed(k) => format!("fixed:{k}"),
            ChunkPlan::Sequence(p) => match p.source() {
                Source::Explicit => format!("list:{}", p.spec_string()),
                _ => format!("seq:{}", p.spec_string()),
            },
        }
    }
}

enum PlanSizes<'a> {
    Fixed(usize),
    Seq(crate::sequences::Terms<'a>),
}

impl PlanSizes<'_> {
    fn next_size(&mut self, index: usize) -> Result<usize, CodecError> {
        match self {
            PlanSizes::Fixed(k) => Ok(*k),
            PlanSizes::Seq(terms) => {
                let term = terms.next().ok_or(CodecError::PlanExhausted { index })?;
                if term < Integer::from(1) {
                    return Err(CodecError::BadChunkSize { index, size: term });
                }
                term.to_usize()
                    .ok_or(CodecError::BadChunkSize { index, size: term })
            }
        }
    }
}

/// A chunk plan as written in a header or on a command line. OEIS-keyed
/// plans need a fetch before they become usable.
#[derive(Debug, Clone, PartialEq)]
pub enum PlanSpec {
    Resolved(ChunkPlan),
    NeedsOeis(SequenceKey),
}

/// Parses the `chunk=` grammar shared by headers and CLI flags.
pub fn parse_plan_spec(s: &str) -> Result<PlanSpec, CodecError> {
    if let Some(k) = s.strip_prefix("fixed:") {
        let k: usize = k
            .parse()
            .map_err(|_| CodecError::BadHeader(format!("bad fixed chunk size {k:?}")))?;
        return Ok(PlanSpec::Resolved(ChunkPlan::fixed(k)));
    }
    if let Some(csv) = s.strip_prefix("list:") {
        let sizes = csv
            .split(',')
            .map(|t| t.parse::<i64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| CodecError::BadHeader(format!("bad size list {csv:?}")))?;
        return Ok(PlanSpec::Resolved(ChunkPlan::list(sizes)));
    }
    if let Some(key) = s.strip_prefix("seq:") {
        // Builtin names win; anything else must parse as an OEIS key.
        if let Some(builtin) = Builtin::parse(key) {
            return Ok(PlanSpec::Resolved(ChunkPlan::sequence(SequenceProvider::builtin(builtin))));
        }
        return Ok(PlanSpec::NeedsOeis(SequenceKey::parse(key)?));
    }
    Err(CodecError::BadHeader(format!("unrecognized chunk plan {s:?}")))
}

/// The source set, either given or derived from the text at encode time as
/// the unicode-rank set of the minimal covering base.
#[derive(Debug, Clone, PartialEq)]
pub enum SourceSpec {
    Auto,
    Set(DigitSet),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeaderMode {
    /// No header: only a receiver with the matching config can decode.
    Headless,
    /// Prepend a `BNC1;...` line describing everything but the key hiding.
    SelfDescribing,
}

/// The key-transmission tricks: hide the sequence key in the ciphertext
/// itself. Both ends must still agree on the placement out of band.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeyHiding {
    None,
    /// The key number leads the body as an extra separator-joined segment.
    Prefix(u32),
    /// The key number trails the body.
    Suffix(u32),
    /// The key number is added to the first chunk's value.
    AddToFirst(u32),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CodecConfig {
    pub(crate) source: SourceSpec,
    pub(crate) target: DigitSet,
    pub(crate) plan: ChunkPlan,
    pub(crate) separator: Option<char>,
    pub(crate) pad: Option<char>,
    pub(crate) addends: Option<Vec<Integer>>,
    pub(crate) escape: Option<String>,
    pub(crate) header_mode: HeaderMode,
    pub(crate) key_hiding: KeyHiding,
}

impl CodecConfig {
    pub fn builder() -> CodecConfigBuilder {
        CodecConfigBuilder::default()
    }

    pub fn source(&self) -> &SourceSpec {
        &self.source
    }
    pub fn target(&self) -> &DigitSet {
        &self.target
    }
    pub fn plan(&self) -> &ChunkPlan {
        &self.plan
    }
    pub fn separator(&self) -> Option<char> {
        self.separator
    }
    pub fn pad(&self) -> Option<char> {
        self.pad
    }
    pub fn addends(&self) -> Option<&[Integer]> {
        self.addends.as_deref()
    }
    pub fn escape(&self) -> Option<&str> {
        self.escape.as_deref()
    }
    pub fn header_mode(&self) -> HeaderMode {
        self.header_mode
    }
    pub fn key_hiding(&self) -> KeyHiding {
        self.key_hiding
    }
}

pub struct CodecConfigBuilder {
    source: SourceSpec,
    target: Option<DigitSet>,
    plan: Option<ChunkPlan>,
    separator: Option<char>,
    pad: Option<char>,
    addends: Option<Vec<Integer>>,
    escape: Option<String>,
    header_mode: HeaderMode,
    key_hiding: KeyHiding,
}

impl Default for CodecConfigBuilder {
    fn default() -> Self {
        CodecConfigBuilder {
            source: SourceSpec::Auto,
            target: None,
            plan: None,
            // Hyphen-separated chunks by default; call `no_separator`
            // for dense fixed-width output.
            separator: Some('-'),
            pad: None,
            addends: None,
            escape: None,
            header_mode: HeaderMode::Headless,
            key_hiding: KeyHiding::None,
        }
    }
}

impl CodecConfigBuilder {
    pub fn source(mut self, set: DigitSet) -> Self {
        self.source = SourceSpec::Set(set);
        self
    }

    pub fn source_spec(mut self, spec: SourceSpec) -> Self {
        self.source = spec;
        self
    }

    pub fn source_auto(mut self) -> Self {
        self.source = SourceSpec::Auto;
        self
    }

    pub fn target(mut self, set: DigitSet) -> Self {
        self.target = Some(set);
        self
    }

    pub fn plan(mut self, plan: ChunkPlan) -> Self {
        self.plan = Some(plan);
        self
    }

    pub fn separator(mut self, sep: char) -> Self {
        self.separator = Some(sep);
        self
    }

    /// Separator-less fixed-width mode: every chunk is rendered at the widest
    /// width its planned size can need, and the body is raw concatenation.
    pub fn no_separator(mut self) -> Self {
        self.separator = None;
        self
    }

    pub fn pad(mut self, pad: char) -> Self {
        self.pad = Some(pad);
        self
    }

    pub fn addends<I>(mut self, addends: I) -> Self
    where
        I: IntoIterator,
        I::Item: Into<Integer>,
    {
        self.addends = Some(addends.into_iter().map(Into::into).collect());
        self
    }

    pub fn escape(mut self, escape: impl Into<String>) -> Self {
        self.escape = Some(escape.into());
        self
    }

    pub fn header_mode(mut self, mode: HeaderMode) -> Self {
        self.header_mode = mode;
        self
    }

    pub fn self_describing(mut self) -> Self {
        self.header_mode = HeaderMode::SelfDescribing;
        self
    }

    pub fn key_hiding(mut self, key_hiding: KeyHiding) -> Self {
        self.key_hiding = key_hiding;
        self
    }

    pub fn build(self) -> Result<CodecConfig, CodecError> {
        let target = self
            .target
            .ok_or_else(|| CodecError::BadConfig("a target digit set is required".into()))?;
        let plan = self
            .plan
            .ok_or_else(|| CodecError::BadConfig("a chunk plan is required".into()))?;
        if let ChunkPlan::Fixed(k) = &plan {
            if *k < 1 {
                return Err(CodecError::BadChunkSize { index: 0, size: Integer::from(*k as u64) });
            }
        }
        if let Some(sep) = self.separator {
            if target.contains(sep) {
                return Err(CodecError::SeparatorInTargetSet(sep));
            }
        }
        if let (Some(pad), SourceSpec::Set(src)) = (self.pad, &self.source) {
            if !src.contains(pad) {
                return Err(CodecError::PadNotInSourceSet(pad));
            }
        }
        if let Some(addends) = &self.addends {
            if addends.is_empty() {
                return Err(CodecError::EmptyAddends);
            }
        }
        if let Some(escape) = &self.escape {
            if escape.is_empty() {
                return Err(CodecError::BadConfig("escape sequence must not be empty".into()));
            }
        }
        if matches!(self.key_hiding, KeyHiding::Prefix(_) | KeyHiding::Suffix(_))
            && self.separator.is_none()
        {
            return Err(CodecError::BadConfig(
                "key prefix/suffix placement needs a separator to stay parseable".into(),
            ));
        }
        Ok(CodecConfig {
            source: self.source,
            target,
            plan,
            separator: self.separator,
            pad: self.pad,
            addends: self.addends,
            escape: self.escape,
            header_mode: self.header_mode,
            key_hiding: self.key_hiding,
        })
    }
}

/// A ciphertext: optional header line, the rendered chunks, and the key
/// affix when one is configured.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CipherDocument {
    header: Option<String>,
    chunks: Vec<String>,
    separator: Option<char>,
    key_prefix: Option<String>,
    key_suffix: Option<String>,
}

impl CipherDocument {
    pub fn header(&self) -> Option<&str> {
        self.header.as_deref()
    }

    pub fn chunks(&self) -> &[String] {
        &self.chunks
    }

    pub fn separator(&self) -> Option<char> {
        self.separator
    }

    /// The chunk sequence joined by the separator — no header, no key affix.
    pub fn body_string(&self) -> String {
        match self.separator {
            Some(sep) => self.chunks.join(&sep.to_string()),
            None => self.chunks.concat(),
        }
    }

    /// The full file form: header line (if any), then the body with key
    /// affixes. Ends without a trailing separator or newline.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        if let Some(header) = &self.header {
            out.push_str(header);
            out.push('\n');
        }
        match self.separator {
            Some(sep) => {
                let mut segments: Vec<&str> = Vec::new();
                if let Some(p) = &self.key_prefix {
                    segments.push(p);
                }
                segments.extend(self.chunks.iter().map(String::as_str));
                if let Some(s) = &self.key_suffix {
                    segments.push(s);
                }
                out.push_str(&segments.join(&sep.to_string()));
            }
            None => out.push_str(&self.chunks.concat()),
        }
        out
    }

    /// Splits serialized ciphertext back into a document under `config`:
    /// strips the header line, frames the body (separator split or
    /// fixed-width slicing), and verifies/removes the key affix.
    pub fn parse(text: &str, config: &CodecConfig) -> Result<Self, CodecError> {
        let (header, body) = match sniff_header(text) {
            Some((line, rest)) => (Some(line.to_string()), rest),
            None => (None, text),
        };
        let chunks = match config.separator {
            Some(sep) => {
                let mut segments: Vec<&str> =
                    if body.is_empty() { Vec::new() } else { body.split(sep).collect() };
                if let KeyHiding::Prefix(n) = config.key_hiding {
                    let found = if segments.is_empty() { "" } else { segments.remove(0) };
                    if found != n.to_string() {
                        return Err(CodecError::KeyMismatch { expected: n, found: found.into() });
                    }
                }
                if let KeyHiding::Suffix(n) = config.key_hiding {
                    let found = segments.pop().unwrap_or("");
                    if found != n.to_string() {
                        return Err(CodecError::KeyMismatch { expected: n, found: found.into() });
                    }
                }
                if segments.iter().any(|s| s.is_empty()) {
                    return Err(CodecError::BadBody("empty chunk between separators".into()));
                }
                segments.into_iter().map(String::from).collect()
            }
            None => {
                let src = match &config.source {
                    SourceSpec::Set(s) => s,
                    SourceSpec::Auto => return Err(CodecError::SourceAutoAtDecode),
                };
                let chars: Vec<char> = body.chars().collect();
                let mut widths = WidthTable::new(src.base(), config.target.base());
                let mut sizes = config.plan.sizes();
                let mut chunks = Vec::new();
                let mut pos = 0;
                while pos < chars.len() {
                    let k = sizes.next_size(chunks.len())?;
                    let width = widths.for_chunk_len(chunks.len(), k)? as usize;
                    if chars.len() - pos < width {
                        return Err(CodecError::BadBody(format!(
                            "body ends mid-chunk: chunk {} needs {} digits, {} left",
                            chunks.len(),
                            width,
                            chars.len() - pos
                        )));
                    }
                    chunks.push(chars[pos..pos + width].iter().collect());
                    pos += width;
                }
                chunks
            }
        };
        Ok(CipherDocument {
            header,
            chunks,
            separator: config.separator,
            key_prefix: match config.key_hiding {
                KeyHiding::Prefix(n) => Some(n.to_string()),
                _ => None,
            },
            key_suffix: match config.key_hiding {
                KeyHiding::Suffix(n) => Some(n.to_string()),
                _ => None,
            },
        })
    }
}

/// If `text` opens with a header line, returns `(header line, body)`.
pub fn sniff_header(text: &str) -> Option<(&str, &str)> {
    if !text.starts_with("BNC1;") {
        return None;
    }
    match text.find('\n') {
        Some(i) => Some((&text[..i], &text[i + 1..])),
        None => Some((text, "")),
    }
}

/// A parsed self-describing header. The chunk plan may still need an OEIS
/// fetch; everything else is fully resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct Header {
    pub source: DigitSet,
    pub target: DigitSet,
    pub plan: PlanSpec,
    pub separator: Option<char>,
    pub pad: Option<char>,
    pub addends: Option<Vec<Integer>>,
    pub escape: Option<String>,
}

impl Header {
    pub fn parse(line: &str) -> Result<Self, CodecError> {
        let bad = |msg: String| CodecError::BadHeader(msg);
        let mut fields = line.split(';');
        if fields.next() != Some("BNC1") {
            return Err(bad("missing BNC1 magic".into()));
        }
        let mut map: HashMap<&str, &str> = HashMap::new();
        for field in fields {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| bad(format!("field {field:?} is not key=value")))?;
            if map.insert(key, value).is_some() {
                return Err(bad(format!("duplicate field {key:?}")));
            }
        }
        let mut take = |key: &str| {
            map.remove(key)
                .ok_or_else(|| bad(format!("missing field {key:?}")))
        };
        let source = DigitSet::from_spec(take("src")?)?;
        let target = DigitSet::from_spec(take("dst")?)?;
        let plan = parse_plan_spec(take("chunk")?)?;
        let separator = parse_opt_codepoint(take("sep")?)?;
        let pad = parse_opt_codepoint(take("pad")?)?;
        let addends = match take("add")? {
            "none" => None,
            csv => Some(
                csv.split(',')
                    .map(|t| t.parse::<Integer>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| bad(format!("bad addend list {csv:?}")))?,
            ),
        };
        let escape = match take("esc")? {
            "none" => None,
            csv => Some(
                csv.split(',')
                    .map(|h| parse_upper_hex(h).and_then(char::from_u32))
                    .collect::<Option<String>>()
                    .ok_or_else(|| bad(format!("bad escape sequence {csv:?}")))?,
            ),
        };
        if let Some(stray) = map.keys().next() {
            return Err(bad(format!("unknown field {stray:?}")));
        }
        Ok(Header { source, target, plan, separator, pad, addends, escape })
    }

    /// The OEIS key this header's plan needs, if any.
    pub fn oeis_key(&self) -> Option<SequenceKey> {
        match self.plan {
            PlanSpec::NeedsOeis(key) => Some(key),
            PlanSpec::Resolved(_) => None,
        }
    }

    /// Builds the decode config described by this header. Key hiding is never
    /// written into headers, so it is supplied by the caller.
    pub fn to_config(&self, key_hiding: KeyHiding) -> Result<CodecConfig, CodecError> {
        match &self.plan {
            PlanSpec::Resolved(plan) => self.to_config_with_plan(plan.clone(), key_hiding),
            PlanSpec::NeedsOeis(key) => Err(CodecError::BadHeader(format!(
                "chunk plan {} must be fetched before decoding",
                key.canonical()
            ))),
        }
    }

    pub fn to_config_with_plan(
        &self,
        plan: ChunkPlan,
        key_hiding: KeyHiding,
    ) -> Result<CodecConfig, CodecError> {
        let mut builder = CodecConfig::builder()
            .source(self.source.clone())
            .target(self.target.clone())
            .plan(plan)
            .header_mode(HeaderMode::SelfDescribing)
            .key_hiding(key_hiding);
        builder = match self.separator {
            Some(sep) => builder.separator(sep),
            None => builder.no_separator(),
        };
        if let Some(pad) = self.pad {
            builder = builder.pad(pad);
        }
        if let Some(addends) = &self.addends {
            builder = builder.addends(addends.clone());
        }
        if let Some(escape) = &self.escape {
            builder = builder.escape(escape.clone());
        }
        builder.build()
    }
}

fn parse_opt_codepoint(s: &str) -> Result<Option<char>, CodecError> {
    if s == "none" {
        return Ok(None);
    }
    parse_upper_hex(s)
        .and_then(char::from_u32)
        .map(Some)
        .ok_or_else(|| CodecError::BadHeader(format!("bad codepoint {s:?}")))
}

fn emit_header(src: &DigitSet, config: &CodecConfig) -> String {
    let cp = |c: Option<char>| match c {
        Some(c) => format!("{:X}", c as u32),
        None => "none".to_string(),
    };
    let add = match &config.addends {
        Some(a) => a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
        None => "none".to_string(),
    };
    let esc = match &config.escape {
        Some(e) => e
            .chars()
            .map(|c| format!("{:X}", c as u32))
            .collect::<Vec<_>>()
            .join(","),
        None => "none".to_string(),
    };
    format!(
        "BNC1;src={};dst={};chunk={};sep={};pad={};add={};esc={}",
        src.to_spec(),
        config.target.to_spec(),
        config.plan.header_value(),
        cp(config.separator),
        cp(config.pad),
        add,
        esc
    )
}

/// Replaces every newline with `escape`. The escape sequence must not
/// already occur in the text, otherwise decoding could not tell them apart.
pub fn escape_newlines(text: &str, escape: &str) -> Result<String, CodecError> {
    if escape.is_empty() {
        return Err(CodecError::BadConfig("escape sequence must not be empty".into()));
    }
    if text.contains(escape) {
        return Err(CodecError::EscapeCollision);
    }
    Ok(text.replace('\n', escape))
}

/// The inverse of [`escape_newlines`].
pub fn unescape_newlines(text: &str, escape: &str) -> String {
    text.replace(escape, "\n")
}

/// Slices `text` according to the plan. Slice lengths follow the plan's
/// sizes in order; only the last slice may fall short.
pub fn chunk(text: &str, plan: &ChunkPlan) -> Result<Vec<String>, CodecError> {
    if text.is_empty() {
        return Err(CodecError::EmptyText);
    }
    Ok(chunk_boundaries(&text.chars().collect::<Vec<_>>(), plan)?
        .into_iter()
        .map(|(start, _, actual)| text_slice(text, start, actual))
        .collect())
}

fn text_slice(text: &str, start: usize, len: usize) -> String {
    text.chars().skip(start).take(len).collect()
}

/// `(start, planned, actual)` per chunk, in character positions.
fn chunk_boundaries(
    chars: &[char],
    plan: &ChunkPlan,
) -> Result<Vec<(usize, usize, usize)>, CodecError> {
    let mut sizes = plan.sizes();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < chars.len() {
        let planned = sizes.next_size(out.len())?;
        let actual = planned.min(chars.len() - pos);
        out.push((pos, planned, actual));
        pos += actual;
    }
    Ok(out)
}

/// Adds `addends[i mod len]` to each value. Fails if any sum is negative.
pub fn apply_addends(values: &[Natural], addends: &[Integer]) -> Result<Vec<Natural>, CodecError> {
    shift_values(values, addends, false)
}

/// The exact inverse of [`apply_addends`].
pub fn remove_addends(values: &[Natural], addends: &[Integer]) -> Result<Vec<Natural>, CodecError> {
    shift_values(values, addends, true)
}

fn shift_values(
    values: &[Natural],
    addends: &[Integer],
    invert: bool,
) -> Result<Vec<Natural>, CodecError> {
    if addends.is_empty() {
        return Err(CodecError::EmptyAddends);
    }
    values
        .iter()
        .enumerate()
        .map(|(index, v)| {
            let addend = &addends[index % addends.len()];
            let shifted = if invert {
                BigInt::from(v.clone()) - addend
            } else {
                BigInt::from(v.clone()) + addend
            };
            shifted
                .to_biguint()
                .ok_or(CodecError::NegativeValue { index })
        })
        .collect()
}

/// Caches the fixed-width frame width for each planned chunk length:
/// the widest rendering any value of that length can need.
struct WidthTable {
    src_base: u32,
    dst_base: u32,
    cache: HashMap<usize, u64>,
}

impl WidthTable {
    fn new(src_base: u32, dst_base: u32) -> Self {
        WidthTable { src_base, dst_base, cache: HashMap::new() }
    }

    fn for_chunk_len(&mut self, index: usize, k: usize) -> Result<u64, CodecError> {
        if let Some(&w) = self.cache.get(&k) {
            return Ok(w);
        }
        let exponent = u32::try_from(k).map_err(|_| CodecError::BadChunkSize {
            index,
            size: Integer::from(k as u64),
        })?;
        let max = BigUint::from(self.src_base).pow(exponent) - 1u32;
        let width = place_length(&max, self.dst_base as u64).expect("base >= 2");
        self.cache.insert(k, width);
        Ok(width)
    }
}

fn resolve_source(config: &CodecConfig, escaped_text: &str) -> Result<DigitSet, CodecError> {
    match &config.source {
        SourceSpec::Set(set) => Ok(set.clone()),
        SourceSpec::Auto => {
            let mut base =
                if escaped_text.is_empty() { 2 } else { minimal_source_base(escaped_text)? };
            if let Some(pad) = config.pad {
                base = base.max(pad as u32 + 1);
            }
            Ok(DigitSet::from_unicode_range(base, &ExclusionPolicy::default())?)
        }
    }
}

/// The source set `encode` will use for this text: the configured set, or
/// the auto-resolved codepoint-rank set (computed after newline escaping,
/// widened to cover the pad if one is configured).
pub fn resolved_source(text: &str, config: &CodecConfig) -> Result<DigitSet, CodecError> {
    let escaped = match &config.escape {
        Some(esc) => escape_newlines(text, esc)?,
        None => text.to_string(),
    };
    resolve_source(config, &escaped)
}

/// Runs the full pipeline. Empty text yields an empty-bodied document.
pub fn encode(text: &str, config: &CodecConfig) -> Result<CipherDocument, CodecError> {
    let escaped = match &config.escape {
        Some(esc) => escape_newlines(text, esc)?,
        None => text.to_string(),
    };
    let src = resolve_source(config, &escaped)?;
    if let Some(pad) = config.pad {
        if !src.contains(pad) {
            return Err(CodecError::PadNotInSourceSet(pad));
        }
    }

    let chars: Vec<char> = escaped.chars().collect();
    let boundaries = chunk_boundaries(&chars, &config.plan)?;
    let mut slices: Vec<String> = boundaries
        .iter()
        .map(|&(start, _, actual)| chars[start..start + actual].iter().collect())
        .collect();

    if let Some(&(_, planned, actual)) = boundaries.last() {
        let last = slices.last_mut().expect("non-empty boundaries");
        match config.pad {
            Some(pad) => {
                if last.contains(pad) {
                    return Err(CodecError::PadInFinalChunk(pad));
                }
                for _ in actual..planned {
                    last.push(pad);
                }
            }
            None => {
                let first = last.chars().next().expect("chunks are non-empty");
                if last.chars().count() >= 2 && src.value_of(first) == Some(0) {
                    return Err(CodecError::AmbiguousFinalChunk);
                }
            }
        }
    }

    let mut values: Vec<Natural> = slices
        .iter()
        .map(|s| evaluate_digits(s, &src))
        .collect::<Result<_, _>>()?;
    if let Some(addends) = &config.addends {
        values = apply_addends(&values, addends)?;
    }
    if let KeyHiding::AddToFirst(n) = config.key_hiding {
        if let Some(first) = values.first_mut() {
            *first += n;
        }
    }

    let chunks: Vec<String> = match config.separator {
        Some(_) => values.iter().map(|v| render_digits(v, &config.target, 0)).collect(),
        None => {
            let mut widths = WidthTable::new(src.base(), config.target.base());
            let mut rendered = Vec::with_capacity(values.len());
            for (i, value) in values.iter().enumerate() {
                let width = widths.for_chunk_len(i, boundaries[i].1)?;
                let need = place_length(value, config.target.base() as u64).expect("base >= 2");
                if need > width {
                    return Err(CodecError::ChunkWidthExceeded { index: i, width: need, max: width });
                }
                rendered.push(render_digits(value, &config.target, width as usize));
            }
            rendered
        }
    };

    let header = match config.header_mode {
        HeaderMode::SelfDescribing => Some(emit_header(&src, config)),
        HeaderMode::Headless => None,
    };
    Ok(CipherDocument {
        header,
        chunks,
        separator: config.separator,
        key_prefix: match config.key_hiding {
            KeyHiding::Prefix(n) => Some(n.to_string()),
            _ => None,
        },
        key_suffix: match config.key_hiding {
            KeyHiding::Suffix(n) => Some(n.to_string()),
            _ => None,
        },
    })
}

/// Inverts [`encode`]: evaluates each cipher chunk over the target set,
/// removes key and addends, and re-renders over the source set at the
/// original widths.
pub fn decode(doc: &CipherDocument, config: &CodecConfig) -> Result<String, CodecError> {
    let src = match &config.source {
        SourceSpec::Set(set) => set,
        SourceSpec::Auto => return Err(CodecError::SourceAutoAtDecode),
    };

    let mut values: Vec<Natural> = doc
        .chunks
        .iter()
        .map(|c| evaluate_digits(c, &config.target))
        .collect::<Result<_, _>>()?;
    if let KeyHiding::AddToFirst(n) = config.key_hiding {
        if let Some(first) = values.first_mut() {
            let shifted = BigInt::from(first.clone()) - n;
            *first = shifted
                .to_biguint()
                .ok_or(CodecError::NegativeValue { index: 0 })?;
        }
    }
    if let Some(addends) = &config.addends {
        values = remove_addends(&values, addends)?;
    }

    let src_base = BigUint::from(src.base());
    let mut sizes = config.plan.sizes();
    let mut restored = String::new();
    let last = values.len().checked_sub(1);
    for (i, value) in values.iter().enumerate() {
        let planned = sizes.next_size(i)?;
        let exponent = u32::try_from(planned).map_err(|_| CodecError::BadChunkSize {
            index: i,
            size: Integer::from(planned as u64),
        })?;
        if *value >= src_base.pow(exponent) {
            return Err(CodecError::ChunkOverflow { index: i });
        }
        if Some(i) == last {
            match config.pad {
                Some(pad) => {
                    let full = render_digits(value, src, planned);
                    restored.push_str(full.trim_end_matches(pad));
                }
                // Without padding the final chunk is the shortest rendering;
                // encode refuses inputs where that would be ambiguous.
                None => restored.push_str(&render_digits(value, src, 0)),
            }
        } else {
            restored.push_str(&render_digits(value, src, planned));
        }
    }

    Ok(match &config.escape {
        Some(esc) => unescape_newlines(&restored, esc),
        None => restored,
    })
}

/// Decodes serialized ciphertext. A self-describing header, when present,
/// overrides everything in `config` except the key hiding; headless text is
/// decoded under `config` as given.
pub fn decode_text(text: &str, config: &CodecConfig) -> Result<String, CodecError> {
    let effective = match sniff_header(text) {
        Some((line, _)) => Header::parse(line)?.to_config(config.key_hiding)?,
        None => config.clone(),
    };
    let doc = CipherDocument::parse(text, &effective)?;
    decode(&doc, &effective)
}

/// The word-by-word demonstration mode: each whitespace-separated word is
/// evaluated over base36 after lowercasing, words are joined by hyphens, a
/// word-initial capital becomes an `X` prefix, and a trailing period is
/// carried through verbatim.
pub fn encode_fig2(sentence: &str) -> Result<String, CodecError> {
    let base36 = DigitSet::preset(Preset::Base36);
    let mut out: Vec<String> = Vec::new();
    for word in sentence.split_whitespace() {
        let (stem, dotted) = match word.strip_suffix('.') {
            Some(stem) => (stem, true),
            None => (word, false),
        };
        if stem.is_empty() {
            return Err(CodecError::UnsupportedChar('.'));
        }
        for (i, c) in stem.chars().enumerate() {
            let supported =
                c.is_ascii_digit() || c.is_ascii_lowercase() || (i == 0 && c.is_ascii_uppercase());
            if !supported {
                return Err(CodecError::UnsupportedChar(c));
            }
        }
        let capital = stem.chars().next().is_some_and(|c| c.is_ascii_uppercase());
        let value = evaluate_digits(&stem.to_ascii_lowercase(), &base36)?;
        let mut rendered = String::new();
        if capital {
            rendered.push('X');
        }
        rendered.push_str(&value.to_string());
        if dotted {
            rendered.push('.');
        }
        out.push(rendered);
    }
    Ok(out.join("-"))
}
