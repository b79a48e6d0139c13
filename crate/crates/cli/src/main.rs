//! `bnc` — re-encode text between positional number systems over arbitrary
//! ordered digit sets, plus the companion analyses (length tables, size
//! reports, digit histograms) and a brute-force attack on numeric bodies.
//!
//! Flag values use the same grammar as self-describing document headers:
//! digit sets are written as specs (`u1000`, `p:base37`, `a:41,42,43`,
//! `u50~perm:7`), chunk plans as `fixed:K`, `list:CSV` or `seq:KEY`, and
//! codepoint-valued flags (`--sep`, `--pad`, `--esc`) as uppercase hex or
//! `none`.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bnc::analysis::{compression_report, digit_frequency, length_table, tokens_per_sentence};
use bnc::attack::{brute_force, report, AttackError};
use bnc::codec::{
    decode, encode, encode_fig2, parse_plan_spec, resolved_source, sniff_header, ChunkPlan,
    CipherDocument, CodecConfig, CodecError, Header, KeyHiding, PlanSpec,
};
use bnc::digitset::{DigitSet, DigitSetError};
use bnc::numeric::NumericError;
use bnc::sequences::{Builtin, Integer, OeisClient, SequenceError, SequenceKey, SequenceProvider};

#[derive(Parser)]
#[command(
    name = "bnc",
    version,
    about = "Re-encode text between arbitrary-base digit sets",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode plaintext into a ciphertext document.
    Encode(CodecArgs),
    /// Decode a ciphertext document back to plaintext. Self-describing
    /// headers take precedence over flags (except key placement).
    Decode(CodecArgs),
    /// Brute-force a separator-joined numeric body across candidate bases.
    Attack(AttackArgs),
    /// Measurements: length tables, digit histograms, size reports.
    Analyze {
        #[command(subcommand)]
        what: AnalyzeCmd,
    },
    /// Integer sequences: builtins and OEIS b-files with a local cache.
    Seq {
        #[command(subcommand)]
        what: SeqCmd,
    },
    /// Digit-set inspection.
    Digitset {
        #[command(subcommand)]
        what: DigitsetCmd,
    },
}

#[derive(Args, Clone)]
struct CodecArgs {
    /// Source digit set spec, or `auto` to derive one from the text.
    #[arg(long)]
    src: Option<String>,
    /// Target digit set spec.
    #[arg(long)]
    dst: Option<String>,
    /// Chunk plan: `fixed:K`, `list:CSV`, or `seq:KEY`.
    #[arg(long)]
    chunk: Option<String>,
    /// Separator codepoint in hex, or `none` for fixed-width output.
    #[arg(long)]
    sep: Option<String>,
    /// Pad codepoint in hex, or `none`.
    #[arg(long)]
    pad: Option<String>,
    /// Comma-separated per-chunk addends, or `none`.
    #[arg(long)]
    add: Option<String>,
    /// Newline escape as comma-separated hex codepoints, or `none`.
    #[arg(long)]
    esc: Option<String>,
    /// Key placement: `none`, `prefix`, `suffix`, or `addToFirst`.
    #[arg(long = "key-place")]
    key_place: Option<String>,
    /// Key number used by --key-place.
    #[arg(long)]
    key: Option<u32>,
    /// Prepend a self-describing header line.
    #[arg(long = "self-describing")]
    self_describing: bool,
    /// Word mode: base-36 value per word, `X` marks a leading capital.
    #[arg(long)]
    fig2: bool,
    /// Config file with one `key=value` per line; flags override it.
    #[arg(long)]
    config: Option<String>,
    /// OEIS base URL override (mirrors, hermetic tests).
    #[arg(long = "base-url")]
    base_url: Option<String>,
    /// Input path, `-` for stdin.
    #[arg(short = 'i', long = "input", default_value = "-")]
    input: String,
    /// Output path, `-` for stdout.
    #[arg(short = 'o', long = "output", default_value = "-")]
    output: String,
}

#[derive(Args)]
struct AttackArgs {
    /// Separator codepoint between number segments, in hex.
    #[arg(long, default_value = "2D")]
    sep: String,
    /// Lowest base to try.
    #[arg(long = "min-base", default_value_t = 2)]
    min_base: u32,
    /// Highest base to try.
    #[arg(long = "max-base", default_value_t = 64)]
    max_base: u32,
    /// Keep only the top K candidates in the report.
    #[arg(long)]
    top: Option<usize>,
    /// Input path, `-` for stdin.
    #[arg(short = 'i', long = "input", default_value = "-")]
    input: String,
    /// Output path, `-` for stdout.
    #[arg(short = 'o', long = "output", default_value = "-")]
    output: String,
}

#[derive(Subcommand)]
enum AnalyzeCmd {
    /// CSV table: rendered lengths of powers of ten across bases.
    Lengths {
        /// Largest power of ten to include.
        #[arg(long = "max-power", default_value_t = 9)]
        max_power: u32,
        /// Bases to tabulate.
        #[arg(long, default_value = "2,10,16", value_delimiter = ',')]
        bases: Vec<u64>,
        /// Output path, `-` for stdout.
        #[arg(short = 'o', long = "output", default_value = "-")]
        output: String,
    },
    /// Digit histogram and chi-square of a ciphertext body.
    Freq {
        /// Digit set spec the body is written in.
        #[arg(long)]
        set: String,
        /// Separator codepoint to strip before counting, in hex, or `none`.
        #[arg(long, default_value = "none")]
        sep: String,
        /// Input path, `-` for stdin.
        #[arg(short = 'i', long = "input", default_value = "-")]
        input: String,
        /// Output path, `-` for stdout.
        #[arg(short = 'o', long = "output", default_value = "-")]
        output: String,
    },
    /// Character and byte counts of a plaintext next to its encoding.
    Compress(CodecArgs),
    /// Whitespace-token count per sentence of a plaintext.
    Tokens {
        /// Input path, `-` for stdin.
        #[arg(short = 'i', long = "input", default_value = "-")]
        input: String,
        /// Output path, `-` for stdout.
        #[arg(short = 'o', long = "output", default_value = "-")]
        output: String,
    },
}

#[derive(Subcommand)]
enum SeqCmd {
    /// Download an OEIS b-file (or reuse the cached copy) and print terms.
    Fetch {
        /// OEIS key, e.g. `A000040` or `40`.
        key: String,
        /// Number of leading terms to print.
        #[arg(long, default_value_t = 10)]
        count: usize,
        /// OEIS base URL override (mirrors, hermetic tests).
        #[arg(long = "base-url")]
        base_url: Option<String>,
        /// Output path, `-` for stdout.
        #[arg(short = 'o', long = "output", default_value = "-")]
        output: String,
    },
    /// Print terms of a builtin (`primes`, `naturals`, `fibonacci`,
    /// `constant:K`) or of an OEIS sequence.
    Show {
        /// Builtin name or OEIS key.
        spec: String,
        /// Number of leading terms to print.
        #[arg(long, default_value_t = 10)]
        count: usize,
        /// OEIS base URL override (mirrors, hermetic tests).
        #[arg(long = "base-url")]
        base_url: Option<String>,
        /// Output path, `-` for stdout.
        #[arg(short = 'o', long = "output", default_value = "-")]
        output: String,
    },
}

#[derive(Subcommand)]
enum DigitsetCmd {
    /// Print a set's size, spec form, and leading digit assignments.
    Show {
        /// Digit set spec, e.g. `u1000`, `p:base37`, `a:30,31`, `u50~perm:7`.
        spec: String,
        /// Number of leading digits to list.
        #[arg(long, default_value_t = 32)]
        count: u32,
        /// Output path, `-` for stdout.
        #[arg(short = 'o', long = "output", default_value = "-")]
        output: String,
    },
}

// ---------------------------------------------------------------------------
// Errors and exit codes: 0 success, 1 domain failure, 2 usage.
// ---------------------------------------------------------------------------

#[derive(Debug)]
enum CliError {
    Usage(String),
    Input(String),
    Codec(CodecError),
    DigitSet(DigitSetError),
    Numeric(NumericError),
    Sequence(SequenceError),
    Attack(AttackError),
    Io(io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Input(msg) => write!(f, "input error: {msg}"),
            CliError::Codec(e) => write!(f, "codec error: {e}"),
            CliError::DigitSet(e) => write!(f, "digit set error: {e}"),
            CliError::Numeric(e) => write!(f, "numeric error: {e}"),
            CliError::Sequence(e) => write!(f, "sequence error: {e}"),
            CliError::Attack(e) => write!(f, "attack error: {e}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

macro_rules! from_error {
    ($variant:ident, $ty:ty) => {
        impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::$variant(e)
            }
        }
    };
}
from_error!(Codec, CodecError);
from_error!(DigitSet, DigitSetError);
from_error!(Numeric, NumericError);
from_error!(Sequence, SequenceError);
from_error!(Attack, AttackError);
from_error!(Io, io::Error);

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bnc: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Encode(args) => cmd_encode(args),
        Command::Decode(args) => cmd_decode(args),
        Command::Attack(args) => cmd_attack(args),
        Command::Analyze { what } => cmd_analyze(what),
        Command::Seq { what } => cmd_seq(what),
        Command::Digitset { what } => cmd_digitset(what),
    }
}

// ---------------------------------------------------------------------------
// Flag merging: config file values fill in flags that were not given.
// ---------------------------------------------------------------------------

/// The flag set after merging in the config file and applying defaults.
struct Merged {
    src: String,
    dst: Option<String>,
    chunk: Option<String>,
    sep: String,
    pad: String,
    add: String,
    esc: String,
    key_place: String,
    key: Option<u32>,
    self_describing: bool,
    fig2: bool,
    base_url: Option<String>,
}

fn load_config_file(path: &str) -> Result<HashMap<String, String>, CliError> {
    let text = fs::read_to_string(path)?;
    let mut map = HashMap::new();
    for (index, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("{path}:{}: expected key=value", index + 1))
        })?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn merge(args: &CodecArgs) -> Result<Merged, CliError> {
    let file = match &args.config {
        Some(path) => load_config_file(path)?,
        None => HashMap::new(),
    };
    let pick = |flag: &Option<String>, key: &str| flag.clone().or_else(|| file.get(key).cloned());
    let pick_bool = |flag: bool, key: &str| -> Result<bool, CliError> {
        if flag {
            return Ok(true);
        }
        match file.get(key).map(String::as_str) {
            None => Ok(false),
            Some("true") => Ok(true),
            Some("false") => Ok(false),
            Some(other) => {
                Err(CliError::Usage(format!("config {key}={other:?} is not true or false")))
            }
        }
    };
    let key = match args.key {
        Some(k) => Some(k),
        None => match file.get("key") {
            Some(v) => Some(v.parse::<u32>().map_err(|_| {
                CliError::Usage(format!("config key={v:?} is not an unsigned integer"))
            })?),
            None => None,
        },
    };
    Ok(Merged {
        src: pick(&args.src, "src").unwrap_or_else(|| "auto".to_string()),
        dst: pick(&args.dst, "dst"),
        chunk: pick(&args.chunk, "chunk"),
        sep: pick(&args.sep, "sep").unwrap_or_else(|| "2D".to_string()),
        pad: pick(&args.pad, "pad").unwrap_or_else(|| "none".to_string()),
        add: pick(&args.add, "add").unwrap_or_else(|| "none".to_string()),
        esc: pick(&args.esc, "esc").unwrap_or_else(|| "none".to_string()),
        key_place: pick(&args.key_place, "key-place").unwrap_or_else(|| "none".to_string()),
        key,
        self_describing: pick_bool(args.self_describing, "self-describing")?,
        fig2: pick_bool(args.fig2, "fig2")?,
        base_url: pick(&args.base_url, "base-url"),
    })
}

fn parse_codepoint(value: &str, flag: &str) -> Result<char, CliError> {
    u32::from_str_radix(value, 16)
        .ok()
        .and_then(char::from_u32)
        .ok_or_else(|| CliError::Usage(format!("{flag} {value:?} is not a hex codepoint")))
}

fn parse_codepoint_or_none(value: &str, flag: &str) -> Result<Option<char>, CliError> {
    if value == "none" {
        return Ok(None);
    }
    parse_codepoint(value, flag).map(Some)
}

fn key_hiding(merged: &Merged) -> Result<KeyHiding, CliError> {
    let need_key = || {
        merged
            .key
            .ok_or_else(|| CliError::Usage("--key-place needs --key <number>".to_string()))
    };
    match merged.key_place.as_str() {
        "none" => {
            if merged.key.is_some() {
                return Err(CliError::Usage("--key needs --key-place".to_string()));
            }
            Ok(KeyHiding::None)
        }
        "prefix" => Ok(KeyHiding::Prefix(need_key()?)),
        "suffix" => Ok(KeyHiding::Suffix(need_key()?)),
        "addToFirst" => Ok(KeyHiding::AddToFirst(need_key()?)),
        other => Err(CliError::Usage(format!(
            "--key-place {other:?} is not one of none, prefix, suffix, addToFirst"
        ))),
    }
}

fn cache_dir() -> PathBuf {
    if let Ok(dir) = std::env::var("BNC_CACHE_DIR") {
        return PathBuf::from(dir);
    }
    if let Ok(home) = std::env::var("HOME") {
        return PathBuf::from(home).join(".cache").join("bnc");
    }
    std::env::temp_dir().join("bnc-cache")
}

fn oeis_client(base_url: Option<&str>) -> Result<OeisClient, CliError> {
    let dir = cache_dir();
    fs::create_dir_all(&dir)?;
    let mut client = OeisClient::new(dir);
    if let Some(url) = base_url {
        client = client.with_base_url(url);
    }
    Ok(client)
}

fn resolve_plan(merged: &Merged) -> Result<ChunkPlan, CliError> {
    let spec = merged
        .chunk
        .as_ref()
        .ok_or_else(|| CliError::Usage("--chunk is required".to_string()))?;
    match parse_plan_spec(spec)? {
        PlanSpec::Resolved(plan) => Ok(plan),
        PlanSpec::NeedsOeis(key) => {
            let provider = oeis_client(merged.base_url.as_deref())?.fetch(&key)?;
            Ok(ChunkPlan::sequence(provider))
        }
    }
}

fn build_config(merged: &Merged, plan: ChunkPlan) -> Result<CodecConfig, CliError> {
    let dst = merged
        .dst
        .as_ref()
        .ok_or_else(|| CliError::Usage("--dst is required".to_string()))?;
    let mut builder = CodecConfig::builder().target(DigitSet::from_spec(dst)?).plan(plan);
    builder = if merged.src == "auto" {
        builder.source_auto()
    } else {
        builder.source(DigitSet::from_spec(&merged.src)?)
    };
    builder = match parse_codepoint_or_none(&merged.sep, "--sep")? {
        Some(sep) => builder.separator(sep),
        None => builder.no_separator(),
    };
    if let Some(pad) = parse_codepoint_or_none(&merged.pad, "--pad")? {
        builder = builder.pad(pad);
    }
    if merged.add != "none" {
        let addends = merged
            .add
            .split(',')
            .map(|t| t.trim().parse::<Integer>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| {
                CliError::Usage(format!("--add {:?} is not a comma-separated integer list", merged.add))
            })?;
        builder = builder.addends(addends);
    }
    if merged.esc != "none" {
        let escape = merged
            .esc
            .split(',')
            .map(|h| parse_codepoint(h.trim(), "--esc"))
            .collect::<Result<String, _>>()?;
        builder = builder.escape(escape);
    }
    if merged.self_describing {
        builder = builder.self_describing();
    }
    builder = builder.key_hiding(key_hiding(merged)?);
    Ok(builder.build()?)
}

// ---------------------------------------------------------------------------
// Stream plumbing.
// ---------------------------------------------------------------------------

fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text)?;
        Ok(text)
    } else {
        Ok(fs::read_to_string(path)?)
    }
}

fn write_output(path: &str, bytes: &[u8]) -> Result<(), CliError> {
    if path == "-" {
        let mut out = io::stdout().lock();
        out.write_all(bytes)?;
        out.flush()?;
        Ok(())
    } else {
        Ok(fs::write(path, bytes)?)
    }
}

/// Documents never end with a newline of their own unless the separator
/// itself is U+000A, so one trailing newline from editors or shells is shed.
fn shed_trailing_newline(text: &str, separator: Option<char>) -> &str {
    if separator == Some('\n') {
        return text;
    }
    text.strip_suffix('\n').unwrap_or(text)
}

// ---------------------------------------------------------------------------
// Subcommands.
// ---------------------------------------------------------------------------

fn cmd_encode(args: CodecArgs) -> Result<(), CliError> {
    let merged = merge(&args)?;
    let text = read_input(&args.input)?;
    if merged.fig2 {
        return write_output(&args.output, encode_fig2(&text)?.as_bytes());
    }
    if text.contains('\n') && merged.esc == "none" {
        return Err(CliError::Input(
            "the text contains newlines; pass --esc (two or more hex codepoints, e.g. \
             --esc 5C,6E) to escape them, or strip them first"
                .to_string(),
        ));
    }
    let plan = resolve_plan(&merged)?;
    let config = build_config(&merged, plan)?;
    if merged.src == "auto" {
        eprintln!("resolved-src={}", resolved_source(&text, &config)?.to_spec());
    }
    let doc = encode(&text, &config)?;
    write_output(&args.output, doc.serialize().as_bytes())
}

fn cmd_decode(args: CodecArgs) -> Result<(), CliError> {
    let merged = merge(&args)?;
    if merged.fig2 {
        return Err(CliError::Usage("--fig2 applies to encode only".to_string()));
    }
    let text = read_input(&args.input)?;
    let hiding = key_hiding(&merged)?;

    if let Some((line, _)) = sniff_header(&text) {
        let header = Header::parse(line)?;
        let config = match header.oeis_key() {
            Some(key) => {
                let provider = oeis_client(merged.base_url.as_deref())?.fetch(&key)?;
                header.to_config_with_plan(ChunkPlan::sequence(provider), hiding)?
            }
            None => header.to_config(hiding)?,
        };
        let body = shed_trailing_newline(&text, config.separator());
        let doc = CipherDocument::parse(body, &config)?;
        return write_output(&args.output, decode(&doc, &config)?.as_bytes());
    }

    let plan = resolve_plan(&merged)?;
    let config = build_config(&merged, plan)?;
    let body = shed_trailing_newline(&text, config.separator());
    let doc = CipherDocument::parse(body, &config)?;
    write_output(&args.output, decode(&doc, &config)?.as_bytes())
}

fn cmd_attack(args: AttackArgs) -> Result<(), CliError> {
    let text = read_input(&args.input)?;
    let body = text.strip_suffix('\n').unwrap_or(&text);
    let sep = parse_codepoint(&args.sep, "--sep")?;
    let mut candidates = brute_force(body, sep, args.min_base, args.max_base)?;
    if let Some(top) = args.top {
        candidates.truncate(top);
    }
    write_output(&args.output, report(&candidates).as_bytes())
}

fn cmd_analyze(what: AnalyzeCmd) -> Result<(), CliError> {
    match what {
        AnalyzeCmd::Lengths { max_power, bases, output } => {
            if bases.is_empty() {
                return Err(CliError::Usage("--bases needs at least one base".to_string()));
            }
            let table = length_table(max_power, &bases)?;
            write_output(&output, table.to_csv().as_bytes())
        }
        AnalyzeCmd::Freq { set, sep, input, output } => {
            let set = DigitSet::from_spec(&set)?;
            let text = read_input(&input)?;
            let mut body = text.strip_suffix('\n').unwrap_or(&text).to_string();
            if let Some(sep) = parse_codepoint_or_none(&sep, "--sep")? {
                body.retain(|c| c != sep);
            }
            let signature = digit_frequency(&body, &set)?;
            let mut out = String::new();
            for (value, &count) in signature.histogram.iter().enumerate() {
                if count == 0 {
                    continue;
                }
                let ch = set.char_of(value as u32).expect("histogram is set-sized");
                out.push_str(&format!("{value}\tU+{:04X}\t{}\t{count}\n", ch as u32, ch.escape_debug()));
            }
            out.push_str(&format!("chi2\t{:.6}\n", signature.chi_square_vs_uniform));
            write_output(&output, out.as_bytes())
        }
        AnalyzeCmd::Compress(args) => {
            let merged = merge(&args)?;
            let text = read_input(&args.input)?;
            if text.contains('\n') && merged.esc == "none" {
                return Err(CliError::Input(
                    "the text contains newlines; pass --esc to escape them".to_string(),
                ));
            }
            let plan = resolve_plan(&merged)?;
            let config = build_config(&merged, plan)?;
            let doc = encode(&text, &config)?;
            let r = compression_report(&text, &doc);
            let ratio = |r: &bnc::analysis::ExactRatio| match r.as_f64() {
                Some(f) => format!("{r} ({f:.3})"),
                None => format!("{r}"),
            };
            let out = format!(
                "plain_chars={}\nplain_utf8_bytes={}\ncipher_chars={}\ncipher_utf8_bytes={}\n\
                 char_ratio={}\nbyte_ratio={}\n",
                r.plain_chars,
                r.plain_utf8_bytes,
                r.cipher_chars,
                r.cipher_utf8_bytes,
                ratio(&r.char_ratio()),
                ratio(&r.byte_ratio()),
            );
            write_output(&args.output, out.as_bytes())
        }
        AnalyzeCmd::Tokens { input, output } => {
            let text = read_input(&input)?;
            let counts = tokens_per_sentence(&text);
            let mut out = String::new();
            for count in counts {
                out.push_str(&format!("{count}\n"));
            }
            write_output(&output, out.as_bytes())
        }
    }
}

fn cmd_seq(what: SeqCmd) -> Result<(), CliError> {
    match what {
        SeqCmd::Fetch { key, count, base_url, output } => {
            let key = SequenceKey::parse(&key)?;
            let client = oeis_client(base_url.as_deref())?;
            let provider = client.fetch(&key)?;
            let terms: Vec<Integer> = provider.iter().take(count).collect();
            eprintln!(
                "{}: cached at {}",
                key.canonical(),
                client.cache_path(&key).display()
            );
            write_terms(&output, &terms)
        }
        SeqCmd::Show { spec, count, base_url, output } => {
            let provider = match Builtin::parse(&spec) {
                Some(builtin) => SequenceProvider::builtin(builtin),
                None => {
                    let key = SequenceKey::parse(&spec)?;
                    oeis_client(base_url.as_deref())?.fetch(&key)?
                }
            };
            let terms: Vec<Integer> = provider.iter().take(count).collect();
            write_terms(&output, &terms)
        }
    }
}

fn write_terms(output: &str, terms: &[Integer]) -> Result<(), CliError> {
    let mut out = String::new();
    for term in terms {
        out.push_str(&format!("{term}\n"));
    }
    write_output(output, out.as_bytes())
}

fn cmd_digitset(what: DigitsetCmd) -> Result<(), CliError> {
    match what {
        DigitsetCmd::Show { spec, count, output } => {
            let set = DigitSet::from_spec(&spec)?;
            let mut out = format!("base={}\nspec={}\n", set.base(), set.to_spec());
            for value in 0..count.min(set.base()) {
                let ch = set.char_of(value).expect("value below base");
                out.push_str(&format!("{value}\tU+{:04X}\t{}\n", ch as u32, ch.escape_debug()));
            }
            write_output(&output, out.as_bytes())
        }
    }
}
