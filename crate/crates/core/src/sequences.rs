//! Integer sequences for chunk plans and addends: builtins, explicit lists,
//! and an OEIS b-file client with a local cache.

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::time::Duration;

use num_bigint::BigInt;
use thiserror::Error;

/// Signed arbitrary-precision integer: sequence terms and addends may be
/// negative or arbitrarily large.
pub type Integer = BigInt;

#[derive(Debug, Error)]
pub enum SequenceError {
    #[error("not a sequence key: {0:?} (expected a number like 40 or A000040)")]
    BadKey(String),
    #[error(
        "failed to fetch {key}: {detail} — builtin sequences (primes, naturals, fibonacci, \
         constant:k) work offline"
    )]
    NetworkError { key: String, detail: String },
    #[error("malformed b-file line {line}: {content:?}")]
    ParseError { line: usize, content: String },
    #[error("cannot write cache file {path}: {source}")]
    CacheWriteError {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// An OEIS sequence identifier. `40` and `A000040` name the same sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SequenceKey {
    a_number: u32,
}

impl SequenceKey {
    pub fn parse(s: &str) -> Result<Self, SequenceError> {
        let digits = s.strip_prefix('A').unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(SequenceError::BadKey(s.to_string()));
        }
        match digits.parse::<u32>() {
            Ok(n) if n > 0 => Ok(SequenceKey { a_number: n }),
            _ => Err(SequenceError::BadKey(s.to_string())),
        }
    }

    pub fn a_number(&self) -> u32 {
        self.a_number
    }

    /// `A` followed by the number zero-padded to six digits.
    pub fn canonical(&self) -> String {
        format!("A{:06}", self.a_number)
    }

    /// URL of the sequence's b-file under `base_url`, e.g.
    /// `https://oeis.org/A000040/b000040.txt`.
    pub fn b_file_url(&self, base_url: &str) -> String {
        format!(
            "{}/{}/b{:06}.txt",
            base_url.trim_end_matches('/'),
            self.canonical(),
            self.a_number
        )
    }
}

impl fmt::Display for SequenceKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

/// Built-in sequences that need no network access.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    /// 1, 2, 3, 4, ...
    Naturals,
    /// 2, 3, 5, 7, 11, ...
    Primes,
    /// 1, 1, 2, 3, 5, ...
    Fibonacci,
    /// k, k, k, ...
    Constant(i64),
}

impl Builtin {
    /// Parses a builtin name as used in chunk-plan specs: `naturals`,
    /// `primes`, `fibonacci`, or `constant:<k>`.
    pub fn parse(s: &str) -> Option<Builtin> {
        match s {
            "naturals" => Some(Builtin::Naturals),
            "primes" => Some(Builtin::Primes),
            "fibonacci" => Some(Builtin::Fibonacci),
            _ => s
                .strip_prefix("constant:")
                .and_then(|k| k.parse::<i64>().ok())
                .map(Builtin::Constant),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Builtin::Naturals => "naturals".to_string(),
            Builtin::Primes => "primes".to_string(),
            Builtin::Fibonacci => "fibonacci".to_string(),
            Builtin::Constant(k) => format!("constant:{k}"),
        }
    }
}

/// Where a provider's terms come from. Explicit lists cycle when consumed as
/// a chunk plan; builtin and OEIS streams do not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Builtin(Builtin),
    Explicit,
    Oeis(SequenceKey),
}

/// A deterministic stream of integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceProvider {
    source: Source,
    kind: ProviderKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum ProviderKind {
    Builtin(Builtin),
    Finite { terms: Vec<Integer>, cycles: bool },
}

impl SequenceProvider {
    pub fn builtin(b: Builtin) -> Self {
        SequenceProvider { source: Source::Builtin(b), kind: ProviderKind::Builtin(b) }
    }

    /// A user-supplied list. Cycles indefinitely when read past its end.
    pub fn explicit(terms: Vec<i64>) -> Self {
        SequenceProvider {
            source: Source::Explicit,
            kind: ProviderKind::Finite {
                terms: terms.into_iter().map(Integer::from).collect(),
                cycles: true,
            },
        }
    }

    /// A fetched OEIS sequence. Finite: reading past the last term yields
    /// nothing rather than wrapping around.
    pub fn oeis(key: SequenceKey, terms: Vec<Integer>) -> Self {
        SequenceProvider {
            source: Source::Oeis(key),
            kind: ProviderKind::Finite { terms, cycles: false },
        }
    }

    pub fn source(&self) -> &Source {
        &self.source
    }

    /// The spec-string form used in headers and on the command line:
    /// builtin name, canonical A-number, or the comma-separated list.
    pub fn spec_string(&self) -> String {
        match (&self.source, &self.kind) {
            (Source::Builtin(b), _) => b.name(),
            (Source::Oeis(key), _) => key.canonical(),
            (Source::Explicit, ProviderKind::Finite { terms, .. }) => {
                terms.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(",")
            }
            (Source::Explicit, _) => unreachable!("explicit providers are finite"),
        }
    }

    pub fn iter(&self) -> Terms<'_> {
        match &self.kind {
            ProviderKind::Builtin(Builtin::Naturals) => Terms::Naturals(Integer::from(1)),
            ProviderKind::Builtin(Builtin::Primes) => Terms::Primes(Vec::new()),
            ProviderKind::Builtin(Builtin::Fibonacci) => {
                Terms::Fibonacci(Integer::from(1), Integer::from(1))
            }
            ProviderKind::Builtin(Builtin::Constant(k)) => Terms::Constant(*k),
            ProviderKind::Finite { terms, cycles } => {
                Terms::Finite { terms, index: 0, cycles: *cycles }
            }
        }
    }

    /// The term at `index` (0-based), if the stream reaches that far.
    pub fn term(&self, index: usize) -> Option<Integer> {
        self.iter().nth(index)
    }
}

pub enum Terms<'a> {
    Naturals(Integer),
    Primes(Vec<u64>),
    Fibonacci(Integer, Integer),
    Constant(i64),
    Finite { terms: &'a [Integer], index: usize, cycles: bool },
}

impl Iterator for Terms<'_> {
    type Item = Integer;

    fn next(&mut self) -> Option<Integer> {
        match self {
            Terms::Naturals(next) => {
                let out = next.clone();
                *next += 1;
                Some(out)
            }
            Terms::Primes(found) => {
                let mut candidate = found.last().map_or(2, |p| p + 1);
                loop {
                    let is_prime = found
                        .iter()
                        .take_while(|&&p| p * p <= candidate)
                        .all(|&p| candidate % p != 0);
                    if is_prime {
                        found.push(candidate);
                        return Some(Integer::from(candidate));
                    }
                    candidate += 1;
                }
            }
            Terms::Fibonacci(a, b) => {
                let out = a.clone();
                let next = &*a + &*b;
                *a = std::mem::replace(b, next);
                Some(out)
            }
            Terms::Constant(k) => Some(Integer::from(*k)),
            Terms::Finite { terms, index, cycles } => {
                if terms.is_empty() {
                    return None;
                }
                let out = if *cycles {
                    Some(terms[*index % terms.len()].clone())
                } else {
                    terms.get(*index).cloned()
                };
                *index += 1;
                out
            }
        }
    }
}

/// Parses b-file text: one `<index> <term>` pair per line, `#` comment lines
/// and blank lines skipped. Terms are kept in file order; indices are not
/// interpreted.
pub fn parse_b_file(text: &str) -> Result<Vec<Integer>, SequenceError> {
    let mut terms = Vec::new();
    for (number, line) in text.lines().enumerate() {
        let line_no = number + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let bad = || SequenceError::ParseError { line: line_no, content: line.to_string() };
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(bad());
        }
        let _index: Integer = fields[0].parse().map_err(|_| bad())?;
        let term: Integer = fields[1].parse().map_err(|_| bad())?;
        terms.push(term);
    }
    Ok(terms)
}

/// Fetches OEIS b-files, caching the verbatim HTTP body on disk. A cached
/// sequence never touches the network again.
#[derive(Debug, Clone)]
pub struct OeisClient {
    base_url: String,
    cache_dir: PathBuf,
    timeout: Duration,
}

impl OeisClient {
    pub fn new(cache_dir: impl Into<PathBuf>) -> Self {
        OeisClient {
            base_url: "https://oeis.org".to_string(),
            cache_dir: cache_dir.into(),
            timeout: Duration::from_secs(10),
        }
    }

    /// Overrides the OEIS endpoint; used to point at mirrors or test servers.
    pub fn with_base_url(mut self, base_url: impl Into<String>) -> Self {
        self.base_url = base_url.into();
        self
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }

    /// `<cache dir>/A######.bfile`
    pub fn cache_path(&self, key: &SequenceKey) -> PathBuf {
        self.cache_dir.join(format!("{}.bfile", key.canonical()))
    }

    pub fn fetch(&self, key: &SequenceKey) -> Result<SequenceProvider, SequenceError> {
        let body = match fs::read_to_string(self.cache_path(key)) {
            Ok(cached) => cached,
            Err(_) => self.download(key)?,
        };
        Ok(SequenceProvider::oeis(*key, parse_b_file(&body)?))
    }

    fn download(&self, key: &SequenceKey) -> Result<String, SequenceError> {
        let url = key.b_file_url(&self.base_url);
        let network_error = |detail: String| SequenceError::NetworkError {
            key: key.canonical(),
            detail,
        };
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(self.timeout))
            .build()
            .into();
        let mut response = agent.get(&url).call().map_err(|e| network_error(e.to_string()))?;
        let body = response
            .body_mut()
            .read_to_string()
            .map_err(|e| network_error(e.to_string()))?;
        self.store(key, &body)?;
        Ok(body)
    }

    /// Writes via a temporary file and rename so concurrent fetchers never
    /// observe a half-written cache entry.
    fn store(&self, key: &SequenceKey, body: &str) -> Result<(), SequenceError> {
        let path = self.cache_path(key);
        let write_error =
            |source: std::io::Error| SequenceError::CacheWriteError { path: path.clone(), source };
        fs::create_dir_all(&self.cache_dir).map_err(write_error)?;
        let tmp = self.cache_dir.join(format!(".{}.tmp-{}", key.canonical(), std::process::id()));
        fs::write(&tmp, body).map_err(write_error)?;
        fs::rename(&tmp, &path).map_err(write_error)?;
        Ok(())
    }
}
