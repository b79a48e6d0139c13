//! End-to-end acceptance gate: one test per shipping criterion, each
//! printing a PASS line when its checks hold. Derived expectations are
//! verified against independent oracles implemented inside this file.

use std::io::{Read, Write};
use std::net::TcpListener;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use num_bigint::BigUint;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use bnc::analysis::{compression_report, length_table, pretty_print_decomposition};
use bnc::attack::brute_force;
use bnc::codec::{
    chunk, decode, decode_text, encode, encode_fig2, ChunkPlan, CipherDocument, CodecConfig,
    KeyHiding,
};
use bnc::digitset::{DigitSet, ExclusionPolicy, Preset};
use bnc::numeric::{evaluate_digits, render_digits, Natural};
use bnc::sequences::{Builtin, OeisClient, SequenceKey, SequenceProvider};

fn passed(number: u32, what: &str) {
    println!("PASS criterion {number}: {what}");
}

#[test]
fn criterion_01_word_values_and_word_mode() {
    let base36 = DigitSet::preset(Preset::Base36);
    for (word, value) in [
        ("this", 1_375_732u64),
        ("is", 676),
        ("an", 383),
        ("example", 32_488_192_274),
    ] {
        assert_eq!(evaluate_digits(word, &base36).unwrap(), Natural::from(value), "{word}");
    }
    assert_eq!(encode_fig2("This is an example.").unwrap(), "X1375732-676-383-32488192274.");
    passed(1, "base-36 word values and word-mode encoding are exact");
}

#[test]
fn criterion_02_fixed_plan_demo_sentence() {
    let config = CodecConfig::builder()
        .source(DigitSet::preset(Preset::Base37))
        .target(DigitSet::preset(Preset::Decimal))
        .plan(ChunkPlan::fixed(5))
        .separator('-')
        .build()
        .unwrap();
    let doc = encode("this is an example", &config).unwrap();
    assert_eq!(doc.body_string(), "55237484-35202859-68224507-35016");
    assert_eq!(decode(&doc, &config).unwrap(), "this is an example");
    passed(2, "fixed(5) base37→decimal encoding matches and inverts");
}

#[test]
fn criterion_03_prime_plan_chunks_and_values() {
    let plan = ChunkPlan::sequence(SequenceProvider::builtin(Builtin::Primes));
    assert_eq!(
        chunk("this is an example", &plan).unwrap(),
        vec!["th", "is ", "is an", " exampl", "e"]
    );

    let base37 = DigitSet::preset(Preset::Base37);
    assert_eq!(evaluate_digits("is ", &base37).unwrap(), Natural::from(25_714u32));
    assert_eq!(evaluate_digits("is an", &base37).unwrap(), Natural::from(35_202_859u32));
    assert_eq!(evaluate_digits("e", &base37).unwrap(), Natural::from(14u32));
    // Hand checks: 't'=29 and 'h'=17, so "th" = 29·37 + 17 = 1090 (0x442);
    // " exampl" = 93399351029 (0x15BF08FEF5).
    assert_eq!(evaluate_digits("th", &base37).unwrap(), Natural::from(1090u32));
    assert_eq!(evaluate_digits(" exampl", &base37).unwrap(), Natural::from(93_399_351_029u64));

    let config = CodecConfig::builder()
        .source(base37)
        .target(DigitSet::preset(Preset::HexUpper))
        .plan(plan)
        .separator('-')
        .build()
        .unwrap();
    let doc = encode("this is an example", &config).unwrap();
    assert_eq!(doc.body_string(), "442-6472-219272B-15BF08FEF5-E");
    assert_eq!(decode(&doc, &config).unwrap(), "this is an example");
    passed(3, "prime-sequence chunking and hex renderings match the hand-verified values");
}

#[test]
fn criterion_04_hex_identity_and_decomposition() {
    let hex = DigitSet::preset(Preset::HexUpper);
    let value = evaluate_digits("ABC", &hex).unwrap();
    assert_eq!(value, Natural::from(2748u32));
    assert_eq!(value, Natural::from(12u32 + 11 * 16 + 10 * 16 * 16));
    assert_eq!(pretty_print_decomposition("ABC", &hex).unwrap(), "10-11-12");
    passed(4, "hex identity 0xABC = 2748 and its 10-11-12 decomposition hold");
}

#[test]
fn criterion_05_length_table_against_oracle() {
    fn oracle(mut v: u64, base: u64) -> u64 {
        if v == 0 {
            return 1;
        }
        let mut n = 0;
        while v > 0 {
            v /= base;
            n += 1;
        }
        n
    }
    let bases = [2u64, 10, 16];
    let table = length_table(9, &bases).unwrap();
    assert_eq!(table.rows.len(), 10);
    for (p, (value, lengths)) in table.rows.iter().enumerate() {
        let v = 10u64.pow(p as u32);
        assert_eq!(value, &Natural::from(v));
        for (i, &b) in bases.iter().enumerate() {
            assert_eq!(lengths[i], oracle(v, b), "10^{p} in base {b}");
        }
    }
    assert_eq!(table.rows[6].1, vec![20, 7, 5]);
    passed(5, "all 30 length-table cells match the repeated-division oracle");
}

// ---------------------------------------------------------------------------
// Criterion 6: randomized round-trip corpus.
// ---------------------------------------------------------------------------

/// Every character here survives the default exclusion policy, so any text
/// drawn from it also works with an auto-resolved source set.
const CHAR_POOL: &str = "abcdefghijklmnopqrstuvwxyz0123456789\
                         абвгдежзиклмнопрстуфхцчш\
                         一二三四五六七八九十百千万億兆 .,!?";

struct Case {
    config: CodecConfig,
    text: String,
    auto_source: bool,
}

fn build_case(case: usize, rng: &mut ChaCha8Rng) -> Case {
    let pool: Vec<char> = CHAR_POOL.chars().collect();

    // Source set: explicit, unicode range, permuted range, or preset.
    let src_set = match rng.gen_range(0..4) {
        0 => {
            let mut shuffled = pool.clone();
            shuffled.shuffle(rng);
            let n = rng.gen_range(2..=60);
            DigitSet::from_alphabet(&shuffled[..n].iter().collect::<String>()).unwrap()
        }
        1 => {
            DigitSet::from_unicode_range(rng.gen_range(2..=3000), &ExclusionPolicy::default())
                .unwrap()
        }
        2 => DigitSet::from_unicode_range(rng.gen_range(2..=500), &ExclusionPolicy::default())
            .unwrap()
            .permute(rng.gen()),
        _ => DigitSet::preset(
            *[Preset::Base36, Preset::Base37, Preset::HexUpper, Preset::Decimal]
                .choose(rng)
                .unwrap(),
        ),
    };

    // Target set, drawn independently of the source.
    let dst_set = match rng.gen_range(0..4) {
        0 => {
            let mut shuffled = pool.clone();
            shuffled.shuffle(rng);
            let n = rng.gen_range(2..=60);
            DigitSet::from_alphabet(&shuffled[..n].iter().collect::<String>()).unwrap()
        }
        1 => {
            DigitSet::from_unicode_range(rng.gen_range(2..=5000), &ExclusionPolicy::default())
                .unwrap()
        }
        2 => DigitSet::from_unicode_range(rng.gen_range(2..=500), &ExclusionPolicy::default())
            .unwrap()
            .permute(rng.gen()),
        _ => DigitSet::preset(
            *[Preset::Decimal, Preset::HexUpper, Preset::Base36]
                .choose(rng)
                .unwrap(),
        ),
    };

    let padding = rng.gen_bool(0.4);
    let escaping = rng.gen_bool(0.3);

    // Text length skews short but the corpus pins both extremes.
    let length = match case {
        0 => 0,
        1 => 10_000,
        _ => {
            let r: f64 = rng.gen();
            (r * r * 900.0) as usize
        }
    };
    // Reserve the pad digit before drawing the text so it can never occur in
    // the final chunk. Without padding, a final chunk starting with the
    // value-0 digit is ambiguous and the encoder refuses it, so the zero
    // digit stays out of unpadded texts (dedicated unit tests cover
    // zero-led chunks).
    let pad_index = if padding { Some(rng.gen_range(1..src_set.base())) } else { None };
    let lowest = if pad_index.is_some() { 0 } else { 1.min(src_set.base() - 1) };
    let mut text: String = (0..length)
        .map(|_| loop {
            let index = rng.gen_range(lowest..src_set.base());
            if Some(index) != pad_index {
                break src_set.char_of(index).unwrap();
            }
        })
        .collect();
    let pad = pad_index.map(|i| src_set.char_of(i).unwrap());

    // Digits of the source set that the text does not use are candidates for
    // escape symbols; the value-0 digit and the pad stay reserved.
    let mut unused: Vec<char> = src_set
        .codepoints()
        .iter()
        .skip(1)
        .filter(|c| !text.contains(**c) && Some(**c) != pad)
        .copied()
        .collect();
    unused.shuffle(rng);
    let escape = if escaping && unused.len() >= 2 {
        let a = unused.pop().unwrap();
        let b = unused.pop().unwrap();
        // Inject some real newlines for the escape to carry.
        if !text.is_empty() {
            for _ in 0..rng.gen_range(1..=3) {
                let at = rng.gen_range(0..=text.chars().count());
                let mut chars: Vec<char> = text.chars().collect();
                chars.insert(at, '\n');
                text = chars.into_iter().collect();
            }
        }
        Some(format!("{a}{b}"))
    } else {
        None
    };

    let plan = match rng.gen_range(0..5) {
        0 => ChunkPlan::fixed(rng.gen_range(1..=12)),
        1 => ChunkPlan::list((0..rng.gen_range(1..=4)).map(|_| rng.gen_range(1..=9)).collect()),
        2 => ChunkPlan::sequence(SequenceProvider::builtin(Builtin::Primes)),
        3 => ChunkPlan::sequence(SequenceProvider::builtin(Builtin::Naturals)),
        _ => ChunkPlan::sequence(SequenceProvider::builtin(Builtin::Constant(
            rng.gen_range(1..=20),
        ))),
    };

    let separator = if rng.gen_bool(0.7) {
        ['-', '\u{FFFD}', '\u{1F600}']
            .into_iter()
            .find(|c| !dst_set.contains(*c))
    } else {
        None
    };

    // Addends can widen a chunk beyond its fixed-width frame, so the random
    // corpus applies them only in separator mode.
    let addends: Option<Vec<i64>> = if separator.is_some() && rng.gen_bool(0.4) {
        Some((0..rng.gen_range(1..=4)).map(|_| rng.gen_range(0..=99)).collect())
    } else {
        None
    };

    // Hidden keys widen chunk 0 (addToFirst) or add segments (prefix /
    // suffix), so the random corpus applies them only in separator mode
    // where widths are free to grow.
    let key_hiding = match rng.gen_range(0..10) {
        0 if separator.is_some() => KeyHiding::AddToFirst(rng.gen_range(1..=999)),
        1 if separator.is_some() => KeyHiding::Prefix(rng.gen_range(1..=999)),
        2 if separator.is_some() => KeyHiding::Suffix(rng.gen_range(1..=999)),
        _ => KeyHiding::None,
    };

    // Auto resolution picks a codepoint-rank set whose value-0 digit is the
    // space character, so the no-zero-led-final-chunk guarantee arranged
    // above does not transfer; auto cases therefore always run padded, and
    // self-describing so the decoder can recover the resolved set.
    let auto_source = pad.is_some() && rng.gen_bool(0.25);
    let self_describing = auto_source || rng.gen_bool(0.3);

    let mut builder = CodecConfig::builder()
        .target(dst_set)
        .plan(plan)
        .key_hiding(key_hiding);
    builder = if auto_source { builder.source_auto() } else { builder.source(src_set) };
    builder = match separator {
        Some(sep) => builder.separator(sep),
        None => builder.no_separator(),
    };
    if let Some(pad) = pad {
        builder = builder.pad(pad);
    }
    if let Some(addends) = addends {
        builder = builder.addends(addends);
    }
    if let Some(escape) = escape {
        builder = builder.escape(escape);
    }
    if self_describing {
        builder = builder.self_describing();
    }
    Case { config: builder.build().unwrap(), text, auto_source }
}

#[test]
fn criterion_06_randomized_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xBA5E_CA5E);
    for case in 0..1000 {
        let Case { config, text, auto_source } = build_case(case, &mut rng);
        let doc = encode(&text, &config)
            .unwrap_or_else(|e| panic!("case {case}: encode failed: {e}\nconfig {config:?}"));
        let serialized = doc.serialize();

        if !auto_source {
            let direct = decode(&doc, &config)
                .unwrap_or_else(|e| panic!("case {case}: decode failed: {e}"));
            assert_eq!(direct, text, "case {case}: direct decode mismatch");

            let reparsed = CipherDocument::parse(&serialized, &config)
                .unwrap_or_else(|e| panic!("case {case}: reparse failed: {e}"));
            assert_eq!(reparsed, doc, "case {case}: document reparse mismatch");
        }

        let via_text = decode_text(&serialized, &config)
            .unwrap_or_else(|e| panic!("case {case}: decode_text failed: {e}\n{serialized:?}"));
        assert_eq!(via_text, text, "case {case}: serialized decode mismatch");
    }
    passed(6, "1000 randomized configurations round-trip exactly");
}

#[test]
fn criterion_07_render_oracle_equivalence() {
    // Independent oracle: repeated division over machine words, mapping
    // digit values through the same set.
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

    for base in 2..=64u32 {
        let set = bnc::attack::candidate_alphabet(base).unwrap();
        for v in 0..1_000_000u64 {
            let rendered = render_digits(&Natural::from(v), &set, 0);
            let expected = oracle(v, base as u64, &set);
            assert_eq!(rendered, expected, "value {v} in base {base}");
        }
    }
    passed(7, "renderings match the division oracle for every v < 10^6, bases 2..=64");
}

#[test]
fn criterion_08_attack_recovers_the_demo_sentence() {
    let ranked = brute_force("1375732-676-383-32488192274", '-', 11, 64).unwrap();
    assert_eq!(ranked[0].base, 36);
    assert_eq!(ranked[0].decoded_text, "this is an example");
    assert!(ranked.windows(2).all(|w| w[0].score >= w[1].score));
    passed(8, "brute force over bases 11..=64 ranks base 36 first with the right text");
}

const ENGLISH_SAMPLE: &str = "the lighthouse keeper kept a small notebook on the sill of the \
lamp room, and in it he recorded the weather, the ships that passed, and the birds that \
struck the glass at night. in the morning he would climb down the spiral stair, counting \
the steps out of habit, and walk the shingle beach to see what the tide had carried in. \
driftwood, rope ends, a boot with no partner, bottles with no letters inside. he kept the \
useful things and buried the rest above the wrack line. visitors asked him if the solitude \
wore him down, and he said that a man with a routine is never alone, because the next task \
is always waiting for him like an old friend. in the evening he trimmed the wick, polished \
the brass, and wound the clockwork that turned the great lens. when the beam swept the \
water he liked to imagine it touching the hulls of ships he would never see, steadying \
hands on wheels he would never shake. the sea does not thank anyone, he wrote on the last \
page, but it spares those who pay attention, and that is a kind of gratitude.";

#[test]
fn criterion_09_compression_claim() {
    assert!(ENGLISH_SAMPLE.is_ascii());
    assert!(ENGLISH_SAMPLE.len() >= 1000, "sample is {} bytes", ENGLISH_SAMPLE.len());

    let config = CodecConfig::builder()
        .source_auto()
        .target(DigitSet::from_unicode_range(50_000, &ExclusionPolicy::default()).unwrap())
        .plan(ChunkPlan::fixed(16))
        .no_separator()
        .self_describing()
        .build()
        .unwrap();
    let doc = encode(ENGLISH_SAMPLE, &config).unwrap();
    let report = compression_report(ENGLISH_SAMPLE, &doc);

    assert!(
        report.cipher_chars < report.plain_chars,
        "expected fewer cipher characters: {report:?}"
    );
    assert!(
        report.cipher_utf8_bytes > report.cipher_chars,
        "expected multi-byte digits: {report:?}"
    );
    // And the dense large-base document still decodes exactly.
    assert_eq!(decode_text(&doc.serialize(), &config).unwrap(), ENGLISH_SAMPLE);
    passed(9, "large-base re-encoding shortens characters but not bytes");
}

// ---------------------------------------------------------------------------
// Criterion 10: hermetic OEIS client.
// ---------------------------------------------------------------------------

/// One-file HTTP server for b-files: serves `body` at any path, counting
/// requests. Listens on an ephemeral local port.
fn spawn_bfile_server(body: String) -> (String, Arc<AtomicUsize>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    let hits = Arc::new(AtomicUsize::new(0));
    let counter = Arc::clone(&hits);
    std::thread::spawn(move || {
        for stream in listener.incoming() {
            let Ok(mut stream) = stream else { break };
            counter.fetch_add(1, Ordering::SeqCst);
            let mut request = Vec::new();
            let mut buf = [0u8; 1024];
            while !request.windows(4).any(|w| w == b"\r\n\r\n") {
                match stream.read(&mut buf) {
                    Ok(0) | Err(_) => break,
                    Ok(n) => request.extend_from_slice(&buf[..n]),
                }
            }
            let response = format!(
                "HTTP/1.1 200 OK\r\nContent-Type: text/plain\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{}",
                body.len(),
                body
            );
            let _ = stream.write_all(response.as_bytes());
        }
    });
    (format!("http://{addr}"), hits)
}

#[test]
fn criterion_10_oeis_client_is_cache_backed() {
    // Independent prime generator for the served b-file.
    fn primes(n: usize) -> Vec<u64> {
        let mut found: Vec<u64> = Vec::with_capacity(n);
        let mut candidate = 2u64;
        while found.len() < n {
            if found.iter().all(|p| candidate % p != 0) {
                found.push(candidate);
            }
            candidate += 1;
        }
        found
    }
    let mut body = String::from("# b-file for the prime numbers\n");
    for (i, p) in primes(100).iter().enumerate() {
        body.push_str(&format!("{} {}\n", i + 1, p));
    }

    let (base_url, hits) = spawn_bfile_server(body);
    let cache_dir = tempfile::tempdir().unwrap();
    let key = SequenceKey::parse("A000040").unwrap();

    let client = OeisClient::new(cache_dir.path()).with_base_url(&base_url);
    let fetched = client.fetch(&key).unwrap();
    let builtin = SequenceProvider::builtin(Builtin::Primes);
    assert_eq!(
        fetched.iter().collect::<Vec<_>>(),
        builtin.iter().take(100).collect::<Vec<_>>(),
        "served terms must match the builtin primes"
    );
    assert_eq!(hits.load(Ordering::SeqCst), 1);
    assert!(client.cache_path(&key).exists());

    // Second fetch with the network unplugged: served from cache.
    let offline = OeisClient::new(cache_dir.path())
        .with_base_url("http://127.0.0.1:1")
        .with_timeout(std::time::Duration::from_millis(200));
    let cached = offline.fetch(&key).unwrap();
    assert_eq!(cached.term(99), Some(541.into()));
    assert_eq!(hits.load(Ordering::SeqCst), 1, "cache hit must not touch the network");

    // The cached provider drives a chunk plan end to end.
    let config = CodecConfig::builder()
        .source(DigitSet::preset(Preset::Base37))
        .target(DigitSet::preset(Preset::HexUpper))
        .plan(ChunkPlan::sequence(cached))
        .separator('-')
        .build()
        .unwrap();
    let doc = encode("this is an example", &config).unwrap();
    assert_eq!(doc.body_string(), "442-6472-219272B-15BF08FEF5-E");
    passed(10, "b-file fetch matches builtin primes and the cache absorbs refetches");
}

// ---------------------------------------------------------------------------
// Cross-checks that tie several criteria together.
// ---------------------------------------------------------------------------

#[test]
fn wide_value_round_trip_beyond_machine_words() {
    // A 600-digit decimal number through a base-50000 set and back.
    let big = BigUint::from(7u32).pow(700);
    let set = DigitSet::from_unicode_range(50_000, &ExclusionPolicy::default()).unwrap();
    let rendered = render_digits(&big, &set, 0);
    assert_eq!(evaluate_digits(&rendered, &set).unwrap(), big);
}
