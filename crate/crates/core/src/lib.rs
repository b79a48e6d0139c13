//! # bnc
//!
//! A base-n codec: interpret text as numbers over ordered digit sets and
//! re-encode it between arbitrary bases.
//!
//! Any ordered, duplicate-free inventory of Unicode scalar values is a digit
//! set: the symbol at index `i` has value `i` and the inventory size is the
//! base. Plaintext is sliced into chunks, each chunk is evaluated as an
//! arbitrary-precision integer over a source set and rendered over a target
//! set, producing ciphertext that mimics mojibake or machine noise. The
//! library also provides the companion analyses: digit-length tables,
//! compression reports, digit-frequency signatures, and a brute-force
//! decipherment attack over conventional alphabets.
//!
//! ```
//! use bnc::codec::{ChunkPlan, CodecConfig};
//! use bnc::digitset::{DigitSet, Preset};
//!
//! let config = CodecConfig::builder()
//!     .source(DigitSet::preset(Preset::Base37))
//!     .target(DigitSet::preset(Preset::Decimal))
//!     .plan(ChunkPlan::fixed(5))
//!     .separator('-')
//!     .build()
//!     .unwrap();
//! let doc = bnc::codec::encode("this is an example", &config).unwrap();
//! assert_eq!(doc.body_string(), "55237484-35202859-68224507-35016");
//! assert_eq!(bnc::codec::decode(&doc, &config).unwrap(), "this is an example");
//! ```

pub mod analysis;
pub mod attack;
pub mod codec;
pub mod digitset;
pub mod numeric;
pub mod sequences;

pub use codec::{decode, decode_text, encode, encode_fig2, ChunkPlan, CipherDocument, CodecConfig};
pub use digitset::{DigitSet, ExclusionPolicy, Preset};
pub use numeric::Natural;
