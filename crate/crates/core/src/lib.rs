//! Query-focused meeting summarization with joint token/utterance attention.
//!
//! The pipeline: a meeting transcript is tokenized and split into
//! fixed-length 50%-overlapping chunks, each prefixed with the query.
//! Chunks are encoded independently by a transformer encoder and the
//! encodings are concatenated into a single memory. A dense scorer rates
//! each utterance against the query; those per-utterance scores are
//! expanded so every encoder position carries its utterance's score, and
//! the decoder's cross-attention fuses them with its token-level logits:
//!
//! ```text
//! logits = (1 - beta) * Q K^T / sqrt(d) + beta * gain * A
//! ```
//!
//! `beta = 0` recovers the plain chunked encoder-decoder baseline.
//!
//! Everything runs on a small 64-bit tensor engine with reverse-mode
//! differentiation, so training, generation, and evaluation are
//! deterministic and checkable against finite differences.

pub mod chunker;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod model;
pub mod numeric;
pub mod pipeline;
pub mod relevance;
pub mod tokenizer;
pub mod trainer;

pub use error::{Error, Result};
