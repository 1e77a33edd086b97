//! Word-level tokenizer and vocabulary.
//!
//! Text is lowercased and split on whitespace and punctuation, with each
//! punctuation character kept as its own token. The same splitter is used
//! for vocabulary building, model input, and the ROUGE metrics so that
//! every stage sees identical token streams.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::corpus::{Corpus, Meeting};
use crate::error::{Error, Result};

pub type TokenId = u32;

pub const PAD_ID: TokenId = 0;
pub const BOS_ID: TokenId = 1;
pub const EOS_ID: TokenId = 2;
pub const SEP_ID: TokenId = 3;
pub const UNK_ID: TokenId = 4;
pub const RESERVED: usize = 5;

const RESERVED_NAMES: [&str; RESERVED] = ["<pad>", "<bos>", "<eos>", "<sep>", "<unk>"];

/// Lowercase and split into word and punctuation tokens.
///
/// Alphanumeric runs become one token each; any other non-whitespace
/// character becomes a single-character token.
pub fn split_words(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut word = String::new();
    for ch in text.chars() {
        if ch.is_alphanumeric() {
            for lc in ch.to_lowercase() {
                word.push(lc);
            }
        } else {
            if !word.is_empty() {
                tokens.push(std::mem::take(&mut word));
            }
            if !ch.is_whitespace() {
                let mut p = String::new();
                for lc in ch.to_lowercase() {
                    p.push(lc);
                }
                tokens.push(p);
            }
        }
    }
    if !word.is_empty() {
        tokens.push(word);
    }
    tokens
}

/// The text an utterance contributes to the token stream, optionally
/// prefixed with its speaker as "SPEAKER :".
pub fn utterance_surface(speaker: &str, text: &str, prepend_speaker: bool) -> String {
    if prepend_speaker && !speaker.is_empty() {
        format!("{speaker} : {text}")
    } else {
        text.to_string()
    }
}

/// Token-to-id map with five reserved ids (PAD, BOS, EOS, SEP, UNK).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    token_to_id: HashMap<String, TokenId>,
    id_to_token: Vec<String>,
}

impl Vocabulary {
    fn from_tokens(tokens: Vec<String>) -> Self {
        let mut id_to_token: Vec<String> =
            RESERVED_NAMES.iter().map(|s| s.to_string()).collect();
        id_to_token.extend(tokens);
        let token_to_id = id_to_token
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as TokenId))
            .collect();
        Vocabulary {
            token_to_id,
            id_to_token,
        }
    }

    /// Total size including the reserved ids.
    pub fn size(&self) -> usize {
        self.id_to_token.len()
    }

    pub fn id(&self, token: &str) -> Option<TokenId> {
        self.token_to_id.get(token).copied()
    }

    pub fn token(&self, id: TokenId) -> Option<&str> {
        self.id_to_token.get(id as usize).map(|s| s.as_str())
    }

    /// Encode text to ids; out-of-vocabulary tokens map to UNK. No BOS or
    /// EOS framing is added here.
    pub fn encode(&self, text: &str) -> Vec<TokenId> {
        split_words(text)
            .iter()
            .map(|t| self.token_to_id.get(t).copied().unwrap_or(UNK_ID))
            .collect()
    }

    /// Join tokens with single spaces. Reserved ids render as their
    /// marker names.
    pub fn decode(&self, ids: &[TokenId]) -> String {
        let mut out = String::new();
        for (i, &id) in ids.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            match self.token(id) {
                Some(t) => out.push_str(t),
                None => {
                    let _ = write!(out, "<id:{id}>");
                }
            }
        }
        out
    }

    /// Serialize as vocab.txt: a header comment documenting the reserved
    /// ids, then one token per line in id order.
    pub fn to_file_string(&self) -> String {
        let mut out = String::from(
            "# reserved ids: <pad>=0 <bos>=1 <eos>=2 <sep>=3 <unk>=4; tokens below start at id 5\n",
        );
        for token in &self.id_to_token[RESERVED..] {
            out.push_str(token);
            out.push('\n');
        }
        out
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_file_string())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(Self::from_file_string(&text))
    }

    pub fn from_file_string(text: &str) -> Self {
        let tokens = text
            .lines()
            .filter(|l| !l.starts_with('#') && !l.is_empty())
            .map(|l| l.to_string())
            .collect();
        Self::from_tokens(tokens)
    }
}

/// Options shared by vocabulary building and meeting tokenization.
#[derive(Debug, Clone, Copy)]
pub struct TokenizeOptions {
    /// Prepend "SPEAKER :" to each utterance's text.
    pub prepend_speaker: bool,
}

impl Default for TokenizeOptions {
    fn default() -> Self {
        TokenizeOptions {
            prepend_speaker: true,
        }
    }
}

/// Count tokens over all utterances, queries, and reference summaries,
/// then keep the most frequent ones. Ties break lexicographically so the
/// result is a pure function of the corpus.
pub fn build_vocab(corpus: &Corpus, max_size: usize, opts: TokenizeOptions) -> Result<Vocabulary> {
    if max_size <= RESERVED {
        return Err(Error::invalid(format!(
            "vocab max_size must exceed the {RESERVED} reserved ids, got {max_size}"
        )));
    }
    let mut counts: HashMap<String, u64> = HashMap::new();
    let mut saw_any = false;
    for meeting in corpus.meetings() {
        for utt in &meeting.utterances {
            saw_any = true;
            for tok in split_words(&utterance_surface(
                &utt.speaker,
                &utt.text,
                opts.prepend_speaker,
            )) {
                *counts.entry(tok).or_default() += 1;
            }
        }
    }
    for sample in &corpus.samples {
        saw_any = true;
        for tok in split_words(&sample.query) {
            *counts.entry(tok).or_default() += 1;
        }
        for tok in split_words(&sample.reference_summary) {
            *counts.entry(tok).or_default() += 1;
        }
    }
    if !saw_any {
        return Err(Error::invalid("cannot build a vocabulary from an empty corpus"));
    }
    let mut ranked: Vec<(String, u64)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(max_size - RESERVED);
    Ok(Vocabulary::from_tokens(
        ranked.into_iter().map(|(t, _)| t).collect(),
    ))
}

/// One utterance's token ids; `len` is the l_i the chunker and relevance
/// expansion both rely on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizedUtterance {
    pub utterance_index: usize,
    pub token_ids: Vec<TokenId>,
}

impl TokenizedUtterance {
    pub fn len(&self) -> usize {
        self.token_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.token_ids.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizedQuery {
    pub token_ids: Vec<TokenId>,
}

impl TokenizedQuery {
    pub fn len(&self) -> usize {
        self.token_ids.len()
    }
}

/// Tokenize every utterance of a meeting, preserving order.
pub fn tokenize_meeting(
    meeting: &Meeting,
    vocab: &Vocabulary,
    opts: TokenizeOptions,
) -> Result<Vec<TokenizedUtterance>> {
    if meeting.utterances.is_empty() {
        return Err(Error::invalid(format!(
            "meeting '{}' has no utterances",
            meeting.meeting_id
        )));
    }
    meeting
        .utterances
        .iter()
        .map(|utt| {
            let ids = vocab.encode(&utterance_surface(
                &utt.speaker,
                &utt.text,
                opts.prepend_speaker,
            ));
            if ids.is_empty() {
                return Err(Error::invalid(format!(
                    "utterance {} of meeting '{}' tokenizes to zero tokens; \
                     it should have been dropped at ingestion",
                    utt.index, meeting.meeting_id
                )));
            }
            Ok(TokenizedUtterance {
                utterance_index: utt.index,
                token_ids: ids,
            })
        })
        .collect()
}

pub fn tokenize_query(query: &str, vocab: &Vocabulary) -> Result<TokenizedQuery> {
    let ids = vocab.encode(query);
    if ids.is_empty() {
        return Err(Error::invalid("query tokenizes to zero tokens"));
    }
    Ok(TokenizedQuery { token_ids: ids })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Corpus, Meeting, QuerySample, Split, Utterance};

    fn corpus_of(texts: &[&str]) -> Corpus {
        let meeting = Meeting {
            meeting_id: "m".into(),
            utterances: texts
                .iter()
                .enumerate()
                .map(|(i, t)| Utterance {
                    index: i,
                    speaker: "s".into(),
                    text: t.to_string(),
                })
                .collect(),
        };
        Corpus::from_parts(vec![meeting], vec![]).unwrap()
    }

    #[test]
    fn split_lowercases_and_keeps_punctuation() {
        assert_eq!(split_words("Don't stop."), vec!["don", "'", "t", "stop", "."]);
        assert_eq!(split_words("A a"), vec!["a", "a"]);
        assert!(split_words("   ").is_empty());
    }

    #[test]
    fn build_vocab_ranks_by_frequency_then_lexicographic() {
        // tokens: a x3, b x1
        let corpus = corpus_of(&["a a", "a b"]);
        let vocab = build_vocab(
            &corpus,
            7,
            TokenizeOptions {
                prepend_speaker: false,
            },
        )
        .unwrap();
        assert_eq!(vocab.size(), 7);
        assert_eq!(vocab.id("a"), Some(5));
        assert_eq!(vocab.id("b"), Some(6));
    }

    #[test]
    fn truncated_vocab_maps_rare_tokens_to_unk() {
        let corpus = corpus_of(&["a a", "a b"]);
        let vocab = build_vocab(
            &corpus,
            6,
            TokenizeOptions {
                prepend_speaker: false,
            },
        )
        .unwrap();
        assert_eq!(vocab.encode("b"), vec![UNK_ID]);
        assert_eq!(vocab.encode("a"), vec![5]);
    }

    #[test]
    fn build_vocab_is_deterministic() {
        let corpus = corpus_of(&["c b a", "b c c"]);
        let opts = TokenizeOptions {
            prepend_speaker: false,
        };
        let v1 = build_vocab(&corpus, 100, opts).unwrap();
        let v2 = build_vocab(&corpus, 100, opts).unwrap();
        assert_eq!(v1.to_file_string(), v2.to_file_string());
    }

    #[test]
    fn build_vocab_counts_queries_and_summaries() {
        let mut corpus = corpus_of(&["hello there"]);
        corpus.samples.push(QuerySample {
            meeting_id: "m".into(),
            query: "zebra".into(),
            reference_summary: "yak".into(),
            relevant_utterances: None,
            split: Split::Train,
        });
        let vocab = build_vocab(&corpus, 100, TokenizeOptions::default()).unwrap();
        assert!(vocab.id("zebra").is_some());
        assert!(vocab.id("yak").is_some());
    }

    #[test]
    fn encode_empty_is_empty() {
        let corpus = corpus_of(&["a"]);
        let vocab = build_vocab(&corpus, 100, TokenizeOptions::default()).unwrap();
        assert!(vocab.encode("").is_empty());
    }

    #[test]
    fn encode_case_folds() {
        let corpus = corpus_of(&["a"]);
        let vocab = build_vocab(
            &corpus,
            100,
            TokenizeOptions {
                prepend_speaker: false,
            },
        )
        .unwrap();
        assert_eq!(vocab.encode("A a"), vec![5, 5]);
    }

    #[test]
    fn decode_round_trips_normalized_text() {
        let corpus = corpus_of(&["the cat sat on the mat ."]);
        let vocab = build_vocab(
            &corpus,
            100,
            TokenizeOptions {
                prepend_speaker: false,
            },
        )
        .unwrap();
        let s = "The cat sat . on the mat";
        let normalized = split_words(s).join(" ");
        assert_eq!(vocab.decode(&vocab.encode(s)), normalized);
    }

    #[test]
    fn vocab_file_round_trip() {
        let corpus = corpus_of(&["alpha beta gamma alpha"]);
        let vocab = build_vocab(&corpus, 100, TokenizeOptions::default()).unwrap();
        let text = vocab.to_file_string();
        let reloaded = Vocabulary::from_file_string(&text);
        assert_eq!(vocab, reloaded);
        assert_eq!(text, reloaded.to_file_string());
    }

    #[test]
    fn tokenize_meeting_preserves_order_and_lengths() {
        let corpus = corpus_of(&["a b", "c d e", "f"]);
        let opts = TokenizeOptions {
            prepend_speaker: false,
        };
        let vocab = build_vocab(&corpus, 100, opts).unwrap();
        let toks = tokenize_meeting(corpus.meeting("m").unwrap(), &vocab, opts).unwrap();
        let lengths: Vec<usize> = toks.iter().map(|t| t.len()).collect();
        assert_eq!(lengths, vec![2, 3, 1]);
        let indices: Vec<usize> = toks.iter().map(|t| t.utterance_index).collect();
        assert_eq!(indices, vec![0, 1, 2]);
        let total: usize = lengths.iter().sum();
        assert_eq!(total, 6);
    }

    #[test]
    fn tokenize_meeting_rejects_empty_meeting() {
        let corpus = corpus_of(&["a"]);
        let vocab = build_vocab(&corpus, 100, TokenizeOptions::default()).unwrap();
        let empty = Meeting {
            meeting_id: "e".into(),
            utterances: vec![],
        };
        assert!(tokenize_meeting(&empty, &vocab, TokenizeOptions::default()).is_err());
    }

    #[test]
    fn speaker_prefix_is_part_of_the_stream() {
        let corpus = corpus_of(&["hello"]);
        let opts = TokenizeOptions::default();
        let vocab = build_vocab(&corpus, 100, opts).unwrap();
        let toks = tokenize_meeting(corpus.meeting("m").unwrap(), &vocab, opts).unwrap();
        // "s : hello"
        assert_eq!(toks[0].len(), 3);
    }

    #[test]
    fn vocab_too_small_is_an_error() {
        let corpus = corpus_of(&["a"]);
        assert!(build_vocab(&corpus, 5, TokenizeOptions::default()).is_err());
        assert!(build_vocab(&corpus, 4, TokenizeOptions::default()).is_err());
    }
}
