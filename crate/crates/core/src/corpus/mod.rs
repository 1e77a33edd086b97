//! Meeting/query data model, JSONL persistence, and corpus synthesis.

mod qmsum;
mod synthetic;

pub use qmsum::import_qmsum;
pub use synthetic::{generate_synthetic, SyntheticConfig};

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tokenizer::split_words;

/// One participant statement. `index` always equals the position in the
/// parent meeting's utterance list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Utterance {
    pub index: usize,
    pub speaker: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Meeting {
    pub meeting_id: String,
    pub utterances: Vec<Utterance>,
}

impl Meeting {
    pub fn len(&self) -> usize {
        self.utterances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.utterances.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Dev,
    Test,
}

impl std::fmt::Display for Split {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Split::Train => write!(f, "train"),
            Split::Dev => write!(f, "dev"),
            Split::Test => write!(f, "test"),
        }
    }
}

impl std::str::FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(Split::Train),
            "dev" => Ok(Split::Dev),
            "test" => Ok(Split::Test),
            other => Err(Error::invalid(format!(
                "unknown split '{other}' (expected train|dev|test)"
            ))),
        }
    }
}

/// A query over one meeting, with its reference summary and optional
/// annotated relevant-utterance indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuerySample {
    pub meeting_id: String,
    pub query: String,
    pub reference_summary: String,
    /// Sorted, deduplicated utterance indices when annotated.
    pub relevant_utterances: Option<Vec<usize>>,
    pub split: Split,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Corpus {
    meetings: BTreeMap<String, Meeting>,
    pub samples: Vec<QuerySample>,
}

impl Corpus {
    /// Assemble and validate: meeting ids unique, utterance indices
    /// contiguous from 0, samples resolve, annotations in range.
    pub fn from_parts(meetings: Vec<Meeting>, samples: Vec<QuerySample>) -> Result<Corpus> {
        let mut map = BTreeMap::new();
        for meeting in meetings {
            if meeting.utterances.is_empty() {
                return Err(Error::invalid(format!(
                    "meeting '{}' has no utterances",
                    meeting.meeting_id
                )));
            }
            for (pos, utt) in meeting.utterances.iter().enumerate() {
                if utt.index != pos {
                    return Err(Error::invalid(format!(
                        "meeting '{}': utterance index {} at position {pos}",
                        meeting.meeting_id, utt.index
                    )));
                }
                if split_words(&utt.text).is_empty() {
                    return Err(Error::invalid(format!(
                        "meeting '{}': utterance {pos} has no tokens",
                        meeting.meeting_id
                    )));
                }
            }
            if map
                .insert(meeting.meeting_id.clone(), meeting)
                .is_some()
            {
                return Err(Error::invalid("duplicate meeting_id"));
            }
        }
        let corpus = Corpus {
            meetings: map,
            samples: vec![],
        };
        let mut out = corpus;
        for sample in samples {
            out.validate_sample(&sample)?;
            out.samples.push(sample);
        }
        Ok(out)
    }

    fn validate_sample(&self, sample: &QuerySample) -> Result<()> {
        let meeting = self.meetings.get(&sample.meeting_id).ok_or_else(|| {
            Error::invalid(format!(
                "sample references unknown meeting_id '{}'",
                sample.meeting_id
            ))
        })?;
        if sample.query.trim().is_empty() {
            return Err(Error::invalid(format!(
                "sample for meeting '{}' has an empty query",
                sample.meeting_id
            )));
        }
        if let Some(rel) = &sample.relevant_utterances {
            for &idx in rel {
                if idx >= meeting.len() {
                    return Err(Error::invalid(format!(
                        "sample for meeting '{}': relevant utterance index {idx} \
                         out of range (meeting has {} utterances)",
                        sample.meeting_id,
                        meeting.len()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn meetings(&self) -> impl Iterator<Item = &Meeting> {
        self.meetings.values()
    }

    pub fn num_meetings(&self) -> usize {
        self.meetings.len()
    }

    pub fn meeting(&self, id: &str) -> Option<&Meeting> {
        self.meetings.get(id)
    }

    pub fn split_samples(&self, split: Split) -> Vec<(usize, &QuerySample)> {
        self.samples
            .iter()
            .enumerate()
            .filter(|(_, s)| s.split == split)
            .collect()
    }

    /// Per-sample (meeting_id, query_index) keys, where query_index is the
    /// sample's ordinal among this meeting's samples in corpus order. The
    /// scores.jsonl and summaries.jsonl interfaces identify samples this way.
    pub fn sample_keys(&self) -> Vec<(String, usize)> {
        let mut counters: BTreeMap<&str, usize> = BTreeMap::new();
        self.samples
            .iter()
            .map(|s| {
                let c = counters.entry(s.meeting_id.as_str()).or_insert(0);
                let key = (s.meeting_id.clone(), *c);
                *c += 1;
                key
            })
            .collect()
    }

    pub fn find_sample(&self, meeting_id: &str, query_index: usize) -> Option<usize> {
        self.sample_keys()
            .iter()
            .position(|(m, q)| m == meeting_id && *q == query_index)
    }
}

#[derive(Serialize, Deserialize)]
struct UtteranceWire {
    speaker: String,
    text: String,
}

#[derive(Serialize, Deserialize)]
struct MeetingWire {
    meeting_id: String,
    utterances: Vec<UtteranceWire>,
}

#[derive(Serialize, Deserialize)]
struct SampleWire {
    meeting_id: String,
    query: String,
    summary: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    relevant_utterances: Option<Vec<usize>>,
    split: Split,
}

/// `load_corpus` result: the corpus plus ingestion warnings (dropped
/// empty utterances, annotations lost to compaction).
pub struct LoadedCorpus {
    pub corpus: Corpus,
    pub warnings: Vec<String>,
}

impl LoadedCorpus {
    pub fn into_corpus(self) -> Corpus {
        self.corpus
    }
}

fn read_jsonl<T: serde::de::DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let file = std::fs::File::open(path).map_err(|e| {
        Error::invalid(format!("cannot open {}: {e}", path.display()))
    })?;
    let reader = BufReader::new(file);
    let mut out = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let value: T = serde_json::from_str(&line)
            .map_err(|e| Error::malformed(path, lineno + 1, e.to_string()))?;
        out.push(value);
    }
    Ok(out)
}

/// Load meetings.jsonl + samples.jsonl into a validated corpus.
///
/// Utterances whose text tokenizes to nothing are dropped and the
/// remaining indices compacted; sample annotations are remapped through
/// the compaction (annotations pointing only at dropped utterances are
/// removed, with a warning).
pub fn load_corpus(meetings_path: &Path, samples_path: &Path) -> Result<LoadedCorpus> {
    let meeting_wires: Vec<MeetingWire> = read_jsonl(meetings_path)?;
    let sample_wires: Vec<SampleWire> = read_jsonl(samples_path)?;

    let mut warnings = Vec::new();
    let mut meetings = Vec::new();
    // old index -> new index per meeting, and the original count
    let mut remaps: BTreeMap<String, (Vec<Option<usize>>, usize)> = BTreeMap::new();

    for wire in meeting_wires {
        let original = wire.utterances.len();
        let mut remap = vec![None; original];
        let mut kept = Vec::new();
        for (old_idx, u) in wire.utterances.into_iter().enumerate() {
            if split_words(&u.text).is_empty() {
                warnings.push(format!(
                    "meeting '{}': dropped empty utterance at index {old_idx}",
                    wire.meeting_id
                ));
                continue;
            }
            remap[old_idx] = Some(kept.len());
            kept.push(Utterance {
                index: kept.len(),
                speaker: u.speaker,
                text: u.text,
            });
        }
        if kept.is_empty() {
            return Err(Error::invalid(format!(
                "meeting '{}' has no utterances with text",
                wire.meeting_id
            )));
        }
        if remaps
            .insert(wire.meeting_id.clone(), (remap, original))
            .is_some()
        {
            return Err(Error::invalid(format!(
                "duplicate meeting_id '{}'",
                wire.meeting_id
            )));
        }
        meetings.push(Meeting {
            meeting_id: wire.meeting_id,
            utterances: kept,
        });
    }

    let mut samples = Vec::new();
    for wire in sample_wires {
        let (remap, original) = remaps.get(&wire.meeting_id).ok_or_else(|| {
            Error::invalid(format!(
                "sample references unknown meeting_id '{}'",
                wire.meeting_id
            ))
        })?;
        let relevant = match wire.relevant_utterances {
            None => None,
            Some(indices) => {
                let mut mapped = Vec::new();
                for idx in &indices {
                    if *idx >= *original {
                        return Err(Error::invalid(format!(
                            "sample for meeting '{}': relevant utterance index {idx} \
                             out of range (meeting has {original} utterances)",
                            wire.meeting_id
                        )));
                    }
                    match remap[*idx] {
                        Some(new_idx) => mapped.push(new_idx),
                        None => warnings.push(format!(
                            "meeting '{}': annotation for dropped utterance {idx} removed",
                            wire.meeting_id
                        )),
                    }
                }
                mapped.sort_unstable();
                mapped.dedup();
                Some(mapped)
            }
        };
        samples.push(QuerySample {
            meeting_id: wire.meeting_id,
            query: wire.query,
            reference_summary: wire.summary,
            relevant_utterances: relevant,
            split: wire.split,
        });
    }

    let corpus = Corpus::from_parts(meetings, samples)?;
    Ok(LoadedCorpus { corpus, warnings })
}

/// Inverse of `load_corpus`; writes UTF-8 JSONL with LF line endings.
pub fn save_corpus(corpus: &Corpus, meetings_path: &Path, samples_path: &Path) -> Result<()> {
    let mut mf = std::fs::File::create(meetings_path)?;
    for meeting in corpus.meetings() {
        let wire = MeetingWire {
            meeting_id: meeting.meeting_id.clone(),
            utterances: meeting
                .utterances
                .iter()
                .map(|u| UtteranceWire {
                    speaker: u.speaker.clone(),
                    text: u.text.clone(),
                })
                .collect(),
        };
        serde_json::to_writer(&mut mf, &wire).map_err(|e| Error::invalid(e.to_string()))?;
        mf.write_all(b"\n")?;
    }
    let mut sf = std::fs::File::create(samples_path)?;
    for sample in &corpus.samples {
        let wire = SampleWire {
            meeting_id: sample.meeting_id.clone(),
            query: sample.query.clone(),
            summary: sample.reference_summary.clone(),
            relevant_utterances: sample.relevant_utterances.clone(),
            split: sample.split,
        };
        serde_json::to_writer(&mut sf, &wire).map_err(|e| Error::invalid(e.to_string()))?;
        sf.write_all(b"\n")?;
    }
    Ok(())
}

pub const MEETINGS_FILE: &str = "meetings.jsonl";
pub const SAMPLES_FILE: &str = "samples.jsonl";

/// Load a corpus from the directory convention used by the CLI.
pub fn load_dir(dir: &Path) -> Result<LoadedCorpus> {
    load_corpus(&dir.join(MEETINGS_FILE), &dir.join(SAMPLES_FILE))
}

pub fn save_dir(corpus: &Corpus, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    save_corpus(corpus, &dir.join(MEETINGS_FILE), &dir.join(SAMPLES_FILE))
}
