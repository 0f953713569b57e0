//! Corpus readers and writers.

mod conll;
mod jsonl;

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use conll::read_conll2012;
pub use jsonl::{
    attach_semantic_spans, merge_predictions, read_cner_jsonl, read_jsonl_corpus, read_reference_labels, side_only,
    write_labeled_jsonl,
};

use crate::error::Result;
use crate::inventory::CategoryInventory;
use crate::model::Document;

/// On-disk corpus format. JSONL is the interchange format and the only one
/// that can be written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorpusFileFormat {
    #[default]
    Jsonl,
    Conll2012,
}

pub fn read_corpus_path(
    path: impl AsRef<Path>,
    format: CorpusFileFormat,
    inventory: &CategoryInventory,
) -> Result<Vec<Document>> {
    let reader = BufReader::new(File::open(path)?);
    match format {
        CorpusFileFormat::Jsonl => read_jsonl_corpus(reader, inventory),
        CorpusFileFormat::Conll2012 => read_conll2012(reader),
    }
}
