use std::io;

use thiserror::Error;

use crate::model::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("line {line}: malformed JSON: {source}")]
    Json {
        line: usize,
        #[source]
        source: serde_json::Error,
    },

    #[error("line {line}: invalid span [{start}, {end}): start must be < end")]
    EmptySpan { line: usize, start: usize, end: usize },

    #[error("line {line}: unknown category label {label:?}")]
    UnknownLabel { line: usize, label: String },

    #[error("invalid category label {0:?}: expected uppercase letters only")]
    InvalidLabel(String),

    #[error("line {line}: duplicate doc_id {doc_id:?}")]
    DuplicateDocId { line: usize, doc_id: String },

    #[error("line {line}: document {doc_id:?}: {violation}")]
    Invalid {
        line: usize,
        doc_id: String,
        violation: Violation,
    },

    #[error("line {line}: {message}")]
    Schema { line: usize, message: String },

    #[error("CoNLL line {line}: {message}")]
    Conll { line: usize, message: String },

    #[error("corpora do not align by doc_id (missing from predictions: {missing_in_pred:?}; missing from gold: {missing_in_gold:?})")]
    DocIdMismatch {
        missing_in_pred: Vec<String>,
        missing_in_gold: Vec<String>,
    },

    #[error("document {doc_id:?}: gold has {gold} tokens but predictions have {pred}")]
    TokenMismatch { doc_id: String, gold: usize, pred: usize },

    #[error("inventory: {0}")]
    Inventory(String),

    #[error("labeling config: {0}")]
    Config(String),

    #[error("reference label for ({doc_id:?}, cluster {cluster}) matches no gold cluster")]
    UnknownReference { doc_id: String, cluster: usize },

    #[error("reports cannot be compared: {0}")]
    ReportMismatch(String),
}
