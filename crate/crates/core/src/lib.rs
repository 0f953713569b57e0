//! Semantically typed coreference evaluation.
//!
//! Coreference clusters are labeled with categories from a fixed inventory
//! by matching mentions against tagger spans and voting within each
//! cluster. Labeled gold and predicted clusters are then scored per class
//! (typed Mention and Link F1) alongside MUC, B³, CEAF-φ4 and CoNLL-F1.

pub mod classic;
pub mod error;
pub mod ingest;
pub mod inventory;
pub mod labeling;
pub mod model;
pub mod pairing;
pub mod report;
pub mod score;
#[cfg(feature = "synth")]
pub mod synth;
pub mod typed;

pub use classic::{ClassicOptions, ClassicReport};
pub use error::{Error, Result};
pub use inventory::CategoryInventory;
pub use labeling::{label_corpus, label_side, LabelingConfig, PronounLexicon};
pub use model::{
    validate_document, CategoryLabel, Cluster, Document, LabelSource, Mention, MentionLabel, SemanticSpan, Side, Span,
    Violation,
};
pub use report::{EvalReport, EvalSettings};
pub use score::{ClassScore, Counts, MetricTriple};
pub use typed::{LinkMentionSource, TypedMode, TypedScoreReport};
