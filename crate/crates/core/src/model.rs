//! Documents, mentions, clusters and semantic spans.
//!
//! All spans are half-open `[start, end)` over document-level token
//! indices. Sentence structure is optional metadata and never enters
//! scoring.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A category name from the active inventory, e.g. `PER` or `EVENT`.
///
/// Labels are trimmed and upper-cased on construction and must consist of
/// ASCII uppercase letters only.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct CategoryLabel(String);

impl CategoryLabel {
    pub fn new(raw: &str) -> Result<Self> {
        let normalized = normalize_label(raw);
        if normalized.is_empty() || !normalized.bytes().all(|b| b.is_ascii_uppercase()) {
            return Err(Error::InvalidLabel(raw.to_string()));
        }
        Ok(CategoryLabel(normalized))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub(crate) fn normalize_label(raw: &str) -> String {
    raw.trim().to_uppercase()
}

impl TryFrom<String> for CategoryLabel {
    type Error = Error;

    fn try_from(value: String) -> Result<Self> {
        CategoryLabel::new(&value)
    }
}

impl From<CategoryLabel> for String {
    fn from(label: CategoryLabel) -> String {
        label.0
    }
}

impl fmt::Display for CategoryLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Half-open token interval `[start, end)` with `start < end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    start: usize,
    end: usize,
}

impl Span {
    /// Returns `None` when `start >= end`.
    pub fn new(start: usize, end: usize) -> Option<Self> {
        (start < end).then_some(Span { start, end })
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn end(&self) -> usize {
        self.end
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn tokens(&self) -> Range<usize> {
        self.start..self.end
    }

    /// The set of token indices `{start, …, end−1}`.
    pub fn token_set(&self) -> BTreeSet<usize> {
        self.tokens().collect()
    }

    pub fn fits(&self, token_count: usize) -> bool {
        self.end <= token_count
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.start, self.end)
    }
}

/// Where a mention's label came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelSource {
    None,
    Direct,
    Propagated,
}

impl LabelSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            LabelSource::None => "none",
            LabelSource::Direct => "direct",
            LabelSource::Propagated => "propagated",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "none" => Some(LabelSource::None),
            "direct" => Some(LabelSource::Direct),
            "propagated" => Some(LabelSource::Propagated),
            _ => None,
        }
    }
}

/// Label state of a mention. A direct label always carries the overlap
/// score that won it.
#[derive(Debug, Clone, PartialEq)]
pub enum MentionLabel {
    Unlabeled,
    Direct { label: CategoryLabel, overlap: f64 },
    Propagated { label: CategoryLabel },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mention {
    pub span: Span,
    pub label: MentionLabel,
}

impl Mention {
    pub fn new(span: Span) -> Self {
        Mention {
            span,
            label: MentionLabel::Unlabeled,
        }
    }

    pub fn assigned_label(&self) -> Option<&CategoryLabel> {
        match &self.label {
            MentionLabel::Unlabeled => None,
            MentionLabel::Direct { label, .. } | MentionLabel::Propagated { label } => Some(label),
        }
    }

    pub fn label_source(&self) -> LabelSource {
        match self.label {
            MentionLabel::Unlabeled => LabelSource::None,
            MentionLabel::Direct { .. } => LabelSource::Direct,
            MentionLabel::Propagated { .. } => LabelSource::Propagated,
        }
    }

    pub fn assignment_overlap(&self) -> Option<f64> {
        match self.label {
            MentionLabel::Direct { overlap, .. } => Some(overlap),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Cluster {
    pub mentions: Vec<Mention>,
    pub cluster_label: Option<CategoryLabel>,
}

impl Cluster {
    pub fn from_spans(spans: impl IntoIterator<Item = Span>) -> Self {
        Cluster {
            mentions: spans.into_iter().map(Mention::new).collect(),
            cluster_label: None,
        }
    }

    pub fn len(&self) -> usize {
        self.mentions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mentions.is_empty()
    }

    pub fn spans(&self) -> impl Iterator<Item = Span> + '_ {
        self.mentions.iter().map(|m| m.span)
    }
}

/// A tagger-produced span carrying a category label.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SemanticSpan {
    pub span: Span,
    pub label: CategoryLabel,
}

/// Which set of clusters an operation targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Gold,
    Predicted,
}

impl Side {
    pub fn as_str(&self) -> &'static str {
        match self {
            Side::Gold => "gold",
            Side::Predicted => "predicted",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Document {
    pub doc_id: String,
    pub tokens: Vec<String>,
    pub sentence_boundaries: Option<Vec<usize>>,
    pub gold_clusters: Vec<Cluster>,
    pub predicted_clusters: Vec<Cluster>,
    pub semantic_spans: Vec<SemanticSpan>,
    /// Set once labeling has run on the gold side (or labels were read back).
    pub gold_labeled: bool,
    pub predicted_labeled: bool,
    /// Unmodeled JSONL fields, carried through unchanged.
    pub extra: serde_json::Map<String, serde_json::Value>,
}

impl Document {
    pub fn new(doc_id: impl Into<String>, tokens: Vec<String>) -> Self {
        Document {
            doc_id: doc_id.into(),
            tokens,
            ..Default::default()
        }
    }

    pub fn clusters(&self, side: Side) -> &[Cluster] {
        match side {
            Side::Gold => &self.gold_clusters,
            Side::Predicted => &self.predicted_clusters,
        }
    }

    pub fn clusters_mut(&mut self, side: Side) -> &mut Vec<Cluster> {
        match side {
            Side::Gold => &mut self.gold_clusters,
            Side::Predicted => &mut self.predicted_clusters,
        }
    }

    pub fn is_labeled(&self, side: Side) -> bool {
        match side {
            Side::Gold => self.gold_labeled,
            Side::Predicted => self.predicted_labeled,
        }
    }

    pub fn set_labeled(&mut self, side: Side, labeled: bool) {
        match side {
            Side::Gold => self.gold_labeled = labeled,
            Side::Predicted => self.predicted_labeled = labeled,
        }
    }

    /// Surface text of a span, tokens joined by single spaces.
    pub fn text(&self, span: Span) -> String {
        self.tokens[span.tokens()].join(" ")
    }
}

/// One broken document invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub field: &'static str,
    pub clusters: Vec<usize>,
    pub span: Option<Span>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field)?;
        match self.clusters.as_slice() {
            [] => {}
            [one] => write!(f, " cluster {one}")?,
            many => {
                let list: Vec<String> = many.iter().map(|c| c.to_string()).collect();
                write!(f, " clusters {}", list.join(" and "))?;
            }
        }
        if let Some(span) = self.span {
            write!(f, " span {span}")?;
        }
        write!(f, ": {}", self.message)
    }
}

/// Checks every document invariant and reports all violations found.
/// An empty result means the document is well-formed.
pub fn validate_document(doc: &Document) -> Vec<Violation> {
    let n = doc.tokens.len();
    let mut out = Vec::new();

    if doc.doc_id.is_empty() {
        out.push(Violation {
            field: "doc_id",
            clusters: vec![],
            span: None,
            message: "doc_id is empty".into(),
        });
    }

    if let Some(bounds) = &doc.sentence_boundaries {
        let increasing = bounds.windows(2).all(|w| w[0] < w[1]);
        let in_range = bounds.iter().all(|&b| b < n.max(1));
        if !increasing || !in_range {
            out.push(Violation {
                field: "sentence_boundaries",
                clusters: vec![],
                span: None,
                message: format!("sentence starts must be strictly increasing and < {n}"),
            });
        }
    }

    for (field, clusters) in [
        ("gold_clusters", &doc.gold_clusters),
        ("predicted_clusters", &doc.predicted_clusters),
    ] {
        let mut owner: HashMap<Span, usize> = HashMap::new();
        for (ci, cluster) in clusters.iter().enumerate() {
            if cluster.mentions.is_empty() {
                out.push(Violation {
                    field,
                    clusters: vec![ci],
                    span: None,
                    message: "cluster has no mentions".into(),
                });
            }
            for mention in &cluster.mentions {
                let span = mention.span;
                if !span.fits(n) {
                    out.push(Violation {
                        field,
                        clusters: vec![ci],
                        span: Some(span),
                        message: format!("span exceeds document length {n}"),
                    });
                }
                match owner.get(&span) {
                    Some(&prev) if prev == ci => out.push(Violation {
                        field,
                        clusters: vec![ci],
                        span: Some(span),
                        message: "span repeated within cluster".into(),
                    }),
                    Some(&prev) => out.push(Violation {
                        field,
                        clusters: vec![prev, ci],
                        span: Some(span),
                        message: "span belongs to two clusters".into(),
                    }),
                    None => {
                        owner.insert(span, ci);
                    }
                }
            }
        }
    }

    for sem in &doc.semantic_spans {
        if !sem.span.fits(n) {
            out.push(Violation {
                field: "cner",
                clusters: vec![],
                span: Some(sem.span),
                message: format!("span exceeds document length {n}"),
            });
        }
    }

    out
}
