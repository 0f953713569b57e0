//! Line-delimited JSON corpus format.
//!
//! One document per line:
//!
//! ```text
//! {"doc_id": "d1", "tokens": ["Rome", "is", "old"],
//!  "gold_clusters": [[[0, 1]]], "predicted_clusters": [[[0, 1]]],
//!  "cner": [[0, 1, "LOC"]]}
//! ```
//!
//! Spans are half-open `[start, end)`. Labeled output adds four fields,
//! each an object keyed by side (`"gold"`, `"predicted"`) and parallel to
//! that side's clusters: `cluster_labels`, `mention_label_sources`,
//! `mention_labels` and `mention_overlaps`. Fields this schema does not
//! know are kept and written back unchanged.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inventory::CategoryInventory;
use crate::model::{
    validate_document, CategoryLabel, Cluster, Document, LabelSource, Mention, MentionLabel, SemanticSpan, Side, Span,
};

type RawCluster = Vec<[usize; 2]>;

#[derive(Debug, Default, Serialize, Deserialize)]
struct PerSide<T> {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gold: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    predicted: Option<T>,
}

impl<T> PerSide<T> {
    fn get(&self, side: Side) -> Option<&T> {
        match side {
            Side::Gold => self.gold.as_ref(),
            Side::Predicted => self.predicted.as_ref(),
        }
    }

    fn set(&mut self, side: Side, value: T) {
        match side {
            Side::Gold => self.gold = Some(value),
            Side::Predicted => self.predicted = Some(value),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct Record {
    doc_id: String,
    tokens: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sentence_boundaries: Option<Vec<usize>>,
    #[serde(default)]
    gold_clusters: Vec<RawCluster>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    predicted_clusters: Option<Vec<RawCluster>>,
    #[serde(default)]
    cner: Vec<(usize, usize, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cluster_labels: Option<PerSide<Vec<Option<String>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mention_label_sources: Option<PerSide<Vec<Vec<LabelSource>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mention_labels: Option<PerSide<Vec<Vec<Option<String>>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mention_overlaps: Option<PerSide<Vec<Vec<Option<f64>>>>>,
    #[serde(flatten)]
    extra: serde_json::Map<String, serde_json::Value>,
}

fn parse_span(line: usize, [start, end]: [usize; 2]) -> Result<Span> {
    Span::new(start, end).ok_or(Error::EmptySpan { line, start, end })
}

fn parse_clusters(line: usize, raw: Vec<RawCluster>) -> Result<Vec<Cluster>> {
    raw.into_iter()
        .map(|c| {
            let spans = c.into_iter().map(|s| parse_span(line, s)).collect::<Result<Vec<_>>>()?;
            Ok(Cluster::from_spans(spans))
        })
        .collect()
}

fn resolve(inventory: &CategoryInventory, line: usize, raw: &str) -> Result<CategoryLabel> {
    inventory.resolve(raw).ok_or_else(|| Error::UnknownLabel {
        line,
        label: raw.to_string(),
    })
}

fn schema(line: usize, message: impl Into<String>) -> Error {
    Error::Schema {
        line,
        message: message.into(),
    }
}

fn apply_labels(
    record: &Record,
    doc: &mut Document,
    side: Side,
    inventory: &CategoryInventory,
    line: usize,
) -> Result<()> {
    let Some(cluster_labels) = record.cluster_labels.as_ref().and_then(|l| l.get(side)) else {
        return Ok(());
    };
    let sources = record
        .mention_label_sources
        .as_ref()
        .and_then(|s| s.get(side))
        .ok_or_else(|| {
            schema(
                line,
                format!("cluster_labels.{side} without mention_label_sources.{side}"),
            )
        })?;
    let labels = record.mention_labels.as_ref().and_then(|s| s.get(side));
    let overlaps = record.mention_overlaps.as_ref().and_then(|s| s.get(side));

    let clusters = doc.clusters_mut(side);
    if cluster_labels.len() != clusters.len() || sources.len() != clusters.len() {
        return Err(schema(
            line,
            format!("{side} label fields are not parallel to clusters"),
        ));
    }

    for (ci, cluster) in clusters.iter_mut().enumerate() {
        cluster.cluster_label = cluster_labels[ci]
            .as_deref()
            .map(|raw| resolve(inventory, line, raw))
            .transpose()?;
        if sources[ci].len() != cluster.mentions.len() {
            return Err(schema(
                line,
                format!("{side} cluster {ci}: label sources are not parallel to mentions"),
            ));
        }
        for (mi, mention) in cluster.mentions.iter_mut().enumerate() {
            let label = labels
                .and_then(|l| l.get(ci))
                .and_then(|l| l.get(mi))
                .cloned()
                .flatten()
                .map(|raw| resolve(inventory, line, &raw))
                .transpose()?
                .or_else(|| cluster.cluster_label.clone());
            let overlap = overlaps
                .and_then(|o| o.get(ci))
                .and_then(|o| o.get(mi))
                .copied()
                .flatten();
            mention.label = match (sources[ci][mi], label, overlap) {
                (LabelSource::None, _, _) => MentionLabel::Unlabeled,
                (LabelSource::Direct, Some(label), Some(overlap)) => MentionLabel::Direct { label, overlap },
                (LabelSource::Propagated, Some(label), _) => MentionLabel::Propagated { label },
                (source, _, _) => {
                    return Err(schema(
                        line,
                        format!(
                            "{side} cluster {ci} mention {mi}: label_source {} lacks its label or overlap",
                            source.as_str()
                        ),
                    ))
                }
            };
        }
    }
    doc.set_labeled(side, true);
    Ok(())
}

fn record_to_document(record: Record, inventory: &CategoryInventory, line: usize) -> Result<Document> {
    let semantic_spans = record
        .cner
        .iter()
        .map(|(start, end, raw)| {
            Ok(SemanticSpan {
                span: parse_span(line, [*start, *end])?,
                label: resolve(inventory, line, raw)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut doc = Document {
        doc_id: record.doc_id.clone(),
        tokens: record.tokens.clone(),
        sentence_boundaries: record.sentence_boundaries.clone(),
        gold_clusters: parse_clusters(line, record.gold_clusters.clone())?,
        predicted_clusters: parse_clusters(line, record.predicted_clusters.clone().unwrap_or_default())?,
        semantic_spans,
        gold_labeled: false,
        predicted_labeled: false,
        extra: serde_json::Map::new(),
    };

    if let Some(violation) = validate_document(&doc).into_iter().next() {
        return Err(Error::Invalid {
            line,
            doc_id: doc.doc_id,
            violation,
        });
    }

    apply_labels(&record, &mut doc, Side::Gold, inventory, line)?;
    apply_labels(&record, &mut doc, Side::Predicted, inventory, line)?;
    doc.extra = record.extra;
    Ok(doc)
}

/// Reads a JSONL corpus, validating every document.
///
/// Fails on the first malformed line, unresolvable label, invalid span or
/// duplicate `doc_id`; errors carry the 1-based line number.
pub fn read_jsonl_corpus<R: BufRead>(reader: R, inventory: &CategoryInventory) -> Result<Vec<Document>> {
    let mut docs = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: Record = serde_json::from_str(&line).map_err(|source| Error::Json { line: line_no, source })?;
        if !seen.insert(record.doc_id.clone()) {
            return Err(Error::DuplicateDocId {
                line: line_no,
                doc_id: record.doc_id,
            });
        }
        docs.push(record_to_document(record, inventory, line_no)?);
    }
    Ok(docs)
}

fn raw_clusters(clusters: &[Cluster]) -> Vec<RawCluster> {
    clusters
        .iter()
        .map(|c| c.spans().map(|s| [s.start(), s.end()]).collect())
        .collect()
}

fn document_to_record(doc: &Document) -> Record {
    let predicted =
        (!doc.predicted_clusters.is_empty() || doc.predicted_labeled).then(|| raw_clusters(&doc.predicted_clusters));

    let mut cluster_labels = PerSide::default();
    let mut sources = PerSide::default();
    let mut labels = PerSide::default();
    let mut overlaps = PerSide::default();
    let mut any_labeled = false;
    for side in [Side::Gold, Side::Predicted] {
        if !doc.is_labeled(side) {
            continue;
        }
        any_labeled = true;
        let clusters = doc.clusters(side);
        cluster_labels.set(
            side,
            clusters
                .iter()
                .map(|c| c.cluster_label.as_ref().map(|l| l.to_string()))
                .collect(),
        );
        sources.set(
            side,
            clusters
                .iter()
                .map(|c| c.mentions.iter().map(Mention::label_source).collect())
                .collect(),
        );
        labels.set(
            side,
            clusters
                .iter()
                .map(|c| {
                    c.mentions
                        .iter()
                        .map(|m| m.assigned_label().map(|l| l.to_string()))
                        .collect()
                })
                .collect(),
        );
        overlaps.set(
            side,
            clusters
                .iter()
                .map(|c| c.mentions.iter().map(Mention::assignment_overlap).collect())
                .collect(),
        );
    }

    Record {
        doc_id: doc.doc_id.clone(),
        tokens: doc.tokens.clone(),
        sentence_boundaries: doc.sentence_boundaries.clone(),
        gold_clusters: raw_clusters(&doc.gold_clusters),
        predicted_clusters: predicted,
        cner: doc
            .semantic_spans
            .iter()
            .map(|s| (s.span.start(), s.span.end(), s.label.to_string()))
            .collect(),
        cluster_labels: any_labeled.then_some(cluster_labels),
        mention_label_sources: any_labeled.then_some(sources),
        mention_labels: any_labeled.then_some(labels),
        mention_overlaps: any_labeled.then_some(overlaps),
        extra: doc.extra.clone(),
    }
}

/// Writes one record per document, in order, including any labels and
/// label sources computed for either side.
pub fn write_labeled_jsonl<W: Write>(docs: &[Document], mut writer: W) -> Result<()> {
    for doc in docs {
        serde_json::to_writer(&mut writer, &document_to_record(doc)).map_err(std::io::Error::from)?;
        writer.write_all(b"\n")?;
    }
    writer.flush()?;
    Ok(())
}

/// Combines a gold corpus with a separately stored prediction corpus.
///
/// Predicted clusters (and their labels, when present) are taken from the
/// prediction file's `predicted_clusters`; documents are matched by
/// `doc_id` and must agree on token count. Semantic spans come from the
/// gold record unless it has none.
pub fn merge_predictions(gold: Vec<Document>, pred: Vec<Document>) -> Result<Vec<Document>> {
    let mut by_id: HashMap<String, Document> = pred.into_iter().map(|d| (d.doc_id.clone(), d)).collect();

    let missing_in_pred: Vec<String> = gold
        .iter()
        .filter(|d| !by_id.contains_key(&d.doc_id))
        .map(|d| d.doc_id.clone())
        .collect();
    let gold_ids: HashSet<&str> = gold.iter().map(|d| d.doc_id.as_str()).collect();
    let mut missing_in_gold: Vec<String> = by_id
        .keys()
        .filter(|id| !gold_ids.contains(id.as_str()))
        .cloned()
        .collect();
    missing_in_gold.sort();
    if !missing_in_pred.is_empty() || !missing_in_gold.is_empty() {
        return Err(Error::DocIdMismatch {
            missing_in_pred,
            missing_in_gold,
        });
    }

    gold.into_iter()
        .map(|mut doc| {
            let p = by_id.remove(&doc.doc_id).expect("checked above");
            if p.tokens.len() != doc.tokens.len() {
                return Err(Error::TokenMismatch {
                    doc_id: doc.doc_id,
                    gold: doc.tokens.len(),
                    pred: p.tokens.len(),
                });
            }
            doc.predicted_clusters = p.predicted_clusters;
            doc.predicted_labeled = p.predicted_labeled;
            if doc.semantic_spans.is_empty() {
                doc.semantic_spans = p.semantic_spans;
            }
            Ok(doc)
        })
        .collect()
}

/// Restricts a document to one side, for writing per-side output files.
pub fn side_only(doc: &Document, side: Side) -> Document {
    let mut out = doc.clone();
    match side {
        Side::Gold => {
            out.predicted_clusters.clear();
            out.predicted_labeled = false;
        }
        Side::Predicted => {
            out.gold_clusters.clear();
            out.gold_labeled = false;
        }
    }
    out
}

#[derive(Debug, Deserialize)]
struct CnerRecord {
    doc_id: String,
    cner: Vec<(usize, usize, String)>,
}

/// Reads a semantic-span side file: one `{"doc_id", "cner"}` object per line.
pub fn read_cner_jsonl<R: BufRead>(
    reader: R,
    inventory: &CategoryInventory,
) -> Result<BTreeMap<String, Vec<SemanticSpan>>> {
    let mut out = BTreeMap::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: CnerRecord = serde_json::from_str(&line).map_err(|source| Error::Json { line: line_no, source })?;
        let spans = record
            .cner
            .iter()
            .map(|(s, e, raw)| {
                Ok(SemanticSpan {
                    span: parse_span(line_no, [*s, *e])?,
                    label: resolve(inventory, line_no, raw)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if out.insert(record.doc_id.clone(), spans).is_some() {
            return Err(Error::DuplicateDocId {
                line: line_no,
                doc_id: record.doc_id,
            });
        }
    }
    Ok(out)
}

/// Replaces each document's semantic spans with those from a side file.
/// Documents absent from the file keep no spans; ids in the file that
/// match no document are an error.
pub fn attach_semantic_spans(docs: &mut [Document], mut spans: BTreeMap<String, Vec<SemanticSpan>>) -> Result<()> {
    for doc in docs.iter_mut() {
        doc.semantic_spans = spans.remove(&doc.doc_id).unwrap_or_default();
        if let Some(violation) = validate_document(doc).into_iter().next() {
            return Err(Error::Invalid {
                line: 0,
                doc_id: doc.doc_id.clone(),
                violation,
            });
        }
    }
    if !spans.is_empty() {
        return Err(Error::DocIdMismatch {
            missing_in_pred: vec![],
            missing_in_gold: spans.into_keys().collect(),
        });
    }
    Ok(())
}

#[derive(Debug, Deserialize)]
struct ReferenceRecord {
    doc_id: String,
    cluster: usize,
    label: String,
}

/// Reads manually verified cluster labels: one
/// `{"doc_id", "cluster", "label"}` object per line, where `cluster`
/// indexes the document's gold clusters.
pub fn read_reference_labels<R: BufRead>(
    reader: R,
    inventory: &CategoryInventory,
) -> Result<BTreeMap<(String, usize), CategoryLabel>> {
    let mut out = BTreeMap::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: ReferenceRecord =
            serde_json::from_str(&line).map_err(|source| Error::Json { line: line_no, source })?;
        let label = resolve(inventory, line_no, &record.label)?;
        out.insert((record.doc_id, record.cluster), label);
    }
    Ok(out)
}
