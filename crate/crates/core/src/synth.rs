//! Random corpora for property tests and benchmarks.
//!
//! Predicted clusters are derived from the gold ones by dropping, shifting
//! and reassigning mentions, so the two sides overlap the way real system
//! output does. Semantic spans mostly sit on or near gold mentions.

use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::model::{CategoryLabel, Cluster, Document, SemanticSpan, Span};

const PRONOUNS: [&str; 6] = ["he", "she", "it", "they", "him", "her"];

#[derive(Debug, Clone)]
pub struct SynthConfig {
    pub tokens: RangeInclusive<usize>,
    pub max_clusters: usize,
    pub max_mentions: usize,
    pub max_span_len: usize,
    pub labels: Vec<CategoryLabel>,
    /// Probability that a gold mention gets a semantic span near it.
    pub tag_rate: f64,
    /// Per-mention probability of a prediction error.
    pub noise: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            tokens: 20..=60,
            max_clusters: 6,
            max_mentions: 4,
            max_span_len: 4,
            labels: ["PER", "LOC", "ORG", "EVENT", "ARTIFACT", "ANIMAL", "DATETIME"]
                .iter()
                .map(|l| CategoryLabel::new(l).expect("valid label"))
                .collect(),
            tag_rate: 0.6,
            noise: 0.25,
        }
    }
}

fn random_span<R: Rng>(rng: &mut R, n: usize, max_len: usize) -> Span {
    let len = rng.gen_range(1..=max_len.min(n).max(1));
    let start = rng.gen_range(0..=n - len);
    Span::new(start, start + len).expect("non-empty")
}

fn jitter<R: Rng>(rng: &mut R, span: Span, n: usize) -> Span {
    let start = (span.start() as isize + rng.gen_range(-1..=1)).clamp(0, n as isize - 1) as usize;
    let end = (span.end() as isize + rng.gen_range(-1..=1)).clamp(start as isize + 1, n as isize);
    Span::new(start, end as usize).expect("non-empty")
}

fn gold_clusters<R: Rng>(rng: &mut R, n: usize, cfg: &SynthConfig) -> Vec<Vec<Span>> {
    let mut used = BTreeSet::new();
    let mut clusters = Vec::new();
    for _ in 0..rng.gen_range(0..=cfg.max_clusters) {
        let mut spans = Vec::new();
        for _ in 0..rng.gen_range(1..=cfg.max_mentions.max(1)) {
            for _ in 0..8 {
                let span = random_span(rng, n, cfg.max_span_len);
                if used.insert(span) {
                    spans.push(span);
                    break;
                }
            }
        }
        if !spans.is_empty() {
            spans.sort();
            clusters.push(spans);
        }
    }
    clusters
}

fn predicted_clusters<R: Rng>(rng: &mut R, n: usize, gold: &[Vec<Span>], cfg: &SynthConfig) -> Vec<Vec<Span>> {
    let slots = gold.len() + 2;
    let mut out: Vec<Vec<Span>> = vec![Vec::new(); slots];
    let mut used = BTreeSet::new();
    let mut place = |span: Span, slot: usize, out: &mut Vec<Vec<Span>>| {
        if used.insert(span) {
            out[slot].push(span);
        }
    };
    for (ci, spans) in gold.iter().enumerate() {
        for &span in spans {
            if rng.gen_bool(cfg.noise / 2.0) {
                continue;
            }
            let span = if rng.gen_bool(cfg.noise / 2.0) {
                jitter(rng, span, n)
            } else {
                span
            };
            let slot = if rng.gen_bool(cfg.noise) {
                rng.gen_range(0..slots)
            } else {
                ci
            };
            place(span, slot, &mut out);
        }
    }
    for _ in 0..rng.gen_range(0..=2) {
        if rng.gen_bool(cfg.noise) {
            let span = random_span(rng, n, cfg.max_span_len);
            let slot = rng.gen_range(0..slots);
            place(span, slot, &mut out);
        }
    }
    out.retain(|c| !c.is_empty());
    for c in &mut out {
        c.sort();
    }
    out
}

/// One random document with gold clusters, predicted clusters and
/// semantic spans.
pub fn document<R: Rng>(rng: &mut R, doc_id: impl Into<String>, cfg: &SynthConfig) -> Document {
    let n = rng.gen_range(cfg.tokens.clone()).max(1);
    let mut tokens: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
    let gold = gold_clusters(rng, n, cfg);
    let pred = predicted_clusters(rng, n, &gold, cfg);

    let mut semantic_spans = Vec::new();
    for spans in &gold {
        let kind = cfg.labels.choose(rng).cloned();
        for &span in spans {
            if span.len() == 1 && rng.gen_bool(0.3) {
                tokens[span.start()] = PRONOUNS.choose(rng).unwrap().to_string();
                continue;
            }
            if !rng.gen_bool(cfg.tag_rate) {
                continue;
            }
            let label = if rng.gen_bool(0.8) {
                kind.clone()
            } else {
                cfg.labels.choose(rng).cloned()
            };
            if let Some(label) = label {
                let span = if rng.gen_bool(0.3) { jitter(rng, span, n) } else { span };
                semantic_spans.push(SemanticSpan { span, label });
            }
        }
    }
    if let Some(label) = cfg.labels.choose(rng) {
        if rng.gen_bool(0.5) {
            semantic_spans.push(SemanticSpan {
                span: random_span(rng, n, cfg.max_span_len),
                label: label.clone(),
            });
        }
    }

    let mut doc = Document::new(doc_id, tokens);
    doc.gold_clusters = gold.into_iter().map(Cluster::from_spans).collect();
    doc.predicted_clusters = pred.into_iter().map(Cluster::from_spans).collect();
    doc.semantic_spans = semantic_spans;
    doc
}

/// `docs` random documents with ids `doc000`, `doc001`, ...
pub fn corpus<R: Rng>(rng: &mut R, docs: usize, cfg: &SynthConfig) -> Vec<Document> {
    (0..docs).map(|i| document(rng, format!("doc{i:03}"), cfg)).collect()
}
