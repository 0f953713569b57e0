#![allow(dead_code)]

pub mod oracle;

use std::path::PathBuf;

use coref_semscore::{CategoryLabel, Cluster, Document, MentionLabel, SemanticSpan, Span};
use rand::seq::SliceRandom;
use rand::Rng;

use oracle::{OCluster, Sp};

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn bin() -> assert_cmd::Command {
    assert_cmd::Command::new(env!("CARGO_BIN_EXE_coref-semscore"))
}

pub fn span(s: usize, e: usize) -> Span {
    Span::new(s, e).unwrap()
}

pub fn label(s: &str) -> CategoryLabel {
    CategoryLabel::new(s).unwrap()
}

pub fn words(text: &str) -> Vec<String> {
    text.split_whitespace().map(str::to_string).collect()
}

pub fn sp(s: Span) -> Sp {
    (s.start(), s.end())
}

pub fn partition(clusters: &[Cluster]) -> Vec<Vec<Sp>> {
    clusters.iter().map(|c| c.spans().map(sp).collect()).collect()
}

pub fn ocluster(c: &Cluster) -> OCluster {
    OCluster {
        spans: c.spans().map(sp).collect(),
        label: c.cluster_label.as_ref().map(|l| l.as_str().to_string()),
        mention_labels: c
            .mentions
            .iter()
            .map(|m| m.assigned_label().map(|l| l.as_str().to_string()))
            .collect(),
        direct: vec![None; c.len()],
    }
}

/// Both sides of each document in oracle form, with the labels the
/// library assigned.
pub fn oracle_sides(docs: &[Document]) -> Vec<(Vec<OCluster>, Vec<OCluster>)> {
    docs.iter()
        .map(|d| {
            (
                d.gold_clusters.iter().map(ocluster).collect(),
                d.predicted_clusters.iter().map(ocluster).collect(),
            )
        })
        .collect()
}

pub type PartitionPair = (Vec<Vec<Sp>>, Vec<Vec<Sp>>);

pub fn oracle_partitions(docs: &[Document]) -> Vec<PartitionPair> {
    docs.iter()
        .map(|d| (partition(&d.gold_clusters), partition(&d.predicted_clusters)))
        .collect()
}

pub fn oracle_cner(doc: &Document) -> Vec<(Sp, String)> {
    doc.semantic_spans
        .iter()
        .map(|s| (sp(s.span), s.label.as_str().to_string()))
        .collect()
}

/// Random partition of distinct spans inside `n` tokens.
pub fn random_clusters<R: Rng>(rng: &mut R, n: usize, max_clusters: usize, max_mentions: usize) -> Vec<Vec<Span>> {
    let mut pool: Vec<Span> = Vec::new();
    for _ in 0..rng.gen_range(0..=max_mentions) {
        let len = rng.gen_range(1..=3.min(n));
        let start = rng.gen_range(0..=n - len);
        let s = span(start, start + len);
        if !pool.contains(&s) {
            pool.push(s);
        }
    }
    let k = rng.gen_range(1..=max_clusters);
    let mut clusters: Vec<Vec<Span>> = vec![Vec::new(); k];
    for s in pool {
        clusters[rng.gen_range(0..k)].push(s);
    }
    clusters.retain(|c| !c.is_empty());
    for c in &mut clusters {
        c.sort();
    }
    clusters
}

/// A cluster with a given label written onto every mention.
pub fn typed_cluster(spans: Vec<Span>, l: Option<&CategoryLabel>) -> Cluster {
    let mut c = Cluster::from_spans(spans);
    if let Some(l) = l {
        c.cluster_label = Some(l.clone());
        for m in &mut c.mentions {
            m.label = MentionLabel::Propagated { label: l.clone() };
        }
    }
    c
}

/// Predictions derived from gold by moving, dropping and adding spans.
pub fn perturb<R: Rng>(rng: &mut R, n: usize, gold: &[Vec<Span>], max_mentions: usize) -> Vec<Vec<Span>> {
    let mut all: Vec<Span> = gold.iter().flatten().copied().collect();
    all.retain(|_| rng.gen_bool(0.85));
    if rng.gen_bool(0.5) {
        let len = rng.gen_range(1..=2.min(n));
        let start = rng.gen_range(0..=n - len);
        let s = span(start, start + len);
        if !all.contains(&s) {
            all.push(s);
        }
    }
    all.truncate(max_mentions);
    let k = gold.len().max(1) + 1;
    let mut out: Vec<Vec<Span>> = vec![Vec::new(); k];
    for s in all {
        let home = gold.iter().position(|c| c.contains(&s));
        let slot = match home {
            Some(i) if rng.gen_bool(0.7) => i,
            _ => rng.gen_range(0..k),
        };
        out[slot].push(s);
    }
    out.retain(|c| !c.is_empty());
    for c in &mut out {
        c.sort();
    }
    out
}

/// Semantic spans near random mentions, labeled from `labels`.
pub fn random_cner<R: Rng>(rng: &mut R, n: usize, mentions: &[Span], labels: &[CategoryLabel]) -> Vec<SemanticSpan> {
    let mut out = Vec::new();
    for &m in mentions {
        if !rng.gen_bool(0.7) {
            continue;
        }
        let start = (m.start() as isize + rng.gen_range(-1..=1)).clamp(0, n as isize - 1) as usize;
        let end = (m.end() as isize + rng.gen_range(-1..=1)).clamp(start as isize + 1, n as isize) as usize;
        out.push(SemanticSpan {
            span: span(start, end),
            label: labels.choose(rng).unwrap().clone(),
        });
    }
    out
}

/// A raw random document: gold, perturbed predictions and semantic spans.
pub fn random_raw_doc<R: Rng>(rng: &mut R, id: usize, labels: &[CategoryLabel]) -> Document {
    let n = rng.gen_range(6..=24);
    let gold = random_clusters(rng, n, 5, 8);
    let pred = perturb(rng, n, &gold, 8);
    let mentions: Vec<Span> = gold.iter().chain(&pred).flatten().copied().collect();
    let mut doc = Document::new(format!("d{id}"), (0..n).map(|i| format!("w{i}")).collect());
    doc.semantic_spans = random_cner(rng, n, &mentions, labels);
    doc.gold_clusters = gold.into_iter().map(Cluster::from_spans).collect();
    doc.predicted_clusters = pred.into_iter().map(Cluster::from_spans).collect();
    doc
}

pub fn labels(names: &[&str]) -> Vec<CategoryLabel> {
    names.iter().map(|n| label(n)).collect()
}
