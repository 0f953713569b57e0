//! Two-step cluster labeling.
//!
//! Step one gives each mention the label of the semantic span it overlaps
//! best (token-level Jaccard), provided the score clears the threshold.
//! Step two takes a majority vote over a cluster's directly labeled
//! mentions and writes the winner onto the rest of the cluster, which is
//! how pronouns and other untagged mentions get a category. Clusters with
//! no directly labeled mention stay unlabeled.

mod agreement;
mod coverage;
mod distribution;
mod overlap;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use agreement::{label_agreement, AgreementScore};
pub use coverage::{coverage, CoverageCounts, CoverageReport, CoverageRow};
pub use distribution::{distribution, DistributionEntry, DistributionReport};
pub use overlap::overlap;

use crate::error::{Error, Result};
use crate::model::{CategoryLabel, Cluster, Document, MentionLabel, SemanticSpan, Side, Span};
use overlap::{cmp_overlap, intersection_union};

const DEFAULT_PRONOUNS: &str = include_str!("../../data/pronouns.txt");

/// Closed-class pronoun list, matched case-insensitively on single-token
/// mentions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PronounLexicon(BTreeSet<String>);

impl PronounLexicon {
    /// One token per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Self {
        PronounLexicon(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_lowercase)
                .collect(),
        )
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Ok(Self::parse(&std::fs::read_to_string(path)?))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.0.contains(&token.to_lowercase())
    }

    pub fn is_pronoun(&self, doc: &Document, span: Span) -> bool {
        span.len() == 1 && self.contains(&doc.tokens[span.start()])
    }
}

impl Default for PronounLexicon {
    fn default() -> Self {
        Self::parse(DEFAULT_PRONOUNS)
    }
}

/// How frequency ties in the cluster vote are broken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieBreak {
    /// Highest mean assignment overlap, then smallest label name.
    #[default]
    AvgOverlapThenLexicographic,
}

#[derive(Debug, Clone)]
pub struct LabelingConfig {
    pub tau: f64,
    /// Accept `overlap >= tau` instead of the default strict `overlap > tau`.
    pub tau_inclusive: bool,
    pub pronoun_lexicon: PronounLexicon,
    pub tie_break: TieBreak,
    /// Overwrite directly labeled mentions that disagree with the cluster
    /// vote, so every mention carries exactly its cluster's label.
    pub force_cluster_label: bool,
}

impl Default for LabelingConfig {
    fn default() -> Self {
        LabelingConfig {
            tau: 0.5,
            tau_inclusive: false,
            pronoun_lexicon: PronounLexicon::default(),
            tie_break: TieBreak::default(),
            force_cluster_label: false,
        }
    }
}

impl LabelingConfig {
    pub fn with_tau(tau: f64) -> Result<Self> {
        let cfg = LabelingConfig {
            tau,
            ..Default::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.tau) {
            return Err(Error::Config(format!("tau must lie in [0, 1], got {}", self.tau)));
        }
        Ok(())
    }

    fn accepts(&self, score: f64) -> bool {
        if self.tau_inclusive {
            score >= self.tau
        } else {
            score > self.tau
        }
    }
}

/// Best-overlapping semantic span for a mention. Spans sharing no token
/// are never candidates. Equal scores prefer the smaller start, then the
/// smaller end, then the smaller label.
fn best_span(mention: Span, spans: &[SemanticSpan]) -> Option<(&SemanticSpan, (usize, usize))> {
    let mut best: Option<(&SemanticSpan, (usize, usize))> = None;
    for sem in spans {
        let score = intersection_union(mention, sem.span);
        if score.0 == 0 {
            continue;
        }
        let better = match best {
            None => true,
            Some((cur, cur_score)) => match cmp_overlap(score, cur_score) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => {
                    (sem.span.start(), sem.span.end(), &sem.label) < (cur.span.start(), cur.span.end(), &cur.label)
                }
            },
        };
        if better {
            best = Some((sem, score));
        }
    }
    best
}

fn assign_clusters(clusters: &mut [Cluster], spans: &[SemanticSpan], cfg: &LabelingConfig) {
    for cluster in clusters {
        cluster.cluster_label = None;
        for mention in &mut cluster.mentions {
            mention.label = match best_span(mention.span, spans) {
                Some((sem, (inter, union))) => {
                    let score = inter as f64 / union as f64;
                    if cfg.accepts(score) {
                        MentionLabel::Direct {
                            label: sem.label.clone(),
                            overlap: score,
                        }
                    } else {
                        MentionLabel::Unlabeled
                    }
                }
                None => MentionLabel::Unlabeled,
            };
        }
    }
}

/// Majority vote over direct labels.
fn vote(cluster: &Cluster) -> Option<CategoryLabel> {
    let mut tally: BTreeMap<&CategoryLabel, (usize, f64)> = BTreeMap::new();
    for mention in &cluster.mentions {
        if let MentionLabel::Direct { label, overlap } = &mention.label {
            let entry = tally.entry(label).or_insert((0, 0.0));
            entry.0 += 1;
            entry.1 += overlap;
        }
    }
    let mut best: Option<(&CategoryLabel, usize, f64)> = None;
    // ascending label order, so only strict improvements replace the leader
    for (label, (count, sum)) in tally {
        let mean = sum / count as f64;
        let better = match best {
            None => true,
            Some((_, best_count, best_mean)) => count > best_count || (count == best_count && mean > best_mean),
        };
        if better {
            best = Some((label, count, mean));
        }
    }
    best.map(|(label, _, _)| label.clone())
}

fn propagate_clusters(clusters: &mut [Cluster], cfg: &LabelingConfig) {
    for cluster in clusters {
        let winner = vote(cluster);
        for mention in &mut cluster.mentions {
            mention.label = match (std::mem::replace(&mut mention.label, MentionLabel::Unlabeled), &winner) {
                (MentionLabel::Direct { label, .. }, Some(w)) if cfg.force_cluster_label && label != *w => {
                    MentionLabel::Propagated { label: w.clone() }
                }
                (direct @ MentionLabel::Direct { .. }, _) => direct,
                (_, Some(w)) => MentionLabel::Propagated { label: w.clone() },
                (_, None) => MentionLabel::Unlabeled,
            };
        }
        cluster.cluster_label = winner;
    }
}

/// Mention assignment on one side of a document. Any earlier labels on
/// that side are discarded.
pub fn assign_mentions(doc: &Document, cfg: &LabelingConfig, side: Side) -> Document {
    let mut out = doc.clone();
    assign_in_place(&mut out, cfg, side);
    out
}

/// Cluster vote and propagation on one side; expects
/// [`assign_mentions`] to have run on the same side.
pub fn propagate(doc: &Document, cfg: &LabelingConfig, side: Side) -> Document {
    let mut out = doc.clone();
    propagate_in_place(&mut out, cfg, side);
    out
}

pub fn assign_in_place(doc: &mut Document, cfg: &LabelingConfig, side: Side) {
    let spans = std::mem::take(&mut doc.semantic_spans);
    assign_clusters(doc.clusters_mut(side), &spans, cfg);
    doc.semantic_spans = spans;
    doc.set_labeled(side, true);
}

pub fn propagate_in_place(doc: &mut Document, cfg: &LabelingConfig, side: Side) {
    propagate_clusters(doc.clusters_mut(side), cfg);
    doc.set_labeled(side, true);
}

/// Assignment followed by propagation on one side.
pub fn label_side(doc: &mut Document, cfg: &LabelingConfig, side: Side) {
    assign_in_place(doc, cfg, side);
    propagate_in_place(doc, cfg, side);
}

/// Labels both sides of every document.
pub fn label_corpus(docs: &mut [Document], cfg: &LabelingConfig) {
    for doc in docs {
        label_side(doc, cfg, Side::Gold);
        label_side(doc, cfg, Side::Predicted);
    }
}
