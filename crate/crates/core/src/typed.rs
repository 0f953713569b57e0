//! Semantically typed Mention F1 and Link F1.
//!
//! Gold-side classes come from labeling the gold clusters and
//! predicted-side classes from labeling the predicted clusters; the two
//! sides are matched by exact span identity.
//!
//! Mention mode: a predicted mention of class `t` is a true positive when a
//! gold mention has the same span and the same class; otherwise it is a
//! false positive for `t`. A gold mention of class `g` without a predicted
//! mention of the same span and class is a false negative for `g`.
//!
//! Link mode: links are the unordered mention pairs inside a cluster,
//! typed by the cluster label. A predicted link of class `t` is a true
//! positive when the same span pair is a gold link, and a false positive
//! otherwise. A gold link of class `g` that no labeled predicted link
//! covers is a false negative for `g`.
//!
//! Unlabeled mentions and links never enter per-class counts; they are
//! tallied separately. Classes are macro-averaged over those with gold
//! support; classes only the system produced still count toward micro
//! scores through their false positives.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{CategoryLabel, Cluster, Document, Span};
use crate::pairing::pair_documents;
use crate::score::{to_f64, ClassScore, Counts};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TypedMode {
    Mention,
    Link,
}

impl TypedMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            TypedMode::Mention => "mention",
            TypedMode::Link => "link",
        }
    }
}

/// Which mentions the predicted links were built over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkMentionSource {
    #[default]
    Predicted,
    Gold,
}

/// Unordered span pair with `a < b`, typed by its cluster's label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Link {
    pub a: Span,
    pub b: Span,
    pub label: Option<CategoryLabel>,
}

/// All `k(k-1)/2` links of a cluster.
pub fn links_of(cluster: &Cluster) -> Vec<Link> {
    let spans: Vec<Span> = cluster.spans().collect();
    let mut out = Vec::with_capacity(spans.len() * spans.len().saturating_sub(1) / 2);
    for (i, &x) in spans.iter().enumerate() {
        for &y in &spans[i + 1..] {
            let (a, b) = if x < y { (x, y) } else { (y, x) };
            out.push(Link {
                a,
                b,
                label: cluster.cluster_label.clone(),
            });
        }
    }
    out
}

/// Pooled and averaged scores across classes.
#[derive(Debug, Clone, PartialEq)]
pub struct Aggregates {
    pub micro: ClassScore,
    pub macro_f1: f64,
    pub averaging_classes: Vec<CategoryLabel>,
    pub system_only_classes: Vec<CategoryLabel>,
}

/// Micro scores pool counts over every class; the macro F1 is the
/// unweighted mean of per-class F1 over classes with gold support (0 when
/// there are none).
pub fn macro_micro(per_class: &BTreeMap<CategoryLabel, ClassScore>) -> Aggregates {
    let mut pooled = Counts::default();
    let mut support = 0;
    let mut sum = BigRational::zero();
    let mut averaging = Vec::new();
    let mut system_only = Vec::new();
    for (label, score) in per_class {
        pooled += score.counts();
        support += score.support;
        if score.support > 0 {
            sum += score.counts().f1_exact();
            averaging.push(label.clone());
        } else {
            system_only.push(label.clone());
        }
    }
    let macro_f1 = if averaging.is_empty() {
        0.0
    } else {
        to_f64(&(sum / BigRational::from_integer(averaging.len().into())))
    };
    Aggregates {
        micro: ClassScore::from_counts(pooled, support),
        macro_f1,
        averaging_classes: averaging,
        system_only_classes: system_only,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypedScoreReport {
    pub mode: TypedMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub link_mention_source: Option<LinkMentionSource>,
    pub per_class: BTreeMap<CategoryLabel, ClassScore>,
    pub micro: ClassScore,
    pub macro_f1: f64,
    pub averaging_classes: Vec<CategoryLabel>,
    pub system_only_classes: Vec<CategoryLabel>,
    pub unlabeled_gold: u64,
    pub unlabeled_predicted: u64,
    /// Predicted mentions outside the gold mention set, checked when links
    /// were built over gold mentions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub containment_violations: Option<u64>,
}

#[derive(Default)]
struct Tally {
    counts: BTreeMap<CategoryLabel, Counts>,
    support: BTreeMap<CategoryLabel, u64>,
    unlabeled_gold: u64,
    unlabeled_predicted: u64,
}

impl Tally {
    fn tp(&mut self, label: &CategoryLabel) {
        self.counts.entry(label.clone()).or_default().tp += 1;
    }

    fn fp(&mut self, label: &CategoryLabel) {
        self.counts.entry(label.clone()).or_default().fp += 1;
    }

    fn gold(&mut self, label: &CategoryLabel, found: bool) {
        *self.support.entry(label.clone()).or_default() += 1;
        let entry = self.counts.entry(label.clone()).or_default();
        if !found {
            entry.fn_ += 1;
        }
    }

    fn into_report(
        self,
        mode: TypedMode,
        link_mention_source: Option<LinkMentionSource>,
        containment_violations: Option<u64>,
    ) -> TypedScoreReport {
        let per_class: BTreeMap<CategoryLabel, ClassScore> = self
            .counts
            .into_iter()
            .map(|(label, counts)| {
                let support = self.support.get(&label).copied().unwrap_or(0);
                (label, ClassScore::from_counts(counts, support))
            })
            .collect();
        let agg = macro_micro(&per_class);
        TypedScoreReport {
            mode,
            link_mention_source,
            per_class,
            micro: agg.micro,
            macro_f1: agg.macro_f1,
            averaging_classes: agg.averaging_classes,
            system_only_classes: agg.system_only_classes,
            unlabeled_gold: self.unlabeled_gold,
            unlabeled_predicted: self.unlabeled_predicted,
            containment_violations,
        }
    }
}

/// Typed Mention F1 over gold clusters of `gold_docs` and predicted
/// clusters of `pred_docs`, paired by `doc_id`.
pub fn typed_mention_scores(gold_docs: &[Document], pred_docs: &[Document]) -> Result<TypedScoreReport> {
    let mut tally = Tally::default();
    for (gold, pred) in pair_documents(gold_docs, pred_docs)? {
        let gold_labels: HashMap<Span, Option<&CategoryLabel>> = gold
            .gold_clusters
            .iter()
            .flat_map(|c| c.mentions.iter())
            .map(|m| (m.span, m.assigned_label()))
            .collect();
        let pred_labels: HashMap<Span, Option<&CategoryLabel>> = pred
            .predicted_clusters
            .iter()
            .flat_map(|c| c.mentions.iter())
            .map(|m| (m.span, m.assigned_label()))
            .collect();

        for (span, label) in &pred_labels {
            match label {
                Some(t) if gold_labels.get(span) == Some(&Some(t)) => tally.tp(t),
                Some(t) => tally.fp(t),
                None => tally.unlabeled_predicted += 1,
            }
        }
        for (span, label) in &gold_labels {
            match label {
                Some(g) => tally.gold(g, pred_labels.get(span) == Some(&Some(g))),
                None => tally.unlabeled_gold += 1,
            }
        }
    }
    Ok(tally.into_report(TypedMode::Mention, None, None))
}

/// Typed Link F1. With [`LinkMentionSource::Gold`] the predicted clusters
/// are expected to cover only gold mentions; mentions outside the gold set
/// are counted in `containment_violations` and scored as usual.
pub fn typed_link_scores(
    gold_docs: &[Document],
    pred_docs: &[Document],
    source: LinkMentionSource,
) -> Result<TypedScoreReport> {
    let mut tally = Tally::default();
    let mut violations = 0;
    for (gold, pred) in pair_documents(gold_docs, pred_docs)? {
        let gold_links: HashMap<(Span, Span), Option<CategoryLabel>> = gold
            .gold_clusters
            .iter()
            .flat_map(links_of)
            .map(|l| ((l.a, l.b), l.label))
            .collect();
        let pred_links: Vec<Link> = pred.predicted_clusters.iter().flat_map(links_of).collect();
        let labeled_pred: HashSet<(Span, Span)> = pred_links
            .iter()
            .filter(|l| l.label.is_some())
            .map(|l| (l.a, l.b))
            .collect();

        for link in &pred_links {
            match &link.label {
                Some(t) if gold_links.contains_key(&(link.a, link.b)) => tally.tp(t),
                Some(t) => tally.fp(t),
                None => tally.unlabeled_predicted += 1,
            }
        }
        for (pair, label) in &gold_links {
            match label {
                Some(g) => tally.gold(g, labeled_pred.contains(pair)),
                None => tally.unlabeled_gold += 1,
            }
        }

        if source == LinkMentionSource::Gold {
            let gold_spans: HashSet<Span> = gold.gold_clusters.iter().flat_map(|c| c.spans()).collect();
            violations += pred
                .predicted_clusters
                .iter()
                .flat_map(|c| c.spans())
                .filter(|s| !gold_spans.contains(s))
                .count() as u64;
        }
    }
    let violations = (source == LinkMentionSource::Gold).then_some(violations);
    Ok(tally.into_report(TypedMode::Link, Some(source), violations))
}

impl TypedScoreReport {
    /// Per-class rows by descending gold support, then label.
    pub fn rows(&self) -> Vec<(&CategoryLabel, &ClassScore)> {
        let mut rows: Vec<_> = self.per_class.iter().collect();
        rows.sort_by(|a, b| b.1.support.cmp(&a.1.support).then_with(|| a.0.cmp(b.0)));
        rows
    }

    pub fn to_text(&self) -> String {
        let title = match self.mode {
            TypedMode::Mention => "Typed Mention F1".to_string(),
            TypedMode::Link => format!(
                "Typed Link F1 ({} mentions)",
                match self.link_mention_source.unwrap_or_default() {
                    LinkMentionSource::Predicted => "predicted",
                    LinkMentionSource::Gold => "gold",
                }
            ),
        };
        let mut out = format!("{title}\n");
        out += &format!(
            "{:<12} {:>8} {:>6} {:>6} {:>6} {:>9} {:>9} {:>9}\n",
            "class", "support", "tp", "fp", "fn", "precision", "recall", "f1"
        );
        let line = |name: &str, s: &ClassScore| {
            format!(
                "{:<12} {:>8} {:>6} {:>6} {:>6} {:>9.4} {:>9.4} {:>9.4}\n",
                name, s.support, s.tp, s.fp, s.fn_, s.precision, s.recall, s.f1
            )
        };
        for (label, score) in self.rows() {
            out += &line(label.as_str(), score);
        }
        out += &line("micro", &self.micro);
        out += &format!("{:<12} {:>49} {:>9.4}\n", "macro", "", self.macro_f1);
        out
    }
}
