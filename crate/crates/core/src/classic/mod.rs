//! MUC, B³, CEAF-φ4 and their CoNLL average.
//!
//! Mentions are compared by exact span. A mention present on only one side
//! (a twinless mention) follows the CoNLL-2012 reference scorer: it stays
//! in its own side's denominators and matches nothing on the other side.
//! For MUC it forms its own cell when partitioning the other side's
//! clusters; for B³ it contributes 0 to the other side's intersections.
//! All `0/0` ratios are 0, so an all-singleton corpus has MUC = 0.
//!
//! Singletons are scored as given. [`ClassicOptions::drop_singletons`]
//! removes one-mention clusters from both sides first, as OntoNotes-style
//! evaluation expects.

mod assignment;

use std::collections::{HashMap, HashSet};

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

pub use assignment::max_weight_assignment;

use crate::error::Result;
use crate::model::{Cluster, Document, Span};
use crate::pairing::pair_documents;
use crate::score::{rational, FractionSum, MetricTriple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ClassicOptions {
    pub drop_singletons: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicReport {
    pub muc: MetricTriple,
    pub b_cubed: MetricTriple,
    pub ceaf_phi4: MetricTriple,
    pub conll_f1: f64,
}

/// One document's clusters as span lists plus a span → cluster index.
struct Side {
    clusters: Vec<Vec<Span>>,
    owner: HashMap<Span, usize>,
}

impl Side {
    fn new(clusters: &[Cluster], opts: ClassicOptions) -> Self {
        let clusters: Vec<Vec<Span>> = clusters
            .iter()
            .filter(|c| !(opts.drop_singletons && c.len() == 1))
            .map(|c| c.spans().collect())
            .collect();
        let owner = clusters
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.iter().map(move |&s| (s, i)))
            .collect();
        Side { clusters, owner }
    }

    fn mention_count(&self) -> u64 {
        self.clusters.iter().map(|c| c.len() as u64).sum()
    }
}

fn sides(gold_docs: &[Document], pred_docs: &[Document], opts: ClassicOptions) -> Result<Vec<(Side, Side)>> {
    Ok(pair_documents(gold_docs, pred_docs)?
        .into_iter()
        .map(|(g, p)| {
            (
                Side::new(&g.gold_clusters, opts),
                Side::new(&p.predicted_clusters, opts),
            )
        })
        .collect())
}

/// Nonzero intersection sizes `|G ∩ P|`, keyed by (gold, predicted) index.
fn intersections(gold: &Side, pred: &Side) -> HashMap<(usize, usize), u64> {
    let mut out = HashMap::new();
    for (pi, cluster) in pred.clusters.iter().enumerate() {
        for span in cluster {
            if let Some(&gi) = gold.owner.get(span) {
                *out.entry((gi, pi)).or_default() += 1;
            }
        }
    }
    out
}

/// `(Σ |K| − cells(K), Σ |K| − 1)` over the clusters `K` of `key`, where
/// `cells` counts the parts `K` splits into under `response`.
fn muc_counts(key: &Side, response: &Side) -> (u64, u64) {
    let mut num = 0;
    let mut den = 0;
    for cluster in &key.clusters {
        let mut parts = HashSet::new();
        let mut twinless = 0;
        for span in cluster {
            match response.owner.get(span) {
                Some(&i) => {
                    parts.insert(i);
                }
                None => twinless += 1,
            }
        }
        let size = cluster.len() as u64;
        num += size - (parts.len() as u64 + twinless);
        den += size - 1;
    }
    (num, den)
}

pub fn muc(gold_docs: &[Document], pred_docs: &[Document], opts: ClassicOptions) -> Result<MetricTriple> {
    let (mut rn, mut rd, mut pn, mut pd) = (0, 0, 0, 0);
    for (gold, pred) in sides(gold_docs, pred_docs, opts)? {
        let (n, d) = muc_counts(&gold, &pred);
        rn += n;
        rd += d;
        let (n, d) = muc_counts(&pred, &gold);
        pn += n;
        pd += d;
    }
    Ok(MetricTriple::from_rationals(&rational(pn, pd), &rational(rn, rd)))
}

pub fn b_cubed(gold_docs: &[Document], pred_docs: &[Document], opts: ClassicOptions) -> Result<MetricTriple> {
    let mut p_sum = FractionSum::default();
    let mut r_sum = FractionSum::default();
    let mut p_mentions = 0;
    let mut r_mentions = 0;
    for (gold, pred) in sides(gold_docs, pred_docs, opts)? {
        p_mentions += pred.mention_count();
        r_mentions += gold.mention_count();
        for ((gi, pi), n) in intersections(&gold, &pred) {
            // each of the n shared mentions scores n/|P| (precision) and n/|G| (recall)
            p_sum.add(n * n, pred.clusters[pi].len() as u64);
            r_sum.add(n * n, gold.clusters[gi].len() as u64);
        }
    }
    let mean = |sum: &FractionSum, count: u64| {
        if count == 0 {
            BigRational::zero()
        } else {
            sum.value() / BigRational::from_integer(count.into())
        }
    };
    Ok(MetricTriple::from_rationals(
        &mean(&p_sum, p_mentions),
        &mean(&r_sum, r_mentions),
    ))
}

pub fn ceaf_phi4(gold_docs: &[Document], pred_docs: &[Document], opts: ClassicOptions) -> Result<MetricTriple> {
    let mut total = FractionSum::default();
    let mut gold_clusters = 0;
    let mut pred_clusters = 0;
    for (gold, pred) in sides(gold_docs, pred_docs, opts)? {
        gold_clusters += gold.clusters.len() as u64;
        pred_clusters += pred.clusters.len() as u64;
        let shared = intersections(&gold, &pred);
        if shared.is_empty() {
            continue;
        }
        let phi = |gi: usize, pi: usize| -> (u64, u64) {
            let n = shared.get(&(gi, pi)).copied().unwrap_or(0);
            (2 * n, (gold.clusters[gi].len() + pred.clusters[pi].len()) as u64)
        };
        let weights: Vec<Vec<f64>> = (0..gold.clusters.len())
            .map(|gi| {
                (0..pred.clusters.len())
                    .map(|pi| {
                        let (n, d) = phi(gi, pi);
                        n as f64 / d as f64
                    })
                    .collect()
            })
            .collect();
        for (gi, pi) in max_weight_assignment(&weights).into_iter().enumerate() {
            if let Some(pi) = pi {
                let (n, d) = phi(gi, pi);
                total.add(n, d);
            }
        }
    }
    let total = total.value();
    let over = |count: u64| {
        if count == 0 {
            BigRational::zero()
        } else {
            &total / BigRational::from_integer(count.into())
        }
    };
    Ok(MetricTriple::from_rationals(&over(pred_clusters), &over(gold_clusters)))
}

/// All three metrics and their mean F1.
pub fn conll(gold_docs: &[Document], pred_docs: &[Document], opts: ClassicOptions) -> Result<ClassicReport> {
    let muc = muc(gold_docs, pred_docs, opts)?;
    let b_cubed = b_cubed(gold_docs, pred_docs, opts)?;
    let ceaf_phi4 = ceaf_phi4(gold_docs, pred_docs, opts)?;
    Ok(ClassicReport::from_parts(muc, b_cubed, ceaf_phi4))
}

impl ClassicReport {
    pub fn from_parts(muc: MetricTriple, b_cubed: MetricTriple, ceaf_phi4: MetricTriple) -> Self {
        ClassicReport {
            muc,
            b_cubed,
            ceaf_phi4,
            conll_f1: (muc.f1 + b_cubed.f1 + ceaf_phi4.f1) / 3.0,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{:<10} {:>9} {:>9} {:>9}\n", "metric", "precision", "recall", "f1");
        for (name, m) in [("MUC", self.muc), ("B3", self.b_cubed), ("CEAF-phi4", self.ceaf_phi4)] {
            out += &format!("{:<10} {:>9.4} {:>9.4} {:>9.4}\n", name, m.precision, m.recall, m.f1);
        }
        out += &format!("{:<10} {:>29.4}\n", "CoNLL-F1", self.conll_f1);
        out
    }
}
