use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CategoryLabel, Document};

/// Agreement of system cluster labels with manually verified ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementScore {
    pub correct: usize,
    /// System-labeled clusters that have a reference entry.
    pub system_labeled: usize,
    pub reference: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Scores gold-side cluster labels against a reference keyed by
/// `(doc_id, gold cluster index)`.
pub fn label_agreement(
    reference: &BTreeMap<(String, usize), CategoryLabel>,
    docs: &[Document],
) -> Result<AgreementScore> {
    let by_id: BTreeMap<&str, &Document> = docs.iter().map(|d| (d.doc_id.as_str(), d)).collect();
    let mut correct = 0;
    let mut system_labeled = 0;
    for ((doc_id, index), expected) in reference {
        let cluster = by_id
            .get(doc_id.as_str())
            .and_then(|d| d.gold_clusters.get(*index))
            .ok_or_else(|| Error::UnknownReference {
                doc_id: doc_id.clone(),
                cluster: *index,
            })?;
        if let Some(label) = &cluster.cluster_label {
            system_labeled += 1;
            if label == expected {
                correct += 1;
            }
        }
    }
    let ratio = |n: usize, d: usize| if d == 0 { 0.0 } else { n as f64 / d as f64 };
    Ok(AgreementScore {
        correct,
        system_labeled,
        reference: reference.len(),
        precision: ratio(correct, system_labeled),
        recall: ratio(correct, reference.len()),
        f1: ratio(2 * correct, system_labeled + reference.len()),
    })
}
