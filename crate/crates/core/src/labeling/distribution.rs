use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::inventory::CategoryInventory;
use crate::model::{CategoryLabel, Document, Side};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionEntry {
    pub label: CategoryLabel,
    pub count: usize,
    pub share: f64,
}

/// Per-category mention counts over the labeled mentions of one side.
/// Unlabeled mentions are counted separately and never form a class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionReport {
    pub side: Side,
    pub labeled: usize,
    pub unlabeled: usize,
    /// Sorted by descending count, then label.
    pub entries: Vec<DistributionEntry>,
    /// Inventory categories with no labeled mention, in inventory order.
    pub absent: Vec<CategoryLabel>,
}

impl DistributionReport {
    pub fn count(&self, label: &CategoryLabel) -> usize {
        self.entries.iter().find(|e| &e.label == label).map_or(0, |e| e.count)
    }

    /// `label,count,share` rows for external plotting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("label,count,share\n");
        for e in &self.entries {
            out += &format!("{},{},{}\n", e.label, e.count, e.share);
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{:<12} {:>8} {:>8}\n", "class", "count", "share");
        for e in &self.entries {
            out += &format!("{:<12} {:>8} {:>8.4}\n", e.label.as_str(), e.count, e.share);
        }
        out += &format!("unlabeled mentions: {}\n", self.unlabeled);
        if !self.absent.is_empty() {
            let names: Vec<&str> = self.absent.iter().map(|l| l.as_str()).collect();
            out += &format!("absent: {}\n", names.join(", "));
        }
        out
    }
}

pub fn distribution(docs: &[Document], side: Side, inventory: &CategoryInventory) -> DistributionReport {
    let mut counts: BTreeMap<&CategoryLabel, usize> = BTreeMap::new();
    let mut unlabeled = 0;
    for doc in docs {
        for cluster in doc.clusters(side) {
            for mention in &cluster.mentions {
                match mention.assigned_label() {
                    Some(label) => *counts.entry(label).or_default() += 1,
                    None => unlabeled += 1,
                }
            }
        }
    }
    let labeled: usize = counts.values().sum();
    let mut entries: Vec<DistributionEntry> = counts
        .iter()
        .map(|(&label, &count)| DistributionEntry {
            label: label.clone(),
            count,
            share: count as f64 / labeled as f64,
        })
        .collect();
    entries.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.label.cmp(&b.label)));
    let absent = inventory
        .labels()
        .iter()
        .filter(|l| !counts.contains_key(l))
        .cloned()
        .collect();
    DistributionReport {
        side,
        labeled,
        unlabeled,
        entries,
        absent,
    }
}
