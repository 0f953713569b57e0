use serde::{Deserialize, Serialize};

use super::EvalReport;
use crate::error::{Error, Result};
use crate::model::CategoryLabel;

/// Weights of the composite deficiency score
/// `(1 - mention F1)·mention + (1 - link F1)·link + min(rarity_cap, 1/support)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagnoseWeights {
    pub mention: f64,
    pub link: f64,
    pub rarity_cap: f64,
}

impl Default for DiagnoseWeights {
    fn default() -> Self {
        DiagnoseWeights {
            mention: 0.5,
            link: 0.5,
            rarity_cap: 0.2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnoseRow {
    pub label: CategoryLabel,
    pub support: u64,
    pub mention_f1: f64,
    /// `None` when the class has no gold links; the mention term then
    /// carries both weights.
    pub link_f1: Option<f64>,
    pub rarity: f64,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnoseReport {
    pub weights: DiagnoseWeights,
    /// Inventory classes with no gold support at all.
    pub absent: Vec<CategoryLabel>,
    /// Ascending score, then ascending support, then label; the most
    /// deficient class comes last.
    pub ranked: Vec<DiagnoseRow>,
}

/// Ranks the gold classes of an evaluation by how much targeted data
/// they likely need. Both typed modes must be present.
pub fn diagnose(eval: &EvalReport, absent: Vec<CategoryLabel>, weights: DiagnoseWeights) -> Result<DiagnoseReport> {
    let (Some(mention), Some(link)) = (&eval.typed_mention, &eval.typed_link) else {
        return Err(Error::ReportMismatch(
            "diagnosis needs both typed mention and typed link scores".into(),
        ));
    };

    let mut ranked: Vec<DiagnoseRow> = mention
        .per_class
        .iter()
        .filter(|(_, s)| s.support > 0)
        .map(|(label, score)| {
            let link_f1 = link.per_class.get(label).filter(|s| s.support > 0).map(|s| s.f1);
            let rarity = weights.rarity_cap.min(1.0 / score.support as f64);
            let deficiency = match link_f1 {
                Some(l) => (1.0 - score.f1) * weights.mention + (1.0 - l) * weights.link,
                None => (1.0 - score.f1) * (weights.mention + weights.link),
            };
            DiagnoseRow {
                label: label.clone(),
                support: score.support,
                mention_f1: score.f1,
                link_f1,
                rarity,
                score: deficiency + rarity,
            }
        })
        .collect();
    ranked.sort_by(|a, b| {
        a.score
            .total_cmp(&b.score)
            .then_with(|| a.support.cmp(&b.support))
            .then_with(|| a.label.cmp(&b.label))
    });

    Ok(DiagnoseReport {
        weights,
        absent,
        ranked,
    })
}

impl DiagnoseReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if !self.absent.is_empty() {
            let names: Vec<&str> = self.absent.iter().map(|l| l.as_str()).collect();
            out += &format!("absent classes: {}\n\n", names.join(", "));
        }
        out += &format!(
            "{:<12} {:>8} {:>10} {:>9} {:>8} {:>8}\n",
            "class", "support", "mention F1", "link F1", "rarity", "score"
        );
        for row in &self.ranked {
            let link = row.link_f1.map_or_else(|| "-".to_string(), |v| format!("{v:.4}"));
            out += &format!(
                "{:<12} {:>8} {:>10.4} {:>9} {:>8.4} {:>8.4}\n",
                row.label.as_str(),
                row.support,
                row.mention_f1,
                link,
                row.rarity,
                row.score
            );
        }
        out
    }
}
