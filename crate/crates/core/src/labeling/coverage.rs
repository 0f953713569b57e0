use serde::{Deserialize, Serialize};

use super::LabelingConfig;
use crate::model::{Document, LabelSource, Side};

/// Mention counts by label source, with percentages of `total`.
///
/// Every mention lands in exactly one bucket, and `any_pct` is defined as
/// `direct_pct + propagated_pct`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CoverageCounts {
    pub total: usize,
    pub direct: usize,
    pub propagated: usize,
    pub unlabeled: usize,
    pub direct_pct: f64,
    pub propagated_pct: f64,
    pub any_pct: f64,
}

impl CoverageCounts {
    fn add(&mut self, source: LabelSource) {
        self.total += 1;
        match source {
            LabelSource::Direct => self.direct += 1,
            LabelSource::Propagated => self.propagated += 1,
            LabelSource::None => self.unlabeled += 1,
        }
    }

    fn finish(mut self) -> Self {
        let pct = |n: usize| {
            if self.total == 0 {
                0.0
            } else {
                100.0 * n as f64 / self.total as f64
            }
        };
        self.direct_pct = pct(self.direct);
        self.propagated_pct = pct(self.propagated);
        self.any_pct = self.direct_pct + self.propagated_pct;
        self
    }

    pub fn labeled(&self) -> usize {
        self.direct + self.propagated
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageRow {
    pub dataset: String,
    pub side: Side,
    pub overall: CoverageCounts,
    pub pronominal: CoverageCounts,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CoverageReport {
    pub rows: Vec<CoverageRow>,
}

impl CoverageReport {
    /// Plain-text table with one line per dataset.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{:<20} {:<9} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8}\n",
            "dataset", "side", "%Dir", "%Prop", "%Any", "Pr%Dir", "Pr%Prop", "Pr%All"
        );
        for row in &self.rows {
            out += &format!(
                "{:<20} {:<9} {:>8.2} {:>8.2} {:>8.2} {:>8.2} {:>8.2} {:>8.2}\n",
                row.dataset,
                row.side.as_str(),
                row.overall.direct_pct,
                row.overall.propagated_pct,
                row.overall.any_pct,
                row.pronominal.direct_pct,
                row.pronominal.propagated_pct,
                row.pronominal.any_pct,
            );
        }
        out
    }
}

/// Coverage of one side of a labeled corpus. Pronominal counts restrict
/// to single-token mentions found in the configured pronoun lexicon.
pub fn coverage(dataset: &str, docs: &[Document], cfg: &LabelingConfig, side: Side) -> CoverageRow {
    let mut overall = CoverageCounts::default();
    let mut pronominal = CoverageCounts::default();
    for doc in docs {
        for cluster in doc.clusters(side) {
            for mention in &cluster.mentions {
                let source = mention.label_source();
                overall.add(source);
                if cfg.pronoun_lexicon.is_pronoun(doc, mention.span) {
                    pronominal.add(source);
                }
            }
        }
    }
    CoverageRow {
        dataset: dataset.to_string(),
        side,
        overall: overall.finish(),
        pronominal: pronominal.finish(),
    }
}
