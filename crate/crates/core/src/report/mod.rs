//! Evaluation reports and the tools that read them back: per-class
//! comparison of two systems and ranking of deficient classes.

mod compare;
mod diagnose;

use serde::{Deserialize, Serialize};

pub use compare::{compare, AggregateDelta, Averaging, ClassDelta, CompareReport, ModeComparison};
pub use diagnose::{diagnose, DiagnoseReport, DiagnoseRow, DiagnoseWeights};

use crate::classic::ClassicReport;
use crate::typed::{LinkMentionSource, TypedScoreReport};

/// Settings an evaluation ran with, recorded alongside its scores.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalSettings {
    pub tau: f64,
    pub tau_inclusive: bool,
    pub force_cluster_label: bool,
    pub drop_singletons: bool,
    pub link_mention_source: LinkMentionSource,
}

impl Default for EvalSettings {
    fn default() -> Self {
        EvalSettings {
            tau: 0.5,
            tau_inclusive: false,
            force_cluster_label: false,
            drop_singletons: false,
            link_mention_source: LinkMentionSource::Predicted,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub settings: EvalSettings,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classic: Option<ClassicReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub typed_mention: Option<TypedScoreReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub typed_link: Option<TypedScoreReport>,
}

/// Pretty JSON with object keys in sorted order and a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let value = serde_json::to_value(value).expect("report serializes");
    let mut out = serde_json::to_string_pretty(&value).expect("value serializes");
    out.push('\n');
    out
}

impl EvalReport {
    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }

    /// Summary row (CoNLL-F1 next to macro Mention and Link F1) followed
    /// by the detailed tables.
    pub fn to_text(&self) -> String {
        let cell = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |v| format!("{v:.4}"));
        let mut out = format!(
            "{:>10} {:>12} {:>12}\n{:>10} {:>12} {:>12}\n",
            "CoNLL-F1",
            "Mention F1",
            "Link F1",
            cell(self.classic.map(|c| c.conll_f1)),
            cell(self.typed_mention.as_ref().map(|r| r.macro_f1)),
            cell(self.typed_link.as_ref().map(|r| r.macro_f1)),
        );
        if let Some(classic) = &self.classic {
            out += "\n";
            out += &classic.to_text();
        }
        for typed in [&self.typed_mention, &self.typed_link].into_iter().flatten() {
            out += "\n";
            out += &typed.to_text();
        }
        out
    }
}
