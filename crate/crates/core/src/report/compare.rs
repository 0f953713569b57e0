use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::EvalReport;
use crate::error::{Error, Result};
use crate::model::CategoryLabel;
use crate::score::Counts;
use crate::typed::{TypedMode, TypedScoreReport};

/// How scores from several evaluation corpora are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Averaging {
    /// Mean of per-corpus F1 values.
    #[default]
    MeanF1,
    /// F1 of tp/fp/fn summed over corpora.
    PooledCounts,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassDelta {
    pub label: CategoryLabel,
    pub support: u64,
    pub f1_a: f64,
    pub f1_b: f64,
    /// `f1_b - f1_a`.
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AggregateDelta {
    pub a: f64,
    pub b: f64,
    pub delta: f64,
}

impl AggregateDelta {
    fn new(a: f64, b: f64) -> Self {
        AggregateDelta { a, b, delta: b - a }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeComparison {
    /// By descending support, then label.
    pub classes: Vec<ClassDelta>,
    pub macro_f1: AggregateDelta,
    pub micro_f1: AggregateDelta,
}

/// System B measured against baseline A, per class and mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub averaging: Averaging,
    /// Evaluation corpora the scores were combined over, in input order.
    pub corpora: Vec<String>,
    pub modes: BTreeMap<TypedMode, ModeComparison>,
}

fn typed(report: &EvalReport, mode: TypedMode) -> Option<&TypedScoreReport> {
    match mode {
        TypedMode::Mention => report.typed_mention.as_ref(),
        TypedMode::Link => report.typed_link.as_ref(),
    }
}

fn universe(report: &TypedScoreReport) -> BTreeMap<&CategoryLabel, u64> {
    report
        .per_class
        .iter()
        .filter(|(_, s)| s.support > 0)
        .map(|(l, s)| (l, s.support))
        .collect()
}

fn mean(values: impl IntoIterator<Item = f64>) -> f64 {
    let (sum, n) = values.into_iter().fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

fn compare_mode(a: &[&TypedScoreReport], b: &[&TypedScoreReport], averaging: Averaging) -> Result<ModeComparison> {
    let mut classes: BTreeMap<CategoryLabel, (u64, Vec<usize>)> = BTreeMap::new();
    for (i, (ra, rb)) in a.iter().zip(b).enumerate() {
        let ua = universe(ra);
        if ua != universe(rb) {
            return Err(Error::ReportMismatch(format!(
                "corpus {i}: {} reports cover different gold classes or supports",
                ra.mode.as_str()
            )));
        }
        if ra.link_mention_source != rb.link_mention_source {
            return Err(Error::ReportMismatch(format!(
                "corpus {i}: link mention sources differ"
            )));
        }
        for (label, support) in ua {
            let entry = classes.entry(label.clone()).or_default();
            entry.0 += support;
            entry.1.push(i);
        }
    }

    let class_f1 = |reports: &[&TypedScoreReport], label: &CategoryLabel, corpora: &[usize]| match averaging {
        Averaging::MeanF1 => mean(corpora.iter().map(|&i| reports[i].per_class[label].f1)),
        Averaging::PooledCounts => {
            let mut pooled = Counts::default();
            for &i in corpora {
                pooled += reports[i].per_class[label].counts();
            }
            pooled.f1()
        }
    };

    let mut rows: Vec<ClassDelta> = classes
        .iter()
        .map(|(label, (support, corpora))| {
            let f1_a = class_f1(a, label, corpora);
            let f1_b = class_f1(b, label, corpora);
            ClassDelta {
                label: label.clone(),
                support: *support,
                f1_a,
                f1_b,
                delta: f1_b - f1_a,
            }
        })
        .collect();
    rows.sort_by(|x, y| y.support.cmp(&x.support).then_with(|| x.label.cmp(&y.label)));

    let (macro_f1, micro_f1) = match averaging {
        Averaging::MeanF1 => (
            AggregateDelta::new(mean(a.iter().map(|r| r.macro_f1)), mean(b.iter().map(|r| r.macro_f1))),
            AggregateDelta::new(mean(a.iter().map(|r| r.micro.f1)), mean(b.iter().map(|r| r.micro.f1))),
        ),
        Averaging::PooledCounts => {
            let pooled_micro = |reports: &[&TypedScoreReport]| {
                let mut c = Counts::default();
                for r in reports {
                    c += r.micro.counts();
                }
                c.f1()
            };
            (
                AggregateDelta::new(mean(rows.iter().map(|r| r.f1_a)), mean(rows.iter().map(|r| r.f1_b))),
                AggregateDelta::new(pooled_micro(a), pooled_micro(b)),
            )
        }
    };

    Ok(ModeComparison {
        classes: rows,
        macro_f1,
        micro_f1,
    })
}

/// Compares baseline reports `a` against system reports `b`, pairing the
/// i-th report of each (one per evaluation corpus). Both sides must carry
/// the same typed modes and, per corpus, the same gold classes.
pub fn compare(
    a: &[EvalReport],
    b: &[EvalReport],
    corpora: Vec<String>,
    averaging: Averaging,
) -> Result<CompareReport> {
    if a.is_empty() || a.len() != b.len() {
        return Err(Error::ReportMismatch(format!(
            "need the same non-zero number of reports on both sides, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    if corpora.len() != a.len() {
        return Err(Error::ReportMismatch(
            "one corpus name per report pair is required".into(),
        ));
    }

    let mut modes = BTreeMap::new();
    for mode in [TypedMode::Mention, TypedMode::Link] {
        let present: BTreeSet<bool> = a.iter().chain(b).map(|r| typed(r, mode).is_some()).collect();
        match present.len() {
            2 => {
                return Err(Error::ReportMismatch(format!(
                    "typed {} scores are missing from some reports",
                    mode.as_str()
                )))
            }
            _ if present.contains(&false) => continue,
            _ => {}
        }
        let ra: Vec<&TypedScoreReport> = a.iter().filter_map(|r| typed(r, mode)).collect();
        let rb: Vec<&TypedScoreReport> = b.iter().filter_map(|r| typed(r, mode)).collect();
        modes.insert(mode, compare_mode(&ra, &rb, averaging)?);
    }
    if modes.is_empty() {
        return Err(Error::ReportMismatch("reports contain no typed scores".into()));
    }

    Ok(CompareReport {
        averaging,
        corpora,
        modes,
    })
}

impl CompareReport {
    /// `class,delta` rows for one mode, for external plotting.
    pub fn to_csv(&self, mode: TypedMode) -> Option<String> {
        let cmp = self.modes.get(&mode)?;
        let mut out = String::from("class,delta\n");
        for row in &cmp.classes {
            out += &format!("{},{}\n", row.label, row.delta);
        }
        Some(out)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (mode, cmp) in &self.modes {
            out += &format!("{} F1 delta (B - A)\n", mode.as_str());
            out += &format!(
                "{:<12} {:>8} {:>9} {:>9} {:>9}\n",
                "class", "support", "A", "B", "delta"
            );
            for row in &cmp.classes {
                out += &format!(
                    "{:<12} {:>8} {:>9.4} {:>9.4} {:>+9.4}\n",
                    row.label.as_str(),
                    row.support,
                    row.f1_a,
                    row.f1_b,
                    row.delta
                );
            }
            for (name, agg) in [("macro", cmp.macro_f1), ("micro", cmp.micro_f1)] {
                out += &format!(
                    "{:<12} {:>8} {:>9.4} {:>9.4} {:>+9.4}\n",
                    name, "", agg.a, agg.b, agg.delta
                );
            }
            out += "\n";
        }
        out
    }
}
