use std::collections::BTreeSet;
use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use anyhow::Context;
use coref_semscore::classic::{conll, ClassicOptions};
use coref_semscore::ingest::{read_reference_labels, side_only, write_labeled_jsonl};
use coref_semscore::labeling::{coverage, distribution, label_agreement, CoverageReport, DistributionReport};
use coref_semscore::report::{compare, diagnose, to_canonical_json, Averaging, DiagnoseWeights};
use coref_semscore::typed::{typed_link_scores, typed_mention_scores};
use coref_semscore::{CategoryLabel, Document, EvalReport, EvalSettings, LinkMentionSource, Side, TypedMode};

use crate::args::{
    CompareCmd, CoverageCmd, DiagnoseCmd, DistributionCmd, EvalCmd, LabelCmd, MentionSource, ValidateLabelsCmd,
};
use crate::input::{self, CmdResult, Failure};

fn jsonl(docs: &[Document], side: Side) -> CmdResult<String> {
    let docs: Vec<Document> = docs.iter().map(|d| side_only(d, side)).collect();
    let mut buf = Vec::new();
    write_labeled_jsonl(&docs, &mut buf).context("writing labeled corpus")?;
    Ok(String::from_utf8(buf).expect("JSON is UTF-8"))
}

pub fn label(cmd: LabelCmd) -> CmdResult {
    let inventory = input::inventory()?;
    let cfg = input::labeling_config(&cmd.labeling)?;
    let mut corpus = input::load(&cmd.input, &inventory)?;
    let sides = corpus.sides();
    for doc in &mut corpus.docs {
        for &side in &sides {
            coref_semscore::label_side(doc, &cfg, side);
        }
    }

    input::write_file(&cmd.out, "gold.labeled.jsonl", &jsonl(&corpus.docs, Side::Gold)?)?;
    if corpus.has_pred {
        input::write_file(&cmd.out, "pred.labeled.jsonl", &jsonl(&corpus.docs, Side::Predicted)?)?;
    }
    let report = CoverageReport {
        rows: sides
            .iter()
            .map(|&side| coverage(&corpus.dataset, &corpus.docs, &cfg, side))
            .collect(),
    };
    input::write_file(&cmd.out, "coverage.json", &to_canonical_json(&report))?;
    print!("{}", report.to_text());
    Ok(())
}

pub fn eval(cmd: EvalCmd) -> CmdResult {
    let inventory = input::inventory()?;
    let cfg = input::labeling_config(&cmd.labeling)?;
    let mut corpus = input::load(&cmd.input, &inventory)?;
    if !corpus.has_pred && !corpus.docs.is_empty() {
        return Err(Failure::Mode(
            "evaluation needs predictions: pass --pred or include predicted_clusters".into(),
        ));
    }

    let explicit = cmd.typed_mention || cmd.typed_link || cmd.classic;
    let want_typed = cmd.typed_mention || cmd.typed_link || !explicit;
    let typed_ok = want_typed && corpus.ensure_labels(&cfg, Side::Gold) && corpus.ensure_labels(&cfg, Side::Predicted);
    if (cmd.typed_mention || cmd.typed_link) && !typed_ok {
        return Err(Failure::Mode(
            "typed evaluation needs semantic spans (--cner or cner fields) or labeled input".into(),
        ));
    }

    let link_source = match cmd.link_mention_source {
        MentionSource::Predicted => LinkMentionSource::Predicted,
        MentionSource::Gold => LinkMentionSource::Gold,
    };
    let docs = &corpus.docs;
    let report = EvalReport {
        settings: EvalSettings {
            tau: cfg.tau,
            tau_inclusive: cfg.tau_inclusive,
            force_cluster_label: cfg.force_cluster_label,
            drop_singletons: cmd.drop_singletons,
            link_mention_source: link_source,
        },
        classic: if cmd.classic || !explicit {
            let opts = ClassicOptions {
                drop_singletons: cmd.drop_singletons,
            };
            Some(conll(docs, docs, opts)?)
        } else {
            None
        },
        typed_mention: if cmd.typed_mention || (!explicit && typed_ok) {
            Some(typed_mention_scores(docs, docs)?)
        } else {
            None
        },
        typed_link: if cmd.typed_link || (!explicit && typed_ok) {
            Some(typed_link_scores(docs, docs, link_source)?)
        } else {
            None
        },
    };

    let text = report.to_text();
    if let Some(out) = &cmd.out {
        input::write_file(out, "eval.json", &report.to_json())?;
        input::write_file(out, "eval.txt", &text)?;
    }
    print!("{text}");
    Ok(())
}

pub fn coverage_cmd(cmd: CoverageCmd) -> CmdResult {
    let inventory = input::inventory()?;
    let cfg = input::labeling_config(&cmd.labeling)?;
    let mut corpus = input::load(&cmd.input, &inventory)?;
    let sides = match cmd.side {
        Some(side) => vec![input::side(side)],
        None => corpus.sides(),
    };
    for &side in &sides {
        corpus.ensure_labels(&cfg, side);
    }
    let report = CoverageReport {
        rows: sides
            .iter()
            .map(|&side| coverage(&corpus.dataset, &corpus.docs, &cfg, side))
            .collect(),
    };
    if let Some(out) = &cmd.out {
        input::write_file(out, "coverage.json", &to_canonical_json(&report))?;
    }
    print!("{}", report.to_text());
    Ok(())
}

pub fn distribution_cmd(cmd: DistributionCmd) -> CmdResult {
    let inventory = input::inventory()?;
    let cfg = input::labeling_config(&cmd.labeling)?;
    let mut corpus = input::load(&cmd.input, &inventory)?;
    let side = input::side(cmd.side);
    corpus.ensure_labels(&cfg, side);
    let report = distribution(&corpus.docs, side, &inventory);
    if let Some(out) = &cmd.out {
        input::write_file(out, "distribution.json", &to_canonical_json(&report))?;
        input::write_file(out, "distribution.csv", &report.to_csv())?;
    }
    print!("{}", report.to_text());
    Ok(())
}

fn corpus_name(path: &Path) -> String {
    path.parent()
        .and_then(Path::file_name)
        .or_else(|| path.file_stem())
        .map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

pub fn compare_cmd(cmd: CompareCmd) -> CmdResult {
    let read_all = |paths: &[std::path::PathBuf]| -> CmdResult<Vec<EvalReport>> {
        paths.iter().map(|p| input::read_json(p)).collect()
    };
    let a = read_all(&cmd.a)?;
    let b = read_all(&cmd.b)?;
    let corpora = if cmd.corpus.is_empty() {
        cmd.a.iter().map(|p| corpus_name(p)).collect()
    } else if cmd.corpus.len() == cmd.a.len() {
        cmd.corpus.clone()
    } else {
        return Err(Failure::Input(anyhow::anyhow!(
            "--corpus given {} times for {} reports",
            cmd.corpus.len(),
            cmd.a.len()
        )));
    };
    let averaging = if cmd.pool_counts {
        Averaging::PooledCounts
    } else {
        Averaging::MeanF1
    };
    let report = compare(&a, &b, corpora, averaging)?;
    if let Some(out) = &cmd.out {
        input::write_file(out, "compare.json", &to_canonical_json(&report))?;
        for mode in [TypedMode::Mention, TypedMode::Link] {
            if let Some(csv) = report.to_csv(mode) {
                input::write_file(out, &format!("compare_{}.csv", mode.as_str()), &csv)?;
            }
        }
    }
    print!("{}", report.to_text());
    Ok(())
}

pub fn diagnose_cmd(cmd: DiagnoseCmd) -> CmdResult {
    let eval: EvalReport = input::read_json(&cmd.eval)?;
    let absent = match &cmd.distribution {
        Some(path) => input::read_json::<DistributionReport>(path)?.absent,
        None => {
            let inventory = input::inventory()?;
            let present: BTreeSet<&CategoryLabel> = eval
                .typed_mention
                .iter()
                .flat_map(|r| r.per_class.iter())
                .filter(|(_, s)| s.support > 0)
                .map(|(l, _)| l)
                .collect();
            inventory
                .labels()
                .iter()
                .filter(|l| !present.contains(l))
                .cloned()
                .collect()
        }
    };
    let weights = DiagnoseWeights {
        mention: cmd.w_mention,
        link: cmd.w_link,
        rarity_cap: cmd.rarity_cap,
    };
    let report = diagnose(&eval, absent, weights)?;
    if let Some(out) = &cmd.out {
        input::write_file(out, "diagnose.json", &to_canonical_json(&report))?;
    }
    print!("{}", report.to_text());
    Ok(())
}

pub fn validate_labels(cmd: ValidateLabelsCmd) -> CmdResult {
    let inventory = input::inventory()?;
    let cfg = input::labeling_config(&cmd.labeling)?;
    let mut corpus = input::load(&cmd.input, &inventory)?;
    corpus.ensure_labels(&cfg, Side::Gold);
    let file = File::open(&cmd.reference).with_context(|| format!("{}", cmd.reference.display()))?;
    let reference = read_reference_labels(BufReader::new(file), &inventory)
        .with_context(|| format!("{}", cmd.reference.display()))?;
    let score = label_agreement(&reference, &corpus.docs).with_context(|| format!("{}", cmd.reference.display()))?;
    if let Some(out) = &cmd.out {
        input::write_file(out, "agreement.json", &to_canonical_json(&score))?;
    }
    println!(
        "clusters checked: {}  labeled: {}  correct: {}",
        score.reference, score.system_labeled, score.correct
    );
    println!(
        "precision {:.4}  recall {:.4}  f1 {:.4}",
        score.precision, score.recall, score.f1
    );
    Ok(())
}
