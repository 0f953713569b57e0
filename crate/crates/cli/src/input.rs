use std::fmt;
use std::fs::{self, File};
use std::io::BufReader;
use std::path::Path;

use anyhow::Context;
use coref_semscore::ingest::{self, CorpusFileFormat};
use coref_semscore::{CategoryInventory, Document, LabelingConfig, PronounLexicon, Side};
use serde::de::DeserializeOwned;

use crate::args::{Format, InputArgs, LabelingArgs, SideArg};

/// A command failure, split by exit code.
pub enum Failure {
    /// Unreadable or invalid input (exit 2).
    Input(anyhow::Error),
    /// The requested mode lacks inputs it needs (exit 3).
    Mode(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Mode(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(e) => write!(f, "{e:#}"),
            Failure::Mode(msg) => f.write_str(msg),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

impl From<coref_semscore::Error> for Failure {
    fn from(e: coref_semscore::Error) -> Self {
        match e {
            coref_semscore::Error::ReportMismatch(msg) => Failure::Mode(msg),
            other => Failure::Input(other.into()),
        }
    }
}

pub type CmdResult<T = ()> = Result<T, Failure>;

pub fn side(arg: SideArg) -> Side {
    match arg {
        SideArg::Gold => Side::Gold,
        SideArg::Predicted => Side::Predicted,
    }
}

pub fn inventory() -> CmdResult<CategoryInventory> {
    Ok(CategoryInventory::from_env().context("loading category inventory")?)
}

pub fn labeling_config(args: &LabelingArgs) -> CmdResult<LabelingConfig> {
    let pronoun_lexicon = match &args.pronouns {
        Some(path) => PronounLexicon::from_path(path).with_context(|| format!("{}", path.display()))?,
        None => PronounLexicon::default(),
    };
    let cfg = LabelingConfig {
        tau: args.tau,
        tau_inclusive: args.tau_inclusive,
        force_cluster_label: args.force_cluster_label,
        pronoun_lexicon,
        ..Default::default()
    };
    cfg.validate().context("--tau")?;
    Ok(cfg)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CmdResult<T> {
    let text = fs::read_to_string(path).with_context(|| format!("{}", path.display()))?;
    Ok(serde_json::from_str(&text).with_context(|| format!("{}", path.display()))?)
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> CmdResult {
    fs::create_dir_all(dir).with_context(|| format!("{}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("{}", path.display()))?;
    Ok(())
}

/// A gold corpus with any predictions and semantic spans merged in.
pub struct Corpus {
    pub docs: Vec<Document>,
    pub dataset: String,
    pub has_pred: bool,
    pub cner_given: bool,
}

fn read_corpus(path: &Path, format: Format, inventory: &CategoryInventory) -> CmdResult<Vec<Document>> {
    let format = match format {
        Format::Jsonl => CorpusFileFormat::Jsonl,
        Format::Conll => CorpusFileFormat::Conll2012,
    };
    Ok(ingest::read_corpus_path(path, format, inventory).with_context(|| format!("{}", path.display()))?)
}

pub fn load(args: &InputArgs, inventory: &CategoryInventory) -> CmdResult<Corpus> {
    let mut docs = read_corpus(&args.gold, args.format, inventory)?;
    let mut has_pred = docs.iter().any(|d| !d.predicted_clusters.is_empty());
    if let Some(path) = &args.pred {
        let mut pred = read_corpus(path, args.format, inventory)?;
        if args.format == Format::Conll {
            for doc in &mut pred {
                doc.predicted_clusters = std::mem::take(&mut doc.gold_clusters);
            }
        }
        docs = ingest::merge_predictions(docs, pred)
            .with_context(|| format!("{} vs {}", args.gold.display(), path.display()))?;
        has_pred = true;
    }
    if let Some(path) = &args.cner {
        let file = File::open(path).with_context(|| format!("{}", path.display()))?;
        let spans =
            ingest::read_cner_jsonl(BufReader::new(file), inventory).with_context(|| format!("{}", path.display()))?;
        ingest::attach_semantic_spans(&mut docs, spans).with_context(|| format!("{}", path.display()))?;
    }
    let dataset = args
        .gold
        .file_stem()
        .map_or_else(|| "corpus".to_string(), |s| s.to_string_lossy().into_owned());
    Ok(Corpus {
        docs,
        dataset,
        has_pred,
        cner_given: args.cner.is_some(),
    })
}

impl Corpus {
    fn has_spans(&self) -> bool {
        self.cner_given || self.docs.iter().any(|d| !d.semantic_spans.is_empty())
    }

    fn already_labeled(&self, side: Side) -> bool {
        !self.docs.is_empty() && self.docs.iter().all(|d| d.is_labeled(side))
    }

    /// Labels one side unless it already carries labels from the input
    /// (a `--cner` file always triggers relabeling). Returns whether the
    /// side ends up with labels backed by semantic spans.
    pub fn ensure_labels(&mut self, cfg: &LabelingConfig, side: Side) -> bool {
        if self.already_labeled(side) && !self.cner_given {
            return true;
        }
        for doc in &mut self.docs {
            coref_semscore::label_side(doc, cfg, side);
        }
        self.has_spans() || self.docs.is_empty()
    }

    pub fn sides(&self) -> Vec<Side> {
        if self.has_pred {
            vec![Side::Gold, Side::Predicted]
        } else {
            vec![Side::Gold]
        }
    }
}
