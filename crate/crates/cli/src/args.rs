use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "coref-semscore", version)]
#[command(about = "Label coreference clusters with semantic categories and score them per class")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Label gold and predicted clusters and write labeled JSONL plus coverage
    Label(LabelCmd),
    /// Score predictions against gold (typed Mention/Link F1 and classic metrics)
    Eval(EvalCmd),
    /// Report how many mentions received a label, overall and for pronouns
    Coverage(CoverageCmd),
    /// Count labeled mentions per category
    Distribution(DistributionCmd),
    /// Per-class F1 deltas of system B over baseline A
    Compare(CompareCmd),
    /// Rank classes by a composite deficiency score
    Diagnose(DiagnoseCmd),
    /// Check gold cluster labels against manually verified ones
    ValidateLabels(ValidateLabelsCmd),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Jsonl,
    Conll,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MentionSource {
    Predicted,
    Gold,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Gold,
    Predicted,
}

#[derive(Args)]
pub struct InputArgs {
    /// Gold corpus
    #[arg(long)]
    pub gold: PathBuf,

    /// Predicted corpus, matched to gold by doc_id
    #[arg(long)]
    pub pred: Option<PathBuf>,

    /// Semantic spans, one {"doc_id", "cner"} object per line
    #[arg(long)]
    pub cner: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "jsonl")]
    pub format: Format,
}

#[derive(Args)]
pub struct LabelingArgs {
    /// Overlap threshold a semantic span must exceed
    #[arg(long, default_value_t = 0.5)]
    pub tau: f64,

    /// Accept overlap equal to the threshold
    #[arg(long)]
    pub tau_inclusive: bool,

    /// Give every mention its cluster's label, overwriting disagreeing direct labels
    #[arg(long)]
    pub force_cluster_label: bool,

    /// Pronoun list (one per line) used for pronominal coverage
    #[arg(long)]
    pub pronouns: Option<PathBuf>,
}

#[derive(Args)]
pub struct LabelCmd {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub labeling: LabelingArgs,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct EvalCmd {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub labeling: LabelingArgs,

    #[arg(long)]
    pub typed_mention: bool,
    #[arg(long)]
    pub typed_link: bool,
    #[arg(long)]
    pub classic: bool,

    /// Mentions the predicted links were built over
    #[arg(long, value_enum, default_value = "predicted")]
    pub link_mention_source: MentionSource,

    /// Remove singleton clusters before classic scoring
    #[arg(long)]
    pub drop_singletons: bool,

    /// Directory for eval.json and eval.txt
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct CoverageCmd {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub labeling: LabelingArgs,
    /// Restrict to one side (default: gold, plus predicted when present)
    #[arg(long, value_enum)]
    pub side: Option<SideArg>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct DistributionCmd {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub labeling: LabelingArgs,
    #[arg(long, value_enum, default_value = "gold")]
    pub side: SideArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct CompareCmd {
    /// Baseline eval.json, once per evaluation corpus
    #[arg(long = "a", required = true)]
    pub a: Vec<PathBuf>,

    /// System eval.json, in the same corpus order as --a
    #[arg(long = "b", required = true)]
    pub b: Vec<PathBuf>,

    /// Corpus names for the averaging metadata (default: parent directory of each --a report)
    #[arg(long = "corpus")]
    pub corpus: Vec<String>,

    /// Pool tp/fp/fn over corpora instead of averaging F1
    #[arg(long)]
    pub pool_counts: bool,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct DiagnoseCmd {
    /// eval.json with typed mention and link scores
    #[arg(long)]
    pub eval: PathBuf,

    /// distribution.json of the gold side; its absent list is reported first
    #[arg(long)]
    pub distribution: Option<PathBuf>,

    #[arg(long, default_value_t = 0.5)]
    pub w_mention: f64,
    #[arg(long, default_value_t = 0.5)]
    pub w_link: f64,
    #[arg(long, default_value_t = 0.2)]
    pub rarity_cap: f64,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct ValidateLabelsCmd {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub labeling: LabelingArgs,

    /// Verified labels, one {"doc_id", "cluster", "label"} object per line
    #[arg(long)]
    pub reference: PathBuf,

    #[arg(long)]
    pub out: Option<PathBuf>,
}
