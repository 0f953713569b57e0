//! Fixed-seed corpora shared by the benchmarks.

use coref_semscore::synth::{self, SynthConfig};
use coref_semscore::{label_corpus, Document, LabelingConfig};
use rand::rngs::StdRng;
use rand::SeedableRng;

pub const SEED: u64 = 0x5eed;

/// An unlabeled corpus of `docs` documents.
pub fn raw_corpus(docs: usize) -> Vec<Document> {
    let mut rng = StdRng::seed_from_u64(SEED);
    synth::corpus(&mut rng, docs, &SynthConfig::default())
}

/// The same corpus with both sides labeled at the default threshold.
pub fn labeled_corpus(docs: usize) -> Vec<Document> {
    let mut docs = raw_corpus(docs);
    label_corpus(&mut docs, &LabelingConfig::default());
    docs
}
