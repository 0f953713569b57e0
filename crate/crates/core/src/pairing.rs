use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::model::Document;

/// Matches gold and predicted documents by `doc_id`, in gold order.
pub fn pair_documents<'a>(gold: &'a [Document], pred: &'a [Document]) -> Result<Vec<(&'a Document, &'a Document)>> {
    let by_id: HashMap<&str, &Document> = pred.iter().map(|d| (d.doc_id.as_str(), d)).collect();
    let gold_ids: HashSet<&str> = gold.iter().map(|d| d.doc_id.as_str()).collect();

    let missing_in_pred: Vec<String> = gold
        .iter()
        .filter(|d| !by_id.contains_key(d.doc_id.as_str()))
        .map(|d| d.doc_id.clone())
        .collect();
    let missing_in_gold: Vec<String> = pred
        .iter()
        .filter(|d| !gold_ids.contains(d.doc_id.as_str()))
        .map(|d| d.doc_id.clone())
        .collect();
    if !missing_in_pred.is_empty() || !missing_in_gold.is_empty() {
        return Err(Error::DocIdMismatch {
            missing_in_pred,
            missing_in_gold,
        });
    }
    Ok(gold.iter().map(|g| (g, by_id[g.doc_id.as_str()])).collect())
}
