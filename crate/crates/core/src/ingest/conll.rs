//! Read-only CoNLL-2012 reader.
//!
//! Tokens come from the word column (the fourth column when a line has at
//! least four, otherwise the first) and coreference from the last column,
//! using the bracket notation `(7`, `7)`, `(7)` joined by `|`. Blank lines
//! separate sentences; token positions are accumulated across sentences
//! into document-level indices. Bracket pairs are inclusive of both ends
//! and are converted to half-open spans.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::BufRead;

use crate::error::{Error, Result};
use crate::model::{validate_document, Cluster, Document, Span};

struct OpenDoc {
    doc_id: String,
    begin_line: usize,
    tokens: Vec<String>,
    sentence_starts: Vec<usize>,
    at_sentence_start: bool,
    // cluster id -> stack of (start token, line)
    open: HashMap<u64, Vec<(usize, usize)>>,
    // cluster id -> spans; order of first opening bracket
    chains: BTreeMap<u64, Vec<Span>>,
    first_seen: Vec<u64>,
}

impl OpenDoc {
    fn new(doc_id: String, begin_line: usize) -> Self {
        OpenDoc {
            doc_id,
            begin_line,
            tokens: Vec::new(),
            sentence_starts: Vec::new(),
            at_sentence_start: true,
            open: HashMap::new(),
            chains: BTreeMap::new(),
            first_seen: Vec::new(),
        }
    }

    fn note_id(&mut self, id: u64) {
        if let std::collections::btree_map::Entry::Vacant(e) = self.chains.entry(id) {
            e.insert(Vec::new());
            self.first_seen.push(id);
        }
    }

    fn finish(self, line: usize) -> Result<Document> {
        if let Some((id, stack)) = self.open.iter().find(|(_, s)| !s.is_empty()) {
            return Err(Error::Conll {
                line: stack[0].1,
                message: format!("cluster {id} opened but never closed before line {line}"),
            });
        }
        let mut chains = self.chains;
        let gold_clusters = self
            .first_seen
            .iter()
            .map(|id| {
                let mut spans = chains.remove(id).unwrap_or_default();
                spans.sort();
                Cluster::from_spans(spans)
            })
            .filter(|c| !c.is_empty())
            .collect();
        let doc = Document {
            doc_id: self.doc_id,
            tokens: self.tokens,
            sentence_boundaries: Some(self.sentence_starts),
            gold_clusters,
            ..Default::default()
        };
        if let Some(violation) = validate_document(&doc).into_iter().next() {
            return Err(Error::Invalid {
                line: self.begin_line,
                doc_id: doc.doc_id,
                violation,
            });
        }
        Ok(doc)
    }
}

fn parse_header(line: &str) -> Option<String> {
    let rest = line.strip_prefix("#begin document")?.trim();
    let (name, part) = match rest.split_once(';') {
        Some((name, part)) => (name.trim(), part.trim()),
        None => (rest, ""),
    };
    let name = name.trim_start_matches('(').trim_end_matches(')');
    let part = part.trim_start_matches("part").trim();
    Some(if part.is_empty() {
        name.to_string()
    } else {
        format!("{name}/{part}")
    })
}

fn parse_id(text: &str, line: usize) -> Result<u64> {
    text.parse().map_err(|_| Error::Conll {
        line,
        message: format!("non-numeric cluster id {text:?}"),
    })
}

fn apply_coref(doc: &mut OpenDoc, column: &str, token: usize, line: usize) -> Result<()> {
    if column == "-" || column == "_" {
        return Ok(());
    }
    for part in column.split('|') {
        let opens = part.starts_with('(');
        let closes = part.ends_with(')');
        let body = part.trim_start_matches('(').trim_end_matches(')');
        if body.is_empty() || (!opens && !closes) {
            return Err(Error::Conll {
                line,
                message: format!("malformed coreference field {part:?}"),
            });
        }
        let id = parse_id(body, line)?;
        match (opens, closes) {
            (true, true) => {
                doc.note_id(id);
                doc.chains
                    .get_mut(&id)
                    .unwrap()
                    .push(Span::new(token, token + 1).unwrap());
            }
            (true, false) => {
                doc.note_id(id);
                doc.open.entry(id).or_default().push((token, line));
            }
            (false, true) => {
                let (start, _) = doc
                    .open
                    .get_mut(&id)
                    .and_then(|s| s.pop())
                    .ok_or_else(|| Error::Conll {
                        line,
                        message: format!("cluster {id} closed without a matching open bracket"),
                    })?;
                doc.chains
                    .get_mut(&id)
                    .unwrap()
                    .push(Span::new(start, token + 1).unwrap());
            }
            (false, false) => unreachable!(),
        }
    }
    Ok(())
}

/// Reads every document in a CoNLL-2012 file. Gold clusters are filled
/// from the coreference column; predicted clusters and semantic spans are
/// left empty.
pub fn read_conll2012<R: BufRead>(reader: R) -> Result<Vec<Document>> {
    let mut docs = Vec::new();
    let mut seen = HashSet::new();
    let mut current: Option<OpenDoc> = None;
    let mut last_line = 0;

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = line?;
        let trimmed = line.trim();

        if trimmed.starts_with("#begin document") {
            if let Some(open) = &current {
                return Err(Error::Conll {
                    line: line_no,
                    message: format!("document {:?} has no #end document marker", open.doc_id),
                });
            }
            let doc_id = parse_header(trimmed).ok_or_else(|| Error::Conll {
                line: line_no,
                message: "malformed #begin document header".into(),
            })?;
            if !seen.insert(doc_id.clone()) {
                return Err(Error::DuplicateDocId { line: line_no, doc_id });
            }
            current = Some(OpenDoc::new(doc_id, line_no));
            continue;
        }
        if trimmed.starts_with("#end document") {
            let open = current.take().ok_or_else(|| Error::Conll {
                line: line_no,
                message: "#end document without #begin document".into(),
            })?;
            docs.push(open.finish(line_no)?);
            continue;
        }
        if trimmed.starts_with('#') {
            continue;
        }

        let Some(doc) = current.as_mut() else {
            if trimmed.is_empty() {
                continue;
            }
            return Err(Error::Conll {
                line: line_no,
                message: "token line outside of a document".into(),
            });
        };

        if trimmed.is_empty() {
            doc.at_sentence_start = true;
            continue;
        }

        let columns: Vec<&str> = trimmed.split_whitespace().collect();
        if columns.len() < 2 {
            return Err(Error::Conll {
                line: line_no,
                message: "expected at least a word and a coreference column".into(),
            });
        }
        let word = if columns.len() >= 4 { columns[3] } else { columns[0] };
        let token = doc.tokens.len();
        if doc.at_sentence_start {
            doc.sentence_starts.push(token);
            doc.at_sentence_start = false;
        }
        doc.tokens.push(word.to_string());
        apply_coref(doc, columns[columns.len() - 1], token, line_no)?;
    }

    if let Some(open) = current {
        return Err(Error::Conll {
            line: last_line,
            message: format!("document {:?} has no #end document marker", open.doc_id),
        });
    }
    Ok(docs)
}
