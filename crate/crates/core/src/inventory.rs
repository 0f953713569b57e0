//! Category inventory with alias resolution.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{normalize_label, CategoryLabel};

/// Environment variable naming an alternate inventory file.
pub const INVENTORY_ENV: &str = "COREF_SEMSCORE_INVENTORY";

const DEFAULT_INVENTORY: &str = include_str!("../data/inventory.json");

/// One entry of an inventory file: `{label, description, aliases}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryEntry {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default)]
    pub aliases: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct CategoryInventory {
    labels: Vec<CategoryLabel>,
    descriptions: Vec<Option<String>>,
    lookup: HashMap<String, usize>,
}

impl CategoryInventory {
    pub fn from_entries(entries: Vec<CategoryEntry>) -> Result<Self> {
        let mut labels = Vec::with_capacity(entries.len());
        let mut descriptions = Vec::with_capacity(entries.len());
        let mut lookup = HashMap::new();

        for (i, entry) in entries.iter().enumerate() {
            let label = CategoryLabel::new(&entry.label)?;
            if lookup.insert(label.as_str().to_string(), i).is_some() {
                return Err(Error::Inventory(format!("duplicate label {label}")));
            }
            labels.push(label);
            descriptions.push(entry.description.clone());
        }
        for (i, entry) in entries.iter().enumerate() {
            for alias in &entry.aliases {
                let key = normalize_label(alias);
                match lookup.get(&key) {
                    Some(&j) if j != i => {
                        return Err(Error::Inventory(format!(
                            "alias {key} is ambiguous between {} and {}",
                            labels[j], labels[i]
                        )))
                    }
                    _ => {
                        lookup.insert(key, i);
                    }
                }
            }
        }

        Ok(CategoryInventory {
            labels,
            descriptions,
            lookup,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let entries: Vec<CategoryEntry> = serde_json::from_str(text).map_err(|e| Error::Inventory(e.to_string()))?;
        Self::from_entries(entries)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// The inventory named by `COREF_SEMSCORE_INVENTORY`, or the bundled
    /// default when the variable is unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(INVENTORY_ENV) {
            Some(path) if !path.is_empty() => Self::from_path(path),
            _ => Ok(Self::default()),
        }
    }

    pub fn labels(&self) -> &[CategoryLabel] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn description(&self, label: &CategoryLabel) -> Option<&str> {
        let i = *self.lookup.get(label.as_str())?;
        (self.labels[i] == *label)
            .then(|| self.descriptions[i].as_deref())
            .flatten()
    }

    pub fn contains(&self, label: &CategoryLabel) -> bool {
        self.lookup
            .get(label.as_str())
            .is_some_and(|&i| self.labels[i] == *label)
    }

    /// Maps a raw label (any case, canonical or alias) onto its canonical
    /// inventory label.
    pub fn resolve(&self, raw: &str) -> Option<CategoryLabel> {
        self.lookup.get(&normalize_label(raw)).map(|&i| self.labels[i].clone())
    }
}

impl Default for CategoryInventory {
    fn default() -> Self {
        Self::from_json(DEFAULT_INVENTORY).expect("bundled inventory is valid")
    }
}
