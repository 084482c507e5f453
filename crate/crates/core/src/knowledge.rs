//! Bundled knowledge base: the seed decision tree, its visualization catalog
//! and a glossary of terms used in question text.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::OnceLock;

use serde::Serialize;

use crate::tree::{load_tree, DecisionTree, EligibilityCondition, TextSource, TreeError};

const SEED_TREE: &str = include_str!("../data/seed_tree.json");
const GLOSSARY: &str = include_str!("../data/glossary.json");

/// Raw bytes of the bundled tree document.
pub fn seed_document() -> &'static str {
    SEED_TREE
}

/// The bundled, validated seed tree.
pub fn seed_tree() -> DecisionTree {
    static SEED: OnceLock<DecisionTree> = OnceLock::new();
    SEED.get_or_init(|| load_tree(SEED_TREE.as_bytes()).expect("bundled seed tree is valid"))
        .clone()
}

/// Loads the tree at `path`, or the seed tree when no path is given.
pub fn load_tree_or_seed(path: Option<&Path>) -> Result<DecisionTree, LoadError> {
    match path {
        None => Ok(seed_tree()),
        Some(path) => {
            let bytes = std::fs::read(path).map_err(|source| LoadError::Io {
                path: path.display().to_string(),
                source,
            })?;
            Ok(load_tree(&bytes)?)
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read tree file '{path}': {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CatalogEntry {
    pub id: String,
    pub name: String,
    pub aliases: Vec<String>,
    pub description: String,
    pub advantages: Vec<String>,
    pub disadvantages: Vec<String>,
    pub eligibility: Vec<EligibilityCondition>,
    pub is_fallback: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<TextSource>,
}

/// Education metadata for every leaf of `tree`, in document order.
pub fn catalog(tree: &DecisionTree) -> Vec<CatalogEntry> {
    tree.leaves()
        .map(|(id, leaf)| CatalogEntry {
            id: id.to_owned(),
            name: leaf.name.clone(),
            aliases: leaf.aliases.clone(),
            description: leaf.description.clone(),
            advantages: leaf.advantages.clone(),
            disadvantages: leaf.disadvantages.clone(),
            eligibility: leaf.eligibility.clone(),
            is_fallback: id == tree.fallback_leaf(),
            source: leaf.source,
        })
        .collect()
}

/// Plain-language definitions of terms that appear in questions.
pub fn glossary() -> BTreeMap<String, String> {
    serde_json::from_str(GLOSSARY).expect("bundled glossary is valid JSON")
}
