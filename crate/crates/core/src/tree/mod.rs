//! Decision-tree knowledge structure: document model, loading, validation
//! and per-leaf classification vectors.

mod document;
mod features;
mod paths;
mod validate;

use std::sync::Arc;

use thiserror::Error;

pub use document::{
    AnswerOption, Branch, EligibilityCondition, FeatureNode, LeafId, NodeId, QuestionNode, StructuralFlag, Target,
    TextSource, TreeDocument, VisualizationLeaf, DONT_KNOW,
};
pub use features::{FeatureHierarchy, DATA_ROOT, TASK_ROOT};
pub use paths::{ClassificationVector, PathStep, TreePath};
pub use validate::{normalize_name, validate, TreeStats, ValidationReport, Violation, ViolationKind};

#[derive(Debug, Error)]
pub enum TreeError {
    #[error("malformed tree document at '{path}': {message}")]
    Parse { path: String, message: String },
    #[error("tree document failed validation with {} violation(s); first: {}", .0.len(), .0[0])]
    Invalid(Vec<Violation>),
    #[error("unknown leaf '{0}'")]
    UnknownLeaf(String),
    #[error("unknown node '{0}'")]
    UnknownNode(String),
}

impl TreeError {
    /// Node, leaf or document path the error points at.
    pub fn location(&self) -> &str {
        match self {
            TreeError::Parse { path, .. } => path,
            TreeError::Invalid(v) => &v[0].location,
            TreeError::UnknownLeaf(id) | TreeError::UnknownNode(id) => id,
        }
    }
}

/// A validated, immutable decision tree.
///
/// Construction goes through [`DecisionTree::from_document`] or [`load_tree`],
/// both of which reject any document with validation violations.
#[derive(Debug, Clone)]
pub struct DecisionTree {
    doc: TreeDocument,
    features: FeatureHierarchy,
    stats: TreeStats,
}

impl PartialEq for DecisionTree {
    fn eq(&self, other: &Self) -> bool {
        self.doc == other.doc
    }
}

impl DecisionTree {
    pub fn from_document(doc: TreeDocument) -> Result<Self, TreeError> {
        let report = validate(&doc);
        if !report.is_clean() {
            return Err(TreeError::Invalid(report.violations));
        }
        let features = FeatureHierarchy::new(&doc.features);
        Ok(DecisionTree {
            doc,
            features,
            stats: report.stats,
        })
    }

    pub fn into_shared(self) -> Arc<Self> {
        Arc::new(self)
    }

    pub fn document(&self) -> &TreeDocument {
        &self.doc
    }

    pub fn into_document(self) -> TreeDocument {
        self.doc
    }

    pub fn version(&self) -> &str {
        &self.doc.version
    }

    pub fn root(&self) -> &str {
        &self.doc.root
    }

    pub fn root_node(&self) -> &QuestionNode {
        &self.doc.nodes[&self.doc.root]
    }

    pub fn fallback_leaf(&self) -> &str {
        &self.doc.fallback_leaf
    }

    pub fn node(&self, id: &str) -> Option<&QuestionNode> {
        self.doc.nodes.get(id)
    }

    pub fn leaf(&self, id: &str) -> Option<&VisualizationLeaf> {
        self.doc.leaves.get(id)
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&str, &QuestionNode)> {
        self.doc.nodes.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn leaves(&self) -> impl Iterator<Item = (&str, &VisualizationLeaf)> {
        self.doc.leaves.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn features(&self) -> &FeatureHierarchy {
        &self.features
    }

    pub fn stats(&self) -> &TreeStats {
        &self.stats
    }

    /// Leaf id whose name or alias normalizes to `name`.
    pub fn find_leaf_by_name(&self, name: &str) -> Option<&str> {
        let wanted = normalize_name(name);
        self.leaves()
            .find(|(_, l)| normalize_name(&l.name) == wanted || l.aliases.iter().any(|a| normalize_name(a) == wanted))
            .map(|(id, _)| id)
    }

    pub fn validate(&self) -> ValidationReport {
        validate(&self.doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.doc).expect("tree documents always serialize")
    }

    /// Every root-to-leaf path, dont-know edges included.
    pub fn paths(&self) -> Vec<TreePath> {
        paths::enumerate(self)
    }

    /// One vector per distinct path reaching `leaf`.
    pub fn classification_vectors(&self, leaf: &str) -> Result<Vec<ClassificationVector>, TreeError> {
        if !self.doc.leaves.contains_key(leaf) {
            return Err(TreeError::UnknownLeaf(leaf.to_owned()));
        }
        Ok(self
            .paths()
            .into_iter()
            .filter(|p| p.leaf == leaf)
            .map(|p| p.vector())
            .collect())
    }
}

/// Parses a document without validating it; used by tooling that needs to
/// report violations rather than fail on them.
pub fn parse_document(bytes: &[u8]) -> Result<TreeDocument, TreeError> {
    let de = &mut serde_json::Deserializer::from_slice(bytes);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        TreeError::Parse {
            path,
            message: e.into_inner().to_string(),
        }
    })
}

/// Parses and validates a tree document.
pub fn load_tree(bytes: &[u8]) -> Result<DecisionTree, TreeError> {
    DecisionTree::from_document(parse_document(bytes)?)
}

pub fn classification_vector(tree: &DecisionTree, leaf: &str) -> Result<Vec<ClassificationVector>, TreeError> {
    tree.classification_vectors(leaf)
}
