//! Serde model of the tree document: the on-disk JSON form of a decision tree.
//!
//! Every struct rejects unknown keys. Maps use [`IndexMap`] so that a document
//! serializes back in the order it was authored.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::profiler::AttributeType;

pub type NodeId = String;
pub type LeafId = String;

/// Reserved answer token recorded when the user declares "I don't know".
pub const DONT_KNOW: &str = "dont-know";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct TreeDocument {
    pub version: String,
    pub root: NodeId,
    pub nodes: IndexMap<NodeId, QuestionNode>,
    pub leaves: IndexMap<LeafId, VisualizationLeaf>,
    pub fallback_leaf: LeafId,
    pub features: Vec<FeatureNode>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Task,
    Data,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct QuestionNode {
    pub text: String,
    pub branch: Branch,
    pub feature: String,
    #[serde(default)]
    pub allows_dont_know: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dont_know_target: Option<Target>,
    pub options: Vec<AnswerOption>,
}

impl QuestionNode {
    pub fn option(&self, value: &str) -> Option<&AnswerOption> {
        self.options.iter().find(|o| o.value == value)
    }

    pub fn is_yes_no(&self) -> bool {
        self.options.len() == 2 && self.option("yes").is_some() && self.option("no").is_some()
    }

    /// Outgoing edges in document order, the dont-know edge last.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &Target)> {
        self.options
            .iter()
            .map(|o| (o.value.as_str(), &o.target))
            .chain(
                self.dont_know_target
                    .iter()
                    .filter(|_| self.allows_dont_know)
                    .map(|t| (DONT_KNOW, t)),
            )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnswerOption {
    pub label: String,
    pub value: String,
    pub target: Target,
}

/// Edge endpoint: `{"node": id}` or `{"leaf": id}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum Target {
    Node(NodeId),
    Leaf(LeafId),
}

impl Target {
    pub fn id(&self) -> &str {
        match self {
            Target::Node(id) | Target::Leaf(id) => id,
        }
    }
}

impl std::fmt::Display for Target {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Target::Node(id) => write!(f, "node '{id}'"),
            Target::Leaf(id) => write!(f, "leaf '{id}'"),
        }
    }
}

/// Where a leaf's education text comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TextSource {
    Literature,
    Authored,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct VisualizationLeaf {
    pub name: String,
    #[serde(default)]
    pub aliases: Vec<String>,
    pub description: String,
    #[serde(default)]
    pub advantages: Vec<String>,
    #[serde(default)]
    pub disadvantages: Vec<String>,
    #[serde(default)]
    pub eligibility: Vec<EligibilityCondition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sources_count: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<TextSource>,
}

/// Structural property a dataset may need before a chart applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StructuralFlag {
    Hierarchy,
    Network,
    Geospatial,
    Temporal,
}

/// A predicate over a data profile.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase", deny_unknown_fields)]
pub enum EligibilityCondition {
    /// Number of selected attributes whose type is in `types`.
    AttributeCount {
        types: Vec<AttributeType>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        min: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max: Option<usize>,
    },
    /// Upper bound on the distinct values of any selected nominal attribute.
    MaxCardinality { max: usize },
    RequiresFlag { flag: StructuralFlag },
}

impl std::fmt::Display for EligibilityCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EligibilityCondition::AttributeCount { types, min, max } => {
                let names: Vec<&str> = types.iter().map(|t| t.as_str()).collect();
                let names = names.join("|");
                match (min, max) {
                    (Some(lo), Some(hi)) if lo == hi => write!(f, "exactly {lo} {names} attributes"),
                    (Some(lo), Some(hi)) => write!(f, "{lo} to {hi} {names} attributes"),
                    (Some(lo), None) => write!(f, "at least {lo} {names} attributes"),
                    (None, Some(hi)) => write!(f, "at most {hi} {names} attributes"),
                    (None, None) => write!(f, "any number of {names} attributes"),
                }
            }
            EligibilityCondition::MaxCardinality { max } => write!(f, "at most {max} parts"),
            EligibilityCondition::RequiresFlag { flag } => {
                let name = match flag {
                    StructuralFlag::Hierarchy => "hierarchical",
                    StructuralFlag::Network => "network",
                    StructuralFlag::Geospatial => "geospatial",
                    StructuralFlag::Temporal => "temporal",
                };
                write!(f, "{name} data")
            }
        }
    }
}

/// One entry of the distinguishing-feature hierarchy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeatureNode {
    pub key: String,
    pub name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<FeatureNode>,
}
