use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::document::Target;
use super::DecisionTree;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathStep {
    pub node: String,
    pub feature: String,
    pub answer: String,
}

/// A root-to-leaf route through the tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreePath {
    pub steps: Vec<PathStep>,
    pub leaf: String,
}

impl TreePath {
    pub fn vector(&self) -> ClassificationVector {
        ClassificationVector(
            self.steps
                .iter()
                .map(|s| (s.feature.clone(), s.answer.clone()))
                .collect(),
        )
    }

    pub fn answers(&self) -> impl Iterator<Item = &str> {
        self.steps.iter().map(|s| s.answer.as_str())
    }
}

/// Feature key to answer token along one path: a leaf's position in feature
/// space.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassificationVector(pub BTreeMap<String, String>);

impl ClassificationVector {
    pub fn get(&self, feature: &str) -> Option<&str> {
        self.0.get(feature).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Features whose answers differ, including features present on only one side.
    pub fn differing_features<'a>(&'a self, other: &'a ClassificationVector) -> Vec<&'a str> {
        let mut keys: Vec<&str> = self.0.keys().chain(other.0.keys()).map(String::as_str).collect();
        keys.sort_unstable();
        keys.dedup();
        keys.into_iter().filter(|k| self.get(k) != other.get(k)).collect()
    }
}

pub(super) fn enumerate(tree: &DecisionTree) -> Vec<TreePath> {
    let mut out = Vec::new();
    let mut steps = Vec::new();
    walk(tree, tree.root(), &mut steps, &mut out);
    out
}

fn walk(tree: &DecisionTree, id: &str, steps: &mut Vec<PathStep>, out: &mut Vec<TreePath>) {
    let node = tree.node(id).expect("validated tree references existing nodes");
    for (answer, target) in node.edges() {
        steps.push(PathStep {
            node: id.to_owned(),
            feature: node.feature.clone(),
            answer: answer.to_owned(),
        });
        match target {
            Target::Leaf(leaf) => out.push(TreePath {
                steps: steps.clone(),
                leaf: leaf.clone(),
            }),
            Target::Node(next) => walk(tree, next, steps, out),
        }
        steps.pop();
    }
}
