use std::collections::HashMap;

use super::document::FeatureNode;

/// Root key of the task subtree.
pub const TASK_ROOT: &str = "task";
/// Root key of the data-characteristics subtree.
pub const DATA_ROOT: &str = "data";

#[derive(Debug, Clone)]
struct Entry {
    name: String,
    parent: Option<String>,
    children: Vec<String>,
}

/// Flattened, queryable view of the feature forest.
#[derive(Debug, Clone, Default)]
pub struct FeatureHierarchy {
    entries: HashMap<String, Entry>,
    order: Vec<String>,
    duplicates: Vec<String>,
}

impl FeatureHierarchy {
    pub fn new(roots: &[FeatureNode]) -> Self {
        let mut hierarchy = FeatureHierarchy::default();
        for root in roots {
            hierarchy.insert(root, None);
        }
        hierarchy
    }

    fn insert(&mut self, node: &FeatureNode, parent: Option<&str>) {
        if self.entries.contains_key(&node.key) {
            self.duplicates.push(node.key.clone());
        } else {
            self.order.push(node.key.clone());
            self.entries.insert(
                node.key.clone(),
                Entry {
                    name: node.name.clone(),
                    parent: parent.map(str::to_owned),
                    children: node.children.iter().map(|c| c.key.clone()).collect(),
                },
            );
        }
        for child in &node.children {
            self.insert(child, Some(&node.key));
        }
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    pub fn name(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|e| e.name.as_str())
    }

    pub fn parent(&self, key: &str) -> Option<&str> {
        self.entries.get(key)?.parent.as_deref()
    }

    pub fn is_leaf(&self, key: &str) -> bool {
        self.entries.get(key).is_some_and(|e| e.children.is_empty())
    }

    /// Keys in pre-order.
    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.order.iter().map(String::as_str)
    }

    /// Keys that appeared more than once in the source forest.
    pub fn duplicates(&self) -> &[String] {
        &self.duplicates
    }

    /// True when `ancestor` equals `key` or lies on its parent chain.
    pub fn is_self_or_ancestor(&self, ancestor: &str, key: &str) -> bool {
        let mut current = Some(key);
        while let Some(k) = current {
            if k == ancestor {
                return true;
            }
            current = self.parent(k);
        }
        false
    }

    pub fn root_of<'a>(&'a self, key: &'a str) -> Option<&'a str> {
        if !self.contains(key) {
            return None;
        }
        let mut current = key;
        while let Some(p) = self.parent(current) {
            current = p;
        }
        Some(current)
    }

    pub fn is_data_feature(&self, key: &str) -> bool {
        self.root_of(key) == Some(DATA_ROOT)
    }

    /// Leaf keys of the task subtree; these are the valid batch task keys.
    pub fn task_leaves(&self) -> Vec<&str> {
        self.keys()
            .filter(|k| self.is_leaf(k) && self.root_of(k) == Some(TASK_ROOT) && *k != TASK_ROOT)
            .collect()
    }
}
