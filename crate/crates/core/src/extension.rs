//! Adding a new visualization type to an existing tree.
//!
//! The procedure: describe the candidate with the tree's distinguishing
//! features ([`classify_candidate`]), look for the closest existing leaf
//! ([`find_similar`]), and when a leaf with the same classification exists,
//! insert a question on a new feature above every occurrence of that leaf
//! ([`insert_distinguishing_question`]). The input tree is never modified.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{Cursor, Session};
use crate::tree::{
    AnswerOption, ClassificationVector, DecisionTree, FeatureNode, QuestionNode, Target, TreeDocument, Violation,
    VisualizationLeaf, DONT_KNOW,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtensionError {
    #[error("unknown feature '{0}'")]
    UnknownFeature(String),
    #[error("unknown leaf '{0}'")]
    UnknownLeaf(String),
    #[error("leaf id '{0}' is already used")]
    LeafExists(String),
    #[error("invalid answer mapping: {0}")]
    InvalidMapping(String),
    #[error("feature '{feature}' is already asked on a path to '{leaf}' and cannot distinguish a new type from it")]
    NotDistinguishing { feature: String, leaf: String },
    #[error("new feature '{0}' needs a display name")]
    UnnamedFeature(String),
    #[error("extended tree failed validation: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

/// A candidate's answers over the tree's features; `None` is unspecified.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CandidateClassification(pub BTreeMap<String, Option<String>>);

impl CandidateClassification {
    pub fn specified(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0
            .iter()
            .filter_map(|(k, v)| v.as_deref().map(|v| (k.as_str(), v)))
    }
}

pub fn classify_candidate(
    tree: &DecisionTree,
    answers: &BTreeMap<String, String>,
) -> Result<CandidateClassification, ExtensionError> {
    if let Some(bad) = answers.keys().find(|k| !tree.features().contains(k)) {
        return Err(ExtensionError::UnknownFeature(bad.clone()));
    }
    let mut vector: BTreeMap<String, Option<String>> =
        tree.nodes().map(|(_, n)| (n.feature.clone(), None)).collect();
    for (k, v) in answers {
        vector.insert(k.clone(), Some(v.clone()));
    }
    Ok(CandidateClassification(vector))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimilarLeaf {
    pub leaf: String,
    pub name: String,
    pub distance: usize,
    /// Distance zero: the candidate is indistinguishable from this leaf.
    pub collision: bool,
}

fn distance(candidate: &CandidateClassification, vector: &ClassificationVector) -> usize {
    candidate
        .specified()
        .filter(|(feature, answer)| vector.get(feature) != Some(*answer))
        .count()
}

/// Leaves ranked by how many specified features disagree with their closest
/// path; ties break on name.
pub fn find_similar(tree: &DecisionTree, candidate: &CandidateClassification) -> Vec<SimilarLeaf> {
    let mut best: BTreeMap<String, usize> = BTreeMap::new();
    for path in tree.paths() {
        let d = distance(candidate, &path.vector());
        best.entry(path.leaf.clone())
            .and_modify(|cur| *cur = (*cur).min(d))
            .or_insert(d);
    }
    let mut ranked: Vec<SimilarLeaf> = best
        .into_iter()
        .map(|(leaf, distance)| SimilarLeaf {
            name: tree.leaf(&leaf).map(|l| l.name.clone()).unwrap_or_default(),
            leaf,
            distance,
            collision: distance == 0,
        })
        .collect();
    ranked.sort_by(|a, b| a.distance.cmp(&b.distance).then_with(|| a.name.cmp(&b.name)));
    ranked
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Existing,
    New,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionSpec {
    pub label: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct QuestionSpec {
    /// Prefix for the ids of inserted question nodes.
    pub id_prefix: String,
    pub text: String,
    pub feature: String,
    /// Required when `feature` is not yet in the hierarchy.
    #[serde(default)]
    pub feature_name: Option<String>,
    /// Existing hierarchy key to register a new feature under; a new root otherwise.
    #[serde(default)]
    pub feature_parent: Option<String>,
    pub options: Vec<OptionSpec>,
    #[serde(default)]
    pub dont_know: Option<Route>,
}

/// The extension file consumed by `vizadvisor extend`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ExtensionSpec {
    pub target_leaf: String,
    pub question: QuestionSpec,
    pub mapping: BTreeMap<String, Route>,
    pub new_leaf_id: String,
    pub new_leaf: VisualizationLeaf,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Edge {
    pub from: String,
    pub answer: String,
    pub to: Target,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RewiredEdge {
    pub from: String,
    pub answer: String,
    pub old_target: Target,
    pub new_target: Target,
}

/// Machine-readable summary of what an insertion changed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExtensionDiff {
    pub from_version: String,
    pub to_version: String,
    pub added_features: Vec<String>,
    pub added_leaves: Vec<String>,
    pub added_nodes: Vec<String>,
    pub added_edges: Vec<Edge>,
    pub rewired_edges: Vec<RewiredEdge>,
}

/// Bumps the minor component of a dotted numeric version ("1.0.0" → "1.1.0").
pub fn bump_version(version: &str) -> String {
    let parts: Vec<&str> = version.split('.').collect();
    let numeric: Option<Vec<u64>> = parts.iter().map(|p| p.parse().ok()).collect();
    match numeric {
        Some(mut n) if n.len() >= 2 => {
            n[1] += 1;
            n.iter_mut().skip(2).for_each(|x| *x = 0);
            n.iter().map(u64::to_string).collect::<Vec<_>>().join(".")
        }
        Some(n) if n.len() == 1 => (n[0] + 1).to_string(),
        _ => format!("{version}.1"),
    }
}

fn check_mapping(spec: &ExtensionSpec) -> Result<(), ExtensionError> {
    let values: BTreeSet<&str> = spec.question.options.iter().map(|o| o.value.as_str()).collect();
    let mapped: BTreeSet<&str> = spec.mapping.keys().map(String::as_str).collect();
    let missing: Vec<&str> = values.difference(&mapped).copied().collect();
    if !missing.is_empty() {
        return Err(ExtensionError::InvalidMapping(format!("no route for answer(s) {}", missing.join(", "))));
    }
    let extra: Vec<&str> = mapped.difference(&values).copied().collect();
    if !extra.is_empty() {
        return Err(ExtensionError::InvalidMapping(format!("route for unknown answer(s) {}", extra.join(", "))));
    }
    if !spec.mapping.values().any(|r| *r == Route::New) {
        return Err(ExtensionError::InvalidMapping("no answer leads to the new visualization".into()));
    }
    if !spec.mapping.values().any(|r| *r == Route::Existing) {
        return Err(ExtensionError::InvalidMapping(format!(
            "no answer leads back to '{}'",
            spec.target_leaf
        )));
    }
    Ok(())
}

fn register_feature(doc: &mut TreeDocument, tree: &DecisionTree, q: &QuestionSpec) -> Result<Option<String>, ExtensionError> {
    if tree.features().contains(&q.feature) {
        return Ok(None);
    }
    let name = q
        .feature_name
        .clone()
        .ok_or_else(|| ExtensionError::UnnamedFeature(q.feature.clone()))?;
    let entry = FeatureNode {
        key: q.feature.clone(),
        name,
        children: vec![],
    };
    match &q.feature_parent {
        None => doc.features.push(entry),
        Some(parent) => {
            fn attach(nodes: &mut [FeatureNode], parent: &str, entry: &mut Option<FeatureNode>) {
                for n in nodes {
                    if entry.is_none() {
                        return;
                    }
                    if n.key == parent {
                        n.children.push(entry.take().expect("checked"));
                        return;
                    }
                    attach(&mut n.children, parent, entry);
                }
            }
            let mut pending = Some(entry);
            attach(&mut doc.features, parent, &mut pending);
            if pending.is_some() {
                return Err(ExtensionError::UnknownFeature(parent.clone()));
            }
        }
    }
    Ok(Some(q.feature.clone()))
}

/// Inserts the spec's question above every edge that ends in the target
/// leaf, routing its answers to the target or to the new leaf.
///
/// Returns the extended tree (with a bumped version) and a diff. Fails
/// without side effects when the mapping is incomplete, the feature does not
/// distinguish, or the result does not validate.
pub fn insert_distinguishing_question(
    tree: &DecisionTree,
    spec: &ExtensionSpec,
) -> Result<(DecisionTree, ExtensionDiff), ExtensionError> {
    let target = spec.target_leaf.as_str();
    if tree.leaf(target).is_none() {
        return Err(ExtensionError::UnknownLeaf(target.to_owned()));
    }
    if tree.leaf(&spec.new_leaf_id).is_some() {
        return Err(ExtensionError::LeafExists(spec.new_leaf_id.clone()));
    }
    check_mapping(spec)?;
    let vectors = tree
        .classification_vectors(target)
        .map_err(|_| ExtensionError::UnknownLeaf(target.to_owned()))?;
    if vectors.iter().any(|v| v.get(&spec.question.feature).is_some()) {
        return Err(ExtensionError::NotDistinguishing {
            feature: spec.question.feature.clone(),
            leaf: target.to_owned(),
        });
    }

    let mut doc = tree.document().clone();
    let mut diff = ExtensionDiff {
        from_version: doc.version.clone(),
        to_version: bump_version(&doc.version),
        ..Default::default()
    };
    doc.version = diff.to_version.clone();
    if let Some(added) = register_feature(&mut doc, tree, &spec.question)? {
        diff.added_features.push(added);
    }
    doc.leaves.insert(spec.new_leaf_id.clone(), spec.new_leaf.clone());
    diff.added_leaves.push(spec.new_leaf_id.clone());

    let route_target = |route: Route| match route {
        Route::Existing => Target::Leaf(target.to_owned()),
        Route::New => Target::Leaf(spec.new_leaf_id.clone()),
    };
    let old = Target::Leaf(target.to_owned());
    let parents: Vec<String> = doc
        .nodes
        .iter()
        .filter(|(_, n)| n.edges().any(|(_, t)| *t == old))
        .map(|(id, _)| id.clone())
        .collect();

    let mut taken: HashSet<String> = doc.nodes.keys().cloned().collect();
    for parent in parents {
        let mut id = format!("{}-after-{}", spec.question.id_prefix, parent);
        let mut n = 2;
        while taken.contains(&id) {
            id = format!("{}-after-{}-{}", spec.question.id_prefix, parent, n);
            n += 1;
        }
        taken.insert(id.clone());

        let branch = doc.nodes[&parent].branch;
        let options: Vec<AnswerOption> = spec
            .question
            .options
            .iter()
            .map(|o| AnswerOption {
                label: o.label.clone(),
                value: o.value.clone(),
                target: route_target(spec.mapping[&o.value]),
            })
            .collect();
        for o in &options {
            diff.added_edges.push(Edge {
                from: id.clone(),
                answer: o.value.clone(),
                to: o.target.clone(),
            });
        }
        let dont_know_target = spec.question.dont_know.map(route_target);
        if let Some(t) = &dont_know_target {
            diff.added_edges.push(Edge {
                from: id.clone(),
                answer: DONT_KNOW.to_owned(),
                to: t.clone(),
            });
        }
        let question = QuestionNode {
            text: spec.question.text.clone(),
            branch,
            feature: spec.question.feature.clone(),
            allows_dont_know: dont_know_target.is_some(),
            dont_know_target,
            options,
        };

        let new_target = Target::Node(id.clone());
        let node = doc.nodes.get_mut(&parent).expect("parent exists");
        for option in &mut node.options {
            if option.target == old {
                option.target = new_target.clone();
                diff.rewired_edges.push(RewiredEdge {
                    from: parent.clone(),
                    answer: option.value.clone(),
                    old_target: old.clone(),
                    new_target: new_target.clone(),
                });
            }
        }
        if node.allows_dont_know && node.dont_know_target.as_ref() == Some(&old) {
            node.dont_know_target = Some(new_target.clone());
            diff.rewired_edges.push(RewiredEdge {
                from: parent.clone(),
                answer: DONT_KNOW.to_owned(),
                old_target: old.clone(),
                new_target: new_target.clone(),
            });
        }
        doc.nodes.insert(id.clone(), question);
        diff.added_nodes.push(id);
    }

    let extended = DecisionTree::from_document(doc).map_err(|e| match e {
        crate::tree::TreeError::Invalid(v) => ExtensionError::Invalid(v),
        other => ExtensionError::InvalidMapping(other.to_string()),
    })?;
    Ok((extended, diff))
}

/// Replays every path of `original` on `extended`. Paths that meet a
/// question on `new_feature` are skipped; every other path must end at the
/// same leaf. Returns a description of each path that does not.
pub fn conservativeness_violations(original: &DecisionTree, extended: &Arc<DecisionTree>, new_feature: &str) -> Vec<String> {
    let mut violations = Vec::new();
    'paths: for path in original.paths() {
        let mut session = Session::start(Arc::clone(extended));
        for answer in path.answers() {
            if let Cursor::Node(id) = session.cursor() {
                if extended.node(id).is_some_and(|n| n.feature == new_feature) {
                    continue 'paths;
                }
            }
            if let Err(e) = session.answer(answer) {
                violations.push(format!("path {:?}: {e}", path.answers().collect::<Vec<_>>()));
                continue 'paths;
            }
        }
        match session.cursor() {
            Cursor::Finished(leaf) if *leaf == path.leaf => {}
            Cursor::Node(id) if extended.node(id).is_some_and(|n| n.feature == new_feature) => {}
            other => violations.push(format!(
                "path {:?}: expected '{}', got {:?}",
                path.answers().collect::<Vec<_>>(),
                path.leaf,
                other
            )),
        }
    }
    violations
}
