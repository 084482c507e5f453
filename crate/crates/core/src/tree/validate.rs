//! Structural validation of tree documents.
//!
//! Violations are data: [`validate`] never fails, it reports every broken
//! invariant with the id of the node, leaf or feature where it was found.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::document::{EligibilityCondition, Target, TreeDocument, DONT_KNOW};
use super::features::FeatureHierarchy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    InvalidId,
    MissingRoot,
    DanglingTarget,
    TooFewOptions,
    DuplicateOptionValue,
    DuplicateOptionLabel,
    ReservedOptionValue,
    UnknownFeature,
    DuplicateFeature,
    DontKnowWithoutTarget,
    DontKnowTargetNotAllowed,
    CycleDetected,
    UnreachableNode,
    UnreachableLeaf,
    MissingFallback,
    FallbackNotTable,
    DuplicateVisualization,
    InvalidEligibility,
    RepeatedFeatureOnPath,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Id of the offending node, leaf or feature.
    pub location: String,
    pub message: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}] {}", self.location, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TreeStats {
    pub internal_nodes: usize,
    pub leaves: usize,
    /// Edges (answer and dont-know) that end in a leaf.
    pub leaf_references: usize,
    /// Longest root-to-leaf route counted in questions. `None` if cyclic.
    pub max_depth: Option<usize>,
    /// Number of distinct root-to-leaf paths. `None` if cyclic.
    pub path_count: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub stats: TreeStats,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    fn push(&mut self, kind: ViolationKind, location: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation {
            kind,
            location: location.into(),
            message: message.into(),
        });
    }
}

fn is_kebab(id: &str) -> bool {
    !id.is_empty()
        && id.split('-').all(|part| {
            !part.is_empty() && part.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit())
        })
}

fn is_feature_key(key: &str) -> bool {
    key.split('.').all(is_kebab)
}

/// Lowercase alphanumerics only, so "Tree Map" and "treemap" collide.
pub fn normalize_name(name: &str) -> String {
    name.chars()
        .filter(|c| c.is_alphanumeric())
        .flat_map(char::to_lowercase)
        .collect()
}

pub fn validate(doc: &TreeDocument) -> ValidationReport {
    let mut report = ValidationReport::default();
    let hierarchy = FeatureHierarchy::new(&doc.features);

    check_ids(doc, &mut report);
    for key in hierarchy.duplicates() {
        report.push(ViolationKind::DuplicateFeature, key, format!("feature key '{key}' declared more than once"));
    }
    if !doc.nodes.contains_key(&doc.root) {
        report.push(ViolationKind::MissingRoot, &doc.root, format!("root '{}' is not a question node", doc.root));
    }
    check_nodes(doc, &hierarchy, &mut report);
    check_leaves(doc, &mut report);
    check_fallback(doc, &mut report);

    let acyclic = check_cycles(doc, &mut report);
    let reachable = check_reachability(doc, &mut report);
    if acyclic {
        check_repeated_features(doc, &reachable, &mut report);
        report.stats = compute_stats(doc, &reachable);
    } else {
        report.stats = TreeStats {
            internal_nodes: doc.nodes.len(),
            leaves: doc.leaves.len(),
            leaf_references: count_leaf_references(doc, &reachable),
            max_depth: None,
            path_count: None,
        };
    }
    report
}

fn check_ids(doc: &TreeDocument, report: &mut ValidationReport) {
    for id in doc.nodes.keys() {
        if !is_kebab(id) {
            report.push(ViolationKind::InvalidId, id, format!("node id '{id}' is not lowercase kebab-case"));
        }
    }
    for id in doc.leaves.keys() {
        if !is_kebab(id) {
            report.push(ViolationKind::InvalidId, id, format!("leaf id '{id}' is not lowercase kebab-case"));
        }
    }
    let hierarchy = FeatureHierarchy::new(&doc.features);
    for key in hierarchy.keys() {
        if !is_feature_key(key) {
            report.push(ViolationKind::InvalidId, key, format!("feature key '{key}' is not dotted kebab-case"));
        }
    }
}

fn target_exists(doc: &TreeDocument, target: &Target) -> bool {
    match target {
        Target::Node(id) => doc.nodes.contains_key(id),
        Target::Leaf(id) => doc.leaves.contains_key(id),
    }
}

fn check_nodes(doc: &TreeDocument, hierarchy: &FeatureHierarchy, report: &mut ValidationReport) {
    for (id, node) in &doc.nodes {
        if node.options.len() < 2 {
            report.push(
                ViolationKind::TooFewOptions,
                id,
                format!("node has {} option(s); at least 2 are required", node.options.len()),
            );
        }
        let mut values = HashSet::new();
        let mut labels = HashSet::new();
        for option in &node.options {
            if option.value == DONT_KNOW {
                report.push(
                    ViolationKind::ReservedOptionValue,
                    id,
                    format!("option value '{DONT_KNOW}' is reserved"),
                );
            }
            if !values.insert(option.value.as_str()) {
                report.push(
                    ViolationKind::DuplicateOptionValue,
                    id,
                    format!("option value '{}' appears more than once", option.value),
                );
            }
            if !labels.insert(option.label.as_str()) {
                report.push(
                    ViolationKind::DuplicateOptionLabel,
                    id,
                    format!("option label '{}' appears more than once", option.label),
                );
            }
            if !target_exists(doc, &option.target) {
                report.push(
                    ViolationKind::DanglingTarget,
                    id,
                    format!("option '{}' targets missing {}", option.value, option.target),
                );
            }
        }
        if !hierarchy.contains(&node.feature) {
            report.push(
                ViolationKind::UnknownFeature,
                id,
                format!("feature '{}' is not declared in the feature hierarchy", node.feature),
            );
        }
        match (&node.dont_know_target, node.allows_dont_know) {
            (None, true) => report.push(
                ViolationKind::DontKnowWithoutTarget,
                id,
                "node allows dont-know but defines no dont-know target",
            ),
            (Some(_), false) => report.push(
                ViolationKind::DontKnowTargetNotAllowed,
                id,
                "dont-know target defined on a node that does not allow dont-know",
            ),
            (Some(target), true) if !target_exists(doc, target) => report.push(
                ViolationKind::DanglingTarget,
                id,
                format!("dont-know targets missing {target}"),
            ),
            _ => {}
        }
    }
}

fn check_leaves(doc: &TreeDocument, report: &mut ValidationReport) {
    let mut seen: HashMap<String, &str> = HashMap::new();
    for (id, leaf) in &doc.leaves {
        let mut names: Vec<String> = std::iter::once(&leaf.name)
            .chain(&leaf.aliases)
            .map(|n| normalize_name(n))
            .collect();
        names.sort();
        names.dedup();
        for name in names {
            if let Some(other) = seen.get(&name) {
                report.push(
                    ViolationKind::DuplicateVisualization,
                    id,
                    format!("name '{name}' is already used by leaf '{other}'"),
                );
            } else {
                seen.insert(name, id);
            }
        }
        for condition in &leaf.eligibility {
            if let EligibilityCondition::AttributeCount {
                types,
                min: Some(lo),
                max: Some(hi),
            } = condition
            {
                if lo > hi {
                    report.push(
                        ViolationKind::InvalidEligibility,
                        id,
                        format!("attribute-count condition has min {lo} > max {hi}"),
                    );
                }
                if types.is_empty() {
                    report.push(ViolationKind::InvalidEligibility, id, "attribute-count condition lists no types");
                }
            }
        }
    }
}

fn check_fallback(doc: &TreeDocument, report: &mut ValidationReport) {
    match doc.leaves.get(&doc.fallback_leaf) {
        None => report.push(
            ViolationKind::MissingFallback,
            &doc.fallback_leaf,
            format!("fallback leaf '{}' does not exist", doc.fallback_leaf),
        ),
        Some(leaf) => {
            let table = normalize_name("Table");
            let is_table = normalize_name(&leaf.name) == table
                || leaf.aliases.iter().any(|a| normalize_name(a) == table);
            if !is_table {
                report.push(
                    ViolationKind::FallbackNotTable,
                    &doc.fallback_leaf,
                    format!("fallback leaf names '{}' rather than Table", leaf.name),
                );
            }
        }
    }
}

/// Iterative three-colour DFS over every node. Returns true when acyclic.
fn check_cycles(doc: &TreeDocument, report: &mut ValidationReport) -> bool {
    #[derive(Clone, Copy, PartialEq)]
    enum Colour {
        White,
        Grey,
        Black,
    }
    let mut colour: HashMap<&str, Colour> = doc.nodes.keys().map(|k| (k.as_str(), Colour::White)).collect();
    let mut acyclic = true;

    for start in doc.nodes.keys() {
        if colour[start.as_str()] != Colour::White {
            continue;
        }
        let mut stack: Vec<(&str, Vec<&str>)> = Vec::new();
        colour.insert(start, Colour::Grey);
        stack.push((start, successors(doc, start)));
        while let Some((node, pending)) = stack.last_mut() {
            let node = *node;
            match pending.pop() {
                Some(next) => match colour[next] {
                    Colour::White => {
                        colour.insert(next, Colour::Grey);
                        let succ = successors(doc, next);
                        stack.push((next, succ));
                    }
                    Colour::Grey => {
                        acyclic = false;
                        report.push(
                            ViolationKind::CycleDetected,
                            node,
                            format!("cycle detected: edge '{node}' -> '{next}' closes a loop"),
                        );
                    }
                    Colour::Black => {}
                },
                None => {
                    colour.insert(node, Colour::Black);
                    stack.pop();
                }
            }
        }
    }
    acyclic
}

/// Node successors that exist, reversed so that popping visits in document order.
fn successors<'a>(doc: &'a TreeDocument, id: &str) -> Vec<&'a str> {
    let Some(node) = doc.nodes.get(id) else {
        return Vec::new();
    };
    let mut out: Vec<&str> = node
        .edges()
        .filter_map(|(_, t)| match t {
            Target::Node(n) => doc.nodes.get_key_value(n).map(|(k, _)| k.as_str()),
            Target::Leaf(_) => None,
        })
        .collect();
    out.reverse();
    out
}

struct Reachable<'a> {
    nodes: HashSet<&'a str>,
}

fn check_reachability<'a>(doc: &'a TreeDocument, report: &mut ValidationReport) -> Reachable<'a> {
    let mut nodes = HashSet::new();
    let mut leaves = HashSet::new();
    if let Some((root, _)) = doc.nodes.get_key_value(&doc.root) {
        let mut queue = vec![root.as_str()];
        nodes.insert(root.as_str());
        while let Some(id) = queue.pop() {
            for (_, target) in doc.nodes[id].edges() {
                match target {
                    Target::Node(n) => {
                        if let Some((k, _)) = doc.nodes.get_key_value(n) {
                            if nodes.insert(k.as_str()) {
                                queue.push(k.as_str());
                            }
                        }
                    }
                    Target::Leaf(l) => {
                        if let Some((k, _)) = doc.leaves.get_key_value(l) {
                            leaves.insert(k.as_str());
                        }
                    }
                }
            }
        }
    }
    if doc.nodes.contains_key(&doc.root) {
        for id in doc.nodes.keys() {
            if !nodes.contains(id.as_str()) {
                report.push(ViolationKind::UnreachableNode, id, format!("node '{id}' is unreachable from the root"));
            }
        }
    }
    for id in doc.leaves.keys() {
        if !leaves.contains(id.as_str()) {
            report.push(ViolationKind::UnreachableLeaf, id, format!("leaf '{id}' is unreachable from the root"));
        }
    }
    Reachable { nodes }
}

/// Flags a node whose feature was already asked by some node above it.
/// Any ancestor lies on some root path through the node, so the union of
/// ancestor features is exact.
fn check_repeated_features(doc: &TreeDocument, reachable: &Reachable<'_>, report: &mut ValidationReport) {
    let order = topological_order(doc, reachable);
    let mut above: HashMap<&str, HashSet<&str>> = HashMap::new();
    for id in order {
        let node = &doc.nodes[id];
        let inherited = above.remove(id).unwrap_or_default();
        if inherited.contains(node.feature.as_str()) {
            report.push(
                ViolationKind::RepeatedFeatureOnPath,
                id,
                format!("feature '{}' is asked twice on one path", node.feature),
            );
        }
        let mut passed = inherited;
        passed.insert(node.feature.as_str());
        for (_, target) in node.edges() {
            if let Target::Node(n) = target {
                if let Some((k, _)) = doc.nodes.get_key_value(n) {
                    above.entry(k.as_str()).or_default().extend(passed.iter().copied());
                }
            }
        }
    }
}

/// Kahn order over reachable nodes; assumes the graph is acyclic.
fn topological_order<'a>(doc: &'a TreeDocument, reachable: &Reachable<'a>) -> Vec<&'a str> {
    let mut indegree: HashMap<&str, usize> = reachable.nodes.iter().map(|n| (*n, 0)).collect();
    for id in &reachable.nodes {
        for next in successors(doc, id) {
            *indegree.get_mut(next).expect("successor of reachable node is reachable") += 1;
        }
    }
    let mut ready: Vec<&str> = doc
        .nodes
        .keys()
        .map(String::as_str)
        .filter(|n| indegree.get(n) == Some(&0))
        .collect();
    let mut order = Vec::with_capacity(indegree.len());
    while let Some(id) = ready.pop() {
        order.push(id);
        for next in successors(doc, id) {
            let d = indegree.get_mut(next).expect("reachable");
            *d -= 1;
            if *d == 0 {
                ready.push(next);
            }
        }
    }
    order
}

fn count_leaf_references(doc: &TreeDocument, reachable: &Reachable<'_>) -> usize {
    reachable
        .nodes
        .iter()
        .flat_map(|id| doc.nodes[*id].edges())
        .filter(|(_, t)| matches!(t, Target::Leaf(_)))
        .count()
}

fn compute_stats(doc: &TreeDocument, reachable: &Reachable<'_>) -> TreeStats {
    // Depth and path counts by memoised recursion over the DAG.
    fn walk<'a>(doc: &'a TreeDocument, id: &'a str, memo: &mut HashMap<&'a str, (usize, u64)>) -> (usize, u64) {
        if let Some(v) = memo.get(id) {
            return *v;
        }
        let mut depth = 0;
        let mut paths = 0u64;
        for (_, target) in doc.nodes[id].edges() {
            match target {
                Target::Leaf(l) if doc.leaves.contains_key(l) => {
                    depth = depth.max(1);
                    paths += 1;
                }
                Target::Node(n) => {
                    if let Some((k, _)) = doc.nodes.get_key_value(n) {
                        let (d, p) = walk(doc, k, memo);
                        depth = depth.max(d + 1);
                        paths = paths.saturating_add(p);
                    }
                }
                Target::Leaf(_) => {}
            }
        }
        memo.insert(id, (depth, paths));
        (depth, paths)
    }

    let mut memo = HashMap::new();
    let (max_depth, path_count) = match doc.nodes.get_key_value(&doc.root) {
        Some((root, _)) => {
            let (d, p) = walk(doc, root, &mut memo);
            (Some(d), Some(p))
        }
        None => (None, None),
    };
    TreeStats {
        internal_nodes: doc.nodes.len(),
        leaves: doc.leaves.len(),
        leaf_references: count_leaf_references(doc, reachable),
        max_depth,
        path_count,
    }
}
