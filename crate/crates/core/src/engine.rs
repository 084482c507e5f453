//! Interactive and batch traversal of a [`DecisionTree`].
//!
//! A [`Session`] walks from the root question to exactly one visualization
//! leaf, recording every answer as a [`TraceStep`]. [`recommend_auto`] runs
//! the same walk unattended, answering data questions from a [`DataProfile`]
//! and task questions from a task feature key.

use std::sync::Arc;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;
use uuid::Uuid;

use crate::profiler::{answer_from_profile, DataProfile};
use crate::tree::{Branch, ClassificationVector, DecisionTree, QuestionNode, Target, DONT_KNOW};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("'{given}' is not an answer to '{node}'; valid answers: {}", .valid.join(", "))]
    InvalidAnswer {
        node: String,
        given: String,
        valid: Vec<String>,
    },
    #[error("session is finished")]
    Finished,
    #[error("already at the root question")]
    AtRoot,
    #[error("question '{0}' does not accept \"don't know\"")]
    DontKnowNotAllowed(String),
    #[error("unknown task '{key}'; valid tasks: {}", .valid.join(", "))]
    UnknownTask { key: String, valid: Vec<String> },
    #[error("classification vector has no answer for feature '{feature}' asked at '{node}'")]
    IncompleteVector { node: String, feature: String },
    #[error("answer sequence ended at question '{0}' before reaching a visualization")]
    Unfinished(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TraceSource {
    User,
    AutoFromProfile,
    DontKnow,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TraceStep {
    pub node_id: String,
    pub question: String,
    pub answer: String,
    pub answer_label: String,
    pub source: TraceSource,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Education {
    pub description: String,
    pub aliases: Vec<String>,
    pub advantages: Vec<String>,
    pub disadvantages: Vec<String>,
}

/// The single visualization a traversal ends in, with the route taken.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Recommendation {
    pub leaf_id: String,
    pub visualization: String,
    pub education: Education,
    pub trace: Vec<TraceStep>,
    pub fallback_used: bool,
}

impl Recommendation {
    fn new(tree: &DecisionTree, leaf_id: &str, trace: Vec<TraceStep>) -> Self {
        let leaf = tree.leaf(leaf_id).expect("validated tree references existing leaves");
        Recommendation {
            leaf_id: leaf_id.to_owned(),
            visualization: leaf.name.clone(),
            education: Education {
                description: leaf.description.clone(),
                aliases: leaf.aliases.clone(),
                advantages: leaf.advantages.clone(),
                disadvantages: leaf.disadvantages.clone(),
            },
            trace,
            fallback_used: leaf_id == tree.fallback_leaf(),
        }
    }

    /// Answer tokens in order, suitable for [`replay`].
    pub fn answers(&self) -> Vec<&str> {
        self.trace.iter().map(|s| s.answer.as_str()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptOption {
    pub label: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "camelCase")]
pub enum Prompt {
    #[serde(rename_all = "camelCase")]
    Question {
        node_id: String,
        text: String,
        branch: Branch,
        options: Vec<PromptOption>,
        allows_dont_know: bool,
    },
    Finished { recommendation: Recommendation },
}

impl Prompt {
    fn question(id: &str, node: &QuestionNode) -> Self {
        Prompt::Question {
            node_id: id.to_owned(),
            text: node.text.clone(),
            branch: node.branch,
            options: node
                .options
                .iter()
                .map(|o| PromptOption {
                    label: o.label.clone(),
                    value: o.value.clone(),
                })
                .collect(),
            allows_dont_know: node.allows_dont_know,
        }
    }

    pub fn recommendation(&self) -> Option<&Recommendation> {
        match self {
            Prompt::Finished { recommendation } => Some(recommendation),
            Prompt::Question { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "at", content = "id", rename_all = "lowercase")]
pub enum Cursor {
    Node(String),
    Finished(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SessionId(pub Uuid);

impl SessionId {
    pub fn new() -> Self {
        SessionId(Uuid::new_v4())
    }
}

impl Default for SessionId {
    fn default() -> Self {
        Self::new()
    }
}

impl std::fmt::Display for SessionId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

impl std::str::FromStr for SessionId {
    type Err = uuid::Error;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Uuid::parse_str(s).map(SessionId)
    }
}

/// Comparable traversal state: where the cursor is and how it got there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SessionState {
    pub cursor: Cursor,
    pub history: Vec<TraceStep>,
}

#[derive(Debug, Clone)]
pub struct Session {
    id: SessionId,
    tree: Arc<DecisionTree>,
    cursor: Cursor,
    history: Vec<TraceStep>,
    created_at: DateTime<Utc>,
}

impl Session {
    pub fn start(tree: Arc<DecisionTree>) -> Self {
        Session {
            id: SessionId::new(),
            cursor: Cursor::Node(tree.root().to_owned()),
            tree,
            history: Vec::new(),
            created_at: Utc::now(),
        }
    }

    pub fn id(&self) -> SessionId {
        self.id
    }

    pub fn tree(&self) -> &Arc<DecisionTree> {
        &self.tree
    }

    pub fn tree_version(&self) -> &str {
        self.tree.version()
    }

    pub fn cursor(&self) -> &Cursor {
        &self.cursor
    }

    pub fn history(&self) -> &[TraceStep] {
        &self.history
    }

    pub fn created_at(&self) -> DateTime<Utc> {
        self.created_at
    }

    pub fn is_finished(&self) -> bool {
        matches!(self.cursor, Cursor::Finished(_))
    }

    pub fn state(&self) -> SessionState {
        SessionState {
            cursor: self.cursor.clone(),
            history: self.history.clone(),
        }
    }

    pub fn recommendation(&self) -> Option<Recommendation> {
        match &self.cursor {
            Cursor::Finished(leaf) => Some(Recommendation::new(&self.tree, leaf, self.history.clone())),
            Cursor::Node(_) => None,
        }
    }

    pub fn prompt(&self) -> Prompt {
        match &self.cursor {
            Cursor::Node(id) => Prompt::question(id, self.current_node().expect("cursor node exists")),
            Cursor::Finished(_) => Prompt::Finished {
                recommendation: self.recommendation().expect("finished"),
            },
        }
    }

    fn current_node(&self) -> Option<&QuestionNode> {
        match &self.cursor {
            Cursor::Node(id) => self.tree.node(id),
            Cursor::Finished(_) => None,
        }
    }

    fn current_node_id(&self) -> Result<String, EngineError> {
        match &self.cursor {
            Cursor::Node(id) => Ok(id.clone()),
            Cursor::Finished(_) => Err(EngineError::Finished),
        }
    }

    /// Answers the current question. The reserved token `dont-know` is
    /// accepted wherever the question allows it.
    pub fn answer(&mut self, value: &str) -> Result<Prompt, EngineError> {
        self.answer_as(value, TraceSource::User)
    }

    fn answer_as(&mut self, value: &str, source: TraceSource) -> Result<Prompt, EngineError> {
        let node_id = self.current_node_id()?;
        let tree = Arc::clone(&self.tree);
        let node = tree.node(&node_id).expect("cursor node exists");
        if value == DONT_KNOW && node.allows_dont_know {
            return self.dont_know();
        }
        let Some(option) = node.option(value) else {
            let mut valid: Vec<String> = node.options.iter().map(|o| o.value.clone()).collect();
            if node.allows_dont_know {
                valid.push(DONT_KNOW.to_owned());
            }
            return Err(EngineError::InvalidAnswer {
                node: node_id,
                given: value.to_owned(),
                valid,
            });
        };
        self.advance(&node_id, node, &option.value, &option.label, &option.target, source);
        Ok(self.prompt())
    }

    /// Routes along the current question's dont-know edge.
    pub fn dont_know(&mut self) -> Result<Prompt, EngineError> {
        let node_id = self.current_node_id()?;
        let tree = Arc::clone(&self.tree);
        let node = tree.node(&node_id).expect("cursor node exists");
        let target = match (&node.dont_know_target, node.allows_dont_know) {
            (Some(target), true) => target,
            _ => return Err(EngineError::DontKnowNotAllowed(node_id)),
        };
        self.advance(&node_id, node, DONT_KNOW, "I don't know", target, TraceSource::DontKnow);
        Ok(self.prompt())
    }

    /// Undoes the last answer.
    pub fn go_back(&mut self) -> Result<Prompt, EngineError> {
        let step = self.history.pop().ok_or(EngineError::AtRoot)?;
        self.cursor = Cursor::Node(step.node_id);
        Ok(self.prompt())
    }

    fn advance(&mut self, node_id: &str, node: &QuestionNode, answer: &str, label: &str, target: &Target, source: TraceSource) {
        self.history.push(TraceStep {
            node_id: node_id.to_owned(),
            question: node.text.clone(),
            answer: answer.to_owned(),
            answer_label: label.to_owned(),
            source,
        });
        self.cursor = match target {
            Target::Node(n) => Cursor::Node(n.clone()),
            Target::Leaf(l) => Cursor::Finished(l.clone()),
        };
    }

    /// Ends the walk at the fallback leaf from a question that has no usable
    /// answer and no dont-know edge.
    fn fall_back(&mut self, node_id: &str) {
        let tree = Arc::clone(&self.tree);
        let node = tree.node(node_id).expect("cursor node exists");
        let target = Target::Leaf(tree.fallback_leaf().to_owned());
        self.advance(node_id, node, DONT_KNOW, "I don't know", &target, TraceSource::DontKnow);
    }
}

/// Starts a session on `tree`.
pub fn start_session(tree: Arc<DecisionTree>) -> Session {
    Session::start(tree)
}

/// Feeds `answers` into a fresh session. A `dont-know` on a question without
/// a dont-know edge ends at the fallback leaf, as unattended runs do.
pub fn replay<S: AsRef<str>>(tree: Arc<DecisionTree>, answers: &[S]) -> Result<Session, EngineError> {
    let mut session = Session::start(tree);
    for answer in answers {
        let answer = answer.as_ref();
        if let (DONT_KNOW, Cursor::Node(id)) = (answer, session.cursor.clone()) {
            if session.tree.node(&id).is_some_and(|n| !n.allows_dont_know) {
                session.fall_back(&id);
                continue;
            }
        }
        session.answer(answer)?;
    }
    Ok(session)
}

/// Walks the tree answering each question by looking its feature up in
/// `vector`; returns the leaf reached.
pub fn replay_vector(tree: Arc<DecisionTree>, vector: &ClassificationVector) -> Result<String, EngineError> {
    let mut session = Session::start(tree);
    loop {
        match session.cursor.clone() {
            Cursor::Finished(leaf) => return Ok(leaf),
            Cursor::Node(id) => {
                let feature = session.tree.node(&id).expect("cursor node exists").feature.clone();
                let answer = vector
                    .get(&feature)
                    .ok_or(EngineError::IncompleteVector { node: id, feature: feature.clone() })?
                    .to_owned();
                session.answer(&answer)?;
            }
        }
    }
}

enum AutoChoice {
    Answer(String),
    DontKnow,
}

fn auto_choice(tree: &DecisionTree, node: &QuestionNode, profile: &DataProfile, task: Option<&str>) -> AutoChoice {
    let features = tree.features();
    if features.is_data_feature(&node.feature) {
        return match answer_from_profile(&node.feature, profile) {
            Ok(Some(token)) if node.option(token).is_some() => AutoChoice::Answer(token.to_owned()),
            _ => AutoChoice::DontKnow,
        };
    }
    let matches = |key: &str| task.is_some_and(|t| features.is_self_or_ancestor(key, t));
    if node.is_yes_no() {
        let answer = if matches(&node.feature) { "yes" } else { "no" };
        return AutoChoice::Answer(answer.to_owned());
    }
    let matched = node.options.iter().find(|o| {
        let key = format!("{}.{}", node.feature, o.value);
        features.contains(&key) && matches(&key)
    });
    match matched.or_else(|| node.option("other")) {
        Some(option) => AutoChoice::Answer(option.value.clone()),
        None => AutoChoice::DontKnow,
    }
}

/// Runs a full unattended traversal and returns its single recommendation.
///
/// `task`, when given, must be a leaf of the task feature hierarchy.
pub fn recommend_auto(tree: Arc<DecisionTree>, profile: &DataProfile, task: Option<&str>) -> Result<Recommendation, EngineError> {
    if let Some(key) = task {
        let valid = tree.features().task_leaves();
        if !valid.contains(&key) {
            return Err(EngineError::UnknownTask {
                key: key.to_owned(),
                valid: valid.into_iter().map(str::to_owned).collect(),
            });
        }
    }
    let mut session = Session::start(tree);
    while let Cursor::Node(id) = session.cursor.clone() {
        let tree = Arc::clone(&session.tree);
        let node = tree.node(&id).expect("cursor node exists");
        match auto_choice(&tree, node, profile, task) {
            AutoChoice::Answer(token) => {
                session
                    .answer_as(&token, TraceSource::AutoFromProfile)
                    .expect("auto answers are drawn from the node's options");
            }
            AutoChoice::DontKnow if node.allows_dont_know => {
                session.dont_know().expect("node allows dont-know");
            }
            AutoChoice::DontKnow => session.fall_back(&id),
        }
    }
    Ok(session.recommendation().expect("loop exits on a finished cursor"))
}
