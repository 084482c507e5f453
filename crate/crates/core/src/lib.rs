//! Question-based data visualization recommender.
//!
//! A [`tree::DecisionTree`] asks the user either about their task or about
//! their data and always ends in exactly one visualization. The
//! [`profiler`] answers data questions from a CSV file, [`engine`] runs
//! interactive or unattended traversals with a replayable trace, and
//! [`extension`] adds new visualization types to an existing tree.

pub mod engine;
pub mod extension;
pub mod knowledge;
pub mod profiler;
pub mod store;
pub mod tree;

pub use engine::{recommend_auto, replay, start_session, Prompt, Recommendation, Session, TraceSource, TraceStep};
pub use knowledge::{catalog, seed_tree};
pub use tree::{load_tree, validate, DecisionTree};
