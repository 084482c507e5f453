//! Plain-text rendering shared by the wizard and the batch recommender.

use std::fmt::Write;

use vizadvisor_core::engine::{Recommendation, TraceSource};
use vizadvisor_core::tree::{TreeStats, Violation};

pub fn recommendation(rec: &Recommendation) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Recommendation: {}", rec.visualization);
    if rec.fallback_used {
        let _ = writeln!(out, "(no more specific visualization could be determined)");
    }
    let edu = &rec.education;
    if !edu.aliases.is_empty() {
        let _ = writeln!(out, "Also known as: {}", edu.aliases.join(", "));
    }
    let _ = writeln!(out, "\n{}", edu.description);
    for (title, items) in [("Advantages", &edu.advantages), ("Disadvantages", &edu.disadvantages)] {
        if !items.is_empty() {
            let _ = writeln!(out, "\n{title}:");
            for item in items {
                let _ = writeln!(out, "  - {item}");
            }
        }
    }
    let _ = writeln!(out, "\nWhy this visualization:");
    for (i, step) in rec.trace.iter().enumerate() {
        let note = match step.source {
            TraceSource::User => "",
            TraceSource::AutoFromProfile => "  [from data]",
            TraceSource::DontKnow => "  [don't know]",
        };
        let _ = writeln!(out, "  {}. {} -> {}{note}", i + 1, step.question, step.answer_label);
    }
    out
}

pub fn stats(stats: &TreeStats, version: &str) -> String {
    let opt = |v: Option<String>| v.unwrap_or_else(|| "n/a".into());
    format!(
        "tree version {version}: {} questions, {} visualizations ({} leaf references), max depth {}, {} paths\n",
        stats.internal_nodes,
        stats.leaves,
        stats.leaf_references,
        opt(stats.max_depth.map(|d| d.to_string())),
        opt(stats.path_count.map(|c| c.to_string())),
    )
}

pub fn violations(violations: &[Violation]) -> String {
    violations.iter().map(|v| format!("  {v}\n")).collect()
}
