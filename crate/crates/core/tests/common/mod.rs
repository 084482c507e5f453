//! Helpers shared by the integration tests. The path oracle walks the raw
//! JSON document and shares no code with the library.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use vizadvisor_core::profiler::{gazetteer, AttributeType, Column};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn fixture_bytes(name: &str) -> Vec<u8> {
    let path = fixture_path(name);
    std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawPath {
    /// (node id, feature, answer) per step.
    pub steps: Vec<(String, String, String)>,
    pub leaf: String,
}

impl RawPath {
    pub fn answers(&self) -> Vec<String> {
        self.steps.iter().map(|s| s.2.clone()).collect()
    }

    pub fn vector(&self) -> BTreeMap<String, String> {
        self.steps.iter().map(|s| (s.1.clone(), s.2.clone())).collect()
    }
}

fn target(t: &Value) -> (bool, String) {
    if let Some(id) = t.get("node") {
        (true, id.as_str().unwrap().to_owned())
    } else {
        (false, t["leaf"].as_str().unwrap().to_owned())
    }
}

/// Every root-to-leaf route of a tree document, dont-know edges included.
pub fn raw_paths(doc: &Value) -> Vec<RawPath> {
    fn walk(doc: &Value, node: &str, prefix: &mut Vec<(String, String, String)>, out: &mut Vec<RawPath>) {
        assert!(prefix.len() < 64, "path too long, cycle?");
        let n = &doc["nodes"][node];
        let feature = n["feature"].as_str().unwrap().to_owned();
        let mut edges: Vec<(String, &Value)> = n["options"]
            .as_array()
            .unwrap()
            .iter()
            .map(|o| (o["value"].as_str().unwrap().to_owned(), &o["target"]))
            .collect();
        if n.get("allowsDontKnow").and_then(Value::as_bool).unwrap_or(false) {
            if let Some(t) = n.get("dontKnowTarget") {
                edges.push(("dont-know".to_owned(), t));
            }
        }
        for (answer, t) in edges {
            prefix.push((node.to_owned(), feature.clone(), answer));
            match target(t) {
                (true, id) => walk(doc, &id, prefix, out),
                (false, leaf) => out.push(RawPath {
                    steps: prefix.clone(),
                    leaf,
                }),
            }
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    walk(doc, doc["root"].as_str().unwrap(), &mut Vec::new(), &mut out);
    out
}

pub fn seed_json() -> Value {
    serde_json::from_str(vizadvisor_core::knowledge::seed_document()).unwrap()
}

pub const WORDS: &[&str] = &[
    "alpha", "beta", "gamma", "delta", "red", "green", "blue", "small", "medium", "large", "gold", "silver", "bronze",
    "north-wing", "south-wing", "basic", "premium", "pending", "shipped", "closed",
];

fn sprinkle_nulls(rng: &mut ChaCha8Rng, cells: &mut [String]) {
    // At most 1 in 30 cells, never all of them.
    for cell in cells.iter_mut().skip(1) {
        if rng.gen_ratio(1, 30) {
            *cell = ["", "NA", "null"].choose(rng).unwrap().to_string();
        }
    }
}

/// A column whose true type is `ty`, with a few nulls mixed in.
pub fn generate_column(rng: &mut ChaCha8Rng, ty: AttributeType, index: usize) -> Column {
    let rows = rng.gen_range(30..200);
    let (name, mut cells): (String, Vec<String>) = match ty {
        AttributeType::Quantitative => (
            format!("measure_{index}"),
            (0..rows)
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        rng.gen_range(-5000..5000).to_string()
                    } else {
                        format!("{:.3}", rng.gen_range(-1e4..1e4))
                    }
                })
                .collect(),
        ),
        AttributeType::GeospatialLat => (
            ["lat", "latitude", "start_lat", "Latitude"].choose(rng).unwrap().to_string(),
            (0..rows).map(|_| format!("{:.4}", rng.gen_range(-90.0..=90.0))).collect(),
        ),
        AttributeType::GeospatialLon => (
            ["lon", "lng", "longitude", "end_lon"].choose(rng).unwrap().to_string(),
            (0..rows).map(|_| format!("{:.4}", rng.gen_range(-180.0..=180.0))).collect(),
        ),
        AttributeType::Temporal => {
            let start = chrono::NaiveDate::from_ymd_opt(1990, 1, 1).unwrap();
            let pattern = *["%Y-%m-%d", "%Y/%m/%d", "%Y-%m-%dT%H:%M:%S"].choose(rng).unwrap();
            (
                format!("when_{index}"),
                (0..rows)
                    .map(|_| {
                        let d = start + chrono::Days::new(rng.gen_range(0..12000));
                        d.and_hms_opt(rng.gen_range(0..24), 0, 0).unwrap().format(pattern).to_string()
                    })
                    .collect(),
            )
        }
        AttributeType::GeospatialName => {
            let places = gazetteer::places();
            (
                format!("place_{index}"),
                (0..rows).map(|_| places.choose(rng).unwrap().to_string()).collect(),
            )
        }
        AttributeType::Categorical => {
            let k = rng.gen_range(2..=WORDS.len());
            let pool = &WORDS[..k];
            (
                format!("group_{index}"),
                (0..rows).map(|_| pool.choose(rng).unwrap().to_string()).collect(),
            )
        }
        AttributeType::IdentifierText => (
            format!("label_{index}"),
            (0..rows).map(|i| format!("item-{i}-{}", rng.gen_range(0..1000))).collect(),
        ),
        AttributeType::Boolean => {
            let pair = *[("true", "false"), ("yes", "no"), ("Yes", "No"), ("0", "1")]
                .choose(rng)
                .unwrap();
            (
                format!("flag_{index}"),
                (0..rows).map(|_| if rng.gen_bool(0.5) { pair.0 } else { pair.1 }.to_string()).collect(),
            )
        }
    };
    sprinkle_nulls(rng, &mut cells);
    Column::new(name, cells)
}
