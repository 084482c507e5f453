//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails. Depends on the core crate only; no web UI is built.

mod common;

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use vizadvisor_core::engine::{recommend_auto, replay, Prompt, Session};
use vizadvisor_core::extension::{
    classify_candidate, conservativeness_violations, find_similar, insert_distinguishing_question, ExtensionSpec,
};
use vizadvisor_core::knowledge::seed_tree;
use vizadvisor_core::profiler::{
    check_eligibility, infer_attribute_type, ingest_csv, profile, AttributeType, ColumnProfile, CsvOptions,
    DataProfile, InferenceConfig,
};
use vizadvisor_core::tree::DONT_KNOW;

use common::{fixture_bytes, generate_column, raw_paths, seed_json};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const MAP_FAMILY: &[&str] = &[
    "choropleth-map",
    "dot-map",
    "proportional-symbol-map",
    "cartogram",
    "connection-map",
];

fn fixture_suite() -> Outcome {
    let tree = Arc::new(seed_tree());
    let scenarios: [(&str, Option<&str>, &[&str]); 10] = [
        ("sales_by_category.csv", Some("compare.quantities"), &["bar-chart"]),
        ("monthly_prices.csv", Some("compare.over-time"), &["line-chart", "bar-chart"]),
        ("medals.csv", Some("compare.quantities"), &["clustered-bar-chart"]),
        ("org_budget.csv", Some("compare.proportions"), &["tree-map"]),
        ("height_weight.csv", Some("analyze.correlations"), &["scatter-plot"]),
        ("friendships.csv", None, &["network"]),
        ("response_times.csv", Some("analyze.distribution"), &["histogram", "scatter-plot", "line-chart"]),
        ("earthquakes.csv", None, MAP_FAMILY),
        ("car_specs.csv", Some("compare.other"), &["stacked-line-chart", "parallel-coordinates"]),
        ("flight_routes.csv", None, &["proportional-symbol-map", "connection-map"]),
    ];
    let inputs: Vec<Vec<u8>> = scenarios.iter().map(|(f, _, _)| fixture_bytes(f)).collect();
    let started = Instant::now();
    let mut got = Vec::new();
    for ((file, task, allowed), bytes) in scenarios.iter().zip(&inputs) {
        let dataset = ingest_csv(bytes, &CsvOptions::default()).map_err(|e| format!("{file}: {e}"))?;
        let names: Vec<&str> = dataset.columns().iter().map(|c| c.name.as_str()).collect();
        let p = profile(&dataset, &names).map_err(|e| format!("{file}: {e}"))?;
        let rec = recommend_auto(Arc::clone(&tree), &p, *task).map_err(|e| format!("{file}: {e}"))?;
        ensure!(allowed.contains(&rec.leaf_id.as_str()), "{file}: got {} not in {allowed:?}", rec.leaf_id);
        got.push(rec.leaf_id);
    }
    let elapsed = started.elapsed();
    ensure!(elapsed < Duration::from_secs(1), "suite took {elapsed:?}");
    Ok(format!("10/10 scenarios in {elapsed:.2?}: {}", got.join(", ")))
}

fn structural_suite() -> Outcome {
    let tree = seed_tree();
    let report = tree.validate();
    ensure!(report.is_clean(), "violations: {:?}", report.violations);
    let leaves = tree.leaves().count();
    ensure!(leaves >= 29, "only {leaves} visualization types");
    let depth = tree.stats().max_depth.unwrap_or(usize::MAX);
    ensure!(depth <= 12, "max depth {depth}");
    let paths = raw_paths(&seed_json());
    ensure!(
        paths.iter().any(|p| p.leaf == tree.fallback_leaf()),
        "fallback leaf unreachable"
    );
    ensure!(
        paths.iter().all(|p| tree.leaf(&p.leaf).is_some()),
        "a path ends outside the leaf set"
    );
    ensure!(
        tree.stats().path_count == Some(paths.len() as u64),
        "path count mismatch"
    );
    Ok(format!(
        "clean; {leaves} types, {} questions, max depth {depth}, {} paths all end at leaves",
        tree.stats().internal_nodes,
        paths.len()
    ))
}

fn extendibility() -> Outcome {
    let original = seed_tree();
    let candidate = classify_candidate(
        &original,
        &[("task", "yes"), ("compare", "proportions"), ("data.hierarchical", "yes")]
            .into_iter()
            .map(|(k, v)| (k.to_owned(), v.to_owned()))
            .collect(),
    )
    .map_err(|e| e.to_string())?;
    let ranked = find_similar(&original, &candidate);
    let top = ranked.first().ok_or("no leaves ranked")?;
    ensure!(
        top.leaf == "tree-map" && top.distance == 0 && top.collision,
        "expected Tree Map collision, got {top:?}"
    );

    let spec: ExtensionSpec =
        serde_json::from_slice(&fixture_bytes("sankey_extension.json")).map_err(|e| e.to_string())?;
    let (extended, _) = insert_distinguishing_question(&original, &spec).map_err(|e| e.to_string())?;
    ensure!(extended.validate().is_clean(), "extended tree has violations");
    let ext_json: serde_json::Value = serde_json::from_str(&extended.to_json()).map_err(|e| e.to_string())?;
    let sankey: Vec<_> = raw_paths(&ext_json)
        .into_iter()
        .filter(|p| p.leaf == "sankey-diagram")
        .collect();
    let task_based = sankey.iter().any(|p| p.answers()[0] == "yes");
    let data_based = sankey.iter().any(|p| p.answers()[0] != "yes");
    ensure!(
        sankey.len() >= 2 && task_based && data_based,
        "Sankey reachable by {} paths (task {task_based}, data {data_based})",
        sankey.len()
    );
    let extended = Arc::new(extended);
    let violations = conservativeness_violations(&original, &extended, "show-flow");
    ensure!(violations.is_empty(), "{} non-conservative paths: {:?}", violations.len(), &violations[..1]);
    let non_flow = raw_paths(&seed_json()).into_iter().filter(|p| p.leaf != "tree-map");
    let mut replayed = 0;
    for path in non_flow {
        let s = replay(Arc::clone(&extended), &path.answers()).map_err(|e| e.to_string())?;
        let leaf = s.recommendation().ok_or("replay did not finish")?.leaf_id;
        ensure!(leaf == path.leaf, "{:?} now ends at {leaf}", path.answers());
        replayed += 1;
    }
    Ok(format!(
        "collision at distance 0; Sankey on {} paths; {replayed} non-flow paths unchanged; valid",
        sankey.len()
    ))
}

fn options(prompt: &Prompt) -> Vec<String> {
    match prompt {
        Prompt::Question {
            options,
            allows_dont_know,
            ..
        } => options
            .iter()
            .map(|o| o.value.clone())
            .chain(allows_dont_know.then(|| DONT_KNOW.to_owned()))
            .collect(),
        Prompt::Finished { .. } => vec![],
    }
}

fn determinism() -> Outcome {
    let tree = Arc::new(seed_tree());
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut undo_checks = 0;
    for i in 0..1000 {
        let mut session = Session::start(Arc::clone(&tree));
        let mut answers = Vec::new();
        while let Some(pick) = options(&session.prompt()).choose(&mut rng).cloned() {
            let before = session.state();
            session.answer(&pick).map_err(|e| e.to_string())?;
            session.go_back().map_err(|e| e.to_string())?;
            ensure!(session.state() == before, "sequence {i}: back after answer changed state");
            undo_checks += 1;
            session.answer(&pick).map_err(|e| e.to_string())?;
            answers.push(pick);
        }
        let rec = session.recommendation().ok_or("walk did not finish")?;
        let again = replay(Arc::clone(&tree), &answers).map_err(|e| e.to_string())?;
        let again = again.recommendation().ok_or("replay did not finish")?;
        ensure!(again == rec, "sequence {i}: identical answers gave a different recommendation");
        let from_trace = replay(Arc::clone(&tree), &rec.answers()).map_err(|e| e.to_string())?;
        ensure!(
            from_trace.recommendation().map(|r| r.leaf_id) == Some(rec.leaf_id.clone()),
            "sequence {i}: trace replay diverged"
        );
    }
    Ok(format!("1000 sequences, {undo_checks} answer/back checks, 0 violations"))
}

fn profiler_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let config = InferenceConfig::default();
    let mut agree = 0;
    for i in 0..500 {
        let ty = AttributeType::ALL[i % AttributeType::ALL.len()];
        let column = generate_column(&mut rng, ty, i);
        let got = infer_attribute_type(&column, &config).map_err(|e| e.to_string())?;
        ensure!(got == ty, "column {} expected {ty:?}, got {got:?}", column.name);
        agree += 1;
    }

    let tree = seed_tree();
    let profile_of = |quantitative: usize, parts: Option<usize>| {
        let mut cols: Vec<ColumnProfile> = (0..quantitative)
            .map(|i| ColumnProfile {
                name: format!("q{i}"),
                attribute_type: AttributeType::Quantitative,
                distinct_count: 50,
                null_fraction: 0.0,
            })
            .collect();
        cols.extend(parts.map(|k| ColumnProfile {
            name: "part".into(),
            attribute_type: AttributeType::Categorical,
            distinct_count: k,
            null_fraction: 0.0,
        }));
        DataProfile::from_columns(cols)
    };
    let scatter = tree.leaf("scatter-plot").ok_or("no scatter plot leaf")?;
    for n in 0..=8 {
        let eligible = check_eligibility(scatter, &profile_of(n, None)).eligible;
        ensure!(eligible == (2..=4).contains(&n), "scatter plot with {n} quantitative: {eligible}");
    }
    let pie = tree.leaf("pie-chart").ok_or("no pie chart leaf")?;
    for k in 1..=15 {
        let eligible = check_eligibility(pie, &profile_of(1, Some(k))).eligible;
        ensure!(eligible == (k <= 7), "pie chart with {k} parts: {eligible}");
    }
    Ok(format!("{agree}/500 columns agree; scatter 2-4 and pie <=7 reproduced"))
}

fn no_web_ui() -> Outcome {
    // This target links only the core crate; the web UI is not part of the workspace.
    let manifest = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("Cargo.toml");
    let text = std::fs::read_to_string(&manifest).map_err(|e| e.to_string())?;
    ensure!(!text.contains("webui"), "core depends on a web UI crate");
    Ok("suite ran against the core crate alone".into())
}

fn main() {
    let criteria: [Criterion; 6] = [
        ("fixture suite", fixture_suite),
        ("structural suite", structural_suite),
        ("extendibility (Sankey)", extendibility),
        ("determinism and trace", determinism),
        ("profiler oracle", profiler_oracle),
        ("runs without web UI", no_web_ui),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
