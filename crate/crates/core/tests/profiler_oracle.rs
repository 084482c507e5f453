//! Generated columns of known type must be inferred as that type, and seed
//! eligibility rules must agree with hand-written predicates.

mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use vizadvisor_core::knowledge::seed_tree;
use vizadvisor_core::profiler::{
    check_eligibility, infer_attribute_type, profile, AttributeType, Column, ColumnProfile, DataProfile, Dataset,
    InferenceConfig,
};

use common::{generate_column, WORDS};

#[test]
fn five_hundred_generated_columns_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let config = InferenceConfig::default();
    let mut mismatches = Vec::new();
    for i in 0..500 {
        let ty = AttributeType::ALL[i % AttributeType::ALL.len()];
        let column = generate_column(&mut rng, ty, i);
        let got = infer_attribute_type(&column, &config).unwrap();
        if got != ty {
            mismatches.push((column.name.clone(), ty, got, column.cells[..5].to_vec()));
        }
    }
    assert!(mismatches.is_empty(), "{mismatches:#?}");
}

fn quantitative_profile(n: usize, parts: Option<usize>) -> DataProfile {
    let mut cols: Vec<ColumnProfile> = (0..n)
        .map(|i| ColumnProfile {
            name: format!("q{i}"),
            attribute_type: AttributeType::Quantitative,
            distinct_count: 50,
            null_fraction: 0.0,
        })
        .collect();
    if let Some(k) = parts {
        cols.push(ColumnProfile {
            name: "part".into(),
            attribute_type: AttributeType::Categorical,
            distinct_count: k,
            null_fraction: 0.0,
        });
    }
    DataProfile::from_columns(cols)
}

#[test]
fn scatter_needs_two_to_four_measures() {
    let tree = seed_tree();
    let scatter = tree.leaf("scatter-plot").unwrap();
    for n in 0..=8 {
        let eligible = check_eligibility(scatter, &quantitative_profile(n, None)).eligible;
        assert_eq!(eligible, (2..=4).contains(&n), "{n} quantitative attributes");
    }
}

#[test]
fn pie_needs_at_most_seven_parts() {
    let tree = seed_tree();
    let pie = tree.leaf("pie-chart").unwrap();
    for parts in 1..=15 {
        let report = check_eligibility(pie, &quantitative_profile(1, Some(parts)));
        assert_eq!(report.eligible, parts <= 7, "{parts} parts");
        if parts > 7 {
            assert!(report.failed().any(|c| c.description.contains('7')));
        }
    }
}

#[test]
fn profiled_csv_eligibility() {
    let parts = |k: usize| {
        Dataset::new(vec![
            Column::new("segment", (0..40).map(|i| WORDS[i % k].to_string())),
            Column::new("share", (0..40).map(|i| (i * 3).to_string())),
        ])
        .unwrap()
    };
    let tree = seed_tree();
    let pie = tree.leaf("pie-chart").unwrap();
    for k in [3, 7, 8, 12] {
        let p = profile(&parts(k), &["segment", "share"]).unwrap();
        assert_eq!(check_eligibility(pie, &p).eligible, k <= 7, "{k}");
    }
}

proptest! {
    #[test]
    fn integer_columns_are_quantitative(values in prop::collection::vec(2i64..1_000_000, 3..60)) {
        let column = Column::new("amount", values.iter().map(|v| v.to_string()));
        prop_assert_eq!(infer_attribute_type(&column, &InferenceConfig::default()).unwrap(), AttributeType::Quantitative);
    }

    #[test]
    fn latitude_range_decides(values in prop::collection::vec(-200.0f64..200.0, 2..40)) {
        let column = Column::new("latitude", values.iter().map(|v| format!("{v:.3}")));
        let got = infer_attribute_type(&column, &InferenceConfig::default()).unwrap();
        let in_range = values.iter().all(|v| format!("{v:.3}").parse::<f64>().unwrap().abs() <= 90.0);
        prop_assert_eq!(got, if in_range { AttributeType::GeospatialLat } else { AttributeType::Quantitative });
    }

    #[test]
    fn nulls_never_change_the_type(
        values in prop::collection::vec(0u32..500, 5..50),
        nulls in prop::collection::vec(prop::sample::select(vec!["", "NA", "null", " NULL "]), 0..20),
    ) {
        let plain = Column::new("n", values.iter().map(|v| format!("{v}.5")));
        let mut cells: Vec<String> = plain.cells.clone();
        cells.extend(nulls.iter().map(|s| s.to_string()));
        let noisy = Column::new("n", cells);
        let config = InferenceConfig::default();
        prop_assert_eq!(
            infer_attribute_type(&plain, &config).unwrap(),
            infer_attribute_type(&noisy, &config).unwrap()
        );
    }

    #[test]
    fn type_counts_sum_to_selection(k in 1usize..6) {
        let columns: Vec<Column> = (0..k)
            .map(|i| Column::new(format!("c{i}"), (0..10).map(move |r| (r * (i + 1)).to_string())))
            .collect();
        let dataset = Dataset::new(columns).unwrap();
        let names: Vec<String> = (0..k).map(|i| format!("c{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let p = profile(&dataset, &refs).unwrap();
        prop_assert_eq!(p.type_counts.values().sum::<usize>(), k);
    }
}
