//! Rule cascade assigning exactly one [`AttributeType`] to a column.
//!
//! Order: boolean, quantitative (refined to latitude/longitude by name and
//! range), temporal, geographic name, categorical, identifier text.

use std::collections::HashSet;

use chrono::{DateTime, NaiveDate, NaiveDateTime};

use super::dataset::Column;
use super::gazetteer;
use super::{AttributeType, ProfileError};

#[derive(Debug, Clone, PartialEq)]
pub struct InferenceConfig {
    /// Share of non-null cells that must parse as numbers.
    pub numeric_ratio: f64,
    /// Share of non-null cells that must parse as dates.
    pub temporal_ratio: f64,
    /// Share of non-null cells that must be known place names.
    pub gazetteer_ratio: f64,
    /// Categorical when distinct values ≤ max(this, fraction × rows).
    pub categorical_min_distinct: usize,
    pub categorical_row_fraction: f64,
}

impl Default for InferenceConfig {
    fn default() -> Self {
        InferenceConfig {
            numeric_ratio: 0.95,
            temporal_ratio: 0.95,
            gazetteer_ratio: 0.80,
            categorical_min_distinct: 20,
            categorical_row_fraction: 0.10,
        }
    }
}

/// Empty, `NA` and `null` (any case) cells are missing values.
pub fn is_null(cell: &str) -> bool {
    let cell = cell.trim();
    cell.is_empty() || cell.eq_ignore_ascii_case("na") || cell.eq_ignore_ascii_case("null")
}

pub(super) fn parse_number(cell: &str) -> Option<f64> {
    let cell = cell.trim();
    // Rust accepts "inf"/"nan"; those are words here, not measurements.
    if !cell.bytes().any(|b| b.is_ascii_digit()) {
        return None;
    }
    cell.parse::<f64>().ok().filter(|v| v.is_finite())
}

const DATE_FORMATS: &[&str] = &["%Y-%m-%d", "%Y/%m/%d", "%d/%m/%Y", "%m/%d/%Y", "%d.%m.%Y", "%d-%m-%Y"];
const DATETIME_FORMATS: &[&str] = &[
    "%Y-%m-%dT%H:%M:%S",
    "%Y-%m-%d %H:%M:%S",
    "%Y-%m-%dT%H:%M",
    "%Y-%m-%d %H:%M",
    "%Y-%m-%dT%H:%M:%S%.f",
    "%Y-%m-%d %H:%M:%S%.f",
];

pub(super) fn parse_date(cell: &str) -> Option<NaiveDateTime> {
    let cell = cell.trim();
    if let Ok(dt) = DateTime::parse_from_rfc3339(cell) {
        return Some(dt.naive_utc());
    }
    for format in DATETIME_FORMATS {
        if let Ok(dt) = NaiveDateTime::parse_from_str(cell, format) {
            return Some(dt);
        }
    }
    for format in DATE_FORMATS {
        if let Ok(d) = NaiveDate::parse_from_str(cell, format) {
            return d.and_hms_opt(0, 0, 0);
        }
    }
    // ISO year-month
    if cell.len() == 7 && cell.as_bytes()[4] == b'-' {
        if let Ok(d) = NaiveDate::parse_from_str(&format!("{cell}-01"), "%Y-%m-%d") {
            return d.and_hms_opt(0, 0, 0);
        }
    }
    None
}

fn name_tokens(name: &str) -> Vec<String> {
    name.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

fn names_latitude(name: &str) -> bool {
    name_tokens(name).iter().any(|t| t == "lat" || t == "latitude")
}

fn names_longitude(name: &str) -> bool {
    name_tokens(name).iter().any(|t| t == "lon" || t == "lng" || t == "longitude")
}

fn share(count: usize, total: usize) -> f64 {
    count as f64 / total as f64
}

pub fn infer_attribute_type(column: &Column, config: &InferenceConfig) -> Result<AttributeType, ProfileError> {
    let values: Vec<&str> = column.cells.iter().map(|c| c.trim()).filter(|c| !is_null(c)).collect();
    if values.is_empty() {
        return Err(ProfileError::AllNull(column.name.clone()));
    }
    let total = values.len();

    let lowered: Vec<String> = values.iter().map(|v| v.to_lowercase()).collect();
    let boolean_words = ["true", "false", "yes", "no", "0", "1"];
    if lowered.iter().all(|v| boolean_words.contains(&v.as_str())) {
        let distinct: HashSet<&str> = lowered.iter().map(String::as_str).collect();
        if distinct.len() <= 2 {
            return Ok(AttributeType::Boolean);
        }
    }

    let numbers: Vec<f64> = values.iter().filter_map(|v| parse_number(v)).collect();
    if share(numbers.len(), total) >= config.numeric_ratio {
        let within = |lo: f64, hi: f64| numbers.iter().all(|v| (lo..=hi).contains(v));
        if names_latitude(&column.name) && within(-90.0, 90.0) {
            return Ok(AttributeType::GeospatialLat);
        }
        if names_longitude(&column.name) && within(-180.0, 180.0) {
            return Ok(AttributeType::GeospatialLon);
        }
        return Ok(AttributeType::Quantitative);
    }

    let dates = values.iter().filter(|v| parse_date(v).is_some()).count();
    if share(dates, total) >= config.temporal_ratio {
        return Ok(AttributeType::Temporal);
    }

    let places = values.iter().filter(|v| gazetteer::is_place(v)).count();
    if share(places, total) >= config.gazetteer_ratio {
        return Ok(AttributeType::GeospatialName);
    }

    let distinct = values.iter().collect::<HashSet<_>>().len();
    let limit = (config.categorical_min_distinct as f64).max(config.categorical_row_fraction * column.cells.len() as f64);
    if distinct as f64 <= limit {
        return Ok(AttributeType::Categorical);
    }
    Ok(AttributeType::IdentifierText)
}
