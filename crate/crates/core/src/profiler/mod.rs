//! Dataset ingestion, attribute typing and data-question answering.

mod answer;
mod dataset;
mod eligibility;
pub mod gazetteer;
mod infer;
mod profile;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use answer::{answer_from_profile, DataFeature};
pub use dataset::{ingest_csv, Column, CsvOptions, Dataset};
pub use eligibility::{check_eligibility, ConditionResult, EligibilityReport};
pub use infer::{infer_attribute_type, is_null, InferenceConfig};
pub use profile::{profile, profile_with, ColumnProfile, DataProfile, ProfileFlags};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttributeType {
    Quantitative,
    Categorical,
    Temporal,
    GeospatialLat,
    GeospatialLon,
    GeospatialName,
    IdentifierText,
    Boolean,
}

impl AttributeType {
    pub const ALL: [AttributeType; 8] = [
        AttributeType::Quantitative,
        AttributeType::Categorical,
        AttributeType::Temporal,
        AttributeType::GeospatialLat,
        AttributeType::GeospatialLon,
        AttributeType::GeospatialName,
        AttributeType::IdentifierText,
        AttributeType::Boolean,
    ];

    /// Types whose values name discrete groups.
    pub const NOMINAL: [AttributeType; 3] =
        [AttributeType::Categorical, AttributeType::Boolean, AttributeType::GeospatialName];

    pub fn as_str(self) -> &'static str {
        match self {
            AttributeType::Quantitative => "quantitative",
            AttributeType::Categorical => "categorical",
            AttributeType::Temporal => "temporal",
            AttributeType::GeospatialLat => "geospatial-lat",
            AttributeType::GeospatialLon => "geospatial-lon",
            AttributeType::GeospatialName => "geospatial-name",
            AttributeType::IdentifierText => "identifier-text",
            AttributeType::Boolean => "boolean",
        }
    }

    pub fn is_geospatial(self) -> bool {
        matches!(
            self,
            AttributeType::GeospatialLat | AttributeType::GeospatialLon | AttributeType::GeospatialName
        )
    }

    pub fn is_nominal(self) -> bool {
        Self::NOMINAL.contains(&self)
    }
}

impl std::fmt::Display for AttributeType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProfileError {
    #[error("input is empty")]
    EmptyInput,
    #[error("input has a header but no data rows")]
    NoDataRows,
    #[error("row at line {line} has {found} fields, expected {expected}")]
    RaggedRow { line: u64, expected: usize, found: usize },
    #[error("malformed CSV: {0}")]
    Csv(String),
    #[error("duplicate column name '{0}'")]
    DuplicateColumn(String),
    #[error("column '{0}' contains only null cells")]
    AllNull(String),
    #[error("unknown column '{0}'")]
    UnknownColumn(String),
    #[error("no columns selected")]
    EmptySelection,
    #[error("feature '{0}' is not a data-characteristics feature")]
    NotADataFeature(String),
}
