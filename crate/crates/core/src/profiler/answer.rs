use super::profile::DataProfile;
use super::{AttributeType, ProfileError};

/// Data-branch questions the profiler can answer, keyed by feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataFeature {
    Spatial,
    Network,
    Hierarchical,
    OverTime,
    LocationKind,
    QuantitativeCount,
    CategoricalCount,
    Parts,
    Text,
    TimePoints,
}

impl DataFeature {
    pub const ALL: [DataFeature; 10] = [
        DataFeature::Spatial,
        DataFeature::Network,
        DataFeature::Hierarchical,
        DataFeature::OverTime,
        DataFeature::LocationKind,
        DataFeature::QuantitativeCount,
        DataFeature::CategoricalCount,
        DataFeature::Parts,
        DataFeature::Text,
        DataFeature::TimePoints,
    ];

    pub fn key(self) -> &'static str {
        match self {
            DataFeature::Spatial => "data.spatial",
            DataFeature::Network => "data.network",
            DataFeature::Hierarchical => "data.hierarchical",
            DataFeature::OverTime => "data.over-time",
            DataFeature::LocationKind => "data.location-kind",
            DataFeature::QuantitativeCount => "data.quantitative-count",
            DataFeature::CategoricalCount => "data.categorical-count",
            DataFeature::Parts => "data.parts",
            DataFeature::Text => "data.text",
            DataFeature::TimePoints => "data.time-points",
        }
    }

    pub fn from_key(key: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.key() == key)
    }

    /// Every answer token this feature can produce.
    pub fn tokens(self) -> &'static [&'static str] {
        match self {
            DataFeature::Spatial
            | DataFeature::Network
            | DataFeature::Hierarchical
            | DataFeature::OverTime
            | DataFeature::Text => &["yes", "no"],
            DataFeature::LocationKind => &["coordinates", "regions"],
            DataFeature::QuantitativeCount => &["none", "one", "two", "three-or-four", "five-or-more"],
            DataFeature::CategoricalCount => &["none", "one", "two-or-more"],
            DataFeature::Parts => &["up-to-seven", "more-than-seven"],
            DataFeature::TimePoints => &["two", "few", "many"],
        }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Answers a data-branch question from profile facts.
///
/// `Ok(None)` means the profile cannot decide (the caller routes via
/// dont-know). Keys under `data.` that this profiler does not know are also
/// undecidable; any other key is an error.
pub fn answer_from_profile(feature: &str, profile: &DataProfile) -> Result<Option<&'static str>, ProfileError> {
    let Some(feature) = DataFeature::from_key(feature) else {
        return if feature.starts_with("data.") {
            Ok(None)
        } else {
            Err(ProfileError::NotADataFeature(feature.to_owned()))
        };
    };
    let flags = &profile.flags;
    let answer = match feature {
        DataFeature::Spatial => Some(yes_no(flags.has_geospatial)),
        DataFeature::Network => Some(yes_no(flags.has_network_edges)),
        DataFeature::Hierarchical => Some(yes_no(flags.has_hierarchy)),
        DataFeature::OverTime => Some(yes_no(flags.has_temporal)),
        DataFeature::LocationKind => {
            if profile.count(AttributeType::GeospatialLat) > 0 && profile.count(AttributeType::GeospatialLon) > 0 {
                Some("coordinates")
            } else if profile.count(AttributeType::GeospatialName) > 0 {
                Some("regions")
            } else {
                None
            }
        }
        DataFeature::QuantitativeCount => Some(match profile.count(AttributeType::Quantitative) {
            0 => "none",
            1 => "one",
            2 => "two",
            3 | 4 => "three-or-four",
            _ => "five-or-more",
        }),
        DataFeature::CategoricalCount => Some(match profile.nominal_count() {
            0 => "none",
            1 => "one",
            _ => "two-or-more",
        }),
        DataFeature::Parts => profile
            .max_categorical_cardinality
            .map(|n| if n <= 7 { "up-to-seven" } else { "more-than-seven" }),
        DataFeature::Text => Some(yes_no(
            profile.count(AttributeType::IdentifierText) > 0 && profile.count(AttributeType::Quantitative) == 0,
        )),
        DataFeature::TimePoints => profile.max_temporal_points.map(|n| match n {
            0..=2 => "two",
            3..=7 => "few",
            _ => "many",
        }),
    };
    Ok(answer)
}
