use serde::Serialize;

use super::profile::DataProfile;
use crate::tree::{EligibilityCondition, StructuralFlag, VisualizationLeaf};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionResult {
    pub condition: EligibilityCondition,
    pub satisfied: bool,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EligibilityReport {
    pub eligible: bool,
    pub conditions: Vec<ConditionResult>,
}

impl EligibilityReport {
    pub fn failed(&self) -> impl Iterator<Item = &ConditionResult> {
        self.conditions.iter().filter(|c| !c.satisfied)
    }
}

fn holds(condition: &EligibilityCondition, profile: &DataProfile) -> bool {
    match condition {
        EligibilityCondition::AttributeCount { types, min, max } => {
            let n = profile.count_of(types);
            min.is_none_or(|lo| n >= lo) && max.is_none_or(|hi| n <= hi)
        }
        EligibilityCondition::MaxCardinality { max } => {
            profile.max_categorical_cardinality.is_none_or(|n| n <= *max)
        }
        EligibilityCondition::RequiresFlag { flag } => match flag {
            StructuralFlag::Hierarchy => profile.flags.has_hierarchy,
            StructuralFlag::Network => profile.flags.has_network_edges,
            StructuralFlag::Geospatial => profile.flags.has_geospatial,
            StructuralFlag::Temporal => profile.flags.has_temporal,
        },
    }
}

/// Evaluates every condition of `leaf`; eligible iff all hold.
pub fn check_eligibility(leaf: &VisualizationLeaf, profile: &DataProfile) -> EligibilityReport {
    let conditions: Vec<ConditionResult> = leaf
        .eligibility
        .iter()
        .map(|c| ConditionResult {
            condition: c.clone(),
            satisfied: holds(c, profile),
            description: c.to_string(),
        })
        .collect();
    EligibilityReport {
        eligible: conditions.iter().all(|c| c.satisfied),
        conditions,
    }
}
