use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::dataset::{Column, Dataset};
use super::infer::{infer_attribute_type, is_null, parse_date, InferenceConfig};
use super::{AttributeType, ProfileError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ColumnProfile {
    pub name: String,
    pub attribute_type: AttributeType,
    pub distinct_count: usize,
    pub null_fraction: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProfileFlags {
    pub has_geospatial: bool,
    pub has_temporal: bool,
    /// Some selected column holds the parent of each value of another.
    pub has_hierarchy: bool,
    /// Two selected columns share a value domain, forming an edge list.
    pub has_network_edges: bool,
}

/// Inferred characteristics of the selected attributes of a dataset.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DataProfile {
    /// One entry per selected column, in selection order.
    pub columns: Vec<ColumnProfile>,
    pub selected: Vec<String>,
    pub type_counts: BTreeMap<AttributeType, usize>,
    pub flags: ProfileFlags,
    /// Largest distinct count among selected nominal columns.
    pub max_categorical_cardinality: Option<usize>,
    /// Largest distinct count among selected temporal columns.
    pub max_temporal_points: Option<usize>,
}

impl DataProfile {
    pub fn count(&self, ty: AttributeType) -> usize {
        self.type_counts.get(&ty).copied().unwrap_or(0)
    }

    pub fn count_of(&self, types: &[AttributeType]) -> usize {
        types.iter().map(|t| self.count(*t)).sum()
    }

    pub fn nominal_count(&self) -> usize {
        self.count_of(&AttributeType::NOMINAL)
    }

    /// Builds a profile from column summaries alone, deriving counts and
    /// the geospatial/temporal flags. Structural flags must be set by hand.
    pub fn from_columns(columns: Vec<ColumnProfile>) -> Self {
        let mut profile = DataProfile {
            selected: columns.iter().map(|c| c.name.clone()).collect(),
            columns,
            ..Default::default()
        };
        profile.recount();
        profile
    }

    fn recount(&mut self) {
        self.type_counts.clear();
        for c in &self.columns {
            *self.type_counts.entry(c.attribute_type).or_default() += 1;
        }
        self.flags.has_geospatial = self.columns.iter().any(|c| c.attribute_type.is_geospatial());
        self.flags.has_temporal = self.count(AttributeType::Temporal) > 0;
        self.max_categorical_cardinality = self
            .columns
            .iter()
            .filter(|c| c.attribute_type.is_nominal())
            .map(|c| c.distinct_count)
            .max();
        self.max_temporal_points = self
            .columns
            .iter()
            .filter(|c| c.attribute_type == AttributeType::Temporal)
            .map(|c| c.distinct_count)
            .max();
    }
}

pub fn profile(dataset: &Dataset, selected: &[&str]) -> Result<DataProfile, ProfileError> {
    profile_with(dataset, selected, &InferenceConfig::default())
}

pub fn profile_with(dataset: &Dataset, selected: &[&str], config: &InferenceConfig) -> Result<DataProfile, ProfileError> {
    if selected.is_empty() {
        return Err(ProfileError::EmptySelection);
    }
    let mut columns: Vec<&Column> = Vec::with_capacity(selected.len());
    for name in selected {
        let column = dataset
            .column(name)
            .ok_or_else(|| ProfileError::UnknownColumn(name.trim().to_owned()))?;
        if !columns.iter().any(|c| std::ptr::eq(*c, column)) {
            columns.push(column);
        }
    }

    let mut summaries = Vec::with_capacity(columns.len());
    for column in &columns {
        let attribute_type = infer_attribute_type(column, config)?;
        summaries.push(summarize(column, attribute_type));
    }
    let mut profile = DataProfile::from_columns(summaries);

    let nominal: Vec<(&Column, AttributeType)> = columns
        .iter()
        .zip(&profile.columns)
        .filter(|(_, p)| {
            matches!(
                p.attribute_type,
                AttributeType::Categorical | AttributeType::IdentifierText | AttributeType::GeospatialName
            )
        })
        .map(|(c, p)| (*c, p.attribute_type))
        .collect();
    profile.flags.has_hierarchy = has_hierarchy(&nominal);
    profile.flags.has_network_edges = has_network(&nominal);
    Ok(profile)
}

fn distinct_key(cell: &str, ty: AttributeType) -> String {
    match ty {
        AttributeType::Temporal => parse_date(cell).map_or_else(|| cell.trim().to_owned(), |d| d.to_string()),
        _ => cell.trim().to_owned(),
    }
}

fn summarize(column: &Column, attribute_type: AttributeType) -> ColumnProfile {
    let rows = column.cells.len();
    let nulls = column.cells.iter().filter(|c| is_null(c)).count();
    let distinct: HashSet<String> = column
        .cells
        .iter()
        .filter(|c| !is_null(c))
        .map(|c| distinct_key(c, attribute_type))
        .collect();
    ColumnProfile {
        name: column.name.trim().to_owned(),
        attribute_type,
        distinct_count: distinct.len(),
        null_fraction: if rows == 0 { 0.0 } else { nulls as f64 / rows as f64 },
    }
}

fn value_set(column: &Column) -> HashSet<&str> {
    column.cells.iter().map(|c| c.trim()).filter(|c| !is_null(c)).collect()
}

/// True when `parent` names, for every row, the parent of the `child` value:
/// parents are a subset of children, each child has one parent and following
/// parents never loops.
pub(super) fn is_parent_child(child: &Column, parent: &Column) -> bool {
    let children = value_set(child);
    let parents = value_set(parent);
    if parents.is_empty() || !parents.is_subset(&children) {
        return false;
    }
    let mut parent_of: HashMap<&str, Option<&str>> = HashMap::new();
    for (c, p) in child.cells.iter().zip(&parent.cells) {
        let c = c.trim();
        if is_null(c) {
            continue;
        }
        let p = Some(p.trim()).filter(|p| !is_null(p));
        match parent_of.get(c) {
            Some(existing) if *existing != p => return false,
            _ => {
                parent_of.insert(c, p);
            }
        }
    }
    // Walk each chain; more steps than there are values means a loop.
    let limit = parent_of.len();
    for start in parent_of.keys() {
        let mut current = *start;
        let mut steps = 0;
        while let Some(Some(next)) = parent_of.get(current) {
            current = next;
            steps += 1;
            if steps > limit {
                return false;
            }
        }
    }
    true
}

fn has_hierarchy(nominal: &[(&Column, AttributeType)]) -> bool {
    nominal.iter().enumerate().any(|(i, (a, _))| {
        nominal
            .iter()
            .enumerate()
            .any(|(j, (b, _))| i != j && is_parent_child(a, b))
    })
}

/// Overlap of distinct values relative to the smaller domain.
pub(super) fn domain_overlap(a: &Column, b: &Column) -> f64 {
    let a = value_set(a);
    let b = value_set(b);
    let smaller = a.len().min(b.len());
    if smaller == 0 {
        return 0.0;
    }
    a.intersection(&b).count() as f64 / smaller as f64
}

fn has_network(nominal: &[(&Column, AttributeType)]) -> bool {
    for (i, (a, _)) in nominal.iter().enumerate() {
        for (b, _) in &nominal[i + 1..] {
            if is_parent_child(a, b) || is_parent_child(b, a) {
                continue;
            }
            if domain_overlap(a, b) >= 0.5 {
                return true;
            }
        }
    }
    false
}
