//! O*NET descriptor catalog: occupations, descriptor texts, and per-occupation
//! weighted bundles grouped by category.
//!
//! A catalog is built once (from the tab-delimited O*NET tables or by hand
//! through [`CatalogBuilder`]) and is immutable afterwards.  Within every
//! (occupation, category) bundle the descriptor weights sum to one.

mod characteristic;
mod codec;
mod labor;
mod parse;
mod scale;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use characteristic::{load_characteristic, parse_characteristic, CharacteristicDefinition};
pub use codec::{catalog_to_bytes, read_catalog, write_catalog, CATALOG_MAGIC};
pub use labor::{load_labor_stats, LaborEntry, LaborStats};
pub use parse::{parse_onet_tables, IngestReport, REQUIRED_FILES};
pub use scale::{combine_scale_scores, normalize_scale, normalize_weights, ScaleSpec};

/// Tolerance on the per-bundle weight sum.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

/// The ten descriptor categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Category {
    Description,
    Tasks,
    Abilities,
    Interests,
    WorkValues,
    WorkStyles,
    Skills,
    Knowledge,
    WorkActivities,
    WorkContext,
}

impl Category {
    pub const ALL: [Category; 10] = [
        Category::Description,
        Category::Tasks,
        Category::Abilities,
        Category::Interests,
        Category::WorkValues,
        Category::WorkStyles,
        Category::Skills,
        Category::Knowledge,
        Category::WorkActivities,
        Category::WorkContext,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Description => "Description",
            Category::Tasks => "Tasks",
            Category::Abilities => "Abilities",
            Category::Interests => "Interests",
            Category::WorkValues => "WorkValues",
            Category::WorkStyles => "WorkStyles",
            Category::Skills => "Skills",
            Category::Knowledge => "Knowledge",
            Category::WorkActivities => "WorkActivities",
            Category::WorkContext => "WorkContext",
        }
    }

    /// Attribute categories are the eight whose descriptors are shared
    /// across occupations.
    pub fn is_attribute(self) -> bool {
        !matches!(self, Category::Description | Category::Tasks)
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Category::ALL
            .iter()
            .copied()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown category `{s}`")))
    }
}

/// Educational requirement, ordered from lowest to highest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Education {
    NoFormalCredential,
    HighSchool,
    SomeCollege,
    PostsecondaryNondegree,
    Associate,
    Bachelor,
    Master,
    Doctoral,
}

impl Education {
    pub const ALL: [Education; 8] = [
        Education::NoFormalCredential,
        Education::HighSchool,
        Education::SomeCollege,
        Education::PostsecondaryNondegree,
        Education::Associate,
        Education::Bachelor,
        Education::Master,
        Education::Doctoral,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Education::NoFormalCredential => "No formal educational credential",
            Education::HighSchool => "High school diploma or equivalent",
            Education::SomeCollege => "Some college, no degree",
            Education::PostsecondaryNondegree => "Postsecondary nondegree award",
            Education::Associate => "Associate's degree",
            Education::Bachelor => "Bachelor's degree",
            Education::Master => "Master's degree",
            Education::Doctoral => "Doctoral or professional degree",
        }
    }

    /// Parses the BLS wording; matching is case-insensitive on a prefix so
    /// both "Bachelor's degree" and "bachelors" are accepted.
    pub fn parse(s: &str) -> Option<Education> {
        let s = s.trim().to_ascii_lowercase().replace('\u{2019}', "'");
        let starts = |p: &str| s.starts_with(p);
        Some(if starts("no formal") || s == "none" {
            Education::NoFormalCredential
        } else if starts("high school") {
            Education::HighSchool
        } else if starts("some college") {
            Education::SomeCollege
        } else if starts("postsecondary") {
            Education::PostsecondaryNondegree
        } else if starts("associate") {
            Education::Associate
        } else if starts("bachelor") {
            Education::Bachelor
        } else if starts("master") {
            Education::Master
        } else if starts("doctoral") {
            Education::Doctoral
        } else {
            return None;
        })
    }
}

impl fmt::Display for Education {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// SOC 2018 major group titles keyed by the two-digit prefix.
pub fn major_group_title(major_group: &str) -> Option<&'static str> {
    Some(match major_group {
        "11" => "Management Occupations",
        "13" => "Business and Financial Operations Occupations",
        "15" => "Computer and Mathematical Occupations",
        "17" => "Architecture and Engineering Occupations",
        "19" => "Life, Physical, and Social Science Occupations",
        "21" => "Community and Social Service Occupations",
        "23" => "Legal Occupations",
        "25" => "Educational Instruction and Library Occupations",
        "27" => "Arts, Design, Entertainment, Sports, and Media Occupations",
        "29" => "Healthcare Practitioners and Technical Occupations",
        "31" => "Healthcare Support Occupations",
        "33" => "Protective Service Occupations",
        "35" => "Food Preparation and Serving Related Occupations",
        "37" => "Building and Grounds Cleaning and Maintenance Occupations",
        "39" => "Personal Care and Service Occupations",
        "41" => "Sales and Related Occupations",
        "43" => "Office and Administrative Support Occupations",
        "45" => "Farming, Fishing, and Forestry Occupations",
        "47" => "Construction and Extraction Occupations",
        "49" => "Installation, Maintenance, and Repair Occupations",
        "51" => "Production Occupations",
        "53" => "Transportation and Material Moving Occupations",
        "55" => "Military Specific Occupations",
        _ => return None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Occupation {
    pub soc_code: String,
    pub title: String,
    pub major_group: String,
    pub education: Option<Education>,
}

impl Occupation {
    pub fn new(soc_code: &str, title: &str) -> Result<Self> {
        let soc_code = soc_code.trim();
        let valid = soc_code.len() == 10
            && soc_code.as_bytes()[2] == b'-'
            && soc_code.as_bytes()[7] == b'.'
            && soc_code
                .bytes()
                .enumerate()
                .all(|(i, b)| i == 2 || i == 7 || b.is_ascii_digit());
        if !valid {
            return Err(Error::InvalidInput(format!(
                "`{soc_code}` is not an O*NET-SOC code of the form 00-0000.00"
            )));
        }
        Ok(Occupation {
            soc_code: soc_code.to_string(),
            title: clean_text(title),
            major_group: soc_code[..2].to_string(),
            education: None,
        })
    }

    pub fn major_group_title(&self) -> &'static str {
        major_group_title(&self.major_group).unwrap_or("Unknown")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DescriptorKind {
    Description,
    Task,
    Attribute,
}

impl DescriptorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DescriptorKind::Description => "description",
            DescriptorKind::Task => "task",
            DescriptorKind::Attribute => "attribute",
        }
    }
}

impl FromStr for DescriptorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "description" => Ok(DescriptorKind::Description),
            "task" => Ok(DescriptorKind::Task),
            "attribute" => Ok(DescriptorKind::Attribute),
            _ => Err(Error::InvalidInput(format!("unknown descriptor kind `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Descriptor {
    pub element_id: String,
    pub category: Category,
    pub text: String,
    pub kind: DescriptorKind,
}

/// One entry of an (occupation, category) bundle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedDescriptor {
    /// Index into [`DescriptorCatalog::descriptors`].
    pub descriptor: usize,
    /// Normalized weight; weights within a bundle sum to one.
    pub weight: f64,
    /// The combined unit score in [0, 1] the weight was derived from.
    pub score: f64,
}

/// Trims, and collapses internal whitespace runs to a single space.
pub fn clean_text(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

#[derive(Debug, Clone, PartialEq)]
pub struct DescriptorCatalog {
    occupations: Vec<Occupation>,
    descriptors: Vec<Descriptor>,
    bundles: BTreeMap<(usize, Category), Vec<WeightedDescriptor>>,
    dropped: Vec<(String, Category)>,
}

impl DescriptorCatalog {
    pub fn occupations(&self) -> &[Occupation] {
        &self.occupations
    }

    pub fn descriptors(&self) -> &[Descriptor] {
        &self.descriptors
    }

    pub fn descriptor(&self, index: usize) -> &Descriptor {
        &self.descriptors[index]
    }

    pub fn bundle(&self, occupation: usize, category: Category) -> Option<&[WeightedDescriptor]> {
        self.bundles.get(&(occupation, category)).map(Vec::as_slice)
    }

    /// All bundles in (occupation index, category) order.
    pub fn bundles(&self) -> impl Iterator<Item = (usize, Category, &[WeightedDescriptor])> {
        self.bundles
            .iter()
            .map(|(&(occ, cat), items)| (occ, cat, items.as_slice()))
    }

    /// Categories present for one occupation, in canonical order.
    pub fn categories_of(&self, occupation: usize) -> Vec<Category> {
        self.bundles
            .range((occupation, Category::Description)..=(occupation, Category::WorkContext))
            .map(|(&(_, cat), _)| cat)
            .collect()
    }

    /// (soc_code, category) pairs removed during ingest because the
    /// occupation had no usable descriptors in that category.
    pub fn dropped_categories(&self) -> &[(String, Category)] {
        &self.dropped
    }

    pub fn occupation_index(&self, soc_code: &str) -> Option<usize> {
        self.occupations
            .binary_search_by(|o| o.soc_code.as_str().cmp(soc_code))
            .ok()
    }

    pub fn find_descriptor(&self, kind: DescriptorKind, element_id: &str) -> Option<usize> {
        self.descriptors
            .iter()
            .position(|d| d.kind == kind && d.element_id == element_id)
    }

    /// Indices of attribute descriptors, in catalog order.
    pub fn attribute_indices(&self) -> Vec<usize> {
        self.descriptors
            .iter()
            .enumerate()
            .filter(|(_, d)| d.kind == DescriptorKind::Attribute)
            .map(|(i, _)| i)
            .collect()
    }

    /// Per-occupation combined unit score of an attribute descriptor, if rated.
    pub fn attribute_score(&self, occupation: usize, descriptor: usize) -> Option<f64> {
        let category = self.descriptors[descriptor].category;
        self.bundle(occupation, category)?
            .iter()
            .find(|w| w.descriptor == descriptor)
            .map(|w| w.score)
    }

    /// Attaches education requirements from labor statistics.
    pub fn with_education(mut self, labor: &LaborStats) -> Self {
        for occ in &mut self.occupations {
            if let Some(entry) = labor.get(&occ.soc_code) {
                occ.education = entry.education;
            }
        }
        self
    }

    pub fn descriptor_counts(&self) -> BTreeMap<Category, usize> {
        let mut counts = BTreeMap::new();
        for d in &self.descriptors {
            *counts.entry(d.category).or_insert(0) += 1;
        }
        counts
    }

    /// Checks every structural invariant.  Builders call this before
    /// handing out a catalog.
    pub fn validate(&self) -> Result<()> {
        for pair in self.occupations.windows(2) {
            if pair[0].soc_code >= pair[1].soc_code {
                return Err(Error::InvalidInput(format!(
                    "occupations not unique/sorted at {}",
                    pair[1].soc_code
                )));
            }
        }
        let mut seen = BTreeSet::new();
        for d in &self.descriptors {
            if d.text.trim().is_empty() {
                return Err(Error::InvalidInput(format!(
                    "descriptor `{}` has empty text",
                    d.element_id
                )));
            }
            if !seen.insert((d.kind, d.element_id.as_str())) {
                return Err(Error::InvalidInput(format!(
                    "duplicate {} descriptor `{}`",
                    d.kind.as_str(),
                    d.element_id
                )));
            }
        }
        let mut covered = vec![false; self.occupations.len()];
        for (&(occ, category), items) in &self.bundles {
            if occ >= self.occupations.len() {
                return Err(Error::InvalidInput(format!(
                    "bundle references occupation index {occ}"
                )));
            }
            covered[occ] = true;
            if items.is_empty() {
                return Err(Error::InvalidInput(format!(
                    "empty bundle for {} / {category}",
                    self.occupations[occ].soc_code
                )));
            }
            let mut sum = 0.0;
            for w in items {
                let d = self.descriptors.get(w.descriptor).ok_or_else(|| {
                    Error::InvalidInput(format!("bundle references descriptor {}", w.descriptor))
                })?;
                if d.category != category {
                    return Err(Error::InvalidInput(format!(
                        "descriptor `{}` of category {} placed in {category} bundle",
                        d.element_id, d.category
                    )));
                }
                if !(w.weight >= 0.0 && w.weight <= 1.0) {
                    return Err(Error::InvalidInput(format!(
                        "weight {} outside [0, 1] for `{}`",
                        w.weight, d.element_id
                    )));
                }
                sum += w.weight;
            }
            if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
                return Err(Error::InvalidInput(format!(
                    "weights for {} / {category} sum to {sum}",
                    self.occupations[occ].soc_code
                )));
            }
        }
        if let Some(i) = covered.iter().position(|c| !c) {
            return Err(Error::InvalidInput(format!(
                "occupation {} has no category bundle",
                self.occupations[i].soc_code
            )));
        }
        Ok(())
    }
}

/// Incremental catalog construction.
///
/// Ratings are raw nonnegative scores; `build` normalizes them within each
/// (occupation, category) bundle.  A description bundle always ends up with
/// weight one.
#[derive(Debug, Default)]
pub struct CatalogBuilder {
    occupations: BTreeMap<String, Occupation>,
    descriptors: Vec<Descriptor>,
    descriptor_index: BTreeMap<(DescriptorKind, String), usize>,
    ratings: BTreeMap<(String, usize), f64>,
    dropped: Vec<(String, Category)>,
}

impl CatalogBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_occupation(&mut self, occupation: Occupation) -> Result<()> {
        if self.occupations.contains_key(&occupation.soc_code) {
            return Err(Error::InvalidInput(format!(
                "duplicate occupation {}",
                occupation.soc_code
            )));
        }
        self.occupations
            .insert(occupation.soc_code.clone(), occupation);
        Ok(())
    }

    pub fn has_occupation(&self, soc_code: &str) -> bool {
        self.occupations.contains_key(soc_code)
    }

    /// Registers a descriptor, returning its builder-local id.  Re-adding an
    /// existing (kind, element_id) returns the existing id.
    pub fn add_descriptor(
        &mut self,
        kind: DescriptorKind,
        category: Category,
        element_id: &str,
        text: &str,
    ) -> Result<usize> {
        let key = (kind, element_id.to_string());
        if let Some(&id) = self.descriptor_index.get(&key) {
            return Ok(id);
        }
        let text = clean_text(text);
        if text.is_empty() {
            return Err(Error::InvalidInput(format!(
                "descriptor `{element_id}` has empty text"
            )));
        }
        let id = self.descriptors.len();
        self.descriptors.push(Descriptor {
            element_id: element_id.to_string(),
            category,
            text,
            kind,
        });
        self.descriptor_index.insert(key, id);
        Ok(id)
    }

    pub fn descriptor_id(&self, kind: DescriptorKind, element_id: &str) -> Option<usize> {
        self.descriptor_index
            .get(&(kind, element_id.to_string()))
            .copied()
    }

    /// Sets the raw (pre-normalization) score of a descriptor for an occupation.
    pub fn rate(&mut self, soc_code: &str, descriptor: usize, raw: f64) -> Result<()> {
        if !self.occupations.contains_key(soc_code) {
            return Err(Error::InvalidInput(format!("unknown occupation {soc_code}")));
        }
        if descriptor >= self.descriptors.len() {
            return Err(Error::InvalidInput(format!("unknown descriptor id {descriptor}")));
        }
        if !(raw.is_finite() && raw >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "raw weight {raw} for `{}` must be finite and nonnegative",
                self.descriptors[descriptor].element_id
            )));
        }
        self.ratings.insert((soc_code.to_string(), descriptor), raw);
        Ok(())
    }

    pub fn record_dropped(&mut self, soc_code: &str, category: Category) {
        self.dropped.push((soc_code.to_string(), category));
    }

    /// Normalizes weights and produces the immutable catalog.  Occupations
    /// without any rating are kept out of the catalog; returns their codes.
    pub fn build(self) -> Result<(DescriptorCatalog, Vec<String>)> {
        // Canonical descriptor order: kind, category, element id.
        let mut order: Vec<usize> = (0..self.descriptors.len()).collect();
        order.sort_by(|&a, &b| {
            let (da, db) = (&self.descriptors[a], &self.descriptors[b]);
            (da.kind, da.category, &da.element_id).cmp(&(db.kind, db.category, &db.element_id))
        });
        let mut remap = vec![0usize; self.descriptors.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }

        let mut raw: BTreeMap<(String, Category), Vec<(usize, f64)>> = BTreeMap::new();
        for ((soc, desc), value) in &self.ratings {
            let category = self.descriptors[*desc].category;
            raw.entry((soc.clone(), category))
                .or_default()
                .push((remap[*desc], *value));
        }

        let rated: BTreeSet<&String> = raw.keys().map(|(soc, _)| soc).collect();
        let mut dropped_occupations = Vec::new();
        let mut occupations = Vec::new();
        for (soc, occ) in &self.occupations {
            if rated.contains(soc) {
                occupations.push(occ.clone());
            } else {
                dropped_occupations.push(soc.clone());
            }
        }
        let occ_index: BTreeMap<&str, usize> = occupations
            .iter()
            .enumerate()
            .map(|(i, o)| (o.soc_code.as_str(), i))
            .collect();

        let mut bundles = BTreeMap::new();
        for ((soc, category), mut items) in raw {
            items.sort_by_key(|&(d, _)| d);
            let scores: Vec<f64> = items.iter().map(|&(_, v)| v).collect();
            let weights = normalize_weights(&scores).map_err(|_| {
                Error::InvalidInput(format!(
                    "all raw weights are zero for occupation {soc}, category {category}"
                ))
            })?;
            let entries = items
                .iter()
                .zip(weights)
                .map(|(&(descriptor, score), weight)| WeightedDescriptor {
                    descriptor,
                    weight,
                    score,
                })
                .collect();
            bundles.insert((occ_index[soc.as_str()], category), entries);
        }

        let descriptors = order
            .iter()
            .map(|&old| self.descriptors[old].clone())
            .collect();
        let mut dropped = self.dropped;
        dropped.sort();
        dropped.dedup();
        let catalog = DescriptorCatalog {
            occupations,
            descriptors,
            bundles,
            dropped,
        };
        catalog.validate()?;
        Ok((catalog, dropped_occupations))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_occupation_builder() -> CatalogBuilder {
        let mut b = CatalogBuilder::new();
        b.add_occupation(Occupation::new("19-2011.00", "Astronomers").unwrap())
            .unwrap();
        b.add_occupation(Occupation::new("47-5043.00", "Roof Bolters, Mining").unwrap())
            .unwrap();
        b
    }

    #[test]
    fn occupation_parses_major_group() {
        let o = Occupation::new(" 19-2011.00 ", "  Astronomers ").unwrap();
        assert_eq!(o.major_group, "19");
        assert_eq!(o.title, "Astronomers");
        assert_eq!(
            o.major_group_title(),
            "Life, Physical, and Social Science Occupations"
        );
        assert!(Occupation::new("192011.00", "x").is_err());
        assert!(Occupation::new("19-2011", "x").is_err());
    }

    #[test]
    fn category_round_trips_and_counts_ten() {
        assert_eq!(Category::ALL.len(), 10);
        for c in Category::ALL {
            assert_eq!(c.as_str().parse::<Category>().unwrap(), c);
        }
        assert!("Hobbies".parse::<Category>().is_err());
    }

    #[test]
    fn education_parses_bls_wording() {
        assert_eq!(
            Education::parse("Doctoral or professional degree"),
            Some(Education::Doctoral)
        );
        assert_eq!(Education::parse("Bachelor’s degree"), Some(Education::Bachelor));
        assert_eq!(
            Education::parse("No formal educational credential"),
            Some(Education::NoFormalCredential)
        );
        assert_eq!(Education::parse("apprenticeship"), None);
        assert!(Education::HighSchool < Education::Master);
    }

    #[test]
    fn clean_text_collapses_whitespace_only() {
        assert_eq!(clean_text("  Read,\t\tWrite\n  Speak. "), "Read, Write Speak.");
    }

    #[test]
    fn builder_normalizes_bundles() {
        let mut b = two_occupation_builder();
        let oral = b
            .add_descriptor(DescriptorKind::Attribute, Category::Abilities, "1.A.1.a.1", "Oral comprehension")
            .unwrap();
        let depth = b
            .add_descriptor(DescriptorKind::Attribute, Category::Abilities, "1.A.4.a.6", "Depth perception")
            .unwrap();
        b.rate("19-2011.00", oral, 1.0).unwrap();
        b.rate("19-2011.00", depth, 3.0).unwrap();
        b.rate("47-5043.00", depth, 0.2).unwrap();
        let (cat, dropped) = b.build().unwrap();
        assert!(dropped.is_empty());
        let bundle = cat.bundle(0, Category::Abilities).unwrap();
        assert_eq!(bundle.len(), 2);
        assert!((bundle[0].weight - 0.25).abs() < 1e-15);
        assert!((bundle[1].weight - 0.75).abs() < 1e-15);
        assert_eq!(cat.bundle(1, Category::Abilities).unwrap()[0].weight, 1.0);
        assert_eq!(cat.attribute_score(1, 1), Some(0.2));
        assert_eq!(cat.attribute_score(1, 0), None);
    }

    #[test]
    fn builder_rejects_all_zero_bundle() {
        let mut b = two_occupation_builder();
        let d = b
            .add_descriptor(DescriptorKind::Attribute, Category::Skills, "2.A.1.a", "Reading")
            .unwrap();
        let e = b
            .add_descriptor(DescriptorKind::Attribute, Category::Skills, "2.A.1.b", "Listening")
            .unwrap();
        b.rate("19-2011.00", d, 0.0).unwrap();
        b.rate("19-2011.00", e, 0.0).unwrap();
        let err = b.build().unwrap_err().to_string();
        assert!(err.contains("19-2011.00") && err.contains("Skills"), "{err}");
    }

    #[test]
    fn unrated_occupations_are_dropped() {
        let mut b = two_occupation_builder();
        let d = b
            .add_descriptor(DescriptorKind::Description, Category::Description, "desc:19-2011.00", "Observe the sky.")
            .unwrap();
        b.rate("19-2011.00", d, 1.0).unwrap();
        let (cat, dropped) = b.build().unwrap();
        assert_eq!(cat.occupations().len(), 1);
        assert_eq!(dropped, vec!["47-5043.00".to_string()]);
    }

    #[test]
    fn duplicate_descriptor_returns_existing_id() {
        let mut b = two_occupation_builder();
        let a = b
            .add_descriptor(DescriptorKind::Task, Category::Tasks, "8001", "Measure emissions.")
            .unwrap();
        let again = b
            .add_descriptor(DescriptorKind::Task, Category::Tasks, "8001", "ignored")
            .unwrap();
        assert_eq!(a, again);
        assert!(b
            .add_descriptor(DescriptorKind::Task, Category::Tasks, "8002", "   ")
            .is_err());
    }
}
