//! Reader for the tab-delimited O*NET release files.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use super::{
    combine_scale_scores, normalize_scale, CatalogBuilder, Category, DescriptorCatalog,
    DescriptorKind, Occupation, ScaleSpec,
};
use crate::error::{Error, Result};

pub const OCCUPATION_DATA: &str = "Occupation Data.txt";
pub const TASK_STATEMENTS: &str = "Task Statements.txt";
pub const TASK_RATINGS: &str = "Task Ratings.txt";
pub const CONTENT_MODEL: &str = "Content Model Reference.txt";
pub const SCALES_REFERENCE: &str = "Scales Reference.txt";

/// Ratings file and the scales that contribute to weights for each
/// attribute category.
const ATTRIBUTE_FILES: [(&str, Category, &[&str]); 8] = [
    ("Abilities.txt", Category::Abilities, &["IM", "LV"]),
    ("Skills.txt", Category::Skills, &["IM", "LV"]),
    ("Knowledge.txt", Category::Knowledge, &["IM", "LV"]),
    ("Work Activities.txt", Category::WorkActivities, &["IM", "LV"]),
    ("Work Styles.txt", Category::WorkStyles, &["IM"]),
    ("Work Values.txt", Category::WorkValues, &["EX"]),
    ("Interests.txt", Category::Interests, &["OI"]),
    ("Work Context.txt", Category::WorkContext, &["CX", "CT"]),
];

const TASK_SCALES: &[&str] = &["IM", "RT", "FT"];

pub const REQUIRED_FILES: [&str; 13] = [
    OCCUPATION_DATA,
    TASK_STATEMENTS,
    TASK_RATINGS,
    CONTENT_MODEL,
    SCALES_REFERENCE,
    "Abilities.txt",
    "Skills.txt",
    "Knowledge.txt",
    "Work Activities.txt",
    "Work Styles.txt",
    "Work Values.txt",
    "Interests.txt",
    "Work Context.txt",
];

/// Summary of an ingest run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IngestReport {
    pub occupations: usize,
    pub tasks: usize,
    pub attributes: usize,
    pub descriptors_per_category: BTreeMap<Category, usize>,
    /// Occupations listed in the occupation table but without any rated descriptor.
    pub dropped_occupations: Vec<String>,
    pub dropped_categories: Vec<(String, Category)>,
    /// Task statements without any usable rating.
    pub unrated_tasks: usize,
}

struct Table {
    file: String,
    columns: Vec<String>,
    rows: Vec<(usize, Vec<String>)>,
}

impl Table {
    fn read(dir: &Path, name: &str) -> Result<Table> {
        let path: PathBuf = dir.join(name);
        if !path.is_file() {
            return Err(Error::MissingFile(path));
        }
        let raw = fs::read(&path)?;
        let text = String::from_utf8(raw)
            .map_err(|e| Error::malformed(name, 0, format!("not valid UTF-8: {e}")))?;
        let text = text.strip_prefix('\u{feff}').unwrap_or(&text);
        let mut lines = text.lines().enumerate();
        let columns: Vec<String> = match lines.next() {
            Some((_, header)) => header.split('\t').map(|c| c.trim().to_string()).collect(),
            None => return Err(Error::malformed(name, 1, "missing header row")),
        };
        let mut rows = Vec::new();
        for (i, line) in lines {
            let line_no = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<String> = line.split('\t').map(|f| f.trim().to_string()).collect();
            if fields.len() != columns.len() {
                return Err(Error::malformed(
                    name,
                    line_no,
                    format!("expected {} fields, found {}", columns.len(), fields.len()),
                ));
            }
            rows.push((line_no, fields));
        }
        Ok(Table {
            file: name.to_string(),
            columns,
            rows,
        })
    }

    fn column(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::malformed(&self.file, 1, format!("missing column `{name}`")))
    }

    fn optional_column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    fn number(&self, line: usize, raw: &str, what: &str) -> Result<f64> {
        raw.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::malformed(&self.file, line, format!("unparseable {what} `{raw}`")))
    }
}

fn category_is_blank(value: &str) -> bool {
    value.is_empty() || value.eq_ignore_ascii_case("n/a")
}

/// Collects normalized scale scores per (occupation, element) and averages
/// them.  Frequency-style scales reported as category percentages are first
/// reduced to their expected category.
#[derive(Default)]
struct ScoreAccumulator {
    unit: BTreeMap<(String, String), Vec<f64>>,
    categorical: BTreeMap<(String, String, String), (f64, f64)>,
}

impl ScoreAccumulator {
    fn push(&mut self, soc: &str, element: &str, unit: f64) {
        self.unit
            .entry((soc.to_string(), element.to_string()))
            .or_default()
            .push(unit);
    }

    fn push_category(&mut self, soc: &str, element: &str, scale: &str, category: f64, pct: f64) {
        let e = self
            .categorical
            .entry((soc.to_string(), element.to_string(), scale.to_string()))
            .or_insert((0.0, 0.0));
        e.0 += category * pct;
        e.1 += pct;
    }

    fn finish(
        mut self,
        scales: &BTreeMap<String, ScaleSpec>,
        file: &str,
    ) -> Result<BTreeMap<(String, String), f64>> {
        for ((soc, element, scale), (weighted, total)) in std::mem::take(&mut self.categorical) {
            if total <= 0.0 {
                continue;
            }
            let spec = &scales[&scale];
            let expected = (weighted / total).clamp(spec.minimum, spec.maximum);
            let unit = normalize_scale(expected, spec, &element)?;
            self.push(&soc, &element, unit);
        }
        self.unit
            .into_iter()
            .map(|(key, scores)| {
                let combined = combine_scale_scores(&scores).map_err(|e| {
                    Error::malformed(file, 0, format!("{} / {}: {e}", key.0, key.1))
                })?;
                Ok((key, combined))
            })
            .collect()
    }
}

/// Parses an O*NET release directory into a descriptor catalog.
///
/// Weights: each available scale is normalized to [0, 1] with its bounds
/// from the scales reference, the normalized scales are averaged, and the
/// averages are normalized within each (occupation, category).
pub fn parse_onet_tables(dir: impl AsRef<Path>) -> Result<(DescriptorCatalog, IngestReport)> {
    let dir = dir.as_ref();
    if !dir.is_dir() {
        return Err(Error::MissingFile(dir.to_path_buf()));
    }
    for name in REQUIRED_FILES {
        if !dir.join(name).is_file() {
            return Err(Error::MissingFile(dir.join(name)));
        }
    }

    let scales = read_scales(dir)?;
    let elements = read_content_model(dir)?;
    let mut builder = CatalogBuilder::new();

    let occupations = Table::read(dir, OCCUPATION_DATA)?;
    let (c_soc, c_title, c_desc) = (
        occupations.column("O*NET-SOC Code")?,
        occupations.column("Title")?,
        occupations.column("Description")?,
    );
    for (line, row) in &occupations.rows {
        let occ = Occupation::new(&row[c_soc], &row[c_title])
            .map_err(|e| Error::malformed(OCCUPATION_DATA, *line, e.to_string()))?;
        let soc = occ.soc_code.clone();
        builder
            .add_occupation(occ)
            .map_err(|e| Error::malformed(OCCUPATION_DATA, *line, e.to_string()))?;
        if row[c_desc].trim().is_empty() {
            return Err(Error::malformed(OCCUPATION_DATA, *line, "empty description"));
        }
        let id = builder.add_descriptor(
            DescriptorKind::Description,
            Category::Description,
            &format!("desc:{soc}"),
            &row[c_desc],
        )?;
        // Descriptions are only kept for occupations that also carry ratings;
        // the raw weight is irrelevant since a singleton bundle normalizes to 1.
        builder.rate(&soc, id, 1.0)?;
    }

    let task_count = read_tasks(dir, &scales, &mut builder)?;
    let mut attribute_ids = BTreeSet::new();
    for (file, category, accepted) in ATTRIBUTE_FILES {
        read_attribute_file(
            dir,
            file,
            category,
            accepted,
            &scales,
            &elements,
            &mut builder,
            &mut attribute_ids,
        )?;
    }

    // Occupations that only have a description carry no rating information;
    // they are not part of the catalog.
    let rated_socs = rated_occupations(&builder);
    let mut pruned = CatalogBuilder::new();
    let mut dropped_occupations = Vec::new();
    let mut missing_categories = Vec::new();
    for (soc, occ) in builder.occupations.iter() {
        match rated_socs.get(soc) {
            Some(categories) => {
                pruned.add_occupation(occ.clone())?;
                for c in Category::ALL {
                    if c != Category::Description && !categories.contains(&c) {
                        missing_categories.push((soc.clone(), c));
                    }
                }
            }
            None => dropped_occupations.push(soc.clone()),
        }
    }
    for ((soc, desc), raw) in &builder.ratings {
        if pruned.has_occupation(soc) {
            let d = &builder.descriptors[*desc];
            let id = pruned.add_descriptor(d.kind, d.category, &d.element_id, &d.text)?;
            pruned.rate(soc, id, *raw)?;
        }
    }
    for (soc, c) in &missing_categories {
        pruned.record_dropped(soc, *c);
    }
    let (catalog, _) = pruned.build()?;

    let report = IngestReport {
        occupations: catalog.occupations().len(),
        tasks: catalog
            .descriptors()
            .iter()
            .filter(|d| d.kind == DescriptorKind::Task)
            .count(),
        attributes: catalog
            .descriptors()
            .iter()
            .filter(|d| d.kind == DescriptorKind::Attribute)
            .count(),
        descriptors_per_category: catalog.descriptor_counts(),
        dropped_occupations,
        dropped_categories: catalog.dropped_categories().to_vec(),
        unrated_tasks: task_count.unrated,
    };
    Ok((catalog, report))
}

fn rated_occupations(builder: &CatalogBuilder) -> BTreeMap<String, BTreeSet<Category>> {
    let mut out: BTreeMap<String, BTreeSet<Category>> = BTreeMap::new();
    for (soc, desc) in builder.ratings.keys() {
        let category = builder.descriptors[*desc].category;
        if category != Category::Description {
            out.entry(soc.clone()).or_default().insert(category);
        }
    }
    out
}

fn read_scales(dir: &Path) -> Result<BTreeMap<String, ScaleSpec>> {
    let table = Table::read(dir, SCALES_REFERENCE)?;
    let (c_id, c_min, c_max) = (
        table.column("Scale ID")?,
        table.column("Minimum")?,
        table.column("Maximum")?,
    );
    let mut scales = BTreeMap::new();
    for (line, row) in &table.rows {
        let min = table.number(*line, &row[c_min], "minimum")?;
        let max = table.number(*line, &row[c_max], "maximum")?;
        let spec = ScaleSpec::new(&row[c_id], min, max)
            .map_err(|e| Error::malformed(SCALES_REFERENCE, *line, e.to_string()))?;
        scales.insert(row[c_id].clone(), spec);
    }
    Ok(scales)
}

fn read_content_model(dir: &Path) -> Result<BTreeMap<String, String>> {
    let table = Table::read(dir, CONTENT_MODEL)?;
    let (c_id, c_desc) = (table.column("Element ID")?, table.column("Description")?);
    Ok(table
        .rows
        .iter()
        .map(|(_, row)| (row[c_id].clone(), row[c_desc].clone()))
        .collect())
}

fn scale_for<'a>(
    scales: &'a BTreeMap<String, ScaleSpec>,
    table: &Table,
    line: usize,
    id: &str,
) -> Result<&'a ScaleSpec> {
    scales
        .get(id)
        .ok_or_else(|| Error::malformed(&table.file, line, format!("scale `{id}` not in {SCALES_REFERENCE}")))
}

struct TaskCount {
    unrated: usize,
}

fn read_tasks(
    dir: &Path,
    scales: &BTreeMap<String, ScaleSpec>,
    builder: &mut CatalogBuilder,
) -> Result<TaskCount> {
    let statements = Table::read(dir, TASK_STATEMENTS)?;
    let (c_soc, c_id, c_task) = (
        statements.column("O*NET-SOC Code")?,
        statements.column("Task ID")?,
        statements.column("Task")?,
    );
    let mut tasks: BTreeMap<String, String> = BTreeMap::new();
    let mut assigned: BTreeSet<(String, String)> = BTreeSet::new();
    for (line, row) in &statements.rows {
        let soc = &row[c_soc];
        if !builder.has_occupation(soc) {
            return Err(Error::malformed(
                TASK_STATEMENTS,
                *line,
                format!("unknown occupation {soc}"),
            ));
        }
        if row[c_task].trim().is_empty() {
            return Err(Error::malformed(TASK_STATEMENTS, *line, "empty task text"));
        }
        tasks
            .entry(row[c_id].clone())
            .or_insert_with(|| row[c_task].clone());
        assigned.insert((soc.clone(), row[c_id].clone()));
    }

    let ratings = Table::read(dir, TASK_RATINGS)?;
    let (r_soc, r_id, r_scale, r_value) = (
        ratings.column("O*NET-SOC Code")?,
        ratings.column("Task ID")?,
        ratings.column("Scale ID")?,
        ratings.column("Data Value")?,
    );
    let r_cat = ratings.optional_column("Category");
    let mut acc = ScoreAccumulator::default();
    for (line, row) in &ratings.rows {
        let (soc, task, scale_id) = (&row[r_soc], &row[r_id], row[r_scale].as_str());
        if !tasks.contains_key(task) {
            return Err(Error::UnknownElement {
                file: TASK_RATINGS.to_string(),
                soc_code: soc.clone(),
                element_id: task.clone(),
            });
        }
        if !builder.has_occupation(soc) {
            return Err(Error::malformed(TASK_RATINGS, *line, format!("unknown occupation {soc}")));
        }
        if !TASK_SCALES.contains(&scale_id) {
            continue;
        }
        let spec = scale_for(scales, &ratings, *line, scale_id)?;
        let value = ratings.number(*line, &row[r_value], "data value")?;
        let category = r_cat.map(|c| row[c].as_str()).unwrap_or("");
        if category_is_blank(category) {
            acc.push(soc, task, normalize_scale(value, spec, task)?);
        } else {
            let cat = ratings.number(*line, category, "category")?;
            acc.push_category(soc, task, scale_id, cat, value);
        }
    }
    let scores = acc.finish(scales, TASK_RATINGS)?;

    let mut unrated = 0;
    for (soc, task) in &assigned {
        match scores.get(&(soc.clone(), task.clone())) {
            Some(&score) => {
                let id = builder.add_descriptor(
                    DescriptorKind::Task,
                    Category::Tasks,
                    task,
                    &tasks[task],
                )?;
                builder.rate(soc, id, score)?;
            }
            None => unrated += 1,
        }
    }
    Ok(TaskCount { unrated })
}

#[allow(clippy::too_many_arguments)]
fn read_attribute_file(
    dir: &Path,
    file: &str,
    category: Category,
    accepted: &[&str],
    scales: &BTreeMap<String, ScaleSpec>,
    elements: &BTreeMap<String, String>,
    builder: &mut CatalogBuilder,
    seen: &mut BTreeSet<String>,
) -> Result<()> {
    let table = Table::read(dir, file)?;
    let (c_soc, c_id, c_scale, c_value) = (
        table.column("O*NET-SOC Code")?,
        table.column("Element ID")?,
        table.column("Scale ID")?,
        table.column("Data Value")?,
    );
    let c_cat = table.optional_column("Category");
    let mut acc = ScoreAccumulator::default();
    for (line, row) in &table.rows {
        let (soc, element, scale_id) = (&row[c_soc], &row[c_id], row[c_scale].as_str());
        if !builder.has_occupation(soc) {
            return Err(Error::malformed(file, *line, format!("unknown occupation {soc}")));
        }
        let Some(text) = elements.get(element) else {
            return Err(Error::UnknownElement {
                file: file.to_string(),
                soc_code: soc.clone(),
                element_id: element.clone(),
            });
        };
        if !accepted.contains(&scale_id) {
            continue;
        }
        // Category breakdown rows (percent of respondents per level) are
        // summaries of the same rating; the scale mean row is used instead.
        if let Some(c) = c_cat {
            if !category_is_blank(&row[c]) {
                continue;
            }
        }
        let spec = scale_for(scales, &table, *line, scale_id)?;
        let value = table.number(*line, &row[c_value], "data value")?;
        acc.push(soc, element, normalize_scale(value, spec, element)?);
        if seen.insert(element.clone()) {
            builder.add_descriptor(DescriptorKind::Attribute, category, element, text)?;
        }
    }
    for ((soc, element), score) in acc.finish(scales, file)? {
        let id = builder
            .descriptor_id(DescriptorKind::Attribute, &element)
            .expect("registered above");
        if builder.descriptors[id].category != category {
            return Err(Error::InvalidInput(format!(
                "element `{element}` appears in more than one attribute category"
            )));
        }
        builder.rate(&soc, id, score)?;
    }
    Ok(())
}
