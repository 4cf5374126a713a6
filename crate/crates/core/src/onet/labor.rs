use std::collections::BTreeMap;
use std::path::Path;

use super::{major_group_title, DescriptorCatalog, Education};
use crate::error::{Error, Result};

/// One occupation's labor-market statistics.  `None` marks an absent cell.
#[derive(Debug, Clone, PartialEq)]
pub struct LaborEntry {
    pub soc_code: String,
    pub median_annual_wage: Option<f64>,
    pub employment_growth_pct: Option<f64>,
    pub education: Option<Education>,
    pub major_group_title: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LaborStats {
    entries: BTreeMap<String, LaborEntry>,
}

impl LaborStats {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = &LaborEntry> {
        self.entries.values()
    }

    /// Looks up an O*NET-SOC code, falling back to its 6-digit SOC prefix
    /// ("19-2011.01" matches a row keyed "19-2011" or "19-2011.00").
    pub fn get(&self, soc_code: &str) -> Option<&LaborEntry> {
        if let Some(e) = self.entries.get(soc_code) {
            return Some(e);
        }
        let base = soc_code.get(..7)?;
        self.entries
            .get(base)
            .or_else(|| self.entries.get(&format!("{base}.00")))
    }

    /// Codes present in the statistics but not matching any catalog
    /// occupation.  They stay in the table; this only flags them.
    pub fn unknown_codes(&self, catalog: &DescriptorCatalog) -> Vec<String> {
        let matched: std::collections::BTreeSet<&str> = catalog
            .occupations()
            .iter()
            .filter_map(|o| self.get(&o.soc_code))
            .map(|e| e.soc_code.as_str())
            .collect();
        self.entries
            .keys()
            .filter(|code| !matched.contains(code.as_str()))
            .cloned()
            .collect()
    }
}

fn optional_number(raw: &str, row: usize, column: &str) -> Result<Option<f64>> {
    let raw = raw.trim().replace(',', "");
    if raw.is_empty() || raw == "—" || raw.eq_ignore_ascii_case("na") {
        return Ok(None);
    }
    raw.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .map(Some)
        .ok_or_else(|| Error::malformed("labor stats", row, format!("unparseable {column} `{raw}`")))
}

/// Reads the labor statistics CSV (`soc_code, median_annual_wage,
/// employment_growth_pct, education, major_group_title`).  Row indices in
/// errors count the header as row 1.
pub fn load_labor_stats(path: impl AsRef<Path>) -> Result<LaborStats> {
    let path = path.as_ref();
    if !path.is_file() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
    let headers = reader.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::malformed("labor stats", 1, format!("missing column `{name}`")))
    };
    let (c_soc, c_wage, c_growth, c_edu, c_group) = (
        col("soc_code")?,
        col("median_annual_wage")?,
        col("employment_growth_pct")?,
        col("education")?,
        col("major_group_title")?,
    );
    let mut entries = BTreeMap::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 2;
        let record = record?;
        let soc = record[c_soc].to_string();
        if soc.is_empty() {
            return Err(Error::malformed("labor stats", row, "empty soc_code"));
        }
        let wage = optional_number(&record[c_wage], row, "median_annual_wage")?;
        if let Some(w) = wage {
            if w <= 0.0 {
                return Err(Error::malformed("labor stats", row, format!("wage {w} must be positive")));
            }
        }
        let growth = optional_number(&record[c_growth], row, "employment_growth_pct")?;
        let group = match record[c_group].trim() {
            "" => soc
                .get(..2)
                .and_then(major_group_title)
                .unwrap_or("Unknown")
                .to_string(),
            g => g.to_string(),
        };
        let entry = LaborEntry {
            soc_code: soc.clone(),
            median_annual_wage: wage,
            employment_growth_pct: growth,
            education: Education::parse(&record[c_edu]),
            major_group_title: group,
        };
        if entries.insert(soc.clone(), entry).is_some() {
            return Err(Error::malformed("labor stats", row, format!("duplicate soc_code {soc}")));
        }
    }
    Ok(LaborStats { entries })
}
