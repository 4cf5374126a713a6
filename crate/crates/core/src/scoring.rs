//! Scoring occupations against a characteristic vector.
//!
//! The raw score is the Pearson correlation between the occupation vector
//! and the characteristic vector across their d components; raw scores are
//! then standardized across occupations (sample sd).

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::path::Path;

use crate::embedding::EmbeddingVector;
use crate::error::{Error, Result};
use crate::occupation::OccupationEmbedding;
use crate::stats::{pearson, standardize};

pub const SCORE_CSV_HEADER: &str = "soc_code,title,raw_corr,z_score";

pub fn similarity(occupation: &EmbeddingVector, characteristic: &EmbeddingVector) -> Result<f64> {
    if occupation.dim() != characteristic.dim() {
        return Err(Error::DimensionMismatch {
            expected: characteristic.dim(),
            actual: occupation.dim(),
        });
    }
    if occupation.dim() < 2 {
        return Err(Error::InvalidInput("similarity needs vectors of dim at least 2".into()));
    }
    pearson(&occupation.values, &characteristic.values)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreRow {
    pub soc_code: String,
    pub title: String,
    pub raw_corr: f64,
    pub z_score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    pub characteristic: String,
    /// One row per occupation, in the order the occupations were given.
    pub rows: Vec<ScoreRow>,
}

/// Descending z-score, ties by ascending SOC code.
fn by_score_desc(a: &ScoreRow, b: &ScoreRow) -> Ordering {
    b.z_score.total_cmp(&a.z_score).then_with(|| a.soc_code.cmp(&b.soc_code))
}

impl ScoreTable {
    /// Builds a table from raw correlations, standardizing them.
    pub fn from_raw(characteristic: &str, rows: Vec<(String, String, f64)>) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "scoring needs at least 2 occupations, got {}",
                rows.len()
            )));
        }
        let raw: Vec<f64> = rows.iter().map(|r| r.2).collect();
        let z = standardize(&raw).map_err(|_| {
            Error::Degenerate(format!("all raw correlations for `{characteristic}` are equal"))
        })?;
        Ok(ScoreTable {
            characteristic: characteristic.to_string(),
            rows: rows
                .into_iter()
                .zip(z)
                .map(|((soc_code, title, raw_corr), z_score)| ScoreRow { soc_code, title, raw_corr, z_score })
                .collect(),
        })
    }

    pub fn get(&self, soc_code: &str) -> Option<&ScoreRow> {
        self.rows.iter().find(|r| r.soc_code == soc_code)
    }

    pub fn sorted(&self) -> Vec<&ScoreRow> {
        let mut rows: Vec<&ScoreRow> = self.rows.iter().collect();
        rows.sort_by(|a, b| by_score_desc(a, b));
        rows
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(SCORE_CSV_HEADER);
        out.push('\n');
        for r in self.sorted() {
            let _ = writeln!(
                out,
                "{},{},{:.6},{:.6}",
                r.soc_code,
                csv_field(&r.title),
                r.raw_corr,
                r.z_score
            );
        }
        out
    }

    /// Reads a table written by [`ScoreTable::to_csv`].  Values carry the
    /// file's 6-decimal precision.
    pub fn read_csv(path: impl AsRef<Path>, characteristic: &str) -> Result<Self> {
        let path = path.as_ref();
        if !path.is_file() {
            return Err(Error::MissingFile(path.to_path_buf()));
        }
        let mut reader = csv::Reader::from_path(path)?;
        let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
        if header.join(",") != SCORE_CSV_HEADER {
            return Err(Error::malformed(&path.display().to_string(), 1, "unexpected score table header"));
        }
        let mut rows = Vec::new();
        for (i, rec) in reader.records().enumerate() {
            let rec = rec?;
            let num = |j: usize| {
                rec[j].parse::<f64>().map_err(|_| {
                    Error::malformed(&path.display().to_string(), i + 2, format!("bad number `{}`", &rec[j]))
                })
            };
            rows.push(ScoreRow {
                soc_code: rec[0].to_string(),
                title: rec[1].to_string(),
                raw_corr: num(2)?,
                z_score: num(3)?,
            });
        }
        Ok(ScoreTable { characteristic: characteristic.to_string(), rows })
    }
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn score_all(
    occupations: &[OccupationEmbedding],
    characteristic: &EmbeddingVector,
    name: &str,
) -> Result<ScoreTable> {
    let rows = occupations
        .iter()
        .map(|o| Ok((o.soc_code.clone(), o.title.clone(), similarity(&o.vector, characteristic)?)))
        .collect::<Result<Vec<_>>>()?;
    ScoreTable::from_raw(name, rows)
}

/// The `n` highest rows (descending) and the `n` lowest (ascending).
pub fn top_bottom(table: &ScoreTable, n: usize) -> Result<(Vec<ScoreRow>, Vec<ScoreRow>)> {
    if n == 0 || n > table.rows.len() {
        return Err(Error::InvalidInput(format!(
            "n must lie in 1..={}, got {n}",
            table.rows.len()
        )));
    }
    let sorted = table.sorted();
    let top = sorted.iter().take(n).map(|r| (*r).clone()).collect();
    let mut ascending: Vec<&ScoreRow> = table.rows.iter().collect();
    ascending.sort_by(|a, b| a.z_score.total_cmp(&b.z_score).then_with(|| a.soc_code.cmp(&b.soc_code)));
    let bottom = ascending.into_iter().take(n).cloned().collect();
    Ok((top, bottom))
}
