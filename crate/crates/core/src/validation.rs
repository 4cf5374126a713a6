//! Checks estimated attribute scores against O*NET ratings.
//!
//! The estimate for occupation i and attribute a is the similarity between
//! the occupation vector and the attribute's definition vector, standardized
//! across occupations for each attribute.  The O*NET value is the combined
//! unit score of the attribute for that occupation.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::occupation::{DescriptorVectors, OccupationEmbedding};
use crate::onet::{Category, DescriptorCatalog};
use crate::scoring::similarity;
use crate::stats::{ols_fixed_effects, pearson, rho_sweep, rho_sweep_grid, standardize, DummySet, OlsResult, RhoSweep};

pub const PANEL_CSV_HEADER: &str = "soc_code,element_id,category,onet_score,estimate";

#[derive(Debug, Clone, PartialEq)]
pub struct PanelRow {
    pub soc_code: String,
    pub element_id: String,
    pub category: Category,
    pub onet_score: f64,
    pub estimate: f64,
}

/// Occupation × attribute observations.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AttributePanel {
    pub rows: Vec<PanelRow>,
}

impl AttributePanel {
    pub fn to_csv(&self) -> String {
        let mut out = format!("{PANEL_CSV_HEADER}\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.soc_code, r.element_id, r.category, r.onet_score, r.estimate
            );
        }
        out
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        if !path.is_file() {
            return Err(Error::MissingFile(path.to_path_buf()));
        }
        let file = path.display().to_string();
        let mut reader = csv::Reader::from_path(path)?;
        let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
        if header.join(",") != PANEL_CSV_HEADER {
            return Err(Error::malformed(&file, 1, format!("expected header `{PANEL_CSV_HEADER}`")));
        }
        let mut rows = Vec::new();
        for (i, rec) in reader.records().enumerate() {
            let rec = rec?;
            let line = i + 2;
            let num = |j: usize| {
                rec[j]
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::malformed(&file, line, format!("bad number `{}`", &rec[j])))
            };
            rows.push(PanelRow {
                soc_code: rec[0].to_string(),
                element_id: rec[1].to_string(),
                category: rec[2].parse().map_err(|_| Error::malformed(&file, line, "bad category"))?,
                onet_score: num(3)?,
                estimate: num(4)?,
            });
        }
        Ok(AttributePanel { rows })
    }
}

/// Builds the panel from occupation vectors and attribute definition vectors.
pub fn attribute_panel(
    catalog: &DescriptorCatalog,
    occupations: &[OccupationEmbedding],
    vectors: &DescriptorVectors,
) -> Result<AttributePanel> {
    if occupations.len() != catalog.occupations().len() {
        return Err(Error::DimensionMismatch {
            expected: catalog.occupations().len(),
            actual: occupations.len(),
        });
    }
    let mut rows = Vec::new();
    for a in catalog.attribute_indices() {
        let d = catalog.descriptor(a);
        let attr_vec = vectors
            .get(a)
            .and_then(Option::as_ref)
            .ok_or_else(|| Error::MissingVector(d.element_id.clone()))?;
        let mut rated = Vec::new();
        let mut sims = Vec::new();
        for (i, occ) in occupations.iter().enumerate() {
            if let Some(score) = catalog.attribute_score(i, a) {
                rated.push((i, score));
                sims.push(similarity(&occ.vector, attr_vec)?);
            }
        }
        if rated.len() < 2 {
            continue;
        }
        let z = standardize(&sims).map_err(|_| {
            Error::Degenerate(format!("similarities to `{}` are constant", d.element_id))
        })?;
        for ((i, score), est) in rated.into_iter().zip(z) {
            rows.push(PanelRow {
                soc_code: occupations[i].soc_code.clone(),
                element_id: d.element_id.clone(),
                category: d.category,
                onet_score: score,
                estimate: est,
            });
        }
    }
    Ok(AttributePanel { rows })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupCorrelation {
    pub key: String,
    pub n: usize,
    pub r: f64,
}

fn grouped_correlations<'a>(
    rows: impl Iterator<Item = (&'a str, f64, f64)>,
) -> (Vec<GroupCorrelation>, Vec<String>) {
    let mut groups: BTreeMap<&str, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    for (key, truth, est) in rows {
        let g = groups.entry(key).or_default();
        g.0.push(truth);
        g.1.push(est);
    }
    let mut out = Vec::new();
    let mut skipped = Vec::new();
    for (key, (truth, est)) in groups {
        match pearson(&truth, &est) {
            Ok(r) => out.push(GroupCorrelation { key: key.to_string(), n: truth.len(), r }),
            Err(_) => skipped.push(key.to_string()),
        }
    }
    (out, skipped)
}

/// O*NET scores standardized within each attribute, row-aligned with the panel.
fn standardized_truth(panel: &AttributePanel) -> Vec<f64> {
    let mut by_attr: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, r) in panel.rows.iter().enumerate() {
        by_attr.entry(&r.element_id).or_default().push(i);
    }
    let mut out = vec![f64::NAN; panel.rows.len()];
    for idx in by_attr.values() {
        let values: Vec<f64> = idx.iter().map(|&i| panel.rows[i].onet_score).collect();
        if let Ok(z) = standardize(&values) {
            for (&i, v) in idx.iter().zip(z) {
                out[i] = v;
            }
        }
    }
    out
}

/// One correlation per attribute, across occupations.
pub fn between_correlations(panel: &AttributePanel) -> (Vec<GroupCorrelation>, Vec<String>) {
    grouped_correlations(panel.rows.iter().map(|r| (r.element_id.as_str(), r.onet_score, r.estimate)))
}

/// One correlation per occupation, across attributes.  Both series are
/// standardized within attribute first so that attributes with high
/// average ratings do not dominate.
pub fn within_correlations(panel: &AttributePanel) -> (Vec<GroupCorrelation>, Vec<String>) {
    let truth = standardized_truth(panel);
    grouped_correlations(
        panel
            .rows
            .iter()
            .zip(truth)
            .filter(|(_, t)| t.is_finite())
            .map(|(r, t)| (r.soc_code.as_str(), t, r.estimate)),
    )
}

/// Which dummy sets a regression specification absorbs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Spec {
    pub occupation: bool,
    pub descriptor: bool,
    pub category: bool,
}

impl Spec {
    /// All eight on/off combinations, from no dummies to all three.
    pub fn all() -> [Spec; 8] {
        let mut out = [Spec { occupation: false, descriptor: false, category: false }; 8];
        for (i, s) in out.iter_mut().enumerate() {
            s.occupation = i & 1 != 0;
            s.descriptor = i & 2 != 0;
            s.category = i & 4 != 0;
        }
        out
    }

    pub fn label(&self) -> String {
        let yn = |b: bool| if b { "yes" } else { "no" };
        format!("{},{},{}", yn(self.occupation), yn(self.descriptor), yn(self.category))
    }
}

fn codes<'a>(keys: impl Iterator<Item = &'a str>) -> Vec<usize> {
    let mut map: BTreeMap<&str, usize> = BTreeMap::new();
    keys.map(|k| {
        let next = map.len();
        *map.entry(k).or_insert(next)
    })
    .collect()
}

/// Regresses O*NET scores on the estimates for each specification.
pub fn run_regressions(panel: &AttributePanel) -> Result<Vec<(Spec, OlsResult)>> {
    let y: Vec<f64> = panel.rows.iter().map(|r| r.onet_score).collect();
    let x: Vec<f64> = panel.rows.iter().map(|r| r.estimate).collect();
    let occ = codes(panel.rows.iter().map(|r| r.soc_code.as_str()));
    let desc = codes(panel.rows.iter().map(|r| r.element_id.as_str()));
    let cat = codes(panel.rows.iter().map(|r| r.category.as_str()));
    Spec::all()
        .into_iter()
        .map(|spec| {
            let mut sets = Vec::new();
            if spec.occupation {
                sets.push(DummySet { name: "occupation", groups: &occ });
            }
            if spec.descriptor {
                sets.push(DummySet { name: "descriptor", groups: &desc });
            }
            if spec.category {
                sets.push(DummySet { name: "category", groups: &cat });
            }
            Ok((spec, ols_fixed_effects(&y, &x, &sets)?))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub between: Vec<GroupCorrelation>,
    pub within: Vec<GroupCorrelation>,
    /// Attributes or occupations whose correlation was undefined.
    pub skipped_between: Vec<String>,
    pub skipped_within: Vec<String>,
    /// `Err` holds the reason a sweep could not run (too few groups, or
    /// correlations without spread).
    pub between_sweep: std::result::Result<RhoSweep, String>,
    pub within_sweep: std::result::Result<RhoSweep, String>,
    pub regressions: Vec<(Spec, OlsResult)>,
}

fn sweep(values: &[f64], grid: &[f64], alpha: f64) -> Result<std::result::Result<RhoSweep, String>> {
    match rho_sweep(values, grid, alpha) {
        Ok(s) => Ok(Ok(s)),
        Err(e @ Error::InvalidInput(_)) if !(alpha > 0.0 && alpha < 1.0) => Err(e),
        Err(e) => Ok(Err(e.to_string())),
    }
}

pub fn validate_panel(panel: &AttributePanel, alpha: f64) -> Result<ValidationReport> {
    let (between, skipped_between) = between_correlations(panel);
    let (within, skipped_within) = within_correlations(panel);
    let rs = |v: &[GroupCorrelation]| v.iter().map(|g| g.r).collect::<Vec<_>>();
    let grid = rho_sweep_grid();
    Ok(ValidationReport {
        between_sweep: sweep(&rs(&between), &grid, alpha)?,
        within_sweep: sweep(&rs(&within), &grid, alpha)?,
        regressions: run_regressions(panel)?,
        between,
        within,
        skipped_between,
        skipped_within,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn synthetic(noise: f64, seed: u64) -> AttributePanel {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cats = [Category::Abilities, Category::Skills];
        let mut rows = Vec::new();
        for i in 0..12 {
            for a in 0..6 {
                let truth: f64 = rng.random_range(0.0..1.0);
                rows.push(PanelRow {
                    soc_code: format!("11-{:04}.00", i),
                    element_id: format!("e{a}"),
                    category: cats[a % 2],
                    onet_score: truth,
                    estimate: truth + noise * rng.random_range(-1.0..1.0),
                });
            }
        }
        AttributePanel { rows }
    }

    #[test]
    fn planted_identity_gives_unit_slope() {
        let panel = synthetic(0.0, 1);
        let regs = run_regressions(&panel).unwrap();
        assert_eq!(regs.len(), 8);
        for (_, r) in &regs {
            assert!((r.coefficient - 1.0).abs() < 1e-9, "{}", r.coefficient);
            assert!((r.adj_r2 - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn correlation_counts_follow_panel_shape() {
        let panel = synthetic(0.3, 2);
        let report = validate_panel(&panel, 0.05).unwrap();
        assert_eq!(report.between.len(), 6);
        assert_eq!(report.within.len(), 12);
        assert!(report.between.iter().all(|g| g.n == 12 && g.r > 0.0));
    }

    #[test]
    fn specs_cover_all_combinations() {
        let labels: Vec<String> = Spec::all().iter().map(Spec::label).collect();
        assert_eq!(labels[0], "no,no,no");
        assert_eq!(labels[7], "yes,yes,yes");
        let mut dedup = labels.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), 8);
    }

    #[test]
    fn panel_csv_round_trips() {
        let panel = synthetic(0.2, 3);
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("panel.csv");
        std::fs::write(&p, panel.to_csv()).unwrap();
        assert_eq!(AttributePanel::read_csv(&p).unwrap(), panel);
    }
}
