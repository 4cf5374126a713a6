//! Composite task measures built from O*NET element scores.
//!
//! Each subscale is the standardized sum of its elements and each measure
//! the standardized sum of its subscales.  "Structured versus Unstructured
//! Work" enters the routine-cognitive subscale with its sign reversed.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::onet::{DescriptorCatalog, DescriptorKind};
use crate::stats::standardize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum TaskMeasure {
    Abstract,
    Manual,
    Routine,
}

impl TaskMeasure {
    pub const ALL: [TaskMeasure; 3] = [TaskMeasure::Abstract, TaskMeasure::Manual, TaskMeasure::Routine];

    pub fn as_str(self) -> &'static str {
        match self {
            TaskMeasure::Abstract => "abstract",
            TaskMeasure::Manual => "manual",
            TaskMeasure::Routine => "routine",
        }
    }

    pub fn subscales(self) -> &'static [Subscale] {
        match self {
            TaskMeasure::Abstract => &ABSTRACT,
            TaskMeasure::Manual => &MANUAL,
            TaskMeasure::Routine => &ROUTINE,
        }
    }
}

impl fmt::Display for TaskMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TaskMeasure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TaskMeasure::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown task measure `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Element {
    pub id: &'static str,
    pub name: &'static str,
    pub reversed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Subscale {
    pub name: &'static str,
    pub elements: &'static [Element],
}

const fn el(id: &'static str, name: &'static str) -> Element {
    Element { id, name, reversed: false }
}

static ABSTRACT: [Subscale; 2] = [
    Subscale {
        name: "Non-routine cognitive: Analytical",
        elements: &[
            el("4.A.2.a.4", "Analyzing data/information"),
            el("4.A.2.b.2", "Thinking creatively"),
            el("4.A.4.a.1", "Interpreting information for others"),
        ],
    },
    Subscale {
        name: "Non-routine cognitive: Interpersonal",
        elements: &[
            el("4.A.4.a.4", "Establishing and maintaining personal relationships"),
            el("4.A.4.b.4", "Guiding, directing and motivating subordinates"),
            el("4.A.4.b.5", "Coaching/developing others"),
        ],
    },
];

static MANUAL: [Subscale; 1] = [Subscale {
    name: "Non-routine manual physical",
    elements: &[
        el("4.A.3.a.4", "Operating vehicles, mechanized devices, or equipment"),
        el("4.C.2.d.1.g", "Spend time using hands to handle, control or feel objects, tools or controls"),
        el("1.A.2.a.2", "Manual dexterity"),
        el("1.A.1.f.1", "Spatial orientation"),
    ],
}];

static ROUTINE: [Subscale; 2] = [
    Subscale {
        name: "Routine cognitive",
        elements: &[
            el("4.C.3.b.7", "Importance of repeating the same tasks"),
            el("4.C.3.b.4", "Importance of being exact or accurate"),
            Element {
                id: "4.C.3.b.8",
                name: "Structured v. Unstructured work",
                reversed: true,
            },
        ],
    },
    Subscale {
        name: "Routine manual",
        elements: &[
            el("4.C.3.d.3", "Pace determined by speed of equipment"),
            el("4.A.3.a.3", "Controlling machines and processes"),
            el("4.C.2.d.1.i", "Spend time making repetitive motions"),
        ],
    },
];

/// Per-occupation element values, one column per element id.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementTable {
    pub soc_codes: Vec<String>,
    pub columns: BTreeMap<String, Vec<f64>>,
}

impl ElementTable {
    /// Collects the combined unit score of each element for every catalog
    /// occupation.  Missing elements or ratings are reported together.
    pub fn from_catalog(catalog: &DescriptorCatalog, element_ids: &[&str]) -> Result<Self> {
        let mut gaps = Vec::new();
        let mut columns = BTreeMap::new();
        for &id in element_ids {
            let Some(d) = catalog.find_descriptor(DescriptorKind::Attribute, id) else {
                gaps.push(format!("{id} (not in catalog)"));
                continue;
            };
            let mut column = Vec::with_capacity(catalog.occupations().len());
            for (i, occ) in catalog.occupations().iter().enumerate() {
                match catalog.attribute_score(i, d) {
                    Some(v) => column.push(v),
                    None => gaps.push(format!("{id} for {}", occ.soc_code)),
                }
            }
            columns.insert(id.to_string(), column);
        }
        if !gaps.is_empty() {
            return Err(Error::InvalidInput(format!("missing element values: {}", gaps.join(", "))));
        }
        Ok(ElementTable {
            soc_codes: catalog.occupations().iter().map(|o| o.soc_code.clone()).collect(),
            columns,
        })
    }
}

/// Every element id any measure uses.
pub fn all_element_ids() -> Vec<&'static str> {
    TaskMeasure::ALL
        .iter()
        .flat_map(|m| m.subscales())
        .flat_map(|s| s.elements)
        .map(|e| e.id)
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompositeMeasure {
    pub measure: TaskMeasure,
    pub soc_codes: Vec<String>,
    /// Standardized subscale values, keyed by subscale name.
    pub subscales: BTreeMap<String, Vec<f64>>,
    pub values: Vec<f64>,
}

pub fn composite_task_measure(table: &ElementTable, measure: TaskMeasure) -> Result<CompositeMeasure> {
    let n = table.soc_codes.len();
    let missing: Vec<&str> = measure
        .subscales()
        .iter()
        .flat_map(|s| s.elements)
        .filter(|e| !table.columns.contains_key(e.id))
        .map(|e| e.id)
        .collect();
    if !missing.is_empty() {
        return Err(Error::InvalidInput(format!(
            "{measure} measure lacks elements: {}",
            missing.join(", ")
        )));
    }
    let mut subscales = BTreeMap::new();
    let mut total = vec![0.0; n];
    for s in measure.subscales() {
        let mut sum = vec![0.0; n];
        for e in s.elements {
            let column = &table.columns[e.id];
            if column.len() != n {
                return Err(Error::DimensionMismatch { expected: n, actual: column.len() });
            }
            let sign = if e.reversed { -1.0 } else { 1.0 };
            for (acc, v) in sum.iter_mut().zip(column) {
                *acc += sign * v;
            }
        }
        let z = standardize(&sum)
            .map_err(|_| Error::Degenerate(format!("subscale `{}` is constant across occupations", s.name)))?;
        for (t, v) in total.iter_mut().zip(&z) {
            *t += v;
        }
        subscales.insert(s.name.to_string(), z);
    }
    let values = standardize(&total)
        .map_err(|_| Error::Degenerate(format!("{measure} measure is constant across occupations")))?;
    Ok(CompositeMeasure {
        measure,
        soc_codes: table.soc_codes.clone(),
        subscales,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::{mean, sample_sd};
    use proptest::prelude::*;

    fn routine_table(values: [[f64; 6]; 3]) -> ElementTable {
        let ids = ["4.C.3.b.7", "4.C.3.b.4", "4.C.3.b.8", "4.C.3.d.3", "4.A.3.a.3", "4.C.2.d.1.i"];
        let mut columns = BTreeMap::new();
        for (j, id) in ids.iter().enumerate() {
            columns.insert(id.to_string(), values.iter().map(|row| row[j]).collect());
        }
        ElementTable {
            soc_codes: vec!["a".into(), "b".into(), "c".into()],
            columns,
        }
    }

    #[test]
    fn three_occupation_hand_oracle() {
        // Routine cognitive sums (b.8 reversed): 0.6, 0.7, 0.2
        //   mean 0.5, deviations .1 .2 −.3, sd √(.14/2) = √.07.
        // Routine manual sums: 1.2, 0.9, 0.6 → z = (1, 0, −1).
        let t = routine_table([
            [0.5, 0.4, 0.3, 0.2, 0.5, 0.5],
            [0.6, 0.3, 0.2, 0.3, 0.3, 0.3],
            [0.1, 0.2, 0.1, 0.1, 0.2, 0.3],
        ]);
        let m = composite_task_measure(&t, TaskMeasure::Routine).unwrap();
        let s07 = 0.07_f64.sqrt();
        let cognitive = [0.1 / s07, 0.2 / s07, -0.3 / s07];
        let manual = [1.0, 0.0, -1.0];
        let total: Vec<f64> = (0..3).map(|i| cognitive[i] + manual[i]).collect();
        let tm = total.iter().sum::<f64>() / 3.0;
        let tsd = (total.iter().map(|v| (v - tm).powi(2)).sum::<f64>() / 2.0).sqrt();
        for i in 0..3 {
            assert!((m.subscales["Routine cognitive"][i] - cognitive[i]).abs() < 1e-12);
            assert!((m.subscales["Routine manual"][i] - manual[i]).abs() < 1e-12);
            assert!((m.values[i] - (total[i] - tm) / tsd).abs() < 1e-12);
        }
    }

    #[test]
    fn reversal_flips_only_its_term() {
        let base = [
            [0.5, 0.4, 0.3, 0.2, 0.5, 0.5],
            [0.6, 0.3, 0.9, 0.3, 0.3, 0.3],
            [0.1, 0.2, 0.1, 0.1, 0.2, 0.3],
        ];
        let mut flipped = base;
        for row in &mut flipped {
            row[2] = -row[2];
        }
        let a = composite_task_measure(&routine_table(base), TaskMeasure::Routine).unwrap();
        let b = composite_task_measure(&routine_table(flipped), TaskMeasure::Routine).unwrap();
        // Raw routine-cognitive sums differ by exactly 2·b.8.
        let raw = |t: &[[f64; 6]; 3]| -> Vec<f64> { t.iter().map(|r| r[0] + r[1] - r[2]).collect() };
        let (ra, rb) = (raw(&base), raw(&flipped));
        for i in 0..3 {
            assert!((rb[i] - ra[i] - 2.0 * base[i][2]).abs() < 1e-15);
        }
        assert_eq!(a.subscales["Routine manual"], b.subscales["Routine manual"]);
        assert_ne!(a.subscales["Routine cognitive"], b.subscales["Routine cognitive"]);
    }

    #[test]
    fn constant_subscales_are_rejected() {
        let t = routine_table([[0.5; 6]; 3]);
        assert!(matches!(composite_task_measure(&t, TaskMeasure::Routine), Err(Error::Degenerate(_))));
    }

    #[test]
    fn missing_elements_are_listed() {
        let t = routine_table([[0.5; 6]; 3]);
        let err = composite_task_measure(&t, TaskMeasure::Abstract).unwrap_err().to_string();
        assert!(err.contains("4.A.2.a.4") && err.contains("4.A.4.b.5"), "{err}");
    }

    #[test]
    fn element_list_has_sixteen_ids() {
        let ids = all_element_ids();
        assert_eq!(ids.len(), 16);
        assert_eq!(ids.iter().filter(|id| **id == "4.C.3.b.8").count(), 1);
    }

    proptest! {
        #[test]
        fn output_is_standardized(v in prop::collection::vec(0.0..1.0f64, 6 * 8)) {
            let n = 8;
            let ids = all_element_ids();
            let mut columns = BTreeMap::new();
            for (j, id) in ids.iter().enumerate() {
                columns.insert(id.to_string(), (0..n).map(|i| v[(i * 6 + j) % v.len()] + 0.01 * (i * j) as f64).collect());
            }
            let t = ElementTable { soc_codes: (0..n).map(|i| i.to_string()).collect(), columns };
            for m in TaskMeasure::ALL {
                if let Ok(c) = composite_task_measure(&t, m) {
                    prop_assert!(mean(&c.values).abs() < 1e-9);
                    prop_assert!((sample_sd(&c.values) - 1.0).abs() < 1e-9);
                }
            }
        }
    }
}
