use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rating scale bounds as listed in the O*NET scales reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleSpec {
    pub scale_id: String,
    pub minimum: f64,
    pub maximum: f64,
}

impl ScaleSpec {
    pub fn new(scale_id: &str, minimum: f64, maximum: f64) -> Result<Self> {
        if !(minimum.is_finite() && maximum.is_finite() && maximum > minimum) {
            return Err(Error::InvalidInput(format!(
                "scale {scale_id}: maximum {maximum} must exceed minimum {minimum}"
            )));
        }
        Ok(ScaleSpec {
            scale_id: scale_id.to_string(),
            minimum,
            maximum,
        })
    }
}

/// Maps a rating onto [0, 1] with the scale's bounds.
pub fn normalize_scale(value: f64, spec: &ScaleSpec, element_id: &str) -> Result<f64> {
    if !(value >= spec.minimum && value <= spec.maximum) {
        return Err(Error::OutOfRange {
            element_id: element_id.to_string(),
            scale_id: spec.scale_id.clone(),
            value,
            minimum: spec.minimum,
            maximum: spec.maximum,
        });
    }
    Ok((value - spec.minimum) / (spec.maximum - spec.minimum))
}

/// Uniform average of already-normalized scale scores.
pub fn combine_scale_scores(unit_scores: &[f64]) -> Result<f64> {
    if unit_scores.is_empty() {
        return Err(Error::InvalidInput("no scale scores to combine".into()));
    }
    if let Some(bad) = unit_scores.iter().find(|s| !(0.0..=1.0).contains(*s)) {
        return Err(Error::InvalidInput(format!(
            "unit score {bad} outside [0, 1]"
        )));
    }
    let mean = unit_scores.iter().sum::<f64>() / unit_scores.len() as f64;
    Ok(mean.clamp(0.0, 1.0))
}

/// Scales nonnegative raw weights to sum to one.  A single weight always
/// becomes exactly 1.
pub fn normalize_weights(raw: &[f64]) -> Result<Vec<f64>> {
    if raw.is_empty() {
        return Err(Error::InvalidInput("no weights to normalize".into()));
    }
    if raw.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(Error::InvalidInput(
            "weights must be finite and nonnegative".into(),
        ));
    }
    if raw.len() == 1 {
        return Ok(vec![1.0]);
    }
    let total: f64 = raw.iter().sum();
    if total <= 0.0 {
        return Err(Error::Degenerate("all weights are zero".into()));
    }
    Ok(raw.iter().map(|w| w / total).collect())
}
