//! Occupation embeddings built from weighted O*NET descriptor texts.
//!
//! The pipeline: [`onet`] parses the descriptor catalog, [`embedding`] turns
//! texts into vectors, [`occupation`] aggregates them into one vector per
//! occupation and [`scoring`] ranks occupations against a free-text
//! characteristic.  [`stats`], [`validation`] and [`dimred`] hold the
//! statistical and visualization machinery, [`mlm`] a desk-scale model of
//! the masked-language-model input pipeline.

pub mod dimred;
pub mod embedding;
pub mod error;
pub mod mlm;
pub mod occupation;
pub mod onet;
pub mod scoring;
pub mod stats;
pub mod task_measures;
pub mod validation;

pub use error::{Error, Result};
