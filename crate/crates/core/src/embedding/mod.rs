//! Text embedding backends and the persistent vector cache.
//!
//! Vectors are held as `f64` for arithmetic, but everything that leaves
//! [`embed_texts`] has been rounded to `f32` precision, the cache's storage
//! format.  A vector therefore looks the same whether it was just computed
//! or read back from the cache.

mod cache;
mod hash;
mod remote;

use std::collections::BTreeMap;

use sha2::{Digest, Sha256};

pub use cache::{cache_key, EmbeddingCache, CACHE_MAGIC};
pub use hash::{hash_backend_id, hash_embed, token_hash, token_vector, tokenize};
pub use remote::{Health, RemoteClient, RetryPolicy};

use crate::error::{Error, Result};

/// Embedding width of the large transformer encoders this toolkit targets.
pub const DEFAULT_DIM: usize = 1024;
pub const DEFAULT_BATCH_SIZE: usize = 32;

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingVector {
    pub values: Vec<f64>,
    /// SHA-256 hex digest of the embedded text.
    pub source_key: String,
    pub backend_id: String,
}

impl EmbeddingVector {
    pub fn new(values: Vec<f64>, source_key: String, backend_id: String) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite component in vector for {source_key}"
            )));
        }
        Ok(EmbeddingVector { values, source_key, backend_id })
    }

    /// A vector computed from others (averages and the like).
    pub fn derived(values: Vec<f64>, source_key: impl Into<String>, backend_id: &str) -> Self {
        EmbeddingVector {
            values,
            source_key: source_key.into(),
            backend_id: backend_id.to_string(),
        }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }
}

pub fn source_key(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Hash,
    Remote,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbedderConfig {
    pub backend: Backend,
    pub dim: usize,
    pub seed: u64,
    pub endpoint_url: Option<String>,
    pub batch_size: usize,
    pub retry: RetryPolicy,
}

impl EmbedderConfig {
    pub fn hash(dim: usize, seed: u64) -> Self {
        EmbedderConfig {
            backend: Backend::Hash,
            dim,
            seed,
            endpoint_url: None,
            batch_size: DEFAULT_BATCH_SIZE,
            retry: RetryPolicy::default(),
        }
    }

    pub fn remote(endpoint_url: &str, dim: usize) -> Self {
        EmbedderConfig {
            backend: Backend::Remote,
            dim,
            seed: 0,
            endpoint_url: Some(endpoint_url.to_string()),
            batch_size: DEFAULT_BATCH_SIZE,
            retry: RetryPolicy::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::InvalidInput(format!("dim must be at least 2, got {}", self.dim)));
        }
        if self.batch_size == 0 {
            return Err(Error::InvalidInput("batch size must be at least 1".into()));
        }
        if self.backend == Backend::Remote && self.endpoint_url.is_none() {
            return Err(Error::InvalidInput("remote backend needs an endpoint URL".into()));
        }
        Ok(())
    }

    /// Identifies everything that determines the vectors; part of cache keys.
    pub fn backend_id(&self) -> String {
        match self.backend {
            Backend::Hash => hash_backend_id(self.dim, self.seed),
            Backend::Remote => {
                let url = self.endpoint_url.as_deref().unwrap_or("");
                let host = url.split("://").nth(1).unwrap_or(url).replace('/', "_");
                format!("remote-d{}-{host}", self.dim)
            }
        }
    }
}

fn to_f32_precision(values: &mut [f64]) {
    for v in values {
        *v = f64::from(*v as f32);
    }
}

/// Embeds `texts`, consulting `cache` first and storing new vectors in it.
/// Output order follows input order; duplicate texts share one computation.
pub fn embed_texts(
    config: &EmbedderConfig,
    texts: &[&str],
    mut cache: Option<&mut EmbeddingCache>,
) -> Result<Vec<EmbeddingVector>> {
    config.validate()?;
    if texts.is_empty() {
        return Err(Error::InvalidInput("no texts to embed".into()));
    }
    if let Some(i) = texts.iter().position(|t| t.trim().is_empty()) {
        return Err(Error::InvalidInput(format!("text #{i} is empty")));
    }
    if let Some(c) = cache.as_deref() {
        if let Some(d) = c.dim().filter(|&d| d != config.dim) {
            return Err(Error::DimensionMismatch { expected: config.dim, actual: d });
        }
    }
    let backend_id = config.backend_id();

    let mut resolved: BTreeMap<String, EmbeddingVector> = BTreeMap::new();
    let mut missing: Vec<(&str, String)> = Vec::new();
    for &text in texts {
        let key = source_key(text);
        if resolved.contains_key(&key) || missing.iter().any(|(_, k)| *k == key) {
            continue;
        }
        match cache.as_deref().and_then(|c| c.get(&backend_id, &key)) {
            Some(v) => {
                resolved.insert(key, v);
            }
            None => missing.push((text, key)),
        }
    }

    let computed = match config.backend {
        Backend::Hash => missing
            .iter()
            .map(|(text, _)| hash_embed(text, config.dim, config.seed).map(|v| v.values))
            .collect::<Result<Vec<_>>>()?,
        Backend::Remote if missing.is_empty() => Vec::new(),
        Backend::Remote => {
            let url = config.endpoint_url.as_deref().unwrap_or_default();
            let client = RemoteClient::new(url, config.retry.clone())?;
            let mut out = Vec::with_capacity(missing.len());
            for batch in missing.chunks(config.batch_size) {
                let batch_texts: Vec<&str> = batch.iter().map(|(t, _)| *t).collect();
                let (_, vectors) = client.embed_batch(&batch_texts, config.dim)?;
                out.extend(vectors);
            }
            out
        }
    };

    for ((_, key), mut values) in missing.into_iter().zip(computed) {
        if values.len() != config.dim {
            return Err(Error::DimensionMismatch { expected: config.dim, actual: values.len() });
        }
        to_f32_precision(&mut values);
        let v = EmbeddingVector::new(values, key.clone(), backend_id.clone())?;
        if let Some(c) = cache.as_deref_mut() {
            c.put(&v)?;
        }
        resolved.insert(key, v);
    }

    Ok(texts
        .iter()
        .map(|t| resolved[&source_key(t)].clone())
        .collect())
}
