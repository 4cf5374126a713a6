//! Persistent vector cache.
//!
//! File layout: magic `OCC2VEC1`, little-endian `u32` dim, then records of
//! a little-endian `u16` key length, the UTF-8 key and `dim` little-endian
//! `f32` values.  Records are written in key order so the same contents
//! always produce the same bytes.  Keys are `"{backend_id}/{source_key}"`.
//!
//! The cache is single-writer: one process owns a file while it is open for
//! writing, and [`EmbeddingCache::save`] replaces it atomically via rename.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use super::EmbeddingVector;
use crate::error::{Error, Result};

pub const CACHE_MAGIC: &[u8; 8] = b"OCC2VEC1";

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EmbeddingCache {
    path: Option<PathBuf>,
    dim: Option<usize>,
    entries: BTreeMap<String, Vec<f32>>,
    dirty: bool,
}

pub fn cache_key(backend_id: &str, source_key: &str) -> String {
    format!("{backend_id}/{source_key}")
}

impl EmbeddingCache {
    /// An empty cache that lives only in memory.
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Opens `path`, or starts an empty cache there if it does not exist yet.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut cache = if path.exists() {
            Self::from_bytes(&fs::read(path)?, path)?
        } else {
            Self::default()
        };
        cache.path = Some(path.to_path_buf());
        Ok(cache)
    }

    pub fn dim(&self) -> Option<usize> {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, backend_id: &str, source_key: &str) -> bool {
        self.entries.contains_key(&cache_key(backend_id, source_key))
    }

    pub fn get(&self, backend_id: &str, source_key: &str) -> Option<EmbeddingVector> {
        self.entries
            .get(&cache_key(backend_id, source_key))
            .map(|values| EmbeddingVector {
                values: values.iter().map(|&x| f64::from(x)).collect(),
                source_key: source_key.to_string(),
                backend_id: backend_id.to_string(),
            })
    }

    /// Stores a vector.  Values must be exactly representable as `f32`, which
    /// is what makes get-after-put bit-identical.
    pub fn put(&mut self, vector: &EmbeddingVector) -> Result<()> {
        let dim = vector.dim();
        match self.dim {
            Some(d) if d != dim => return Err(Error::DimensionMismatch { expected: d, actual: dim }),
            _ => {}
        }
        let mut stored = Vec::with_capacity(dim);
        for &x in &vector.values {
            let y = x as f32;
            if f64::from(y) != x {
                return Err(Error::InvalidInput(format!(
                    "value {x} for `{}` is not representable as f32",
                    vector.source_key
                )));
            }
            stored.push(y);
        }
        if vector.backend_id.contains('/') {
            return Err(Error::InvalidInput(format!(
                "backend id `{}` must not contain '/'",
                vector.backend_id
            )));
        }
        let key = cache_key(&vector.backend_id, &vector.source_key);
        if key.len() > usize::from(u16::MAX) {
            return Err(Error::InvalidInput(format!("cache key too long: {} bytes", key.len())));
        }
        self.dim = Some(dim);
        if self.entries.insert(key, stored.clone()) != Some(stored) {
            self.dirty = true;
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let dim = self.dim.unwrap_or(0);
        let mut out = Vec::with_capacity(12 + self.entries.len() * (dim * 4 + 80));
        out.extend_from_slice(CACHE_MAGIC);
        out.extend_from_slice(&(dim as u32).to_le_bytes());
        for (key, values) in &self.entries {
            out.extend_from_slice(&(key.len() as u16).to_le_bytes());
            out.extend_from_slice(key.as_bytes());
            for v in values {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8], path: &Path) -> Result<Self> {
        let corrupt = |offset: usize, message: &str| Error::Corrupt {
            path: path.to_path_buf(),
            offset: offset as u64,
            message: message.to_string(),
        };
        if bytes.len() < 8 || &bytes[..8] != CACHE_MAGIC {
            return Err(corrupt(0, "bad magic, expected OCC2VEC1"));
        }
        if bytes.len() < 12 {
            return Err(corrupt(8, "truncated header"));
        }
        let dim = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
        let mut entries = BTreeMap::new();
        let mut pos = 12;
        if dim == 0 && pos != bytes.len() {
            return Err(corrupt(8, "records present but dim is 0"));
        }
        while pos < bytes.len() {
            let record_start = pos;
            if pos + 2 > bytes.len() {
                return Err(corrupt(pos, "truncated key length"));
            }
            let key_len = u16::from_le_bytes([bytes[pos], bytes[pos + 1]]) as usize;
            pos += 2;
            if pos + key_len + 4 * dim > bytes.len() {
                return Err(corrupt(record_start, "record extends past end of file"));
            }
            let key = std::str::from_utf8(&bytes[pos..pos + key_len])
                .map_err(|_| corrupt(pos, "key is not UTF-8"))?
                .to_string();
            if !key.contains('/') {
                return Err(corrupt(pos, "key lacks backend prefix"));
            }
            pos += key_len;
            let values: Vec<f32> = bytes[pos..pos + 4 * dim]
                .chunks_exact(4)
                .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
                .collect();
            if let Some(i) = values.iter().position(|v| !v.is_finite()) {
                return Err(corrupt(pos + 4 * i, "non-finite value"));
            }
            pos += 4 * dim;
            if entries.insert(key, values).is_some() {
                return Err(corrupt(record_start, "duplicate key"));
            }
        }
        Ok(EmbeddingCache {
            path: None,
            dim: (dim > 0).then_some(dim),
            entries,
            dirty: false,
        })
    }

    /// Writes the cache back to the file it was opened from.  A no-op for
    /// in-memory caches and when nothing changed.
    pub fn save(&mut self) -> Result<()> {
        let Some(path) = &self.path else { return Ok(()) };
        if !self.dirty && path.exists() {
            return Ok(());
        }
        let mut tmp = path.clone().into_os_string();
        tmp.push(".tmp");
        fs::write(&tmp, self.to_bytes())?;
        fs::rename(&tmp, path)?;
        self.dirty = false;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn vector(key: &str, values: Vec<f32>) -> EmbeddingVector {
        EmbeddingVector {
            values: values.into_iter().map(f64::from).collect(),
            source_key: key.to_string(),
            backend_id: "test".to_string(),
        }
    }

    #[test]
    fn put_then_get_round_trips() {
        let mut c = EmbeddingCache::in_memory();
        let v = vector("k", vec![0.1, -2.5, 3.0e-7]);
        c.put(&v).unwrap();
        assert_eq!(c.get("test", "k").unwrap(), v);
        assert!(c.get("test", "other").is_none());
        assert!(c.get("other", "k").is_none());
    }

    #[test]
    fn persistence_preserves_every_bit() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.bin");
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut expected = Vec::new();
        {
            let mut c = EmbeddingCache::open(&path).unwrap();
            for i in 0..10_000 {
                let values: Vec<f32> = (0..8).map(|_| f32::from_bits(rng.random::<u32>() & 0xbf7f_ffff)).collect();
                let v = vector(&format!("{i:05}"), values);
                c.put(&v).unwrap();
                expected.push(v);
            }
            c.save().unwrap();
        }
        let c = EmbeddingCache::open(&path).unwrap();
        assert_eq!(c.len(), 10_000);
        for v in &expected {
            let got = c.get("test", &v.source_key).unwrap();
            let same = got.values.iter().zip(&v.values).all(|(a, b)| a.to_bits() == b.to_bits());
            assert!(same, "bits differ for {}", v.source_key);
        }
    }

    #[test]
    fn rejects_values_outside_f32() {
        let mut c = EmbeddingCache::in_memory();
        let mut v = vector("k", vec![0.0, 0.0]);
        v.values[0] = 0.1;
        assert!(c.put(&v).is_err());
    }

    #[test]
    fn dim_is_fixed_by_first_put() {
        let mut c = EmbeddingCache::in_memory();
        c.put(&vector("a", vec![1.0, 2.0])).unwrap();
        let err = c.put(&vector("b", vec![1.0, 2.0, 3.0])).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 2, actual: 3 }));
    }

    #[test]
    fn serialization_is_order_independent() {
        let mut a = EmbeddingCache::in_memory();
        let mut b = EmbeddingCache::in_memory();
        let (x, y) = (vector("x", vec![1.0, 2.0]), vector("y", vec![3.0, 4.0]));
        a.put(&x).unwrap();
        a.put(&y).unwrap();
        b.put(&y).unwrap();
        b.put(&x).unwrap();
        assert_eq!(a.to_bytes(), b.to_bytes());
    }

    #[test]
    fn corruption_names_offset() {
        let mut c = EmbeddingCache::in_memory();
        c.put(&vector("a", vec![1.0, 2.0])).unwrap();
        c.put(&vector("b", vec![3.0, 4.0])).unwrap();
        let bytes = c.to_bytes();
        let p = Path::new("cache.bin");

        let err = EmbeddingCache::from_bytes(b"NOTACACHE\0\0\0", p).unwrap_err();
        assert!(matches!(err, Error::Corrupt { offset: 0, .. }));

        // Second record starts after header (12) + first record (2 + 6 + 8).
        let truncated = &bytes[..bytes.len() - 1];
        match EmbeddingCache::from_bytes(truncated, p).unwrap_err() {
            Error::Corrupt { offset, .. } => assert_eq!(offset, 28),
            other => panic!("unexpected {other}"),
        }
        let msg = EmbeddingCache::from_bytes(truncated, p).unwrap_err().to_string();
        assert!(msg.contains("offset 28"), "{msg}");
    }

    #[test]
    fn empty_cache_round_trips() {
        let c = EmbeddingCache::in_memory();
        let back = EmbeddingCache::from_bytes(&c.to_bytes(), Path::new("x")).unwrap();
        assert!(back.is_empty());
        assert_eq!(back.dim(), None);
    }
}
