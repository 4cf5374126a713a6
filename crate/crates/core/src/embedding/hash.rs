//! Offline embedding backend: a bag of pseudo-random token vectors.
//!
//! Each token hashes to a 64-bit seed that drives a ChaCha8 stream of
//! standard-normal draws, so token vectors depend only on
//! `(token, dim, seed)` and never on platform or call order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{source_key, EmbeddingVector};
use crate::error::{Error, Result};

/// Lowercases and splits on runs of non-alphanumeric characters.
pub fn tokenize(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect()
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// FNV-1a over the token bytes, started from a seed-dependent basis and
/// finished with a splitmix64 avalanche.
pub fn token_hash(token: &str, seed: u64) -> u64 {
    const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = 0xcbf2_9ce4_8422_2325 ^ splitmix64(seed);
    for b in token.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(FNV_PRIME);
    }
    splitmix64(h)
}

/// Unit-length pseudo-random vector for one token.
pub fn token_vector(token: &str, dim: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(token_hash(token, seed));
    let mut v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in &mut v {
        *x /= norm;
    }
    v
}

pub fn hash_embed(text: &str, dim: usize, seed: u64) -> Result<EmbeddingVector> {
    if dim < 2 {
        return Err(Error::InvalidInput(format!("embedding dim must be at least 2, got {dim}")));
    }
    let tokens = tokenize(text);
    if tokens.is_empty() {
        return Err(Error::InvalidInput(format!("text has no tokens: {text:?}")));
    }
    let mut sum = vec![0.0; dim];
    for token in &tokens {
        for (s, x) in sum.iter_mut().zip(token_vector(token, dim, seed)) {
            *s += x;
        }
    }
    let n = tokens.len() as f64;
    for s in &mut sum {
        *s /= n;
    }
    let norm = sum.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm < 1e-12 {
        return Err(Error::Degenerate(format!("token vectors cancel out for {text:?}")));
    }
    for s in &mut sum {
        *s /= norm;
    }
    EmbeddingVector::new(sum, source_key(text), hash_backend_id(dim, seed))
}

pub fn hash_backend_id(dim: usize, seed: u64) -> String {
    format!("hash-d{dim}-s{seed}")
}
