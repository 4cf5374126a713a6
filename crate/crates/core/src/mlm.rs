//! Desk-scale model of a BERT-style input pipeline and masked-language-model
//! loss.
//!
//! Two token sequences are joined as `[CLS] a… [SEP] b… [EOS]`.  Every
//! token occurrence gets three lookups (vocabulary index, 1-based position,
//! sequence id 1 or 2) whose embedding rows are summed to form the input
//! vector.  `[SEP]` belongs to sequence 1.  Tokens are whole words; there is
//! no subword splitting.
//!
//! Masking selects each non-special token with probability 0.15; a selected
//! token becomes `[MASK]` with probability 0.8, stays as is with 0.1, and is
//! replaced by a uniformly drawn non-special vocabulary token with 0.1.
//!
//! The loss on a masked token is the cross-entropy −ln p(true token).  A
//! variant that scores the arg-max prediction instead of the true token
//! would give −ln max_c p_c, which does not depend on the label and so
//! cannot train anything; only the true-label form is implemented.
//!
//! Next-sentence prediction (a binary "does b follow a" objective on the
//! `[CLS]` output) is part of the original BERT recipe and absent from
//! RoBERTa; it is not modelled here.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

pub const CLS: &str = "[CLS]";
pub const SEP: &str = "[SEP]";
pub const EOS: &str = "[EOS]";
pub const MASK: &str = "[MASK]";
pub const SPECIALS: [&str; 4] = [CLS, SEP, EOS, MASK];

pub const SELECT_RATE: f64 = 0.15;
pub const MASK_SHARE: f64 = 0.8;
pub const KEEP_SHARE: f64 = 0.1;

/// Published pre-training settings of the large BERT and RoBERTa models,
/// kept for reference.  Nothing in this crate trains a model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PretrainingHyperparameters {
    pub layers: usize,
    pub hidden_size: usize,
    pub feed_forward_size: usize,
    pub attention_heads: usize,
    pub dropout: f64,
    pub warmup_steps: usize,
    pub weight_decay: f64,
    pub peak_learning_rate: f64,
    pub gradient_clipping: f64,
    pub max_tokens: usize,
    pub batch_size: usize,
    pub max_steps: usize,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_epsilon: f64,
}

pub const BERT_LARGE: PretrainingHyperparameters = PretrainingHyperparameters {
    layers: 24,
    hidden_size: 1024,
    feed_forward_size: 4096,
    attention_heads: 16,
    dropout: 0.1,
    warmup_steps: 10_000,
    weight_decay: 0.01,
    peak_learning_rate: 1e-4,
    gradient_clipping: 0.0,
    max_tokens: 512,
    batch_size: 256,
    max_steps: 1_000_000,
    adam_beta1: 0.9,
    adam_beta2: 0.999,
    adam_epsilon: 1e-6,
};

pub const ROBERTA_LARGE: PretrainingHyperparameters = PretrainingHyperparameters {
    warmup_steps: 30_000,
    peak_learning_rate: 4e-4,
    batch_size: 8_000,
    max_steps: 500_000,
    adam_beta2: 0.98,
    ..BERT_LARGE
};

#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    tokens: Vec<String>,
    index: BTreeMap<String, usize>,
}

impl Vocabulary {
    /// The four special tokens (indices 1–4) followed by `words` in order.
    pub fn new<S: AsRef<str>>(words: &[S]) -> Result<Self> {
        let mut vocab = Vocabulary { tokens: Vec::new(), index: BTreeMap::new() };
        for t in SPECIALS.iter().copied().chain(words.iter().map(AsRef::as_ref)) {
            if t.is_empty() {
                return Err(Error::InvalidInput("empty vocabulary token".into()));
            }
            if vocab.index.contains_key(t) {
                return Err(Error::InvalidInput(format!("duplicate vocabulary token `{t}`")));
            }
            vocab.tokens.push(t.to_string());
            vocab.index.insert(t.to_string(), vocab.tokens.len());
        }
        Ok(vocab)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// 1-based index of a token.
    pub fn lookup(&self, token: &str) -> Result<usize> {
        self.index
            .get(token)
            .copied()
            .ok_or_else(|| Error::InvalidInput(format!("token `{token}` not in vocabulary")))
    }

    pub fn token(&self, index: usize) -> Option<&str> {
        index.checked_sub(1).and_then(|i| self.tokens.get(i)).map(String::as_str)
    }

    pub fn is_special(token: &str) -> bool {
        SPECIALS.contains(&token)
    }
}

/// `[CLS] a… [SEP] b… [EOS]`, requiring |a| + |b| < `max_tokens`.
pub fn tokenize_pair<S: AsRef<str>>(a: &[S], b: &[S], max_tokens: usize) -> Result<Vec<String>> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidInput("both token sequences must be nonempty".into()));
    }
    if a.len() + b.len() >= max_tokens {
        return Err(Error::InvalidInput(format!(
            "sequence lengths {} + {} = {} must be below {max_tokens}",
            a.len(),
            b.len(),
            a.len() + b.len()
        )));
    }
    let mut out = Vec::with_capacity(a.len() + b.len() + 3);
    out.push(CLS.to_string());
    out.extend(a.iter().map(|t| t.as_ref().to_string()));
    out.push(SEP.to_string());
    out.extend(b.iter().map(|t| t.as_ref().to_string()));
    out.push(EOS.to_string());
    Ok(out)
}

fn check_index(index: usize, sequence: &[String]) -> Result<()> {
    if index >= sequence.len() {
        return Err(Error::InvalidInput(format!(
            "token index {index} outside a sequence of {} tokens",
            sequence.len()
        )));
    }
    Ok(())
}

/// 1-based position of the occurrence at 0-based `index`.
pub fn position_of(index: usize, sequence: &[String]) -> Result<usize> {
    check_index(index, sequence)?;
    Ok(index + 1)
}

/// 1 up to and including the first `[SEP]`, 2 afterwards.
pub fn sequence_of(index: usize, sequence: &[String]) -> Result<usize> {
    check_index(index, sequence)?;
    let sep = sequence.iter().position(|t| t == SEP).unwrap_or(sequence.len());
    Ok(if index <= sep { 1 } else { 2 })
}

/// Token, position and sequence embedding tables.  Row r of each table is
/// the vector for index r + 1.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTables {
    pub phi_l: Vec<Vec<f64>>,
    pub phi_p: Vec<Vec<f64>>,
    pub phi_s: [Vec<f64>; 2],
}

impl EmbeddingTables {
    /// Standard-normal tables with `positions` position rows.  A pair
    /// admitted under a `max_tokens` limit has at most `max_tokens + 2`
    /// tokens, so pass at least that.
    pub fn random(vocab_len: usize, positions: usize, dim: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut table = |rows: usize| -> Vec<Vec<f64>> {
            (0..rows)
                .map(|_| (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect())
                .collect()
        };
        let phi_l = table(vocab_len);
        let phi_p = table(positions);
        let mut s = table(2);
        let s2 = s.pop().unwrap();
        let s1 = s.pop().unwrap();
        EmbeddingTables { phi_l, phi_p, phi_s: [s1, s2] }
    }

    pub fn dim(&self) -> usize {
        self.phi_s[0].len()
    }
}

/// φ_l(l(t)) + φ_p(p(t)) + φ_s(s(t)) for the token at 0-based `index`.
pub fn input_embedding(
    index: usize,
    sequence: &[String],
    vocab: &Vocabulary,
    tables: &EmbeddingTables,
) -> Result<Vec<f64>> {
    let p = position_of(index, sequence)?;
    let l = vocab.lookup(&sequence[index])?;
    let s = sequence_of(index, sequence)?;
    let row_l = tables
        .phi_l
        .get(l - 1)
        .ok_or_else(|| Error::InvalidInput(format!("token table has no row {l}")))?;
    let row_p = tables
        .phi_p
        .get(p - 1)
        .ok_or_else(|| Error::InvalidInput(format!("position table has no row {p}")))?;
    let row_s = &tables.phi_s[s - 1];
    if row_l.len() != row_s.len() || row_p.len() != row_s.len() {
        return Err(Error::DimensionMismatch { expected: row_s.len(), actual: row_l.len().max(row_p.len()) });
    }
    Ok(row_l
        .iter()
        .zip(row_p)
        .zip(row_s)
        .map(|((a, b), c)| a + b + c)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaskAction {
    Masked,
    Unchanged,
    /// Replaced by the token with this 1-based vocabulary index.
    Random(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaskingOutcome {
    /// (0-based index, action), in sequence order.
    pub selections: Vec<(usize, MaskAction)>,
    /// The sequence after applying the actions.
    pub tokens: Vec<String>,
}

pub fn apply_mlm_mask(sequence: &[String], vocab: &Vocabulary, seed: u64, select_rate: f64) -> Result<MaskingOutcome> {
    if !(0.0..=1.0).contains(&select_rate) {
        return Err(Error::InvalidInput(format!("select rate {select_rate} outside [0, 1]")));
    }
    let ordinary: Vec<usize> = (SPECIALS.len() + 1..=vocab.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tokens = sequence.to_vec();
    let mut selections = Vec::new();
    for (i, token) in sequence.iter().enumerate() {
        if Vocabulary::is_special(token) {
            continue;
        }
        if rng.random::<f64>() >= select_rate {
            continue;
        }
        let u: f64 = rng.random();
        let action = if u < MASK_SHARE {
            tokens[i] = MASK.to_string();
            MaskAction::Masked
        } else if u < MASK_SHARE + KEEP_SHARE || ordinary.is_empty() {
            MaskAction::Unchanged
        } else {
            let r = ordinary[rng.random_range(0..ordinary.len())];
            tokens[i] = vocab.token(r).expect("index from vocabulary").to_string();
            MaskAction::Random(r)
        };
        selections.push((i, action));
    }
    Ok(MaskingOutcome { selections, tokens })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossEntropy {
    pub loss: f64,
    /// ∂loss/∂logits = softmax − one-hot(true token).
    pub grad_logits: Vec<f64>,
}

/// Cross-entropy of a predicted distribution over the vocabulary (entry
/// r is the probability of token r + 1) against the true 1-based token.
pub fn mlm_cross_entropy(probabilities: &[f64], true_token: usize) -> Result<CrossEntropy> {
    if true_token == 0 || true_token > probabilities.len() {
        return Err(Error::InvalidInput(format!(
            "true token {true_token} outside 1..={}",
            probabilities.len()
        )));
    }
    let sum: f64 = probabilities.iter().sum();
    if (sum - 1.0).abs() > 1e-9 || probabilities.iter().any(|p| !(*p >= 0.0)) {
        return Err(Error::InvalidInput(format!("probabilities must be nonnegative and sum to 1, sum is {sum}")));
    }
    let p_true = probabilities[true_token - 1];
    if p_true == 0.0 {
        return Err(Error::Degenerate("true token has probability zero: infinite loss".into()));
    }
    let mut grad_logits = probabilities.to_vec();
    grad_logits[true_token - 1] -= 1.0;
    Ok(CrossEntropy { loss: -p_true.ln(), grad_logits })
}

pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let m = logits.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let e: Vec<f64> = logits.iter().map(|l| (l - m).exp()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|v| v / s).collect()
}

/// −ln softmax(logits)[true_token − 1], via log-sum-exp.
pub fn loss_from_logits(logits: &[f64], true_token: usize) -> f64 {
    let m = logits.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let lse = m + logits.iter().map(|l| (l - m).exp()).sum::<f64>().ln();
    lse - logits[true_token - 1]
}

pub fn mean_pool(vectors: &[Vec<f64>]) -> Result<Vec<f64>> {
    let first = vectors
        .first()
        .ok_or_else(|| Error::InvalidInput("nothing to pool".into()))?;
    let mut sum = vec![0.0; first.len()];
    for v in vectors {
        if v.len() != sum.len() {
            return Err(Error::DimensionMismatch { expected: sum.len(), actual: v.len() });
        }
        for (s, x) in sum.iter_mut().zip(v) {
            *s += x;
        }
    }
    let n = vectors.len() as f64;
    Ok(sum.into_iter().map(|s| s / n).collect())
}
