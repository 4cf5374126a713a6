//! HTTP client for an embedding sidecar.
//!
//! Wire contract: `POST {endpoint}/embed` with `{"texts": [...], "normalize":
//! true}` answers `{"model": "...", "dim": n, "vectors": [[...], ...]}`;
//! `GET {endpoint}/health` answers `{"status": "ok", "model": "...", "dim": n}`.

use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Serialize)]
struct EmbedRequest<'a> {
    texts: &'a [&'a str],
    normalize: bool,
}

#[derive(Debug, Deserialize)]
struct EmbedResponse {
    model: String,
    dim: usize,
    vectors: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct Health {
    pub status: String,
    #[serde(default)]
    pub model: Option<String>,
    #[serde(default)]
    pub dim: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RetryPolicy {
    /// Retries after the first attempt.
    pub retries: u32,
    pub initial_backoff: Duration,
    pub timeout: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            retries: 3,
            initial_backoff: Duration::from_millis(250),
            timeout: Duration::from_secs(120),
        }
    }
}

/// One attempt's failure: either worth retrying or final.
enum Failure {
    Retryable(String),
    Fatal(Error),
}

#[derive(Debug, Clone)]
pub struct RemoteClient {
    endpoint: String,
    policy: RetryPolicy,
    agent: ureq::Agent,
}

impl RemoteClient {
    pub fn new(endpoint: &str, policy: RetryPolicy) -> Result<Self> {
        let endpoint = endpoint.trim_end_matches('/').to_string();
        if !(endpoint.starts_with("http://") || endpoint.starts_with("https://")) {
            return Err(Error::InvalidInput(format!(
                "endpoint must be an http(s) URL, got `{endpoint}`"
            )));
        }
        let agent = ureq::Agent::config_builder()
            .http_status_as_error(false)
            .timeout_global(Some(policy.timeout))
            .build()
            .into();
        Ok(RemoteClient { endpoint, policy, agent })
    }

    pub fn endpoint(&self) -> &str {
        &self.endpoint
    }

    fn with_retries<T>(&self, mut attempt: impl FnMut() -> std::result::Result<T, Failure>) -> Result<T> {
        let mut backoff = self.policy.initial_backoff;
        let mut attempts = 0;
        loop {
            attempts += 1;
            match attempt() {
                Ok(v) => return Ok(v),
                Err(Failure::Fatal(e)) => return Err(e),
                Err(Failure::Retryable(message)) => {
                    if attempts > self.policy.retries {
                        return Err(Error::Transport { attempts, message });
                    }
                    thread::sleep(backoff);
                    backoff *= 2;
                }
            }
        }
    }

    pub fn health(&self) -> Result<Health> {
        let url = format!("{}/health", self.endpoint);
        self.with_retries(|| {
            let mut resp = self.agent.get(&url).call().map_err(|e| Failure::Retryable(e.to_string()))?;
            let status = resp.status().as_u16();
            if status != 200 {
                return Err(Failure::Retryable(format!("GET /health returned HTTP {status}")));
            }
            resp.body_mut()
                .read_json::<Health>()
                .map_err(|e| Failure::Fatal(Error::InvalidInput(format!("bad /health body: {e}"))))
        })
    }

    /// Embeds one batch.  Returns the model id and one vector per text.
    /// A response whose dim differs from `expected_dim` is a fatal error.
    pub fn embed_batch(&self, texts: &[&str], expected_dim: usize) -> Result<(String, Vec<Vec<f64>>)> {
        let url = format!("{}/embed", self.endpoint);
        let request = EmbedRequest { texts, normalize: true };
        let response = self.with_retries(|| {
            let mut resp = self
                .agent
                .post(&url)
                .send_json(&request)
                .map_err(|e| Failure::Retryable(e.to_string()))?;
            let status = resp.status().as_u16();
            match status {
                200 => {}
                408 | 429 | 500..=599 => {
                    return Err(Failure::Retryable(format!("POST /embed returned HTTP {status}")))
                }
                _ => {
                    return Err(Failure::Fatal(Error::InvalidInput(format!(
                        "POST /embed rejected the request with HTTP {status}"
                    ))))
                }
            }
            resp.body_mut()
                .read_json::<EmbedResponse>()
                .map_err(|e| Failure::Fatal(Error::InvalidInput(format!("bad /embed body: {e}"))))
        })?;

        if response.dim != expected_dim {
            return Err(Error::DimensionMismatch { expected: expected_dim, actual: response.dim });
        }
        if response.vectors.len() != texts.len() {
            return Err(Error::InvalidInput(format!(
                "sent {} texts, received {} vectors",
                texts.len(),
                response.vectors.len()
            )));
        }
        for v in &response.vectors {
            if v.len() != expected_dim {
                return Err(Error::DimensionMismatch { expected: expected_dim, actual: v.len() });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput("response contains non-finite values".into()));
            }
        }
        Ok((response.model, response.vectors))
    }
}
