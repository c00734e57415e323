//! Client for chat-completion style HTTP endpoints.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{GeneratorError, PlanGenerator, Reply, RequestTelemetry};

pub const DEFAULT_API_KEY_ENV: &str = "MODULO_API_KEY";

/// Endpoint and sampling settings. The key itself is never part of the
/// configuration; only the name of the environment variable holding it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LlmConfig {
    pub endpoint: String,
    pub model: String,
    pub api_key_env: String,
    pub temperature: f64,
    pub max_tokens: u32,
    pub timeout_ms: u64,
    pub max_retries: u32,
    pub backoff_base_ms: u64,
    pub backoff_max_ms: u64,
    pub system_prompt: String,
}

impl Default for LlmConfig {
    fn default() -> Self {
        LlmConfig {
            endpoint: "https://api.openai.com/v1/chat/completions".into(),
            model: "gpt-4-0613".into(),
            api_key_env: DEFAULT_API_KEY_ENV.into(),
            temperature: 0.0,
            max_tokens: 4096,
            timeout_ms: 120_000,
            max_retries: 3,
            backoff_base_ms: 1_000,
            backoff_max_ms: 30_000,
            system_prompt: "You are a careful travel planner.".into(),
        }
    }
}

impl LlmConfig {
    /// Parses and validates a TOML settings file. Unknown keys, `api_key`
    /// included, are rejected. Errors never quote the offending source line.
    pub fn from_toml(text: &str) -> Result<Self, String> {
        let cfg: LlmConfig = toml::from_str(text).map_err(|e| match e.span() {
            Some(span) => format!("{} (line {})", e.message(), text[..span.start].matches('\n').count() + 1),
            None => e.message().to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.timeout_ms == 0 {
            return Err("timeout_ms must be positive".into());
        }
        if self.endpoint.trim().is_empty() {
            return Err("endpoint must not be empty".into());
        }
        Ok(())
    }

    /// Delay before retry number `retry` (1-based): base × 2^(retry-1), capped.
    pub fn backoff(&self, retry: u32) -> Duration {
        let factor = 1u64.checked_shl(retry.saturating_sub(1)).unwrap_or(u64::MAX);
        Duration::from_millis(self.backoff_base_ms.saturating_mul(factor).min(self.backoff_max_ms))
    }
}

pub struct LlmGenerator {
    config: LlmConfig,
    api_key: String,
    agent: ureq::Agent,
}

enum Attempt {
    Done(Reply),
    Fatal(GeneratorError),
    Retry(String),
}

impl LlmGenerator {
    /// Builds a client, reading the key from `config.api_key_env`.
    pub fn new(config: LlmConfig) -> Result<Self, GeneratorError> {
        let key = std::env::var(&config.api_key_env)
            .ok()
            .filter(|k| !k.trim().is_empty())
            .ok_or_else(|| GeneratorError::MissingApiKey(config.api_key_env.clone()))?;
        Self::with_api_key(config, key)
    }

    pub fn with_api_key(config: LlmConfig, api_key: impl Into<String>) -> Result<Self, GeneratorError> {
        config.validate().map_err(GeneratorError::Malformed)?;
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_millis(config.timeout_ms)))
            .http_status_as_error(false)
            .build()
            .into();
        Ok(LlmGenerator { config, api_key: api_key.into(), agent })
    }

    pub fn config(&self) -> &LlmConfig {
        &self.config
    }

    fn attempt(&self, body: &Value) -> Attempt {
        let sent = self
            .agent
            .post(&self.config.endpoint)
            .header("Authorization", &format!("Bearer {}", self.api_key))
            .send_json(body);
        let mut resp = match sent {
            Ok(r) => r,
            Err(e) => return Attempt::Retry(e.to_string()),
        };
        let status = resp.status().as_u16();
        let text = match resp.body_mut().read_to_string() {
            Ok(t) => t,
            Err(e) => return Attempt::Retry(format!("reading response body: {e}")),
        };
        match status {
            200..=299 => match parse_completion(&text) {
                Ok(reply) => Attempt::Done(reply),
                Err(e) => Attempt::Fatal(e),
            },
            401 | 403 => Attempt::Fatal(GeneratorError::Auth { status, body: text }),
            408 | 409 | 429 | 500..=599 => Attempt::Retry(format!("HTTP {status}: {text}")),
            _ => Attempt::Fatal(GeneratorError::Rejected { status, body: text }),
        }
    }
}

fn parse_completion(text: &str) -> Result<Reply, GeneratorError> {
    let v: Value = serde_json::from_str(text).map_err(|e| GeneratorError::Malformed(e.to_string()))?;
    let content = v
        .pointer("/choices/0/message/content")
        .and_then(Value::as_str)
        .ok_or_else(|| GeneratorError::Malformed("no choices[0].message.content in response".into()))?;
    let telemetry = RequestTelemetry {
        prompt_tokens: v.pointer("/usage/prompt_tokens").and_then(Value::as_u64),
        completion_tokens: v.pointer("/usage/completion_tokens").and_then(Value::as_u64),
        ..RequestTelemetry::default()
    };
    Ok(Reply { text: content.to_string(), telemetry: Some(telemetry) })
}

impl PlanGenerator for LlmGenerator {
    fn generate(&self, prompt: &str) -> Result<Reply, GeneratorError> {
        let body = json!({
            "model": self.config.model,
            "messages": [
                {"role": "system", "content": self.config.system_prompt},
                {"role": "user", "content": prompt},
            ],
            "temperature": self.config.temperature,
            "max_tokens": self.config.max_tokens,
        });
        let started = Instant::now();
        let attempts = self.config.max_retries + 1;
        let mut last_error = String::new();
        for n in 1..=attempts {
            match self.attempt(&body) {
                Attempt::Done(mut reply) => {
                    if let Some(t) = reply.telemetry.as_mut() {
                        t.attempts = n;
                        t.latency_ms = started.elapsed().as_millis() as u64;
                    }
                    return Ok(reply);
                }
                Attempt::Fatal(e) => return Err(e),
                Attempt::Retry(e) => last_error = e,
            }
            if n < attempts {
                std::thread::sleep(self.config.backoff(n));
            }
        }
        Err(GeneratorError::Unavailable { attempts, last_error })
    }

    fn description(&self) -> String {
        format!("llm {} at {}", self.config.model, self.config.endpoint)
    }
}
