//! Plan generators: a chat-completion client, a scripted replayer and a
//! deterministic greedy planner.

mod greedy;
mod llm;
mod scripted;

use serde::{Deserialize, Serialize};

pub use greedy::{greedy_plan, GreedyGenerator};
pub use llm::{LlmConfig, LlmGenerator, DEFAULT_API_KEY_ENV};
pub use scripted::ScriptedGenerator;

/// Per-request cost and latency figures reported by remote generators.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RequestTelemetry {
    pub latency_ms: u64,
    pub attempts: u32,
    pub prompt_tokens: Option<u64>,
    pub completion_tokens: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reply {
    pub text: String,
    pub telemetry: Option<RequestTelemetry>,
}

impl Reply {
    pub fn text(text: impl Into<String>) -> Self {
        Reply { text: text.into(), telemetry: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeneratorError {
    #[error("environment variable {0} holding the API key is not set")]
    MissingApiKey(String),
    #[error("authentication rejected with HTTP {status}: {body}")]
    Auth { status: u16, body: String },
    #[error("request rejected with HTTP {status}: {body}")]
    Rejected { status: u16, body: String },
    #[error("generator unavailable after {attempts} attempts: {last_error}")]
    Unavailable { attempts: u32, last_error: String },
    #[error("malformed generator response: {0}")]
    Malformed(String),
    #[error("scripted generator has no replies")]
    EmptyScript,
}

/// Anything that turns a prompt into text.
pub trait PlanGenerator: Send + Sync {
    fn generate(&self, prompt: &str) -> Result<Reply, GeneratorError>;

    /// One-line description recorded in session configuration snapshots.
    fn description(&self) -> String;
}

impl<G: PlanGenerator + ?Sized> PlanGenerator for &G {
    fn generate(&self, prompt: &str) -> Result<Reply, GeneratorError> {
        (**self).generate(prompt)
    }

    fn description(&self) -> String {
        (**self).description()
    }
}

impl<G: PlanGenerator + ?Sized> PlanGenerator for Box<G> {
    fn generate(&self, prompt: &str) -> Result<Reply, GeneratorError> {
        (**self).generate(prompt)
    }

    fn description(&self) -> String {
        (**self).description()
    }
}
