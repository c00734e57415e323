//! The generate-test loop: prompt, generate, reformat, criticise, repeat.

mod prompt;

use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::critics::{CriticConfig, CriticSuite, CriticVerdict, Selector};
use crate::generator::{PlanGenerator, RequestTelemetry};
use crate::plan::{reformat, Itinerary, Query, ReformatFailure};
use crate::sandbox::Sandbox;

pub(crate) use prompt::destination_cities;
pub use prompt::{build_prompt, consolidate_backprompts, PromptBundle};

pub const DEFAULT_MAX_ITERATIONS: u32 = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ReformatOutcome {
    Parsed { plan: Itinerary },
    Failed { failure: ReformatFailure },
}

impl ReformatOutcome {
    pub fn plan(&self) -> Option<&Itinerary> {
        match self {
            ReformatOutcome::Parsed { plan } => Some(plan),
            ReformatOutcome::Failed { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationTrace {
    /// 1-based.
    pub iteration: u32,
    pub prompt: String,
    pub reply: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rewrite_reply: Option<String>,
    pub reformat: ReformatOutcome,
    pub verdicts: Vec<CriticVerdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub telemetry: Option<RequestTelemetry>,
}

impl IterationTrace {
    pub fn all_passed(&self) -> bool {
        !self.verdicts.is_empty() && self.verdicts.iter().all(|v| v.passed)
    }
}

/// Loop settings, recorded verbatim in every session result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SessionConfig {
    pub selector: Selector,
    pub max_iterations: u32,
    /// Ask the generator to restate replies that contain no JSON.
    pub rewrite: bool,
    pub seed: Option<u64>,
    pub critics: CriticConfig,
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig {
            selector: Selector::All,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            rewrite: false,
            seed: None,
            critics: CriticConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionHeader {
    pub generator: String,
    pub config: SessionConfig,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionResult {
    pub header: SessionHeader,
    pub query: Query,
    pub final_plan: Option<Itinerary>,
    /// A schema-valid plan was produced in some iteration.
    pub delivered: bool,
    /// Every selected critic passed on the final iteration.
    pub all_passed: bool,
    pub iterations_used: u32,
    /// Set when the generator failed and the session stopped early.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub traces: Vec<IterationTrace>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SessionError {
    #[error("max_iterations must be at least 1")]
    NoIterations,
}

/// Runs the loop for one query until every selected critic passes or the
/// iteration budget is spent.
pub fn run_session(
    q: &Query,
    gen: &dyn PlanGenerator,
    sb: &Sandbox,
    config: &SessionConfig,
) -> Result<SessionResult, SessionError> {
    if config.max_iterations == 0 {
        return Err(SessionError::NoIterations);
    }
    let suite = CriticSuite::new(config.selector).with_config(config.critics.clone());
    let mut result = SessionResult {
        header: SessionHeader { generator: gen.description(), config: config.clone() },
        query: q.clone(),
        final_plan: None,
        delivered: false,
        all_passed: false,
        iterations_used: 0,
        error: None,
        traces: Vec::new(),
    };
    let mut backprompts: Vec<String> = Vec::new();

    for iteration in 1..=config.max_iterations {
        let prompt = build_prompt(q, sb, &backprompts).render();
        let reply = match gen.generate(&prompt) {
            Ok(r) => r,
            Err(e) => {
                result.error = Some(e.to_string());
                break;
            }
        };
        let rewriter = config.rewrite.then_some(gen);
        let reformatted = match reformat(&reply.text, rewriter) {
            Ok(r) => r,
            Err(e) => {
                result.error = Some(e.to_string());
                break;
            }
        };
        let verdicts = suite.run(reformatted.outcome.as_ref(), q, sb);
        let outcome = match reformatted.outcome {
            Ok(plan) => {
                result.final_plan = Some(plan.clone());
                result.delivered = true;
                ReformatOutcome::Parsed { plan }
            }
            Err(failure) => ReformatOutcome::Failed { failure },
        };
        backprompts = consolidate_backprompts(&verdicts);
        let trace = IterationTrace {
            iteration,
            prompt,
            reply: reply.text,
            rewrite_reply: reformatted.rewrite_reply,
            reformat: outcome,
            verdicts,
            telemetry: reply.telemetry,
        };
        let done = trace.all_passed();
        result.traces.push(trace);
        result.iterations_used = iteration;
        if done {
            result.all_passed = true;
            break;
        }
    }
    Ok(result)
}

/// Writes one JSON object per iteration.
pub fn write_trace_jsonl(traces: &[IterationTrace], mut out: impl Write) -> io::Result<()> {
    for t in traces {
        serde_json::to_writer(&mut out, t)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

pub fn read_trace_jsonl(input: impl BufRead) -> io::Result<Vec<IterationTrace>> {
    let mut out = Vec::new();
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?);
    }
    Ok(out)
}
