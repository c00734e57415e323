//! Python module `llm_modulo`. Queries, plans and results cross the boundary
//! as JSON text; the functions in [`api`] do the work and are usable from Rust.

use std::sync::Arc;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use modulo_core::sandbox::Sandbox;

pub mod api {
    use std::sync::Arc;

    use modulo_core::critics::{catalog, emit_extraction_prompt, get_total_cost, CriticConfig, CriticSuite, Selector};
    use modulo_core::generator::{greedy_plan, GreedyGenerator, ScriptedGenerator};
    use modulo_core::metacontroller::{run_session, SessionConfig};
    use modulo_core::plan::{parse_plan_text, parse_query, serialize_plan, Query};
    use modulo_core::sandbox::{load_sandbox, Sandbox};

    pub type Verdict = (String, String, bool, String);

    pub fn load(path: &str) -> Result<Sandbox, String> {
        load_sandbox(path).map(|(sb, _)| sb).map_err(|e| e.to_string())
    }

    fn query(json: &str) -> Result<Query, String> {
        Query::from_json(json).map_err(|e| e.to_string())
    }

    /// `(critic_id, group, passed, backprompt)` per selected critic.
    pub fn check(sb: &Sandbox, query_json: &str, plan_text: &str, selector: &str) -> Result<Vec<Verdict>, String> {
        let q = query(query_json)?;
        let selector: Selector = selector.parse()?;
        let parsed = parse_plan_text(plan_text);
        Ok(CriticSuite::new(selector)
            .run(parsed.as_ref(), &q, sb)
            .into_iter()
            .map(|v| (v.critic_id.to_string(), v.group.to_string(), v.passed, v.backprompt))
            .collect())
    }

    /// Trip cost in cents.
    pub fn total_cost(sb: &Sandbox, query_json: &str, plan_text: &str) -> Result<i64, String> {
        let q = query(query_json)?;
        let plan = parse_plan_text(plan_text).map_err(|e| e.to_string())?;
        Ok(get_total_cost(&plan, &q, sb).cents())
    }

    pub fn greedy(sb: &Sandbox, query_json: &str) -> Result<String, String> {
        Ok(serialize_plan(&greedy_plan(&query(query_json)?, sb, &CriticConfig::default())))
    }

    /// Runs one session and returns the full result as JSON. With `replies`
    /// the generator replays them; otherwise the greedy planner answers.
    pub fn session(
        sb: &Arc<Sandbox>,
        query_json: &str,
        replies: Option<Vec<String>>,
        selector: &str,
        max_iterations: u32,
    ) -> Result<String, String> {
        let q = query(query_json)?;
        let cfg = SessionConfig { selector: selector.parse()?, max_iterations, ..SessionConfig::default() };
        let result = match replies {
            Some(r) => run_session(&q, &ScriptedGenerator::new(r), sb, &cfg),
            None => run_session(&q, &GreedyGenerator::new(q.clone(), sb.clone()), sb, &cfg),
        }
        .map_err(|e| e.to_string())?;
        serde_json::to_string(&result).map_err(|e| e.to_string())
    }

    pub fn critics_json() -> String {
        serde_json::to_string(&catalog()).expect("catalog serializes")
    }

    pub fn extraction_prompt(critic_id: &str) -> Result<String, String> {
        emit_extraction_prompt(critic_id).map_err(|e| e.to_string())
    }

    /// Structured query JSON from a natural-language request.
    pub fn query_from_text(text: &str) -> Result<String, String> {
        parse_query(text).map(|q| q.to_json()).map_err(|e| e.to_string())
    }
}

fn value_error(e: String) -> PyErr {
    PyValueError::new_err(e)
}

/// Read-only reference datasets.
#[pyclass(name = "Sandbox", frozen)]
struct PySandbox {
    inner: Arc<Sandbox>,
}

#[pymethods]
impl PySandbox {
    #[new]
    fn new(path: &str) -> PyResult<Self> {
        Ok(PySandbox { inner: Arc::new(api::load(path).map_err(value_error)?) })
    }

    fn cities(&self) -> Vec<String> {
        self.inner.cities()
    }

    fn check(&self, query: &str, plan: &str, selector: &str) -> PyResult<Vec<api::Verdict>> {
        api::check(&self.inner, query, plan, selector).map_err(value_error)
    }

    fn total_cost_cents(&self, query: &str, plan: &str) -> PyResult<i64> {
        api::total_cost(&self.inner, query, plan).map_err(value_error)
    }

    fn greedy_plan(&self, query: &str) -> PyResult<String> {
        api::greedy(&self.inner, query).map_err(value_error)
    }

    #[pyo3(signature = (query, replies=None, selector="all", max_iterations=10))]
    fn run_session(
        &self,
        query: &str,
        replies: Option<Vec<String>>,
        selector: &str,
        max_iterations: u32,
    ) -> PyResult<String> {
        api::session(&self.inner, query, replies, selector, max_iterations).map_err(value_error)
    }
}

#[pyfunction]
fn critic_catalog() -> String {
    api::critics_json()
}

#[pyfunction]
fn extraction_prompt(critic_id: &str) -> PyResult<String> {
    api::extraction_prompt(critic_id).map_err(value_error)
}

#[pyfunction]
fn parse_query(text: &str) -> PyResult<String> {
    api::query_from_text(text).map_err(value_error)
}

#[pymodule]
fn llm_modulo(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySandbox>()?;
    m.add_function(wrap_pyfunction!(critic_catalog, m)?)?;
    m.add_function(wrap_pyfunction!(extraction_prompt, m)?)?;
    m.add_function(wrap_pyfunction!(parse_query, m)?)?;
    Ok(())
}
