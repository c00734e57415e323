use std::sync::Mutex;

use super::{GeneratorError, PlanGenerator, Reply};

/// Replays a fixed list of replies; the last one repeats once exhausted.
#[derive(Debug, Default)]
pub struct ScriptedGenerator {
    replies: Vec<String>,
    state: Mutex<State>,
}

#[derive(Debug, Default)]
struct State {
    next: usize,
    prompts: Vec<String>,
}

impl ScriptedGenerator {
    pub fn new(replies: Vec<String>) -> Self {
        ScriptedGenerator { replies, state: Mutex::default() }
    }

    /// Reads a JSON array of reply strings.
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        Ok(Self::new(serde_json::from_str(text)?))
    }

    /// Every prompt received so far, in order.
    pub fn prompts(&self) -> Vec<String> {
        self.state.lock().unwrap().prompts.clone()
    }
}

impl PlanGenerator for ScriptedGenerator {
    fn generate(&self, prompt: &str) -> Result<Reply, GeneratorError> {
        let mut st = self.state.lock().unwrap();
        st.prompts.push(prompt.to_string());
        let last = self.replies.len().checked_sub(1).ok_or(GeneratorError::EmptyScript)?;
        let i = st.next.min(last);
        st.next += 1;
        Ok(Reply::text(self.replies[i].clone()))
    }

    fn description(&self) -> String {
        format!("scripted ({} replies)", self.replies.len())
    }
}
