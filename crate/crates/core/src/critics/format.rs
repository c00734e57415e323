use crate::plan::{validate_schema, ReformatFailure};

use super::{CriticId, CriticVerdict, PlanInput};

fn failure_problems(failure: &ReformatFailure) -> Vec<String> {
    let mut problems: Vec<String> = failure.diagnostics().into_iter().map(|d| format!("{d}.")).collect();
    problems.push(
        "Reply with a JSON array of day objects, each with the keys day, people_number, current_city, \
         transportation, breakfast, attraction, lunch, dinner and accommodation; use \"-\" for empty slots."
            .into(),
    );
    problems
}

/// Passes iff the reformatter produced a schema-valid plan.
pub fn format_critic(input: PlanInput<'_>) -> CriticVerdict {
    match input {
        Err(failure) => CriticVerdict::from_problems(CriticId::Format, failure_problems(failure)),
        Ok(plan) => {
            let doc = serde_json::to_value(plan).expect("itinerary serializes");
            let violations = validate_schema(&doc);
            if violations.is_empty() {
                CriticVerdict::pass(CriticId::Format)
            } else {
                CriticVerdict::from_problems(
                    CriticId::Format,
                    failure_problems(&ReformatFailure::SchemaViolations { violations }),
                )
            }
        }
    }
}
