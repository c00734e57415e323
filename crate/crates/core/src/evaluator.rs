//! Corpus-level metrics over finished sessions.
//!
//! Micro rate: passed applicable constraint instances over all applicable
//! instances in a group. Macro rate: share of queries whose final plan
//! passes every applicable constraint of the group. Final pass: share of
//! queries passing both groups. Undelivered queries fail everything.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::critics::{CriticId, CriticSuite, Group, Selector};
use crate::metacontroller::{IterationTrace, SessionResult};
use crate::sandbox::Sandbox;

/// One constraint judgement on one query's final plan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintOutcome {
    pub critic_id: String,
    pub group: Group,
    pub applicable: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryRecord {
    /// The query as JSON; records are reported sorted by it.
    pub query: String,
    pub delivered: bool,
    pub iterations_used: u32,
    pub outcomes: Vec<ConstraintOutcome>,
}

impl QueryRecord {
    fn counts(&self, group: Group) -> (u64, u64) {
        let applicable = self.outcomes.iter().filter(|o| o.group == group && o.applicable);
        let (mut passed, mut total) = (0, 0);
        for o in applicable {
            total += 1;
            if self.delivered && o.passed {
                passed += 1;
            }
        }
        (passed, total)
    }

    pub fn group_passed(&self, group: Group) -> bool {
        let (passed, total) = self.counts(group);
        self.delivered && passed == total
    }

    pub fn final_pass(&self) -> bool {
        self.group_passed(Group::Commonsense) && self.group_passed(Group::Hard)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticCount {
    pub critic_id: String,
    pub group: Group,
    pub count: u64,
}

/// Symmetric firing counts; `counts[i][i]` is the total firings of critic i.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cooccurrence {
    pub critic_ids: Vec<String>,
    pub counts: Vec<Vec<u64>>,
}

impl Cooccurrence {
    /// P(column fired | row fired) within an iteration; zero rows stay zero.
    pub fn conditional(&self) -> Vec<Vec<f64>> {
        self.counts
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let diag = row[i];
                row.iter().map(|c| if diag == 0 { 0.0 } else { *c as f64 / diag as f64 }).collect()
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub label: String,
    pub corpus_size: usize,
    pub delivery_rate: f64,
    pub commonsense_micro: f64,
    pub commonsense_macro: f64,
    pub hard_micro: f64,
    pub hard_macro: f64,
    pub final_pass_rate: f64,
    /// Entry k-1 is the final pass rate counting only sessions done within k iterations.
    pub pass_by_iteration: Vec<f64>,
    pub critic_frequency: Vec<CriticCount>,
    pub cooccurrence: Cooccurrence,
    pub queries: Vec<QueryRecord>,
}

fn pct(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 * 100.0 / den as f64
    }
}

/// Table metrics from per-query verdict records.
pub fn aggregate(label: &str, mut records: Vec<QueryRecord>, max_iterations: u32) -> EvalReport {
    records.sort_by_cached_key(|r| (r.query.clone(), serde_json::to_string(r).expect("record serializes")));
    let n = records.len() as u64;
    let micro = |g: Group| {
        let (p, t) = records.iter().map(|r| r.counts(g)).fold((0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
        pct(p, t)
    };
    let share = |f: &dyn Fn(&QueryRecord) -> bool| pct(records.iter().filter(|r| f(r)).count() as u64, n);
    let horizon = records.iter().map(|r| r.iterations_used).max().unwrap_or(0).max(max_iterations);
    let pass_by_iteration =
        (1..=horizon).map(|k| share(&|r: &QueryRecord| r.final_pass() && r.iterations_used <= k)).collect();
    EvalReport {
        label: label.to_string(),
        corpus_size: records.len(),
        delivery_rate: share(&|r| r.delivered),
        commonsense_micro: micro(Group::Commonsense),
        commonsense_macro: share(&|r| r.group_passed(Group::Commonsense)),
        hard_micro: micro(Group::Hard),
        hard_macro: share(&|r| r.group_passed(Group::Hard)),
        final_pass_rate: share(&|r| r.final_pass()),
        pass_by_iteration,
        critic_frequency: Vec::new(),
        cooccurrence: Cooccurrence::default(),
        queries: records,
    }
}

/// Failing verdicts per critic over every iteration of every session.
pub fn critic_frequency(sessions: &[SessionResult]) -> Vec<CriticCount> {
    trace_frequency(sessions.iter().flat_map(|s| &s.traces))
}

pub fn trace_frequency<'a>(traces: impl IntoIterator<Item = &'a IterationTrace>) -> Vec<CriticCount> {
    let mut counts = [0u64; CriticId::ALL.len()];
    for v in traces.into_iter().flat_map(|t| &t.verdicts).filter(|v| !v.passed) {
        if let Some(i) = CriticId::ALL.iter().position(|id| *id == v.critic_id) {
            counts[i] += 1;
        }
    }
    CriticId::ALL
        .iter()
        .zip(counts)
        .map(|(id, count)| CriticCount { critic_id: id.as_str().into(), group: id.group(), count })
        .collect()
}

pub fn critic_cooccurrence(sessions: &[SessionResult]) -> Cooccurrence {
    trace_cooccurrence(sessions.iter().flat_map(|s| &s.traces))
}

pub fn trace_cooccurrence<'a>(traces: impl IntoIterator<Item = &'a IterationTrace>) -> Cooccurrence {
    let ids = CriticId::ALL;
    let mut counts = vec![vec![0u64; ids.len()]; ids.len()];
    for trace in traces {
        let fired: BTreeSet<usize> = trace
            .verdicts
            .iter()
            .filter(|v| !v.passed)
            .filter_map(|v| ids.iter().position(|id| *id == v.critic_id))
            .collect();
        for &a in &fired {
            for &b in &fired {
                counts[a][b] += 1;
            }
        }
    }
    Cooccurrence { critic_ids: ids.iter().map(|i| i.as_str().to_string()).collect(), counts }
}

/// Share of sessions whose loop critics all passed by iteration k, judged
/// from the traces alone (no re-evaluation with the full critic set).
pub fn trace_pass_by_iteration(sessions: &[Vec<IterationTrace>], max_iterations: u32) -> Vec<f64> {
    let first_pass: Vec<Option<u32>> =
        sessions.iter().map(|ts| ts.iter().find(|t| t.all_passed()).map(|t| t.iteration)).collect();
    let horizon = sessions.iter().flat_map(|ts| ts.iter().map(|t| t.iteration)).max().unwrap_or(0).max(max_iterations);
    (1..=horizon)
        .map(|k| pct(first_pass.iter().filter(|p| p.is_some_and(|i| i <= k)).count() as u64, sessions.len() as u64))
        .collect()
}

/// Re-judges each session's final plan with every critic.
pub fn query_record(session: &SessionResult, sb: &Sandbox) -> QueryRecord {
    let q = &session.query;
    let verdicts = match &session.final_plan {
        Some(plan) => {
            CriticSuite::new(Selector::All).with_config(session.header.config.critics.clone()).run(Ok(plan), q, sb)
        }
        None => Vec::new(),
    };
    let outcomes = CriticId::ALL
        .iter()
        .filter(|id| id.group() != Group::Format)
        .map(|id| ConstraintOutcome {
            critic_id: id.as_str().into(),
            group: id.group(),
            applicable: id.applies_to(q),
            passed: verdicts.iter().any(|v| v.critic_id == *id && v.passed),
        })
        .collect();
    QueryRecord {
        query: q.to_json(),
        delivered: session.final_plan.is_some(),
        iterations_used: session.iterations_used,
        outcomes,
    }
}

pub fn evaluate_corpus(label: &str, sessions: &[SessionResult], sb: &Sandbox) -> EvalReport {
    let max_iterations = sessions.iter().map(|s| s.header.config.max_iterations).max().unwrap_or(0);
    let records = sessions.iter().map(|s| query_record(s, sb)).collect();
    let mut report = aggregate(label, records, max_iterations);
    report.critic_frequency = critic_frequency(sessions);
    report.cooccurrence = critic_cooccurrence(sessions);
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Markdown,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "md" | "markdown" => Ok(ReportFormat::Markdown),
            other => Err(format!("unknown report format `{other}`")),
        }
    }
}

/// Percentage with at most two decimals and no trailing zeros.
pub fn format_pct(v: f64) -> String {
    let s = format!("{v:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

const COLUMNS: [&str; 6] =
    ["Delivery Rate", "Commonsense Micro", "Commonsense Macro", "Hard Micro", "Hard Macro", "Final Pass Rate"];

impl EvalReport {
    pub fn columns(&self) -> [f64; 6] {
        [
            self.delivery_rate,
            self.commonsense_micro,
            self.commonsense_macro,
            self.hard_micro,
            self.hard_macro,
            self.final_pass_rate,
        ]
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn render_report(r: &EvalReport, format: ReportFormat) -> String {
    let values: Vec<String> = r.columns().iter().map(|v| format_pct(*v)).collect();
    match format {
        ReportFormat::Json => serde_json::to_string_pretty(r).expect("report serializes") + "\n",
        ReportFormat::Csv => {
            format!(
                "label,corpus_size,delivery_rate,commonsense_micro,commonsense_macro,hard_micro,hard_macro,final_pass_rate\n{},{},{}\n",
                csv_field(&r.label),
                r.corpus_size,
                values.join(",")
            )
        }
        ReportFormat::Markdown => {
            let mut out = format!("| Method | {} |\n|---|{}\n", COLUMNS.join(" | "), "---|".repeat(COLUMNS.len()));
            let _ = writeln!(out, "| {} | {} |", r.label, values.join(" | "));
            out
        }
    }
}

pub fn render_frequency_csv(counts: &[CriticCount]) -> String {
    let mut out = String::from("critic_id,group,count\n");
    for c in counts {
        let _ = writeln!(out, "{},{},{}", c.critic_id, c.group, c.count);
    }
    out
}

/// Labelled matrix; `conditional` divides each row by its diagonal and
/// prints percentages.
pub fn render_cooccurrence_csv(m: &Cooccurrence, conditional: bool) -> String {
    let mut out = String::from("critic_id");
    for id in &m.critic_ids {
        out.push(',');
        out.push_str(id);
    }
    out.push('\n');
    let cond = m.conditional();
    for (i, id) in m.critic_ids.iter().enumerate() {
        out.push_str(id);
        for (j, count) in m.counts[i].iter().enumerate() {
            if conditional {
                let _ = write!(out, ",{}", format_pct(cond[i][j] * 100.0));
            } else {
                let _ = write!(out, ",{count}");
            }
        }
        out.push('\n');
    }
    out
}

pub fn render_pass_by_iteration_csv(rates: &[f64]) -> String {
    let mut out = String::from("iteration,final_pass_rate\n");
    for (k, r) in rates.iter().enumerate() {
        let _ = writeln!(out, "{},{}", k + 1, format_pct(*r));
    }
    out
}

/// Writes every report artifact into `dir`.
pub fn write_report_files(r: &EvalReport, dir: &Path) -> io::Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("report.json"), render_report(r, ReportFormat::Json))?;
    std::fs::write(dir.join("report.csv"), render_report(r, ReportFormat::Csv))?;
    std::fs::write(dir.join("report.md"), render_report(r, ReportFormat::Markdown))?;
    std::fs::write(dir.join("frequency.csv"), render_frequency_csv(&r.critic_frequency))?;
    std::fs::write(dir.join("cooccurrence.csv"), render_cooccurrence_csv(&r.cooccurrence, false))?;
    std::fs::write(dir.join("cooccurrence_conditional.csv"), render_cooccurrence_csv(&r.cooccurrence, true))?;
    std::fs::write(dir.join("pass_by_iteration.csv"), render_pass_by_iteration_csv(&r.pass_by_iteration))?;
    Ok(())
}
