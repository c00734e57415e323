//! `modulo`: plan, evaluate, check and analyse travel-planning sessions.
//!
//! Exit status: 0 when the command's predicate holds, 1 when it does not
//! (a session or plan failed its critics), 2 for usage and input errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use modulo_core::critics::{catalog, emit_extraction_prompt, CriticSuite, Selector};
use modulo_core::evaluator::{
    evaluate_corpus, render_cooccurrence_csv, render_frequency_csv, render_pass_by_iteration_csv, render_report,
    trace_cooccurrence, trace_frequency, trace_pass_by_iteration, write_report_files, ReportFormat,
};
use modulo_core::generator::{GreedyGenerator, LlmConfig, LlmGenerator, PlanGenerator, ScriptedGenerator};
use modulo_core::metacontroller::{
    read_trace_jsonl, run_session, write_trace_jsonl, IterationTrace, SessionConfig, SessionResult,
    DEFAULT_MAX_ITERATIONS,
};
use modulo_core::plan::{parse_plan_text, resolve_query, Query};
use modulo_core::sandbox::{load_sandbox, Sandbox};

#[derive(Parser)]
#[command(name = "modulo", version, about = "Generate-test travel planning with plan critics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one planning session.
    Plan(PlanArgs),
    /// Run a session for every query of a corpus and write reports.
    Eval(EvalArgs),
    /// Judge a plan file against a query.
    Check(CheckArgs),
    /// Failure tallies from session trace files.
    Stats(StatsArgs),
    /// Print the extraction prompt for a critic.
    ExtractPrompt { critic_id: String },
    /// Inspect the critic catalog.
    Critics {
        #[command(subcommand)]
        command: CriticsCommand,
    },
}

#[derive(Subcommand)]
enum CriticsCommand {
    List {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct QueryArgs {
    /// JSON-lines query corpus.
    #[arg(long)]
    queries: Option<PathBuf>,
    /// A single query, inline.
    #[arg(long, conflicts_with = "queries")]
    query: Option<String>,
    /// Queries are natural-language requests rather than JSON.
    #[arg(long)]
    nl: bool,
}

#[derive(Args)]
struct SessionArgs {
    #[arg(long)]
    sandbox: PathBuf,
    /// llm, greedy or scripted:<file with a JSON array of replies>.
    #[arg(long, default_value = "llm")]
    generator: String,
    /// all, common, hard or json.
    #[arg(long, default_value = "all")]
    critics: Selector,
    #[arg(long, default_value_t = DEFAULT_MAX_ITERATIONS)]
    max_iters: u32,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Ask the generator to restate replies that contain no JSON.
    #[arg(long)]
    rewrite: bool,
    /// TOML endpoint settings; the key always comes from the environment.
    #[arg(long)]
    llm_config: Option<PathBuf>,
}

#[derive(Args)]
struct PlanArgs {
    #[command(flatten)]
    session: SessionArgs,
    #[command(flatten)]
    queries: QueryArgs,
    /// 1-based query number when reading a corpus.
    #[arg(long, default_value_t = 1)]
    index: usize,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    session: SessionArgs,
    #[command(flatten)]
    queries: QueryArgs,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: u32,
    /// Row label in the report.
    #[arg(long)]
    label: Option<String>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    sandbox: PathBuf,
    /// Plan file; any text with a JSON plan in it.
    #[arg(long)]
    plan: PathBuf,
    #[command(flatten)]
    queries: QueryArgs,
    #[arg(long, default_value_t = 1)]
    index: usize,
    #[arg(long, default_value = "all")]
    critics: Selector,
}

#[derive(Args)]
struct StatsArgs {
    /// Session trace files (JSON lines, one iteration per line).
    #[arg(required = true)]
    traces: Vec<PathBuf>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_MAX_ITERATIONS)]
    max_iters: u32,
}

enum GeneratorSpec {
    Llm(Arc<LlmGenerator>),
    Greedy,
    Scripted(Vec<String>),
}

impl GeneratorSpec {
    fn parse(name: &str, llm_config: Option<&Path>) -> Result<Self> {
        if name == "greedy" {
            return Ok(GeneratorSpec::Greedy);
        }
        if name == "llm" {
            let config = match llm_config {
                Some(path) => LlmConfig::from_toml(&read(path)?).map_err(|e| anyhow!("{}: {e}", path.display()))?,
                None => LlmConfig::default(),
            };
            return Ok(GeneratorSpec::Llm(Arc::new(LlmGenerator::new(config)?)));
        }
        if let Some(file) = name.strip_prefix("scripted:") {
            let path = Path::new(file);
            let replies: Vec<String> = serde_json::from_str(&read(path)?)
                .with_context(|| format!("{}: expected a JSON array of strings", path.display()))?;
            if replies.is_empty() {
                bail!("{}: the script has no replies", path.display());
            }
            return Ok(GeneratorSpec::Scripted(replies));
        }
        bail!("unknown generator `{name}` (expected llm, greedy or scripted:<file>)")
    }

    fn extractor(&self) -> Option<&dyn PlanGenerator> {
        match self {
            GeneratorSpec::Llm(g) => Some(g.as_ref()),
            _ => None,
        }
    }

    fn run(&self, q: &Query, sb: &Arc<Sandbox>, cfg: &SessionConfig) -> Result<SessionResult> {
        let result = match self {
            GeneratorSpec::Llm(g) => run_session(q, g.as_ref(), sb, cfg),
            GeneratorSpec::Greedy => {
                let g = GreedyGenerator::new(q.clone(), sb.clone()).with_config(cfg.critics.clone());
                run_session(q, &g, sb, cfg)
            }
            GeneratorSpec::Scripted(replies) => run_session(q, &ScriptedGenerator::new(replies.clone()), sb, cfg),
        };
        Ok(result?)
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn sandbox(dir: &Path) -> Result<Arc<Sandbox>> {
    if !dir.is_dir() {
        bail!("sandbox directory {} does not exist", dir.display());
    }
    let (sb, report) = load_sandbox(dir).with_context(|| format!("cannot load sandbox {}", dir.display()))?;
    for d in &report.diagnostics {
        eprintln!("warning: {}:{}: {}", d.file, d.line, d.message);
    }
    Ok(Arc::new(sb))
}

fn queries(args: &QueryArgs, extractor: Option<&dyn PlanGenerator>) -> Result<Vec<Query>> {
    let texts: Vec<String> = match (&args.query, &args.queries) {
        (Some(q), _) => vec![q.clone()],
        (None, Some(path)) => read(path)?.lines().filter(|l| !l.trim().is_empty()).map(String::from).collect(),
        (None, None) => bail!("give --query or --queries"),
    };
    texts
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let parsed = if args.nl {
                resolve_query(t, extractor, 2).map_err(anyhow::Error::from)
            } else {
                Query::from_json(t).map_err(anyhow::Error::from)
            };
            parsed.with_context(|| format!("query {}", i + 1))
        })
        .collect()
}

fn pick(mut all: Vec<Query>, index: usize) -> Result<Query> {
    let n = all.len();
    if index == 0 || index > n {
        bail!("query number {index} is out of range (corpus has {n})");
    }
    Ok(all.swap_remove(index - 1))
}

fn session_config(args: &SessionArgs) -> Result<SessionConfig> {
    if args.max_iters == 0 {
        bail!("--max-iters must be at least 1");
    }
    Ok(SessionConfig {
        selector: args.critics,
        max_iterations: args.max_iters,
        rewrite: args.rewrite,
        seed: args.seed,
        ..SessionConfig::default()
    })
}

fn write_traces(traces: &[IterationTrace], path: &Path) -> Result<()> {
    let file = fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    write_trace_jsonl(traces, std::io::BufWriter::new(file)).with_context(|| format!("cannot write {}", path.display()))
}

fn cmd_plan(args: PlanArgs) -> Result<bool> {
    let sb = sandbox(&args.session.sandbox)?;
    let cfg = session_config(&args.session)?;
    let gen = GeneratorSpec::parse(&args.session.generator, args.session.llm_config.as_deref())?;
    let q = pick(queries(&args.queries, gen.extractor())?, args.index)?;
    let result = gen.run(&q, &sb, &cfg)?;

    let out = &args.session.out;
    fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;
    write_traces(&result.traces, &out.join("session.jsonl"))?;
    let plan_path = out.join("plan.json");
    match &result.final_plan {
        Some(plan) => fs::write(&plan_path, serde_json::to_string_pretty(plan)? + "\n")?,
        None if plan_path.exists() => fs::remove_file(&plan_path)?,
        None => {}
    }
    if let Some(e) = &result.error {
        eprintln!("generator stopped: {e}");
    }
    println!(
        "iterations: {}  delivered: {}  all passed: {}",
        result.iterations_used, result.delivered, result.all_passed
    );
    if let Some(last) = result.traces.last() {
        for v in last.verdicts.iter().filter(|v| !v.passed) {
            println!("  {}", v.backprompt);
        }
    }
    Ok(result.all_passed)
}

fn cmd_eval(args: EvalArgs) -> Result<bool> {
    let sb = sandbox(&args.session.sandbox)?;
    let cfg = session_config(&args.session)?;
    let gen = GeneratorSpec::parse(&args.session.generator, args.session.llm_config.as_deref())?;
    let corpus = queries(&args.queries, gen.extractor())?;
    if corpus.is_empty() {
        bail!("the query corpus is empty");
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(args.jobs as usize).build()?;
    let sessions: Vec<SessionResult> =
        pool.install(|| corpus.par_iter().map(|q| gen.run(q, &sb, &cfg)).collect::<Result<_>>())?;

    let out = &args.session.out;
    let trace_dir = out.join("traces");
    fs::create_dir_all(&trace_dir).with_context(|| format!("cannot create {}", trace_dir.display()))?;
    for (i, s) in sessions.iter().enumerate() {
        write_traces(&s.traces, &trace_dir.join(format!("session-{:04}.jsonl", i + 1)))?;
        if let Some(e) = &s.error {
            eprintln!("query {}: generator stopped: {e}", i + 1);
        }
    }
    let label = args.label.unwrap_or_else(|| format!("{} [{}]", args.session.generator, cfg.selector));
    let report = evaluate_corpus(&label, &sessions, &sb);
    write_report_files(&report, out).with_context(|| format!("cannot write reports to {}", out.display()))?;
    print!("{}", render_report(&report, ReportFormat::Markdown));
    Ok(true)
}

fn cmd_check(args: CheckArgs) -> Result<bool> {
    let sb = sandbox(&args.sandbox)?;
    let q = pick(queries(&args.queries, None)?, args.index)?;
    let text = read(&args.plan)?;
    let parsed = parse_plan_text(&text);
    let verdicts = CriticSuite::new(args.critics).run(parsed.as_ref(), &q, &sb);
    for v in &verdicts {
        let status = if v.passed { "pass" } else { "fail" };
        println!("{}\t{}\t{status}\t{}", v.critic_id, v.group, v.backprompt);
    }
    Ok(verdicts.iter().all(|v| v.passed))
}

fn cmd_stats(args: StatsArgs) -> Result<bool> {
    let mut sessions = Vec::new();
    for path in &args.traces {
        let file = fs::File::open(path).with_context(|| format!("cannot open trace file {}", path.display()))?;
        let traces = read_trace_jsonl(std::io::BufReader::new(file))
            .with_context(|| format!("cannot parse trace file {}", path.display()))?;
        sessions.push(traces);
    }
    let all = || sessions.iter().flatten();
    let out = &args.out;
    fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;
    let cooc = trace_cooccurrence(all());
    let freq = render_frequency_csv(&trace_frequency(all()));
    fs::write(out.join("frequency.csv"), &freq)?;
    fs::write(out.join("cooccurrence.csv"), render_cooccurrence_csv(&cooc, false))?;
    fs::write(out.join("cooccurrence_conditional.csv"), render_cooccurrence_csv(&cooc, true))?;
    let rates = trace_pass_by_iteration(&sessions, args.max_iters);
    fs::write(out.join("pass_by_iteration.csv"), render_pass_by_iteration_csv(&rates))?;
    print!("{freq}");
    Ok(true)
}

fn cmd_critics(json: bool) -> Result<bool> {
    let entries = catalog();
    if json {
        println!("{}", serde_json::to_string_pretty(&entries)?);
    } else {
        for e in entries {
            println!("{:<24} {:<12} {}", e.id, e.group.to_string(), e.description);
        }
    }
    Ok(true)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Plan(a) => cmd_plan(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Check(a) => cmd_check(a),
        Command::Stats(a) => cmd_stats(a),
        Command::ExtractPrompt { critic_id } => {
            print!("{}", emit_extraction_prompt(&critic_id)?);
            Ok(true)
        }
        Command::Critics { command: CriticsCommand::List { json } } => cmd_critics(json),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
