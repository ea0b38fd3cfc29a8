//! `imstit`: command-line front end for the STIT imagination logic
//! workbench.
//!
//! Exit codes are a stable contract: 0 for the positive outcome (true /
//! valid / accepted / found / all-pass), 1 for the negative one, 2 for
//! errors.

use clap::{Parser, Subcommand, ValueEnum};
use imstit_core::formula::{parse, AgentId};
use imstit_core::model::{EnumError, ImaginationModel, ModelBounds, PointRef, PropPolicy};
use imstit_core::proof::{parse_proof, Verdict};
use imstit_core::semantics::{extension, satisfies_traced, find_countermodel, SearchOutcome};
use imstit_core::soundness::random_soundness_sweep;
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "imstit",
    about = "Workbench for the STIT logic of imagination",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Props {
    All,
    Definable,
}

#[derive(clap::Args)]
struct BoundsArgs {
    /// Maximum number of moments per generated model
    #[arg(long, default_value_t = 3)]
    max_moments: usize,
    /// Maximum size of a neighborhood family
    #[arg(long, default_value_t = 2)]
    max_family: usize,
    /// Candidate-proposition policy
    #[arg(long, value_enum, default_value_t = Props::All)]
    props: Props,
    /// Lift the hard caps (6 moments, 3 agents, family 3, stream cap)
    #[arg(long)]
    unsafe_bounds: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula on a model file at a point
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        formula: String,
        /// Evaluation point as MOMENT:HISTORY_INDEX, e.g. m0:0
        #[arg(long)]
        point: String,
        /// Print the clause-by-clause trace
        #[arg(long)]
        trace: bool,
        /// Also print the formula's full extension
        #[arg(long)]
        extension: bool,
        /// Evaluate even if the model fails validation
        #[arg(long)]
        force: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check the frame conditions of a model file
    Validate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Verify a proof file
    Prove {
        proof: PathBuf,
        /// Agents, when the file has no agents: header
        #[arg(long, value_delimiter = ',')]
        agents: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Search for a bounded countermodel of a formula
    Search {
        #[arg(long)]
        formula: String,
        /// Agent pool for generated models (default: the formula's)
        #[arg(long, value_delimiter = ',')]
        agents: Vec<String>,
        /// Write the countermodel to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        bounds: BoundsArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Fuzz axiom and rule soundness over random valid models
    Fuzz {
        #[arg(long, default_value_t = 100)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Agent pool for generated models
        #[arg(long, value_delimiter = ',', default_value = "a,b")]
        agents: Vec<String>,
        #[command(flatten)]
        bounds: BoundsArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            2
        }
    };
    ExitCode::from(code)
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Eval {
            model,
            formula,
            point,
            trace,
            extension: want_extension,
            force,
            format,
        } => cmd_eval(model, &formula, &point, trace, want_extension, force, format),
        Command::Validate { model, format } => cmd_validate(model, format),
        Command::Prove {
            proof,
            agents,
            format,
        } => cmd_prove(proof, &agents, format),
        Command::Search {
            formula,
            agents,
            out,
            bounds,
            format,
        } => cmd_search(&formula, &agents, out, &bounds, format),
        Command::Fuzz {
            count,
            seed,
            agents,
            bounds,
            format,
        } => cmd_fuzz(count, seed, &agents, &bounds, format),
    }
}

fn load_model(path: &PathBuf) -> Result<ImaginationModel, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    ImaginationModel::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn history_table(model: &ImaginationModel) -> Vec<String> {
    model
        .histories()
        .iter()
        .enumerate()
        .map(|(i, h)| {
            let chain = h
                .moments
                .iter()
                .map(|m| m.as_str())
                .collect::<Vec<_>>()
                .join(" < ");
            format!("h{i} = [{chain}]")
        })
        .collect()
}

fn parse_point(text: &str) -> Result<PointRef, String> {
    let (moment, idx) = text
        .rsplit_once(':')
        .ok_or_else(|| format!("bad point `{text}`: expected MOMENT:HISTORY_INDEX"))?;
    let history: usize = idx
        .parse()
        .map_err(|_| format!("bad history index in `{text}`"))?;
    Ok(PointRef::new(moment, history))
}

fn cmd_eval(
    model_path: PathBuf,
    formula_text: &str,
    point_text: &str,
    want_trace: bool,
    want_extension: bool,
    force: bool,
    format: Format,
) -> Result<u8, String> {
    let model = load_model(&model_path)?;
    let report = model.validate();
    if !report.is_clean() {
        if force {
            eprintln!("warning: model fails validation; evaluating anyway (--force)");
            for v in &report.violations {
                eprintln!("warning: {v}");
            }
        } else {
            return Err(format!("model fails validation:\n{report}"));
        }
    }
    let formula = parse(formula_text, model.agents()).map_err(|e| e.to_string())?;
    let desugared = formula.desugar();
    let point = parse_point(point_text)?;

    let result = satisfies_traced(&model, &point, &desugared).map_err(|e| e.to_string())?;
    let ext = want_extension.then(|| extension(&model, &desugared).points(&model));

    match format {
        Format::Text => {
            for line in history_table(&model) {
                println!("{line}");
            }
            println!("formula: {formula}");
            if formula != desugared {
                println!("desugared: {desugared}");
            }
            if want_trace {
                for step in result.trace.as_deref().unwrap_or_default() {
                    println!(
                        "  {} | {} | {} | {}",
                        step.point, step.formula, step.clause, step.value
                    );
                }
            }
            if let Some(points) = &ext {
                let listed = points.iter().map(|p| p.to_string()).collect::<Vec<_>>();
                println!("extension: {{{}}}", listed.join(", "));
            }
            println!("{}", result.value);
        }
        Format::Json => {
            let mut obj = json!({
                "histories": history_table(&model),
                "formula": formula.to_string(),
                "desugared": desugared.to_string(),
                "point": point.to_string(),
                "value": result.value,
            });
            if want_trace {
                obj["trace"] = json!(result
                    .trace
                    .as_deref()
                    .unwrap_or_default()
                    .iter()
                    .map(|s| json!({
                        "point": s.point.to_string(),
                        "formula": s.formula.to_string(),
                        "clause": s.clause,
                        "value": s.value,
                    }))
                    .collect::<Vec<_>>());
            }
            if let Some(points) = &ext {
                obj["extension"] =
                    json!(points.iter().map(|p| p.to_string()).collect::<Vec<_>>());
            }
            println!("{}", serde_json::to_string_pretty(&obj).unwrap());
        }
    }
    Ok(if result.value { 0 } else { 1 })
}

fn cmd_validate(model_path: PathBuf, format: Format) -> Result<u8, String> {
    let model = load_model(&model_path)?;
    let report = model.validate();
    match format {
        Format::Text => {
            for line in history_table(&model) {
                println!("{line}");
            }
            println!("{report}");
        }
        Format::Json => {
            let obj = json!({
                "histories": history_table(&model),
                "ok": report.is_clean(),
                "violations": report
                    .violations
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&obj).unwrap());
        }
    }
    Ok(if report.is_clean() { 0 } else { 1 })
}

fn cmd_prove(proof_path: PathBuf, agents: &[String], format: Format) -> Result<u8, String> {
    let text = std::fs::read_to_string(&proof_path)
        .map_err(|e| format!("cannot read {}: {e}", proof_path.display()))?;
    let default_agents: Vec<AgentId> =
        agents.iter().map(|a| AgentId::new(a.clone())).collect();
    let doc = parse_proof(&text, &default_agents).map_err(|e| e.to_string())?;
    let verdict = imstit_core::check_proof(&doc.proof);
    match format {
        Format::Text => match &verdict {
            Verdict::Accepted {
                formula,
                premise_free,
            } => {
                println!("Accepted: {formula}");
                if *premise_free {
                    println!("premise-free theorem");
                }
            }
            Verdict::Rejected { line, reason } => {
                println!("Rejected at line {line}: {reason}");
            }
        },
        Format::Json => {
            let obj = match &verdict {
                Verdict::Accepted {
                    formula,
                    premise_free,
                } => json!({
                    "accepted": true,
                    "formula": formula.to_string(),
                    "premise_free": premise_free,
                }),
                Verdict::Rejected { line, reason } => json!({
                    "accepted": false,
                    "line": line,
                    "reason": reason.to_string(),
                }),
            };
            println!("{}", serde_json::to_string_pretty(&obj).unwrap());
        }
    }
    Ok(if verdict.is_accepted() { 0 } else { 1 })
}

/// Lexical scan for the agent names a formula mentions, so the agent
/// pool can default to them.
fn scan_agents(text: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'[' {
            i += 1;
            while i < bytes.len() && bytes[i].is_ascii_whitespace() {
                i += 1;
            }
            if i < bytes.len() && matches!(bytes[i], b'c' | b'd' | b'i') {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_whitespace() {
                    i += 1;
                }
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                if i > start {
                    let name = text[start..i].to_string();
                    if !out.contains(&name) {
                        out.push(name);
                    }
                }
            }
        } else {
            i += 1;
        }
    }
    out
}

fn build_bounds(
    agents: Vec<String>,
    vars: Vec<String>,
    args: &BoundsArgs,
) -> Result<ModelBounds, String> {
    if !args.unsafe_bounds {
        if args.max_moments > 6 {
            return Err("--max-moments over 6 needs --unsafe-bounds".into());
        }
        if agents.len() > 3 {
            return Err("more than 3 agents needs --unsafe-bounds".into());
        }
        if args.max_family > 3 {
            return Err("--max-family over 3 needs --unsafe-bounds".into());
        }
    }
    let mut bounds = ModelBounds {
        max_moments: args.max_moments,
        agents: agents.into_iter().map(AgentId::new).collect(),
        vars,
        max_family: args.max_family,
        policy: match args.props {
            Props::All => PropPolicy::AllSubsets,
            Props::Definable => PropPolicy::Definable,
        },
        ..ModelBounds::default()
    };
    if args.unsafe_bounds {
        bounds.enumeration_cap = u64::MAX;
        bounds.max_histories = 64;
    }
    Ok(bounds)
}

fn bounds_echo(bounds: &ModelBounds) -> serde_json::Value {
    json!({
        "max_moments": bounds.max_moments,
        "agents": bounds.agents.iter().map(|a| a.as_str()).collect::<Vec<_>>(),
        "vars": bounds.vars,
        "max_family": bounds.max_family,
        "props": match bounds.policy {
            PropPolicy::AllSubsets => "all",
            PropPolicy::Definable => "definable",
        },
    })
}

fn cmd_search(
    formula_text: &str,
    agents_flag: &[String],
    out: Option<PathBuf>,
    bounds_args: &BoundsArgs,
    format: Format,
) -> Result<u8, String> {
    let agent_names: Vec<String> = if agents_flag.is_empty() {
        let scanned = scan_agents(formula_text);
        if scanned.is_empty() {
            vec!["a".to_string()]
        } else {
            scanned
        }
    } else {
        agents_flag.to_vec()
    };
    let agent_ids: Vec<AgentId> = agent_names.iter().map(|a| AgentId::new(a.clone())).collect();
    let formula = parse(formula_text, &agent_ids).map_err(|e| e.to_string())?;
    let mut vars = formula.variables();
    if vars.is_empty() {
        vars.push("p".to_string());
    }
    let bounds = build_bounds(agent_names, vars, bounds_args)?;

    let outcome = find_countermodel(&formula.desugar(), &bounds).map_err(|e| match e {
        EnumError::BoundsTooLarge { estimate, cap } => {
            format!("bounds too large: about {estimate} models, cap {cap}")
        }
        other => other.to_string(),
    })?;

    match outcome {
        SearchOutcome::Found { model, point } => {
            let model_json = model.to_json();
            match format {
                Format::Text => {
                    println!("countermodel found; refuting point: {point}");
                    for line in history_table(&model) {
                        println!("{line}");
                    }
                    if let Some(path) = &out {
                        std::fs::write(path, &model_json)
                            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
                        println!("written to {}", path.display());
                    } else {
                        println!("{model_json}");
                    }
                }
                Format::Json => {
                    let obj = json!({
                        "found": true,
                        "point": point.to_string(),
                        "model": serde_json::from_str::<serde_json::Value>(&model_json).unwrap(),
                    });
                    if let Some(path) = &out {
                        std::fs::write(path, &model_json)
                            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
                    }
                    println!("{}", serde_json::to_string_pretty(&obj).unwrap());
                }
            }
            Ok(0)
        }
        SearchOutcome::NotFound {
            bounds,
            models_checked,
        } => {
            match format {
                Format::Text => {
                    println!(
                        "no countermodel within bounds ({models_checked} models): {}",
                        bounds_echo(&bounds)
                    );
                }
                Format::Json => {
                    let obj = json!({
                        "found": false,
                        "models_checked": models_checked,
                        "bounds": bounds_echo(&bounds),
                    });
                    println!("{}", serde_json::to_string_pretty(&obj).unwrap());
                }
            }
            Ok(1)
        }
    }
}

fn cmd_fuzz(
    count: u64,
    seed: u64,
    agents: &[String],
    bounds_args: &BoundsArgs,
    format: Format,
) -> Result<u8, String> {
    if count == 0 {
        eprintln!("warning: --count 0 checks nothing");
    }
    let bounds = build_bounds(
        agents.to_vec(),
        vec!["p".to_string(), "q".to_string()],
        bounds_args,
    )?;
    let report = random_soundness_sweep(count, seed, &bounds).map_err(|e| e.to_string())?;
    let passed = report.passed();
    match format {
        Format::Text => {
            if let Some(failure) = &report.failure {
                println!(
                    "FAIL: {} instance `{}` is not valid at {} in:",
                    failure.kind, failure.instance, failure.point
                );
                println!("{}", failure.model.to_json());
            } else {
                println!(
                    "all axiom and rule instances valid: {} models, {} instances (seed {seed})",
                    report.models, report.instances
                );
            }
        }
        Format::Json => {
            let mut obj = json!({
                "passed": passed,
                "models": report.models,
                "instances": report.instances,
                "seed": seed,
            });
            if let Some(failure) = &report.failure {
                obj["failure"] = json!({
                    "kind": failure.kind,
                    "instance": failure.instance.to_string(),
                    "point": failure.point.to_string(),
                    "model": serde_json::from_str::<serde_json::Value>(
                        &failure.model.to_json()
                    )
                    .unwrap(),
                });
            }
            println!("{}", serde_json::to_string_pretty(&obj).unwrap());
        }
    }
    Ok(if passed { 0 } else { 1 })
}
