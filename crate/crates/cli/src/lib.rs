//! The `mik` command-line front end.
//!
//! Exit codes: 0 on success, 1 when `--strict-exit` is set and the answer is
//! negative or blocked, 2 when input cannot be read, parsed, validated or
//! evaluated, 3 on usage errors.

mod report;

use std::collections::BTreeSet;
use std::fmt::Display;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use mik_core::lang::{
    parse_formula, parse_kb, parse_literals, parse_query, print_kb, ParseDiagnostic, SourceText,
};
use mik_core::model::{
    build_kb, extend_kb, Formula, KnowledgeBase, KnowledgeBaseDraft, Literal, RuleKind,
};
use mik_core::reason::{self, Example};
use mik_core::semantics::DEFAULT_MAX_ATOMS;
use mik_core::{Config, Model, Query, ReasonError, SemanticsError};
use serde_json::{json, Value};

pub use report::Report;

#[derive(Debug, Parser)]
#[command(
    name = "mik",
    version,
    about = "Material inference over .mik knowledge bases"
)]
struct Cli {
    /// Print one JSON object per answer instead of text
    #[arg(long, global = true)]
    json: bool,

    /// Exit with 1 when the answer is negative or blocked
    #[arg(long, global = true)]
    strict_exit: bool,

    /// Refuse knowledge bases with more atoms than this
    #[arg(long, global = true, value_name = "N", default_value_t = DEFAULT_MAX_ATOMS)]
    max_atoms: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse, validate, and report coherence and modal rules
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Print knowledge bases in canonical form (reads stdin without files)
    Fmt { files: Vec<PathBuf> },
    /// List the admissible worlds
    Worlds {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Only worlds satisfying this formula
        #[arg(long)]
        context: Option<String>,
    },
    /// Answer a query; the last argument is the query unless --query-file is given
    Query {
        #[arg(required = true, value_name = "FILES... QUERY")]
        args: Vec<String>,
        /// Read the query from a file
        #[arg(long, short = 'f')]
        query_file: Option<PathBuf>,
    },
    /// Rank candidate hypotheses for a set of observations
    Abduce {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Observed literals, comma separated
        #[arg(long)]
        obs: String,
        /// Candidate literals, comma separated
        #[arg(long)]
        candidates: String,
    },
    /// List the derivation paths from a formula through the implication graph
    Chain {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Start node, matched by canonical form
        #[arg(long)]
        from: String,
    },
    /// Necessary-condition classifier over a feature table
    Classify {
        #[command(subcommand)]
        action: Classify,
    },
}

#[derive(Debug, Subcommand)]
enum Classify {
    /// Learn the necessary features of a class
    Learn(TableArgs),
    /// Predict whether a feature set belongs to the class
    Predict {
        #[command(flatten)]
        table: TableArgs,
        /// Features of the instance, comma separated
        #[arg(long)]
        features: String,
    },
    /// Count true and false positives and negatives
    Confusion {
        #[command(flatten)]
        table: TableArgs,
        /// Evaluate on this table instead of the training table
        #[arg(long)]
        data: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct TableArgs {
    /// Table with lines `name: feature, ... ; label`
    table: PathBuf,
    /// Class label to learn
    #[arg(long)]
    class: String,
    /// Train only on these instances (default: all)
    #[arg(long, value_delimiter = ',')]
    train: Vec<String>,
}

enum Failure {
    Usage(String),
    Input(Vec<String>),
}

impl Failure {
    fn input(message: impl Display) -> Self {
        Failure::Input(vec![message.to_string()])
    }
}

impl From<SemanticsError> for Failure {
    fn from(e: SemanticsError) -> Self {
        Failure::input(e)
    }
}

impl From<ReasonError> for Failure {
    fn from(e: ReasonError) -> Self {
        Failure::input(e)
    }
}

type Outcome = Result<Vec<Report>, Failure>;

/// Runs one invocation and returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let config = Config::default().with_max_atoms(cli.max_atoms);
    let outcome = match &cli.command {
        Command::Fmt { files } => fmt(files, stdin),
        command => dispatch(command, &config),
    };
    match outcome {
        Ok(reports) => {
            let mut negative = false;
            for r in &reports {
                negative |= !r.positive;
                let text = if cli.json {
                    format!("{}\n", r.to_json())
                } else {
                    r.to_text()
                };
                if out.write_all(text.as_bytes()).is_err() {
                    return 2;
                }
            }
            if cli.strict_exit && negative {
                1
            } else {
                0
            }
        }
        Err(Failure::Usage(message)) => {
            let _ = writeln!(err, "mik: usage error: {message}");
            3
        }
        Err(Failure::Input(lines)) => {
            for line in lines {
                let _ = writeln!(err, "mik: {line}");
            }
            2
        }
    }
}

fn dispatch(command: &Command, config: &Config) -> Outcome {
    match command {
        Command::Check { files } => check(&load(files)?, config),
        Command::Fmt { .. } => unreachable!("handled by the caller"),
        Command::Worlds { files, context } => {
            let kb = load(files)?;
            let context = context
                .as_deref()
                .map(|c| formula(c, "--context"))
                .transpose()?;
            worlds(&kb, config, context.as_ref())
        }
        Command::Query { args, query_file } => {
            let (files, text, origin) = match query_file {
                Some(path) => (args.as_slice(), read(path)?, path.display().to_string()),
                None => match args.split_last() {
                    Some((q, files)) if !files.is_empty() => {
                        (files, q.clone(), "<query>".to_string())
                    }
                    _ => {
                        return Err(Failure::Usage(
                            "query needs at least one knowledge-base file and a query".into(),
                        ))
                    }
                },
            };
            let files: Vec<PathBuf> = files.iter().map(PathBuf::from).collect();
            let kb = load(&files)?;
            let src = SourceText::new(origin, text);
            let query = parse_query(&src).map_err(|d| diagnostics(&src, d))?;
            answer(&kb, config, &query)
        }
        Command::Abduce {
            files,
            obs,
            candidates,
        } => {
            let kb = load(files)?;
            let observations = literals(obs, "--obs")?;
            let candidates = literals(candidates, "--candidates")?;
            let query = Query::Abduce {
                observations,
                candidates,
            };
            answer(&kb, config, &query)
        }
        Command::Chain { files, from } => {
            let kb = load(files)?;
            let query = Query::Chain(formula(from, "--from")?);
            answer(&kb, config, &query)
        }
        Command::Classify { action } => classify(action),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn diagnostics(src: &SourceText, diags: Vec<ParseDiagnostic>) -> Failure {
    Failure::Input(diags.iter().map(|d| d.render(src)).collect())
}

fn parse_file(path: &Path) -> Result<KnowledgeBaseDraft, Failure> {
    let src = SourceText::new(path.display().to_string(), read(path)?);
    parse_kb(&src).map_err(|d| diagnostics(&src, d))
}

/// Loads files in order: the first is revision 1 and each later file adds
/// one revision on top of it.
fn load(files: &[PathBuf]) -> Result<KnowledgeBase, Failure> {
    let mut kb: Option<KnowledgeBase> = None;
    for path in files {
        let draft = parse_file(path)?;
        let next = match &kb {
            None => build_kb(&draft),
            Some(prev) => extend_kb(prev, &draft),
        };
        let next = next.map_err(|errors| {
            Failure::Input(
                errors
                    .iter()
                    .map(|e| format!("{}: error: {e}", path.display()))
                    .collect(),
            )
        })?;
        kb = Some(next);
    }
    kb.ok_or_else(|| Failure::Usage("no knowledge-base files given".into()))
}

fn formula(text: &str, origin: &str) -> Result<Formula, Failure> {
    let src = SourceText::new(origin, text);
    parse_formula(&src).map_err(|d| diagnostics(&src, d))
}

fn literals(text: &str, origin: &str) -> Result<Vec<Literal>, Failure> {
    let src = SourceText::new(origin, text);
    parse_literals(&src).map_err(|d| diagnostics(&src, d))
}

fn model<'kb>(kb: &'kb KnowledgeBase, config: &Config) -> Result<Model<'kb>, Failure> {
    Ok(Model::new(kb, config)?)
}

fn plural(n: usize, word: &str) -> String {
    if n == 1 {
        format!("{n} {word}")
    } else {
        format!("{n} {word}s")
    }
}

fn join<T: Display>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn strings<T: Display>(items: impl IntoIterator<Item = T>) -> Value {
    json!(items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>())
}

fn check(kb: &KnowledgeBase, config: &Config) -> Outcome {
    let m = model(kb, config)?;
    let coherent = m.coherent();
    let defeasible = kb.rules_of(RuleKind::Defeasible).count();
    let constraints = kb.declared_constraints().len();
    let modal = m.check_modal_rules()?;
    let mut text = format!(
        "{}; {}; {}\n",
        if coherent { "coherent" } else { "incoherent" },
        plural(defeasible, "defeasible rule"),
        plural(constraints, "constraint"),
    );
    let mut entries = Vec::new();
    for e in &modal.entries {
        let witness = e.witness.map(|w| modal.worlds.render(w));
        let line = match (&witness, e.vacuous, e.satisfied) {
            (_, true, _) => {
                "vacuously satisfied; the antecedent has no admissible world".to_string()
            }
            (Some(w), _, _) => format!("satisfied; witness {w}"),
            _ => "NOT satisfied".to_string(),
        };
        text.push_str(&format!("{}: {line}\n", e.label));
        entries.push(json!({
            "label": e.label,
            "satisfied": e.satisfied,
            "vacuous": e.vacuous,
            "witness": witness,
        }));
    }
    let report = Report::new(
        "check",
        if coherent { "coherent" } else { "incoherent" },
        kb.revision(),
    )
    .answer(coherent)
    .with("atoms", json!(kb.atoms().len()))
    .with("constraints", json!(constraints))
    .with("strict_rules", json!(kb.rules_of(RuleKind::Strict).count()))
    .with("defeasible_rules", json!(defeasible))
    .with("modal_rules", json!(entries))
    .text(text);
    let positive = coherent && modal.all_satisfied();
    Ok(vec![Report { positive, ..report }])
}

fn fmt(files: &[PathBuf], stdin: &mut dyn Read) -> Outcome {
    let kb = if files.is_empty() {
        let mut text = String::new();
        stdin
            .read_to_string(&mut text)
            .map_err(|e| Failure::input(format!("cannot read <stdin>: {e}")))?;
        let src = SourceText::stdin(text);
        let draft = parse_kb(&src).map_err(|d| diagnostics(&src, d))?;
        build_kb(&draft).map_err(|errors| {
            Failure::Input(
                errors
                    .iter()
                    .map(|e| format!("<stdin>: error: {e}"))
                    .collect(),
            )
        })?
    } else {
        load(files)?
    };
    let text = print_kb(&kb).content;
    Ok(vec![Report::new("fmt", "formatted", kb.revision())
        .answer(true)
        .with("text", json!(text))
        .text(text)])
}

fn worlds(kb: &KnowledgeBase, config: &Config, context: Option<&Formula>) -> Outcome {
    let m = model(kb, config)?;
    let set = m.worlds(context)?;
    let rendered: Vec<String> = set.iter().map(|w| set.render(w)).collect();
    let mut text: String = rendered.iter().map(|w| format!("{w}\n")).collect();
    text.push_str(&plural(set.len(), "world"));
    let query = match context {
        Some(c) => format!("worlds({c})"),
        None => "worlds".to_string(),
    };
    Ok(vec![Report::new(query, "worlds", kb.revision())
        .result(json!(set.len()))
        .with("atoms", strings(set.atoms()))
        .with("worlds", json!(rendered))
        .text(text)])
}

fn answer(kb: &KnowledgeBase, config: &Config, query: &Query) -> Outcome {
    let m = model(kb, config)?;
    let rev = kb.revision();
    let q = query.to_string();
    let report = match query {
        Query::Incoherent(set) => {
            let incoherent = m.incoherent(set)?;
            Report::new(q, if incoherent { "incoherent" } else { "coherent" }, rev)
                .answer(incoherent)
                .trace(m.explain_incoherence(set)?)
                .text(if incoherent { "INCOHERENT" } else { "COHERENT" })
        }
        Query::Entails {
            premises,
            conclusion,
        } => {
            let entailed = m.inc_entails(premises, conclusion)?;
            Report::new(q, if entailed { "entailed" } else { "not_entailed" }, rev)
                .answer(entailed)
                .trace(m.explain_entailment(premises, conclusion)?)
                .text(if entailed { "ENTAILED" } else { "NOT ENTAILED" })
        }
        Query::Counterfactual {
            premises,
            conclusion,
        } => {
            let cf = m.supports_counterfactual(premises, conclusion)?;
            Report::new(
                q,
                if cf.supported {
                    "supported"
                } else {
                    "unsupported"
                },
                rev,
            )
            .answer(cf.supported)
            .trace(m.explain_entailment(premises, conclusion)?)
            .with("sentence", json!(cf.sentence))
            .text(cf.sentence)
        }
        Query::Possible { formula, context } => {
            let a = m.possible(formula, context.as_ref())?;
            let witness = a.witness.as_ref().map(|w| format!("{{{}}}", join(w)));
            let mut text = match &witness {
                Some(w) => format!("POSSIBLE; witness {w}"),
                None => "NOT POSSIBLE".to_string(),
            };
            if a.vacuous() {
                text.push_str("; the context has no admissible world");
            }
            Report::new(q, if a.holds { "possible" } else { "not_possible" }, rev)
                .answer(a.holds)
                .with("context_worlds", json!(a.context_worlds))
                .with("witness", json!(witness))
                .text(text)
        }
        Query::Necessary { formula, context } => {
            let a = m.necessary(formula, context.as_ref())?;
            let witness = a.witness.as_ref().map(|w| format!("{{{}}}", join(w)));
            let mut text = match &witness {
                Some(w) => format!("NOT NECESSARY; counterexample {w}"),
                None => "NECESSARY".to_string(),
            };
            if a.vacuous() {
                text.push_str("; vacuously, the context has no admissible world");
            }
            Report::new(
                q,
                if a.holds {
                    "necessary"
                } else {
                    "not_necessary"
                },
                rev,
            )
            .answer(a.holds)
            .with("context_worlds", json!(a.context_worlds))
            .with("counterexample", json!(witness))
            .text(text)
        }
        Query::Defeasible { goal, facts } => {
            let v = m.defeasible_query(facts, goal)?;
            let mut r = Report::new(q, v.kind.as_str(), rev)
                .answer(v.kind.holds())
                .trace(v.trace.iter().map(ToString::to_string).collect())
                .text(v.to_string());
            if let Some(d) = &v.defeater {
                r = r.with("defeater", json!(d));
            }
            r
        }
        Query::Weight { subject, reference } => {
            let w = reason::weight(&m, subject, reference)?;
            let list = |xs: &[Literal]| {
                if xs.is_empty() {
                    "none".to_string()
                } else {
                    join(xs)
                }
            };
            Report::new(q, "weight", rev)
                .result(json!(w.value.to_string()))
                .with("compatible", strings(&w.compatible))
                .with("incompatible", strings(&w.incompatible))
                .text(format!(
                    "{} (compatible: {}; incompatible: {})",
                    w.value,
                    list(&w.compatible),
                    list(&w.incompatible)
                ))
        }
        Query::Abduce {
            observations,
            candidates,
        } => {
            let ranking = reason::abduce(&m, observations, candidates)?;
            let mut text = String::new();
            let mut rows = Vec::new();
            for h in &ranking.hypotheses {
                let status = if h.coherent {
                    ""
                } else {
                    "INCOHERENT with the observations; "
                };
                text.push_str(&format!(
                    "{} {}: {status}consilience {}, simplicity {}, explains {{{}}}\n",
                    h.rank,
                    h.hypothesis,
                    h.consilience,
                    h.simplicity,
                    join(&h.explained)
                ));
                rows.push(json!({
                    "rank": h.rank,
                    "hypothesis": h.hypothesis.to_string(),
                    "coherent": h.coherent,
                    "consilience": h.consilience,
                    "simplicity": h.simplicity,
                    "explained": strings(&h.explained),
                    "auxiliary": strings(&h.auxiliary),
                }));
            }
            let best = ranking.best().map(|h| h.hypothesis.to_string());
            Report::new(q, "ranking", rev)
                .result(json!(best))
                .with("ranking", json!(rows))
                .text(text)
        }
        Query::Chain(start) => {
            let paths = reason::chain(&m, start)?;
            let mut text = String::new();
            let mut rows = Vec::new();
            for p in &paths {
                let roles = join(p.edges.iter().map(|e| {
                    let lifted = if e.lifted { " (lifted)" } else { "" };
                    format!("{} {}{lifted}", e.label, e.role.as_str())
                }));
                text.push_str(&format!("{p}\n  {roles}\n"));
                rows.push(json!({
                    "nodes": p.nodes().iter().map(|(f, modal)| json!({
                        "formula": f.to_string(),
                        "modal": modal,
                    })).collect::<Vec<_>>(),
                    "edges": p.edges.iter().map(|e| json!({
                        "label": e.label,
                        "kind": e.kind.keyword(),
                        "role": e.role.as_str(),
                        "lifted": e.lifted,
                    })).collect::<Vec<_>>(),
                }));
            }
            if paths.is_empty() {
                text = format!("no paths from {}", start.canonical());
            }
            Report::new(q, "paths", rev)
                .result(json!(paths.len()))
                .with("paths", json!(rows))
                .text(text)
        }
        Query::Classify { class, features } => {
            let c = reason::classify_kb(&m, class, features)?;
            let text = if c.predicted {
                format!(
                    "{class}: CLASSIFIED (necessary: {{{}}})",
                    join(&c.necessary)
                )
            } else {
                format!(
                    "{class}: NOT CLASSIFIED (missing: {{{}}})",
                    join(&c.missing)
                )
            };
            Report::new(
                q,
                if c.predicted {
                    "classified"
                } else {
                    "not_classified"
                },
                rev,
            )
            .answer(c.predicted)
            .with("necessary", strings(&c.necessary))
            .with("missing", strings(&c.missing))
            .text(text)
        }
    };
    Ok(vec![report])
}

fn table(path: &Path) -> Result<Vec<Example>, Failure> {
    reason::parse_table(&read(path)?)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn train(args: &TableArgs) -> Result<(Vec<Example>, reason::FeatureModel), Failure> {
    let rows = table(&args.table)?;
    let training: Vec<Example> = if args.train.is_empty() {
        rows.clone()
    } else {
        let mut picked = Vec::new();
        for name in &args.train {
            let row = rows.iter().find(|e| e.name == *name).ok_or_else(|| {
                Failure::input(format!(
                    "{}: no instance named `{name}`",
                    args.table.display()
                ))
            })?;
            picked.push(row.clone());
        }
        picked
    };
    let model = reason::learn_necessary(&training, &args.class)?;
    Ok((rows, model))
}

fn classify(action: &Classify) -> Outcome {
    let report = match action {
        Classify::Learn(args) => {
            let (_, model) = train(args)?;
            Report::new(format!("learn({})", args.class), "feature_model", 0)
                .result(strings(&model.necessary))
                .with("training", json!(model.training))
                .text(format!(
                    "necessary for {}: {{{}}}\ntrained on: {}",
                    model.class,
                    join(&model.necessary),
                    join(&model.training)
                ))
        }
        Classify::Predict {
            table: args,
            features,
        } => {
            let (_, model) = train(args)?;
            let instance: BTreeSet<String> = features
                .split(',')
                .map(str::trim)
                .filter(|f| !f.is_empty())
                .map(String::from)
                .collect();
            let positive = reason::predict(&model, &instance);
            let missing: Vec<&String> = model.necessary.difference(&instance).collect();
            let text = if positive {
                format!("{}: POSITIVE", model.class)
            } else {
                format!(
                    "{}: NEGATIVE (missing: {{{}}})",
                    model.class,
                    join(&missing)
                )
            };
            Report::new(
                format!("predict({})", args.class),
                if positive { "positive" } else { "negative" },
                0,
            )
            .answer(positive)
            .with("necessary", strings(&model.necessary))
            .with("missing", strings(missing))
            .text(text)
        }
        Classify::Confusion { table: args, data } => {
            let (rows, model) = train(args)?;
            let dataset = match data {
                Some(path) => table(path)?,
                None => rows,
            };
            let c = reason::confusion(&model, &dataset);
            Report::new(format!("confusion({})", args.class), "confusion", 0)
                .result(json!({"tp": c.tp, "fp": c.fp, "tn": c.tn, "fn": c.fn_}))
                .with("necessary", strings(&model.necessary))
                .text(format!("TP {} FP {} TN {} FN {}", c.tp, c.fp, c.tn, c.fn_))
        }
    };
    Ok(vec![report])
}
