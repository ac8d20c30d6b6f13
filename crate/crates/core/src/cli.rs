//! The `evstruct` command line. `execute` is the whole program; `main`
//! only prints its result.
//!
//! Exit codes: 0 when the computation succeeds and every checked property
//! holds, 1 when a property fails (the report carries a witness), 2 on
//! malformed input or usage.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::cells::{find_confusion, CellAnalysis, CellHost, Confusion};
use crate::error::Error;
use crate::eventset::EventSet;
use crate::io::{self, dot, Document};
use crate::prime::PrimeEs;
use crate::probability::{CellOrder, DistributionSource, LocallyRandomized};
use crate::stable::StableEs;
use crate::structure::{parse_event_list, EventStructure};
use crate::translation::{associated_es, binary_conflict_generable, theta, Generability};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(
    name = "evstruct",
    version,
    about = "Analyse event structures, branching cells and their probabilities"
)]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validity, sensible, conflict-driven, locally-finite, pre-regular and jump-free summary.
    Check { file: PathBuf },
    /// Branching cells enabled at a configuration.
    Cells {
        file: PathBuf,
        /// Comma-separated event ids; defaults to the empty configuration.
        #[arg(long)]
        at: Option<String>,
    },
    /// Decompose an R-stopped configuration into branching cells.
    Cover {
        file: PathBuf,
        #[arg(long)]
        config: String,
    },
    /// Translate a stable structure into its associated prime structure.
    Translate {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Likelihood and shadow probability of a configuration.
    Prob {
        file: PathBuf,
        #[arg(long)]
        config: String,
        #[command(flatten)]
        dist: DistArgs,
        /// Also list the global measure on maximal configurations.
        #[arg(long)]
        measure: bool,
    },
    /// Sample maximal runs and report empirical frequencies.
    Sample {
        file: PathBuf,
        #[arg(long)]
        runs: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        dist: DistArgs,
        /// Which enabled cell is resolved first at each step.
        #[arg(long, value_enum, default_value_t = Order::First)]
        order: Order,
    },
    /// Unfold a safe net into a prime event structure.
    Unfold {
        file: PathBuf,
        #[arg(long)]
        max_events: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Graphviz rendering, with the cells at a configuration as clusters.
    Dot {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        at: Option<String>,
    },
}

#[derive(Args, Debug)]
struct DistArgs {
    /// Distribution table (`.prob`); uniform when absent.
    #[arg(long, conflicts_with = "uniform")]
    dist: Option<PathBuf>,
    #[arg(long)]
    uniform: bool,
    /// Accept unfoldings that were cut off at their event limit.
    #[arg(long)]
    allow_truncated: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Order {
    First,
    Last,
}

/// A report is an ordered set of fields. The human form and the JSON form
/// are two renderings of the same fields.
#[derive(Debug, Default)]
struct Report {
    fields: Map<String, Value>,
    ok: bool,
    /// Printed verbatim in human mode instead of the fields.
    document: Option<String>,
}

impl Report {
    fn new() -> Self {
        Report {
            ok: true,
            ..Default::default()
        }
    }

    fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.fields.insert(key.to_string(), value.into());
    }

    /// Records a checked property; a failure makes the command exit 1.
    fn property(&mut self, key: &str, holds: bool) {
        self.ok &= holds;
        self.set(key, holds);
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::NotRStopped(_) | Error::Precondition(_) | Error::NotBinaryGenerable(_) => EXIT_PROPERTY,
        Error::Located { source, .. } => exit_code_for(source),
        _ => EXIT_INPUT,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: exit_code_for(&e),
            message: e.to_string(),
        }
    }
}

type Outcome = std::result::Result<Report, Failure>;

pub fn execute<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                CommandResult {
                    exit_code: code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                CommandResult {
                    exit_code: code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let json = cli.json;
    match run(cli.command) {
        Ok(report) => {
            let stdout = if json {
                let mut fields = report.fields;
                if let Some(doc) = report.document {
                    fields.insert("document".into(), doc.into());
                }
                serde_json::to_string_pretty(&Value::Object(fields)).expect("report serializes") + "\n"
            } else if let Some(doc) = report.document {
                doc
            } else {
                render(&report.fields, 0)
            };
            CommandResult {
                exit_code: if report.ok { EXIT_OK } else { EXIT_PROPERTY },
                stdout,
                stderr: String::new(),
            }
        }
        Err(f) => CommandResult {
            exit_code: f.code,
            stdout: if json {
                serde_json::to_string_pretty(&json!({ "error": f.message })).expect("serializes") + "\n"
            } else {
                String::new()
            },
            stderr: format!("error: {}\n", f.message),
        },
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Bool(true) => "YES".into(),
        Value::Bool(false) => "NO".into(),
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render(fields: &Map<String, Value>, indent: usize) -> String {
    let pad = " ".repeat(indent);
    let mut out = String::new();
    for (k, v) in fields {
        match v {
            Value::Array(items) if items.iter().all(|i| i.is_object()) && !items.is_empty() => {
                out += &format!("{pad}{k}:\n");
                for item in items {
                    let body = render(item.as_object().expect("object"), indent + 4);
                    let first = format!("{pad}  - {}", &body[indent + 4..]);
                    out += &first;
                }
            }
            Value::Array(items) => {
                let parts: Vec<String> = items.iter().map(scalar).collect();
                out += &format!("{pad}{k}: {}\n", parts.join(", "));
            }
            Value::Object(inner) => {
                out += &format!("{pad}{k}:\n");
                out += &render(inner, indent + 2);
            }
            other => out += &format!("{pad}{k}: {}\n", scalar(other)),
        }
    }
    out
}

fn load(path: &Path) -> std::result::Result<Document, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    io::parse(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> std::result::Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
}

enum Host {
    Es(PrimeEs),
    Ses(StableEs),
}

fn load_host(path: &Path) -> std::result::Result<Host, Failure> {
    match load(path)? {
        Document::Es(es, _) => Ok(Host::Es(es)),
        Document::Ses(ses, _) => Ok(Host::Ses(ses)),
        other => Err(Failure::input(format!(
            "{}: expected an es or ses document, found {}",
            path.display(),
            other.kind().keyword()
        ))),
    }
}

fn config_arg<H: EventStructure>(host: &H, list: Option<&str>) -> std::result::Result<EventSet, Failure> {
    let v = match list {
        Some(l) => parse_event_list(host.names(), l)?,
        None => EventSet::EMPTY,
    };
    host.check_configuration(v)?;
    Ok(v)
}

fn sets<H: EventStructure>(host: &H, xs: &[EventSet]) -> Vec<Value> {
    xs.iter().map(|&x| Value::from(host.show(x))).collect()
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Check { file } => check(&file),
        Command::Cells { file, at } => match load_host(&file)? {
            Host::Es(h) => cells(h, at.as_deref()),
            Host::Ses(h) => cells(h, at.as_deref()),
        },
        Command::Cover { file, config } => match load_host(&file)? {
            Host::Es(h) => cover(h, &config),
            Host::Ses(h) => cover(h, &config),
        },
        Command::Translate { file, output } => translate(&file, output.as_deref()),
        Command::Prob {
            file,
            config,
            dist,
            measure,
        } => match load_host(&file)? {
            Host::Es(h) => {
                refuse_truncated(&h, &dist)?;
                prob(h, &config, &dist, measure)
            }
            Host::Ses(h) => prob(h, &config, &dist, measure),
        },
        Command::Sample {
            file,
            runs,
            seed,
            dist,
            order,
        } => {
            let order = match order {
                Order::First => CellOrder::First,
                Order::Last => CellOrder::Last,
            };
            match load_host(&file)? {
                Host::Es(h) => {
                    refuse_truncated(&h, &dist)?;
                    sample(h, runs, seed, &dist, order)
                }
                Host::Ses(h) => sample(h, runs, seed, &dist, order),
            }
        }
        Command::Unfold {
            file,
            max_events,
            output,
        } => unfold(&file, max_events, output.as_deref()),
        Command::Dot { file, output, at } => {
            let text = match load_host(&file)? {
                Host::Es(h) => match at {
                    Some(l) => dot::es_cells_to_dot(&h, config_arg(&h, Some(&l))?)?,
                    None => dot::es_to_dot(&h),
                },
                Host::Ses(h) => match at {
                    Some(l) => dot::ses_cells_to_dot(&h, config_arg(&h, Some(&l))?)?,
                    None => dot::ses_to_dot(&h),
                },
            };
            emit(text, output.as_deref())
        }
    }
}

/// Prints `text`, or writes it to `output` and reports where it went.
fn emit(text: String, output: Option<&Path>) -> Outcome {
    let mut r = Report::new();
    match output {
        Some(path) => {
            write(path, &text)?;
            r.set("written", path.display().to_string());
        }
        None => r.document = Some(text),
    }
    Ok(r)
}

fn refuse_truncated(es: &PrimeEs, dist: &DistArgs) -> std::result::Result<(), Failure> {
    if es.is_truncated() && !dist.allow_truncated {
        return Err(Failure::input(format!(
            "`{}` is a truncated unfolding; cells near the cut may be incomplete (pass --allow-truncated to proceed)",
            es.name()
        )));
    }
    Ok(())
}

fn cell_properties<H: CellHost>(r: &mut Report, host: &H) {
    let analysis = CellAnalysis::new(host.clone());
    let lf = analysis.check_locally_finite();
    r.property("locally-finite", lf.holds);
    if !lf.holds {
        r.set("uncovered-events", host.show(lf.uncovered));
    }
    let pr = analysis.check_pre_regular();
    r.property("pre-regular", pr.holds);
    r.set("max-enabled", pr.max_enabled);
    match analysis.check_jump_free() {
        None => r.property("jump-free", true),
        Some(j) => {
            r.property("jump-free", false);
            let mut w = Map::new();
            w.insert("chain".into(), analysis.show_chain(&j.chain).into());
            if let Some(v) = j.config {
                w.insert("configuration".into(), host.show(v).into());
            }
            r.set("jump-witness", Value::Object(w));
        }
    }
    let overlaps = analysis.overlapping_cells();
    r.set(
        "overlapping-cells",
        overlaps
            .iter()
            .map(|&(a, b)| Value::from(format!("{} {}", host.show(a), host.show(b))))
            .collect::<Vec<_>>(),
    );
}

fn check(file: &Path) -> Outcome {
    check_document(&load(file)?)
}

/// The fields printed by `check`, in order, and whether every checked
/// property holds.
pub fn check_report(doc: &Document) -> (bool, Map<String, Value>) {
    let r = check_document(doc).unwrap_or_else(|_| Report::new());
    (r.ok, r.fields)
}

fn check_document(doc: &Document) -> Outcome {
    let mut r = Report::new();
    match doc {
        Document::Es(es, closure) => {
            r.set("kind", "es");
            r.set("name", es.name());
            r.set("valid", true);
            r.set("events", es.live().len());
            r.set("truncated", es.is_truncated());
            r.set("closure-added-causes", closure.added_causes.len());
            r.set("closure-added-conflicts", closure.added_conflicts.len());
            cell_properties(&mut r, es);
            let n = es.names().as_slice();
            let confusion = match find_confusion(es) {
                None => Value::Null,
                Some(Confusion::Symmetric(e, f, g)) => format!("symmetric {} - {} - {}", n[e], n[f], n[g]).into(),
                Some(Confusion::Asymmetric(e, f)) => format!("asymmetric {} - {}", n[e], n[f]).into(),
            };
            r.set("confusion", confusion);
        }
        Document::Ses(ses, report) => {
            r.set("kind", "ses");
            r.set("name", ses.name());
            r.set("valid", true);
            r.set("events", ses.live().len());
            r.set("dead-events", report.dead_events.clone());
            let cd = ses.check_conflict_driven();
            r.property("sensible", cd.sensible);
            if !cd.sensible {
                r.set("unreachable-consistent-sets", sets(ses, &cd.pruned));
            }
            r.property("conflict-driven", cd.holds());
            if let Some((f, selection)) = &cd.unresolved_inconsistency {
                r.set(
                    "unresolved-forbidden-set",
                    json!({ "set": ses.show(*f), "histories": sets(ses, selection) }),
                );
            }
            if let Some((e, f, v)) = cd.transient_immediate_conflict {
                let n = ses.names();
                r.set(
                    "transient-immediate-conflict",
                    json!({ "events": format!("{} {}", n.get(e), n.get(f)), "configuration": ses.show(v) }),
                );
            }
            let generable = binary_conflict_generable(&theta(ses));
            match generable {
                Generability::Binary(_) => r.set("binary-conflict-generable", true),
                Generability::Witness(w) => {
                    r.set("binary-conflict-generable", false);
                    r.set("generability-witness", theta(ses).show(w));
                }
            }
            cell_properties(&mut r, ses);
        }
        Document::Net(net) => {
            r.set("kind", "net");
            r.set("name", net.name.as_str());
            r.set("valid", true);
            r.set("places", net.places.len());
            r.set("transitions", net.transitions.len());
            r.set("arcs", net.arcs.len());
        }
        Document::Prob(p) => {
            r.set("kind", "prob");
            r.set("name", p.name.as_str());
            r.set("valid", true);
            r.set("cells", p.cells.len());
        }
    }
    Ok(r)
}

fn cells<H: CellHost>(host: H, at: Option<&str>) -> Outcome {
    let v = config_arg(&host, at)?;
    let analysis = CellAnalysis::new(host.clone());
    let found = analysis.enabled_cells(v)?;
    let mut r = Report::new();
    r.set("at", host.show(v));
    r.set(
        "cells",
        found
            .iter()
            .map(|c| json!({ "events": host.show(c.events), "omega": sets(&host, &c.maximal_configs) }))
            .collect::<Vec<_>>(),
    );
    Ok(r)
}

fn cover<H: CellHost>(host: H, config: &str) -> Outcome {
    let v = config_arg(&host, Some(config))?;
    let analysis = CellAnalysis::new(host.clone());
    let covering = analysis.covering(v)?;
    let mut r = Report::new();
    r.set("configuration", host.show(v));
    r.set(
        "steps",
        covering
            .steps
            .iter()
            .map(|s| {
                json!({
                    "cell": host.show(s.cell),
                    "enabled-at": host.show(s.enabled_at),
                    "choice": host.show(s.choice),
                })
            })
            .collect::<Vec<_>>(),
    );
    Ok(r)
}

fn translate(file: &Path, output: Option<&Path>) -> Outcome {
    let ses = match load(file)? {
        Document::Ses(ses, _) => ses,
        other => {
            return Err(Failure::input(format!(
                "{}: translate expects a ses document, found {}",
                file.display(),
                other.kind().keyword()
            )))
        }
    };
    let (es, _, _) = associated_es(&ses)?;
    let text = io::serialize_es(&es);
    let mut r = emit(text, output)?;
    r.set("events", es.live().len());
    Ok(r)
}

fn source(dist: &DistArgs, names: &crate::structure::Names) -> std::result::Result<DistributionSource, Failure> {
    match &dist.dist {
        None => Ok(DistributionSource::Uniform),
        Some(path) => match load(path)? {
            Document::Prob(table) => table
                .resolve(names)
                .map_err(|e| Failure::input(format!("{}: {e}", path.display()))),
            other => Err(Failure::input(format!(
                "{}: expected a prob document, found {}",
                path.display(),
                other.kind().keyword()
            ))),
        },
    }
}

fn prob<H: CellHost>(host: H, config: &str, dist: &DistArgs, measure: bool) -> Outcome {
    let v = config_arg(&host, Some(config))?;
    let src = source(dist, host.names())?;
    let show = host.clone();
    let lr = LocallyRandomized::attach(host, &src)?;
    let mut r = Report::new();
    r.set("configuration", show.show(v));
    r.set("likelihood", lr.likelihood(v)?);
    r.set("shadow-probability", lr.shadow_probability(v)?);
    if measure {
        let m = lr.global_measure()?;
        r.set("total", m.iter().map(|(_, p)| p).sum::<f64>());
        r.set(
            "measure",
            m.iter()
                .map(|&(w, p)| json!({ "configuration": show.show(w), "probability": p }))
                .collect::<Vec<_>>(),
        );
    }
    Ok(r)
}

fn sample<H: CellHost>(host: H, runs: usize, seed: u64, dist: &DistArgs, order: CellOrder) -> Outcome {
    if runs == 0 {
        return Err(Failure::input("--runs must be positive"));
    }
    let src = source(dist, host.names())?;
    let show = host.clone();
    let lr = LocallyRandomized::attach(host, &src)?;
    let freq = lr.sample_frequencies(runs, seed, order)?;
    let mut r = Report::new();
    r.set("runs", runs);
    r.set("seed", seed);
    r.set(
        "outcomes",
        freq.iter()
            .map(|&(w, k)| {
                json!({
                    "configuration": show.show(w),
                    "count": k,
                    "frequency": k as f64 / runs as f64,
                })
            })
            .collect::<Vec<_>>(),
    );
    Ok(r)
}

fn unfold(file: &Path, max_events: usize, output: Option<&Path>) -> Outcome {
    let net = match load(file)? {
        Document::Net(net) => net,
        other => {
            return Err(Failure::input(format!(
                "{}: unfold expects a net document, found {}",
                file.display(),
                other.kind().keyword()
            )))
        }
    };
    let (es, report) = io::unfold_net(&net, max_events)?;
    let mut r = emit(io::serialize_es(&es), output)?;
    r.set("events", report.events);
    r.set("conditions", report.conditions);
    r.set("truncated", report.truncated);
    Ok(r)
}
