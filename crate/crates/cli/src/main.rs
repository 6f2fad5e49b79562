use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use vertexlab::partial::partial_vertices;
use vertexlab::pistructure::navarro_vertices;
use vertexlab::verify::overall_status;
use vertexlab::{
    ipi, irreducibles, load_group, normal_nucleus, run_checks, Caps, Character, CharacterTable, Check, CorpusOptions,
    Group, Manifest, PiSet, Status,
};

/// Exact character theory of π-separable groups: vertices, π-partial characters and lifts.
#[derive(Parser, Debug)]
#[command(name = "vertexlab", version, about)]
struct Cli {
    /// Refuse groups with more elements than this.
    #[arg(long, global = true)]
    cap_order: Option<usize>,

    /// Refuse groups with more subgroups than this.
    #[arg(long, global = true)]
    cap_subgroups: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the character table.
    Table { group: PathBuf },
    /// Print the normal nucleus recursion of one irreducible character.
    Nucleus {
        group: PathBuf,
        /// Row of the character table.
        #[arg(long = "char")]
        index: usize,
        #[command(flatten)]
        pi: PiArgs,
    },
    /// Print a canonical Navarro vertex for every irreducible character.
    Vertices {
        group: PathBuf,
        #[command(flatten)]
        pi: PiArgs,
    },
    /// Print the irreducible π-partial characters, their lifts and vertices.
    Ipi {
        group: PathBuf,
        #[command(flatten)]
        pi: PiArgs,
    },
    /// Run checks on one group and report the results as JSON.
    Verify {
        group: PathBuf,
        #[command(flatten)]
        pi: PiArgs,
        /// Comma-separated check ids; `lemmas` and `all` select groups of checks.
        #[arg(long, default_value = "all")]
        check: String,
    },
    /// Run checks over a corpus manifest.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand, Debug)]
enum CorpusAction {
    /// Run every selected check on every entry and π-set.
    Run {
        manifest: PathBuf,
        /// Worker threads (defaults to one per core).
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, default_value = "all")]
        check: String,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct PiArgs {
    /// The primes in π, e.g. `2,3`.
    #[arg(long)]
    pi: Option<String>,
    /// A single prime p, taking π = p′.
    #[arg(long)]
    pi_complement: Option<u64>,
}

impl PiArgs {
    fn resolve(&self) -> anyhow::Result<PiSet> {
        match (&self.pi, self.pi_complement) {
            (Some(s), None) => s.parse().map_err(|e: String| anyhow!(e)),
            (None, Some(p)) if vertexlab::arith::is_prime(p) => Ok(PiSet::complement_of(p)),
            (None, Some(p)) => bail!("{p} is not a prime"),
            _ => bail!("give exactly one of --pi and --pi-complement"),
        }
    }
}

/// Failure before any check ran: bad arguments, unreadable files or unsupported groups.
#[derive(Debug)]
struct InputError(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.into())
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let caps = caps_from(&cli);
    match run(cli.command, caps) {
        Ok(code) => ExitCode::from(code),
        Err(InputError(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn caps_from(cli: &Cli) -> Caps {
    let base = Caps::default();
    Caps { order: cli.cap_order.unwrap_or(base.order), subgroups: cli.cap_subgroups.unwrap_or(base.subgroups) }
}

fn run(command: Command, caps: Caps) -> Result<u8, InputError> {
    match command {
        Command::Table { group } => {
            let g = open(&group, caps)?;
            print(&table_json(&g));
            Ok(0)
        }
        Command::Nucleus { group, index, pi } => {
            let (g, pi) = (open(&group, caps)?, pi.resolve()?);
            let chi = irreducibles(&g)
                .get(index)
                .cloned()
                .ok_or_else(|| anyhow!("character index {index} out of range (0..{})", g.class_count()))?;
            let nucleus = normal_nucleus(&chi, &pi)?;
            let steps: Vec<Value> = nucleus
                .steps
                .iter()
                .map(|s| {
                    json!({
                        "n": embedded(&g, &s.n),
                        "theta": values(&s.theta),
                        "t": embedded(&g, &s.t),
                        "psi": values(&s.psi),
                    })
                })
                .collect();
            print(&json!({
                "group": g.name(),
                "pi": pi.to_string(),
                "char": index,
                "steps": steps,
                "w": embedded(&g, &nucleus.w),
                "gamma": values(&nucleus.gamma),
            }));
            Ok(0)
        }
        Command::Vertices { group, pi } => {
            let (g, pi) = (open(&group, caps)?, pi.resolve()?);
            let vertices = navarro_vertices(&g, &pi)?;
            let rows: Vec<Value> = vertices
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    json!({
                        "char": i,
                        "q": v.q.elements(),
                        "delta": values(&v.delta),
                        "linear": v.is_linear(),
                    })
                })
                .collect();
            print(&json!({ "group": g.name(), "pi": pi.to_string(), "vertices": rows }));
            Ok(0)
        }
        Command::Ipi { group, pi } => {
            let (g, pi) = (open(&group, caps)?, pi.resolve()?);
            let set = ipi(&g, &pi)?;
            let vertices = partial_vertices(&g, &pi)?;
            let members: Vec<Value> = set
                .members
                .iter()
                .zip(&set.lifts)
                .zip(vertices.iter())
                .map(|((phi, lifts), q)| {
                    json!({
                        "degree": phi.degree(),
                        "values": phi,
                        "lifts": lifts,
                        "vertex": q.elements(),
                    })
                })
                .collect();
            print(&json!({
                "group": g.name(),
                "pi": pi.to_string(),
                "pi_classes": vertexlab::partial::pi_classes(&g, &pi),
                "members": members,
            }));
            Ok(0)
        }
        Command::Verify { group, pi, check } => {
            let (g, pi) = (open(&group, caps)?, pi.resolve()?);
            let checks = Check::parse_selector(&check)?;
            let results = run_checks(&g, &pi, &checks);
            print(&serde_json::to_value(&results)?);
            Ok(if overall_status(&results) == Status::Fail { 1 } else { 0 })
        }
        Command::Corpus { action: CorpusAction::Run { manifest, jobs, check } } => {
            let m = Manifest::load(&manifest)?;
            let opts = CorpusOptions { checks: Check::parse_selector(&check)?, jobs, caps };
            let report = vertexlab::corpus_run(&m, &opts);
            emit(&report.to_json());
            Ok(report.exit_code() as u8)
        }
    }
}

fn open(path: &Path, caps: Caps) -> anyhow::Result<Arc<Group>> {
    load_group(path, caps).with_context(|| format!("loading {}", path.display()))
}

/// Writes to stdout, ignoring a reader that went away (e.g. `| head`).
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn print(v: &Value) {
    emit(&serde_json::to_string_pretty(v).expect("JSON values serialise"));
}

fn values(c: &Character) -> Value {
    json!(c.values())
}

/// A subgroup given as a group of its own, as sorted indices into `g`.
fn embedded(g: &Group, h: &Group) -> Value {
    json!(g.embed(h).expect("subgroup of the ambient group").elements())
}

fn table_json(g: &Arc<Group>) -> Value {
    let table = CharacterTable::of(g);
    let classes: Vec<Value> = g
        .classes()
        .iter()
        .map(|c| {
            json!({
                "representative": g.element(c.representative).images(),
                "size": c.size(),
                "order": c.order,
            })
        })
        .collect();
    json!({
        "group": g.name(),
        "order": g.order(),
        "classes": classes,
        "characters": table.rows.iter().map(values).collect::<Vec<_>>(),
    })
}
