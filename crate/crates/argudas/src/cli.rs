//! The `argudas` command line.
//!
//! Exit codes: 0 success, 2 usage or unreadable/malformed input, 3 input
//! that parses but fails validation, 4 unknown subject or scheme.

use std::ffi::OsString;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use argudas_core::schemes::{ExpertScore, SchemeCatalog};
use argudas_core::store::{Store, StoreError};
use argudas_core::{GeneId, InterpretationProfile, Mode, Query, Subject, TheilerStage, TissueId};
use clap::{Args, Parser, Subcommand};

use crate::load::{self, LoadError, Sources};
use crate::{render, service};

#[derive(Debug, Parser)]
#[command(
    name = "argudas",
    version,
    about = "Integrate gene-expression annotations and argue about them"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Load reference data and an annotation file, optionally writing a snapshot.
    Ingest(IngestArgs),
    /// Print the attribute report for one gene, tissue and stage.
    Argue(ArgueArgs),
    /// List annotations matching a gene and/or tissue.
    Query(QueryArgs),
    /// Inspect and score the argument scheme catalog.
    Schemes {
        #[command(subcommand)]
        command: SchemesCommand,
    },
    /// Check data files without ingesting them.
    Validate(ValidateArgs),
    /// Serve the HTTP API.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
struct SnapshotArg {
    /// Snapshot file.
    #[arg(long, env = "ARGUDAS_SNAPSHOT")]
    snapshot: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct IngestArgs {
    #[arg(long)]
    annotations: PathBuf,
    /// One anatomy file per Theiler stage.
    #[arg(long, required = true, num_args = 1..)]
    ontology: Vec<PathBuf>,
    #[arg(long)]
    alignment: PathBuf,
    #[arg(long)]
    thresholds: PathBuf,
    /// Scheme catalog; the bundled catalog when omitted.
    #[arg(long)]
    schemes: Option<PathBuf>,
    /// Where to write the resulting snapshot.
    #[arg(long, env = "ARGUDAS_SNAPSHOT")]
    snapshot: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ArgueArgs {
    #[arg(long)]
    gene: String,
    #[arg(long)]
    tissue: String,
    #[arg(long, value_parser = parse_stage)]
    stage: TheilerStage,
    #[arg(long, default_value = "presence", value_parser = parse_mode)]
    mode: Mode,
    #[arg(long)]
    prefer_direct: bool,
    /// Also label every argument with its grounded status.
    #[arg(long)]
    legacy: bool,
    /// Show the per-annotation attribute layer.
    #[arg(long)]
    expanded: bool,
    #[command(flatten)]
    snapshot: SnapshotArg,
}

#[derive(Debug, Args)]
struct QueryArgs {
    #[arg(long)]
    gene: Option<String>,
    #[arg(long)]
    tissue: Option<String>,
    #[arg(long, value_parser = parse_stage)]
    stage: Option<TheilerStage>,
    #[command(flatten)]
    snapshot: SnapshotArg,
}

#[derive(Debug, Subcommand)]
enum SchemesCommand {
    /// Agreement between two experts' scores.
    Report {
        #[command(flatten)]
        source: CatalogArgs,
        /// The two experts to compare; needed unless the catalog has exactly two.
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        experts: Option<Vec<String>>,
    },
    /// Record one expert's score for a scheme.
    Score {
        id: String,
        expert: String,
        #[arg(value_parser = parse_score)]
        value: ExpertScore,
        #[command(flatten)]
        source: CatalogArgs,
    },
}

/// Where the catalog comes from: a catalog file, else a snapshot, else the
/// bundled catalog (read-only).
#[derive(Debug, Args)]
struct CatalogArgs {
    #[arg(long)]
    schemes: Option<PathBuf>,
    #[arg(long, env = "ARGUDAS_SNAPSHOT")]
    snapshot: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[arg(long, num_args = 1..)]
    ontology: Vec<PathBuf>,
    #[arg(long)]
    alignment: Option<PathBuf>,
    #[arg(long)]
    thresholds: Option<PathBuf>,
    #[arg(long)]
    schemes: Option<PathBuf>,
    /// Checked against the other files given.
    #[arg(long)]
    annotations: Option<PathBuf>,
    #[arg(long)]
    snapshot: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ServeArgs {
    #[arg(long, env = "ARGUDAS_ADDR", default_value = "127.0.0.1")]
    addr: std::net::IpAddr,
    #[arg(long, env = "ARGUDAS_PORT", default_value_t = 8080)]
    port: u16,
    /// Default mode for argue requests that do not name one.
    #[arg(long, env = "ARGUDAS_MODE", default_value = "presence", value_parser = parse_mode)]
    mode: Mode,
    #[arg(long, env = "ARGUDAS_PREFER_DIRECT")]
    prefer_direct: bool,
    /// Loaded at start and rewritten after every change; an empty store
    /// with the bundled catalog when omitted.
    #[arg(long, env = "ARGUDAS_SNAPSHOT")]
    snapshot: Option<PathBuf>,
}

fn parse_stage(s: &str) -> Result<TheilerStage, String> {
    let n: i64 = s.parse().map_err(|_| format!("{s:?} is not an integer"))?;
    TheilerStage::new(n).map_err(|e| e.to_string())
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: argudas_core::model::ModelError| e.to_string())
}

fn parse_score(s: &str) -> Result<ExpertScore, String> {
    s.parse().map_err(|e: argudas_core::schemes::SchemeError| e.to_string())
}

struct Failure {
    code: i32,
    message: String,
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        Self {
            code: e.exit_code(),
            message: e.to_string(),
        }
    }
}

fn fail(code: i32, message: impl ToString) -> Failure {
    Failure {
        code,
        message: message.to_string(),
    }
}

/// Runs the CLI with explicit arguments and output streams; returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
            } else {
                let _ = out.write_all(text.as_bytes());
            }
            return e.exit_code();
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<(), Failure> {
    let text = match command {
        Command::Ingest(a) => ingest(a)?,
        Command::Argue(a) => argue(a)?,
        Command::Query(a) => query(a)?,
        Command::Schemes { command } => schemes(command)?,
        Command::Validate(a) => validate(a)?,
        Command::Serve(a) => return serve(a, out),
    };
    out.write_all(text.as_bytes()).map_err(|e| fail(2, e))
}

fn snapshot_store(arg: &SnapshotArg) -> Result<Store, Failure> {
    let path = arg
        .snapshot
        .as_deref()
        .ok_or_else(|| fail(2, "no snapshot: pass --snapshot or set ARGUDAS_SNAPSHOT"))?;
    Ok(load::snapshot(path)?)
}

fn ingest(a: IngestArgs) -> Result<String, Failure> {
    let mut store = Sources {
        ontologies: a.ontology,
        alignment: Some(a.alignment),
        thresholds: Some(a.thresholds),
        schemes: a.schemes,
    }
    .build()?;
    let report = load::ingest(&mut store, &a.annotations)?;
    if let Some(path) = &a.snapshot {
        load::save_snapshot(&store, path)?;
    }
    Ok(render::ingest_report(&report))
}

fn argue(a: ArgueArgs) -> Result<String, Failure> {
    let store = snapshot_store(&a.snapshot)?;
    let subject = Subject {
        gene: GeneId::new(a.gene).map_err(|e| fail(2, e))?,
        tissue: TissueId::new(a.tissue).map_err(|e| fail(2, e))?,
        stage: a.stage,
    };
    store
        .check_subject(&subject.tissue, subject.stage)
        .map_err(|e| match e {
            StoreError::UnknownSubject { .. } => fail(4, e),
            other => fail(3, other),
        })?;
    let profile = InterpretationProfile::new(a.mode, a.prefer_direct);
    let outcome = store.argue(&Query::for_subject(&subject, profile), a.legacy);
    Ok(render::argue(&subject, &outcome, a.expanded))
}

fn query(a: QueryArgs) -> Result<String, Failure> {
    let store = snapshot_store(&a.snapshot)?;
    let gene = a.gene.map(GeneId::new).transpose().map_err(|e| fail(2, e))?;
    let tissue = a.tissue.map(TissueId::new).transpose().map_err(|e| fail(2, e))?;
    let q = Query::new(gene, tissue, a.stage, InterpretationProfile::default()).map_err(|e| fail(2, e))?;
    Ok(render::summary(&store.summary(&q)))
}

fn catalog(source: &CatalogArgs) -> Result<SchemeCatalog, Failure> {
    if let Some(path) = &source.schemes {
        return Ok(load::schemes(path)?);
    }
    if let Some(path) = &source.snapshot {
        return Ok(load::snapshot(path)?.catalog().clone());
    }
    Ok(SchemeCatalog::default_catalog())
}

fn schemes(command: SchemesCommand) -> Result<String, Failure> {
    match command {
        SchemesCommand::Report { source, experts } => {
            let cat = catalog(&source)?;
            let (a, b) = match experts {
                Some(v) => (v[0].clone(), v[1].clone()),
                None => service::default_experts(&cat)
                    .ok_or_else(|| fail(2, "the catalog does not have exactly two experts; pass --experts A B"))?,
            };
            let report = cat.agreement_report(&a, &b).map_err(|e| fail(3, e))?;
            Ok(render::agreement(&a, &b, &report))
        }
        SchemesCommand::Score {
            id,
            expert,
            value,
            source,
        } => {
            let unknown = |e| fail(4, e);
            if let Some(path) = &source.schemes {
                let mut cat = load::schemes(path)?;
                cat.record_score(&id, &expert, value).map_err(unknown)?;
                load::write_schemes(path, &cat)?;
            } else if let Some(path) = &source.snapshot {
                let mut store = load::snapshot(path)?;
                store.record_score(&id, &expert, value).map_err(unknown)?;
                load::save_snapshot(&store, path)?;
            } else {
                return Err(fail(2, "nowhere to record the score: pass --schemes or --snapshot"));
            }
            Ok(format!("{id} {expert}={value}\n"))
        }
    }
}

fn validate(a: ValidateArgs) -> Result<String, Failure> {
    let mut out = String::new();
    let ok = |out: &mut String, p: &Path| out.push_str(&format!("ok {}\n", p.display()));
    for p in &a.ontology {
        load::ontology(p)?;
        ok(&mut out, p);
    }
    if let Some(p) = &a.alignment {
        load::alignment(p)?;
        ok(&mut out, p);
    }
    if let Some(p) = &a.thresholds {
        load::thresholds(p)?;
        ok(&mut out, p);
    }
    if let Some(p) = &a.schemes {
        load::schemes(p)?;
        ok(&mut out, p);
    }
    if let Some(p) = &a.annotations {
        let mut store = Sources {
            ontologies: a.ontology.clone(),
            alignment: a.alignment.clone(),
            thresholds: a.thresholds.clone(),
            schemes: a.schemes.clone(),
        }
        .build()?;
        let report = load::ingest(&mut store, p)?;
        ok(&mut out, p);
        out.push_str(&render::ingest_report(&report));
    }
    if let Some(p) = &a.snapshot {
        load::snapshot(p)?;
        ok(&mut out, p);
    }
    Ok(out)
}

fn serve(a: ServeArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let store = match &a.snapshot {
        Some(p) if p.exists() => load::snapshot(p)?,
        _ => Store::new(
            Vec::new(),
            Default::default(),
            Default::default(),
            SchemeCatalog::default_catalog(),
        )
        .expect("empty store"),
    };
    let state = service::AppState::new(store, InterpretationProfile::new(a.mode, a.prefer_direct), a.snapshot);
    let addr = SocketAddr::new(a.addr, a.port);
    let runtime = tokio::runtime::Runtime::new().map_err(|e| fail(2, e))?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(addr)
            .await
            .map_err(|e| fail(2, format!("{addr}: {e}")))?;
        let _ = writeln!(out, "listening on http://{}", listener.local_addr().unwrap_or(addr));
        let _ = out.flush();
        axum::serve(listener, service::router(state))
            .await
            .map_err(|e| fail(2, e))
    })
}
