use std::collections::BTreeMap;
use std::io::{self, Write};
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use vizadvisor_cli::{api, render, wizard};
use vizadvisor_core::engine::recommend_auto;
use vizadvisor_core::extension::{classify_candidate, find_similar, insert_distinguishing_question, ExtensionSpec};
use vizadvisor_core::knowledge::{load_tree_or_seed, LoadError};
use vizadvisor_core::profiler::{ingest_csv, profile, CsvOptions, ProfileError};
use vizadvisor_core::tree::{parse_document, validate, DecisionTree, TreeError};

#[derive(Parser)]
#[command(name = "vizadvisor", version, about = "Recommends one data visualization by asking questions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct TreeArg {
    /// Tree document to use instead of the bundled seed tree.
    #[arg(long, env = "VIZADVISOR_TREE")]
    tree: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Answer the questions one at a time in the terminal.
    Interactive {
        #[command(flatten)]
        tree: TreeArg,
    },
    /// Recommend a visualization for columns of a CSV file without asking.
    Recommend {
        #[arg(long)]
        data: PathBuf,
        /// Comma-separated column names.
        #[arg(long, value_delimiter = ',', required = true)]
        columns: Vec<String>,
        /// Task feature key, e.g. compare.proportions.
        #[arg(long)]
        task: Option<String>,
        #[arg(long, default_value = ",")]
        delimiter: char,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[command(flatten)]
        tree: TreeArg,
    },
    /// Check a tree document and print its statistics.
    Validate {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[command(flatten)]
        tree: TreeArg,
    },
    /// Insert a distinguishing question and a new visualization into a tree.
    Extend {
        /// Extension file describing the question, answer mapping and new leaf.
        #[arg(long)]
        spec: PathBuf,
        /// Where to write the extended tree document.
        #[arg(long)]
        out: PathBuf,
        /// Also write the change summary as JSON.
        #[arg(long)]
        diff: Option<PathBuf>,
        #[command(flatten)]
        tree: TreeArg,
    },
    /// Rank existing visualizations by similarity to a candidate classification.
    Similar {
        /// feature=answer pairs, e.g. task=yes compare=proportions.
        #[arg(required = true, value_parser = parse_pair)]
        answers: Vec<(String, String)>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[command(flatten)]
        tree: TreeArg,
    },
    /// Serve the HTTP session API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        /// Idle seconds before a session expires.
        #[arg(long, default_value_t = 3600)]
        ttl_secs: u64,
        #[command(flatten)]
        tree: TreeArg,
    },
}

fn parse_pair(raw: &str) -> Result<(String, String), String> {
    raw.split_once('=')
        .map(|(k, v)| (k.trim().to_owned(), v.trim().to_owned()))
        .filter(|(k, v)| !k.is_empty() && !v.is_empty())
        .ok_or_else(|| format!("expected feature=answer, got '{raw}'"))
}

/// An error together with the process exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

trait ExitWith<T> {
    fn exit_with(self, code: u8) -> Result<T, Failure>;
}

impl<T, E: Into<anyhow::Error>> ExitWith<T> for Result<T, E> {
    fn exit_with(self, code: u8) -> Result<T, Failure> {
        self.map_err(|e| Failure { code, error: e.into() })
    }
}

const EXIT_USAGE: u8 = 1;
const EXIT_TREE: u8 = 2;
const EXIT_CSV: u8 = 3;

fn print_violations(err: &LoadError) {
    if let LoadError::Tree(TreeError::Invalid(violations)) = err {
        eprint!("{}", render::violations(violations));
    }
}

fn load(tree: &TreeArg) -> Result<Arc<DecisionTree>, Failure> {
    load_tree_or_seed(tree.tree.as_deref())
        .inspect_err(print_violations)
        .map(Arc::new)
        .exit_with(EXIT_TREE)
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) -> Result<(), Failure> {
    match io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e).exit_with(EXIT_USAGE),
        _ => Ok(()),
    }
}

fn write_json(value: &impl serde::Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).exit_with(EXIT_USAGE)?;
    emit(&(text + "\n"))
}

fn interactive(tree: &TreeArg) -> Result<u8, Failure> {
    let tree = load(tree)?;
    let stdin = io::stdin();
    let mut stdout = io::stdout();
    match wizard::run(tree, stdin.lock(), &mut stdout).exit_with(EXIT_USAGE)? {
        wizard::Outcome::Finished(_) | wizard::Outcome::Quit => Ok(0),
        wizard::Outcome::EndOfInput => Err(Failure {
            code: EXIT_USAGE,
            error: anyhow!("input ended before a recommendation was reached"),
        }),
    }
}

fn recommend(
    data: &Path,
    columns: &[String],
    task: Option<&str>,
    delimiter: char,
    format: Format,
    tree: &TreeArg,
) -> Result<u8, Failure> {
    let tree = load(tree)?;
    let bytes = std::fs::read(data)
        .with_context(|| format!("cannot read '{}'", data.display()))
        .exit_with(EXIT_CSV)?;
    let options = CsvOptions {
        delimiter: u8::try_from(delimiter)
            .map_err(|_| anyhow!("delimiter must be an ASCII character"))
            .exit_with(EXIT_USAGE)?,
        ..CsvOptions::default()
    };
    let dataset = ingest_csv(&bytes, &options)
        .with_context(|| format!("cannot parse '{}'", data.display()))
        .exit_with(EXIT_CSV)?;
    let selected: Vec<&str> = columns.iter().map(String::as_str).collect();
    let data_profile = profile(&dataset, &selected).map_err(|e| {
        let code = match e {
            ProfileError::UnknownColumn(_) | ProfileError::EmptySelection | ProfileError::AllNull(_) => EXIT_USAGE,
            _ => EXIT_CSV,
        };
        Failure { code, error: e.into() }
    })?;
    let rec = recommend_auto(tree, &data_profile, task).exit_with(EXIT_USAGE)?;
    match format {
        Format::Json => write_json(&rec)?,
        Format::Text => emit(&render::recommendation(&rec))?,
    }
    Ok(0)
}

fn validate_cmd(format: Format, tree: &TreeArg) -> Result<u8, Failure> {
    let (report, version) = match &tree.tree {
        None => {
            let seed = load(tree)?;
            (seed.validate(), seed.version().to_owned())
        }
        Some(path) => {
            let bytes = std::fs::read(path)
                .with_context(|| format!("cannot read tree file '{}'", path.display()))
                .exit_with(EXIT_TREE)?;
            let doc = parse_document(&bytes).exit_with(EXIT_TREE)?;
            (validate(&doc), doc.version)
        }
    };
    match format {
        Format::Json => write_json(&report)?,
        Format::Text => {
            let mut text = render::stats(&report.stats, &version);
            if report.is_clean() {
                text.push_str("valid: no violations\n");
            } else {
                text.push_str(&format!("{} violation(s):\n", report.violations.len()));
                text.push_str(&render::violations(&report.violations));
            }
            emit(&text)?;
        }
    }
    Ok(if report.is_clean() { 0 } else { EXIT_USAGE })
}

fn extend(spec: &Path, out: &Path, diff_out: Option<&Path>, tree: &TreeArg) -> Result<u8, Failure> {
    let tree = load(tree)?;
    let bytes = std::fs::read(spec)
        .with_context(|| format!("cannot read extension file '{}'", spec.display()))
        .exit_with(EXIT_USAGE)?;
    let spec: ExtensionSpec = serde_json::from_slice(&bytes)
        .context("malformed extension file")
        .exit_with(EXIT_USAGE)?;
    let (extended, diff) = insert_distinguishing_question(&tree, &spec).exit_with(EXIT_USAGE)?;
    let diff_json = serde_json::to_string_pretty(&diff).exit_with(EXIT_USAGE)?;
    std::fs::write(out, extended.to_json())
        .with_context(|| format!("cannot write '{}'", out.display()))
        .exit_with(EXIT_USAGE)?;
    if let Some(path) = diff_out {
        std::fs::write(path, &diff_json)
            .with_context(|| format!("cannot write '{}'", path.display()))
            .exit_with(EXIT_USAGE)?;
    }
    println!(
        "extended tree {} -> {}: {} question(s), {} rewired edge(s), new leaf '{}'; written to {}",
        diff.from_version,
        diff.to_version,
        diff.added_nodes.len(),
        diff.rewired_edges.len(),
        spec.new_leaf_id,
        out.display()
    );
    Ok(0)
}

fn similar(answers: &[(String, String)], format: Format, tree: &TreeArg) -> Result<u8, Failure> {
    let tree = load(tree)?;
    let answers: BTreeMap<String, String> = answers.iter().cloned().collect();
    let candidate = classify_candidate(&tree, &answers).exit_with(EXIT_USAGE)?;
    let ranked = find_similar(&tree, &candidate);
    match format {
        Format::Json => write_json(&ranked)?,
        Format::Text => {
            let text: String = ranked
                .iter()
                .map(|s| {
                    let flag = if s.collision { "  <- collision" } else { "" };
                    format!("{:>3}  {}{flag}\n", s.distance, s.name)
                })
                .collect();
            emit(&text)?;
        }
    }
    Ok(0)
}

fn serve(host: IpAddr, port: u16, ttl_secs: u64, tree: &TreeArg) -> Result<u8, Failure> {
    let tree = load(tree)?;
    let runtime = tokio::runtime::Runtime::new().exit_with(EXIT_USAGE)?;
    runtime.block_on(async {
        let addr = SocketAddr::new(host, port);
        let listener = tokio::net::TcpListener::bind(addr)
            .await
            .with_context(|| format!("cannot bind {addr}"))
            .exit_with(EXIT_USAGE)?;
        let local = listener.local_addr().exit_with(EXIT_USAGE)?;
        println!("serving tree {} on http://{local}/api/v1", tree.version());
        let state = api::AppState::new(tree, Duration::from_secs(ttl_secs));
        api::serve(state, listener).await.exit_with(EXIT_USAGE)
    })?;
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Interactive { tree } => interactive(&tree),
        Command::Recommend {
            data,
            columns,
            task,
            delimiter,
            format,
            tree,
        } => recommend(&data, &columns, task.as_deref(), delimiter, format, &tree),
        Command::Validate { format, tree } => validate_cmd(format, &tree),
        Command::Extend { spec, out, diff, tree } => extend(&spec, &out, diff.as_deref(), &tree),
        Command::Similar { answers, format, tree } => similar(&answers, format, &tree),
        Command::Serve {
            port,
            host,
            ttl_secs,
            tree,
        } => serve(host, port, ttl_secs, &tree),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(Failure { code, error }) => {
            eprintln!("error: {error:#}");
            ExitCode::from(code)
        }
    }
}
