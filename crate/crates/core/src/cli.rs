//! The `facetforge` command line.
//!
//! Exit codes: 0 success (or a passing validation), 1 validation errors,
//! 2 parse or I/O errors, 3 usage errors.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::index::{build_automaton, index_document, DocumentIndexResult};
use crate::io::{parse_any, serialize_canonical_json, serialize_skos_turtle, ParseOutcome};
use crate::service::{self, OntologyRegistry, DEFAULT_PORT, PORT_ENV};
use crate::text::NormalizationConfig;
use crate::validate::validate;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "facetforge",
    version,
    about = "Validate, convert, index and serve PSPP faceted ontologies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the validation report; exit 1 when it contains errors.
    Validate { file: PathBuf },
    /// Convert between canonical JSON and the SKOS Turtle subset.
    Convert {
        file: PathBuf,
        #[arg(long, value_enum)]
        to: Target,
    },
    /// Print per-facet concept and label counts.
    Stats { file: PathBuf },
    /// Extract ontology concepts from a plain-text file.
    Index {
        #[arg(long)]
        ontology: PathBuf,
        textfile: PathBuf,
        #[arg(long, conflicts_with = "plain")]
        json: bool,
        #[arg(long)]
        plain: bool,
        #[command(flatten)]
        normalization: NormalizationArgs,
    },
    /// Serve every .json/.ttl ontology in a directory over HTTP.
    Serve {
        /// Overrides FACETFORGE_PORT.
        #[arg(long)]
        port: Option<u16>,
        #[arg(long)]
        ontologies: PathBuf,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        #[arg(long, default_value = "*")]
        cors_origin: String,
        #[command(flatten)]
        normalization: NormalizationArgs,
    },
}

#[derive(clap::Args, Debug, Clone, Copy)]
struct NormalizationArgs {
    /// Match case-sensitively.
    #[arg(long)]
    no_fold_case: bool,
    /// Strip a trailing "s" from tokens of four or more characters.
    #[arg(long)]
    fold_plurals: bool,
}

impl From<NormalizationArgs> for NormalizationConfig {
    fn from(args: NormalizationArgs) -> Self {
        NormalizationConfig {
            fold_case: !args.no_fold_case,
            fold_plurals: args.fold_plurals,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Target {
    Json,
    Ttl,
}

/// Runs the CLI with explicit output streams and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                EXIT_OK
            } else {
                let _ = write!(err, "{e}");
                EXIT_USAGE
            };
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_INPUT
        }
    }
}

fn read_input(path: &Path) -> Result<Vec<u8>, String> {
    if path == Path::new("-") {
        let mut buf = Vec::new();
        std::io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| format!("stdin: {e}"))?;
        return Ok(buf);
    }
    std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load(path: &Path, err: &mut dyn Write) -> Result<ParseOutcome, String> {
    let bytes = read_input(path)?;
    let outcome = parse_any(&bytes).map_err(|e| format!("{}: {e}", path.display()))?;
    for warning in &outcome.warnings {
        let _ = writeln!(err, "{}:{warning}", path.display());
    }
    Ok(outcome)
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, String> {
    let write_failed = |e: std::io::Error| format!("writing output: {e}");
    match command {
        Command::Validate { file } => {
            let outcome = load(&file, err)?;
            let report = validate(&outcome.ontology);
            out.write_all(report.to_json().as_bytes()).map_err(write_failed)?;
            Ok(if report.pass { EXIT_OK } else { EXIT_VALIDATION })
        }
        Command::Convert { file, to } => {
            let outcome = load(&file, err)?;
            let bytes = match to {
                Target::Json => serialize_canonical_json(&outcome.ontology),
                Target::Ttl => serialize_skos_turtle(&outcome.ontology).into_bytes(),
            };
            out.write_all(&bytes).map_err(write_failed)?;
            Ok(EXIT_OK)
        }
        Command::Stats { file } => {
            let outcome = load(&file, err)?;
            let mut json = serde_json::to_string_pretty(&outcome.ontology.stats()).expect("stats serialize");
            json.push('\n');
            out.write_all(json.as_bytes()).map_err(write_failed)?;
            Ok(EXIT_OK)
        }
        Command::Index {
            ontology,
            textfile,
            json: _,
            plain,
            normalization,
        } => {
            let outcome = load(&ontology, err)?;
            let automaton = build_automaton(&outcome.ontology, normalization.into()).map_err(|e| e.to_string())?;
            let bytes = read_input(&textfile)?;
            let text = String::from_utf8(bytes).map_err(|_| format!("{}: not valid UTF-8", textfile.display()))?;
            let result = index_document(&automaton, &text);
            let rendered = if plain { render_plain(&result) } else { result.to_json() };
            out.write_all(rendered.as_bytes()).map_err(write_failed)?;
            Ok(EXIT_OK)
        }
        Command::Serve {
            port,
            ontologies,
            host,
            cors_origin,
            normalization,
        } => {
            let port = match port {
                Some(p) => p,
                None => match std::env::var(PORT_ENV) {
                    Ok(raw) => match raw.parse() {
                        Ok(p) => p,
                        Err(_) => {
                            let _ = writeln!(err, "error: {PORT_ENV}={raw:?} is not a port number");
                            return Ok(EXIT_USAGE);
                        }
                    },
                    Err(_) => DEFAULT_PORT,
                },
            };
            let (registry, failures) = OntologyRegistry::load_dir(&ontologies, normalization.into())
                .map_err(|e| format!("{}: {e}", ontologies.display()))?;
            for failure in &failures {
                let _ = writeln!(err, "skipped {}: {}", failure.path.display(), failure.error);
            }
            let names: Vec<&str> = registry.names().collect();
            let _ = writeln!(
                err,
                "serving {} ontologies on {host}:{port}: {}",
                names.len(),
                names.join(", ")
            );
            let runtime = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
            runtime
                .block_on(service::serve(registry, SocketAddr::new(host, port), &cors_origin))
                .map_err(|e| format!("server: {e}"))?;
            Ok(EXIT_OK)
        }
    }
}

/// One tab-separated line per hit, then the notation.
fn render_plain(result: &DocumentIndexResult) -> String {
    let mut out = String::new();
    for hit in &result.hits {
        out.push_str(&format!(
            "{}-{}\t{}\t{}\t{}{}\n",
            hit.start,
            hit.end,
            hit.concept,
            hit.facet,
            hit.surface,
            if hit.ambiguous { "\t(ambiguous)" } else { "" }
        ));
    }
    out.push_str(&format!("notation\t{}\n", result.notation));
    out
}
