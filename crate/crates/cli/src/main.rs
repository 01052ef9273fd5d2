use std::io::{self, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use igkit::corpus::{self, Corpus, CorpusManifest};
use igkit::notation::write_document;
use igkit::transform::{decompose_combinations, flatten_vertical, normalize_negation, project, NegationMode};
use igkit::validate::Validator;
use igkit::{serialize, Diagnostic, IgLevel, InstitutionalStatement, Profile, Severity, TaxonomyRegistry};

#[derive(Parser)]
#[command(name = "igkit", version, about = "Institutional Grammar 2.0 shorthand toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse coded documents and print them back in canonical form.
    Parse(CorpusArgs),
    /// Check completeness, annotations and profile conformance.
    Validate(CorpusArgs),
    /// Expand component-level combinations into atomic statements.
    Decompose(CorpusArgs),
    /// Project statements down to a lower level of expressiveness.
    Project {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long, value_enum)]
        level: Level,
    },
    /// List monitored/consequential pairs of OR ELSE chains.
    Flatten(CorpusArgs),
    /// Normalize negation (hoist to statement level or push into the modal).
    Negate {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long, value_enum, default_value = "hoist")]
        mode: Mode,
    },
    /// Expand a profile expression, e.g. "IG Core--IO".
    Profile { expression: String },
    /// Component and annotation frequencies.
    Stats(CorpusArgs),
    /// Split raw policy prose into candidate statements, one per line.
    Preprocess {
        /// Text file; reads stdin when omitted or `-`.
        input: Option<PathBuf>,
    },
    /// Write the corpus as interchange JSON.
    Export(CorpusArgs),
}

#[derive(Args)]
struct CorpusArgs {
    /// `.ig` documents, or a single `igkit.toml` manifest.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Profile expression; overrides the manifest's.
    #[arg(long, env = "IGKIT_PROFILE")]
    profile: Option<String>,
    /// Taxonomy extension file (TOML); may be repeated.
    #[arg(long)]
    taxonomy: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "shorthand")]
    format: Format,
    /// Treat warnings as errors.
    #[arg(long)]
    strict: bool,
    /// Write output here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Shorthand,
    Tree,
}

#[derive(Clone, Copy, ValueEnum)]
enum Level {
    Core,
    Extended,
    Logico,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Hoist,
    Push,
}

/// Usage and I/O failures; everything else is reported through diagnostics.
struct Fatal(String);

impl<E: std::fmt::Display> From<E> for Fatal {
    fn from(e: E) -> Self {
        Fatal(e.to_string())
    }
}

struct Loaded {
    corpus: Corpus,
    registry: TaxonomyRegistry,
    profile: Option<Profile>,
}

fn load(args: &CorpusArgs) -> Result<Loaded, Fatal> {
    let manifest = match args.inputs.as_slice() {
        [one] if one.extension().is_some_and(|e| e == "toml") => Some(CorpusManifest::load(one)?),
        _ => None,
    };
    let (corpus, mut registry, mut profile) = match &manifest {
        Some(m) => (m.load_corpus()?, m.registry()?, Some(m.profile())),
        None => (Corpus::load_files(&args.inputs)?, TaxonomyRegistry::builtin(), None),
    };
    for t in &args.taxonomy {
        registry = registry.merge_file(t)?;
    }
    if let Some(p) = &args.profile {
        profile = Some(Profile::parse(p)?);
    }
    Ok(Loaded { corpus, registry, profile })
}

struct Out {
    color: bool,
}

impl Out {
    fn new() -> Self {
        let color = std::env::var_os("IGKIT_NO_COLOR").is_none() && io::stderr().is_terminal();
        Out { color }
    }

    fn diagnostic(&self, d: &Diagnostic) {
        let style = match d.severity {
            Severity::Error => "\x1b[31m",
            Severity::Warning => "\x1b[33m",
            Severity::Info => "\x1b[36m",
        };
        if self.color {
            eprintln!("{style}{d}\x1b[0m");
        } else {
            eprintln!("{d}");
        }
    }
}

fn emit(path: &Option<PathBuf>, text: &str) -> Result<(), Fatal> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Fatal(format!("{}: {e}", p.display())))?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.is_empty() && !text.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn failing(diags: &[Diagnostic], strict: bool) -> bool {
    diags.iter().any(|d| d.is_error() || (strict && d.severity == Severity::Warning))
}

/// Prints parse diagnostics; returns the parsed `(id, statement)` pairs and
/// whether anything failed.
fn parsed(corpus: &Corpus, out: &Out, strict: bool) -> (Vec<(String, InstitutionalStatement)>, bool) {
    let mut failed = false;
    let mut records = Vec::new();
    for doc in &corpus.documents {
        for r in &doc.records {
            for d in &r.diagnostics {
                out.diagnostic(&d.clone().with_id(format!("{}:{}", doc.path, r.id)));
            }
            failed |= failing(&r.diagnostics, strict);
            if let Some(s) = &r.parsed {
                records.push((r.id.clone(), s.clone()));
            }
        }
    }
    (records, failed)
}

fn render(records: &[(String, InstitutionalStatement)], format: Format) -> String {
    match format {
        Format::Shorthand => write_document(records),
        Format::Tree => {
            let tree: Vec<_> = records.iter().map(|(id, s)| serde_json::json!({ "id": id, "statement": s })).collect();
            serde_json::to_string_pretty(&tree).expect("statements serialize")
        }
    }
}

/// Applies `f` to every record, reporting failures and keeping the original.
fn transform_each(
    args: &CorpusArgs,
    f: impl Fn(&InstitutionalStatement) -> Result<InstitutionalStatement, Diagnostic> + Sync,
) -> Result<bool, Fatal> {
    let out = Out::new();
    let loaded = load(args)?;
    let (records, mut failed) = parsed(&loaded.corpus, &out, args.strict);
    let results: Vec<_> = records.par_iter().map(|(id, s)| (id.clone(), f(s), s)).collect();
    let mut done = Vec::new();
    for (id, r, original) in results {
        match r {
            Ok(t) => done.push((id, t)),
            Err(d) => {
                out.diagnostic(&d.with_id(&id));
                failed = true;
                done.push((id, original.clone()));
            }
        }
    }
    emit(&args.output, &render(&done, args.format))?;
    Ok(failed)
}

fn validate(args: &CorpusArgs) -> Result<bool, Fatal> {
    let out = Out::new();
    let loaded = load(args)?;
    let (records, mut failed) = parsed(&loaded.corpus, &out, args.strict);
    let validator = Validator::new(loaded.registry, loaded.profile);
    let reports: Vec<_> = records.par_iter().map(|(id, s)| validator.validate(id, s)).collect();
    let (mut errors, mut warnings) = (0, 0);
    for r in &reports {
        for d in &r.diagnostics {
            out.diagnostic(d);
            match d.severity {
                Severity::Error => errors += 1,
                Severity::Warning => warnings += 1,
                Severity::Info => {}
            }
        }
        failed |= failing(&r.diagnostics, args.strict);
    }
    match args.format {
        Format::Tree => emit(&args.output, &serde_json::to_string_pretty(&reports)?)?,
        Format::Shorthand => {
            let lines: String = reports.iter().map(|r| format!("{}\t{}\n", r.statement_id, r.kind)).collect();
            let summary = format!("{} statements, {errors} errors, {warnings} warnings\n", reports.len());
            emit(&args.output, &(lines + &summary))?;
        }
    }
    Ok(failed)
}

fn flatten(args: &CorpusArgs) -> Result<bool, Fatal> {
    let out = Out::new();
    let loaded = load(args)?;
    let (records, failed) = parsed(&loaded.corpus, &out, args.strict);
    let text = match args.format {
        Format::Tree => {
            let pairs: Vec<_> = records
                .iter()
                .map(|(id, s)| serde_json::json!({ "id": id, "pairs": flatten_vertical(s) }))
                .collect();
            serde_json::to_string_pretty(&pairs)?
        }
        Format::Shorthand => {
            let mut text = String::new();
            for (id, s) in &records {
                for p in flatten_vertical(s) {
                    text += &format!("{id}\t{}\t{}\t{}\n", p.depth, serialize(&p.monitored), serialize(&p.consequential));
                }
            }
            text
        }
    };
    emit(&args.output, &text)?;
    Ok(failed)
}

fn stats(args: &CorpusArgs) -> Result<bool, Fatal> {
    let out = Out::new();
    let loaded = load(args)?;
    let (_, failed) = parsed(&loaded.corpus, &out, args.strict);
    let table = corpus::stats(loaded.corpus.statements());
    let text = match args.format {
        Format::Shorthand => table.to_string(),
        Format::Tree => serde_json::to_string_pretty(&table)?,
    };
    emit(&args.output, &text)?;
    Ok(failed)
}

fn export(args: &CorpusArgs) -> Result<bool, Fatal> {
    let out = Out::new();
    let loaded = load(args)?;
    let (_, failed) = parsed(&loaded.corpus, &out, args.strict);
    emit(&args.output, &corpus::export(&loaded.corpus))?;
    Ok(failed)
}

fn profile(expression: &str) -> Result<bool, Fatal> {
    let p = Profile::parse(expression)?;
    let mut text = format!("{}\n", p.expression.format());
    for f in &p.features {
        text += &format!("  {}\n", f.symbol());
    }
    emit(&None, &text)?;
    Ok(false)
}

fn preprocess(input: Option<&Path>) -> Result<bool, Fatal> {
    let raw = match input {
        Some(p) if p != Path::new("-") => std::fs::read_to_string(p).map_err(|e| Fatal(format!("{}: {e}", p.display())))?,
        _ => io::read_to_string(io::stdin())?,
    };
    let lines: String = corpus::preprocess(&raw).into_iter().map(|s| s + "\n").collect();
    emit(&None, &lines)?;
    Ok(false)
}

fn run(cli: Cli) -> Result<bool, Fatal> {
    match cli.command {
        Command::Parse(args) => transform_each(&args, |s| Ok(s.clone())),
        Command::Validate(args) => validate(&args),
        Command::Decompose(args) => transform_each(&args, |s| decompose_combinations(s).map_err(|e| e.to_diagnostic())),
        Command::Project { corpus, level } => {
            let level = match level {
                Level::Core => IgLevel::Core,
                Level::Extended => IgLevel::Extended,
                Level::Logico => IgLevel::Logico,
            };
            transform_each(&corpus, |s| Ok(project(s, level)))
        }
        Command::Flatten(args) => flatten(&args),
        Command::Negate { corpus, mode } => {
            let mode = match mode {
                Mode::Hoist => NegationMode::Hoist,
                Mode::Push => NegationMode::Push,
            };
            transform_each(&corpus, |s| normalize_negation(s, mode).map_err(|e| e.to_diagnostic()))
        }
        Command::Profile { expression } => profile(&expression),
        Command::Stats(args) => stats(&args),
        Command::Preprocess { input } => preprocess(input.as_deref()),
        Command::Export(args) => export(&args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(Fatal(msg)) => {
            eprintln!("igkit: {msg}");
            ExitCode::from(2)
        }
    }
}
