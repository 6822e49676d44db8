//! The `qtmc` command line.
//!
//! Machine-readable output goes to stdout; diagnostics, problems and usage go
//! to stderr. Exit status 0 means success, 1 means findings of error severity
//! (or warnings under `--strict`), 2 means a parse, I/O or usage failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::thread;

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::card_model::{new_card, EntityDetails, EntityType, ModelCard};
use crate::card_parser::{parse_card, parse_card_lenient, serialize_card};
use crate::diagnostic::{sort_diagnostics, Diagnostic, Severity};
use crate::fmea::{coverage_check, parse_fmea_csv, top_risks};
use crate::identity::{card_pid, content_hash, element_pid, fair_record};
use crate::lint::{lint, LintConfig};
use crate::registry::{load_dir, write_cache, LoadProblemKind, LoadReport, Query};
use crate::render::{render_card, render_diagnostics, render_diagnostics_for, DiagnosticFormat, RenderFormat, RenderOptions};

/// Environment variable naming a default lint configuration file.
pub const CONFIG_ENV: &str = "QTMC_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExitStatus {
    pub code: u8,
}

impl ExitStatus {
    pub const SUCCESS: ExitStatus = ExitStatus { code: 0 };
    pub const FINDINGS: ExitStatus = ExitStatus { code: 1 };
    pub const FAILURE: ExitStatus = ExitStatus { code: 2 };

    pub fn is_success(self) -> bool {
        self.code == 0
    }
}

impl From<ExitStatus> for std::process::ExitCode {
    fn from(s: ExitStatus) -> Self {
        std::process::ExitCode::from(s.code)
    }
}

#[derive(Debug, Parser)]
#[command(name = "qtmc", version, about = "Author, validate, identify and compare quantum technology model cards")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print an empty card scaffold.
    New {
        name: String,
        version: String,
        #[arg(long = "type", default_value = "computation")]
        entity_type: EntityType,
        /// Release date as YYYY-MM-DD; defaults to today.
        #[arg(long)]
        date: Option<String>,
    },
    /// Check cards against the rule catalogue.
    Lint {
        /// Treat warnings as failures.
        #[arg(long)]
        strict: bool,
        /// JSON object mapping rule ids to error, warning or off.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "text")]
        format: DiagnosticFormat,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Render a card as markdown or HTML.
    Render {
        #[arg(long, default_value = "markdown")]
        format: RenderFormat,
        /// Keep sections and fields that have no content.
        #[arg(long)]
        include_empty: bool,
        file: PathBuf,
    },
    /// Print the card's persistent identifier.
    Pid {
        file: PathBuf,
        /// JSON Pointer of an element inside the card.
        #[arg(long)]
        pointer: Option<String>,
    },
    /// Print the SHA-256 of the card's canonical bytes.
    Hash { file: PathBuf },
    /// Print the card's FAIR metadata record.
    Fair { file: PathBuf },
    /// Check an FMEA CSV against the card's carriers and rank its risks.
    FmeaCheck { card: PathBuf, csv: PathBuf },
    /// Index a registry directory and refresh its cache.
    Index { dir: PathBuf },
    /// Search a registry directory.
    Find {
        dir: PathBuf,
        #[arg(long = "type")]
        entity_type: Option<EntityType>,
        #[arg(long = "class")]
        classification: Option<String>,
        #[arg(long)]
        category: Option<String>,
    },
    /// Compare one metric across every card in a registry directory.
    Compare {
        dir: PathBuf,
        #[arg(long)]
        metric: String,
    },
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn out(&mut self, text: impl AsRef<[u8]>) {
        let _ = self.out.write_all(text.as_ref());
    }

    fn err(&mut self, text: impl AsRef<[u8]>) {
        let _ = self.err.write_all(text.as_ref());
    }

    fn fail(&mut self, msg: impl std::fmt::Display) -> ExitStatus {
        self.err(format!("qtmc: {msg}\n"));
        ExitStatus::FAILURE
    }
}

/// Runs one invocation; `args` includes the program name. The default lint
/// configuration is taken from `QTMC_CONFIG`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let env_config = std::env::var_os(CONFIG_ENV).map(PathBuf::from);
    run_with_env(args, env_config, stdout, stderr)
}

pub fn run_with_env<I, T>(args: I, env_config: Option<PathBuf>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut io = Io { out: stdout, err: stderr };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                io.out(rendered);
                ExitStatus::SUCCESS
            } else {
                io.err(rendered);
                ExitStatus::FAILURE
            };
        }
    };
    let status = match cli.command {
        Command::New { name, version, entity_type, date } => cmd_new(&mut io, &name, &version, entity_type, date),
        Command::Lint { strict, config, format, files } => {
            cmd_lint(&mut io, strict, config.or(env_config).as_deref(), format, &files)
        }
        Command::Render { format, include_empty, file } => {
            with_card(&mut io, &file, |io, card| {
                io.out(render_card(card, &RenderOptions { format, include_empty_sections: include_empty }));
                ExitStatus::SUCCESS
            })
        }
        Command::Pid { file, pointer } => with_card(&mut io, &file, |io, card| {
            let pid = match &pointer {
                Some(p) => element_pid(card, p),
                None => card_pid(card),
            };
            match pid {
                Ok(pid) => {
                    io.out(format!("{pid}\n"));
                    ExitStatus::SUCCESS
                }
                Err(e) => io.fail(e),
            }
        }),
        Command::Hash { file } => with_card(&mut io, &file, |io, card| {
            io.out(format!("{}\n", content_hash(card)));
            ExitStatus::SUCCESS
        }),
        Command::Fair { file } => with_card(&mut io, &file, |io, card| match fair_record(card) {
            Ok(r) => {
                io.out(r.to_json());
                ExitStatus::SUCCESS
            }
            Err(e) => io.fail(e),
        }),
        Command::FmeaCheck { card, csv } => with_card(&mut io, &card, |io, card| cmd_fmea_check(io, card, &csv)),
        Command::Index { dir } => cmd_index(&mut io, &dir),
        Command::Find { dir, entity_type, classification, category } => {
            with_registry(&mut io, &dir, |io, report| {
                for hit in report.index.find(&Query { entity_type, classification, category }) {
                    io.out(format!("{}\t{}\n", hit.pid, hit.purpose));
                }
                ExitStatus::SUCCESS
            })
        }
        Command::Compare { dir, metric } => with_registry(&mut io, &dir, |io, report| cmd_compare(io, report, &metric)),
    };
    let _ = io.out.flush();
    let _ = io.err.flush();
    status
}

fn read(io: &mut Io, path: &Path) -> Option<Vec<u8>> {
    match fs::read(path) {
        Ok(b) => Some(b),
        Err(e) => {
            io.fail(format!("{}: {e}", path.display()));
            None
        }
    }
}

/// Parses `path` strictly; reports problems and fails unless it is a valid card.
fn with_card(io: &mut Io, path: &Path, f: impl FnOnce(&mut Io, &ModelCard) -> ExitStatus) -> ExitStatus {
    let Some(bytes) = read(io, path) else {
        return ExitStatus::FAILURE;
    };
    let report = parse_card(&bytes);
    io.err(render_diagnostics_for(Some(&path.display().to_string()), &report.problems, DiagnosticFormat::Text));
    match &report.card {
        Some(card) => f(io, card),
        None => ExitStatus::FAILURE,
    }
}

fn cmd_new(io: &mut Io, name: &str, version: &str, entity_type: EntityType, date: Option<String>) -> ExitStatus {
    let date = date.unwrap_or_else(|| chrono::Local::now().date_naive().format("%Y-%m-%d").to_string());
    match EntityDetails::new(name, version, entity_type, &date).and_then(new_card) {
        Ok(card) => {
            io.out(serialize_card(&card));
            ExitStatus::SUCCESS
        }
        Err(e) => io.fail(e),
    }
}

enum LintOutcome {
    Checked(Vec<Diagnostic>),
    /// Unreadable or unparseable; the diagnostics explain why when present.
    Failed(Vec<Diagnostic>, Option<String>),
}

fn lint_file(path: &Path, config: &LintConfig) -> LintOutcome {
    let bytes = match fs::read(path) {
        Ok(b) => b,
        Err(e) => return LintOutcome::Failed(Vec::new(), Some(format!("{}: {e}", path.display()))),
    };
    let (card, problems) = parse_card_lenient(&bytes);
    let Some(card) = card else {
        return LintOutcome::Failed(problems, None);
    };
    // Only unknown-field findings survive a successful parse; they follow
    // the same severity configuration as content rules.
    let mut diags = config.apply(problems);
    diags.extend(lint(&card, config).expect("configuration validated before linting"));
    sort_diagnostics(&mut diags);
    LintOutcome::Checked(diags)
}

fn cmd_lint(io: &mut Io, strict: bool, config_path: Option<&Path>, format: DiagnosticFormat, files: &[PathBuf]) -> ExitStatus {
    let config = match config_path {
        None => LintConfig::default(),
        Some(path) => {
            let Some(bytes) = read(io, path) else {
                return ExitStatus::FAILURE;
            };
            match LintConfig::from_json(&bytes) {
                Ok(c) => c,
                Err(e) => return io.fail(format!("{}: {e}", path.display())),
            }
        }
    };

    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(files.len()).max(1);
    let chunk = files.len().div_ceil(workers);
    let outcomes: Vec<LintOutcome> = thread::scope(|s| {
        let handles: Vec<_> = files
            .chunks(chunk)
            .map(|part| s.spawn(|| part.iter().map(|p| lint_file(p, &config)).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("lint worker panicked")).collect()
    });

    let prefix = files.len() > 1;
    let mut status = ExitStatus::SUCCESS;
    for (path, outcome) in files.iter().zip(outcomes) {
        let name = path.display().to_string();
        let render = |d: &[Diagnostic]| {
            if prefix {
                render_diagnostics_for(Some(&name), d, format)
            } else {
                render_diagnostics(d, format)
            }
        };
        match outcome {
            LintOutcome::Checked(diags) => {
                io.err(render(&diags));
                let failing = diags.iter().any(|d| d.severity == Severity::Error || (strict && d.severity == Severity::Warning));
                if failing {
                    status = status.max(ExitStatus::FINDINGS);
                }
            }
            LintOutcome::Failed(diags, message) => {
                io.err(render(&diags));
                if let Some(m) = message {
                    io.err(format!("qtmc: {m}\n"));
                }
                status = ExitStatus::FAILURE;
            }
        }
    }
    status
}

fn cmd_fmea_check(io: &mut Io, card: &ModelCard, csv_path: &Path) -> ExitStatus {
    let Some(bytes) = read(io, csv_path) else {
        return ExitStatus::FAILURE;
    };
    let table = match parse_fmea_csv(&bytes) {
        Ok(t) => t,
        Err(e) => return io.fail(format!("{}: {e}", csv_path.display())),
    };
    let name = csv_path.display().to_string();
    for e in &table.errors {
        io.err(format!("{name}:{}: {}\n", e.line, e.reason));
    }
    let diags = coverage_check(card, &table.rows);
    io.err(render_diagnostics(&diags, DiagnosticFormat::Text));

    let mut w = csv::Writer::from_writer(Vec::new());
    let _ = w.write_record(["rank", "id", "level", "component_ref", "severity", "occurrence", "detection", "rpn", "failure_mode"]);
    for (rank, r) in top_risks(&table.rows, table.rows.len()).iter().enumerate() {
        let _ = w.write_record([
            (rank + 1).to_string(),
            r.id.clone(),
            r.level.to_string(),
            r.component_ref.to_string(),
            r.severity.to_string(),
            r.occurrence.to_string(),
            r.detection.to_string(),
            r.rpn.to_string(),
            r.failure_mode.clone(),
        ]);
    }
    io.out(w.into_inner().unwrap_or_default());

    if !table.errors.is_empty() {
        ExitStatus::FAILURE
    } else if diags.is_empty() {
        ExitStatus::SUCCESS
    } else {
        ExitStatus::FINDINGS
    }
}

fn report_problems(io: &mut Io, report: &LoadReport) {
    for p in &report.problems {
        let label = match p.kind {
            LoadProblemKind::Unreadable => "unreadable",
            LoadProblemKind::Rejected => "rejected",
            LoadProblemKind::Collision => "collision",
            LoadProblemKind::Tampered => "tampered",
            LoadProblemKind::Misnamed => "misnamed",
        };
        io.err(format!("{}: {label}: {}\n", p.path.display(), p.message));
    }
}

fn with_registry(io: &mut Io, dir: &Path, f: impl FnOnce(&mut Io, &LoadReport) -> ExitStatus) -> ExitStatus {
    match load_dir(dir) {
        Ok(report) => {
            report_problems(io, &report);
            f(io, &report)
        }
        Err(e) => io.fail(e),
    }
}

fn cmd_index(io: &mut Io, dir: &Path) -> ExitStatus {
    with_registry(io, dir, |io, report| {
        for (pid, entry) in report.index.entries() {
            io.out(format!("{pid}\t{}\n", entry.content_hash));
        }
        if let Err(e) = write_cache(dir, &report.index) {
            return io.fail(e);
        }
        let worst = report.problems.iter().map(|p| match p.kind {
            LoadProblemKind::Unreadable => ExitStatus::FAILURE,
            LoadProblemKind::Rejected | LoadProblemKind::Collision | LoadProblemKind::Tampered => ExitStatus::FINDINGS,
            LoadProblemKind::Misnamed => ExitStatus::SUCCESS,
        });
        worst.max().unwrap_or(ExitStatus::SUCCESS)
    })
}

fn cmd_compare(io: &mut Io, report: &LoadReport, metric: &str) -> ExitStatus {
    let cmp = match report.index.compare_metric(metric) {
        Ok(c) => c,
        Err(e) => return io.fail(e),
    };
    let (dim, log) = cmp.dimension;
    let value = json!({
        "metric": cmp.metric,
        "dimension": if log { "dB".to_string() } else { dim.to_string() },
        "rows": cmp.rows.iter().map(|r| json!({
            "pid": r.pid,
            "value": r.value,
            "n_samples": r.n_samples,
        })).collect::<Vec<_>>(),
        "mismatched": cmp.mismatched.iter().map(|(pid, q)| json!({"pid": pid, "value": q})).collect::<Vec<_>>(),
        "missing": cmp.missing,
    });
    for (pid, q) in &cmp.mismatched {
        io.err(format!("warning: {pid} reports {metric} as {q}, which does not share the dimension {}\n", value["dimension"].as_str().unwrap_or("")));
    }
    io.out(format!("{value}\n"));
    ExitStatus::SUCCESS
}
