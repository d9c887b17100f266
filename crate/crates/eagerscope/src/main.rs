use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use eagerscope::detector::detector_ids;
use eagerscope::report::{
    agree_from_reports, emit, run_analysis, OutputFormat, ReportDoc, RunConfig, SCHEMA_VERSION,
};

/// Detects the Eager Test smell in Java/JUnit test code and compares the
/// verdicts of several detection rules.
#[derive(Parser)]
#[command(name = "eagerscope", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FormatArg {
    Json,
    Csv,
    Markdown,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> OutputFormat {
        match f {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Markdown => OutputFormat::Markdown,
        }
    }
}

#[derive(Subcommand)]
enum Commands {
    /// Run the selected detectors over test and production sources
    Analyze {
        /// Test source directories
        #[arg(long = "tests", required = true, num_args = 1..)]
        tests: Vec<PathBuf>,
        /// Production source directories
        #[arg(long = "src", num_args = 1..)]
        src: Vec<PathBuf>,
        /// Comma-separated detector list (default: all)
        #[arg(long, value_delimiter = ',')]
        detectors: Option<Vec<String>>,
        /// Output format
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
        /// Output file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        /// How deep test-local helpers are expanded
        #[arg(long, default_value_t = 2)]
        inline_depth: usize,
        /// How deep field effects follow same-type calls
        #[arg(long, default_value_t = 2)]
        effect_depth: usize,
        /// Embed full per-test evidence in the report
        #[arg(long)]
        verbose_evidence: bool,
    },
    /// Recompute the agreement matrix from previously saved verdict files
    Agree {
        /// JSON reports produced by `analyze`
        #[arg(long = "verdicts", required = true, num_args = 1..)]
        verdicts: Vec<PathBuf>,
        /// Output file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct AgreementDoc {
    schema_version: u32,
    sources: Vec<String>,
    agreement: Vec<eagerscope::agreement::AgreementEntry>,
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run() -> anyhow::Result<ExitCode> {
    match Cli::parse().command {
        Commands::Analyze {
            tests,
            src,
            detectors,
            format,
            out,
            inline_depth,
            effect_depth,
            verbose_evidence,
        } => {
            let config = RunConfig {
                test_roots: tests.iter().map(|p| p.display().to_string()).collect(),
                production_roots: src.iter().map(|p| p.display().to_string()).collect(),
                detectors: detectors
                    .unwrap_or_else(|| detector_ids().into_iter().map(String::from).collect()),
                inline_depth,
                effect_depth,
                verbose_evidence,
            };
            let outcome = run_analysis(&config).context("analysis failed")?;
            for w in &outcome.warnings {
                eprintln!("warning: {w}");
            }
            emit(&outcome.report, format.into(), out.as_deref()).context("emit failed")?;
            if outcome.report.tests.is_empty() {
                return Ok(ExitCode::from(2));
            }
            Ok(ExitCode::SUCCESS)
        }
        Commands::Agree { verdicts, out } => {
            let mut reports = Vec::new();
            for path in &verdicts {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("cannot read {}", path.display()))?;
                let report: ReportDoc = serde_json::from_str(&text)
                    .with_context(|| format!("{} is not a verdict report", path.display()))?;
                reports.push(report);
            }
            let doc = AgreementDoc {
                schema_version: SCHEMA_VERSION,
                sources: verdicts.iter().map(|p| p.display().to_string()).collect(),
                agreement: agree_from_reports(&reports),
            };
            let mut text = serde_json::to_string_pretty(&doc)?;
            text.push('\n');
            match out {
                Some(p) => std::fs::write(&p, text)
                    .with_context(|| format!("cannot write {}", p.display()))?,
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
