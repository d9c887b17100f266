//! End-to-end analysis runs and report emission.
//!
//! The JSON document is the canonical machine format: schema-versioned,
//! deterministically ordered (tests by file then method, maps by key), and
//! reusable as input for the standalone agreement command.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::agreement::{build_matrix, AgreementEntry};
use crate::detector::{select, AnalysisOptions, DetectionResult, Detector, TestId};
use crate::model::parse::{parse_sources, AssertionApis};
use crate::model::resolve::extract_test_cases;
use crate::model::{SourceKind, SourceRoot};
use crate::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Markdown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub test_roots: Vec<String>,
    pub production_roots: Vec<String>,
    pub detectors: Vec<String>,
    pub inline_depth: usize,
    pub effect_depth: usize,
    pub verbose_evidence: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            test_roots: Vec::new(),
            production_roots: Vec::new(),
            detectors: crate::detector::detector_ids()
                .into_iter()
                .map(String::from)
                .collect(),
            inline_depth: 2,
            effect_depth: 2,
            verbose_evidence: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if self.test_roots.is_empty() {
            return Err(Error::Config("at least one test root is required".into()));
        }
        if self.detectors.is_empty() {
            return Err(Error::Config("at least one detector is required".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictCell {
    pub result: DetectionResult,
    pub flags: BTreeSet<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub evidence: Option<serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestRow {
    pub id: TestId,
    pub verdicts: BTreeMap<String, VerdictCell>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectorSummary {
    pub eager: usize,
    pub not_eager: usize,
    pub not_applicable: usize,
    /// Share of eager among applicable verdicts; null with none applicable.
    pub pct_eager: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub schema_version: u32,
    pub config_echo: RunConfig,
    /// Detector column order as requested.
    pub detectors: Vec<String>,
    pub tests: Vec<TestRow>,
    pub summary: BTreeMap<String, DetectorSummary>,
    pub agreement: Vec<AgreementEntry>,
}

/// Outcome of a run: the report plus non-fatal warnings (the warnings stay
/// out of the document so runs are byte-identical).
pub struct RunOutcome {
    pub report: ReportDoc,
    pub warnings: Vec<String>,
    pub parse_diagnostics: usize,
}

/// Parse the configured roots, run every requested detector over every
/// extracted test case, and assemble the report.
pub fn run_analysis(config: &RunConfig) -> Result<RunOutcome, Error> {
    config.validate()?;
    let detectors = select(&config.detectors).map_err(Error::Config)?;

    let mut roots: Vec<SourceRoot> = Vec::new();
    for p in &config.test_roots {
        roots.push(SourceRoot {
            path: p.clone(),
            kind: SourceKind::Test,
        });
    }
    for p in &config.production_roots {
        roots.push(SourceRoot {
            path: p.clone(),
            kind: SourceKind::Production,
        });
    }

    let apis = AssertionApis::default();
    let model = parse_sources(&roots, &apis)?;
    let mut warnings: Vec<String> = model
        .diagnostics
        .iter()
        .map(|d| format!("{}: {}", d.file, d.message))
        .collect();

    let opts = AnalysisOptions {
        inline_depth: config.inline_depth,
        effect_depth: config.effect_depth,
        verbose_evidence: config.verbose_evidence,
        assertion_apis: apis,
    };

    let cases = extract_test_cases(&model);
    if cases.is_empty() {
        warnings.push("no test cases found".to_string());
    }

    let mut tests = Vec::new();
    for case in &cases {
        let mut verdicts = BTreeMap::new();
        for det in &detectors {
            let v = det.detect(case, &model, &opts);
            verdicts.insert(
                det.id().to_string(),
                VerdictCell {
                    result: v.result,
                    flags: v.flags,
                    evidence: v.evidence,
                },
            );
        }
        tests.push(TestRow {
            id: TestId::of(case),
            verdicts,
        });
    }

    let report = assemble(config.clone(), tests, &detectors);
    Ok(RunOutcome {
        report,
        warnings,
        parse_diagnostics: model.diagnostics.len(),
    })
}

fn assemble(config: RunConfig, tests: Vec<TestRow>, detectors: &[Box<dyn Detector>]) -> ReportDoc {
    let detector_ids: Vec<String> = detectors.iter().map(|d| d.id().to_string()).collect();

    let mut summary = BTreeMap::new();
    for id in &detector_ids {
        let mut s = DetectorSummary {
            eager: 0,
            not_eager: 0,
            not_applicable: 0,
            pct_eager: None,
        };
        for row in &tests {
            match row.verdicts.get(id).map(|c| c.result) {
                Some(DetectionResult::Eager) => s.eager += 1,
                Some(DetectionResult::NotEager) => s.not_eager += 1,
                Some(DetectionResult::NotApplicable) => s.not_applicable += 1,
                None => {}
            }
        }
        let applicable = s.eager + s.not_eager;
        if applicable > 0 {
            s.pct_eager = Some(100.0 * s.eager as f64 / applicable as f64);
        }
        summary.insert(id.clone(), s);
    }

    let agreement = if detector_ids.len() >= 2 {
        let mut vectors: BTreeMap<String, BTreeMap<TestId, DetectionResult>> = BTreeMap::new();
        for row in &tests {
            for (det, cell) in &row.verdicts {
                vectors
                    .entry(det.clone())
                    .or_default()
                    .insert(row.id.clone(), cell.result);
            }
        }
        build_matrix(&vectors).entries
    } else {
        Vec::new()
    };

    ReportDoc {
        schema_version: SCHEMA_VERSION,
        config_echo: config,
        detectors: detector_ids,
        tests,
        summary,
        agreement,
    }
}

/// Recompute agreement over the tests of previously saved reports.
pub fn agree_from_reports(reports: &[ReportDoc]) -> Vec<AgreementEntry> {
    let mut vectors: BTreeMap<String, BTreeMap<TestId, DetectionResult>> = BTreeMap::new();
    for report in reports {
        for row in &report.tests {
            for (det, cell) in &row.verdicts {
                vectors
                    .entry(det.clone())
                    .or_default()
                    .insert(row.id.clone(), cell.result);
            }
        }
    }
    build_matrix(&vectors).entries
}

/// Render a report in the requested format.
pub fn render(report: &ReportDoc, format: OutputFormat) -> Result<String, Error> {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(report)?;
            s.push('\n');
            Ok(s)
        }
        OutputFormat::Csv => render_csv(report),
        OutputFormat::Markdown => Ok(render_markdown(report)),
    }
}

/// Validate-then-write a rendered report; stdout when no path is given.
pub fn emit(report: &ReportDoc, format: OutputFormat, path: Option<&Path>) -> Result<(), Error> {
    if format == OutputFormat::Json {
        // schema sanity: the canonical format must round-trip
        let text = serde_json::to_string(report)?;
        let _: ReportDoc = serde_json::from_str(&text)?;
    }
    let rendered = render(report, format)?;
    match path {
        Some(p) => std::fs::write(p, rendered).map_err(|e| Error::Write {
            path: p.display().to_string(),
            source: e,
        }),
        None => std::io::stdout()
            .write_all(rendered.as_bytes())
            .map_err(|e| Error::Write {
                path: "<stdout>".into(),
                source: e,
            }),
    }
}

fn render_csv(report: &ReportDoc) -> Result<String, Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["file".to_string(), "class".to_string(), "method".to_string()];
    header.extend(report.detectors.iter().cloned());
    w.write_record(&header).map_err(csv_err)?;
    for row in &report.tests {
        let mut record = vec![
            row.id.file.clone(),
            row.id.class.clone(),
            row.id.method.clone(),
        ];
        for det in &report.detectors {
            record.push(
                row.verdicts
                    .get(det)
                    .map(|c| c.result.label().to_string())
                    .unwrap_or_default(),
            );
        }
        w.write_record(&record).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Config(e.to_string()))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Config(format!("csv rendering failed: {e}"))
}

fn render_markdown(report: &ReportDoc) -> String {
    let mut out = String::new();
    out.push_str("# Eager test analysis\n\n");

    out.push_str("## Verdicts\n\n");
    out.push_str("| test |");
    for det in &report.detectors {
        out.push_str(&format!(" {det} |"));
    }
    out.push('\n');
    out.push_str("|---|");
    for _ in &report.detectors {
        out.push_str("---|");
    }
    out.push('\n');
    for row in &report.tests {
        out.push_str(&format!("| {}::{} |", row.id.class, row.id.method));
        for det in &report.detectors {
            let label = row
                .verdicts
                .get(det)
                .map(|c| c.result.label())
                .unwrap_or("");
            out.push_str(&format!(" {label} |"));
        }
        out.push('\n');
    }

    out.push_str("\n## Summary\n\n");
    out.push_str("| detector | eager | not-eager | not-applicable | % eager |\n");
    out.push_str("|---|---|---|---|---|\n");
    for (det, s) in &report.summary {
        let pct = s
            .pct_eager
            .map(|p| format!("{p:.1}"))
            .unwrap_or_else(|| "-".to_string());
        out.push_str(&format!(
            "| {det} | {} | {} | {} | {pct} |\n",
            s.eager, s.not_eager, s.not_applicable
        ));
    }

    if !report.agreement.is_empty() {
        out.push_str("\n## Agreement (Cohen's kappa, Landis-Koch bands)\n\n");
        out.push_str("| A | B | kappa | band | n |\n");
        out.push_str("|---|---|---|---|---|\n");
        for e in &report.agreement {
            let kappa = e
                .kappa
                .map(|k| format!("{k:.4}"))
                .unwrap_or_else(|| "undefined".to_string());
            out.push_str(&format!(
                "| {} | {} | {kappa} | {} | {} |\n",
                e.a, e.b, e.band, e.n
            ));
        }
    }
    out
}
