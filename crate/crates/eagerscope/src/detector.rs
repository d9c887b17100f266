//! Uniform detector interface and registry.
//!
//! Every detector is a named analysis over (test case, code model), so new
//! rules plug in without touching the pipeline.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::model::parse::AssertionApis;
use crate::model::{CodeModel, TestCase};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum DetectionResult {
    Eager,
    NotEager,
    NotApplicable,
}

impl DetectionResult {
    pub fn label(&self) -> &'static str {
        match self {
            DetectionResult::Eager => "eager",
            DetectionResult::NotEager => "not-eager",
            DetectionResult::NotApplicable => "not-applicable",
        }
    }
}

impl Serialize for DetectionResult {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

impl<'de> serde::Deserialize<'de> for DetectionResult {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        match s.as_str() {
            "eager" => Ok(DetectionResult::Eager),
            "not-eager" => Ok(DetectionResult::NotEager),
            "not-applicable" => Ok(DetectionResult::NotApplicable),
            other => Err(serde::de::Error::custom(format!(
                "unknown detection result {other}"
            ))),
        }
    }
}

/// Per (test case, detector) classification with its evidence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub test_id: TestId,
    pub detector: String,
    pub result: DetectionResult,
    pub flags: BTreeSet<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evidence: Option<serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, serde::Deserialize)]
pub struct TestId {
    pub file: String,
    pub class: String,
    pub method: String,
}

impl TestId {
    pub fn of(test: &TestCase) -> TestId {
        TestId {
            file: test.file.clone(),
            class: test.owning_class.clone(),
            method: test.method_name.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AnalysisOptions {
    pub inline_depth: usize,
    pub effect_depth: usize,
    pub verbose_evidence: bool,
    pub assertion_apis: AssertionApis,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            inline_depth: 2,
            effect_depth: 2,
            verbose_evidence: false,
            assertion_apis: AssertionApis::default(),
        }
    }
}

pub trait Detector {
    fn id(&self) -> &'static str;
    fn detect(&self, test: &TestCase, model: &CodeModel, opts: &AnalysisOptions) -> Verdict;
}

/// All known detectors: the heuristic plus the six literature rules.
pub fn registry() -> Vec<Box<dyn Detector>> {
    let mut detectors: Vec<Box<dyn Detector>> = vec![Box::new(crate::heuristic::Heuristic)];
    for rule in crate::rules::RuleId::ALL {
        detectors.push(Box::new(rule));
    }
    detectors
}

pub fn detector_ids() -> Vec<&'static str> {
    registry().iter().map(|d| d.id()).collect()
}

/// Look up detectors by id, case-sensitively.
pub fn select(ids: &[String]) -> Result<Vec<Box<dyn Detector>>, String> {
    let all = registry();
    let mut picked = Vec::new();
    for id in ids {
        match all.iter().position(|d| d.id() == id) {
            Some(_) => {
                let d: Box<dyn Detector> = registry()
                    .into_iter()
                    .find(|d| d.id() == id)
                    .expect("id just matched");
                picked.push(d);
            }
            None => {
                return Err(format!(
                    "unknown detector {id}; known: {}",
                    detector_ids().join(", ")
                ))
            }
        }
    }
    Ok(picked)
}
