//! Eagerness decision over a linearized test.
//!
//! A test is not eager exactly when everything its assertions verify is
//! contained in the outcome of one single method call. Empty outcome sets
//! (gets, external producers, unknowns) never count as covering calls.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::detector::{AnalysisOptions, DetectionResult, Detector, TestId, Verdict};
use crate::flow::{linearize, FlowOptions, LinearizedTest};
use crate::model::{CodeModel, TestCase};

#[derive(Debug, Clone, PartialEq)]
pub struct HeuristicOutcome {
    pub result: DetectionResult,
    /// Number of nonempty outcome sets containing the whole verified union.
    pub containment_count: usize,
    /// The single covering call when the test is not eager.
    pub covering_call_index: Option<usize>,
    pub flags: BTreeSet<String>,
}

/// Step 3: count the calls whose outcome contains everything verified.
/// One covering call means not eager; none (the verified information spans
/// several calls) or two or more mean eager.
pub fn detect_eager(lin: &LinearizedTest) -> HeuristicOutcome {
    let mut flags = BTreeSet::new();
    if lin.asserts.iter().any(|a| a.exceptional) {
        flags.insert("exceptional-path".to_string());
    }
    if lin.verified_union.is_empty() {
        flags.insert("no-assertions".to_string());
        return HeuristicOutcome {
            result: DetectionResult::NotEager,
            containment_count: 0,
            covering_call_index: None,
            flags,
        };
    }
    let mut containment_count = 0;
    let mut covering = None;
    for call in &lin.calls {
        if call.outcome.is_empty() {
            continue;
        }
        if lin.verified_union.is_subset(&call.outcome) {
            containment_count += 1;
            covering = Some(call.index);
        }
    }
    let result = match containment_count {
        1 => DetectionResult::NotEager,
        0 => DetectionResult::Eager,
        _ => {
            flags.insert("ambiguous-coverage".to_string());
            DetectionResult::Eager
        }
    };
    HeuristicOutcome {
        result,
        containment_count,
        covering_call_index: if containment_count == 1 { covering } else { None },
        flags,
    }
}

#[derive(Serialize)]
struct HeuristicEvidence {
    containment_count: usize,
    covering_call_index: Option<usize>,
    verified_info: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    meth_outcomes: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verified_per_assert: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    records: Option<Vec<RecordEvidence>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    diagnostics: Vec<String>,
}

#[derive(Serialize)]
struct RecordEvidence {
    index: usize,
    label: String,
    stereotype: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    within_assert: Option<usize>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    inlined_helper: bool,
    classification: crate::stereotype::StereotypeEvidence,
}

pub struct Heuristic;

impl Detector for Heuristic {
    fn id(&self) -> &'static str {
        "heuristic"
    }

    fn detect(&self, test: &TestCase, model: &CodeModel, opts: &AnalysisOptions) -> Verdict {
        if test.cut.is_none() {
            return Verdict {
                test_id: TestId::of(test),
                detector: self.id().to_string(),
                result: DetectionResult::NotApplicable,
                flags: ["unresolved-cut".to_string()].into(),
                evidence: None,
            };
        }
        let lin = linearize(
            test,
            model,
            &opts.assertion_apis,
            FlowOptions {
                inline_depth: opts.inline_depth,
                effect_depth: opts.effect_depth,
            },
        );
        let outcome = detect_eager(&lin);
        let evidence = HeuristicEvidence {
            containment_count: outcome.containment_count,
            covering_call_index: outcome.covering_call_index,
            verified_info: lin.verified_union.iter().map(|f| f.to_string()).collect(),
            meth_outcomes: opts.verbose_evidence.then(|| {
                lin.calls
                    .iter()
                    .map(|c| c.outcome.iter().map(|f| f.to_string()).collect())
                    .collect()
            }),
            verified_per_assert: opts.verbose_evidence.then(|| {
                lin.asserts
                    .iter()
                    .map(|a| a.verified.iter().map(|f| f.to_string()).collect())
                    .collect()
            }),
            records: opts.verbose_evidence.then(|| {
                lin.calls
                    .iter()
                    .map(|c| RecordEvidence {
                        index: c.index,
                        label: c.label.clone(),
                        stereotype: c.stereotype.label(),
                        within_assert: c.within_assert,
                        inlined_helper: c.inlined_helper,
                        classification: c.stereotype_evidence.clone(),
                    })
                    .collect()
            }),
            diagnostics: lin.diagnostics.clone(),
        };
        Verdict {
            test_id: TestId::of(test),
            detector: self.id().to_string(),
            result: outcome.result,
            flags: outcome.flags,
            evidence: Some(serde_json::to_value(evidence).expect("evidence serializes")),
        }
    }
}
