//! Cohen's kappa and Landis–Koch bands over detector verdicts.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::detector::{DetectionResult, TestId};

/// 2x2 table of eager/not-eager verdicts for a detector pair. Tests where
/// either side is not applicable are excluded before counting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ContingencyTable {
    /// both eager
    pub n11: u64,
    /// A eager, B not
    pub n10: u64,
    /// B eager, A not
    pub n01: u64,
    /// both not-eager
    pub n00: u64,
}

impl ContingencyTable {
    pub fn total(&self) -> u64 {
        self.n11 + self.n10 + self.n01 + self.n00
    }

    pub fn add(&mut self, a_eager: bool, b_eager: bool) {
        match (a_eager, b_eager) {
            (true, true) => self.n11 += 1,
            (true, false) => self.n10 += 1,
            (false, true) => self.n01 += 1,
            (false, false) => self.n00 += 1,
        }
    }
}

/// Chance-corrected agreement; `None` when undefined (no data, or both
/// raters constant with imperfect agreement).
pub fn cohen_kappa(t: &ContingencyTable) -> Option<f64> {
    let n = t.total();
    if n == 0 {
        return None;
    }
    let n = n as f64;
    let (n11, n10, n01, n00) = (t.n11 as f64, t.n10 as f64, t.n01 as f64, t.n00 as f64);
    let p_o = (n11 + n00) / n;
    let p_e = ((n11 + n10) * (n11 + n01) + (n01 + n00) * (n10 + n00)) / (n * n);
    if (1.0 - p_e).abs() < f64::EPSILON {
        // both raters constant: perfect observed agreement is kappa 1,
        // anything else has no chance-corrected value
        return if (1.0 - p_o).abs() < f64::EPSILON {
            Some(1.0)
        } else {
            None
        };
    }
    Some((p_o - p_e) / (1.0 - p_e))
}

/// Landis–Koch interpretation with closed upper bounds:
/// <0 poor, [0,0.20] slight, (0.20,0.40] fair, (0.40,0.60] moderate,
/// (0.60,0.80] substantial, (0.80,1.0] almost perfect.
pub fn landis_koch_band(kappa: f64) -> &'static str {
    if kappa < 0.0 {
        "poor/no agreement"
    } else if kappa <= 0.20 {
        "slight"
    } else if kappa <= 0.40 {
        "fair"
    } else if kappa <= 0.60 {
        "moderate"
    } else if kappa <= 0.80 {
        "substantial"
    } else {
        "almost perfect"
    }
}

/// One detector pair's agreement entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementEntry {
    pub a: String,
    pub b: String,
    /// `None` serializes as null: undefined is reported, never coerced to 0.
    pub kappa: Option<f64>,
    pub band: String,
    /// Tests where both verdicts were applicable.
    pub n: u64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct AgreementMatrix {
    pub detectors: Vec<String>,
    pub entries: Vec<AgreementEntry>,
}

impl AgreementMatrix {
    pub fn kappa(&self, a: &str, b: &str) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| (e.a == a && e.b == b) || (e.a == b && e.b == a))
            .and_then(|e| e.kappa)
    }
}

/// Build the pairwise matrix from per-detector verdict vectors indexed by
/// test id. Pairs are computed once and hold for both orders.
pub fn build_matrix(
    verdicts: &BTreeMap<String, BTreeMap<TestId, DetectionResult>>,
) -> AgreementMatrix {
    let detectors: Vec<String> = verdicts.keys().cloned().collect();
    let mut entries = Vec::new();
    for (i, a) in detectors.iter().enumerate() {
        for b in detectors.iter().skip(i + 1) {
            let mut table = ContingencyTable::default();
            for (test, ra) in &verdicts[a] {
                let Some(rb) = verdicts[b].get(test) else {
                    continue;
                };
                let (ea, eb) = match (ra, rb) {
                    (DetectionResult::NotApplicable, _) | (_, DetectionResult::NotApplicable) => {
                        continue
                    }
                    (ra, rb) => (
                        *ra == DetectionResult::Eager,
                        *rb == DetectionResult::Eager,
                    ),
                };
                table.add(ea, eb);
            }
            let kappa = cohen_kappa(&table);
            entries.push(AgreementEntry {
                a: a.clone(),
                b: b.clone(),
                kappa,
                band: kappa
                    .map(|k| landis_koch_band(k).to_string())
                    .unwrap_or_else(|| "undefined".to_string()),
                n: table.total(),
            });
        }
    }
    AgreementMatrix { detectors, entries }
}
