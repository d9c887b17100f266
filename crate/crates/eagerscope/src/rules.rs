//! The six eager-test detection rules from the literature.
//!
//! DR1, DR2.1 and DR2.2 count method calls from the class under test at
//! thresholds 2, 3 and 5; DR2.3 counts calls to any production-code method
//! at threshold 5; DR3 counts cycles of non-verification instructions
//! followed by verification instructions; DR4 requires two assertions with
//! at least one not on the result of a get method. Constructors never
//! count as method calls, and call sites nested in assertion arguments do.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::detector::{AnalysisOptions, DetectionResult, Detector, TestId, Verdict};
use crate::model::resolve::{build_type_env, resolve_call, Resolution, TypeEnv};
use crate::model::{CallExpr, CodeModel, Expr, SourceKind, StmtKind, TestCase};
use crate::stereotype::{classify_method, Stereotype};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RuleId {
    Dr1,
    Dr2_1,
    Dr2_2,
    Dr2_3,
    Dr3,
    Dr4,
}

impl RuleId {
    pub const ALL: [RuleId; 6] = [
        RuleId::Dr1,
        RuleId::Dr2_1,
        RuleId::Dr2_2,
        RuleId::Dr2_3,
        RuleId::Dr3,
        RuleId::Dr4,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            RuleId::Dr1 => "DR1",
            RuleId::Dr2_1 => "DR2.1",
            RuleId::Dr2_2 => "DR2.2",
            RuleId::Dr2_3 => "DR2.3",
            RuleId::Dr3 => "DR3",
            RuleId::Dr4 => "DR4",
        }
    }

    pub fn parse(s: &str) -> Option<RuleId> {
        RuleId::ALL.iter().copied().find(|r| r.label() == s)
    }
}

#[derive(Serialize)]
struct RuleEvidence {
    #[serde(skip_serializing_if = "Option::is_none")]
    calls_counted: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    threshold: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cycles: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    asserts: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    asserts_without_get: Option<usize>,
}

impl RuleEvidence {
    fn counts(calls: usize, threshold: usize) -> RuleEvidence {
        RuleEvidence {
            calls_counted: Some(calls),
            threshold: Some(threshold),
            cycles: None,
            asserts: None,
            asserts_without_get: None,
        }
    }
}

/// Apply one rule to one test case.
pub fn apply_rule(
    rule: RuleId,
    test: &TestCase,
    model: &CodeModel,
    opts: &AnalysisOptions,
) -> Verdict {
    let mut flags = BTreeSet::new();
    let needs_cut = matches!(rule, RuleId::Dr1 | RuleId::Dr2_1 | RuleId::Dr2_2);
    if needs_cut && test.cut.is_none() {
        flags.insert("unresolved-cut".to_string());
        return Verdict {
            test_id: TestId::of(test),
            detector: rule.label().to_string(),
            result: DetectionResult::NotApplicable,
            flags,
            evidence: None,
        };
    }

    let (result, evidence) = match rule {
        RuleId::Dr1 => threshold_verdict(count_cut_calls(test, model, opts), 2),
        RuleId::Dr2_1 => threshold_verdict(count_cut_calls(test, model, opts), 3),
        RuleId::Dr2_2 => threshold_verdict(count_cut_calls(test, model, opts), 5),
        RuleId::Dr2_3 => threshold_verdict(count_production_calls(test, model, opts), 5),
        RuleId::Dr3 => {
            let cycles = count_cycles(test, model);
            let result = if cycles >= 2 {
                DetectionResult::Eager
            } else {
                DetectionResult::NotEager
            };
            (
                result,
                RuleEvidence {
                    calls_counted: None,
                    threshold: Some(2),
                    cycles: Some(cycles),
                    asserts: None,
                    asserts_without_get: None,
                },
            )
        }
        RuleId::Dr4 => {
            let (asserts, without_get) = count_non_get_asserts(test, model, opts);
            let result = if asserts >= 2 && without_get >= 1 {
                DetectionResult::Eager
            } else {
                DetectionResult::NotEager
            };
            (
                result,
                RuleEvidence {
                    calls_counted: None,
                    threshold: None,
                    cycles: None,
                    asserts: Some(asserts),
                    asserts_without_get: Some(without_get),
                },
            )
        }
    };

    Verdict {
        test_id: TestId::of(test),
        detector: rule.label().to_string(),
        result,
        flags,
        evidence: Some(serde_json::to_value(evidence).expect("evidence serializes")),
    }
}

fn threshold_verdict(count: usize, threshold: usize) -> (DetectionResult, RuleEvidence) {
    let result = if count >= threshold {
        DetectionResult::Eager
    } else {
        DetectionResult::NotEager
    };
    (result, RuleEvidence::counts(count, threshold))
}

/// Every non-constructor, non-assertion call site in the test body.
fn counted_calls<'m>(
    test: &TestCase,
    model: &'m CodeModel,
    opts: &AnalysisOptions,
) -> Vec<&'m CallExpr> {
    let method = test.method(model);
    let mut out = Vec::new();
    if let Some(body) = &method.body {
        for stmt in body {
            for call in &stmt.calls {
                if call.is_constructor || opts.assertion_apis.is_assertion(call) {
                    continue;
                }
                out.push(call);
            }
        }
    }
    out
}

/// Method calls from the CUT: resolved to a CUT-declared method, invoked on
/// a receiver whose declared type is the CUT (inherited methods count), or
/// static calls qualified with the CUT name.
fn count_cut_calls(test: &TestCase, model: &CodeModel, opts: &AnalysisOptions) -> usize {
    let Some(cut) = test.cut.as_deref() else {
        return 0;
    };
    let cut_simple = cut.rsplit('.').next().unwrap_or(cut);
    let env = build_type_env(test.method(model), test.owning_type(model));
    counted_calls(test, model, opts)
        .into_iter()
        .filter(|call| {
            match resolve_call(call, &env, test.type_index, model) {
                Resolution::Resolved { type_index, .. } => {
                    let t = &model.types[type_index];
                    if t.qualified_name == cut {
                        return true;
                    }
                    // inherited method invoked on a CUT-typed receiver
                    receiver_is_cut(call, &env, cut_simple)
                }
                _ => receiver_is_cut(call, &env, cut_simple),
            }
        })
        .count()
}

fn receiver_is_cut(call: &CallExpr, env: &TypeEnv, cut_simple: &str) -> bool {
    match call.receiver.as_deref() {
        Some(Expr::Name(n)) => match env.declared_type(n) {
            Some(t) => t.trim_end_matches("[]") == cut_simple,
            None => n == cut_simple,
        },
        Some(Expr::Cast { type_name, .. }) => type_name == cut_simple,
        _ => false,
    }
}

/// PTMI: call sites whose target lives in a production-tagged root.
fn count_production_calls(test: &TestCase, model: &CodeModel, opts: &AnalysisOptions) -> usize {
    let env = build_type_env(test.method(model), test.owning_type(model));
    counted_calls(test, model, opts)
        .into_iter()
        .filter(|call| {
            match resolve_call(call, &env, test.type_index, model) {
                Resolution::Resolved { type_index, .. } => {
                    model.types[type_index].source == SourceKind::Production
                }
                _ => {
                    // unresolved method on a receiver of a production type
                    // still targets production code
                    let recv_type = match call.receiver.as_deref() {
                        Some(Expr::Name(n)) => env
                            .declared_type(n)
                            .map(|t| t.to_string())
                            .or_else(|| Some(n.to_string())),
                        Some(Expr::Cast { type_name, .. }) => Some(type_name.clone()),
                        _ => None,
                    };
                    recv_type
                        .and_then(|t| model.find_type(t.trim_end_matches("[]")))
                        .map(|t| t.source == SourceKind::Production)
                        .unwrap_or(false)
                }
            }
        })
        .count()
}

/// A cycle is a maximal run of non-verification statements immediately
/// followed by at least one assertion statement.
fn count_cycles(test: &TestCase, model: &CodeModel) -> usize {
    let method = test.method(model);
    let mut cycles = 0;
    let mut in_setup = false;
    if let Some(body) = &method.body {
        for stmt in body {
            if stmt.kind == StmtKind::AssertCall {
                if in_setup {
                    cycles += 1;
                    in_setup = false;
                }
            } else {
                in_setup = true;
            }
        }
    }
    cycles
}

/// For DR4: total asserts and how many involve no get-method result, where
/// involvement means a get call anywhere in the argument expressions or a
/// variable directly bound to a get call's return.
fn count_non_get_asserts(
    test: &TestCase,
    model: &CodeModel,
    opts: &AnalysisOptions,
) -> (usize, usize) {
    let method = test.method(model);
    let env = build_type_env(method, test.owning_type(model));
    let mut get_bound: HashMap<String, bool> = HashMap::new();
    let mut asserts = 0;
    let mut without_get = 0;

    let Some(body) = &method.body else {
        return (0, 0);
    };
    for stmt in body {
        if stmt.kind == StmtKind::AssertCall {
            asserts += 1;
            let involved = match &stmt.expr {
                Some(Expr::Call(c)) => c
                    .args
                    .iter()
                    .any(|a| involves_get(a, test, model, opts, &env, &get_bound)),
                _ => false,
            };
            if !involved {
                without_get += 1;
            }
            continue;
        }
        if let Some(var) = &stmt.assigned_var {
            let bound_to_get = stmt
                .calls
                .last()
                .filter(|c| c.bound_to.as_deref() == Some(var))
                .map(|c| classify_call(c, test, model, opts, &env) == Stereotype::Get)
                .unwrap_or(false);
            get_bound.insert(var.clone(), bound_to_get);
        }
    }
    (asserts, without_get)
}

fn classify_call(
    call: &CallExpr,
    test: &TestCase,
    model: &CodeModel,
    opts: &AnalysisOptions,
    env: &TypeEnv,
) -> Stereotype {
    let res = resolve_call(call, env, test.type_index, model);
    classify_method(&res, true, test.cut.as_deref(), model, opts.effect_depth).stereotype
}

fn involves_get(
    expr: &Expr,
    test: &TestCase,
    model: &CodeModel,
    opts: &AnalysisOptions,
    env: &TypeEnv,
    get_bound: &HashMap<String, bool>,
) -> bool {
    match expr {
        Expr::Name(n) => get_bound.get(n).copied().unwrap_or(false),
        Expr::Call(c) => {
            if !c.is_constructor
                && classify_call(c, test, model, opts, env) == Stereotype::Get
            {
                return true;
            }
            c.receiver
                .as_deref()
                .map(|r| involves_get(r, test, model, opts, env, get_bound))
                .unwrap_or(false)
                || c.args
                    .iter()
                    .any(|a| involves_get(a, test, model, opts, env, get_bound))
        }
        Expr::FieldAccess { base, .. } => involves_get(base, test, model, opts, env, get_bound),
        Expr::Cast { expr, .. } | Expr::Unary { expr, .. } | Expr::Lambda(expr) => {
            involves_get(expr, test, model, opts, env, get_bound)
        }
        Expr::Binary { lhs, rhs, .. } => {
            involves_get(lhs, test, model, opts, env, get_bound)
                || involves_get(rhs, test, model, opts, env, get_bound)
        }
        Expr::ArrayAccess { base, index } => {
            involves_get(base, test, model, opts, env, get_bound)
                || involves_get(index, test, model, opts, env, get_bound)
        }
        _ => false,
    }
}

impl Detector for RuleId {
    fn id(&self) -> &'static str {
        self.label()
    }

    fn detect(&self, test: &TestCase, model: &CodeModel, opts: &AnalysisOptions) -> Verdict {
        apply_rule(*self, test, model, opts)
    }
}
