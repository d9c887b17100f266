//! Property suites for the spec-level invariants: kappa bounds and band
//! monotonicity, model round-trip stability, version monotonicity, verified
//! union correctness, outcome emptiness per stereotype, and the heuristic's
//! monotonicity and permutation behavior on synthetic tests.

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use eagerscope::agreement::{cohen_kappa, landis_koch_band, ContingencyTable};
use eagerscope::detector::DetectionResult;
use eagerscope::flow::{linearize, FlowOptions, LinearizedTest, OutcomeFact, OwnerId};
use eagerscope::heuristic::detect_eager;
use eagerscope::model::parse::{parse_unit, AssertionApis};
use eagerscope::model::resolve::extract_test_cases;
use eagerscope::model::{CodeModel, SourceKind};
use eagerscope::stereotype::Stereotype;

fn band_rank(band: &str) -> usize {
    [
        "poor/no agreement",
        "slight",
        "fair",
        "moderate",
        "substantial",
        "almost perfect",
    ]
    .iter()
    .position(|b| *b == band)
    .unwrap_or_else(|| panic!("unknown band {band}"))
}

proptest! {
    #[test]
    fn kappa_is_bounded_by_one_and_one_means_full_agreement(
        n11 in 0u64..200, n10 in 0u64..200, n01 in 0u64..200, n00 in 0u64..200
    ) {
        let t = ContingencyTable { n11, n10, n01, n00 };
        if let Some(k) = cohen_kappa(&t) {
            prop_assert!(k <= 1.0 + 1e-12);
            let p_o_is_one = n10 == 0 && n01 == 0;
            if (k - 1.0).abs() < 1e-12 {
                prop_assert!(p_o_is_one);
            }
            if p_o_is_one && t.total() > 0 {
                prop_assert!((k - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn kappa_is_symmetric_in_the_raters(
        n11 in 0u64..200, n10 in 0u64..200, n01 in 0u64..200, n00 in 0u64..200
    ) {
        let t = ContingencyTable { n11, n10, n01, n00 };
        // swapping raters transposes the off-diagonal
        let swapped = ContingencyTable { n11, n10: n01, n01: n10, n00 };
        prop_assert_eq!(cohen_kappa(&t), cohen_kappa(&swapped));
    }

    #[test]
    fn band_labels_are_total_and_monotone(a in -1.0f64..=1.0, b in -1.0f64..=1.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(band_rank(landis_koch_band(lo)) <= band_rank(landis_koch_band(hi)));
    }
}

/// Render a small class and a test over it from generated shape choices.
#[derive(Debug, Clone)]
enum TestOp {
    /// `w.set<attr>(value);`
    Write(usize),
    /// `w.get<attr>();` as a standalone statement
    Read(usize),
    /// `assertEquals(0, w.get<attr>());`
    AssertRead(usize),
    /// `assertTrue(true);`
    AssertTrue,
}

const ATTRS: [&str; 3] = ["alpha", "beta", "gamma"];

fn widget_source() -> String {
    let mut s = String::from("public class Widget {\n");
    for attr in ATTRS {
        s.push_str(&format!("    private int {attr};\n"));
    }
    s.push_str("    public Widget() { }\n");
    for attr in ATTRS {
        let cap = capitalize(attr);
        s.push_str(&format!(
            "    public void set{cap}(int v) {{ this.{attr} = v; }}\n"
        ));
        s.push_str(&format!(
            "    public int get{cap}() {{ return {attr}; }}\n"
        ));
    }
    s.push_str("}\n");
    s
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().collect::<String>() + c.as_str(),
        None => String::new(),
    }
}

fn test_source(ops: &[TestOp]) -> String {
    let mut body = String::from("        Widget w = new Widget();\n");
    for (i, op) in ops.iter().enumerate() {
        match op {
            TestOp::Write(a) => {
                body.push_str(&format!("        w.set{}({i});\n", capitalize(ATTRS[*a])))
            }
            TestOp::Read(a) => {
                body.push_str(&format!("        w.get{}();\n", capitalize(ATTRS[*a])))
            }
            TestOp::AssertRead(a) => body.push_str(&format!(
                "        assertEquals(0, w.get{}());\n",
                capitalize(ATTRS[*a])
            )),
            TestOp::AssertTrue => body.push_str("        assertTrue(true);\n"),
        }
    }
    format!(
        "import org.junit.Test;\npublic class WidgetTest {{\n    @Test\n    public void testGen() {{\n{body}    }}\n}}\n"
    )
}

fn analyze_ops(ops: &[TestOp]) -> LinearizedTest {
    let apis = AssertionApis::default();
    let mut model = CodeModel::default();
    assert!(parse_unit(&widget_source(), "Widget.java", SourceKind::Production, &apis, &mut model));
    assert!(parse_unit(&test_source(ops), "WidgetTest.java", SourceKind::Test, &apis, &mut model));
    let cases = extract_test_cases(&model);
    linearize(&cases[0], &model, &apis, FlowOptions::default())
}

fn op_strategy() -> impl Strategy<Value = TestOp> {
    prop_oneof![
        (0usize..3).prop_map(TestOp::Write),
        (0usize..3).prop_map(TestOp::Read),
        (0usize..3).prop_map(TestOp::AssertRead),
        Just(TestOp::AssertTrue),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn versions_increase_strictly_per_attribute(ops in prop::collection::vec(op_strategy(), 0..8)) {
        let lin = analyze_ops(&ops);
        let mut last: BTreeMap<(OwnerId, String), u32> = BTreeMap::new();
        for call in &lin.calls {
            for fact in &call.outcome {
                if let OutcomeFact::Attribute { owner, name, version } = fact {
                    let key = (owner.clone(), name.clone());
                    if let Some(prev) = last.get(&key) {
                        prop_assert!(version > prev, "version did not increase for {key:?}");
                    }
                    last.insert(key, *version);
                }
            }
        }
    }

    #[test]
    fn verified_union_is_exactly_the_union_of_asserts(ops in prop::collection::vec(op_strategy(), 0..8)) {
        let lin = analyze_ops(&ops);
        let expected: BTreeSet<_> = lin
            .asserts
            .iter()
            .flat_map(|a| a.verified.iter().cloned())
            .collect();
        prop_assert_eq!(&lin.verified_union, &expected);
    }

    #[test]
    fn outcome_emptiness_matches_the_stereotype_rule(ops in prop::collection::vec(op_strategy(), 0..8)) {
        let lin = analyze_ops(&ops);
        for call in &lin.calls {
            let must_be_empty = matches!(
                call.stereotype,
                Stereotype::Get | Stereotype::ExternalProducer | Stereotype::Unknown
            );
            prop_assert_eq!(call.outcome.is_empty(), must_be_empty, "{}", call.label.clone());
        }
    }

    /// With one-attribute setters, the test is eager exactly when the
    /// asserts touch attributes written by more than one distinct call.
    #[test]
    fn eagerness_matches_the_distinct_covering_call_count(
        writes in prop::collection::vec(0usize..3, 1..5),
        asserted in prop::collection::vec(any::<bool>(), 3),
    ) {
        prop_assume!(asserted.iter().any(|b| *b));
        let mut ops: Vec<TestOp> = writes.iter().map(|a| TestOp::Write(*a)).collect();
        let written: BTreeSet<usize> = writes.iter().copied().collect();
        let mut asserted_attrs = BTreeSet::new();
        for (attr, on) in asserted.iter().enumerate() {
            if *on && written.contains(&attr) {
                ops.push(TestOp::AssertRead(attr));
                asserted_attrs.insert(attr);
            }
        }
        prop_assume!(!asserted_attrs.is_empty());
        let lin = analyze_ops(&ops);
        let outcome = detect_eager(&lin);
        let expected = if asserted_attrs.len() == 1 {
            DetectionResult::NotEager
        } else {
            DetectionResult::Eager
        };
        prop_assert_eq!(outcome.result, expected, "writes {:?} asserted {:?}", writes, asserted_attrs);
    }

    /// Verifying one more fact outside the covering call flips the verdict
    /// from not-eager to eager, never the other way.
    #[test]
    fn adding_an_outside_assert_is_monotone(extra in 0usize..2) {
        let base = vec![TestOp::Write(0), TestOp::Write(1), TestOp::AssertRead(0)];
        let covered = detect_eager(&analyze_ops(&base));
        prop_assert_eq!(covered.result, DetectionResult::NotEager);
        let mut widened = base.clone();
        widened.push(TestOp::AssertRead(1 + extra.min(1)));
        let flipped = detect_eager(&analyze_ops(&widened));
        prop_assert_eq!(flipped.result, DetectionResult::Eager);
    }

    /// Swapping two calls that touch disjoint attributes never changes the
    /// verdict.
    #[test]
    fn independent_call_order_does_not_change_the_verdict(
        first in 0usize..2,
        assert_on in 0usize..2,
        traffic in prop::collection::vec(0usize..3, 0..3),
    ) {
        let a = TestOp::Write(first);
        let b = TestOp::Write(1 - first);
        let mut ops_ab = vec![a.clone(), b.clone()];
        let mut ops_ba = vec![b, a];
        for t in &traffic {
            ops_ab.push(TestOp::Read(*t));
            ops_ba.push(TestOp::Read(*t));
        }
        ops_ab.push(TestOp::AssertRead(assert_on));
        ops_ba.push(TestOp::AssertRead(assert_on));
        let va = detect_eager(&analyze_ops(&ops_ab));
        let vb = detect_eager(&analyze_ops(&ops_ba));
        prop_assert_eq!(va.result, vb.result);
    }
}

#[test]
fn parsing_the_same_sources_twice_yields_equal_models() {
    use eagerscope::model::parse::parse_sources;
    use eagerscope::model::SourceRoot;
    let base = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let roots = vec![
        SourceRoot {
            path: base.join("tests").display().to_string(),
            kind: SourceKind::Test,
        },
        SourceRoot {
            path: base.join("src").display().to_string(),
            kind: SourceKind::Production,
        },
    ];
    let apis = AssertionApis::default();
    let a = parse_sources(&roots, &apis).unwrap();
    let b = parse_sources(&roots, &apis).unwrap();
    assert_eq!(a, b);
}

#[test]
fn statement_spans_are_nondecreasing_across_the_corpus() {
    use eagerscope::model::parse::parse_sources;
    use eagerscope::model::SourceRoot;
    let base = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let roots = vec![
        SourceRoot {
            path: base.join("tests").display().to_string(),
            kind: SourceKind::Test,
        },
        SourceRoot {
            path: base.join("src").display().to_string(),
            kind: SourceKind::Production,
        },
    ];
    let model = parse_sources(&roots, &AssertionApis::default()).unwrap();
    for t in &model.types {
        for m in &t.methods {
            let Some(body) = &m.body else { continue };
            for pair in body.windows(2) {
                assert!(
                    pair[0].span.0 <= pair[1].span.0,
                    "{}#{} statements out of order",
                    t.simple_name,
                    m.name
                );
            }
        }
    }
}

#[test]
fn recognized_assertions_have_arguments_across_the_corpus() {
    use eagerscope::model::parse::parse_sources;
    use eagerscope::model::{Expr, SourceRoot, StmtKind};
    let base = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let roots = vec![
        SourceRoot {
            path: base.join("tests").display().to_string(),
            kind: SourceKind::Test,
        },
        SourceRoot {
            path: base.join("src").display().to_string(),
            kind: SourceKind::Production,
        },
    ];
    let model = parse_sources(&roots, &AssertionApis::default()).unwrap();
    let mut seen = 0;
    for t in &model.types {
        for m in &t.methods {
            let Some(body) = &m.body else { continue };
            for stmt in body {
                if stmt.kind == StmtKind::AssertCall {
                    seen += 1;
                    match &stmt.expr {
                        Some(Expr::Call(c)) => assert!(
                            !c.args.is_empty(),
                            "assert without arguments in {}#{}",
                            t.simple_name,
                            m.name
                        ),
                        other => panic!("assert statement without call: {other:?}"),
                    }
                }
            }
        }
    }
    assert!(seen >= 20, "corpus should contain assertions, saw {seen}");
}
