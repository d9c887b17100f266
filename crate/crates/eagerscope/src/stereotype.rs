//! Behavioral method stereotypes derived from field reads and writes.
//!
//! Every resolved method is classified relative to a class under test:
//! constructors and static factories are creational, methods that write
//! fields of the CUT are mutators, methods returning a field directly are
//! gets, and side-effect-free computing methods are producers, internal
//! or external depending on where they are implemented.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::model::resolve::Resolution;
use crate::model::{AssignTarget, CodeModel, Expr, MethodDecl, Stmt, TypeDecl};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Stereotype {
    Creational,
    Mutator,
    Get,
    InternalProducer,
    ExternalProducer,
    Unknown,
}

impl Stereotype {
    pub fn label(&self) -> &'static str {
        match self {
            Stereotype::Creational => "creational",
            Stereotype::Mutator => "mutator",
            Stereotype::Get => "get",
            Stereotype::InternalProducer => "internal-producer",
            Stereotype::ExternalProducer => "external-producer",
            Stereotype::Unknown => "unknown",
        }
    }
}

/// Field-level footprint of one method.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct FieldEffect {
    pub reads: BTreeSet<String>,
    pub writes: BTreeSet<String>,
    /// Writes into fields of parameter objects: (parameter, field).
    pub param_writes: BTreeSet<(String, String)>,
    /// Set when every return statement returns the same bare field.
    pub returns_field: Option<String>,
    pub has_return_value: bool,
    /// Transitive analysis hit the depth limit.
    pub approximate: bool,
}

/// Compute reads/writes of the declaring type's fields, following calls to
/// same-type methods up to `depth` transitive levels.
pub fn field_effects(
    type_index: usize,
    method_index: usize,
    model: &CodeModel,
    depth: usize,
) -> FieldEffect {
    let mut visited = HashSet::new();
    effects_inner(type_index, method_index, model, depth, &mut visited)
}

fn effects_inner(
    type_index: usize,
    method_index: usize,
    model: &CodeModel,
    depth: usize,
    visited: &mut HashSet<(usize, usize)>,
) -> FieldEffect {
    let owner = &model.types[type_index];
    let method = &owner.methods[method_index];
    let mut eff = FieldEffect {
        has_return_value: method.return_type.is_some(),
        ..FieldEffect::default()
    };
    let Some(body) = &method.body else {
        return eff;
    };
    if !visited.insert((type_index, method_index)) {
        eff.approximate = true;
        return eff;
    }

    let fields: BTreeSet<&str> = owner.fields.iter().map(|f| f.name.as_str()).collect();
    let params: BTreeSet<&str> = method.params.iter().map(|p| p.name.as_str()).collect();
    let mut shadowed: BTreeSet<&str> = params.clone();
    for stmt in body {
        if let (Some(v), Some(_)) = (&stmt.assigned_var, &stmt.declared_type) {
            shadowed.insert(v.as_str());
        }
    }

    let mut return_fields: Vec<Option<String>> = Vec::new();
    for stmt in body {
        for target in &stmt.assign_targets {
            match target {
                AssignTarget::ThisField(f) => {
                    eff.writes.insert(f.clone());
                }
                AssignTarget::Bare(n) => {
                    if fields.contains(n.as_str()) && !shadowed.contains(n.as_str()) {
                        eff.writes.insert(n.clone());
                    }
                }
                AssignTarget::Qualified { base, field } => {
                    if params.contains(base.as_str()) {
                        eff.param_writes.insert((base.clone(), field.clone()));
                    }
                }
                AssignTarget::Other => {}
            }
        }
        if let Some(e) = &stmt.expr {
            collect_field_reads(e, owner, &fields, &shadowed, &mut eff.reads);
        }
        if stmt.kind == crate::model::StmtKind::Return {
            return_fields.push(bare_field_return(stmt, &fields, &shadowed));
        }

        if depth == 0 {
            if stmt.calls.iter().any(|c| !c.is_constructor) {
                eff.approximate = true;
            }
            continue;
        }
        for call in &stmt.calls {
            if call.is_constructor {
                continue;
            }
            let same_type = match call.receiver.as_deref() {
                None | Some(Expr::This) => true,
                Some(Expr::Name(n)) => *n == owner.simple_name,
                _ => false,
            };
            if !same_type {
                continue;
            }
            if let Some(mi) = owner
                .methods
                .iter()
                .position(|m| !m.is_constructor && m.name == call.callee_name)
            {
                let sub = effects_inner(type_index, mi, model, depth - 1, visited);
                eff.reads.extend(sub.reads);
                eff.writes.extend(sub.writes);
                eff.approximate |= sub.approximate;
            }
        }
    }

    if !return_fields.is_empty() {
        let first = return_fields[0].clone();
        if first.is_some() && return_fields.iter().all(|r| *r == first) {
            eff.returns_field = first;
            if let Some(f) = &eff.returns_field {
                eff.reads.insert(f.clone());
            }
        }
    }
    eff
}

fn bare_field_return(
    stmt: &Stmt,
    fields: &BTreeSet<&str>,
    shadowed: &BTreeSet<&str>,
) -> Option<String> {
    match &stmt.expr {
        Some(Expr::Name(n)) if fields.contains(n.as_str()) && !shadowed.contains(n.as_str()) => {
            Some(n.clone())
        }
        Some(Expr::FieldAccess { base, name })
            if matches!(base.as_ref(), Expr::This) && fields.contains(name.as_str()) =>
        {
            Some(name.clone())
        }
        _ => None,
    }
}

fn collect_field_reads(
    expr: &Expr,
    owner: &TypeDecl,
    fields: &BTreeSet<&str>,
    shadowed: &BTreeSet<&str>,
    out: &mut BTreeSet<String>,
) {
    match expr {
        Expr::Name(n) => {
            if fields.contains(n.as_str()) && !shadowed.contains(n.as_str()) {
                out.insert(n.clone());
            }
        }
        Expr::FieldAccess { base, name } => {
            let own_base = match base.as_ref() {
                Expr::This => true,
                // reads through a cast or variable of the own type, as in
                // `((DirEntry) other).size`
                Expr::Cast { type_name, .. } => type_name == &owner.simple_name,
                Expr::Name(_) => fields.contains(name.as_str()),
                _ => false,
            };
            if own_base && fields.contains(name.as_str()) {
                out.insert(name.clone());
            }
            collect_field_reads(base, owner, fields, shadowed, out);
        }
        Expr::Call(c) => {
            if let Some(r) = &c.receiver {
                collect_field_reads(r, owner, fields, shadowed, out);
            }
            for a in &c.args {
                collect_field_reads(a, owner, fields, shadowed, out);
            }
        }
        Expr::Cast { expr, .. } | Expr::Unary { expr, .. } | Expr::Lambda(expr) => {
            collect_field_reads(expr, owner, fields, shadowed, out)
        }
        Expr::Binary { lhs, rhs, .. } => {
            collect_field_reads(lhs, owner, fields, shadowed, out);
            collect_field_reads(rhs, owner, fields, shadowed, out);
        }
        Expr::ArrayAccess { base, index } => {
            collect_field_reads(base, owner, fields, shadowed, out);
            collect_field_reads(index, owner, fields, shadowed, out);
        }
        _ => {}
    }
}

/// A classified method with the evidence behind the decision.
#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub stereotype: Stereotype,
    pub effects: FieldEffect,
    pub rationale: &'static str,
    pub declaring_type: Option<String>,
    pub method_name: String,
    pub is_static: bool,
    pub diagnostic: Option<String>,
}

impl Classification {
    fn unknown(method_name: String, rationale: &'static str) -> Self {
        Classification {
            stereotype: Stereotype::Unknown,
            effects: FieldEffect::default(),
            rationale,
            declaring_type: None,
            method_name,
            is_static: false,
            diagnostic: None,
        }
    }

    /// Serializable evidence row for report output.
    pub fn evidence(&self) -> StereotypeEvidence {
        StereotypeEvidence {
            method: self.method_name.clone(),
            declaring_type: self.declaring_type.clone(),
            stereotype: self.stereotype.label().to_string(),
            reads: self.effects.reads.iter().cloned().collect(),
            writes: self.effects.writes.iter().cloned().collect(),
            rationale_branch: self.rationale.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StereotypeEvidence {
    pub method: String,
    pub declaring_type: Option<String>,
    pub stereotype: String,
    pub reads: Vec<String>,
    pub writes: Vec<String>,
    pub rationale_branch: String,
}

/// Classify a resolved or unresolved method relative to a class under test.
///
/// `value_position` marks calls whose result is consumed as a value; an
/// unresolved external call in value position is assumed to be a pure
/// producer, while an unresolved statement-position call stays unknown.
pub fn classify_method(
    resolution: &Resolution,
    value_position: bool,
    cut: Option<&str>,
    model: &CodeModel,
    depth: usize,
) -> Classification {
    match resolution {
        Resolution::DefaultConstructor { type_index } => {
            // no constructor body to inspect: conservatively treat every
            // declared field as initialized
            let t = &model.types[*type_index];
            let effects = FieldEffect {
                writes: t.fields.iter().map(|f| f.name.clone()).collect(),
                ..FieldEffect::default()
            };
            Classification {
                stereotype: Stereotype::Creational,
                effects,
                rationale: "default-constructor",
                declaring_type: Some(t.qualified_name.clone()),
                method_name: t.simple_name.clone(),
                is_static: false,
                diagnostic: None,
            }
        }
        Resolution::Resolved {
            type_index,
            method_index,
            ..
        } => classify_resolved(*type_index, *method_index, cut, model, depth),
        Resolution::Unresolved { callee, .. } => {
            if value_position {
                Classification {
                    stereotype: Stereotype::ExternalProducer,
                    effects: FieldEffect {
                        has_return_value: true,
                        ..FieldEffect::default()
                    },
                    rationale: "unresolved-external-value",
                    declaring_type: None,
                    method_name: callee.clone(),
                    is_static: false,
                    diagnostic: None,
                }
            } else {
                Classification::unknown(callee.clone(), "unresolved-external-void")
            }
        }
    }
}

fn classify_resolved(
    type_index: usize,
    method_index: usize,
    cut: Option<&str>,
    model: &CodeModel,
    depth: usize,
) -> Classification {
    let owner = &model.types[type_index];
    let method = &owner.methods[method_index];
    let in_cut = cut
        .map(|c| {
            owner.qualified_name == c
                || owner.simple_name == c.rsplit('.').next().unwrap_or(c)
        })
        .unwrap_or(false);

    let mut out = Classification {
        stereotype: Stereotype::Unknown,
        effects: FieldEffect::default(),
        rationale: "",
        declaring_type: Some(owner.qualified_name.clone()),
        method_name: method.name.clone(),
        is_static: method.is_static,
        diagnostic: None,
    };

    if method.is_constructor {
        out.stereotype = Stereotype::Creational;
        out.effects = field_effects(type_index, method_index, model, depth);
        out.rationale = "constructor";
        return out;
    }
    if method.is_static && method.return_type.as_deref() == Some(owner.simple_name.as_str()) {
        out.stereotype = Stereotype::Creational;
        out.effects = field_effects(type_index, method_index, model, depth);
        out.rationale = "static-factory";
        return out;
    }

    if method.body.is_none() {
        return classify_by_name(out, method, in_cut);
    }

    let eff = field_effects(type_index, method_index, model, depth);
    out.effects = eff;
    if !out.effects.writes.is_empty() || !out.effects.param_writes.is_empty() {
        if in_cut {
            out.stereotype = Stereotype::Mutator;
            out.rationale = "writes-cut-state";
        } else {
            out.stereotype = Stereotype::Unknown;
            out.rationale = "mutator-like-outside-cut";
            out.diagnostic = Some(format!(
                "{}.{} mutates state but is not implemented in the class under test",
                owner.simple_name, method.name
            ));
        }
        return out;
    }
    if out.effects.returns_field.is_some() {
        out.stereotype = Stereotype::Get;
        out.rationale = "returns-field-directly";
        return out;
    }
    if out.effects.has_return_value {
        if in_cut {
            out.stereotype = Stereotype::InternalProducer;
            out.rationale = if out.effects.reads.is_empty() {
                "computes-from-arguments-in-cut"
            } else {
                "computes-from-state-in-cut"
            };
        } else {
            out.stereotype = Stereotype::ExternalProducer;
            out.rationale = "computes-outside-cut";
        }
        return out;
    }
    out.stereotype = Stereotype::Unknown;
    out.rationale = "void-without-effects";
    out
}

/// Fallback for methods without a body (interface or abstract): infer the
/// effect from the conventional name so setters still register as writes.
fn classify_by_name(
    mut out: Classification,
    method: &MethodDecl,
    in_cut: bool,
) -> Classification {
    let name = method.name.as_str();
    let attr_suffix = |prefix: &str| {
        let rest = &name[prefix.len()..];
        let mut c = rest.chars();
        match c.next() {
            Some(first) => Some(format!("{}{}", first.to_lowercase(), c.as_str())),
            None => None,
        }
    };
    for prefix in ["set", "add", "remove", "clear"] {
        if name.starts_with(prefix) && name.len() > prefix.len() {
            if let Some(attr) = attr_suffix(prefix) {
                if in_cut {
                    out.effects.writes.insert(attr);
                    out.effects.has_return_value = method.return_type.is_some();
                    out.stereotype = Stereotype::Mutator;
                    out.rationale = "name-fallback-mutator";
                } else {
                    out.stereotype = Stereotype::Unknown;
                    out.rationale = "mutator-like-outside-cut";
                    out.diagnostic = Some(format!(
                        "{} mutates state by name but is not implemented in the class under test",
                        name
                    ));
                }
                return out;
            }
        }
    }
    if method.return_type.is_some() {
        for prefix in ["get", "is"] {
            if name.starts_with(prefix) && name.len() > prefix.len() {
                if let Some(attr) = attr_suffix(prefix) {
                    out.effects.reads.insert(attr.clone());
                    out.effects.returns_field = Some(attr);
                    out.effects.has_return_value = true;
                    out.stereotype = Stereotype::Get;
                    out.rationale = "name-fallback-get";
                    return out;
                }
            }
        }
        out.effects.has_return_value = true;
        if in_cut {
            out.stereotype = Stereotype::InternalProducer;
            out.rationale = "bodyless-producer-in-cut";
        } else {
            out.stereotype = Stereotype::ExternalProducer;
            out.rationale = "bodyless-producer-outside-cut";
        }
        return out;
    }
    out.stereotype = Stereotype::Unknown;
    out.rationale = "bodyless-void";
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse::{parse_unit, AssertionApis};
    use crate::model::resolve::{build_type_env, resolve_call};
    use crate::model::SourceKind;

    fn production_model(sources: &[&str]) -> CodeModel {
        let mut model = CodeModel::default();
        let apis = AssertionApis::default();
        for (i, src) in sources.iter().enumerate() {
            assert!(parse_unit(
                src,
                &format!("P{i}.java"),
                SourceKind::Production,
                &apis,
                &mut model
            ));
        }
        model
    }

    const DIR_ENTRY: &str = r#"
        public class DirEntry {
            private long size;
            public DirEntry() { }
            public void setSize(long size) { this.size = size; }
            public long getSize() { return size; }
            public boolean equals(Object other) {
                if (!(other instanceof DirEntry)) {
                    return false;
                }
                return this.size == ((DirEntry) other).size;
            }
        }
    "#;

    fn effects_of(model: &CodeModel, type_name: &str, method: &str) -> FieldEffect {
        let ti = model.type_index(type_name).unwrap();
        let mi = model.types[ti]
            .methods
            .iter()
            .position(|m| m.name == method)
            .unwrap();
        field_effects(ti, mi, model, 2)
    }

    #[test]
    fn setter_writes_one_field_and_reads_nothing() {
        let model = production_model(&[DIR_ENTRY]);
        let eff = effects_of(&model, "DirEntry", "setSize");
        assert_eq!(eff.writes.iter().collect::<Vec<_>>(), vec!["size"]);
        assert!(eff.reads.is_empty());
        assert!(!eff.has_return_value);
    }

    #[test]
    fn getter_reads_and_returns_its_field() {
        let model = production_model(&[DIR_ENTRY]);
        let eff = effects_of(&model, "DirEntry", "getSize");
        assert_eq!(eff.returns_field.as_deref(), Some("size"));
        assert!(eff.reads.contains("size"));
        assert!(eff.writes.is_empty());
    }

    #[test]
    fn equals_reads_state_and_computes() {
        let model = production_model(&[DIR_ENTRY]);
        let eff = effects_of(&model, "DirEntry", "equals");
        assert!(eff.reads.contains("size"));
        assert!(eff.writes.is_empty());
        assert!(eff.has_return_value);
        assert_eq!(eff.returns_field, None);
    }

    #[test]
    fn transitive_writes_follow_same_type_calls() {
        let model = production_model(&[r#"
            public class Pair {
                private int a;
                private int b;
                public void setBoth(int x) {
                    setA(x);
                    setB(x);
                }
                public void setA(int a) { this.a = a; }
                public void setB(int b) { this.b = b; }
            }
        "#]);
        let eff = effects_of(&model, "Pair", "setBoth");
        assert!(eff.writes.contains("a") && eff.writes.contains("b"));
        assert!(!eff.approximate);
    }

    #[test]
    fn recursion_truncates_and_marks_approximate() {
        let model = production_model(&[r#"
            public class Loop {
                private int n;
                public void spin(int i) { this.n = i; spin(i); }
            }
        "#]);
        let eff = effects_of(&model, "Loop", "spin");
        assert!(eff.writes.contains("n"));
        assert!(eff.approximate);
    }

    fn classify_in(
        model: &CodeModel,
        type_name: &str,
        method: &str,
        cut: Option<&str>,
    ) -> Classification {
        let ti = model.type_index(type_name).unwrap();
        let mi = model.types[ti]
            .methods
            .iter()
            .position(|m| m.name == method)
            .unwrap();
        let res = Resolution::Resolved {
            type_index: ti,
            method_index: mi,
            arity_tie: false,
        };
        classify_method(&res, true, cut, model, 2)
    }

    #[test]
    fn paper_branch_examples() {
        let model = production_model(&[DIR_ENTRY]);
        // new DirEntry() -> creational
        let ctor = classify_in(&model, "DirEntry", "DirEntry", Some("DirEntry"));
        assert_eq!(ctor.stereotype, Stereotype::Creational);
        // equals overridden in the CUT -> internal producer
        let eq = classify_in(&model, "DirEntry", "equals", Some("DirEntry"));
        assert_eq!(eq.stereotype, Stereotype::InternalProducer);
        // getSize -> get, and get stays get when the CUT is someone else
        let get = classify_in(&model, "DirEntry", "getSize", Some("Other"));
        assert_eq!(get.stereotype, Stereotype::Get);
        // setSize relative to a different CUT -> unknown with a diagnostic
        let set = classify_in(&model, "DirEntry", "setSize", Some("Other"));
        assert_eq!(set.stereotype, Stereotype::Unknown);
        assert!(set.diagnostic.is_some());
        // setSize relative to its own class -> mutator
        let set = classify_in(&model, "DirEntry", "setSize", Some("DirEntry"));
        assert_eq!(set.stereotype, Stereotype::Mutator);
    }

    #[test]
    fn unresolved_external_call_with_result_is_external_producer() {
        let model = production_model(&[DIR_ENTRY]);
        let res = Resolution::Unresolved {
            callee: "contains".into(),
            receiver_type: Some("List".into()),
        };
        let c = classify_method(&res, true, Some("DirEntry"), &model, 2);
        assert_eq!(c.stereotype, Stereotype::ExternalProducer);
        let void = classify_method(&res, false, Some("DirEntry"), &model, 2);
        assert_eq!(void.stereotype, Stereotype::Unknown);
    }

    #[test]
    fn static_factory_is_creational_and_static_producer_is_internal() {
        let model = production_model(&[r#"
            public class MediaWiki {
                public static MediaWiki forHost(String host) { return new MediaWiki(); }
                public static String decode(String html) { return html.replace("&quot;", "\""); }
            }
        "#]);
        let factory = classify_in(&model, "MediaWiki", "forHost", Some("MediaWiki"));
        assert_eq!(factory.stereotype, Stereotype::Creational);
        assert_eq!(factory.rationale, "static-factory");
        let decode = classify_in(&model, "MediaWiki", "decode", Some("MediaWiki"));
        assert_eq!(decode.stereotype, Stereotype::InternalProducer);
        assert_eq!(decode.rationale, "computes-from-arguments-in-cut");
    }

    #[test]
    fn name_fallback_covers_bodyless_methods() {
        let model = production_model(&[r#"
            public interface ConnectionSource {
                void setUsername(String username);
                String getUsername();
                boolean isOpen();
                int compute();
            }
        "#]);
        let set = classify_in(&model, "ConnectionSource", "setUsername", Some("ConnectionSource"));
        assert_eq!(set.stereotype, Stereotype::Mutator);
        assert!(set.effects.writes.contains("username"));
        let get = classify_in(&model, "ConnectionSource", "getUsername", Some("Other"));
        assert_eq!(get.stereotype, Stereotype::Get);
        assert_eq!(get.effects.returns_field.as_deref(), Some("username"));
        let is = classify_in(&model, "ConnectionSource", "isOpen", Some("Other"));
        assert_eq!(is.stereotype, Stereotype::Get);
        let compute = classify_in(&model, "ConnectionSource", "compute", Some("ConnectionSource"));
        assert_eq!(compute.stereotype, Stereotype::InternalProducer);
    }

    #[test]
    fn producer_on_parent_class_is_external() {
        let model = production_model(&[
            r#"
            public class Base {
                private int x;
                public int doubled() { return x * 2; }
            }
            "#,
            r#"
            public class Child extends Base {
            }
            "#,
        ]);
        let c = classify_in(&model, "Base", "doubled", Some("Child"));
        assert_eq!(c.stereotype, Stereotype::ExternalProducer);
    }

    #[test]
    fn classification_is_deterministic_and_partitioned() {
        let model = production_model(&[DIR_ENTRY]);
        for name in ["DirEntry", "setSize", "getSize", "equals"] {
            let a = classify_in(&model, "DirEntry", name, Some("DirEntry"));
            let b = classify_in(&model, "DirEntry", name, Some("DirEntry"));
            assert_eq!(a, b);
        }
        // disjointness: a get never writes, a mutator always writes
        let get = classify_in(&model, "DirEntry", "getSize", Some("DirEntry"));
        assert!(get.effects.writes.is_empty());
        let mutator = classify_in(&model, "DirEntry", "setSize", Some("DirEntry"));
        assert!(!mutator.effects.writes.is_empty());
    }

    #[test]
    fn resolved_calls_classify_like_the_worked_example() {
        let mut model = production_model(&[DIR_ENTRY]);
        let apis = AssertionApis::default();
        assert!(parse_unit(
            r#"
            import org.junit.Test;
            public class DirEntryTest {
                @Test
                public void test2() {
                    DirEntry dirEntry0 = new DirEntry();
                    dirEntry0.setSize((-1053L));
                    DirEntry dirEntry1 = new DirEntry();
                    boolean boolean0 = dirEntry0.equals((Object) dirEntry1);
                    assertEquals((-1053L), dirEntry0.getSize());
                    assertEquals(false, boolean0);
                }
            }
            "#,
            "DirEntryTest.java",
            SourceKind::Test,
            &apis,
            &mut model,
        ));
        let cases = crate::model::resolve::extract_test_cases(&model);
        let case = &cases[0];
        let method = case.method(&model);
        let env = build_type_env(method, case.owning_type(&model));
        let body = method.body.as_ref().unwrap();

        let expected = [
            (0, 0, Stereotype::Creational),
            (1, 0, Stereotype::Mutator),
            (2, 0, Stereotype::Creational),
            (3, 0, Stereotype::InternalProducer),
            (4, 0, Stereotype::Get),
        ];
        for (stmt_idx, call_idx, want) in expected {
            let call = &body[stmt_idx].calls[call_idx];
            let res = resolve_call(call, &env, case.type_index, &model);
            let got = classify_method(&res, true, case.cut.as_deref(), &model, 2);
            assert_eq!(got.stereotype, want, "stmt {stmt_idx} call {call_idx}");
        }
    }
}
