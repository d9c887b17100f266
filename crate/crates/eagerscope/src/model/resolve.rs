//! Test-case extraction, class-under-test inference, and call resolution.

use std::collections::{BTreeMap, HashSet};

use super::{
    CallExpr, CodeModel, CutInference, Expr, Framework, MethodDecl, SourceKind, TestCase,
    TypeDecl,
};

/// Outcome of resolving a call against the model.
#[derive(Debug, Clone, PartialEq)]
pub enum Resolution {
    Resolved {
        type_index: usize,
        method_index: usize,
        /// Overload picked by declaration order because arity tied.
        arity_tie: bool,
    },
    /// Constructor call on a known type that declares no constructor.
    DefaultConstructor { type_index: usize },
    Unresolved {
        callee: String,
        receiver_type: Option<String>,
    },
}

impl Resolution {
    pub fn method<'m>(&self, model: &'m CodeModel) -> Option<&'m MethodDecl> {
        match self {
            Resolution::Resolved {
                type_index,
                method_index,
                ..
            } => Some(&model.types[*type_index].methods[*method_index]),
            _ => None,
        }
    }

    pub fn declaring_type<'m>(&self, model: &'m CodeModel) -> Option<&'m TypeDecl> {
        match self {
            Resolution::Resolved { type_index, .. }
            | Resolution::DefaultConstructor { type_index } => Some(&model.types[*type_index]),
            Resolution::Unresolved { .. } => None,
        }
    }
}

/// Declared types of the names visible inside one method body.
/// Locals and parameters shadow fields.
#[derive(Debug, Clone, Default)]
pub struct TypeEnv {
    vars: BTreeMap<String, String>,
}

impl TypeEnv {
    pub fn declared_type(&self, name: &str) -> Option<&str> {
        self.vars.get(name).map(|s| s.as_str())
    }

    pub fn bind(&mut self, name: &str, type_name: &str) {
        self.vars.insert(name.to_string(), type_name.to_string());
    }
}

/// Build the declared-type environment for a method of `owner`.
pub fn build_type_env(method: &MethodDecl, owner: &TypeDecl) -> TypeEnv {
    let mut env = TypeEnv::default();
    for f in &owner.fields {
        env.bind(&f.name, &f.type_name);
    }
    for p in &method.params {
        env.bind(&p.name, &p.type_name);
    }
    if let Some(body) = &method.body {
        for stmt in body {
            if let (Some(var), Some(ty)) = (&stmt.assigned_var, &stmt.declared_type) {
                env.bind(var, ty);
            }
        }
    }
    env
}

/// Declared type of an expression, or `None` when tracking cannot follow it.
pub fn expr_declared_type(
    expr: &Expr,
    env: &TypeEnv,
    context_type: usize,
    model: &CodeModel,
) -> Option<String> {
    match expr {
        Expr::Name(n) => env.declared_type(n).map(|s| s.to_string()),
        Expr::This => Some(model.types[context_type].simple_name.clone()),
        Expr::Cast { type_name, .. } => Some(type_name.clone()),
        Expr::Call(c) => match resolve_call(c, env, context_type, model) {
            Resolution::Resolved {
                type_index,
                method_index,
                ..
            } => {
                let m = &model.types[type_index].methods[method_index];
                if m.is_constructor {
                    Some(model.types[type_index].simple_name.clone())
                } else {
                    m.return_type.clone()
                }
            }
            Resolution::DefaultConstructor { type_index } => {
                Some(model.types[type_index].simple_name.clone())
            }
            Resolution::Unresolved { .. } => None,
        },
        Expr::FieldAccess { base, name } => {
            if matches!(base.as_ref(), Expr::This) {
                model.types[context_type]
                    .field(name)
                    .map(|f| f.type_name.clone())
            } else {
                None
            }
        }
        Expr::Unary { expr, .. } => expr_declared_type(expr, env, context_type, model),
        _ => None,
    }
}

/// Resolve a call occurring inside a method of `context_type`.
///
/// Receivers are tracked by declared type only; static calls resolve by
/// type name; constructors resolve to the invoked constructor. Overloads
/// match by arity, ties broken by declaration order.
pub fn resolve_call(
    call: &CallExpr,
    env: &TypeEnv,
    context_type: usize,
    model: &CodeModel,
) -> Resolution {
    if call.is_constructor {
        let base = call.callee_name.trim_end_matches("[]");
        return match model.type_index(base) {
            Some(ti) => {
                match find_method(model, ti, &model.types[ti].simple_name.clone(), call.args.len(), true) {
                    Some((ti, mi, tie)) => Resolution::Resolved {
                        type_index: ti,
                        method_index: mi,
                        arity_tie: tie,
                    },
                    None => Resolution::DefaultConstructor { type_index: ti },
                }
            }
            None => Resolution::Unresolved {
                callee: call.callee_name.clone(),
                receiver_type: None,
            },
        };
    }

    let start_type = match call.receiver.as_deref() {
        None | Some(Expr::This) => Some(model.types[context_type].simple_name.clone()),
        Some(Expr::Name(n)) => match env.declared_type(n) {
            Some(t) => Some(t.to_string()),
            // not a variable: try as a type name for a static call
            None => {
                if model.type_index(n).is_some() {
                    Some(n.to_string())
                } else {
                    None
                }
            }
        },
        Some(other) => expr_declared_type(other, env, context_type, model),
    };

    let receiver_type = start_type.clone();
    let start_index = start_type.and_then(|t| model.type_index(t.trim_end_matches("[]")));
    match start_index {
        Some(ti) => match find_method(model, ti, &call.callee_name, call.args.len(), false) {
            Some((ti, mi, tie)) => Resolution::Resolved {
                type_index: ti,
                method_index: mi,
                arity_tie: tie,
            },
            None => Resolution::Unresolved {
                callee: call.callee_name.clone(),
                receiver_type,
            },
        },
        None => Resolution::Unresolved {
            callee: call.callee_name.clone(),
            receiver_type,
        },
    }
}

/// Search a type and its resolvable supertypes for a method. Prefers an
/// exact arity match; falls back to the first name match (varargs and
/// partially modelled overloads).
fn find_method(
    model: &CodeModel,
    type_index: usize,
    name: &str,
    arity: usize,
    constructor: bool,
) -> Option<(usize, usize, bool)> {
    let mut visited = HashSet::new();
    let mut stack = vec![type_index];
    while let Some(ti) = stack.pop() {
        if !visited.insert(ti) {
            continue;
        }
        let t = &model.types[ti];
        let candidates: Vec<usize> = t
            .methods
            .iter()
            .enumerate()
            .filter(|(_, m)| m.is_constructor == constructor && m.name == name)
            .map(|(i, _)| i)
            .collect();
        if !candidates.is_empty() {
            let exact: Vec<usize> = candidates
                .iter()
                .copied()
                .filter(|&i| t.methods[i].arity() == arity)
                .collect();
            return match exact.as_slice() {
                [only] => Some((ti, *only, false)),
                [first, ..] => Some((ti, *first, true)),
                [] => Some((ti, candidates[0], true)),
            };
        }
        for s in &t.supertypes {
            if let Some(si) = model.type_index(s) {
                stack.push(si);
            }
        }
    }
    None
}

/// Recognize test methods and infer each one's class under test.
///
/// A method is a test case iff annotated `@Test`, or named `test*` with a
/// public void signature in a class extending `TestCase`. Results are
/// sorted by file, class, then method name.
pub fn extract_test_cases(model: &CodeModel) -> Vec<TestCase> {
    let mut cases = Vec::new();
    for (ti, t) in model.types.iter().enumerate() {
        if t.source != SourceKind::Test {
            continue;
        }
        let junit3 = t.supertypes.iter().any(|s| s.ends_with("TestCase"));
        let junit5 = t.imports.iter().any(|i| i.contains("org.junit.jupiter"));
        let (cut, cut_inference) = infer_cut(t, model);
        for (mi, m) in t.methods.iter().enumerate() {
            let annotated = m.has_annotation("Test");
            let junit3_style = junit3
                && !m.is_constructor
                && m.is_public
                && m.return_type.is_none()
                && m.name.starts_with("test");
            if !(annotated || junit3_style) {
                continue;
            }
            let framework = if annotated {
                if junit5 {
                    Framework::JUnit5
                } else {
                    Framework::JUnit4
                }
            } else {
                Framework::JUnit3
            };
            cases.push(TestCase {
                owning_class: t.qualified_name.clone(),
                file: t.file.clone(),
                method_name: m.name.clone(),
                type_index: ti,
                method_index: mi,
                cut: cut.clone(),
                cut_inference,
                framework,
            });
        }
    }
    cases.sort_by(|a, b| {
        (&a.file, &a.owning_class, &a.method_name).cmp(&(&b.file, &b.owning_class, &b.method_name))
    });
    cases
}

/// Strip Test/Tests/TestCase from the class name and match a production
/// type; fall back to the production type most often instantiated or
/// statically invoked in the test class.
fn infer_cut(test_class: &TypeDecl, model: &CodeModel) -> (Option<String>, CutInference) {
    let mut candidates = Vec::new();
    let name = test_class.simple_name.as_str();
    for suffix in ["TestCase", "Tests", "Test"] {
        if let Some(stripped) = name.strip_suffix(suffix) {
            if !stripped.is_empty() {
                candidates.push(stripped.to_string());
            }
        }
    }
    if let Some(stripped) = name.strip_prefix("Test") {
        if !stripped.is_empty() {
            candidates.push(stripped.to_string());
        }
    }
    for cand in &candidates {
        if let Some(t) = model
            .production_types()
            .find(|t| &t.simple_name == cand)
        {
            return (Some(t.qualified_name.clone()), CutInference::Name);
        }
    }

    // frequency fallback: constructor calls and static invocations of
    // production types anywhere in the test class
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for m in &test_class.methods {
        let Some(body) = &m.body else { continue };
        let env = build_type_env(m, test_class);
        for stmt in body {
            for call in &stmt.calls {
                let key = if call.is_constructor {
                    Some(call.callee_name.trim_end_matches("[]").to_string())
                } else {
                    match call.receiver_name() {
                        Some(r) if env.declared_type(r).is_none() => Some(r.to_string()),
                        _ => None,
                    }
                };
                if let Some(k) = key {
                    if let Some(t) = model.production_types().find(|t| t.simple_name == k) {
                        *counts.entry(t.qualified_name.clone()).or_default() += 1;
                    }
                }
            }
        }
    }
    match counts.iter().max_by_key(|(name, n)| (*n, std::cmp::Reverse(name.as_str()))) {
        Some((name, _)) => (Some(name.clone()), CutInference::Frequency),
        None => (None, CutInference::Unresolved),
    }
}
