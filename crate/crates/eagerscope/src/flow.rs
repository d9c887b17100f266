//! Linearizes a test case into versioned call and assertion records.
//!
//! Each statement of the test body is visited in source order. Standalone
//! calls become [`CallRecord`]s; assertion statements become
//! [`AssertRecord`]s that own the records of the calls nested in their
//! arguments. Attribute writes are versioned so that a read always binds
//! to the latest write before it, and the per-call outcome sets plus the
//! union of verified facts feed the eagerness decision.
//!
//! Helpers declared in the test class itself are not calls worth
//! verifying; a helper call is summarized into a single record carrying
//! the helper's net effect (most importantly, an object it builds and
//! returns appears as one creational record at the call site).

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::model::parse::AssertionApis;
use crate::model::resolve::{build_type_env, resolve_call, Resolution, TypeEnv};
use crate::model::{CallExpr, CodeModel, Expr, StmtKind, TestCase, TypeDecl};
use crate::stereotype::{classify_method, Classification, Stereotype, StereotypeEvidence};

/// Identity of a tracked object or value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum OwnerId {
    /// Local variable; `rebind` distinguishes successive bindings.
    Var { name: String, rebind: u32 },
    /// Intermediate value never bound to a variable.
    Synth { label: String, index: u32 },
    /// A type, for static attributes.
    Type(String),
}

impl fmt::Display for OwnerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OwnerId::Var { name, rebind: 0 } => write!(f, "{name}"),
            OwnerId::Var { name, rebind } => write!(f, "{name}#{rebind}"),
            OwnerId::Synth { label, index } => write!(f, "{label}#{index}"),
            OwnerId::Type(t) => write!(f, "{t}"),
        }
    }
}

/// A versioned attribute write/read or a returned value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OutcomeFact {
    Attribute {
        owner: OwnerId,
        name: String,
        version: u32,
    },
    Returned {
        value: OwnerId,
    },
}

impl fmt::Display for OutcomeFact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OutcomeFact::Attribute {
                owner,
                name,
                version,
            } => write!(f, "{owner}.{name}@v{version}"),
            OutcomeFact::Returned { value } => write!(f, "{value}"),
        }
    }
}

impl Serialize for OutcomeFact {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub type FactSet = BTreeSet<OutcomeFact>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CallRecord {
    /// Position in the flat call order of the test.
    pub index: usize,
    /// Callee name, or the constructed type for constructors.
    pub label: String,
    pub stereotype: Stereotype,
    /// Index of the owning assert when the call is nested in one.
    pub within_assert: Option<usize>,
    /// What an assertion would have to check to verify this call.
    pub outcome: FactSet,
    pub span: (usize, usize),
    /// Record summarizes a test-local helper.
    pub inlined_helper: bool,
    /// Classification evidence behind the stereotype.
    pub stereotype_evidence: StereotypeEvidence,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssertRecord {
    pub index: usize,
    /// Facts this assert statement verifies.
    pub verified: FactSet,
    /// Indices into `LinearizedTest::calls` for nested calls.
    pub nested_calls: Vec<usize>,
    pub span: (usize, usize),
    /// Assert checks an exceptional path (assertThrows or expected=).
    pub exceptional: bool,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct LinearizedTest {
    pub calls: Vec<CallRecord>,
    pub asserts: Vec<AssertRecord>,
    /// Union over every assert's verified set.
    pub verified_union: FactSet,
    pub diagnostics: Vec<String>,
}

impl LinearizedTest {
    /// Outcome sets in call order (Step 1 of the heuristic).
    pub fn meth_outcomes(&self) -> Vec<&FactSet> {
        self.calls.iter().map(|c| &c.outcome).collect()
    }

    /// Per-assert verified sets plus their union (Step 2 of the heuristic).
    pub fn verified_info(&self) -> (Vec<&FactSet>, &FactSet) {
        (
            self.asserts.iter().map(|a| &a.verified).collect(),
            &self.verified_union,
        )
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FlowOptions {
    pub inline_depth: usize,
    pub effect_depth: usize,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions {
            inline_depth: 2,
            effect_depth: 2,
        }
    }
}

/// Run the whole flow analysis for one test case.
pub fn linearize(
    test: &TestCase,
    model: &CodeModel,
    apis: &AssertionApis,
    opts: FlowOptions,
) -> LinearizedTest {
    let mut flow = Flow::new(test, model, apis, opts);
    flow.run();
    flow.finish()
}

/// What a variable currently denotes.
#[derive(Debug, Clone)]
enum Binding {
    /// Object constructed here; attributes are tracked under `id`.
    Constructed { id: OwnerId },
    /// Opaque value carrying the facts behind it.
    Facts(FactSet),
    /// Literal or untracked value.
    Inert,
}

/// Value of an evaluated expression: the facts a consumer of the value
/// would be verifying, plus the object identity when the expression
/// denotes a tracked object.
#[derive(Debug, Clone, Default)]
struct Value {
    facts: FactSet,
    object: Option<OwnerId>,
}

impl Value {
    fn of_object(id: OwnerId) -> Value {
        Value {
            facts: [OutcomeFact::Returned { value: id.clone() }].into(),
            object: Some(id),
        }
    }

    fn of_facts(facts: FactSet) -> Value {
        Value {
            facts,
            object: None,
        }
    }
}

/// Net effect of a test-local helper, folded into its call site.
#[derive(Debug, Clone)]
enum HelperSummary {
    /// Builds an object and returns it; `writes` covers the constructor
    /// and every mutator applied inside the helper.
    CreatesAndReturns { writes: BTreeSet<String> },
    /// Returns a field of the test class.
    ReturnsField(String),
    /// Returns its `n`-th argument unchanged.
    ReturnsArg(usize),
    /// Computes a value from its arguments.
    ProducesValue,
    Void,
}

struct Flow<'a> {
    test: &'a TestCase,
    model: &'a CodeModel,
    apis: &'a AssertionApis,
    opts: FlowOptions,
    env: TypeEnv,
    bindings: HashMap<String, Binding>,
    versions: BTreeMap<(OwnerId, String), u32>,
    rebinds: HashMap<String, u32>,
    synth_counter: u32,
    calls: Vec<CallRecord>,
    asserts: Vec<AssertRecord>,
    diagnostics: Vec<String>,
}

impl<'a> Flow<'a> {
    fn new(
        test: &'a TestCase,
        model: &'a CodeModel,
        apis: &'a AssertionApis,
        opts: FlowOptions,
    ) -> Flow<'a> {
        let env = build_type_env(test.method(model), test.owning_type(model));
        Flow {
            test,
            model,
            apis,
            opts,
            env,
            bindings: HashMap::new(),
            versions: BTreeMap::new(),
            rebinds: HashMap::new(),
            synth_counter: 0,
            calls: Vec::new(),
            asserts: Vec::new(),
            diagnostics: Vec::new(),
        }
    }

    fn run(&mut self) {
        let method = self.test.method(self.model);
        let Some(body) = method.body.clone() else {
            return;
        };
        for stmt in &body {
            match stmt.kind {
                StmtKind::AssertCall => self.visit_assert(stmt),
                _ => {
                    if let Some(expr) = &stmt.expr {
                        let value = self.eval(expr, None, None);
                        if let Some(var) = &stmt.assigned_var {
                            self.bind_var(var, value);
                        }
                    }
                }
            }
        }
        // @Test(expected = ...) acts as one implicit assertion on the
        // exceptional path: the last call's outcome is what gets verified.
        if method
            .annotations
            .iter()
            .any(|a| a.starts_with("Test(") && a.contains("expected"))
        {
            let verified = self
                .calls
                .iter()
                .rev()
                .find(|c| c.within_assert.is_none())
                .map(|c| c.outcome.clone())
                .unwrap_or_default();
            let index = self.asserts.len();
            self.asserts.push(AssertRecord {
                index,
                verified,
                nested_calls: Vec::new(),
                span: method.span,
                exceptional: true,
            });
        }
    }

    fn finish(self) -> LinearizedTest {
        let verified_union = self
            .asserts
            .iter()
            .flat_map(|a| a.verified.iter().cloned())
            .collect();
        LinearizedTest {
            calls: self.calls,
            asserts: self.asserts,
            verified_union,
            diagnostics: self.diagnostics,
        }
    }

    fn visit_assert(&mut self, stmt: &crate::model::Stmt) {
        let Some(Expr::Call(assert_call)) = &stmt.expr else {
            return;
        };
        let assert_index = self.asserts.len();
        let exceptional = assert_call.callee_name == "assertThrows";
        let actual = actual_argument_positions(assert_call);
        let call_start = self.calls.len();

        let mut verified = FactSet::new();
        for (i, arg) in assert_call.args.iter().enumerate() {
            if exceptional {
                // evaluate everything; the lambda's last call outcome is
                // the verified set
                let before = self.calls.len();
                self.eval(arg, Some(assert_index), None);
                let inner: Vec<usize> = (before..self.calls.len()).collect();
                if let Some(&last) = inner.last() {
                    verified.extend(self.calls[last].outcome.iter().cloned());
                }
                continue;
            }
            if actual.contains(&i) {
                let mut contrib = FactSet::new();
                let value = self.eval(arg, Some(assert_index), Some(&mut contrib));
                contrib.extend(value.facts);
                verified.extend(contrib);
            } else {
                // reference side: calls still happen and are recorded, but
                // nothing here counts as verified information
                self.eval(arg, Some(assert_index), None);
            }
        }

        let nested_calls: Vec<usize> = (call_start..self.calls.len()).collect();
        self.asserts.push(AssertRecord {
            index: assert_index,
            verified,
            nested_calls,
            span: stmt.span,
            exceptional,
        });
    }

    /// Evaluate an expression: record its calls, apply their state effects,
    /// and compute the facts its value carries. Inside an assert,
    /// `contrib` accumulates each call's verified contribution.
    fn eval(
        &mut self,
        expr: &Expr,
        within_assert: Option<usize>,
        mut contrib: Option<&mut FactSet>,
    ) -> Value {
        match expr {
            Expr::Call(call) => self.eval_call(call, within_assert, contrib),
            Expr::Name(name) => self.value_of_var(name),
            Expr::FieldAccess { base, name } => {
                if let Expr::Name(base_name) = base.as_ref() {
                    // static field access through a type name
                    if self.env.declared_type(base_name).is_none()
                        && self.model.type_index(base_name).is_some()
                    {
                        let owner = OwnerId::Type(base_name.clone());
                        let fact = self.read_attribute(owner, name);
                        return Value::of_facts([fact].into());
                    }
                }
                let base_value = self.eval(base, within_assert, contrib.as_deref_mut());
                match base_value.object {
                    Some(id) => {
                        let fact = self.read_attribute(id, name);
                        Value::of_facts([fact].into())
                    }
                    None => Value::of_facts(base_value.facts),
                }
            }
            Expr::Cast { expr, .. } | Expr::Unary { expr, .. } | Expr::Lambda(expr) => {
                self.eval(expr, within_assert, contrib)
            }
            Expr::Binary { lhs, rhs, .. } => {
                let mut l = self.eval(lhs, within_assert, contrib.as_deref_mut());
                let r = self.eval(rhs, within_assert, contrib);
                l.facts.extend(r.facts);
                l.object = None;
                l
            }
            Expr::ArrayAccess { base, index } => {
                let b = self.eval(base, within_assert, contrib.as_deref_mut());
                self.eval(index, within_assert, contrib);
                Value::of_facts(b.facts)
            }
            Expr::This => {
                let id = OwnerId::Type(self.test.owning_type(self.model).simple_name.clone());
                Value {
                    facts: FactSet::new(),
                    object: Some(id),
                }
            }
            Expr::Literal(_) | Expr::ClassLiteral(_) | Expr::Other(_) => Value::default(),
        }
    }

    fn eval_call(
        &mut self,
        call: &CallExpr,
        within_assert: Option<usize>,
        mut contrib: Option<&mut FactSet>,
    ) -> Value {
        // receiver and arguments evaluate first, innermost first
        let receiver_value = call
            .receiver
            .as_ref()
            .map(|r| self.eval(r, within_assert, contrib.as_deref_mut()));
        let arg_values: Vec<Value> = call
            .args
            .iter()
            .map(|a| self.eval(a, within_assert, contrib.as_deref_mut()))
            .collect();

        // assertion APIs themselves are not method calls under analysis
        if self.apis.is_assertion(call) {
            return Value::default();
        }

        let resolution = resolve_call(call, &self.env, self.test.type_index, self.model);
        if let Some(summary) = self.helper_summary(&resolution, call) {
            return self.apply_helper(call, summary, &arg_values, within_assert, contrib);
        }

        let value_position = within_assert.is_some() || call.bound_to.is_some() || is_value_call(call);
        let class = classify_method(
            &resolution,
            value_position,
            self.test.cut.as_deref(),
            self.model,
            self.opts.effect_depth,
        );
        if let Some(d) = &class.diagnostic {
            self.diagnostics.push(d.clone());
        }

        let index = self.calls.len();
        let mut outcome = FactSet::new();
        let value;
        match class.stereotype {
            Stereotype::Creational => {
                let id = self.fresh_value(call.bound_to.as_deref(), &class.method_name);
                for attr in &class.effects.writes {
                    let fact = self.write_attribute(id.clone(), attr, true);
                    outcome.insert(fact);
                }
                outcome.insert(OutcomeFact::Returned { value: id.clone() });
                if let Some(var) = &call.bound_to {
                    self.bindings
                        .insert(var.clone(), Binding::Constructed { id: id.clone() });
                }
                value = Value::of_object(id);
            }
            Stereotype::Mutator => {
                let owner = self.owner_for_mutation(receiver_value.as_ref(), &class.method_name);
                for attr in &class.effects.writes {
                    let fact = self.write_attribute(owner.clone(), attr, false);
                    outcome.insert(fact);
                }
                for (param, attr) in &class.effects.param_writes {
                    let pos = class_param_position(&class, param, self.model, &resolution);
                    if let Some(arg_owner) =
                        pos.and_then(|p| arg_values.get(p)).and_then(|v| v.object.clone())
                    {
                        let fact = self.write_attribute(arg_owner, attr, false);
                        outcome.insert(fact);
                    }
                }
                let mut facts = FactSet::new();
                if class.effects.has_return_value {
                    if call.bound_to.is_some() || within_assert.is_some() {
                        let rv = self.fresh_value(call.bound_to.as_deref(), &class.method_name);
                        outcome.insert(OutcomeFact::Returned { value: rv.clone() });
                        facts.insert(OutcomeFact::Returned { value: rv });
                    }
                }
                if let Some(var) = &call.bound_to {
                    self.bindings.insert(var.clone(), Binding::Facts(facts.clone()));
                }
                if let Some(c) = contrib.as_deref_mut() {
                    c.extend(outcome.iter().cloned());
                }
                value = Value::of_facts(facts);
            }
            Stereotype::Get => {
                let facts = self.retrieve_get(&class, call, receiver_value.as_ref());
                if let Some(var) = &call.bound_to {
                    self.bindings
                        .insert(var.clone(), Binding::Facts(facts.clone()));
                }
                if let Some(c) = contrib.as_deref_mut() {
                    c.extend(facts.iter().cloned());
                }
                value = Value::of_facts(facts);
            }
            Stereotype::ExternalProducer => {
                let facts = match (&receiver_value, call.receiver.is_some()) {
                    (Some(rv), _) => self.retrieve_external(rv),
                    // receiverless producer computes from its arguments
                    _ => arg_values
                        .iter()
                        .flat_map(|v| v.facts.iter().cloned())
                        .collect(),
                };
                if let Some(var) = &call.bound_to {
                    self.bindings.insert(var.clone(), Binding::Facts(facts.clone()));
                }
                if let Some(c) = contrib.as_deref_mut() {
                    c.extend(facts.iter().cloned());
                }
                value = Value::of_facts(facts);
            }
            Stereotype::InternalProducer => {
                let rv = self.fresh_value(call.bound_to.as_deref(), &class.method_name);
                outcome.insert(OutcomeFact::Returned { value: rv.clone() });
                let facts: FactSet = [OutcomeFact::Returned { value: rv }].into();
                if let Some(var) = &call.bound_to {
                    self.bindings.insert(var.clone(), Binding::Facts(facts.clone()));
                }
                if let Some(c) = contrib.as_deref_mut() {
                    c.extend(facts.iter().cloned());
                }
                value = Value::of_facts(facts);
            }
            Stereotype::Unknown => {
                let mut facts = FactSet::new();
                if within_assert.is_some() || call.bound_to.is_some() {
                    let rv = self.fresh_value(call.bound_to.as_deref(), &class.method_name);
                    facts.insert(OutcomeFact::Returned { value: rv });
                    if within_assert.is_some() {
                        self.diagnostics.push(format!(
                            "unresolvable expression {} in assertion, synthesized fact",
                            class.method_name
                        ));
                    }
                }
                if let Some(var) = &call.bound_to {
                    self.bindings.insert(var.clone(), Binding::Facts(facts.clone()));
                }
                if let Some(c) = contrib.as_deref_mut() {
                    c.extend(facts.iter().cloned());
                }
                value = Value::of_facts(facts);
            }
        }

        self.calls.push(CallRecord {
            index,
            label: class.method_name.clone(),
            stereotype: class.stereotype,
            within_assert,
            outcome,
            span: call.span,
            inlined_helper: false,
            stereotype_evidence: class.evidence(),
        });
        value
    }

    /// Facts a get call retrieves: the receiver's attribute at its current
    /// version, or a passthrough of the facts behind an opaque receiver.
    fn retrieve_get(
        &mut self,
        class: &Classification,
        call: &CallExpr,
        receiver: Option<&Value>,
    ) -> FactSet {
        let attr = match &class.effects.returns_field {
            Some(a) => a.clone(),
            None => return FactSet::new(),
        };
        if class.is_static || receiver.is_none() {
            let owner = OwnerId::Type(
                class
                    .declaring_type
                    .as_deref()
                    .map(|q| q.rsplit('.').next().unwrap_or(q).to_string())
                    .unwrap_or_else(|| call.callee_name.clone()),
            );
            let fact = self.read_attribute(owner, &attr);
            return [fact].into();
        }
        let rv = receiver.unwrap();
        match &rv.object {
            Some(id) => {
                let fact = self.read_attribute(id.clone(), &attr);
                [fact].into()
            }
            None => rv.facts.clone(),
        }
    }

    /// Facts behind an external producer call: the tracked state of the
    /// receiving object, or the facts the receiver value already carries.
    fn retrieve_external(&mut self, receiver: &Value) -> FactSet {
        match &receiver.object {
            Some(id) => {
                let attrs: FactSet = self
                    .versions
                    .iter()
                    .filter(|((owner, _), _)| owner == id)
                    .map(|((owner, name), version)| OutcomeFact::Attribute {
                        owner: owner.clone(),
                        name: name.clone(),
                        version: *version,
                    })
                    .collect();
                if attrs.is_empty() {
                    [OutcomeFact::Returned { value: id.clone() }].into()
                } else {
                    attrs
                }
            }
            None => receiver.facts.clone(),
        }
    }

    fn owner_for_mutation(&mut self, receiver: Option<&Value>, label: &str) -> OwnerId {
        if let Some(rv) = receiver {
            if let Some(id) = &rv.object {
                return id.clone();
            }
            let returned: Vec<&OwnerId> = rv
                .facts
                .iter()
                .filter_map(|f| match f {
                    OutcomeFact::Returned { value } => Some(value),
                    _ => None,
                })
                .collect();
            if returned.len() == 1 {
                return returned[0].clone();
            }
        }
        self.synth_counter += 1;
        OwnerId::Synth {
            label: label.to_string(),
            index: self.synth_counter,
        }
    }

    /// Summarize a call that resolves to a non-test method of the test
    /// class itself.
    fn helper_summary(
        &mut self,
        resolution: &Resolution,
        call: &CallExpr,
    ) -> Option<HelperSummary> {
        let Resolution::Resolved {
            type_index,
            method_index,
            ..
        } = resolution
        else {
            return None;
        };
        if *type_index != self.test.type_index {
            return None;
        }
        let method = &self.model.types[*type_index].methods[*method_index];
        if method.is_constructor || method.has_annotation("Test") || call.receiver.is_some() {
            return None;
        }
        let mut visited = HashSet::new();
        Some(self.summarize_helper(*type_index, *method_index, self.opts.inline_depth, &mut visited))
    }

    fn summarize_helper(
        &mut self,
        type_index: usize,
        method_index: usize,
        depth: usize,
        visited: &mut HashSet<usize>,
    ) -> HelperSummary {
        let owner: &TypeDecl = &self.model.types[type_index];
        let method = &owner.methods[method_index];
        if !visited.insert(method_index) || depth == 0 {
            self.diagnostics.push(format!(
                "helper {} not expanded (depth or cycle limit)",
                method.name
            ));
            return if method.return_type.is_some() {
                HelperSummary::ProducesValue
            } else {
                HelperSummary::Void
            };
        }
        let Some(body) = method.body.clone() else {
            return HelperSummary::ProducesValue;
        };
        let env = build_type_env(method, owner);
        let fields: BTreeSet<&str> = owner.fields.iter().map(|f| f.name.as_str()).collect();
        let params: Vec<&str> = method.params.iter().map(|p| p.name.as_str()).collect();

        // locals holding objects constructed inside the helper
        let mut built: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        let mut return_expr: Option<Expr> = None;
        let mut has_assert = false;

        for stmt in &body {
            if stmt.kind == StmtKind::AssertCall {
                has_assert = true;
                continue;
            }
            if stmt.kind == StmtKind::Return {
                return_expr = stmt.expr.clone();
            }
            for call in &stmt.calls {
                if call.is_constructor {
                    if let Some(var) = &call.bound_to {
                        let res = resolve_call(call, &env, type_index, self.model);
                        let class = classify_method(
                            &res,
                            true,
                            self.test.cut.as_deref(),
                            self.model,
                            self.opts.effect_depth,
                        );
                        built.insert(var.clone(), class.effects.writes.clone());
                    }
                    continue;
                }
                let receiver_var = call.receiver_name().map(|s| s.to_string());
                // nested test-class helper building the object
                let res = resolve_call(call, &env, type_index, self.model);
                if let Resolution::Resolved {
                    type_index: rt,
                    method_index: rm,
                    ..
                } = res
                {
                    if rt == self.test.type_index && call.receiver.is_none() {
                        let sub = self.summarize_helper(rt, rm, depth - 1, visited);
                        if let (HelperSummary::CreatesAndReturns { writes }, Some(var)) =
                            (sub, &call.bound_to)
                        {
                            built.insert(var.clone(), writes);
                        }
                        continue;
                    }
                    let class = classify_method(
                        &res,
                        true,
                        self.test.cut.as_deref(),
                        self.model,
                        self.opts.effect_depth,
                    );
                    if let Some(var) = receiver_var {
                        if let Some(writes) = built.get_mut(&var) {
                            // any resolved method that writes fields counts
                            // here, whichever class declares it
                            writes.extend(class.effects.writes.iter().cloned());
                        }
                    }
                }
            }
        }
        if has_assert {
            self.diagnostics.push(format!(
                "helper {} contains assertions; they are not inlined",
                method.name
            ));
        }

        match return_expr {
            Some(expr) => {
                let expr = peel(expr);
                match expr {
                    Expr::Name(n) => {
                        if let Some(writes) = built.get(&n) {
                            HelperSummary::CreatesAndReturns {
                                writes: writes.clone(),
                            }
                        } else if let Some(pos) = params.iter().position(|p| *p == n) {
                            HelperSummary::ReturnsArg(pos)
                        } else if fields.contains(n.as_str()) {
                            HelperSummary::ReturnsField(n)
                        } else {
                            HelperSummary::ProducesValue
                        }
                    }
                    Expr::Call(c) if c.is_constructor => {
                        let res = resolve_call(&c, &env, type_index, self.model);
                        let class = classify_method(
                            &res,
                            true,
                            self.test.cut.as_deref(),
                            self.model,
                            self.opts.effect_depth,
                        );
                        HelperSummary::CreatesAndReturns {
                            writes: class.effects.writes.clone(),
                        }
                    }
                    _ => {
                        if method.return_type.is_some() {
                            HelperSummary::ProducesValue
                        } else {
                            HelperSummary::Void
                        }
                    }
                }
            }
            None => {
                if method.return_type.is_some() {
                    HelperSummary::ProducesValue
                } else {
                    HelperSummary::Void
                }
            }
        }
    }

    fn apply_helper(
        &mut self,
        call: &CallExpr,
        summary: HelperSummary,
        arg_values: &[Value],
        within_assert: Option<usize>,
        contrib: Option<&mut FactSet>,
    ) -> Value {
        let index = self.calls.len();
        let mut outcome = FactSet::new();
        let (stereotype, value) = match summary {
            HelperSummary::CreatesAndReturns { writes } => {
                let id = self.fresh_value(call.bound_to.as_deref(), &call.callee_name);
                for attr in &writes {
                    let fact = self.write_attribute(id.clone(), attr, true);
                    outcome.insert(fact);
                }
                outcome.insert(OutcomeFact::Returned { value: id.clone() });
                if let Some(var) = &call.bound_to {
                    self.bindings
                        .insert(var.clone(), Binding::Constructed { id: id.clone() });
                }
                (Stereotype::Creational, Value::of_object(id))
            }
            HelperSummary::ReturnsField(f) => {
                let owner =
                    OwnerId::Type(self.test.owning_type(self.model).simple_name.clone());
                let fact = self.read_attribute(owner, &f);
                let facts: FactSet = [fact].into();
                if let Some(var) = &call.bound_to {
                    self.bindings.insert(var.clone(), Binding::Facts(facts.clone()));
                }
                (Stereotype::Get, Value::of_facts(facts))
            }
            HelperSummary::ReturnsArg(pos) => {
                let v = arg_values.get(pos).cloned().unwrap_or_default();
                if let Some(var) = &call.bound_to {
                    match &v.object {
                        Some(id) => {
                            self.bindings
                                .insert(var.clone(), Binding::Constructed { id: id.clone() });
                        }
                        None => {
                            self.bindings
                                .insert(var.clone(), Binding::Facts(v.facts.clone()));
                        }
                    }
                }
                (Stereotype::ExternalProducer, v)
            }
            HelperSummary::ProducesValue => {
                let facts: FactSet = arg_values
                    .iter()
                    .flat_map(|v| v.facts.iter().cloned())
                    .collect();
                if let Some(var) = &call.bound_to {
                    self.bindings.insert(var.clone(), Binding::Facts(facts.clone()));
                }
                (Stereotype::ExternalProducer, Value::of_facts(facts))
            }
            HelperSummary::Void => (Stereotype::Unknown, Value::default()),
        };
        if let Some(c) = contrib {
            c.extend(value.facts.iter().cloned());
            if stereotype == Stereotype::Creational {
                c.extend(outcome.iter().cloned());
            }
        }
        let owner = self.test.owning_class.clone();
        self.calls.push(CallRecord {
            index,
            label: call.callee_name.clone(),
            stereotype,
            within_assert,
            outcome,
            span: call.span,
            inlined_helper: true,
            stereotype_evidence: StereotypeEvidence {
                method: call.callee_name.clone(),
                declaring_type: Some(owner),
                stereotype: stereotype.label().to_string(),
                reads: Vec::new(),
                writes: Vec::new(),
                rationale_branch: "test-local-helper".to_string(),
            },
        });
        value
    }

    fn value_of_var(&mut self, name: &str) -> Value {
        match self.bindings.get(name) {
            Some(Binding::Constructed { id }) => Value::of_object(id.clone()),
            Some(Binding::Facts(facts)) => Value::of_facts(facts.clone()),
            Some(Binding::Inert) => Value::default(),
            None => {
                // not a local: a field of the test class reads as a static
                // attribute of the class, anything else is untracked
                let owner_type = self.test.owning_type(self.model);
                if owner_type.field(name).is_some() {
                    let owner = OwnerId::Type(owner_type.simple_name.clone());
                    let fact = self.read_attribute(owner, name);
                    return Value::of_facts([fact].into());
                }
                Value::default()
            }
        }
    }

    fn bind_var(&mut self, var: &str, value: Value) {
        if self.bindings.contains_key(var) {
            return; // already bound by the call's own handling
        }
        match value.object {
            Some(id) => {
                self.bindings
                    .insert(var.to_string(), Binding::Constructed { id });
            }
            None if !value.facts.is_empty() => {
                self.bindings
                    .insert(var.to_string(), Binding::Facts(value.facts));
            }
            None => {
                self.bindings.insert(var.to_string(), Binding::Inert);
            }
        }
    }

    /// Fresh identity for a constructed object or returned value; rebinding
    /// a variable yields a new generation so facts stay distinguishable.
    fn fresh_value(&mut self, var: Option<&str>, label: &str) -> OwnerId {
        match var {
            Some(name) => {
                let gen = self.rebinds.entry(name.to_string()).or_insert(0);
                let id = OwnerId::Var {
                    name: name.to_string(),
                    rebind: *gen,
                };
                *gen += 1;
                // invalidate the old binding now; the caller re-binds
                self.bindings.remove(name);
                id
            }
            None => {
                self.synth_counter += 1;
                OwnerId::Synth {
                    label: label.to_string(),
                    index: self.synth_counter,
                }
            }
        }
    }

    /// Record a write: constructor writes initialize at version 0, mutator
    /// writes bump the version.
    fn write_attribute(&mut self, owner: OwnerId, attr: &str, creational: bool) -> OutcomeFact {
        let key = (owner.clone(), attr.to_string());
        let version = if creational {
            0
        } else {
            self.versions.get(&key).map(|v| v + 1).unwrap_or(1)
        };
        self.versions.insert(key, version);
        OutcomeFact::Attribute {
            owner,
            name: attr.to_string(),
            version,
        }
    }

    /// Bind a read to the latest write; a never-written attribute reads as
    /// version 0, the constructor-default state.
    fn read_attribute(&mut self, owner: OwnerId, attr: &str) -> OutcomeFact {
        let key = (owner.clone(), attr.to_string());
        let version = match self.versions.get(&key) {
            Some(v) => *v,
            None => {
                self.diagnostics.push(format!(
                    "read of never-written attribute {owner}.{attr}, assuming constructor default"
                ));
                0
            }
        };
        OutcomeFact::Attribute {
            owner,
            name: attr.to_string(),
            version,
        }
    }
}

/// Position of a named parameter in the resolved method's signature.
fn class_param_position(
    _class: &Classification,
    param: &str,
    model: &CodeModel,
    resolution: &Resolution,
) -> Option<usize> {
    resolution
        .method(model)
        .and_then(|m| m.params.iter().position(|p| p.name == param))
}

fn peel(expr: Expr) -> Expr {
    match expr {
        Expr::Cast { expr, .. } | Expr::Unary { expr, .. } => peel(*expr),
        other => other,
    }
}

/// Calls whose syntactic position implies a produced value.
fn is_value_call(call: &CallExpr) -> bool {
    call.is_constructor
}

/// Which argument positions of a recognized assertion carry the value under
/// verification. JUnit puts the expected value first and optional messages
/// first (JUnit 3/4) or last (JUnit 5); the expected side is reference
/// data, not verified information.
fn actual_argument_positions(call: &CallExpr) -> Vec<usize> {
    let n = call.args.len();
    let is_string_literal =
        |i: usize| matches!(call.args.get(i), Some(Expr::Literal(s)) if s.starts_with('"'));
    match call.callee_name.as_str() {
        "assertEquals" | "assertSame" | "assertNotSame" | "assertArrayEquals" => match n {
            0 | 1 => (0..n).collect(),
            2 => vec![1],
            3 => {
                if is_string_literal(0) {
                    vec![2]
                } else {
                    vec![1]
                }
            }
            _ => vec![2],
        },
        "assertThat" => match n {
            2 => vec![0],
            3 => vec![1],
            _ => (0..n).collect(),
        },
        "assertTrue" | "assertFalse" | "assertNull" | "assertNotNull" => match n {
            1 => vec![0],
            2 => {
                if is_string_literal(0) {
                    vec![1]
                } else {
                    vec![0]
                }
            }
            _ => (0..n).collect(),
        },
        "fail" => Vec::new(),
        _ => (0..n).collect(),
    }
}
