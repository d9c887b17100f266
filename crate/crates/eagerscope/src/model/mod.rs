//! Simplified, resolution-capable view of parsed Java sources.
//!
//! The model keeps just enough structure for the downstream analyses:
//! types with their fields and methods, statement lists in source order,
//! and call expressions with their receivers and arguments. It is built
//! once by [`parse::parse_sources`] and immutable afterwards.

pub mod parse;
pub mod resolve;

use serde::Serialize;

/// Which kind of source tree a file came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SourceKind {
    Test,
    Production,
    External,
}

/// One input directory and its tag.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SourceRoot {
    pub path: String,
    pub kind: SourceKind,
}

/// Non-fatal problem found while building the model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub file: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CodeModel {
    pub types: Vec<TypeDecl>,
    pub source_roots: Vec<SourceRoot>,
    pub diagnostics: Vec<Diagnostic>,
}

impl CodeModel {
    /// Look a type up by qualified name, falling back to simple-name match.
    pub fn find_type(&self, name: &str) -> Option<&TypeDecl> {
        self.type_index(name).map(|i| &self.types[i])
    }

    pub fn type_index(&self, name: &str) -> Option<usize> {
        if let Some(i) = self.types.iter().position(|t| t.qualified_name == name) {
            return Some(i);
        }
        let simple = name.rsplit('.').next().unwrap_or(name);
        self.types.iter().position(|t| t.simple_name == simple)
    }

    pub fn production_types(&self) -> impl Iterator<Item = &TypeDecl> {
        self.types
            .iter()
            .filter(|t| t.source == SourceKind::Production)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TypeKind {
    Class,
    Interface,
    Enum,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TypeDecl {
    pub qualified_name: String,
    pub simple_name: String,
    pub file: String,
    pub kind: TypeKind,
    pub source: SourceKind,
    /// Supertype names as written (superclass first, then interfaces).
    pub supertypes: Vec<String>,
    pub fields: Vec<FieldDecl>,
    pub methods: Vec<MethodDecl>,
    /// Import statements of the enclosing compilation unit.
    pub imports: Vec<String>,
    pub is_test_class: bool,
}

impl TypeDecl {
    pub fn field(&self, name: &str) -> Option<&FieldDecl> {
        self.fields.iter().find(|f| f.name == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldDecl {
    pub name: String,
    pub type_name: String,
    pub is_static: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodDecl {
    pub name: String,
    pub is_constructor: bool,
    pub is_static: bool,
    pub params: Vec<Param>,
    /// Declared return type, `None` for void (and constructors).
    pub return_type: Option<String>,
    /// Statements in source order; `None` for abstract/interface methods.
    pub body: Option<Vec<Stmt>>,
    pub annotations: Vec<String>,
    pub is_public: bool,
    pub span: (usize, usize),
}

impl MethodDecl {
    pub fn arity(&self) -> usize {
        self.params.len()
    }

    pub fn has_annotation(&self, name: &str) -> bool {
        self.annotations
            .iter()
            .any(|a| a == name || a.rsplit('.').next() == Some(name) || a.starts_with(&format!("{name}(")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Param {
    pub name: String,
    pub type_name: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StmtKind {
    LocalDecl,
    Expression,
    AssertCall,
    Control,
    Return,
    Other,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stmt {
    pub kind: StmtKind,
    /// Every call expression in the statement, innermost first.
    pub calls: Vec<CallExpr>,
    /// Local variable bound by this statement (declaration or reassignment).
    pub assigned_var: Option<String>,
    /// Declared type when the statement is a local declaration.
    pub declared_type: Option<String>,
    /// All assignment targets in the statement.
    pub assign_targets: Vec<AssignTarget>,
    /// The statement's main expression: declaration initializer, the
    /// expression of an expression statement, or a return value.
    pub expr: Option<Expr>,
    /// (line begin, line end), 1-based.
    pub span: (usize, usize),
}

/// Syntactic form of an assignment target. Whether a bare name is a local
/// or a field of the enclosing type is decided by the consumer, which has
/// the finished model in hand.
#[derive(Debug, Clone, PartialEq)]
pub enum AssignTarget {
    /// `x = ...`
    Bare(String),
    /// `this.f = ...`
    ThisField(String),
    /// `v.f = ...`
    Qualified { base: String, field: String },
    Other,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Literal(String),
    /// `Foo.class`
    ClassLiteral(String),
    /// Bare identifier: local, parameter, field, or type name.
    Name(String),
    /// `this`
    This,
    FieldAccess {
        base: Box<Expr>,
        name: String,
    },
    Call(CallExpr),
    Cast {
        type_name: String,
        expr: Box<Expr>,
    },
    Unary {
        op: String,
        expr: Box<Expr>,
    },
    Binary {
        op: String,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    ArrayAccess {
        base: Box<Expr>,
        index: Box<Expr>,
    },
    /// Lambda body, kept only for the calls inside it.
    Lambda(Box<Expr>),
    Other(String),
}

impl Expr {
    /// Collect every call expression in this tree, innermost first.
    pub fn collect_calls(&self, out: &mut Vec<CallExpr>) {
        match self {
            Expr::Call(c) => {
                if let Some(r) = &c.receiver {
                    r.collect_calls(out);
                }
                for a in &c.args {
                    a.collect_calls(out);
                }
                out.push(c.clone());
            }
            Expr::FieldAccess { base, .. } => base.collect_calls(out),
            Expr::Cast { expr, .. } | Expr::Unary { expr, .. } | Expr::Lambda(expr) => {
                expr.collect_calls(out)
            }
            Expr::Binary { lhs, rhs, .. } => {
                lhs.collect_calls(out);
                rhs.collect_calls(out);
            }
            Expr::ArrayAccess { base, index } => {
                base.collect_calls(out);
                index.collect_calls(out);
            }
            Expr::Literal(_)
            | Expr::ClassLiteral(_)
            | Expr::Name(_)
            | Expr::This
            | Expr::Other(_) => {}
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CallExpr {
    /// Method name, or the constructed type name for constructors.
    pub callee_name: String,
    /// Receiver expression; `None` for unqualified calls and constructors.
    pub receiver: Option<Box<Expr>>,
    pub args: Vec<Expr>,
    pub is_constructor: bool,
    /// Variable the call result is directly bound to, if any.
    pub bound_to: Option<String>,
    pub span: (usize, usize),
}

impl CallExpr {
    /// Receiver rendered as a plain name when it is one (variable or type).
    pub fn receiver_name(&self) -> Option<&str> {
        match self.receiver.as_deref() {
            Some(Expr::Name(n)) => Some(n),
            _ => None,
        }
    }
}

/// Test framework a test case was recognized under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Framework {
    JUnit3,
    JUnit4,
    JUnit5,
}

/// How the class under test was determined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CutInference {
    /// Test class name minus Test/Tests/TestCase matched a production type.
    Name,
    /// Most frequently instantiated or statically invoked production type.
    Frequency,
    Unresolved,
}

/// One recognized test method together with its resolved class under test.
#[derive(Debug, Clone, PartialEq)]
pub struct TestCase {
    pub owning_class: String,
    pub file: String,
    pub method_name: String,
    /// Index of the owning type in `CodeModel::types`.
    pub type_index: usize,
    /// Index of the method within the owning type.
    pub method_index: usize,
    /// Qualified name of the class under test, when resolvable.
    pub cut: Option<String>,
    pub cut_inference: CutInference,
    pub framework: Framework,
}

impl TestCase {
    pub fn method<'m>(&self, model: &'m CodeModel) -> &'m MethodDecl {
        &model.types[self.type_index].methods[self.method_index]
    }

    pub fn owning_type<'m>(&self, model: &'m CodeModel) -> &'m TypeDecl {
        &model.types[self.type_index]
    }

    pub fn id(&self) -> String {
        format!("{}::{}", self.owning_class, self.method_name)
    }
}
