//! Java source extraction built on tree-sitter.

use std::collections::BTreeSet;
use std::path::Path;

use tree_sitter::Node;
use walkdir::WalkDir;

use super::{
    AssignTarget, CallExpr, CodeModel, Diagnostic, Expr, FieldDecl, MethodDecl, Param, SourceKind,
    SourceRoot, Stmt, StmtKind, TypeDecl, TypeKind,
};
use crate::Error;

/// Assertion method names recognized as verification statements.
#[derive(Debug, Clone, PartialEq)]
pub struct AssertionApis {
    pub names: BTreeSet<String>,
}

impl Default for AssertionApis {
    fn default() -> Self {
        let names = [
            "assertEquals",
            "assertTrue",
            "assertFalse",
            "assertNull",
            "assertNotNull",
            "assertSame",
            "assertNotSame",
            "assertArrayEquals",
            "assertThat",
            "fail",
        ];
        AssertionApis {
            names: names.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl AssertionApis {
    /// True when a call expression is a recognized assertion: known name,
    /// unqualified or qualified with Assert/Assertions. `assertThrows` is
    /// always recognized, as the exceptional-path form of an assertion.
    pub fn is_assertion(&self, call: &CallExpr) -> bool {
        if call.is_constructor
            || !(self.names.contains(&call.callee_name) || call.callee_name == "assertThrows")
        {
            return false;
        }
        match call.receiver.as_deref() {
            None => true,
            Some(Expr::Name(n)) => n == "Assert" || n == "Assertions",
            Some(Expr::FieldAccess { name, .. }) => name == "Assert" || name == "Assertions",
            _ => false,
        }
    }
}

/// Parse every `.java` file under the given roots into one model.
///
/// A missing root is a hard error; a file that fails to parse is recorded
/// as a diagnostic and skipped.
pub fn parse_sources(roots: &[SourceRoot], apis: &AssertionApis) -> Result<CodeModel, Error> {
    let mut model = CodeModel {
        source_roots: roots.to_vec(),
        ..CodeModel::default()
    };

    let mut parser = tree_sitter::Parser::new();
    parser
        .set_language(&tree_sitter_java::LANGUAGE.into())
        .expect("Java grammar must load");

    for root in roots {
        let root_path = Path::new(&root.path);
        if !root_path.exists() {
            return Err(Error::Io {
                path: root.path.clone(),
                source: std::io::Error::new(std::io::ErrorKind::NotFound, "source root not found"),
            });
        }
        let mut files: Vec<_> = WalkDir::new(root_path)
            .into_iter()
            .filter_map(|e| e.ok())
            .filter(|e| e.file_type().is_file())
            .map(|e| e.into_path())
            .filter(|p| p.extension().map(|x| x == "java").unwrap_or(false))
            .collect();
        files.sort();

        for file in files {
            let display = file.display().to_string();
            let source = match std::fs::read_to_string(&file) {
                Ok(s) => s,
                Err(e) => {
                    model.diagnostics.push(Diagnostic {
                        file: display,
                        message: format!("unreadable file: {e}"),
                    });
                    continue;
                }
            };
            let tree = match parser.parse(&source, None) {
                Some(t) => t,
                None => {
                    model.diagnostics.push(Diagnostic {
                        file: display,
                        message: "parser produced no tree".into(),
                    });
                    continue;
                }
            };
            if tree.root_node().has_error() {
                model.diagnostics.push(Diagnostic {
                    file: display,
                    message: "syntax error, compilation unit skipped".into(),
                });
                continue;
            }
            extract_unit(
                tree.root_node(),
                source.as_bytes(),
                &display,
                root.kind,
                apis,
                &mut model,
            );
        }
    }
    Ok(model)
}

/// Parse a single compilation unit from a string. Used by tests and by the
/// synthetic-corpus generators.
pub fn parse_unit(
    source: &str,
    file: &str,
    kind: SourceKind,
    apis: &AssertionApis,
    model: &mut CodeModel,
) -> bool {
    let mut parser = tree_sitter::Parser::new();
    parser
        .set_language(&tree_sitter_java::LANGUAGE.into())
        .expect("Java grammar must load");
    let tree = match parser.parse(source, None) {
        Some(t) => t,
        None => return false,
    };
    if tree.root_node().has_error() {
        model.diagnostics.push(Diagnostic {
            file: file.to_string(),
            message: "syntax error, compilation unit skipped".into(),
        });
        return false;
    }
    extract_unit(tree.root_node(), source.as_bytes(), file, kind, apis, model);
    true
}

fn extract_unit(
    root: Node,
    src: &[u8],
    file: &str,
    kind: SourceKind,
    apis: &AssertionApis,
    model: &mut CodeModel,
) {
    let mut package = String::new();
    let mut imports = Vec::new();
    let mut cursor = root.walk();
    for child in root.named_children(&mut cursor) {
        match child.kind() {
            "package_declaration" => {
                if let Some(n) = child.named_child(0) {
                    package = text(n, src).to_string();
                }
            }
            "import_declaration" => {
                let t = text(child, src)
                    .trim_start_matches("import")
                    .trim_end_matches(';')
                    .trim()
                    .to_string();
                imports.push(t);
            }
            "class_declaration" | "interface_declaration" | "enum_declaration" => {
                extract_type(child, src, file, kind, &package, &imports, apis, model, None);
            }
            _ => {}
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn extract_type(
    node: Node,
    src: &[u8],
    file: &str,
    source: SourceKind,
    package: &str,
    imports: &[String],
    apis: &AssertionApis,
    model: &mut CodeModel,
    outer: Option<&str>,
) {
    let simple_name = node
        .child_by_field_name("name")
        .map(|n| text(n, src).to_string())
        .unwrap_or_default();
    if simple_name.is_empty() {
        return;
    }
    let local_name = match outer {
        Some(o) => format!("{o}.{simple_name}"),
        None => simple_name.clone(),
    };
    let qualified_name = if package.is_empty() {
        local_name.clone()
    } else {
        format!("{package}.{local_name}")
    };

    let type_kind = match node.kind() {
        "interface_declaration" => TypeKind::Interface,
        "enum_declaration" => TypeKind::Enum,
        _ => TypeKind::Class,
    };

    let mut supertypes = Vec::new();
    if let Some(sc) = node.child_by_field_name("superclass") {
        // superclass node is `extends <type>`
        let mut c = sc.walk();
        for t in sc.named_children(&mut c) {
            supertypes.push(erase_generics(text(t, src)));
        }
    }
    if let Some(ifaces) = node.child_by_field_name("interfaces") {
        let mut c = ifaces.walk();
        for list in ifaces.named_children(&mut c) {
            let mut lc = list.walk();
            for t in list.named_children(&mut lc) {
                supertypes.push(erase_generics(text(t, src)));
            }
        }
    }

    let mut fields = Vec::new();
    let mut methods = Vec::new();
    if let Some(body) = node.child_by_field_name("body") {
        let mut c = body.walk();
        for member in body.named_children(&mut c) {
            match member.kind() {
                "field_declaration" => extract_fields(member, src, &mut fields),
                "method_declaration" | "constructor_declaration" => {
                    methods.push(extract_method(member, src, &simple_name, type_kind, apis));
                }
                "enum_constant" => fields.push(FieldDecl {
                    name: member
                        .child_by_field_name("name")
                        .map(|n| text(n, src).to_string())
                        .unwrap_or_default(),
                    type_name: simple_name.clone(),
                    is_static: true,
                }),
                "enum_body_declarations" => {
                    let mut ec = member.walk();
                    for decl in member.named_children(&mut ec) {
                        match decl.kind() {
                            "field_declaration" => extract_fields(decl, src, &mut fields),
                            "method_declaration" | "constructor_declaration" => methods.push(
                                extract_method(decl, src, &simple_name, type_kind, apis),
                            ),
                            _ => {}
                        }
                    }
                }
                "class_declaration" | "interface_declaration" | "enum_declaration" => {
                    extract_type(
                        member,
                        src,
                        file,
                        source,
                        package,
                        imports,
                        apis,
                        model,
                        Some(&local_name),
                    );
                }
                _ => {}
            }
        }
    }

    let is_test_class = source == SourceKind::Test
        && (methods.iter().any(|m| m.has_annotation("Test"))
            || supertypes.iter().any(|s| s.ends_with("TestCase")));

    if model
        .types
        .iter()
        .any(|t| t.qualified_name == qualified_name)
    {
        model.diagnostics.push(Diagnostic {
            file: file.to_string(),
            message: format!("duplicate type {qualified_name} skipped"),
        });
        return;
    }

    model.types.push(TypeDecl {
        qualified_name,
        simple_name,
        file: file.to_string(),
        kind: type_kind,
        source,
        supertypes,
        fields,
        methods,
        imports: imports.to_vec(),
        is_test_class,
    });
}

fn extract_fields(node: Node, src: &[u8], out: &mut Vec<FieldDecl>) {
    let type_name = node
        .child_by_field_name("type")
        .map(|t| erase_generics(text(t, src)))
        .unwrap_or_default();
    let is_static = modifiers_contain(node, src, "static");
    let mut c = node.walk();
    for decl in node.named_children(&mut c) {
        if decl.kind() == "variable_declarator" {
            if let Some(name) = decl.child_by_field_name("name") {
                out.push(FieldDecl {
                    name: text(name, src).to_string(),
                    type_name: type_name.clone(),
                    is_static,
                });
            }
        }
    }
}

fn extract_method(
    node: Node,
    src: &[u8],
    type_name: &str,
    type_kind: TypeKind,
    apis: &AssertionApis,
) -> MethodDecl {
    let is_constructor = node.kind() == "constructor_declaration";
    let name = node
        .child_by_field_name("name")
        .map(|n| text(n, src).to_string())
        .unwrap_or_default();

    let mut annotations = Vec::new();
    let mut is_static = false;
    let mut is_public = type_kind == TypeKind::Interface;
    if let Some(mods) = node.child(0).filter(|c| c.kind() == "modifiers") {
        let mut c = mods.walk();
        for m in mods.children(&mut c) {
            match m.kind() {
                "marker_annotation" | "annotation" => {
                    let label = m
                        .child_by_field_name("name")
                        .map(|n| text(n, src).to_string())
                        .unwrap_or_default();
                    let args = m
                        .child_by_field_name("arguments")
                        .map(|a| text(a, src).to_string())
                        .unwrap_or_default();
                    annotations.push(format!("{label}{args}"));
                }
                "static" => is_static = true,
                "public" => is_public = true,
                _ => {}
            }
        }
    }

    let return_type = if is_constructor {
        None
    } else {
        node.child_by_field_name("type").and_then(|t| {
            if t.kind() == "void_type" {
                None
            } else {
                Some(erase_generics(text(t, src)))
            }
        })
    };

    let mut params = Vec::new();
    if let Some(plist) = node.child_by_field_name("parameters") {
        let mut c = plist.walk();
        for p in plist.named_children(&mut c) {
            if p.kind() == "formal_parameter" || p.kind() == "spread_parameter" {
                let ty = p
                    .child_by_field_name("type")
                    .map(|t| erase_generics(text(t, src)))
                    .unwrap_or_default();
                let name = p
                    .child_by_field_name("name")
                    .or_else(|| p.named_child(p.named_child_count().saturating_sub(1)))
                    .map(|n| text(n, src).to_string())
                    .unwrap_or_default();
                params.push(Param {
                    name,
                    type_name: ty,
                });
            }
        }
    }

    let body = node.child_by_field_name("body").map(|b| {
        let mut stmts = Vec::new();
        extract_stmts(b, src, apis, &mut stmts);
        stmts
    });

    MethodDecl {
        name: if is_constructor {
            type_name.to_string()
        } else {
            name
        },
        is_constructor,
        is_static,
        params,
        return_type,
        body,
        annotations,
        is_public,
        span: (
            node.start_position().row + 1,
            node.end_position().row + 1,
        ),
    }
}

/// Flatten a block into statements in source order. Control structures emit
/// one `Control` statement for their header, then their nested statements
/// inline; loop bodies are traversed once.
fn extract_stmts(block: Node, src: &[u8], apis: &AssertionApis, out: &mut Vec<Stmt>) {
    let mut c = block.walk();
    for node in block.named_children(&mut c) {
        extract_stmt(node, src, apis, out);
    }
}

fn extract_stmt(node: Node, src: &[u8], apis: &AssertionApis, out: &mut Vec<Stmt>) {
    let span = (node.start_position().row + 1, node.end_position().row + 1);
    match node.kind() {
        "local_variable_declaration" => {
            let declared_type = node
                .child_by_field_name("type")
                .map(|t| erase_generics(text(t, src)));
            let mut c = node.walk();
            for decl in node.named_children(&mut c) {
                if decl.kind() != "variable_declarator" {
                    continue;
                }
                let name = decl
                    .child_by_field_name("name")
                    .map(|n| text(n, src).to_string())
                    .unwrap_or_default();
                let mut expr = decl
                    .child_by_field_name("value")
                    .map(|v| extract_expr(v, src));
                if let Some(e) = expr.as_mut() {
                    bind_outermost_call(e, &name);
                }
                out.push(finish_stmt(
                    StmtKind::LocalDecl,
                    expr,
                    Some(name.clone()),
                    declared_type.clone(),
                    vec![AssignTarget::Bare(name)],
                    span,
                    apis,
                ));
            }
        }
        "expression_statement" => {
            let inner = match node.named_child(0) {
                Some(i) => i,
                None => return,
            };
            if inner.kind() == "assignment_expression" {
                let left = inner.child_by_field_name("left");
                let target = left.map(|l| assign_target(l, src)).unwrap_or(AssignTarget::Other);
                let assigned_var = match &target {
                    AssignTarget::Bare(n) => Some(n.clone()),
                    _ => None,
                };
                let mut expr = inner
                    .child_by_field_name("right")
                    .map(|r| extract_expr(r, src));
                if let (Some(e), Some(v)) = (expr.as_mut(), assigned_var.as_ref()) {
                    bind_outermost_call(e, v);
                }
                out.push(finish_stmt(
                    StmtKind::Expression,
                    expr,
                    assigned_var,
                    None,
                    vec![target],
                    span,
                    apis,
                ));
            } else {
                let expr = extract_expr(inner, src);
                out.push(finish_stmt(
                    StmtKind::Expression,
                    Some(expr),
                    None,
                    None,
                    Vec::new(),
                    span,
                    apis,
                ));
            }
        }
        "return_statement" => {
            let expr = node.named_child(0).map(|v| extract_expr(v, src));
            out.push(finish_stmt(
                StmtKind::Return,
                expr,
                None,
                None,
                Vec::new(),
                span,
                apis,
            ));
        }
        "if_statement" => {
            let cond = node
                .child_by_field_name("condition")
                .map(|c| extract_expr(c, src));
            out.push(finish_stmt(StmtKind::Control, cond, None, None, Vec::new(), span, apis));
            if let Some(cons) = node.child_by_field_name("consequence") {
                extract_nested(cons, src, apis, out);
            }
            if let Some(alt) = node.child_by_field_name("alternative") {
                extract_nested(alt, src, apis, out);
            }
        }
        "while_statement" | "do_statement" | "switch_expression" | "synchronized_statement" => {
            let cond = node
                .child_by_field_name("condition")
                .map(|c| extract_expr(c, src));
            out.push(finish_stmt(StmtKind::Control, cond, None, None, Vec::new(), span, apis));
            if let Some(body) = node.child_by_field_name("body") {
                extract_nested(body, src, apis, out);
            }
        }
        "for_statement" => {
            let cond = node
                .child_by_field_name("condition")
                .map(|c| extract_expr(c, src));
            out.push(finish_stmt(StmtKind::Control, cond, None, None, Vec::new(), span, apis));
            if let Some(body) = node.child_by_field_name("body") {
                extract_nested(body, src, apis, out);
            }
        }
        "enhanced_for_statement" => {
            let declared_type = node
                .child_by_field_name("type")
                .map(|t| erase_generics(text(t, src)));
            let name = node
                .child_by_field_name("name")
                .map(|n| text(n, src).to_string());
            let value = node
                .child_by_field_name("value")
                .map(|v| extract_expr(v, src));
            out.push(finish_stmt(
                StmtKind::Control,
                value,
                name,
                declared_type,
                Vec::new(),
                span,
                apis,
            ));
            if let Some(body) = node.child_by_field_name("body") {
                extract_nested(body, src, apis, out);
            }
        }
        "try_statement" | "try_with_resources_statement" => {
            out.push(finish_stmt(StmtKind::Control, None, None, None, Vec::new(), span, apis));
            let mut c = node.walk();
            for child in node.named_children(&mut c) {
                match child.kind() {
                    "block" => extract_stmts(child, src, apis, out),
                    "catch_clause" | "finally_clause" => {
                        let mut cc = child.walk();
                        for b in child.named_children(&mut cc) {
                            if b.kind() == "block" {
                                extract_stmts(b, src, apis, out);
                            }
                        }
                    }
                    _ => {}
                }
            }
        }
        "block" => extract_stmts(node, src, apis, out),
        "throw_statement" | "assert_statement" => {
            let expr = node.named_child(0).map(|v| extract_expr(v, src));
            out.push(finish_stmt(StmtKind::Other, expr, None, None, Vec::new(), span, apis));
        }
        "labeled_statement" => {
            if let Some(inner) = node.named_child(1) {
                extract_stmt(inner, src, apis, out);
            }
        }
        ";" | "line_comment" | "block_comment" | "local_class_declaration" => {}
        _ => {
            out.push(finish_stmt(StmtKind::Other, None, None, None, Vec::new(), span, apis));
        }
    }
}

/// A control-structure body: either a block or a single statement.
fn extract_nested(node: Node, src: &[u8], apis: &AssertionApis, out: &mut Vec<Stmt>) {
    if node.kind() == "block" {
        extract_stmts(node, src, apis, out);
    } else {
        extract_stmt(node, src, apis, out);
    }
}

fn finish_stmt(
    kind: StmtKind,
    expr: Option<Expr>,
    assigned_var: Option<String>,
    declared_type: Option<String>,
    assign_targets: Vec<AssignTarget>,
    span: (usize, usize),
    apis: &AssertionApis,
) -> Stmt {
    let mut calls = Vec::new();
    if let Some(e) = &expr {
        e.collect_calls(&mut calls);
    }
    let mut kind = kind;
    if kind == StmtKind::Expression {
        if let Some(Expr::Call(c)) = &expr {
            if apis.is_assertion(c) {
                kind = StmtKind::AssertCall;
            }
        }
    }
    Stmt {
        kind,
        calls,
        assigned_var,
        declared_type,
        assign_targets,
        expr,
        span,
    }
}

fn assign_target(node: Node, src: &[u8]) -> AssignTarget {
    match node.kind() {
        "identifier" => AssignTarget::Bare(text(node, src).to_string()),
        "field_access" => {
            let field = node
                .child_by_field_name("field")
                .map(|f| text(f, src).to_string())
                .unwrap_or_default();
            match node.child_by_field_name("object") {
                Some(o) if o.kind() == "this" => AssignTarget::ThisField(field),
                Some(o) if o.kind() == "identifier" => AssignTarget::Qualified {
                    base: text(o, src).to_string(),
                    field,
                },
                _ => AssignTarget::Other,
            }
        }
        _ => AssignTarget::Other,
    }
}

/// Set `bound_to` on the outermost call of a binding's right-hand side,
/// looking through casts and parentheses.
fn bind_outermost_call(expr: &mut Expr, var: &str) {
    match expr {
        Expr::Call(c) => c.bound_to = Some(var.to_string()),
        Expr::Cast { expr, .. } | Expr::Unary { expr, .. } => bind_outermost_call(expr, var),
        _ => {}
    }
}

fn extract_expr(node: Node, src: &[u8]) -> Expr {
    let span = (node.start_position().row + 1, node.end_position().row + 1);
    match node.kind() {
        "method_invocation" => {
            let receiver = node
                .child_by_field_name("object")
                .map(|o| Box::new(extract_expr(o, src)));
            let callee_name = node
                .child_by_field_name("name")
                .map(|n| text(n, src).to_string())
                .unwrap_or_default();
            let args = extract_args(node.child_by_field_name("arguments"), src);
            Expr::Call(CallExpr {
                callee_name,
                receiver,
                args,
                is_constructor: false,
                bound_to: None,
                span,
            })
        }
        "object_creation_expression" => {
            let type_name = node
                .child_by_field_name("type")
                .map(|t| erase_generics(text(t, src)))
                .unwrap_or_default();
            let args = extract_args(node.child_by_field_name("arguments"), src);
            Expr::Call(CallExpr {
                callee_name: type_name,
                receiver: None,
                args,
                is_constructor: true,
                bound_to: None,
                span,
            })
        }
        "identifier" => Expr::Name(text(node, src).to_string()),
        "this" => Expr::This,
        "field_access" => {
            let base = node
                .child_by_field_name("object")
                .map(|o| extract_expr(o, src))
                .unwrap_or(Expr::Other(String::new()));
            let name = node
                .child_by_field_name("field")
                .map(|f| text(f, src).to_string())
                .unwrap_or_default();
            Expr::FieldAccess {
                base: Box::new(base),
                name,
            }
        }
        "parenthesized_expression" => node
            .named_child(0)
            .map(|i| extract_expr(i, src))
            .unwrap_or(Expr::Other(String::new())),
        "cast_expression" => {
            let type_name = node
                .child_by_field_name("type")
                .map(|t| erase_generics(text(t, src)))
                .unwrap_or_default();
            let inner = node
                .child_by_field_name("value")
                .map(|v| extract_expr(v, src))
                .unwrap_or(Expr::Other(String::new()));
            Expr::Cast {
                type_name,
                expr: Box::new(inner),
            }
        }
        "unary_expression" | "update_expression" => {
            let op = node
                .child_by_field_name("operator")
                .map(|o| text(o, src).to_string())
                .unwrap_or_default();
            let inner = node
                .child_by_field_name("operand")
                .or_else(|| node.named_child(0))
                .map(|v| extract_expr(v, src))
                .unwrap_or(Expr::Other(String::new()));
            Expr::Unary {
                op,
                expr: Box::new(inner),
            }
        }
        "binary_expression" => {
            let op = node
                .child_by_field_name("operator")
                .map(|o| text(o, src).to_string())
                .unwrap_or_default();
            let lhs = node
                .child_by_field_name("left")
                .map(|v| extract_expr(v, src))
                .unwrap_or(Expr::Other(String::new()));
            let rhs = node
                .child_by_field_name("right")
                .map(|v| extract_expr(v, src))
                .unwrap_or(Expr::Other(String::new()));
            Expr::Binary {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
            }
        }
        "instanceof_expression" => {
            let inner = node
                .child_by_field_name("left")
                .map(|v| extract_expr(v, src))
                .unwrap_or(Expr::Other(String::new()));
            Expr::Unary {
                op: "instanceof".into(),
                expr: Box::new(inner),
            }
        }
        "ternary_expression" => {
            let cond = node
                .child_by_field_name("condition")
                .map(|v| extract_expr(v, src))
                .unwrap_or(Expr::Other(String::new()));
            let cons = node
                .child_by_field_name("consequence")
                .map(|v| extract_expr(v, src))
                .unwrap_or(Expr::Other(String::new()));
            let alt = node
                .child_by_field_name("alternative")
                .map(|v| extract_expr(v, src))
                .unwrap_or(Expr::Other(String::new()));
            Expr::Binary {
                op: "?".into(),
                lhs: Box::new(cond),
                rhs: Box::new(Expr::Binary {
                    op: ":".into(),
                    lhs: Box::new(cons),
                    rhs: Box::new(alt),
                }),
            }
        }
        "array_access" => {
            let base = node
                .child_by_field_name("array")
                .map(|v| extract_expr(v, src))
                .unwrap_or(Expr::Other(String::new()));
            let index = node
                .child_by_field_name("index")
                .map(|v| extract_expr(v, src))
                .unwrap_or(Expr::Other(String::new()));
            Expr::ArrayAccess {
                base: Box::new(base),
                index: Box::new(index),
            }
        }
        "assignment_expression" => {
            let lhs = node
                .child_by_field_name("left")
                .map(|v| extract_expr(v, src))
                .unwrap_or(Expr::Other(String::new()));
            let rhs = node
                .child_by_field_name("right")
                .map(|v| extract_expr(v, src))
                .unwrap_or(Expr::Other(String::new()));
            Expr::Binary {
                op: "=".into(),
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
            }
        }
        "lambda_expression" => {
            let body = node.child_by_field_name("body");
            match body {
                Some(b) if b.kind() == "block" => {
                    // keep only the calls, chained so they survive collection
                    let mut calls = Vec::new();
                    collect_raw_calls(b, src, &mut calls);
                    let mut expr = Expr::Other(String::new());
                    for c in calls.into_iter().rev() {
                        expr = Expr::Binary {
                            op: ";".into(),
                            lhs: Box::new(Expr::Call(c)),
                            rhs: Box::new(expr),
                        };
                    }
                    Expr::Lambda(Box::new(expr))
                }
                Some(b) => Expr::Lambda(Box::new(extract_expr(b, src))),
                None => Expr::Other(text(node, src).to_string()),
            }
        }
        "class_literal" => {
            let t = text(node, src);
            Expr::ClassLiteral(t.trim_end_matches(".class").to_string())
        }
        "string_literal"
        | "character_literal"
        | "decimal_integer_literal"
        | "hex_integer_literal"
        | "octal_integer_literal"
        | "binary_integer_literal"
        | "decimal_floating_point_literal"
        | "hex_floating_point_literal"
        | "true"
        | "false"
        | "null_literal" => Expr::Literal(text(node, src).to_string()),
        _ => Expr::Other(text(node, src).to_string()),
    }
}

fn extract_args(node: Option<Node>, src: &[u8]) -> Vec<Expr> {
    let mut args = Vec::new();
    if let Some(list) = node {
        let mut c = list.walk();
        for a in list.named_children(&mut c) {
            args.push(extract_expr(a, src));
        }
    }
    args
}

/// Pull call expressions straight out of a subtree, used for lambda blocks.
fn collect_raw_calls(node: Node, src: &[u8], out: &mut Vec<CallExpr>) {
    if node.kind() == "method_invocation" || node.kind() == "object_creation_expression" {
        if let Expr::Call(c) = extract_expr(node, src) {
            out.push(c);
            return;
        }
    }
    let mut c = node.walk();
    for child in node.children(&mut c) {
        collect_raw_calls(child, src, out);
    }
}

fn modifiers_contain(node: Node, src: &[u8], what: &str) -> bool {
    if let Some(mods) = node.child(0).filter(|c| c.kind() == "modifiers") {
        let mut c = mods.walk();
        for m in mods.children(&mut c) {
            if text(m, src) == what {
                return true;
            }
        }
    }
    false
}

/// Strip type arguments; `List<Object>` becomes `List`, array suffixes stay.
pub fn erase_generics(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    let mut depth = 0usize;
    for ch in raw.chars() {
        match ch {
            '<' => depth += 1,
            '>' => depth = depth.saturating_sub(1),
            c if depth == 0 && !c.is_whitespace() => out.push(c),
            _ => {}
        }
    }
    out
}

fn text<'a>(node: Node, src: &'a [u8]) -> &'a str {
    node.utf8_text(src).unwrap_or("")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_snippet(source: &str) -> CodeModel {
        let mut model = CodeModel::default();
        assert!(parse_unit(
            source,
            "Snippet.java",
            SourceKind::Production,
            &AssertionApis::default(),
            &mut model
        ));
        model
    }

    #[test]
    fn extracts_class_fields_and_methods() {
        let model = parse_snippet(
            r#"
            public class DirEntry {
                private long size;
                public DirEntry() { }
                public void setSize(long size) { this.size = size; }
                public long getSize() { return size; }
            }
            "#,
        );
        let t = model.find_type("DirEntry").unwrap();
        assert_eq!(t.fields.len(), 1);
        assert_eq!(t.fields[0].name, "size");
        assert_eq!(t.methods.len(), 3);
        assert!(t.methods[0].is_constructor);
        let set = &t.methods[1];
        assert_eq!(set.params[0].name, "size");
        assert_eq!(
            set.body.as_ref().unwrap()[0].assign_targets,
            vec![AssignTarget::ThisField("size".into())]
        );
        let get = &t.methods[2];
        assert_eq!(get.return_type.as_deref(), Some("long"));
    }

    #[test]
    fn erases_generics_from_types() {
        assert_eq!(erase_generics("List<Object>"), "List");
        assert_eq!(erase_generics("Map<String, List<Integer>>"), "Map");
        assert_eq!(erase_generics("Class<?>[]"), "Class[]");
        assert_eq!(erase_generics("String"), "String");
    }

    #[test]
    fn statement_order_and_spans_are_source_order() {
        let model = parse_snippet(
            r#"
            public class A {
                public void m() {
                    int a = 1;
                    int b = 2;
                    if (a > 0) {
                        b = 3;
                    }
                    return;
                }
            }
            "#,
        );
        let body = model.types[0].methods[0].body.as_ref().unwrap();
        let lines: Vec<usize> = body.iter().map(|s| s.span.0).collect();
        let mut sorted = lines.clone();
        sorted.sort_unstable();
        assert_eq!(lines, sorted);
        assert_eq!(body[2].kind, StmtKind::Control);
        assert_eq!(body[3].assigned_var.as_deref(), Some("b"));
        assert_eq!(body[4].kind, StmtKind::Return);
    }

    #[test]
    fn nested_calls_are_listed_innermost_first() {
        let model = parse_snippet(
            r#"
            public class A {
                public void n() {
                    outer(middle(inner()));
                }
            }
            "#,
        );
        let body = model.types[0].methods[0].body.as_ref().unwrap();
        let names: Vec<&str> = body[0].calls.iter().map(|c| c.callee_name.as_str()).collect();
        assert_eq!(names, vec!["inner", "middle", "outer"]);
    }

    #[test]
    fn assertion_statements_are_recognized() {
        let mut model = CodeModel::default();
        parse_unit(
            r#"
            public class ATest {
                @Test
                public void t() {
                    Thing x = new Thing();
                    assertEquals(1, x.size());
                    Assert.assertTrue(x.ok());
                    x.run();
                }
            }
            "#,
            "ATest.java",
            SourceKind::Test,
            &AssertionApis::default(),
            &mut model,
        );
        let body = model.types[0].methods[0].body.as_ref().unwrap();
        assert_eq!(body[0].kind, StmtKind::LocalDecl);
        assert_eq!(body[1].kind, StmtKind::AssertCall);
        assert_eq!(body[2].kind, StmtKind::AssertCall);
        assert_eq!(body[3].kind, StmtKind::Expression);
        // every recognized assertion here carries at least one argument
        for s in body.iter().filter(|s| s.kind == StmtKind::AssertCall) {
            if let Some(Expr::Call(c)) = &s.expr {
                assert!(!c.args.is_empty());
            } else {
                panic!("assert statement without outer call");
            }
        }
    }

    #[test]
    fn syntax_error_unit_is_skipped_with_diagnostic() {
        let mut model = CodeModel::default();
        let ok = parse_unit(
            "public class Broken { void m() { if (x { } }",
            "Broken.java",
            SourceKind::Production,
            &AssertionApis::default(),
            &mut model,
        );
        assert!(!ok);
        assert_eq!(model.types.len(), 0);
        assert_eq!(model.diagnostics.len(), 1);
    }

    #[test]
    fn bound_to_looks_through_casts() {
        let model = parse_snippet(
            r#"
            public class A {
                public void m() {
                    Object saved = (Object) list.get(0);
                }
            }
            "#,
        );
        let body = model.types[0].methods[0].body.as_ref().unwrap();
        assert_eq!(body[0].calls.len(), 1);
        assert_eq!(body[0].calls[0].bound_to.as_deref(), Some("saved"));
    }

    #[test]
    fn enum_constants_become_static_fields() {
        let model = parse_snippet("public enum Kind { A, B }");
        let t = &model.types[0];
        assert_eq!(t.kind, TypeKind::Enum);
        assert_eq!(t.fields.len(), 2);
        assert!(t.fields.iter().all(|f| f.is_static));
    }
}
