//! Variable lifting and the assignment analysis that decides which
//! bindings need a reference cell.

use std::collections::HashSet;

use crate::js::ast::*;

/// A function (or program) body with its declarations hoisted out.
#[derive(Clone, Debug, PartialEq)]
pub struct Lifted {
    /// `var`-declared names in first-declaration order.
    pub vars: Vec<String>,
    /// Function declarations in source order; a later one with the same
    /// name wins when they are initialised in order.
    pub functions: Vec<Function>,
    /// The body with `var` turned into assignments and function
    /// declarations removed.
    pub body: Vec<Stmt>,
}

impl Lifted {
    /// Every name the body declares: variables first, then functions.
    pub fn names(&self) -> Vec<String> {
        let mut out = self.vars.clone();
        for f in &self.functions {
            let n = f.name.clone().expect("declarations are named");
            if !out.contains(&n) {
                out.push(n);
            }
        }
        out
    }
}

/// Hoists declarations out of `body` without entering nested functions.
pub fn lift_vars(body: &[Stmt]) -> Lifted {
    let mut l = Lifted { vars: Vec::new(), functions: Vec::new(), body: Vec::new() };
    l.body = body.iter().map(|s| lift_stmt(s, &mut l)).collect();
    l
}

fn declare(l: &mut Lifted, name: &str) {
    if !l.vars.iter().any(|v| v == name) {
        l.vars.push(name.to_string());
    }
}

fn assignments(decls: &[VarDecl], l: &mut Lifted) -> Option<Expr> {
    let mut exprs = Vec::new();
    for d in decls {
        declare(l, &d.name);
        if let Some(init) = &d.init {
            let target = Expr::new(ExprKind::Ident { name: d.name.clone() }, d.span);
            exprs.push(Expr::new(
                ExprKind::Assign { op: None, target: Box::new(target), value: Box::new(init.clone()) },
                d.span,
            ));
        }
    }
    match exprs.len() {
        0 => None,
        1 => exprs.pop(),
        _ => {
            let span = Span { start: exprs[0].span.start, end: exprs[exprs.len() - 1].span.end, ..exprs[0].span };
            Some(Expr::new(ExprKind::Sequence { exprs }, span))
        }
    }
}

fn lift_box(s: &Stmt, l: &mut Lifted) -> Box<Stmt> {
    Box::new(lift_stmt(s, l))
}

fn lift_list(ss: &[Stmt], l: &mut Lifted) -> Vec<Stmt> {
    ss.iter().map(|s| lift_stmt(s, l)).collect()
}

fn lift_stmt(s: &Stmt, l: &mut Lifted) -> Stmt {
    let kind = match &s.kind {
        StmtKind::Var { decls } => match assignments(decls, l) {
            Some(expr) => StmtKind::Expr { expr },
            None => StmtKind::Empty,
        },
        StmtKind::Function { func } => {
            l.functions.push(func.clone());
            StmtKind::Empty
        }
        StmtKind::If { test, consequent, alternate } => StmtKind::If {
            test: test.clone(),
            consequent: lift_box(consequent, l),
            alternate: alternate.as_ref().map(|a| lift_box(a, l)),
        },
        StmtKind::While { test, body } => StmtKind::While { test: test.clone(), body: lift_box(body, l) },
        StmtKind::DoWhile { body, test } => StmtKind::DoWhile { body: lift_box(body, l), test: test.clone() },
        StmtKind::For { init, test, update, body } => {
            let init = match init {
                Some(ForInit::Var { decls }) => assignments(decls, l).map(|expr| ForInit::Expr { expr }),
                other => other.clone(),
            };
            StmtKind::For { init, test: test.clone(), update: update.clone(), body: lift_box(body, l) }
        }
        StmtKind::ForIn { declared, name, object, body } => {
            if *declared {
                declare(l, name);
            }
            StmtKind::ForIn { declared: false, name: name.clone(), object: object.clone(), body: lift_box(body, l) }
        }
        StmtKind::Labeled { label, body } => StmtKind::Labeled { label: label.clone(), body: lift_box(body, l) },
        StmtKind::Try { block, handler, finalizer } => StmtKind::Try {
            block: lift_list(block, l),
            handler: handler.as_ref().map(|h| CatchClause { param: h.param.clone(), body: lift_list(&h.body, l), span: h.span }),
            finalizer: finalizer.as_ref().map(|f| lift_list(f, l)),
        },
        StmtKind::Switch { discriminant, cases } => StmtKind::Switch {
            discriminant: discriminant.clone(),
            cases: cases
                .iter()
                .map(|c| SwitchCase { test: c.test.clone(), body: lift_list(&c.body, l), span: c.span })
                .collect(),
        },
        StmtKind::With { object, body } => StmtKind::With { object: object.clone(), body: lift_box(body, l) },
        StmtKind::Block { body } => StmtKind::Block { body: lift_list(body, l) },
        other => other.clone(),
    };
    Stmt::new(kind, s.span)
}

/// Names that appear as assignment targets anywhere in `body`, nested
/// functions included. Over-approximates on shadowing, which only costs
/// an unnecessary reference cell.
pub fn assigned_names(body: &[Stmt]) -> HashSet<String> {
    let mut out = HashSet::new();
    for s in body {
        stmt_assigned(s, &mut out);
    }
    out
}

fn stmt_assigned(s: &Stmt, out: &mut HashSet<String>) {
    match &s.kind {
        StmtKind::ForIn { name, .. } => {
            out.insert(name.clone());
        }
        StmtKind::Var { decls } => {
            out.extend(decls.iter().filter(|d| d.init.is_some()).map(|d| d.name.clone()));
        }
        StmtKind::For { init: Some(ForInit::Var { decls }), .. } => {
            out.extend(decls.iter().filter(|d| d.init.is_some()).map(|d| d.name.clone()));
        }
        StmtKind::Function { func } => {
            for b in &func.body {
                stmt_assigned(b, out);
            }
        }
        _ => {}
    }
    for e in stmt_exprs(s) {
        expr_assigned(e, out);
    }
    for c in stmt_children(s) {
        stmt_assigned(c, out);
    }
}

fn expr_assigned(e: &Expr, out: &mut HashSet<String>) {
    match &e.kind {
        ExprKind::Assign { target, .. } | ExprKind::Update { target, .. } => {
            if let ExprKind::Ident { name } = &target.kind {
                out.insert(name.clone());
            }
        }
        ExprKind::Function { func } => {
            for b in &func.body {
                stmt_assigned(b, out);
            }
        }
        _ => {}
    }
    for c in expr_children(e) {
        expr_assigned(c, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::js::{parse, print_program};

    fn lifted(src: &str) -> Lifted {
        lift_vars(&parse(src).unwrap().body)
    }

    #[test]
    fn hoists_nested_declarations() {
        let l = lifted("if (a) { var x = 1, y; } for (var i = 0; i < 2; i++) {} for (var k in o) ; function f() { var z }");
        assert_eq!(l.vars, ["x", "y", "i", "k"]);
        assert_eq!(l.functions.len(), 1);
        assert_eq!(l.names(), ["x", "y", "i", "k", "f"]);
        let printed = print_program(&Program { body: l.body, span: Span::default() });
        assert!(!printed.contains("var"), "{printed}");
        assert!(printed.contains("x = 1"));
    }

    #[test]
    fn body_without_declarations_is_unchanged() {
        let p = parse("x = 1; while (x) { x-- }").unwrap();
        let l = lift_vars(&p.body);
        assert!(l.vars.is_empty() && l.functions.is_empty());
        assert_eq!(l.body, p.body);
    }

    #[test]
    fn finds_assignments_through_closures() {
        let p = parse("a = 1; b++; function g() { c += 1 } (function () { d = 2 }); for (e in o) ; f(x)").unwrap();
        let names = assigned_names(&p.body);
        for n in ["a", "b", "c", "d", "e"] {
            assert!(names.contains(n), "{n}");
        }
        assert!(!names.contains("x") && !names.contains("f"));
    }
}
