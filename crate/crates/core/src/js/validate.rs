//! Early errors the grammar alone does not catch.

use std::collections::HashSet;

use super::ast::*;
use super::ParseError;

pub fn validate(program: &Program) -> Result<(), ParseError> {
    let mut v = Validator::default();
    for s in &program.body {
        v.stmt(s)?;
    }
    Ok(())
}

#[derive(Clone, Default)]
struct Validator {
    in_function: bool,
    /// Enclosing labels, with whether each labels a loop.
    labels: Vec<(String, bool)>,
    loop_depth: usize,
    breakable_depth: usize,
}

fn fail<T>(span: Span, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { span, message: message.into() })
}

fn is_loop(s: &Stmt) -> bool {
    match &s.kind {
        StmtKind::While { .. } | StmtKind::DoWhile { .. } | StmtKind::For { .. } | StmtKind::ForIn { .. } => true,
        StmtKind::Labeled { body, .. } => is_loop(body),
        _ => false,
    }
}

impl Validator {
    fn stmt(&mut self, s: &Stmt) -> Result<(), ParseError> {
        for e in stmt_exprs(s) {
            self.expr(e)?;
        }
        match &s.kind {
            StmtKind::Return { .. } if !self.in_function => fail(s.span, "`return` outside a function"),
            StmtKind::Break { label: Some(l) } => {
                if self.labels.iter().any(|(m, _)| m == l) {
                    Ok(())
                } else {
                    fail(s.span, format!("undefined label `{l}`"))
                }
            }
            StmtKind::Break { label: None } if self.breakable_depth == 0 => {
                fail(s.span, "`break` outside a loop or switch")
            }
            StmtKind::Continue { label: Some(l) } => match self.labels.iter().rev().find(|(m, _)| m == l) {
                Some((_, true)) => Ok(()),
                Some(_) => fail(s.span, format!("`continue {l}` does not name a loop")),
                None => fail(s.span, format!("undefined label `{l}`")),
            },
            StmtKind::Continue { label: None } if self.loop_depth == 0 => fail(s.span, "`continue` outside a loop"),
            StmtKind::Labeled { label, body } => {
                if self.labels.iter().any(|(m, _)| m == label) {
                    return fail(s.span, format!("label `{label}` is already declared"));
                }
                self.labels.push((label.clone(), is_loop(body)));
                let r = self.stmt(body);
                self.labels.pop();
                r
            }
            StmtKind::While { body, .. }
            | StmtKind::DoWhile { body, .. }
            | StmtKind::For { body, .. }
            | StmtKind::ForIn { body, .. } => {
                self.loop_depth += 1;
                self.breakable_depth += 1;
                let r = self.stmt(body);
                self.loop_depth -= 1;
                self.breakable_depth -= 1;
                r
            }
            StmtKind::Switch { .. } => {
                self.breakable_depth += 1;
                let r = stmt_children(s).into_iter().try_for_each(|c| self.stmt(c));
                self.breakable_depth -= 1;
                r
            }
            StmtKind::Function { func } => self.function(func),
            _ => stmt_children(s).into_iter().try_for_each(|c| self.stmt(c)),
        }
    }

    fn function(&mut self, f: &Function) -> Result<(), ParseError> {
        let mut seen = HashSet::new();
        for p in &f.params {
            if !seen.insert(p) {
                return fail(f.span, format!("duplicate parameter `{p}`"));
            }
        }
        let mut inner = Validator { in_function: true, ..Validator::default() };
        f.body.iter().try_for_each(|s| inner.stmt(s))
    }

    fn expr(&mut self, e: &Expr) -> Result<(), ParseError> {
        match &e.kind {
            ExprKind::Function { func } => return self.function(func),
            ExprKind::Object { props } => {
                let mut seen = HashSet::new();
                for p in props {
                    if !seen.insert(&p.key) {
                        return fail(p.span, format!("duplicate property `{}`", p.key));
                    }
                }
            }
            _ => {}
        }
        expr_children(e).into_iter().try_for_each(|c| self.expr(c))
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;

    #[test]
    fn accepts_well_formed_control() {
        let src = "outer: for (;;) { inner: while (1) { if (x) continue outer; break inner } \
                   switch (y) { case 1: break; default: break outer } }
                   function f() { return 1 }";
        parse(src).unwrap();
    }

    #[test]
    fn rejects_misplaced_jumps() {
        for (src, needle) in [
            ("break", "outside"),
            ("continue", "outside"),
            ("switch (1) { case 1: continue }", "outside a loop"),
            ("l: { continue l }", "does not name a loop"),
            ("while (1) { break m }", "undefined label"),
            ("return 1", "outside a function"),
            ("l: l: ;", "already declared"),
            ("function f(a, a) {}", "duplicate parameter"),
            ("x = { a: 1, 'a': 2 }", "duplicate property"),
            ("while (1) { (function () { break })() }", "outside"),
        ] {
            let err = parse(src).unwrap_err();
            assert!(err.message.contains(needle), "{src}: {}", err.message);
        }
    }
}
