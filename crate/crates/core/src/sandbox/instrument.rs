//! Source-level rewriting of untrusted code: computed field reads and
//! reads of the `XMLHttpRequest` field go through a checking wrapper.

use std::cell::RefCell;

use thiserror::Error;

use super::typecheck::XHR;
use crate::js::ast::*;
use crate::js::parse;

/// Name of the injected wrapper.
pub const SAFE_LOOKUP: &str = "safeLookup";

/// The wrapper: refuses the protected name and anything that is not a
/// primitive string (whose conversion to a field name could run code).
pub const SAFE_LOOKUP_SOURCE: &str = r#"var safeLookup = function(obj, field) {
  if (field === "XMLHttpRequest") { return undefined }
  else if (typeof field === "string") { return obj[field] }
  else { return undefined } };
"#;

/// A direct translation of the core wrapper. Its computed lookup converts
/// objects to strings by calling their `toString`, so it is not safe.
pub const LOOKUP_JS_SOURCE: &str = r#"var lookupJS = function(obj, field) {
  if (field === "XMLHttpRequest") { return undefined }
  else { return obj[field] } };
"#;

/// A form left out of the safe sub-language.
#[derive(Clone, Debug, Error, PartialEq)]
#[error("{span}: {message}")]
pub struct Excluded {
    pub span: Span,
    pub message: String,
}

/// Rewrites `program` and prepends the wrapper definition.
pub fn instrument(program: &Program) -> Result<Program, Vec<Excluded>> {
    let r = Rewriter { excluded: RefCell::new(Vec::new()) };
    let body: Vec<Stmt> = program.body.iter().map(|s| r.stmt(s)).collect();
    let excluded = r.excluded.into_inner();
    if !excluded.is_empty() {
        return Err(excluded);
    }
    let mut out = parse(SAFE_LOOKUP_SOURCE).expect("the wrapper parses").body;
    out.extend(body);
    Ok(Program { body: out, span: program.span })
}

struct Rewriter {
    excluded: RefCell<Vec<Excluded>>,
}

fn is_protected_member(e: &Expr) -> bool {
    matches!(&e.kind, ExprKind::Member { property, .. } if property == XHR)
}

impl Rewriter {
    fn exclude(&self, span: Span, message: &str) {
        self.excluded.borrow_mut().push(Excluded { span, message: message.to_string() });
    }

    fn stmt(&self, s: &Stmt) -> Stmt {
        match &s.kind {
            StmtKind::With { .. } => {
                self.exclude(s.span, "`with` is not part of the safe sub-language");
                s.clone()
            }
            StmtKind::Function { func } => Stmt::new(StmtKind::Function { func: self.func(func) }, s.span),
            _ => map_stmt_children(s, &mut |e| self.expr(e), &mut |c| self.stmt(c)),
        }
    }

    fn func(&self, f: &Function) -> Function {
        Function { body: f.body.iter().map(|s| self.stmt(s)).collect(), ..f.clone() }
    }

    /// A call of the wrapper on already rewritten operands.
    fn wrap(object: Expr, field: Expr, span: Span) -> Expr {
        let callee = Expr::new(ExprKind::Ident { name: SAFE_LOOKUP.to_string() }, span);
        Expr::new(ExprKind::Call { callee: Box::new(callee), args: vec![object, field] }, span)
    }

    /// Rewrites the operands of an assignable target, keeping the target
    /// itself (writes and deletes do not read the field).
    fn target(&self, t: &Expr) -> Expr {
        match &t.kind {
            ExprKind::Ident { .. } => t.clone(),
            _ => map_expr_children(t, &mut |c| self.expr(c)),
        }
    }

    fn expr(&self, e: &Expr) -> Expr {
        match &e.kind {
            ExprKind::Index { object, index } => Self::wrap(self.expr(object), self.expr(index), e.span),
            ExprKind::Member { object, property } if property == XHR => {
                let field = Expr::new(ExprKind::Str { value: XHR.to_string() }, e.span);
                Self::wrap(self.expr(object), field, e.span)
            }
            ExprKind::Function { func } => Expr::new(ExprKind::Function { func: self.func(func) }, e.span),
            ExprKind::Assign { op, target, value } => {
                let reads = op.is_some() && (matches!(target.kind, ExprKind::Index { .. }) || is_protected_member(target));
                if reads {
                    self.exclude(e.span, "compound assignment to a computed or protected field");
                }
                let kind = ExprKind::Assign { op: *op, target: Box::new(self.target(target)), value: Box::new(self.expr(value)) };
                Expr::new(kind, e.span)
            }
            ExprKind::Update { target, .. } => {
                if matches!(target.kind, ExprKind::Index { .. }) || is_protected_member(target) {
                    self.exclude(e.span, "increment or decrement of a computed or protected field");
                }
                e.clone()
            }
            ExprKind::Unary { op: UnaryOp::Delete, arg } => {
                Expr::new(ExprKind::Unary { op: UnaryOp::Delete, arg: Box::new(self.target(arg)) }, e.span)
            }
            _ => map_expr_children(e, &mut |c| self.expr(c)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::js::print_program;

    fn rewritten(src: &str) -> String {
        let p = instrument(&parse(src).unwrap()).unwrap();
        let wrapper = parse(SAFE_LOOKUP_SOURCE).unwrap().body.len();
        print_program(&Program { body: p.body[wrapper..].to_vec(), span: p.span })
    }

    #[test]
    fn computed_and_protected_reads_are_wrapped() {
        assert_eq!(rewritten("window.XMLHttpRequest;"), "safeLookup(window, \"XMLHttpRequest\");\n");
        assert_eq!(rewritten("a[b][c];"), "safeLookup(safeLookup(a, b), c);\n");
        assert_eq!(rewritten("o[k](1);"), "safeLookup(o, k)(1);\n");
    }

    #[test]
    fn ordinary_members_and_writes_are_kept() {
        assert_eq!(rewritten("obj.foo;"), "obj.foo;\n");
        assert_eq!(rewritten("o[k] = v[i];"), "o[k] = safeLookup(v, i);\n");
        assert_eq!(rewritten("delete o[k[0]];"), "delete o[safeLookup(k, 0)];\n");
    }

    #[test]
    fn excluded_forms_are_reported() {
        for src in ["with (o) { x }", "o[k]++;", "--o[k];", "o[k] += 1;", "o.XMLHttpRequest -= 1;", "function f() { o[k]-- }"] {
            let errs = instrument(&parse(src).unwrap()).unwrap_err();
            assert_eq!(errs.len(), 1, "{src}");
        }
    }

    #[test]
    fn wrapper_is_prepended() {
        let p = instrument(&parse("x;").unwrap()).unwrap();
        assert!(print_program(&p).starts_with("var safeLookup = function"));
    }
}
