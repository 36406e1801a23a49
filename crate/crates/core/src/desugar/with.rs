//! Eliminates `with` by turning each identifier in its body into a runtime
//! choice between a field of the `with` object and the outer binding.
//! Inner `with`s are rewritten first, so nested ones expand into chains of
//! guards, innermost object first.

use std::collections::HashSet;

use super::lift::lift_vars;
use crate::js::ast::*;

/// Rewrites every `with` in the program.
pub fn eliminate_with(program: &Program) -> Program {
    let mut w = WithEliminator::default();
    Program { body: w.stmts(&program.body), span: program.span }
}

/// True if the program contains a `with` statement anywhere.
pub fn contains_with(body: &[Stmt]) -> bool {
    fn in_expr(e: &Expr) -> bool {
        match &e.kind {
            ExprKind::Function { func } => contains_with(&func.body),
            _ => expr_children(e).into_iter().any(in_expr),
        }
    }
    body.iter().any(|s| {
        matches!(s.kind, StmtKind::With { .. })
            || matches!(&s.kind, StmtKind::Function { func } if contains_with(&func.body))
            || stmt_exprs(s).into_iter().any(in_expr)
            || stmt_children(s).into_iter().any(|c| contains_with(std::slice::from_ref(c)))
    })
}

#[derive(Default)]
pub struct WithEliminator {
    next: usize,
}

impl WithEliminator {
    fn fresh(&mut self, base: &str) -> String {
        self.next += 1;
        format!("%{base}{}", self.next)
    }

    pub fn stmts(&mut self, ss: &[Stmt]) -> Vec<Stmt> {
        ss.iter().map(|s| self.stmt(s)).collect()
    }

    fn boxed(&mut self, s: &Stmt) -> Box<Stmt> {
        Box::new(self.stmt(s))
    }

    fn func(&mut self, f: &Function) -> Function {
        Function { body: self.stmts(&f.body), ..f.clone() }
    }

    /// Rewrites `with` statements nested anywhere in `s`.
    pub fn stmt(&mut self, s: &Stmt) -> Stmt {
        let kind = match &s.kind {
            StmtKind::With { object, body } => {
                let object = self.expr(object);
                let body = self.stmt(body);
                let temp = self.fresh("with");
                let mut scoped = Scoped { temp: &temp, shadow: HashSet::new(), owner: self };
                let body = scoped.stmt(&body);
                let decl = VarDecl { name: temp.clone(), init: Some(object), span: s.span };
                StmtKind::Block { body: vec![Stmt::new(StmtKind::Var { decls: vec![decl] }, s.span), body] }
            }
            _ => return self.structural(s),
        };
        Stmt::new(kind, s.span)
    }

    fn structural(&mut self, s: &Stmt) -> Stmt {
        let e = |me: &mut Self, x: &Expr| me.expr(x);
        let kind = match &s.kind {
            StmtKind::Var { decls } => StmtKind::Var {
                decls: decls.iter().map(|d| VarDecl { init: d.init.as_ref().map(|i| e(self, i)), ..d.clone() }).collect(),
            },
            StmtKind::Expr { expr } => StmtKind::Expr { expr: e(self, expr) },
            StmtKind::If { test, consequent, alternate } => StmtKind::If {
                test: e(self, test),
                consequent: self.boxed(consequent),
                alternate: alternate.as_ref().map(|a| self.boxed(a)),
            },
            StmtKind::While { test, body } => StmtKind::While { test: e(self, test), body: self.boxed(body) },
            StmtKind::DoWhile { body, test } => StmtKind::DoWhile { body: self.boxed(body), test: e(self, test) },
            StmtKind::For { init, test, update, body } => StmtKind::For {
                init: init.as_ref().map(|i| match i {
                    ForInit::Var { decls } => ForInit::Var {
                        decls: decls
                            .iter()
                            .map(|d| VarDecl { init: d.init.as_ref().map(|x| e(self, x)), ..d.clone() })
                            .collect(),
                    },
                    ForInit::Expr { expr } => ForInit::Expr { expr: e(self, expr) },
                }),
                test: test.as_ref().map(|t| e(self, t)),
                update: update.as_ref().map(|u| e(self, u)),
                body: self.boxed(body),
            },
            StmtKind::ForIn { declared, name, object, body } => StmtKind::ForIn {
                declared: *declared,
                name: name.clone(),
                object: e(self, object),
                body: self.boxed(body),
            },
            StmtKind::Return { value } => StmtKind::Return { value: value.as_ref().map(|v| e(self, v)) },
            StmtKind::Labeled { label, body } => StmtKind::Labeled { label: label.clone(), body: self.boxed(body) },
            StmtKind::Try { block, handler, finalizer } => StmtKind::Try {
                block: self.stmts(block),
                handler: handler.as_ref().map(|h| CatchClause { body: self.stmts(&h.body), ..h.clone() }),
                finalizer: finalizer.as_ref().map(|f| self.stmts(f)),
            },
            StmtKind::Throw { value } => StmtKind::Throw { value: e(self, value) },
            StmtKind::Switch { discriminant, cases } => StmtKind::Switch {
                discriminant: e(self, discriminant),
                cases: cases
                    .iter()
                    .map(|c| SwitchCase { test: c.test.as_ref().map(|t| e(self, t)), body: self.stmts(&c.body), span: c.span })
                    .collect(),
            },
            StmtKind::Block { body } => StmtKind::Block { body: self.stmts(body) },
            StmtKind::Function { func } => StmtKind::Function { func: self.func(func) },
            StmtKind::With { .. } => return self.stmt(s),
            other => other.clone(),
        };
        Stmt::new(kind, s.span)
    }

    fn expr(&mut self, x: &Expr) -> Expr {
        match &x.kind {
            ExprKind::Function { func } => Expr::new(ExprKind::Function { func: self.func(func) }, x.span),
            _ => map_expr_children(x, &mut |c| self.expr(c)),
        }
    }
}

/// Rewrites identifiers inside one `with` body.
struct Scoped<'a> {
    temp: &'a str,
    /// Names bound between the `with` and the current point (function
    /// parameters and locals, catch variables), which the object cannot
    /// intercept.
    shadow: HashSet<String>,
    owner: &'a mut WithEliminator,
}

fn mk(kind: ExprKind, span: Span) -> Expr {
    Expr::new(kind, span)
}

fn ident(name: &str, span: Span) -> Expr {
    mk(ExprKind::Ident { name: name.into() }, span)
}

fn string(value: &str, span: Span) -> Expr {
    mk(ExprKind::Str { value: value.into() }, span)
}

impl Scoped<'_> {
    fn intercepts(&self, name: &str) -> bool {
        !name.starts_with(crate::syntax::RESERVED_PREFIX) && !self.shadow.contains(name)
    }

    fn obj(&self, span: Span) -> Expr {
        ident(self.temp, span)
    }

    fn member(&self, name: &str, span: Span) -> Expr {
        mk(ExprKind::Member { object: Box::new(self.obj(span)), property: name.into() }, span)
    }

    /// `"x" in w`
    fn has(&self, name: &str, span: Span) -> Expr {
        mk(
            ExprKind::Binary { op: BinOp::In, left: Box::new(string(name, span)), right: Box::new(self.obj(span)) },
            span,
        )
    }

    /// `w.hasOwnProperty("x")`
    fn has_own(&self, name: &str, span: Span) -> Expr {
        let callee = self.member("hasOwnProperty", span);
        mk(ExprKind::Call { callee: Box::new(callee), args: vec![string(name, span)] }, span)
    }

    fn cond(test: Expr, a: Expr, b: Expr, span: Span) -> Expr {
        mk(ExprKind::Cond { test: Box::new(test), consequent: Box::new(a), alternate: Box::new(b) }, span)
    }

    fn if_stmt(test: Expr, a: StmtKind, b: StmtKind, span: Span) -> StmtKind {
        let block = |k| Box::new(Stmt::new(StmtKind::Block { body: vec![Stmt::new(k, span)] }, span));
        StmtKind::If { test, consequent: block(a), alternate: Some(block(b)) }
    }

    /// Enters a function: its parameters and locals hide the object.
    fn function(&mut self, f: &Function, own_name: bool) -> Function {
        let saved = self.shadow.clone();
        self.shadow.extend(f.params.iter().cloned());
        self.shadow.extend(lift_vars(&f.body).names());
        if own_name {
            self.shadow.extend(f.name.iter().cloned());
        }
        let body = self.stmts(&f.body);
        self.shadow = saved;
        Function { body, ..f.clone() }
    }

    fn stmts(&mut self, ss: &[Stmt]) -> Vec<Stmt> {
        ss.iter().map(|s| self.stmt(s)).collect()
    }

    fn boxed(&mut self, s: &Stmt) -> Box<Stmt> {
        Box::new(self.stmt(s))
    }

    fn stmt(&mut self, s: &Stmt) -> Stmt {
        let span = s.span;
        let kind = match &s.kind {
            StmtKind::Expr { expr } => match &expr.kind {
                ExprKind::Assign { op: None, target, value } => match &target.kind {
                    ExprKind::Ident { name } if self.intercepts(name) => {
                        let v = self.expr(value);
                        let assign = |t: Expr| StmtKind::Expr {
                            expr: mk(ExprKind::Assign { op: None, target: Box::new(t), value: Box::new(v.clone()) }, expr.span),
                        };
                        Self::if_stmt(self.has_own(name, span), assign(self.member(name, span)), assign(ident(name, span)), span)
                    }
                    _ => StmtKind::Expr { expr: self.expr(expr) },
                },
                _ => StmtKind::Expr { expr: self.expr(expr) },
            },
            StmtKind::Return { value: Some(v) } => match &v.kind {
                ExprKind::Ident { name } if self.intercepts(name) => Self::if_stmt(
                    self.has(name, span),
                    StmtKind::Return { value: Some(self.member(name, v.span)) },
                    StmtKind::Return { value: Some(v.clone()) },
                    span,
                ),
                _ => StmtKind::Return { value: Some(self.expr(v)) },
            },
            StmtKind::Var { decls } => {
                let mut plain = Vec::new();
                let mut assigns = Vec::new();
                for d in decls {
                    match &d.init {
                        Some(init) if self.intercepts(&d.name) => {
                            plain.push(VarDecl { init: None, ..d.clone() });
                            let target = ident(&d.name, d.span);
                            let a = mk(ExprKind::Assign { op: None, target: Box::new(target), value: Box::new(init.clone()) }, d.span);
                            assigns.push(Stmt::new(StmtKind::Expr { expr: a }, d.span));
                        }
                        _ => plain.push(VarDecl { init: d.init.as_ref().map(|i| self.expr(i)), ..d.clone() }),
                    }
                }
                if assigns.is_empty() {
                    StmtKind::Var { decls: plain }
                } else {
                    let mut body = vec![Stmt::new(StmtKind::Var { decls: plain }, span)];
                    body.extend(assigns.iter().map(|a| self.stmt(a)));
                    StmtKind::Block { body }
                }
            }
            StmtKind::For { init: Some(ForInit::Var { decls }), test, update, body } => {
                let decl = Stmt::new(StmtKind::Var { decls: decls.clone() }, span);
                let rest = Stmt::new(
                    StmtKind::For { init: None, test: test.clone(), update: update.clone(), body: body.clone() },
                    span,
                );
                StmtKind::Block { body: vec![self.stmt(&decl), self.stmt(&rest)] }
            }
            StmtKind::ForIn { declared, name, object, body } if self.intercepts(name) => {
                let key = self.owner.fresh("key");
                let assign = mk(
                    ExprKind::Assign { op: None, target: Box::new(ident(name, span)), value: Box::new(ident(&key, span)) },
                    span,
                );
                let mut inner = vec![self.stmt(&Stmt::new(StmtKind::Expr { expr: assign }, span))];
                inner.push(self.stmt(body));
                let forin = Stmt::new(
                    StmtKind::ForIn {
                        declared: true,
                        name: key,
                        object: self.expr(object),
                        body: Box::new(Stmt::new(StmtKind::Block { body: inner }, span)),
                    },
                    span,
                );
                if *declared {
                    let decl = Stmt::new(StmtKind::Var { decls: vec![VarDecl { name: name.clone(), init: None, span }] }, span);
                    StmtKind::Block { body: vec![decl, forin] }
                } else {
                    return forin;
                }
            }
            StmtKind::Try { block, handler, finalizer } => StmtKind::Try {
                block: self.stmts(block),
                handler: handler.as_ref().map(|h| {
                    let saved = self.shadow.clone();
                    self.shadow.insert(h.param.clone());
                    let body = self.stmts(&h.body);
                    self.shadow = saved;
                    CatchClause { body, ..h.clone() }
                }),
                finalizer: finalizer.as_ref().map(|f| self.stmts(f)),
            },
            StmtKind::Function { func } => StmtKind::Function { func: self.function(func, false) },
            _ => {
                // Everything else: rewrite subexpressions and substatements.
                let mut copy = s.clone();
                self.children(&mut copy);
                return copy;
            }
        };
        Stmt::new(kind, span)
    }

    fn children(&mut self, s: &mut Stmt) {
        match &mut s.kind {
            StmtKind::Expr { expr } | StmtKind::Throw { value: expr } => *expr = self.expr(expr),
            StmtKind::Return { value: Some(v) } => *v = self.expr(v),
            StmtKind::If { test, consequent, alternate } => {
                *test = self.expr(test);
                *consequent = self.boxed(consequent);
                if let Some(a) = alternate {
                    *a = self.boxed(a);
                }
            }
            StmtKind::While { test, body } | StmtKind::DoWhile { body, test } => {
                *test = self.expr(test);
                *body = self.boxed(body);
            }
            StmtKind::For { init, test, update, body } => {
                if let Some(ForInit::Expr { expr }) = init {
                    *expr = self.expr(expr);
                }
                if let Some(t) = test {
                    *t = self.expr(t);
                }
                if let Some(u) = update {
                    *u = self.expr(u);
                }
                *body = self.boxed(body);
            }
            StmtKind::ForIn { object, body, .. } => {
                *object = self.expr(object);
                *body = self.boxed(body);
            }
            StmtKind::Labeled { body, .. } => *body = self.boxed(body),
            StmtKind::Switch { discriminant, cases } => {
                *discriminant = self.expr(discriminant);
                for c in cases {
                    if let Some(t) = &mut c.test {
                        *t = self.expr(t);
                    }
                    c.body = self.stmts(&c.body);
                }
            }
            StmtKind::Block { body } => *body = self.stmts(body),
            _ => {}
        }
    }

    fn expr(&mut self, e: &Expr) -> Expr {
        let span = e.span;
        match &e.kind {
            ExprKind::Ident { name } if self.intercepts(name) => {
                Self::cond(self.has(name, span), self.member(name, span), e.clone(), span)
            }
            ExprKind::Assign { op, target, value } => match &target.kind {
                ExprKind::Ident { name } if self.intercepts(name) => {
                    let v = self.expr(value);
                    let assign = |t: Expr| mk(ExprKind::Assign { op: *op, target: Box::new(t), value: Box::new(v.clone()) }, span);
                    Self::cond(self.has_own(name, span), assign(self.member(name, span)), assign(ident(name, span)), span)
                }
                _ => {
                    let target = Box::new(self.target(target));
                    mk(ExprKind::Assign { op: *op, target, value: Box::new(self.expr(value)) }, span)
                }
            },
            ExprKind::Update { op, prefix, target } => match &target.kind {
                ExprKind::Ident { name } if self.intercepts(name) => {
                    let upd = |t: Expr| mk(ExprKind::Update { op: *op, prefix: *prefix, target: Box::new(t) }, span);
                    Self::cond(self.has_own(name, span), upd(self.member(name, span)), upd(ident(name, span)), span)
                }
                _ => mk(ExprKind::Update { op: *op, prefix: *prefix, target: Box::new(self.target(target)) }, span),
            },
            ExprKind::Call { callee, args } => match &callee.kind {
                ExprKind::Ident { name } if self.intercepts(name) => {
                    let args: Vec<Expr> = args.iter().map(|a| self.expr(a)).collect();
                    let method = mk(ExprKind::Call { callee: Box::new(self.member(name, span)), args: args.clone() }, span);
                    let plain = mk(ExprKind::Call { callee: callee.clone(), args }, span);
                    Self::cond(self.has(name, span), method, plain, span)
                }
                _ => map_expr_children(e, &mut |c| self.expr(c)),
            },
            ExprKind::Unary { op: UnaryOp::Delete, arg } if matches!(arg.kind, ExprKind::Ident { .. }) => e.clone(),
            ExprKind::Function { func } => mk(ExprKind::Function { func: self.function(func, true) }, span),
            _ => map_expr_children(e, &mut |c| self.expr(c)),
        }
    }

    /// A member or index target: only its subexpressions are rewritten.
    fn target(&mut self, t: &Expr) -> Expr {
        match &t.kind {
            ExprKind::Ident { .. } => t.clone(),
            _ => map_expr_children(t, &mut |c| self.expr(c)),
        }
    }
}
