//! Translation of the JavaScript subset into the core calculus.
//!
//! Every form except `with` is translated by a fixed context filled with the
//! translations of its children. `with` is removed beforehand by a
//! source-to-source pass. Internal names all start with `%`, which no
//! source identifier can.

pub mod lift;
pub mod ops;
pub mod preamble;
pub mod with;

use std::collections::{HashMap, HashSet};
use std::rc::Rc;

use crate::delta::PrimOp;
use crate::js::ast::*;
use crate::syntax::build::*;
use crate::syntax::{Expr as Core, Term};

pub use lift::{assigned_names, lift_vars, Lifted};
pub use ops::WINDOW;
pub use with::eliminate_with;

/// The label every function body is wrapped in; `return` breaks to it.
pub const RETURN_LABEL: &str = "%ret";
const BREAK_LABEL: &str = "%brk";
const CONTINUE_LABEL: &str = "%cont";

#[derive(Clone, Debug, Default)]
pub struct Options {
    /// Names translated to bare core identifiers, standing for arbitrary
    /// already-desugared subterms.
    pub placeholders: HashSet<String>,
}

impl Options {
    pub fn with_placeholders<I: IntoIterator<Item = S>, S: Into<String>>(names: I) -> Options {
        Options { placeholders: names.into_iter().map(Into::into).collect() }
    }
}

/// A desugared program (without the preamble) and the source span of each
/// node that is the translation of a source expression or statement.
pub struct Desugared {
    pub term: Term,
    spans: HashMap<usize, Span>,
}

impl Desugared {
    pub fn span_of(&self, t: &Term) -> Option<Span> {
        self.spans.get(&(Rc::as_ptr(t) as usize)).copied()
    }
}

/// Desugars a whole program and plugs it into the preamble.
pub fn desugar(program: &Program) -> Term {
    preamble::wrap(&desugar_program(program, &Options::default()).term)
}

/// Desugars a program without the preamble. Its free identifiers are
/// preamble names (and placeholders).
pub fn desugar_program(program: &Program, options: &Options) -> Desugared {
    let program = if with::contains_with(&program.body) { eliminate_with(program) } else { program.clone() };
    let mut d = Desugarer { options, scopes: Vec::new(), spans: HashMap::new() };
    let term = d.program(&program);
    Desugared { term, spans: d.spans }
}

/// Desugars one expression in the global scope.
pub fn desugar_expression(e: &Expr, options: &Options) -> Term {
    let mut d = Desugarer { options, scopes: Vec::new(), spans: HashMap::new() };
    d.expr(e)
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Binding {
    /// Never assigned: bound directly to its value.
    Value,
    /// Bound to a reference cell.
    Cell,
}

struct Desugarer<'a> {
    options: &'a Options,
    scopes: Vec<HashMap<String, Binding>>,
    spans: HashMap<usize, Span>,
}

fn continue_label(user: Option<&str>) -> String {
    match user {
        Some(l) => format!("{CONTINUE_LABEL}%{l}"),
        None => CONTINUE_LABEL.to_string(),
    }
}

/// Nests `let`s around `body`, first binding outermost.
fn lets(bindings: Vec<(&str, Term)>, body: Term) -> Term {
    bindings.into_iter().rev().fold(body, |acc, (x, rhs)| let_(x, rhs, acc))
}

/// Surface forms whose translation is already a boolean.
fn yields_boolean(e: &Expr) -> bool {
    match &e.kind {
        ExprKind::Bool { .. } | ExprKind::Unary { op: UnaryOp::Not, .. } => true,
        ExprKind::Binary { op, .. } => !matches!(op, BinOp::Add | BinOp::Sub | BinOp::Mul | BinOp::Div | BinOp::Mod),
        _ => false,
    }
}

fn global_get(name: &str) -> Term {
    get(deref(id(WINDOW)), str(name))
}

/// Writes `value` (an identifier, so it may be repeated) into field `key`
/// of the object behind `obj`, producing the value.
fn put(obj: Term, key: Term, value: Term) -> Term {
    seq(set(obj.clone(), update(deref(obj), key, value.clone())), value)
}

impl Desugarer<'_> {
    fn record(&mut self, t: Term, span: Span) -> Term {
        self.spans.entry(Rc::as_ptr(&t) as usize).or_insert(span);
        t
    }

    fn lookup(&self, name: &str) -> Option<Binding> {
        self.scopes.iter().rev().find_map(|s| s.get(name).copied())
    }

    fn read(&self, name: &str) -> Term {
        match self.lookup(name) {
            Some(Binding::Value) => id(name),
            Some(Binding::Cell) => deref(id(name)),
            None if self.options.placeholders.contains(name) => id(name),
            None => match name {
                "undefined" => undefined(),
                "NaN" => num(f64::NAN),
                "Infinity" => num(f64::INFINITY),
                _ => global_get(name),
            },
        }
    }

    fn write(&self, name: &str, value: Term) -> Term {
        match self.lookup(name) {
            Some(Binding::Cell) => set(id(name), value),
            Some(Binding::Value) => unreachable!("assigned binding `{name}` was not given a cell"),
            None => let_("%v", value, put(id(WINDOW), str(name), id("%v"))),
        }
    }

    fn program(&mut self, p: &Program) -> Term {
        let lifted = lift_vars(&p.body);
        let mut items = Vec::new();
        for v in &lifted.vars {
            // Declaring a global creates the field unless it exists.
            let present = prim(PrimOp::HasOwnField, vec![deref(id(WINDOW)), str(v)]);
            items.push(if_(present, undefined(), put(id(WINDOW), str(v), undefined())));
        }
        for f in &lifted.functions {
            let name = f.name.as_deref().expect("declarations are named");
            let obj = self.function(f);
            items.push(self.write(name, obj));
        }
        for s in &lifted.body {
            items.push(self.stmt(s));
        }
        let t = if items.is_empty() { undefined() } else { seq_all(items) };
        self.record(t, p.span)
    }

    /// A function object: the code takes `this` first, and the body runs
    /// inside the return label.
    fn function(&mut self, f: &Function) -> Term {
        let lifted = lift_vars(&f.body);
        let assigned = assigned_names(&f.body);
        let fn_names: HashSet<String> = lifted.functions.iter().filter_map(|g| g.name.clone()).collect();
        let mut frame = HashMap::new();
        let mut cell_params = Vec::new();
        for p in &f.params {
            if assigned.contains(p) || fn_names.contains(p) {
                frame.insert(p.clone(), Binding::Cell);
                cell_params.push(p.clone());
            } else {
                frame.insert(p.clone(), Binding::Value);
            }
        }
        let locals: Vec<String> = lifted.names().into_iter().filter(|n| !f.params.contains(n)).collect();
        for n in &locals {
            frame.insert(n.clone(), Binding::Cell);
        }
        self.scopes.push(frame);
        let mut items = Vec::new();
        for g in &lifted.functions {
            let name = g.name.as_deref().expect("declarations are named");
            let obj = self.function(g);
            items.push(self.write(name, obj));
        }
        for s in &lifted.body {
            items.push(self.stmt(s));
        }
        items.push(undefined());
        self.scopes.pop();
        let mut bindings: Vec<(&str, Term)> = cell_params.iter().map(|p| (p.as_str(), ref_(id(p)))).collect();
        bindings.extend(locals.iter().map(|n| (n.as_str(), ref_(undefined()))));
        let body = lets(bindings, label(RETURN_LABEL, seq_all(items)));
        let mut params: Vec<&str> = vec!["this"];
        params.extend(f.params.iter().map(String::as_str));
        let proto = ref_(object(vec![("__proto__", get(deref(id(ops::OBJECT)), str("prototype")))]));
        ref_(object(vec![("code", func(&params, body)), ("prototype", proto)]))
    }

    fn stmts(&mut self, ss: &[Stmt]) -> Term {
        if ss.is_empty() {
            return undefined();
        }
        let items = ss.iter().map(|s| self.stmt(s)).collect();
        seq_all(items)
    }

    fn stmt(&mut self, s: &Stmt) -> Term {
        let t = self.stmt_inner(s);
        self.record(t, s.span)
    }

    /// The test of a conditional, converted to a boolean unless the
    /// translation is one already.
    fn cond(&mut self, e: &Expr) -> Term {
        let t = self.expr(e);
        if yields_boolean(e) {
            t
        } else {
            prim(PrimOp::ToBoolean, vec![t])
        }
    }

    fn stmt_inner(&mut self, s: &Stmt) -> Term {
        match &s.kind {
            StmtKind::Expr { expr } => self.expr(expr),
            StmtKind::If { test, consequent, alternate } => {
                let c = self.cond(test);
                let t = self.stmt(consequent);
                let e = match alternate {
                    Some(a) => self.stmt(a),
                    None => undefined(),
                };
                if_(c, t, e)
            }
            StmtKind::While { .. } | StmtKind::DoWhile { .. } | StmtKind::For { .. } | StmtKind::ForIn { .. } => {
                self.loop_stmt(s, &[])
            }
            StmtKind::Return { value } => {
                let v = match value {
                    Some(v) => self.expr(v),
                    None => undefined(),
                };
                break_(RETURN_LABEL, v)
            }
            StmtKind::Break { label } => break_(label.as_deref().unwrap_or(BREAK_LABEL), undefined()),
            StmtKind::Continue { label } => break_(&continue_label(label.as_deref()), undefined()),
            StmtKind::Labeled { .. } => {
                let mut labels = Vec::new();
                let mut inner = s;
                while let StmtKind::Labeled { label, body } = &inner.kind {
                    labels.push(label.clone());
                    inner = body;
                }
                let body = match inner.kind {
                    StmtKind::While { .. } | StmtKind::DoWhile { .. } | StmtKind::For { .. } | StmtKind::ForIn { .. } => {
                        let t = self.loop_stmt(inner, &labels);
                        self.record(t, inner.span)
                    }
                    _ => self.stmt(inner),
                };
                labels.iter().rev().fold(body, |acc, l| label(l, acc))
            }
            StmtKind::Try { block, handler, finalizer } => {
                let mut t = self.stmts(block);
                if let Some(h) = handler {
                    let cell = assigned_names(&h.body).contains(&h.param);
                    let binding = if cell { Binding::Cell } else { Binding::Value };
                    self.scopes.push(HashMap::from([(h.param.clone(), binding)]));
                    let mut body = self.stmts(&h.body);
                    self.scopes.pop();
                    if cell {
                        body = let_(&h.param, ref_(id(&h.param)), body);
                    }
                    t = try_catch(t, &h.param, body);
                }
                if let Some(f) = finalizer {
                    t = try_finally(t, self.stmts(f));
                }
                t
            }
            StmtKind::Throw { value } => throw(self.expr(value)),
            StmtKind::Switch { discriminant, cases } => self.switch(discriminant, cases),
            StmtKind::Block { body } => self.stmts(body),
            StmtKind::With { .. } => unreachable!("`with` is eliminated before desugaring"),
            // Declarations were lifted: `var` became assignments and
            // function declarations are initialised at entry.
            StmtKind::Var { .. } | StmtKind::Function { .. } | StmtKind::Empty => undefined(),
        }
    }

    /// Loops: the whole loop sits in the break label and the body in the
    /// continue labels (one per enclosing source label, plus the default).
    fn loop_stmt(&mut self, s: &Stmt, labels: &[String]) -> Term {
        let wrap_body = |me: &mut Self, body: &Stmt| {
            let t = me.stmt(body);
            let t = label(&continue_label(None), t);
            labels.iter().rev().fold(t, |acc, l| label(&continue_label(Some(l)), acc))
        };
        let t = match &s.kind {
            StmtKind::While { test, body } => {
                let c = self.cond(test);
                while_(c, wrap_body(self, body))
            }
            StmtKind::DoWhile { body, test } => {
                let b = wrap_body(self, body);
                let c = self.cond(test);
                let first = if_(deref(id("%first")), seq(set(id("%first"), boolean(false)), boolean(true)), c);
                let_("%first", ref_(boolean(true)), while_(first, b))
            }
            StmtKind::For { init, test, update, body } => {
                let init = match init {
                    Some(ForInit::Expr { expr }) => Some(self.expr(expr)),
                    Some(ForInit::Var { .. }) => unreachable!("loop declarations are lifted"),
                    None => None,
                };
                let c = match test {
                    Some(t) => self.cond(t),
                    None => boolean(true),
                };
                let b = wrap_body(self, body);
                let b = match update {
                    Some(u) => seq(b, self.expr(u)),
                    None => b,
                };
                let lp = label(BREAK_LABEL, while_(c, b));
                return match init {
                    Some(i) => seq(i, lp),
                    None => lp,
                };
            }
            StmtKind::ForIn { name, object, body, .. } => {
                let o = self.expr(object);
                let at = || prim(PrimOp::FieldNameAt, vec![id("%snap"), deref(id("%i"))]);
                let more = ops::not(prim(PrimOp::StxEq, vec![at(), undefined()]));
                let assign = self.write(name, at());
                let b = wrap_body(self, body);
                let next = set(id("%i"), prim(PrimOp::Add, vec![deref(id("%i")), num(1.0)]));
                let lp = while_(more, seq_all(vec![assign, b, next]));
                let iterate = let_("%snap", deref(id("%obj")), let_("%i", ref_(num(0.0)), lp));
                let_("%obj", o, if_(prim(PrimOp::IsLocation, vec![id("%obj")]), iterate, undefined()))
            }
            _ => unreachable!("not a loop"),
        };
        label(BREAK_LABEL, t)
    }

    /// `switch`: find the index of the first matching case (or the
    /// default), then run every case body from there on.
    fn switch(&mut self, discriminant: &Expr, cases: &[SwitchCase]) -> Term {
        let d = self.expr(discriminant);
        let unmatched = || prim(PrimOp::StxEq, vec![deref(id("%t")), num(f64::INFINITY)]);
        let mut items = Vec::new();
        for (i, c) in cases.iter().enumerate() {
            if let Some(test) = &c.test {
                let t = self.expr(test);
                let hit = if_(prim(PrimOp::StxEq, vec![id("%d"), t]), set(id("%t"), num(i as f64)), undefined());
                items.push(if_(unmatched(), hit, undefined()));
            }
        }
        if let Some(i) = cases.iter().position(|c| c.test.is_none()) {
            items.push(if_(unmatched(), set(id("%t"), num(i as f64)), undefined()));
        }
        for (i, c) in cases.iter().enumerate() {
            let body = self.stmts(&c.body);
            items.push(if_(prim(PrimOp::Le, vec![deref(id("%t")), num(i as f64)]), body, undefined()));
        }
        items.push(undefined());
        let_("%d", d, label(BREAK_LABEL, let_("%t", ref_(num(f64::INFINITY)), seq_all(items))))
    }

    fn exprs(&mut self, es: &[Expr]) -> Vec<Term> {
        es.iter().map(|e| self.expr(e)).collect()
    }

    fn expr(&mut self, e: &Expr) -> Term {
        let t = self.expr_inner(e);
        self.record(t, e.span)
    }

    /// The object and field name of an assignable member expression, as
    /// `let` bindings plus the key term valid inside them.
    fn member_target(&mut self, t: &Expr) -> (Vec<(&'static str, Term)>, Term) {
        match &t.kind {
            ExprKind::Member { object, property } => (vec![("%o", self.expr(object))], str(property)),
            ExprKind::Index { object, index } => {
                let o = self.expr(object);
                let k = ops::property_key(self.expr(index));
                (vec![("%o", o), ("%k", k)], id("%k"))
            }
            _ => unreachable!("not a member expression"),
        }
    }

    fn binary(op: BinOp, a: Term, b: Term) -> Term {
        match op {
            BinOp::Add => ops::plus(a, b),
            BinOp::Sub => ops::arith(PrimOp::Sub, a, b),
            BinOp::Mul => ops::arith(PrimOp::Mul, a, b),
            BinOp::Div => ops::arith(PrimOp::Div, a, b),
            BinOp::Mod => ops::arith(PrimOp::Mod, a, b),
            BinOp::Lt => ops::compare(PrimOp::Lt, a, b),
            BinOp::Le => ops::compare(PrimOp::Le, a, b),
            BinOp::Gt => ops::compare(PrimOp::Gt, a, b),
            BinOp::Ge => ops::compare(PrimOp::Ge, a, b),
            BinOp::StrictEq => ops::strict_eq(a, b),
            BinOp::StrictNotEq => ops::not(ops::strict_eq(a, b)),
            BinOp::Eq => ops::loose_eq(a, b),
            BinOp::NotEq => ops::not(ops::loose_eq(a, b)),
            BinOp::InstanceOf => ops::instance_of(a, b),
            BinOp::In => ops::has_property(a, b),
        }
    }

    fn expr_inner(&mut self, e: &Expr) -> Term {
        match &e.kind {
            ExprKind::Num { value } => num(*value),
            ExprKind::Str { value } => str(value),
            ExprKind::Bool { value } => boolean(*value),
            ExprKind::Null => null(),
            ExprKind::Ident { name } => self.read(name),
            ExprKind::This => id("this"),
            ExprKind::Object { props } => {
                let mut fields: Vec<(&str, Term)> = Vec::new();
                for p in props {
                    let v = self.expr(&p.value);
                    fields.push((&p.key, v));
                }
                if !props.iter().any(|p| p.key == "__proto__") {
                    fields.push(("__proto__", get(deref(id(ops::OBJECT)), str("prototype"))));
                }
                ref_(object(fields))
            }
            ExprKind::Array { elements } => {
                let keys: Vec<String> = (0..elements.len()).map(|i| i.to_string()).collect();
                let mut fields: Vec<(&str, Term)> = Vec::new();
                for (k, el) in keys.iter().zip(elements) {
                    let v = self.expr(el);
                    fields.push((k, v));
                }
                fields.push(("length", num(elements.len() as f64)));
                fields.push(("__proto__", get(deref(id(ops::ARRAY)), str("prototype"))));
                ref_(object(fields))
            }
            ExprKind::Function { func } => match &func.name {
                Some(name) => {
                    self.scopes.push(HashMap::from([(name.clone(), Binding::Cell)]));
                    let obj = self.function(func);
                    self.scopes.pop();
                    let_(name, ref_(undefined()), set(id(name), obj))
                }
                None => self.function(func),
            },
            ExprKind::Member { object, property } => get(deref(self.expr(object)), str(property)),
            ExprKind::Index { object, index } => {
                let o = self.expr(object);
                let k = ops::property_key(self.expr(index));
                lets(vec![("%o", o), ("%k", k)], get(deref(id("%o")), id("%k")))
            }
            ExprKind::Call { callee, args } => match &callee.kind {
                ExprKind::Member { .. } | ExprKind::Index { .. } => {
                    let (mut bindings, key) = self.member_target(callee);
                    let args = self.exprs(args);
                    // Rename the target object: it is passed as `this`.
                    bindings[0].0 = "%obj";
                    let f = match bindings.pop() {
                        Some(("%k", k)) => get(deref(id("%obj")), k),
                        Some(other) => {
                            bindings.push(other);
                            get(deref(id("%obj")), key)
                        }
                        None => unreachable!(),
                    };
                    bindings.push(("%f", f));
                    let mut all = vec![id("%obj")];
                    all.extend(args);
                    lets(bindings, app(get(deref(id("%f")), str("code")), all))
                }
                _ => {
                    let f = self.expr(callee);
                    let mut all = vec![id(WINDOW)];
                    all.extend(self.exprs(args));
                    lets(vec![("%fn", f), ("%f", deref(id("%fn")))], app(get(id("%f"), str("code")), all))
                }
            },
            ExprKind::New { callee, args } => {
                let c = deref(self.expr(callee));
                let obj = ref_(object(vec![("__proto__", get(id("%constr"), str("prototype")))]));
                let mut all = vec![id("%obj")];
                all.extend(self.exprs(args));
                let call = app(get(id("%constr"), str("code")), all);
                lets(vec![("%constr", c), ("%obj", obj)], seq(call, id("%obj")))
            }
            ExprKind::Assign { op, target, value } => match &target.kind {
                ExprKind::Ident { name } => {
                    let v = self.expr(value);
                    let v = match op {
                        Some(op) => Self::binary(*op, self.read(name), v),
                        None => v,
                    };
                    self.write(name, v)
                }
                _ => {
                    let (mut bindings, key) = self.member_target(target);
                    let v = self.expr(value);
                    let v = match op {
                        Some(op) => Self::binary(*op, get(deref(id("%o")), key.clone()), v),
                        None => v,
                    };
                    bindings.push(("%v", v));
                    lets(bindings, put(id("%o"), key, id("%v")))
                }
            },
            ExprKind::Binary { op, left, right } => {
                let a = self.expr(left);
                let b = self.expr(right);
                Self::binary(*op, a, b)
            }
            ExprKind::Logical { op, left, right } => {
                let a = self.expr(left);
                let b = self.expr(right);
                match op {
                    LogicalOp::And => ops::and(a, b),
                    LogicalOp::Or => ops::or(a, b),
                }
            }
            ExprKind::Unary { op, arg } => match op {
                UnaryOp::Typeof => ops::typeof_of(self.expr(arg)),
                UnaryOp::Not => ops::not(self.cond(arg)),
                UnaryOp::Neg => ops::negate(self.expr(arg)),
                UnaryOp::Delete => match &arg.kind {
                    ExprKind::Member { .. } | ExprKind::Index { .. } => {
                        let (bindings, key) = self.member_target(arg);
                        let del = set(id("%o"), delete(deref(id("%o")), key));
                        lets(bindings, seq(del, boolean(true)))
                    }
                    // Variables cannot be deleted.
                    ExprKind::Ident { .. } => boolean(false),
                    _ => seq(self.expr(arg), boolean(true)),
                },
            },
            ExprKind::Update { op, prefix, target } => {
                let delta = num(if *op == UpdateOp::Inc { 1.0 } else { -1.0 });
                let bump = |old: Term| prim(PrimOp::Add, vec![old, delta.clone()]);
                match &target.kind {
                    ExprKind::Ident { name } => {
                        let old = ops::to_number(self.read(name));
                        if *prefix {
                            self.write(name, bump(old))
                        } else {
                            let_("%old", old, seq(self.write(name, bump(id("%old"))), id("%old")))
                        }
                    }
                    _ => {
                        let (mut bindings, key) = self.member_target(target);
                        bindings.push(("%old", ops::to_number(get(deref(id("%o")), key.clone()))));
                        bindings.push(("%new", bump(id("%old"))));
                        let result = id(if *prefix { "%new" } else { "%old" });
                        lets(bindings, seq(set(id("%o"), update(deref(id("%o")), key, id("%new"))), result))
                    }
                }
            }
            ExprKind::Cond { test, consequent, alternate } => {
                let c = self.cond(test);
                let a = self.expr(consequent);
                let b = self.expr(alternate);
                if_(c, a, b)
            }
            ExprKind::Sequence { exprs } => seq_all(self.exprs(exprs)),
        }
    }
}

/// True if `t` is an `Id` (used by callers that inspect translations).
pub fn is_identifier(t: &Term) -> bool {
    matches!(&**t, Core::Id(_))
}

#[cfg(test)]
mod tests;
