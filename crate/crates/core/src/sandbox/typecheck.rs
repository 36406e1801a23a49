//! The type system that blocks lookups of the `XMLHttpRequest` field.
//!
//! There are two types: `JS` for any safe expression and `NotXHR` for
//! expressions that cannot evaluate to the string "XMLHttpRequest". A
//! field lookup types only when its field expression is `NotXHR`.

use std::fmt;

use crate::delta::{delta, PrimOp};
use crate::desugar::ops;
use crate::js::Span;
use crate::syntax::build::id;
use crate::syntax::{print_expr, Const, Expr, Ident, Term};

/// The field name the sandbox protects.
pub const XHR: &str = "XMLHttpRequest";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SandboxType {
    Js,
    NotXhr,
}

impl SandboxType {
    pub fn is_subtype(self, of: SandboxType) -> bool {
        self == of || (self == SandboxType::NotXhr && of == SandboxType::Js)
    }

    /// Least upper bound.
    pub fn join(self, other: SandboxType) -> SandboxType {
        if self == other {
            self
        } else {
            SandboxType::Js
        }
    }
}

impl fmt::Display for SandboxType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SandboxType::Js => "JS",
            SandboxType::NotXhr => "NotXHR",
        })
    }
}

/// Which typing rules are enabled. Each set includes the previous one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RuleSet {
    /// Field lookup, occurrence typing on the `XMLHttpRequest` guard and
    /// the value rule.
    Basic,
    /// Adds the rules for `if` whose test has already reduced to true,
    /// which intermediate evaluation states need.
    Aux,
    /// Adds a second round of if-splitting: tests that are decided by
    /// constants, let-bound constants or a `typeof ... === "string"` guard
    /// check only the branch that can run. Let-bound names keep the type
    /// of their right-hand side.
    Extended,
}

/// A finite map from identifiers to types.
#[derive(Clone, Debug, Default)]
pub struct TypeEnv {
    entries: Vec<(Ident, SandboxType)>,
}

impl TypeEnv {
    pub fn new() -> TypeEnv {
        TypeEnv::default()
    }

    pub fn insert(&mut self, x: &str, t: SandboxType) {
        self.entries.push((Ident::from(x), t));
    }

    pub fn get(&self, x: &str) -> Option<SandboxType> {
        self.entries.iter().rev().find(|(y, _)| &**y == x).map(|(_, t)| *t)
    }

    /// Every name at `JS`.
    pub fn all_js<I: IntoIterator<Item = S>, S: AsRef<str>>(names: I) -> TypeEnv {
        let mut env = TypeEnv::new();
        for n in names {
            env.insert(n.as_ref(), SandboxType::Js);
        }
        env
    }
}

/// A subterm no rule applies to.
#[derive(Clone, Debug)]
pub struct Rejection {
    pub rule: &'static str,
    pub message: String,
    pub node: Term,
    /// Source position of the nearest enclosing desugared construct.
    pub span: Option<Span>,
}

impl Rejection {
    /// The message and (a prefix of) the offending node.
    pub fn detail(&self) -> String {
        let mut node = print_expr(&self.node).split_whitespace().collect::<Vec<_>>().join(" ");
        if node.chars().count() > 80 {
            node = node.chars().take(77).collect::<String>() + "...";
        }
        format!("{} in `{node}`", self.message)
    }
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(s) = self.span {
            write!(f, "{s}: ")?;
        }
        write!(f, "{}: {}", self.rule, self.detail())
    }
}

pub fn typecheck(env: &TypeEnv, e: &Term, rules: RuleSet) -> Result<SandboxType, Vec<Rejection>> {
    typecheck_with_spans(env, e, rules, &|_| None)
}

/// Like `typecheck`, attributing rejections to the span `spans` gives the
/// nearest enclosing node.
pub fn typecheck_with_spans(
    env: &TypeEnv,
    e: &Term,
    rules: RuleSet,
    spans: &dyn Fn(&Term) -> Option<Span>,
) -> Result<SandboxType, Vec<Rejection>> {
    let mut c = Checker {
        rules,
        env: env.entries.iter().map(|(x, t)| (x.clone(), Binding { ty: *t, abs: Abs::Unknown })).collect(),
        failures: Vec::new(),
        spans,
        span_stack: Vec::new(),
    };
    let t = c.check(e);
    if c.failures.is_empty() {
        Ok(t)
    } else {
        Err(c.failures)
    }
}

/// What is statically known about the value of an expression, if it
/// returns at all.
#[derive(Clone, Debug, PartialEq)]
enum Abs {
    Unknown,
    /// One of these values.
    OneOf(Vec<Term>),
    AnyString,
    AnyLocation,
}

const MAX_CHOICES: usize = 16;

impl Abs {
    fn truth(&self) -> Option<bool> {
        let Abs::OneOf(vs) = self else { return None };
        let mut bools = vs.iter().map(|v| match &**v {
            Expr::Const(Const::Bool(b)) => Some(*b),
            _ => None,
        });
        let first = bools.next()??;
        bools.all(|b| b == Some(first)).then_some(first)
    }

    fn join(self, other: Abs) -> Abs {
        match (self, other) {
            (Abs::OneOf(mut a), Abs::OneOf(b)) => {
                for v in b {
                    if !a.contains(&v) {
                        a.push(v);
                    }
                }
                if a.len() <= MAX_CHOICES {
                    Abs::OneOf(a)
                } else {
                    Abs::Unknown
                }
            }
            (a, b) if a == b => a,
            _ => Abs::Unknown,
        }
    }

    /// Can this be a value `v` is physically equal to?
    fn may_equal(&self, v: &Expr) -> bool {
        match self {
            Abs::AnyString => matches!(v, Expr::Const(Const::Str(_))),
            Abs::AnyLocation => matches!(v, Expr::Loc(_)),
            _ => true,
        }
    }
}

#[derive(Clone, Debug)]
struct Binding {
    ty: SandboxType,
    abs: Abs,
}

struct Checker<'a> {
    rules: RuleSet,
    env: Vec<(Ident, Binding)>,
    failures: Vec<Rejection>,
    spans: &'a dyn Fn(&Term) -> Option<Span>,
    span_stack: Vec<Span>,
}

fn is_xhr(e: &Expr) -> bool {
    matches!(e, Expr::Const(Const::Str(s)) if &**s == XHR)
}

/// `x` when `c` is `x === "XMLHttpRequest"`.
fn xhr_guard(c: &Expr) -> Option<&Ident> {
    match c {
        Expr::Prim(PrimOp::StxEq, args) => match (&*args[0], &*args[1]) {
            (Expr::Id(x), k) if is_xhr(k) => Some(x),
            _ => None,
        },
        _ => None,
    }
}

/// `x` when `c` tests that `x` is a primitive string, either directly or
/// through the desugared `typeof`.
fn string_guard(c: &Expr) -> Option<Ident> {
    let Expr::Prim(PrimOp::StxEq, args) = c else { return None };
    if !matches!(&*args[1], Expr::Const(Const::Str(s)) if &**s == "string") {
        return None;
    }
    match &*args[0] {
        Expr::Prim(PrimOp::Typeof, a) => match &*a[0] {
            Expr::Id(x) => Some(x.clone()),
            _ => None,
        },
        Expr::Let(_, rhs, _) => match &**rhs {
            Expr::Id(x) if args[0] == ops::typeof_of(id(x)) => Some(x.clone()),
            _ => None,
        },
        _ => None,
    }
}

impl Checker<'_> {
    fn lookup(&self, x: &str) -> Option<&Binding> {
        self.env.iter().rev().find(|(y, _)| &**y == x).map(|(_, b)| b)
    }

    fn with_binding<T>(&mut self, x: &Ident, b: Binding, f: impl FnOnce(&mut Self) -> T) -> T {
        self.env.push((x.clone(), b));
        let r = f(self);
        self.env.pop();
        r
    }

    fn fail(&mut self, rule: &'static str, message: impl Into<String>, node: &Term) {
        self.failures.push(Rejection {
            rule,
            message: message.into(),
            node: node.clone(),
            span: self.span_stack.last().copied(),
        });
    }

    fn check(&mut self, e: &Term) -> SandboxType {
        let span = (self.spans)(e);
        if let Some(s) = span {
            self.span_stack.push(s);
        }
        let t = self.check_inner(e);
        if span.is_some() {
            self.span_stack.pop();
        }
        t
    }

    fn check_inner(&mut self, e: &Term) -> SandboxType {
        use SandboxType::*;
        let extended = self.rules >= RuleSet::Extended;
        match &**e {
            // T-String, T-SafeValue
            Expr::Const(_) if is_xhr(e) => Js,
            Expr::Const(_) | Expr::Loc(_) => NotXhr,
            Expr::Id(x) => match self.lookup(x) {
                Some(b) => b.ty,
                None => {
                    self.fail("T-Id", format!("unbound identifier `{x}`"), e);
                    Js
                }
            },
            // T-Fun: the body is checked with every parameter at JS; the
            // resulting closure is a value other than the string.
            Expr::Func(params, body) => {
                let base = self.env.len();
                for p in params {
                    self.env.push((p.clone(), Binding { ty: Js, abs: Abs::Unknown }));
                }
                self.check(body);
                self.env.truncate(base);
                NotXhr
            }
            Expr::Object(fields) => {
                for (_, v) in fields {
                    self.check(v);
                }
                NotXhr
            }
            Expr::Let(x, rhs, body) => {
                let t = self.check(rhs);
                let b = if extended { Binding { ty: t, abs: self.abs(rhs) } } else { Binding { ty: Js, abs: Abs::Unknown } };
                let tb = self.with_binding(x, b, |c| c.check(body));
                if extended {
                    tb
                } else {
                    Js
                }
            }
            Expr::GetField(o, f) => {
                self.check(o);
                if self.check(f) != NotXhr {
                    self.fail("T-GetField", "field name may be \"XMLHttpRequest\"", e);
                }
                Js
            }
            Expr::If(c, t, f) => self.check_if(c, t, f),
            Expr::Seq(a, b) => {
                self.check(a);
                let t = self.check(b);
                if extended {
                    t
                } else {
                    Js
                }
            }
            // T-Prim and the structural rule for the remaining forms.
            _ => {
                for c in e.children() {
                    self.check(c);
                }
                Js
            }
        }
    }

    fn check_if(&mut self, c: &Term, t: &Term, f: &Term) -> SandboxType {
        self.check(c);
        if self.rules >= RuleSet::Aux {
            // T-IfTrue
            if matches!(&**c, Expr::Const(Const::Bool(true))) {
                return self.check(t);
            }
            // T-IfTrue-XHR
            if let Expr::Prim(PrimOp::StxEq, args) = &**c {
                if is_xhr(&args[0]) && is_xhr(&args[1]) {
                    return self.check(t);
                }
            }
        }
        let extended = self.rules >= RuleSet::Extended;
        if extended {
            match self.abs(c).truth() {
                Some(true) => return self.check(t),
                Some(false) => return self.check(f),
                None => {}
            }
            if let Some(x) = string_guard(c) {
                if let Some(b) = self.lookup(&x).cloned() {
                    let narrowed = Binding { abs: Abs::AnyString, ..b };
                    let tt = self.with_binding(&x, narrowed, |me| me.check(t));
                    return tt.join(self.check(f));
                }
            }
        }
        let tt = self.check(t);
        // T-IfSafe
        let tf = match xhr_guard(c) {
            Some(x) => match self.lookup(x).cloned() {
                Some(b) => {
                    let x = x.clone();
                    self.with_binding(&x, Binding { ty: SandboxType::NotXhr, ..b }, |me| me.check(f))
                }
                None => self.check(f),
            },
            None => self.check(f),
        };
        if extended {
            tt.join(tf)
        } else {
            SandboxType::Js
        }
    }

    /// Over-approximates the values `e` can return.
    fn abs(&mut self, e: &Term) -> Abs {
        match &**e {
            _ if e.is_value() => Abs::OneOf(vec![e.clone()]),
            Expr::Id(x) => self.lookup(x).map_or(Abs::Unknown, |b| b.abs.clone()),
            Expr::Ref(_) => Abs::AnyLocation,
            Expr::Let(x, rhs, body) => {
                let a = self.abs(rhs);
                self.with_binding(x, Binding { ty: SandboxType::Js, abs: a }, |me| me.abs(body))
            }
            Expr::If(c, t, f) => match self.abs(c).truth() {
                Some(true) => self.abs(t),
                Some(false) => self.abs(f),
                None => {
                    let a = self.abs(t);
                    a.join(self.abs(f))
                }
            },
            Expr::Prim(op, args) => {
                let avs: Vec<Abs> = args.iter().map(|a| self.abs(a)).collect();
                prim_abs(*op, &avs)
            }
            _ => Abs::Unknown,
        }
    }
}

fn bool_abs(b: bool) -> Abs {
    Abs::OneOf(vec![id_const(Const::Bool(b))])
}

fn id_const(c: Const) -> Term {
    Term::new(Expr::Const(c))
}

fn prim_abs(op: PrimOp, avs: &[Abs]) -> Abs {
    match (op, avs) {
        (PrimOp::IsLocation, [Abs::AnyLocation]) => return bool_abs(true),
        (PrimOp::IsLocation, [Abs::AnyString]) => return bool_abs(false),
        (PrimOp::Typeof, [Abs::AnyString]) => return Abs::OneOf(vec![id_const(Const::str("string"))]),
        (PrimOp::Typeof, [Abs::AnyLocation]) => return Abs::OneOf(vec![id_const(Const::str("object"))]),
        (PrimOp::StxEq, [a, Abs::OneOf(vs)]) | (PrimOp::StxEq, [Abs::OneOf(vs), a])
            if matches!(a, Abs::AnyString | Abs::AnyLocation) && !vs.iter().any(|v| a.may_equal(v)) =>
        {
            return bool_abs(false)
        }
        _ => {}
    }
    let mut choices: Vec<Vec<Term>> = vec![Vec::new()];
    for a in avs {
        let Abs::OneOf(vs) = a else { return Abs::Unknown };
        choices = choices
            .into_iter()
            .flat_map(|prefix| {
                vs.iter().map(move |v| {
                    let mut next = prefix.clone();
                    next.push(v.clone());
                    next
                })
            })
            .collect();
        if choices.len() > MAX_CHOICES {
            return Abs::Unknown;
        }
    }
    // Combinations on which δ fails raise an error and return nothing.
    let results: Vec<Term> = choices.iter().filter_map(|args| delta(op, args).ok()).map(id_const).collect();
    if results.is_empty() {
        return Abs::Unknown;
    }
    results.into_iter().fold(Abs::OneOf(Vec::new()), |acc, r| acc.join(Abs::OneOf(vec![r])))
}

#[cfg(test)]
mod tests;
