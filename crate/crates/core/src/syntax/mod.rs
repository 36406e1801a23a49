//! Abstract syntax of the core calculus.
//!
//! One expression tree is shared by the evaluator, the desugarer and the
//! sandbox type checker. Children are reference counted so that values
//! substituted into many positions (closures, prelude helpers) are shared
//! rather than copied.

pub mod printer;
pub mod reader;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::rc::Rc;

use crate::delta::PrimOp;

pub use printer::{print_config, print_expr};
pub use reader::{parse_expr, ReadError};

/// Identifiers are shared strings; substitution clones them often.
pub type Ident = Rc<str>;

/// A shared expression node.
pub type Term = Rc<Expr>;

/// Prefix reserved for names introduced by the implementation (desugarer
/// temporaries, prelude helpers, internal labels). Surface JavaScript
/// identifiers can never start with it.
pub const RESERVED_PREFIX: char = '%';

#[derive(Clone, Debug)]
pub enum Const {
    Num(f64),
    Str(Rc<str>),
    Bool(bool),
    Undefined,
    Null,
}

impl Const {
    pub fn str(s: &str) -> Const {
        Const::Str(Rc::from(s))
    }
}

/// Structural equality. Numbers compare by bit pattern (NaN equals NaN,
/// `0` differs from `-0`); physical equality lives in `delta`.
impl PartialEq for Const {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Const::Num(a), Const::Num(b)) => {
                a.to_bits() == b.to_bits() || (a.is_nan() && b.is_nan())
            }
            (Const::Str(a), Const::Str(b)) => a == b,
            (Const::Bool(a), Const::Bool(b)) => a == b,
            (Const::Undefined, Const::Undefined) | (Const::Null, Const::Null) => true,
            _ => false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Location(pub usize);

impl Location {
    /// The global object always lives here.
    pub const GLOBAL: Location = Location(0);
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(pub Rc<str>);

impl Label {
    pub fn new(name: &str) -> Label {
        Label(Rc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Id(Ident),
    Const(Const),
    Func(Vec<Ident>, Term),
    Object(Vec<(Rc<str>, Term)>),
    Let(Ident, Term, Term),
    App(Term, Vec<Term>),
    GetField(Term, Term),
    UpdateField(Term, Term, Term),
    DeleteField(Term, Term),
    Ref(Term),
    Deref(Term),
    SetRef(Term, Term),
    If(Term, Term, Term),
    Seq(Term, Term),
    While(Term, Term),
    Label(Label, Term),
    Break(Label, Term),
    TryCatch(Term, Ident, Term),
    TryFinally(Term, Term),
    Throw(Term),
    /// Runtime only: a propagating exception.
    Err(Term),
    Prim(PrimOp, Vec<Term>),
    /// Runtime only: a heap location.
    Loc(Location),
}

impl Expr {
    pub fn is_value(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Func(..) | Expr::Loc(_) => true,
            Expr::Object(fields) => fields.iter().all(|(_, v)| v.is_value()),
            _ => false,
        }
    }

    pub fn as_const(&self) -> Option<&Const> {
        match self {
            Expr::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Expr::Const(Const::Str(s)) => Some(s),
            _ => None,
        }
    }

    pub fn as_loc(&self) -> Option<Location> {
        match self {
            Expr::Loc(l) => Some(*l),
            _ => None,
        }
    }

    /// All immediate children, in source order.
    pub fn children(&self) -> Vec<&Term> {
        match self {
            Expr::Id(_) | Expr::Const(_) | Expr::Loc(_) => vec![],
            Expr::Func(_, body) => vec![body],
            Expr::Object(fields) => fields.iter().map(|(_, v)| v).collect(),
            Expr::Let(_, rhs, body) => vec![rhs, body],
            Expr::App(f, args) => std::iter::once(f).chain(args.iter()).collect(),
            Expr::GetField(o, f) | Expr::DeleteField(o, f) => vec![o, f],
            Expr::UpdateField(o, f, v) => vec![o, f, v],
            Expr::Ref(e) | Expr::Deref(e) | Expr::Throw(e) | Expr::Err(e) => vec![e],
            Expr::SetRef(l, v) => vec![l, v],
            Expr::If(c, t, e) => vec![c, t, e],
            Expr::Seq(a, b) | Expr::While(a, b) | Expr::TryFinally(a, b) => vec![a, b],
            Expr::Label(_, e) | Expr::Break(_, e) => vec![e],
            Expr::TryCatch(b, _, h) => vec![b, h],
            Expr::Prim(_, args) => args.iter().collect(),
        }
    }

    /// How many leading children sit in evaluation positions (left to
    /// right, per the evaluation-context grammar).
    pub fn eval_arity(&self) -> usize {
        match self {
            Expr::Id(_) | Expr::Const(_) | Expr::Loc(_) | Expr::Func(..) | Expr::While(..) => 0,
            Expr::Object(fields) => fields.len(),
            Expr::App(_, args) => 1 + args.len(),
            Expr::Prim(_, args) => args.len(),
            Expr::GetField(..) | Expr::DeleteField(..) | Expr::SetRef(..) => 2,
            Expr::UpdateField(..) => 3,
            Expr::Let(..)
            | Expr::Ref(_)
            | Expr::Deref(_)
            | Expr::If(..)
            | Expr::Seq(..)
            | Expr::Label(..)
            | Expr::Break(..)
            | Expr::TryCatch(..)
            | Expr::TryFinally(..)
            | Expr::Throw(_)
            | Expr::Err(_) => 1,
        }
    }

    /// A copy of this node with child `index` (as numbered by `children`)
    /// replaced.
    pub fn with_child(&self, index: usize, new: Term) -> Expr {
        fn out_of_range(index: usize) -> ! {
            panic!("child index {index} out of range")
        }
        let bad = || out_of_range(index);
        match self {
            Expr::Id(_) | Expr::Const(_) | Expr::Loc(_) => bad(),
            Expr::Func(ps, _) => Expr::Func(ps.clone(), new),
            Expr::Object(fields) => {
                let mut fields = fields.clone();
                fields.get_mut(index).unwrap_or_else(|| out_of_range(index)).1 = new;
                Expr::Object(fields)
            }
            Expr::Let(x, rhs, body) => match index {
                0 => Expr::Let(x.clone(), new, body.clone()),
                1 => Expr::Let(x.clone(), rhs.clone(), new),
                _ => bad(),
            },
            Expr::App(f, args) => {
                if index == 0 {
                    Expr::App(new, args.clone())
                } else {
                    let mut args = args.clone();
                    *args.get_mut(index - 1).unwrap_or_else(|| out_of_range(index)) = new;
                    Expr::App(f.clone(), args)
                }
            }
            Expr::GetField(o, f) => match index {
                0 => Expr::GetField(new, f.clone()),
                1 => Expr::GetField(o.clone(), new),
                _ => bad(),
            },
            Expr::DeleteField(o, f) => match index {
                0 => Expr::DeleteField(new, f.clone()),
                1 => Expr::DeleteField(o.clone(), new),
                _ => bad(),
            },
            Expr::UpdateField(o, f, v) => match index {
                0 => Expr::UpdateField(new, f.clone(), v.clone()),
                1 => Expr::UpdateField(o.clone(), new, v.clone()),
                2 => Expr::UpdateField(o.clone(), f.clone(), new),
                _ => bad(),
            },
            Expr::Ref(_) => Expr::Ref(new),
            Expr::Deref(_) => Expr::Deref(new),
            Expr::Throw(_) => Expr::Throw(new),
            Expr::Err(_) => Expr::Err(new),
            Expr::SetRef(l, v) => match index {
                0 => Expr::SetRef(new, v.clone()),
                1 => Expr::SetRef(l.clone(), new),
                _ => bad(),
            },
            Expr::If(c, t, e) => match index {
                0 => Expr::If(new, t.clone(), e.clone()),
                1 => Expr::If(c.clone(), new, e.clone()),
                2 => Expr::If(c.clone(), t.clone(), new),
                _ => bad(),
            },
            Expr::Seq(a, b) => match index {
                0 => Expr::Seq(new, b.clone()),
                1 => Expr::Seq(a.clone(), new),
                _ => bad(),
            },
            Expr::While(a, b) => match index {
                0 => Expr::While(new, b.clone()),
                1 => Expr::While(a.clone(), new),
                _ => bad(),
            },
            Expr::TryFinally(a, b) => match index {
                0 => Expr::TryFinally(new, b.clone()),
                1 => Expr::TryFinally(a.clone(), new),
                _ => bad(),
            },
            Expr::Label(l, _) => Expr::Label(l.clone(), new),
            Expr::Break(l, _) => Expr::Break(l.clone(), new),
            Expr::TryCatch(b, x, h) => match index {
                0 => Expr::TryCatch(new, x.clone(), h.clone()),
                1 => Expr::TryCatch(b.clone(), x.clone(), new),
                _ => bad(),
            },
            Expr::Prim(op, args) => {
                let mut args = args.clone();
                *args.get_mut(index).unwrap_or_else(|| out_of_range(index)) = new;
                Expr::Prim(*op, args)
            }
        }
    }

    /// Number of nodes in the tree (shared subtrees counted each time).
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }
}

/// Convenience constructors used by the desugarer, the prelude and tests.
pub mod build {
    use super::*;

    pub fn id(x: &str) -> Term {
        Rc::new(Expr::Id(Rc::from(x)))
    }
    pub fn num(n: f64) -> Term {
        Rc::new(Expr::Const(Const::Num(n)))
    }
    pub fn str(s: &str) -> Term {
        Rc::new(Expr::Const(Const::str(s)))
    }
    pub fn boolean(b: bool) -> Term {
        Rc::new(Expr::Const(Const::Bool(b)))
    }
    pub fn undefined() -> Term {
        Rc::new(Expr::Const(Const::Undefined))
    }
    pub fn null() -> Term {
        Rc::new(Expr::Const(Const::Null))
    }
    pub fn loc(l: usize) -> Term {
        Rc::new(Expr::Loc(Location(l)))
    }
    pub fn func(params: &[&str], body: Term) -> Term {
        Rc::new(Expr::Func(params.iter().map(|p| Rc::from(*p)).collect(), body))
    }
    pub fn object(fields: Vec<(&str, Term)>) -> Term {
        Rc::new(Expr::Object(
            fields.into_iter().map(|(k, v)| (Rc::from(k), v)).collect(),
        ))
    }
    pub fn let_(x: &str, rhs: Term, body: Term) -> Term {
        Rc::new(Expr::Let(Rc::from(x), rhs, body))
    }
    pub fn app(f: Term, args: Vec<Term>) -> Term {
        Rc::new(Expr::App(f, args))
    }
    pub fn get(o: Term, f: Term) -> Term {
        Rc::new(Expr::GetField(o, f))
    }
    pub fn update(o: Term, f: Term, v: Term) -> Term {
        Rc::new(Expr::UpdateField(o, f, v))
    }
    pub fn delete(o: Term, f: Term) -> Term {
        Rc::new(Expr::DeleteField(o, f))
    }
    pub fn ref_(e: Term) -> Term {
        Rc::new(Expr::Ref(e))
    }
    pub fn deref(e: Term) -> Term {
        Rc::new(Expr::Deref(e))
    }
    pub fn set(l: Term, v: Term) -> Term {
        Rc::new(Expr::SetRef(l, v))
    }
    pub fn if_(c: Term, t: Term, e: Term) -> Term {
        Rc::new(Expr::If(c, t, e))
    }
    pub fn seq(a: Term, b: Term) -> Term {
        Rc::new(Expr::Seq(a, b))
    }
    /// Right-nested sequence; `undefined` when empty.
    pub fn seq_all(mut items: Vec<Term>) -> Term {
        let mut acc = match items.pop() {
            Some(last) => last,
            None => return undefined(),
        };
        while let Some(prev) = items.pop() {
            acc = seq(prev, acc);
        }
        acc
    }
    pub fn while_(c: Term, b: Term) -> Term {
        Rc::new(Expr::While(c, b))
    }
    pub fn label(l: &str, e: Term) -> Term {
        Rc::new(Expr::Label(Label::new(l), e))
    }
    pub fn break_(l: &str, e: Term) -> Term {
        Rc::new(Expr::Break(Label::new(l), e))
    }
    pub fn try_catch(b: Term, x: &str, h: Term) -> Term {
        Rc::new(Expr::TryCatch(b, Rc::from(x), h))
    }
    pub fn try_finally(b: Term, f: Term) -> Term {
        Rc::new(Expr::TryFinally(b, f))
    }
    pub fn throw(e: Term) -> Term {
        Rc::new(Expr::Throw(e))
    }
    pub fn err(v: Term) -> Term {
        Rc::new(Expr::Err(v))
    }
    pub fn prim(op: PrimOp, args: Vec<Term>) -> Term {
        Rc::new(Expr::Prim(op, args))
    }
}

/// The heap: a finite map from locations to values plus the next fresh id.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Store {
    cells: BTreeMap<Location, Term>,
    next: usize,
}

impl Store {
    pub fn new() -> Store {
        Store::default()
    }

    pub fn alloc(&mut self, value: Term) -> Location {
        let l = Location(self.next);
        self.next += 1;
        self.cells.insert(l, value);
        l
    }

    /// Places `value` at an explicit location, keeping the fresh counter
    /// above every id in the domain.
    pub fn insert(&mut self, l: Location, value: Term) {
        self.cells.insert(l, value);
        self.next = self.next.max(l.0 + 1);
    }

    pub fn get(&self, l: Location) -> Option<&Term> {
        self.cells.get(&l)
    }

    /// Overwrites an existing cell; returns false if `l` is not allocated.
    pub fn set(&mut self, l: Location, value: Term) -> bool {
        match self.cells.get_mut(&l) {
            Some(cell) => {
                *cell = value;
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, l: Location) -> bool {
        self.cells.contains_key(&l)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn next_fresh(&self) -> usize {
        self.next
    }

    pub fn iter(&self) -> impl Iterator<Item = (Location, &Term)> {
        self.cells.iter().map(|(l, v)| (*l, v))
    }
}

/// A store paired with an expression: the unit of small-step reduction.
#[derive(Clone, Debug, PartialEq)]
pub struct Configuration {
    pub store: Store,
    pub expr: Term,
}

impl Configuration {
    pub fn new(expr: Term) -> Configuration {
        Configuration { store: Store::new(), expr }
    }
}

pub fn free_variables(e: &Expr) -> BTreeSet<Ident> {
    let mut out = BTreeSet::new();
    let mut bound = Vec::new();
    collect_free(e, &mut bound, &mut out);
    out
}

fn collect_free(e: &Expr, bound: &mut Vec<Ident>, out: &mut BTreeSet<Ident>) {
    match e {
        Expr::Id(x) => {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
        }
        Expr::Func(params, body) => {
            let n = bound.len();
            bound.extend(params.iter().cloned());
            collect_free(body, bound, out);
            bound.truncate(n);
        }
        Expr::Let(x, rhs, body) => {
            collect_free(rhs, bound, out);
            bound.push(x.clone());
            collect_free(body, bound, out);
            bound.pop();
        }
        Expr::TryCatch(b, x, h) => {
            collect_free(b, bound, out);
            bound.push(x.clone());
            collect_free(h, bound, out);
            bound.pop();
        }
        _ => {
            for c in e.children() {
                collect_free(c, bound, out);
            }
        }
    }
}

fn occurs_free(e: &Expr, x: &str) -> bool {
    match e {
        Expr::Id(y) => &**y == x,
        Expr::Func(params, body) => !params.iter().any(|p| &**p == x) && occurs_free(body, x),
        Expr::Let(y, rhs, body) => occurs_free(rhs, x) || (&**y != x && occurs_free(body, x)),
        Expr::TryCatch(b, y, h) => occurs_free(b, x) || (&**y != x && occurs_free(h, x)),
        _ => e.children().iter().any(|c| occurs_free(c, x)),
    }
}

/// `body[x/replacement]`, capture avoiding.
pub fn substitute(body: &Term, x: &str, replacement: &Term) -> Term {
    substitute_all(body, &[(Rc::from(x), replacement.clone())])
}

/// Simultaneous substitution. Binders that would capture a free variable
/// of a replacement are renamed to a fresh name first.
pub fn substitute_all(body: &Term, bindings: &[(Ident, Term)]) -> Term {
    if bindings.is_empty() {
        return body.clone();
    }
    let mut map: BTreeMap<Ident, Term> = BTreeMap::new();
    let mut replacement_fvs = BTreeSet::new();
    for (x, v) in bindings {
        replacement_fvs.extend(free_variables(v));
        map.insert(x.clone(), v.clone());
    }
    let mut subst = Substituter { fvs: replacement_fvs, fresh: 0 };
    subst.go(body, &map)
}

struct Substituter {
    fvs: BTreeSet<Ident>,
    fresh: usize,
}

impl Substituter {
    fn fresh_name(&mut self, base: &str, avoid: &Term) -> Ident {
        loop {
            self.fresh += 1;
            let candidate = format!("{base}%{}", self.fresh);
            if !self.fvs.contains(candidate.as_str()) && !occurs_free(avoid, &candidate) {
                return Rc::from(candidate);
            }
        }
    }

    /// Handles one binder: drops shadowed keys and renames on capture.
    /// Returns the (possibly renamed) binder and the scope body to use.
    fn enter_binder(
        &mut self,
        binder: &Ident,
        scope: &Term,
        map: &BTreeMap<Ident, Term>,
    ) -> (Ident, Term, BTreeMap<Ident, Term>) {
        let mut inner = map.clone();
        inner.remove(binder);
        let needs_rename = self.fvs.contains(binder)
            && inner.keys().any(|k| occurs_free(scope, k));
        if needs_rename {
            let renamed = self.fresh_name(binder, scope);
            let scope = substitute_all(scope, &[(binder.clone(), Rc::new(Expr::Id(renamed.clone())))]);
            (renamed, scope, inner)
        } else {
            (binder.clone(), scope.clone(), inner)
        }
    }

    fn go(&mut self, e: &Term, map: &BTreeMap<Ident, Term>) -> Term {
        if map.is_empty() {
            return e.clone();
        }
        match &**e {
            Expr::Id(y) => map.get(y).cloned().unwrap_or_else(|| e.clone()),
            Expr::Const(_) | Expr::Loc(_) => e.clone(),
            Expr::Func(params, body) => {
                let mut inner = map.clone();
                for p in params {
                    inner.remove(p);
                }
                if inner.is_empty() {
                    return e.clone();
                }
                let mut params = params.clone();
                let mut body = body.clone();
                for i in 0..params.len() {
                    let p = params[i].clone();
                    if self.fvs.contains(&p) && inner.keys().any(|k| occurs_free(&body, k)) {
                        let renamed = self.fresh_name(&p, &body);
                        body = substitute_all(&body, &[(p, Rc::new(Expr::Id(renamed.clone())))]);
                        params[i] = renamed;
                    }
                }
                let new_body = self.go(&body, &inner);
                Rc::new(Expr::Func(params, new_body))
            }
            Expr::Let(x, rhs, body) => {
                let rhs2 = self.go(rhs, map);
                let (x2, body, inner) = self.enter_binder(x, body, map);
                let body2 = self.go(&body, &inner);
                if Rc::ptr_eq(&rhs2, rhs) && Rc::ptr_eq(&body2, &body) && &x2 == x {
                    return e.clone();
                }
                Rc::new(Expr::Let(x2, rhs2, body2))
            }
            Expr::TryCatch(b, x, h) => {
                let b2 = self.go(b, map);
                let (x2, h, inner) = self.enter_binder(x, h, map);
                let h2 = self.go(&h, &inner);
                if Rc::ptr_eq(&b2, b) && Rc::ptr_eq(&h2, &h) && &x2 == x {
                    return e.clone();
                }
                Rc::new(Expr::TryCatch(b2, x2, h2))
            }
            _ => {
                let mut node: Option<Expr> = None;
                for (i, c) in e.children().into_iter().enumerate() {
                    let c2 = self.go(c, map);
                    if !Rc::ptr_eq(&c2, c) {
                        let base = node.take().unwrap_or_else(|| (**e).clone());
                        node = Some(base.with_child(i, c2));
                    }
                }
                match node {
                    Some(n) => Rc::new(n),
                    None => e.clone(),
                }
            }
        }
    }
}

/// Replaces free occurrences of `hole` with an arbitrary (possibly open)
/// expression, deliberately letting enclosing binders capture its free
/// variables. Used to plug a program into the prelude.
pub fn plug_hole(context: &Term, hole: &str, filler: &Term) -> Term {
    match &**context {
        Expr::Id(y) if &**y == hole => filler.clone(),
        Expr::Func(params, _) if params.iter().any(|p| &**p == hole) => context.clone(),
        Expr::Let(x, rhs, body) if &**x == hole => {
            Rc::new(Expr::Let(x.clone(), plug_hole(rhs, hole, filler), body.clone()))
        }
        _ => {
            let mut node = (**context).clone();
            for (i, c) in context.children().into_iter().enumerate() {
                node = node.with_child(i, plug_hole(c, hole, filler));
            }
            Rc::new(node)
        }
    }
}

/// Closed, no dangling locations, distinct object keys and parameters, and
/// `err` only along the evaluation path.
pub fn well_formed(config: &Configuration) -> bool {
    well_formed_reason(config).is_ok()
}

pub fn well_formed_reason(config: &Configuration) -> Result<(), String> {
    let fv = free_variables(&config.expr);
    if let Some(x) = fv.iter().next() {
        return Err(format!("free identifier `{x}`"));
    }
    check_shape(&config.expr, &config.store, true)?;
    for (l, v) in config.store.iter() {
        if !v.is_value() {
            return Err(format!("store cell {l} holds a non-value"));
        }
        if !free_variables(v).is_empty() {
            return Err(format!("store cell {l} holds an open value"));
        }
        check_shape(v, &config.store, false)?;
    }
    Ok(())
}

fn check_shape(e: &Expr, store: &Store, on_eval_path: bool) -> Result<(), String> {
    match e {
        Expr::Loc(l) if !store.contains(*l) => return Err(format!("dangling location {l}")),
        Expr::Err(v) => {
            if !on_eval_path {
                return Err("`err` outside evaluation position".into());
            }
            if !v.is_value() {
                return Err("`err` applied to a non-value".into());
            }
        }
        Expr::Object(fields) => {
            let mut seen = BTreeSet::new();
            for (k, _) in fields {
                if !seen.insert(k.clone()) {
                    return Err(format!("duplicate object key {k:?}"));
                }
            }
        }
        Expr::Func(params, _) => {
            let mut seen = BTreeSet::new();
            for p in params {
                if !seen.insert(p.clone()) {
                    return Err(format!("duplicate parameter `{p}`"));
                }
            }
        }
        _ => {}
    }
    // Only the first non-value child in an evaluation position continues the
    // evaluation path.
    let eval = e.eval_arity();
    let mut path_open = on_eval_path;
    for (i, c) in e.children().into_iter().enumerate() {
        let on_path = path_open && i < eval;
        if on_path && !c.is_value() {
            check_shape(c, store, true)?;
            path_open = false;
        } else {
            check_shape(c, store, false)?;
        }
    }
    Ok(())
}
