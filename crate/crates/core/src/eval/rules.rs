//! The reduction rules proper: contraction of ordinary redexes and the
//! handling of exceptions and breaks at their handlers.

use std::rc::Rc;

use crate::delta::{self, const_to_string};
use crate::syntax::{build, substitute_all, Const, Expr, Ident, Store, Term};

use super::Sink;

/// Parameter list recognised as the output primitive: a function whose
/// second parameter is this name writes its argument to the sink.
pub const PRINT_PARAM: &str = "%print";

fn type_error(store: &mut Store, message: impl Into<String>) -> Term {
    let obj = build::object(vec![("type", build::str("TypeError")), ("message", build::str(&message.into()))]);
    build::err(Rc::new(Expr::Loc(store.alloc(obj))))
}

fn lookup<'a>(fields: &'a [(Rc<str>, Term)], key: &str) -> Option<&'a Term> {
    fields.iter().find(|(k, _)| &**k == key).map(|(_, v)| v)
}

/// Renders a value for the output primitive.
pub fn print_string(store: &Store, v: &Expr) -> String {
    match v {
        Expr::Const(c) => const_to_string(c),
        Expr::Func(..) => "function".into(),
        Expr::Object(_) => "[object Object]".into(),
        Expr::Loc(l) => match store.get(*l).map(|t| &**t) {
            Some(Expr::Object(fields)) => {
                if lookup(fields, "code").is_some() {
                    "function".into()
                } else if let Some(p) = lookup(fields, "%primitive") {
                    print_string(store, p)
                } else {
                    "[object Object]".into()
                }
            }
            Some(other) => print_string(store, other),
            None => format!("{l}"),
        },
        _ => "<non-value>".into(),
    }
}

/// Contracts an ordinary redex (every evaluation-position child is a value).
pub fn contract(redex: &Term, store: &mut Store, sink: &mut dyn Sink) -> (Term, &'static str) {
    match &**redex {
        Expr::Let(x, v, body) => (substitute_all(body, &[(x.clone(), v.clone())]), "E-Let"),
        Expr::App(f, args) => apply(f, args, store, sink),
        Expr::GetField(o, f) => match (&**o, f.as_str()) {
            (Expr::Object(fields), Some(name)) => match lookup(fields, name) {
                Some(v) => (v.clone(), "E-GetField"),
                None => match lookup(fields, "__proto__").map(|p| &**p) {
                    Some(Expr::Loc(l)) => (build::get(build::deref(Rc::new(Expr::Loc(*l))), f.clone()), "E-GetField-Proto"),
                    Some(Expr::Const(Const::Null)) => (build::undefined(), "E-GetField-Proto-Null"),
                    _ => (build::undefined(), "E-GetField-NotFound"),
                },
            },
            (Expr::Object(_), None) => (type_error(store, "field name is not a string"), "E-TypeError"),
            _ => (type_error(store, "field lookup on a non-object"), "E-TypeError"),
        },
        Expr::UpdateField(o, f, v) => match (&**o, f.as_str()) {
            (Expr::Object(fields), Some(name)) => {
                let mut fields = fields.clone();
                match fields.iter_mut().find(|(k, _)| &**k == name) {
                    Some(slot) => {
                        slot.1 = v.clone();
                        (Rc::new(Expr::Object(fields)), "E-UpdateField")
                    }
                    None => {
                        fields.insert(0, (Rc::from(name), v.clone()));
                        (Rc::new(Expr::Object(fields)), "E-CreateField")
                    }
                }
            }
            (Expr::Object(_), None) => (type_error(store, "field name is not a string"), "E-TypeError"),
            _ => (type_error(store, "field update on a non-object"), "E-TypeError"),
        },
        Expr::DeleteField(o, f) => match (&**o, f.as_str()) {
            (Expr::Object(fields), Some(name)) => {
                if lookup(fields, name).is_some() {
                    let rest = fields.iter().filter(|(k, _)| &**k != name).cloned().collect();
                    (Rc::new(Expr::Object(rest)), "E-DeleteField")
                } else {
                    (o.clone(), "E-DeleteField-NotFound")
                }
            }
            (Expr::Object(_), None) => (type_error(store, "field name is not a string"), "E-TypeError"),
            _ => (type_error(store, "field deletion on a non-object"), "E-TypeError"),
        },
        Expr::Ref(v) => (Rc::new(Expr::Loc(store.alloc(v.clone()))), "E-Ref"),
        Expr::Deref(l) => match l.as_loc().and_then(|l| store.get(l)) {
            Some(v) => (v.clone(), "E-Deref"),
            None => (type_error(store, "dereference of a non-location"), "E-TypeError"),
        },
        Expr::SetRef(l, v) => match l.as_loc() {
            Some(loc) if store.set(loc, v.clone()) => (v.clone(), "E-SetRef"),
            _ => (type_error(store, "assignment to a non-location"), "E-TypeError"),
        },
        Expr::If(c, t, e) => match &**c {
            Expr::Const(Const::Bool(true)) => (t.clone(), "E-IfTrue"),
            Expr::Const(Const::Bool(false)) => (e.clone(), "E-IfFalse"),
            _ => (type_error(store, "condition is not a boolean"), "E-TypeError"),
        },
        Expr::Seq(_, b) => (b.clone(), "E-Begin-Discard"),
        Expr::While(c, b) => {
            let again = redex.clone();
            (build::if_(c.clone(), build::seq(b.clone(), again), build::undefined()), "E-While")
        }
        Expr::Label(_, v) => (v.clone(), "E-Label-Pop"),
        Expr::TryCatch(v, _, _) => (v.clone(), "E-Catch-Pop"),
        Expr::TryFinally(v, fin) => (build::seq(fin.clone(), v.clone()), "E-Finally-Pop"),
        Expr::Throw(v) => (build::err(v.clone()), "E-Throw"),
        Expr::Prim(op, args) => match delta::delta(*op, args) {
            Ok(c) => (Rc::new(Expr::Const(c)), "E-Prim"),
            Err(e) => (type_error(store, e.to_string()), "E-TypeError"),
        },
        other => panic!("not a redex: {other:?}"),
    }
}

fn apply(f: &Term, args: &[Term], store: &mut Store, sink: &mut dyn Sink) -> (Term, &'static str) {
    let Expr::Func(params, body) = &**f else {
        return (type_error(store, "application of a non-function"), "E-TypeError");
    };
    if params.len() == 2 && &*params[1] == PRINT_PARAM {
        let arg = args.get(1).map(|a| print_string(store, a)).unwrap_or_else(|| "undefined".into());
        sink.print(&arg);
        return (build::undefined(), "E-Print");
    }
    // Missing arguments are undefined and extra ones are dropped, matching
    // JavaScript's call convention.
    let bindings: Vec<(Ident, Term)> = params
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), args.get(i).cloned().unwrap_or_else(build::undefined)))
        .collect();
    let rule = if params.len() == args.len() { "E-App" } else { "E-App-Arity" };
    (substitute_all(body, &bindings), rule)
}

/// Applies the rule for a signal (`err v` or `break l v`) that reached
/// `handler`.
pub fn handle_signal(handler: &Term, signal: &Term) -> (Term, &'static str) {
    match (&**handler, &**signal) {
        (Expr::TryCatch(_, x, h), Expr::Err(v)) => (substitute_all(h, &[(x.clone(), v.clone())]), "E-Catch"),
        (Expr::TryFinally(_, fin), Expr::Err(_)) => (build::seq(fin.clone(), signal.clone()), "E-Finally-Error"),
        (Expr::TryFinally(_, fin), Expr::Break(..)) => (build::seq(fin.clone(), signal.clone()), "E-Finally-Break"),
        (Expr::Label(l1, _), Expr::Break(l2, v)) => {
            if l1 == l2 {
                (v.clone(), "E-Break")
            } else {
                (signal.clone(), "E-Break-Pop")
            }
        }
        (Expr::Break(_, _), Expr::Break(l2, v)) => {
            (Rc::new(Expr::Break(l2.clone(), v.clone())), "E-Break-Break")
        }
        _ => panic!("{handler:?} does not handle {signal:?}"),
    }
}
