//! Counts every way of reading a term as an evaluation context around
//! something a reduction rule applies to. Written from the context grammar
//! directly, independently of the evaluator's decomposition.

use lambdajs::syntax::{Expr, Term};

fn value(e: &Expr) -> bool {
    match e {
        Expr::Const(_) | Expr::Func(..) | Expr::Loc(_) => true,
        Expr::Object(fields) => fields.iter().all(|(_, v)| value(v)),
        _ => false,
    }
}

/// Children that may hold the hole, in left-to-right evaluation order.
fn hole_positions(e: &Expr) -> Vec<&Term> {
    match e {
        Expr::Let(_, rhs, _) => vec![rhs],
        Expr::App(f, args) => std::iter::once(f).chain(args).collect(),
        Expr::Object(fields) => fields.iter().map(|(_, v)| v).collect(),
        Expr::GetField(o, f) | Expr::DeleteField(o, f) => vec![o, f],
        Expr::UpdateField(o, f, v) => vec![o, f, v],
        Expr::SetRef(l, v) => vec![l, v],
        Expr::Ref(x) | Expr::Deref(x) | Expr::Throw(x) => vec![x],
        Expr::If(c, _, _) => vec![c],
        Expr::Seq(a, _) => vec![a],
        Expr::Label(_, b) | Expr::Break(_, b) | Expr::TryCatch(b, _, _) | Expr::TryFinally(b, _) => vec![b],
        Expr::Prim(_, args) => args.iter().collect(),
        _ => vec![],
    }
}

/// Children whose left neighbours are all values: the legal hole sites.
fn open_positions(e: &Expr) -> Vec<&Term> {
    let mut out = Vec::new();
    for c in hole_positions(e) {
        out.push(c);
        if !value(c) {
            break;
        }
    }
    out
}

#[derive(Clone, Copy, PartialEq)]
enum Ctx {
    /// Exception contexts: plain frames, labels and breaks.
    F,
    /// Local jump contexts: plain frames and try/catch.
    G,
}

fn frame_allowed(e: &Expr, ctx: Ctx) -> bool {
    match e {
        Expr::Label(..) | Expr::Break(..) => ctx == Ctx::F,
        Expr::TryCatch(..) => ctx == Ctx::G,
        Expr::TryFinally(..) => false,
        _ => true,
    }
}

fn is_err(e: &Expr) -> bool {
    matches!(e, Expr::Err(v) if value(v))
}

fn is_break(e: &Expr) -> bool {
    matches!(e, Expr::Break(_, v) if value(v))
}

/// Does `e` have the form K⟨s⟩ for a K of kind `ctx` (possibly empty) and
/// a signal `s` satisfying `signal`?
fn signal_in(e: &Expr, ctx: Ctx, signal: fn(&Expr) -> bool) -> bool {
    if signal(e) {
        return true;
    }
    frame_allowed(e, ctx) && open_positions(e).into_iter().any(|c| signal_in(c, ctx, signal))
}

/// As `signal_in`, with K non-empty.
fn signal_strictly_in(e: &Expr, ctx: Ctx, signal: fn(&Expr) -> bool) -> bool {
    !signal(e) && signal_in(e, ctx, signal)
}

/// Rules whose left-hand side is this node.
fn patterns_at(e: &Expr, root: bool) -> usize {
    let mut n = 0;
    let ordinary = !value(e)
        && !matches!(e, Expr::Id(_) | Expr::Err(_) | Expr::Break(..))
        && hole_positions(e).iter().all(|c| value(c));
    n += ordinary as usize;
    match e {
        Expr::TryCatch(b, _, _) => n += signal_in(b, Ctx::F, is_err) as usize,
        Expr::TryFinally(b, _) => {
            n += signal_in(b, Ctx::F, is_err) as usize;
            n += signal_in(b, Ctx::G, is_break) as usize;
        }
        Expr::Label(_, b) | Expr::Break(_, b) => n += signal_in(b, Ctx::G, is_break) as usize,
        _ => {}
    }
    if root {
        n += signal_strictly_in(e, Ctx::F, is_err) as usize;
        n += signal_strictly_in(e, Ctx::G, is_break) as usize;
    }
    n
}

fn count(e: &Expr, root: bool) -> usize {
    patterns_at(e, root) + open_positions(e).into_iter().map(|c| count(c, false)).sum::<usize>()
}

/// Number of (context, redex) readings of a whole program.
pub fn splits(e: &Term) -> usize {
    count(e, true)
}

/// Values and top-level signals are finished.
pub fn is_final(e: &Term) -> bool {
    value(e) || is_err(e) || is_break(e)
}
