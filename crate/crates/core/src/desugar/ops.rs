//! Operator expansions. Each is a fixed context whose holes are the
//! operand translations, each used exactly once.

use crate::delta::PrimOp;
use crate::syntax::build::*;
use crate::syntax::Term;

/// Names bound by the preamble that desugared code refers to.
pub const WINDOW: &str = "%window";
pub const TO_PRIMITIVE: &str = "%ToPrimitive";
pub const TO_PRIMITIVE_STRING: &str = "%ToPrimitiveString";
pub const TO_NUMBER: &str = "%ToNumber";
pub const LOOSE_EQ: &str = "%LooseEq";
pub const HAS_PROPERTY: &str = "%HasProperty";
pub const OBJECT: &str = "%Object";
pub const ARRAY: &str = "%Array";

/// Every preamble name desugared code may mention.
pub const HELPERS: &[&str] =
    &[WINDOW, TO_PRIMITIVE, TO_PRIMITIVE_STRING, TO_NUMBER, LOOSE_EQ, HAS_PROPERTY, OBJECT, ARRAY, "this"];

fn p1(op: PrimOp, a: Term) -> Term {
    prim(op, vec![a])
}

fn p2(op: PrimOp, a: Term, b: Term) -> Term {
    prim(op, vec![a, b])
}

fn is_string(e: Term) -> Term {
    p2(PrimOp::StxEq, p1(PrimOp::Typeof, e), str("string"))
}

pub fn to_number(e: Term) -> Term {
    app(id(TO_NUMBER), vec![e])
}

pub fn to_primitive(e: Term) -> Term {
    app(id(TO_PRIMITIVE), vec![e])
}

pub fn not(e: Term) -> Term {
    if_(e, boolean(false), boolean(true))
}

/// The surface `typeof`: δ's answer on primitives, and on references a
/// look inside for the `code` field that marks function objects.
pub fn typeof_of(e: Term) -> Term {
    let_(
        "%t",
        e,
        if_(
            p1(PrimOp::IsLocation, id("%t")),
            if_(p2(PrimOp::HasOwnField, deref(id("%t")), str("code")), str("function"), str("object")),
            p1(PrimOp::Typeof, id("%t")),
        ),
    )
}

/// Converts a computed field name to a string. Objects go through their
/// `toString` method, the path that makes bracket access dangerous.
pub fn property_key(e: Term) -> Term {
    let_(
        "%f",
        e,
        if_(
            p1(PrimOp::IsLocation, id("%f")),
            p1(PrimOp::ToString, app(id(TO_PRIMITIVE_STRING), vec![id("%f")])),
            if_(is_string(id("%f")), id("%f"), p1(PrimOp::ToString, id("%f"))),
        ),
    )
}

/// `a + b`: convert both operands to primitives (valueOf first), then
/// concatenate if either is a string and add numerically otherwise.
pub fn plus(a: Term, b: Term) -> Term {
    let_(
        "%l",
        a,
        let_(
            "%r",
            b,
            let_(
                "%lp",
                to_primitive(id("%l")),
                let_(
                    "%rp",
                    to_primitive(id("%r")),
                    if_(
                        is_string(id("%lp")),
                        p2(PrimOp::StringConcat, id("%lp"), p1(PrimOp::ToString, id("%rp"))),
                        if_(
                            is_string(id("%rp")),
                            p2(PrimOp::StringConcat, p1(PrimOp::ToString, id("%lp")), id("%rp")),
                            p2(PrimOp::Add, p1(PrimOp::ToNumber, id("%lp")), p1(PrimOp::ToNumber, id("%rp"))),
                        ),
                    ),
                ),
            ),
        ),
    )
}

/// `-`, `*`, `/` and `%`.
pub fn arith(op: PrimOp, a: Term, b: Term) -> Term {
    let_("%l", a, let_("%r", b, p2(op, to_number(id("%l")), to_number(id("%r")))))
}

/// Relational comparison: strings compare as strings, anything else as
/// numbers.
pub fn compare(op: PrimOp, a: Term, b: Term) -> Term {
    let numeric = p2(op, p1(PrimOp::ToNumber, id("%lp")), p1(PrimOp::ToNumber, id("%rp")));
    let_(
        "%l",
        a,
        let_(
            "%r",
            b,
            let_(
                "%lp",
                to_primitive(id("%l")),
                let_(
                    "%rp",
                    to_primitive(id("%r")),
                    if_(
                        is_string(id("%lp")),
                        if_(is_string(id("%rp")), p2(op, id("%lp"), id("%rp")), numeric.clone()),
                        numeric,
                    ),
                ),
            ),
        ),
    )
}

pub fn strict_eq(a: Term, b: Term) -> Term {
    p2(PrimOp::StxEq, a, b)
}

pub fn loose_eq(a: Term, b: Term) -> Term {
    app(id(LOOSE_EQ), vec![a, b])
}

/// `-e`
pub fn negate(e: Term) -> Term {
    p2(PrimOp::Mul, num(-1.0), to_number(e))
}

/// `a && b`
pub fn and(a: Term, b: Term) -> Term {
    let_("%l", a, if_(p1(PrimOp::ToBoolean, id("%l")), b, id("%l")))
}

/// `a || b`
pub fn or(a: Term, b: Term) -> Term {
    let_("%l", a, if_(p1(PrimOp::ToBoolean, id("%l")), id("%l"), b))
}

/// `obj instanceof constr`: walk the prototype chain of `obj` looking for
/// `constr.prototype`. The cursor always holds a reference.
pub fn instance_of(obj: Term, constr: Term) -> Term {
    let step = let_(
        "%p",
        get(deref(deref(id("%cur"))), str("__proto__")),
        if_(
            strict_eq(id("%p"), id("%proto")),
            break_("%done", boolean(true)),
            set(id("%cur"), id("%p")),
        ),
    );
    let_(
        "%cur",
        ref_(obj),
        let_(
            "%constr",
            deref(constr),
            let_(
                "%proto",
                get(id("%constr"), str("prototype")),
                label(
                    "%done",
                    seq(while_(p1(PrimOp::IsLocation, deref(id("%cur"))), step), boolean(false)),
                ),
            ),
        ),
    )
}

/// `key in obj`
pub fn has_property(key: Term, obj: Term) -> Term {
    let_("%k", property_key(key), let_("%o", obj, app(id(HAS_PROPERTY), vec![id("%o"), id("%k")])))
}
