//! Primitive operators (the δ function) and JavaScript's number/string
//! conversions.

use std::cmp::Ordering;
use std::fmt;
use std::rc::Rc;

use thiserror::Error;

use crate::syntax::{Const, Expr, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrimOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    StringConcat,
    NumToString,
    StringToNum,
    ToBoolean,
    Lt,
    Le,
    Gt,
    Ge,
    StxEq,
    Typeof,
    HasOwnField,
    FieldNames,
    MathFloor,
    IsNaN,
    IsLocation,
    ToNumber,
    ToString,
    FieldNameAt,
}

pub const ALL_OPS: [PrimOp; 23] = [
    PrimOp::Add,
    PrimOp::Sub,
    PrimOp::Mul,
    PrimOp::Div,
    PrimOp::Mod,
    PrimOp::StringConcat,
    PrimOp::NumToString,
    PrimOp::StringToNum,
    PrimOp::ToBoolean,
    PrimOp::Lt,
    PrimOp::Le,
    PrimOp::Gt,
    PrimOp::Ge,
    PrimOp::StxEq,
    PrimOp::Typeof,
    PrimOp::HasOwnField,
    PrimOp::FieldNames,
    PrimOp::MathFloor,
    PrimOp::IsNaN,
    PrimOp::IsLocation,
    PrimOp::ToNumber,
    PrimOp::ToString,
    PrimOp::FieldNameAt,
];

impl PrimOp {
    pub fn name(self) -> &'static str {
        match self {
            PrimOp::Add => "prim-add",
            PrimOp::Sub => "prim-sub",
            PrimOp::Mul => "prim-mul",
            PrimOp::Div => "prim-div",
            PrimOp::Mod => "prim-mod",
            PrimOp::StringConcat => "string-concat",
            PrimOp::NumToString => "num->string",
            PrimOp::StringToNum => "string->num",
            PrimOp::ToBoolean => "to-boolean",
            PrimOp::Lt => "prim-lt",
            PrimOp::Le => "prim-le",
            PrimOp::Gt => "prim-gt",
            PrimOp::Ge => "prim-ge",
            PrimOp::StxEq => "stx-eq",
            PrimOp::Typeof => "typeof",
            PrimOp::HasOwnField => "has-own-field",
            PrimOp::FieldNames => "field-names",
            PrimOp::MathFloor => "math-floor",
            PrimOp::IsNaN => "is-nan",
            PrimOp::IsLocation => "is-location",
            PrimOp::ToNumber => "to-number",
            PrimOp::ToString => "to-string",
            PrimOp::FieldNameAt => "field-name-at",
        }
    }

    pub fn from_name(name: &str) -> Option<PrimOp> {
        ALL_OPS.iter().copied().find(|op| op.name() == name)
    }

    pub fn arity(self) -> usize {
        match self {
            PrimOp::Add
            | PrimOp::Sub
            | PrimOp::Mul
            | PrimOp::Div
            | PrimOp::Mod
            | PrimOp::StringConcat
            | PrimOp::Lt
            | PrimOp::Le
            | PrimOp::Gt
            | PrimOp::Ge
            | PrimOp::StxEq
            | PrimOp::HasOwnField
            | PrimOp::FieldNameAt => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for PrimOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A δ application on values outside the operator's domain. The evaluator
/// turns it into a thrown `TypeError` object.
#[derive(Clone, Debug, Error, PartialEq)]
#[error("{op}: {message}")]
pub struct PrimError {
    pub op: PrimOp,
    pub message: String,
}

fn fail<T>(op: PrimOp, message: impl Into<String>) -> Result<T, PrimError> {
    Err(PrimError { op, message: message.into() })
}

/// Applies a primitive to argument values.
pub fn delta(op: PrimOp, args: &[Term]) -> Result<Const, PrimError> {
    if args.len() != op.arity() {
        return fail(op, format!("expects {} argument(s), got {}", op.arity(), args.len()));
    }
    let a = &*args[0];
    match op {
        PrimOp::Add | PrimOp::Sub | PrimOp::Mul | PrimOp::Div | PrimOp::Mod => {
            let (x, y) = (num_arg(op, a)?, num_arg(op, &args[1])?);
            Ok(Const::Num(match op {
                PrimOp::Add => x + y,
                PrimOp::Sub => x - y,
                PrimOp::Mul => x * y,
                PrimOp::Div => x / y,
                _ => x % y,
            }))
        }
        PrimOp::StringConcat => {
            let (x, y) = (str_arg(op, a)?, str_arg(op, &args[1])?);
            Ok(Const::Str(Rc::from(format!("{x}{y}"))))
        }
        PrimOp::NumToString => Ok(Const::str(&number_to_string(num_arg(op, a)?))),
        PrimOp::StringToNum => Ok(Const::Num(string_to_number(str_arg(op, a)?))),
        PrimOp::ToBoolean => Ok(Const::Bool(to_boolean(a))),
        PrimOp::Lt | PrimOp::Le | PrimOp::Gt | PrimOp::Ge => compare(op, a, &args[1]),
        PrimOp::StxEq => Ok(Const::Bool(stx_eq(a, &args[1]))),
        PrimOp::Typeof => Ok(Const::str(type_of(a))),
        PrimOp::HasOwnField => {
            let fields = obj_arg(op, a)?;
            let name = str_arg(op, &args[1])?;
            Ok(Const::Bool(is_enumerable_key(name) && fields.iter().any(|(k, _)| &**k == name)))
        }
        PrimOp::FieldNames => {
            let fields = obj_arg(op, a)?;
            let names: Vec<&str> = enumerable_keys(fields).collect();
            Ok(Const::str(&names.join(",")))
        }
        PrimOp::FieldNameAt => {
            let fields = obj_arg(op, a)?;
            let i = num_arg(op, &args[1])?;
            if i < 0.0 || i.fract() != 0.0 {
                return Ok(Const::Undefined);
            }
            Ok(enumerable_keys(fields)
                .nth(i as usize)
                .map(Const::str)
                .unwrap_or(Const::Undefined))
        }
        PrimOp::MathFloor => Ok(Const::Num(num_arg(op, a)?.floor())),
        PrimOp::IsNaN => Ok(Const::Bool(num_arg(op, a)?.is_nan())),
        PrimOp::IsLocation => Ok(Const::Bool(matches!(a, Expr::Loc(_)))),
        PrimOp::ToNumber => match a {
            Expr::Const(c) => Ok(Const::Num(const_to_number(c))),
            _ => fail(op, "cannot convert a non-primitive to a number"),
        },
        PrimOp::ToString => match a {
            Expr::Const(c) => Ok(Const::str(&const_to_string(c))),
            _ => fail(op, "cannot convert a non-primitive to a string"),
        },
    }
}

fn num_arg(op: PrimOp, e: &Expr) -> Result<f64, PrimError> {
    match e {
        Expr::Const(Const::Num(n)) => Ok(*n),
        _ => fail(op, "expects a number"),
    }
}

fn str_arg(op: PrimOp, e: &Expr) -> Result<&str, PrimError> {
    match e {
        Expr::Const(Const::Str(s)) => Ok(s),
        _ => fail(op, "expects a string"),
    }
}

fn obj_arg(op: PrimOp, e: &Expr) -> Result<&[(Rc<str>, Term)], PrimError> {
    match e {
        Expr::Object(fields) => Ok(fields),
        _ => fail(op, "expects an object"),
    }
}

/// Keys visible to enumeration: everything but the prototype link and
/// implementation-internal fields.
pub fn is_enumerable_key(k: &str) -> bool {
    k != "__proto__" && !k.starts_with(crate::syntax::RESERVED_PREFIX)
}

fn enumerable_keys(fields: &[(Rc<str>, Term)]) -> impl Iterator<Item = &str> {
    fields.iter().map(|(k, _)| &**k).filter(|k| is_enumerable_key(k))
}

fn compare(op: PrimOp, a: &Expr, b: &Expr) -> Result<Const, PrimError> {
    let ord = match (a, b) {
        (Expr::Const(Const::Num(x)), Expr::Const(Const::Num(y))) => x.partial_cmp(y),
        (Expr::Const(Const::Str(x)), Expr::Const(Const::Str(y))) => {
            Some(x.encode_utf16().cmp(y.encode_utf16()))
        }
        _ => return fail(op, "expects two numbers or two strings"),
    };
    let result = match ord {
        None => false,
        Some(o) => match op {
            PrimOp::Lt => o == Ordering::Less,
            PrimOp::Le => o != Ordering::Greater,
            PrimOp::Gt => o == Ordering::Greater,
            _ => o != Ordering::Less,
        },
    };
    Ok(Const::Bool(result))
}

/// Physical equality on values: IEEE equality for numbers, identity for
/// locations, and `false` for functions and object literals (which have no
/// identity of their own).
pub fn stx_eq(a: &Expr, b: &Expr) -> bool {
    match (a, b) {
        (Expr::Const(Const::Num(x)), Expr::Const(Const::Num(y))) => x == y,
        (Expr::Const(x), Expr::Const(y)) => x == y,
        (Expr::Loc(x), Expr::Loc(y)) => x == y,
        _ => false,
    }
}

pub fn to_boolean(e: &Expr) -> bool {
    match e {
        Expr::Const(Const::Num(n)) => !(n.is_nan() || *n == 0.0),
        Expr::Const(Const::Str(s)) => !s.is_empty(),
        Expr::Const(Const::Bool(b)) => *b,
        Expr::Const(Const::Undefined) | Expr::Const(Const::Null) => false,
        _ => true,
    }
}

pub fn type_of(e: &Expr) -> &'static str {
    match e {
        Expr::Const(Const::Num(_)) => "number",
        Expr::Const(Const::Str(_)) => "string",
        Expr::Const(Const::Bool(_)) => "boolean",
        Expr::Const(Const::Undefined) => "undefined",
        Expr::Const(Const::Null) => "object",
        Expr::Func(..) => "function",
        _ => "object",
    }
}

pub fn const_to_number(c: &Const) -> f64 {
    match c {
        Const::Num(n) => *n,
        Const::Str(s) => string_to_number(s),
        Const::Bool(b) => f64::from(u8::from(*b)),
        Const::Undefined => f64::NAN,
        Const::Null => 0.0,
    }
}

pub fn const_to_string(c: &Const) -> String {
    match c {
        Const::Num(n) => number_to_string(*n),
        Const::Str(s) => s.to_string(),
        Const::Bool(b) => b.to_string(),
        Const::Undefined => "undefined".into(),
        Const::Null => "null".into(),
    }
}

/// JavaScript's Number::toString for radix 10: shortest round-trip digits,
/// fixed notation for exponents in [-7, 21), exponential otherwise.
pub fn number_to_string(n: f64) -> String {
    if n.is_nan() {
        return "NaN".into();
    }
    if n == 0.0 {
        return "0".into();
    }
    if n.is_infinite() {
        return if n > 0.0 { "Infinity".into() } else { "-Infinity".into() };
    }
    if n < 0.0 {
        return format!("-{}", number_to_string(-n));
    }
    let sci = format!("{n:e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let k = digits.len() as i32;
    let point = exp.parse::<i32>().expect("exponent") + 1;
    if k <= point && point <= 21 {
        format!("{digits}{}", "0".repeat((point - k) as usize))
    } else if 0 < point && point <= 21 {
        let (int, frac) = digits.split_at(point as usize);
        format!("{int}.{frac}")
    } else if -6 < point && point <= 0 {
        format!("0.{}{digits}", "0".repeat((-point) as usize))
    } else {
        let e = point - 1;
        let sign = if e < 0 { '-' } else { '+' };
        let (first, rest) = digits.split_at(1);
        if rest.is_empty() {
            format!("{first}e{sign}{}", e.abs())
        } else {
            format!("{first}.{rest}e{sign}{}", e.abs())
        }
    }
}

fn is_js_whitespace(c: char) -> bool {
    c.is_whitespace() || c == '\u{feff}'
}

/// JavaScript's ToNumber applied to a string.
pub fn string_to_number(s: &str) -> f64 {
    let t = s.trim_matches(is_js_whitespace);
    if t.is_empty() {
        return 0.0;
    }
    match t {
        "Infinity" | "+Infinity" => return f64::INFINITY,
        "-Infinity" => return f64::NEG_INFINITY,
        _ => {}
    }
    if let Some(hex) = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        if hex.is_empty() || !hex.chars().all(|c| c.is_ascii_hexdigit()) {
            return f64::NAN;
        }
        return hex
            .chars()
            .fold(0.0, |acc, c| acc * 16.0 + f64::from(c.to_digit(16).unwrap_or(0)));
    }
    if is_decimal_literal(t) {
        t.parse::<f64>().unwrap_or(f64::NAN)
    } else {
        f64::NAN
    }
}

fn is_decimal_literal(t: &str) -> bool {
    let b = t.as_bytes();
    let mut i = 0;
    if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
        i += 1;
    }
    let int_start = i;
    while i < b.len() && b[i].is_ascii_digit() {
        i += 1;
    }
    let mut digits = i - int_start;
    if i < b.len() && b[i] == b'.' {
        i += 1;
        let frac_start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        digits += i - frac_start;
    }
    if digits == 0 {
        return false;
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        i += 1;
        if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
            i += 1;
        }
        let exp_start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        if i == exp_start {
            return false;
        }
    }
    i == b.len()
}
