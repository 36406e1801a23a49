//! The global environment desugared programs run in: the global object at
//! location 0, the built-in constructors and the conversion helpers.

use crate::syntax::{parse_expr, plug_hole, Term};

/// Where the program goes.
pub const HOLE: &str = "%program";

const PREAMBLE: &str = r#"
let (%window = ref {})
let (%ObjectProto = ref { "__proto__": null })
let (%TypeError = func(message) { throw ref { "type": "TypeError", "message": message } })

// Calls the first method that yields a primitive. The second method is
// looked up only if needed; every field name is a literal.
let (%ToPrimitiveWith = func(v, a, second) {
  let (r = if (@is-location(a)) { (deref a)["code"](v) } else { v })
  if (@is-location(r)) {
    let (b = second())
    let (s = if (@is-location(b)) { (deref b)["code"](v) } else { v })
    if (@is-location(s)) { %TypeError("cannot convert object to primitive value") } else { s }
  } else { r }
})
let (%ToPrimitive = func(v) {
  if (@is-location(v)) {
    %ToPrimitiveWith(v, (deref v)["valueOf"], func() { (deref v)["toString"] })
  } else { v }
})
let (%ToPrimitiveString = func(v) {
  if (@is-location(v)) {
    %ToPrimitiveWith(v, (deref v)["toString"], func() { (deref v)["valueOf"] })
  } else { v }
})
let (%ToNumber = func(v) { @to-number(%ToPrimitive(v)) })
let (%ToDisplay = func(v) {
  if (@is-location(v)) {
    if (@has-own-field(deref v, "code")) { "function" } else { @to-string(%ToPrimitiveString(v)) }
  } else { v }
})
let (%PrimLooseEq = func(a, b) {
  if (@stx-eq(@typeof(a), @typeof(b))) { @stx-eq(a, b) } else {
  if (@stx-eq(a, null)) { @stx-eq(b, undefined) } else {
  if (@stx-eq(a, undefined)) { @stx-eq(b, null) } else {
  if (@stx-eq(b, null)) { false } else {
  if (@stx-eq(b, undefined)) { false } else {
    @stx-eq(@to-number(a), @to-number(b)) } } } } }
})
let (%LooseEq = func(a, b) {
  if (@is-location(a)) {
    if (@is-location(b)) { @stx-eq(a, b) } else {
    if (@stx-eq(b, null)) { false } else {
    if (@stx-eq(b, undefined)) { false } else { %PrimLooseEq(%ToPrimitive(a), b) } } }
  } else {
    if (@is-location(b)) {
      if (@stx-eq(a, null)) { false } else {
      if (@stx-eq(a, undefined)) { false } else { %PrimLooseEq(a, %ToPrimitive(b)) } }
    } else { %PrimLooseEq(a, b) }
  }
})
let (%HasProperty = func(o, k) {
  if (@is-location(o)) {
    let (cur = ref o)
    found: {
      while (@is-location(deref cur)) {
        if (@has-own-field(deref (deref cur), k)) { break found true }
        else { cur = (deref (deref cur))["__proto__"] }
      };
      false
    }
  } else { %TypeError("cannot use 'in' on a non-object") }
})

%ObjectProto = {
  "toString": ref { "code": func(this) { "[object Object]" } },
  "valueOf": ref { "code": func(this) { this } },
  "hasOwnProperty": ref { "code": func(this, k) {
    @has-own-field(deref this, @to-string(%ToPrimitiveString(k))) } },
  "__proto__": null
};
let (%Object = ref {
  "code": func(this, v) { this },
  "prototype": %ObjectProto
})

let (%NumberProto = ref {
  "valueOf": ref { "code": func(this) { (deref this)["%primitive"] } },
  "toString": ref { "code": func(this) { @to-string((deref this)["%primitive"]) } },
  "%primitive": 0,
  "__proto__": %ObjectProto
})
let (%Number = ref {
  "code": func(this, v) {
    if (@stx-eq(this, %window)) { %ToNumber(v) }
    else { this = (deref this)["%primitive"] = %ToNumber(v); undefined }
  },
  "prototype": %NumberProto
})

let (%ArrayProto = ref {
  "push": ref { "code": func(this, v) {
    let (n = (deref this)["length"])
    this = (deref this)[@to-string(n)] = v;
    this = (deref this)["length"] = @prim-add(n, 1);
    @prim-add(n, 1) } },
  "join": ref { "code": func(this, sep) {
    let (s = if (@stx-eq(sep, undefined)) { "," } else { @to-string(%ToPrimitiveString(sep)) })
    let (n = (deref this)["length"])
    let (i = ref 0)
    let (out = ref "")
    while (@prim-lt(deref i, n)) {
      if (@prim-gt(deref i, 0)) { out = @string-concat(deref out, s) } else { undefined };
      let (k = @to-string(deref i))
      let (v = if (@stx-eq(k, "XMLHttpRequest")) { undefined } else { (deref this)[k] })
      out = @string-concat(deref out,
        if (@stx-eq(v, undefined)) { "" } else {
        if (@stx-eq(v, null)) { "" } else { @to-string(%ToPrimitiveString(v)) } });
      i = @prim-add(deref i, 1)
    };
    deref out } },
  "toString": ref { "code": func(this) { (deref (deref this)["join"])["code"](this, ",") } },
  "__proto__": %ObjectProto
})
let (%Array = ref {
  "code": func(this) { this = (deref this)["length"] = 0; undefined },
  "prototype": %ArrayProto
})

let (%emit = func(this, %print) { undefined })

%window = {
  "window": %window,
  "Object": %Object,
  "Number": %Number,
  "Array": %Array,
  "String": ref { "code": func(this, v) { @to-string(%ToPrimitiveString(v)) } },
  "Math": ref {
    "floor": ref { "code": func(this, x) { @math-floor(%ToNumber(x)) } },
    "__proto__": %ObjectProto
  },
  "print": ref { "code": func(this, v) { %emit(this, %ToDisplay(v)) } },
  "isNaN": ref { "code": func(this, v) { @is-nan(%ToNumber(v)) } },
  "XMLHttpRequest": ref {
    "code": func(this) { this = (deref this)["readyState"] = 0; undefined },
    "prototype": ref { "__proto__": %ObjectProto }
  },
  "NaN": NaN,
  "Infinity": Infinity,
  "undefined": undefined,
  "__proto__": %ObjectProto
};
let (this = %window)
%program
"#;

thread_local! {
    static CONTEXT: Term = parse_expr(PREAMBLE).expect("the preamble parses");
}

/// The preamble as a one-hole context.
pub fn preamble() -> Term {
    CONTEXT.with(Term::clone)
}

/// The preamble's source text.
pub fn preamble_source() -> &'static str {
    PREAMBLE
}

/// Plugs a desugared program into the preamble. Free identifiers of
/// `program` that the preamble binds are captured on purpose.
pub fn wrap(program: &Term) -> Term {
    plug_hole(&preamble(), HOLE, program)
}
