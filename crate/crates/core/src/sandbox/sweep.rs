//! The per-form check: each surface form, with placeholder children
//! standing for arbitrary safe code, is desugared and type-checked. A form
//! that passes may be combined freely with other passing forms.

use super::typecheck::{typecheck, RuleSet, TypeEnv};
use crate::desugar::{desugar_program, Options};
use crate::js::parse;
use crate::syntax::free_variables;

/// Placeholder names standing for already-desugared safe subterms.
pub const PLACEHOLDERS: &[&str] = &["x", "y", "z", "w"];

/// Every surface form (computed-member compositions other than the
/// inc/dec family excepted), and whether it is expected to type.
pub const FORMS: &[(&str, bool)] = &[
    ("1;", true),
    ("\"s\";", true),
    ("true;", true),
    ("null;", true),
    ("undefined;", true),
    ("this;", true),
    ("x;", true),
    ("({a: x, b: y});", true),
    ("[x, y];", true),
    ("(function (a) { return x });", true),
    ("(function f(a) { return a });", true),
    ("x.f;", true),
    ("x[y];", false),
    ("x.XMLHttpRequest;", false),
    ("x(y);", true),
    ("x.f(y);", true),
    ("new x(y);", true),
    ("x = y;", true),
    ("x.f = y;", true),
    ("x[y] = z;", true),
    ("x += y;", true),
    ("x -= y;", true),
    ("x *= y;", true),
    ("x /= y;", true),
    ("x %= y;", true),
    ("x.f += y;", true),
    ("x.f -= y;", true),
    ("x + y;", true),
    ("x - y;", true),
    ("x * y;", true),
    ("x / y;", true),
    ("x % y;", true),
    ("x < y;", true),
    ("x <= y;", true),
    ("x > y;", true),
    ("x >= y;", true),
    ("x == y;", true),
    ("x != y;", true),
    ("x === y;", true),
    ("x !== y;", true),
    ("x instanceof y;", true),
    ("x in y;", true),
    ("x && y;", true),
    ("x || y;", true),
    ("!x;", true),
    ("-x;", true),
    ("typeof x;", true),
    ("delete x;", true),
    ("delete x.f;", true),
    ("delete x[y];", true),
    ("x++;", true),
    ("x--;", true),
    ("++x;", true),
    ("--x;", true),
    ("x.f++;", true),
    ("x.f--;", true),
    ("++x.f;", true),
    ("--x.f;", true),
    ("x[y]++;", false),
    ("x[y]--;", false),
    ("++x[y];", false),
    ("--x[y];", false),
    ("x ? y : z;", true),
    ("x, y;", true),
    ("var v = x;", true),
    ("var v;", true),
    ("function g(a) { x }", true),
    ("(function () { return });", true),
    ("if (x) y;", true),
    ("if (x) y; else z;", true),
    ("while (x) y;", true),
    ("do y; while (x);", true),
    ("for (x; y; z) w;", true),
    ("for (var i = x; y; z) w;", true),
    ("for (k in x) y;", true),
    ("for (var k in x) y;", true),
    ("while (x) { break }", true),
    ("while (x) { continue }", true),
    ("l: while (x) { break l }", true),
    ("l: while (x) { while (y) { continue l } }", true),
    ("l: { x; break l }", true),
    ("switch (x) { case y: z; break; default: w }", true),
    ("try { x } catch (e) { y }", true),
    ("try { x } finally { y }", true),
    ("try { x } catch (e) { y } finally { z }", true),
    ("throw x;", true),
    ("{ x; y }", true),
    (";", true),
];

#[derive(Clone, Debug)]
pub struct FormResult {
    pub form: &'static str,
    pub passed: bool,
    pub expected: bool,
}

impl FormResult {
    pub fn as_expected(&self) -> bool {
        self.passed == self.expected
    }
}

/// Desugars each form without the preamble and type-checks it with the
/// placeholders and the preamble's names at `JS`.
pub fn per_form_context_check() -> Vec<FormResult> {
    let options = Options::with_placeholders(PLACEHOLDERS.iter().copied());
    FORMS
        .iter()
        .map(|&(form, expected)| {
            let program = parse(form).unwrap_or_else(|e| panic!("form {form}: {e}"));
            let d = desugar_program(&program, &options);
            let env = TypeEnv::all_js(free_variables(&d.term).iter());
            let passed = typecheck(&env, &d.term, RuleSet::Extended).is_ok();
            FormResult { form, passed, expected }
        })
        .collect()
}
