//! Canonical concrete syntax for core terms. `reader` parses exactly what
//! this module prints.

use super::{Configuration, Const, Expr};
use crate::delta::number_to_string;

const KEYWORDS: &[&str] = &[
    "let", "func", "if", "else", "while", "try", "catch", "finally", "throw", "err", "ref",
    "deref", "delete", "break", "true", "false", "undefined", "null", "NaN", "Infinity",
];

pub(crate) fn is_plain_ident(s: &str) -> bool {
    let mut chars = s.chars();
    let ok_start = |c: char| c.is_ascii_alphabetic() || c == '_' || c == '$' || c == '%';
    match chars.next() {
        Some(c) if ok_start(c) => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '$' || c == '%') && !KEYWORDS.contains(&s)
}

pub(crate) fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

fn ident(s: &str) -> String {
    if is_plain_ident(s) {
        s.to_string()
    } else {
        format!("`{}`", s.replace('\\', "\\\\").replace('`', "\\`"))
    }
}

pub(crate) fn quote(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

pub fn print_const(c: &Const) -> String {
    match c {
        Const::Num(n) if *n == 0.0 && n.is_sign_negative() => "-0".into(),
        Const::Num(n) => number_to_string(*n),
        Const::Str(s) => quote(s),
        Const::Bool(b) => b.to_string(),
        Const::Undefined => "undefined".into(),
        Const::Null => "null".into(),
    }
}

/// Pretty prints an expression.
pub fn print_expr(e: &Expr) -> String {
    let mut p = Printer { out: String::new(), indent: 0 };
    p.expr(e, 0);
    p.out
}

/// Prints the store (one cell per line) followed by the expression.
pub fn print_config(c: &Configuration) -> String {
    let mut out = String::new();
    for (l, v) in c.store.iter() {
        out.push_str(&format!("{l} = {}\n", print_expr(v)));
    }
    out.push_str("|- ");
    out.push_str(&print_expr(&c.expr));
    out
}

struct Printer {
    out: String,
    indent: usize,
}

// Precedence levels: 0 sequence and let, 1 assignment, 2 prefix operators,
// 3 postfix (field access and application), 4 atoms.
fn level(e: &Expr) -> u8 {
    match e {
        Expr::Seq(..) | Expr::Let(..) => 0,
        Expr::SetRef(..) | Expr::UpdateField(..) => 1,
        Expr::Ref(_)
        | Expr::Deref(_)
        | Expr::Throw(_)
        | Expr::Err(_)
        | Expr::DeleteField(..)
        | Expr::Break(..) => 2,
        Expr::GetField(..) | Expr::App(..) => 3,
        _ => 4,
    }
}

impl Printer {
    fn push(&mut self, s: &str) {
        self.out.push_str(s);
    }

    fn newline(&mut self) {
        self.out.push('\n');
        for _ in 0..self.indent {
            self.out.push_str("  ");
        }
    }

    fn block(&mut self, e: &Expr) {
        self.push("{");
        self.indent += 1;
        self.newline();
        self.expr(e, 0);
        self.indent -= 1;
        self.newline();
        self.push("}");
    }

    fn list(&mut self, items: &[super::Term]) {
        for (i, a) in items.iter().enumerate() {
            if i > 0 {
                self.push(", ");
            }
            self.expr(a, 1);
        }
    }

    fn expr(&mut self, e: &Expr, min: u8) {
        if level(e) < min {
            self.push("(");
            self.expr(e, 0);
            self.push(")");
            return;
        }
        match e {
            Expr::Id(x) => self.push(&ident(x)),
            Expr::Const(c) => self.push(&print_const(c)),
            Expr::Loc(l) => self.push(&l.to_string()),
            Expr::Func(params, body) => {
                let ps: Vec<String> = params.iter().map(|p| ident(p)).collect();
                self.push(&format!("func({}) ", ps.join(", ")));
                self.block(body);
            }
            Expr::Object(fields) => {
                if fields.is_empty() {
                    self.push("{}");
                    return;
                }
                self.push("{ ");
                for (i, (k, v)) in fields.iter().enumerate() {
                    if i > 0 {
                        self.push(", ");
                    }
                    self.push(&quote(k));
                    self.push(": ");
                    self.expr(v, 1);
                }
                self.push(" }");
            }
            Expr::Let(x, rhs, body) => {
                self.push(&format!("let ({} = ", ident(x)));
                self.expr(rhs, 0);
                self.push(")");
                self.newline();
                self.expr(body, 0);
            }
            Expr::Seq(a, b) => {
                self.expr(a, 1);
                self.push(";");
                self.newline();
                self.expr(b, 0);
            }
            Expr::SetRef(l, v) => {
                // A bare field access on the left would read back as a field update.
                let min = if matches!(**l, Expr::GetField(..)) { 4 } else { 3 };
                self.expr(l, min);
                self.push(" = ");
                self.expr(v, 1);
            }
            Expr::UpdateField(o, f, v) => {
                self.expr(o, 3);
                self.push("[");
                self.expr(f, 0);
                self.push("] = ");
                self.expr(v, 1);
            }
            Expr::Ref(x) => {
                self.push("ref ");
                self.expr(x, 2);
            }
            Expr::Deref(x) => {
                self.push("deref ");
                self.expr(x, 2);
            }
            Expr::Throw(x) => {
                self.push("throw ");
                self.expr(x, 2);
            }
            Expr::Err(x) => {
                self.push("err ");
                self.expr(x, 2);
            }
            Expr::DeleteField(o, f) => {
                self.push("delete ");
                self.expr(o, 3);
                self.push("[");
                self.expr(f, 0);
                self.push("]");
            }
            Expr::Break(l, x) => {
                self.push(&format!("break {} ", ident(l.as_str())));
                self.expr(x, 2);
            }
            Expr::GetField(o, f) => {
                self.expr(o, 3);
                self.push("[");
                self.expr(f, 0);
                self.push("]");
            }
            Expr::App(f, args) => {
                self.expr(f, 3);
                self.push("(");
                self.list(args);
                self.push(")");
            }
            Expr::Prim(op, args) => {
                self.push(&format!("@{}(", op.name()));
                self.list(args);
                self.push(")");
            }
            Expr::If(c, t, f) => {
                self.push("if (");
                self.expr(c, 0);
                self.push(") ");
                self.block(t);
                self.push(" else ");
                self.block(f);
            }
            Expr::While(c, b) => {
                self.push("while (");
                self.expr(c, 0);
                self.push(") ");
                self.block(b);
            }
            Expr::Label(l, b) => {
                self.push(&format!("{}: ", ident(l.as_str())));
                self.block(b);
            }
            Expr::TryCatch(b, x, h) => {
                self.push("try ");
                self.block(b);
                self.push(&format!(" catch ({}) ", ident(x)));
                self.block(h);
            }
            Expr::TryFinally(b, f) => {
                self.push("try ");
                self.block(b);
                self.push(" finally ");
                self.block(f);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::build::*;

    #[test]
    fn prints_field_access_and_assignment() {
        let e = set(get(deref(id("o")), str("x")), num(1.0));
        assert_eq!(print_expr(&e), "((deref o)[\"x\"]) = 1");
        let u = update(deref(id("o")), str("x"), num(1.0));
        assert_eq!(print_expr(&u), "(deref o)[\"x\"] = 1");
    }

    #[test]
    fn prints_blocks_with_indentation() {
        let e = if_(boolean(true), seq(num(1.0), num(2.0)), undefined());
        assert_eq!(print_expr(&e), "if (true) {\n  1;\n  2\n} else {\n  undefined\n}");
    }

    #[test]
    fn quotes_unusual_identifiers() {
        assert_eq!(print_expr(&id("if")), "`if`");
        assert_eq!(print_expr(&id("%ret")), "%ret");
        assert_eq!(print_expr(&num(-0.0)), "-0");
    }
}
