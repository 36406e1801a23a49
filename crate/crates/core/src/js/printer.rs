//! Pretty-printer for the JavaScript AST. Output reparses to an equal tree
//! for trees the parser can produce.

use super::ast::*;
use crate::delta::number_to_string;

pub fn print_program(p: &Program) -> String {
    let mut out = String::new();
    for s in &p.body {
        stmt(&mut out, s, 0);
    }
    out
}

pub fn print_stmt(s: &Stmt) -> String {
    let mut out = String::new();
    stmt(&mut out, s, 0);
    out
}

pub fn print_expression(e: &Expr) -> String {
    expr(e, 0)
}

const SEQ: u8 = 0;
const ASSIGN: u8 = 1;
const COND: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 9;
const POSTFIX: u8 = 10;
const CALL: u8 = 11;
const PRIMARY: u8 = 12;

fn precedence(e: &Expr) -> u8 {
    match &e.kind {
        ExprKind::Sequence { .. } => SEQ,
        ExprKind::Assign { .. } => ASSIGN,
        ExprKind::Cond { .. } => COND,
        ExprKind::Logical { op: LogicalOp::Or, .. } => OR,
        ExprKind::Logical { op: LogicalOp::And, .. } => AND,
        ExprKind::Binary { op, .. } => op.precedence(),
        ExprKind::Unary { .. } | ExprKind::Update { prefix: true, .. } => UNARY,
        ExprKind::Num { value } if value.is_sign_negative() => UNARY,
        ExprKind::Update { .. } => POSTFIX,
        ExprKind::Member { .. } | ExprKind::Index { .. } | ExprKind::Call { .. } | ExprKind::New { .. } => CALL,
        _ => PRIMARY,
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '$'
}

fn is_identifier_name(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(|c| c.is_alphabetic() || c == '_' || c == '$') && cs.all(is_ident_char)
}

pub fn quote(s: &str) -> String {
    serde_json::to_string(s).expect("string serialisation cannot fail")
}

fn number(v: f64) -> String {
    if v.is_sign_negative() && !v.is_nan() {
        format!("-{}", number(-v))
    } else {
        number_to_string(v)
    }
}

fn list(items: &[Expr]) -> String {
    items.iter().map(|a| expr(a, ASSIGN)).collect::<Vec<_>>().join(", ")
}

/// `new` callees may not contain a call outside parentheses.
fn new_callee_ok(e: &Expr) -> bool {
    match &e.kind {
        ExprKind::Member { object, .. } | ExprKind::Index { object, .. } => new_callee_ok(object),
        ExprKind::Call { .. } => false,
        ExprKind::New { .. } => true,
        _ => precedence(e) >= CALL,
    }
}

fn expr(e: &Expr, min: u8) -> String {
    let text = match &e.kind {
        ExprKind::Num { value } => number(*value),
        ExprKind::Str { value } => quote(value),
        ExprKind::Bool { value } => value.to_string(),
        ExprKind::Null => "null".into(),
        ExprKind::Ident { name } => name.clone(),
        ExprKind::This => "this".into(),
        ExprKind::Object { props } if props.is_empty() => "{}".into(),
        ExprKind::Object { props } => {
            let fields: Vec<String> = props
                .iter()
                .map(|p| {
                    let key = if is_identifier_name(&p.key) { p.key.clone() } else { quote(&p.key) };
                    format!("{key}: {}", expr(&p.value, ASSIGN))
                })
                .collect();
            format!("{{ {} }}", fields.join(", "))
        }
        ExprKind::Array { elements } => format!("[{}]", list(elements)),
        ExprKind::Function { func } => function(func, 0),
        ExprKind::Member { object, property } => {
            let obj = match object.kind {
                ExprKind::Num { .. } => format!("({})", expr(object, 0)),
                _ => expr(object, CALL),
            };
            format!("{obj}.{property}")
        }
        ExprKind::Index { object, index } => format!("{}[{}]", expr(object, CALL), expr(index, SEQ)),
        ExprKind::Call { callee, args } => format!("{}({})", expr(callee, CALL), list(args)),
        ExprKind::New { callee, args } => {
            let c = if new_callee_ok(callee) { expr(callee, CALL) } else { format!("({})", expr(callee, 0)) };
            format!("new {c}({})", list(args))
        }
        ExprKind::Assign { op, target, value } => {
            let sym = op.map_or("", |o| o.symbol());
            format!("{} {sym}= {}", expr(target, CALL), expr(value, ASSIGN))
        }
        ExprKind::Binary { op, left, right } => {
            let p = op.precedence();
            format!("{} {} {}", expr(left, p), op.symbol(), expr(right, p + 1))
        }
        ExprKind::Logical { op, left, right } => {
            let (p, sym) = match op {
                LogicalOp::Or => (OR, "||"),
                LogicalOp::And => (AND, "&&"),
            };
            format!("{} {sym} {}", expr(left, p), expr(right, p + 1))
        }
        ExprKind::Unary { op, arg } => {
            let a = expr(arg, UNARY);
            match op {
                UnaryOp::Typeof => format!("typeof {a}"),
                UnaryOp::Delete => format!("delete {a}"),
                UnaryOp::Not => format!("!{a}"),
                // Keep `- -x` and `- --x` from fusing into `--`.
                UnaryOp::Neg if a.starts_with('-') => format!("- {a}"),
                UnaryOp::Neg => format!("-{a}"),
            }
        }
        ExprKind::Update { op, prefix, target } => {
            let sym = match op {
                UpdateOp::Inc => "++",
                UpdateOp::Dec => "--",
            };
            let t = expr(target, CALL);
            if *prefix {
                format!("{sym}{t}")
            } else {
                format!("{t}{sym}")
            }
        }
        ExprKind::Cond { test, consequent, alternate } => format!(
            "{} ? {} : {}",
            expr(test, OR),
            expr(consequent, ASSIGN),
            expr(alternate, ASSIGN)
        ),
        ExprKind::Sequence { exprs } => exprs.iter().map(|x| expr(x, ASSIGN)).collect::<Vec<_>>().join(", "),
    };
    if precedence(e) < min {
        format!("({text})")
    } else {
        text
    }
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

fn function(f: &Function, depth: usize) -> String {
    let mut out = String::from("function");
    if let Some(n) = &f.name {
        out.push(' ');
        out.push_str(n);
    }
    out.push_str(&format!("({}) ", f.params.join(", ")));
    block(&mut out, &f.body, depth);
    out
}

fn block(out: &mut String, body: &[Stmt], depth: usize) {
    if body.is_empty() {
        out.push_str("{}");
        return;
    }
    out.push_str("{\n");
    for s in body {
        stmt(out, s, depth + 1);
    }
    indent(out, depth);
    out.push('}');
}

fn starts_with_word(text: &str, word: &str) -> bool {
    text.strip_prefix(word).is_some_and(|rest| !rest.starts_with(is_ident_char))
}

fn contains_in(e: &Expr) -> bool {
    matches!(e.kind, ExprKind::Binary { op: BinOp::In, .. }) || expr_children(e).into_iter().any(contains_in)
}

fn for_init_expr(e: &Expr) -> String {
    if contains_in(e) {
        format!("({})", expr(e, 0))
    } else {
        expr(e, 0)
    }
}

fn decls(ds: &[VarDecl], in_for: bool) -> String {
    let parts: Vec<String> = ds
        .iter()
        .map(|d| match &d.init {
            Some(i) if in_for && contains_in(i) => format!("{} = ({})", d.name, expr(i, 0)),
            Some(i) => format!("{} = {}", d.name, expr(i, ASSIGN)),
            None => d.name.clone(),
        })
        .collect();
    format!("var {}", parts.join(", "))
}

/// A nested statement body: blocks stay on the header line.
fn body(out: &mut String, s: &Stmt, depth: usize) {
    if let StmtKind::Block { body: b } = &s.kind {
        out.push(' ');
        block(out, b, depth);
        out.push('\n');
    } else {
        out.push('\n');
        stmt(out, s, depth + 1);
    }
}

fn stmt(out: &mut String, s: &Stmt, depth: usize) {
    indent(out, depth);
    match &s.kind {
        StmtKind::Var { decls: ds } => out.push_str(&format!("{};\n", decls(ds, false))),
        StmtKind::Expr { expr: e } => {
            let text = expr(e, 0);
            if text.starts_with('{') || starts_with_word(&text, "function") {
                out.push_str(&format!("({text});\n"));
            } else {
                out.push_str(&format!("{text};\n"));
            }
        }
        StmtKind::If { test, consequent, alternate } => {
            out.push_str(&format!("if ({})", expr(test, 0)));
            body(out, consequent, depth);
            if let Some(alt) = alternate {
                indent(out, depth);
                out.push_str("else");
                body(out, alt, depth);
            }
        }
        StmtKind::While { test, body: b } => {
            out.push_str(&format!("while ({})", expr(test, 0)));
            body(out, b, depth);
        }
        StmtKind::DoWhile { body: b, test } => {
            out.push_str("do");
            body(out, b, depth);
            indent(out, depth);
            out.push_str(&format!("while ({});\n", expr(test, 0)));
        }
        StmtKind::For { init, test, update, body: b } => {
            let init = match init {
                Some(ForInit::Var { decls: ds }) => decls(ds, true),
                Some(ForInit::Expr { expr: e }) => for_init_expr(e),
                None => String::new(),
            };
            let test = test.as_ref().map(|t| format!(" {}", expr(t, 0))).unwrap_or_default();
            let update = update.as_ref().map(|u| format!(" {}", expr(u, 0))).unwrap_or_default();
            out.push_str(&format!("for ({init};{test};{update})"));
            body(out, b, depth);
        }
        StmtKind::ForIn { declared, name, object, body: b } => {
            let var = if *declared { "var " } else { "" };
            out.push_str(&format!("for ({var}{name} in {})", expr(object, 0)));
            body(out, b, depth);
        }
        StmtKind::Return { value: None } => out.push_str("return;\n"),
        StmtKind::Return { value: Some(v) } => out.push_str(&format!("return {};\n", expr(v, 0))),
        StmtKind::Break { label } => match label {
            Some(l) => out.push_str(&format!("break {l};\n")),
            None => out.push_str("break;\n"),
        },
        StmtKind::Continue { label } => match label {
            Some(l) => out.push_str(&format!("continue {l};\n")),
            None => out.push_str("continue;\n"),
        },
        StmtKind::Labeled { label, body: b } => {
            out.push_str(&format!("{label}:"));
            body(out, b, depth);
        }
        StmtKind::Try { block: b, handler, finalizer } => {
            out.push_str("try ");
            block(out, b, depth);
            if let Some(h) = handler {
                out.push_str(&format!(" catch ({}) ", h.param));
                block(out, &h.body, depth);
            }
            if let Some(f) = finalizer {
                out.push_str(" finally ");
                block(out, f, depth);
            }
            out.push('\n');
        }
        StmtKind::Throw { value } => out.push_str(&format!("throw {};\n", expr(value, 0))),
        StmtKind::Switch { discriminant, cases } => {
            out.push_str(&format!("switch ({}) {{\n", expr(discriminant, 0)));
            for c in cases {
                indent(out, depth + 1);
                match &c.test {
                    Some(t) => out.push_str(&format!("case {}:\n", expr(t, 0))),
                    None => out.push_str("default:\n"),
                }
                for s in &c.body {
                    stmt(out, s, depth + 2);
                }
            }
            indent(out, depth);
            out.push_str("}\n");
        }
        StmtKind::With { object, body: b } => {
            out.push_str(&format!("with ({})", expr(object, 0)));
            body(out, b, depth);
        }
        StmtKind::Block { body: b } => {
            block(out, b, depth);
            out.push('\n');
        }
        StmtKind::Function { func } => {
            out.push_str(&function(func, depth));
            out.push('\n');
        }
        StmtKind::Empty => out.push_str(";\n"),
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn round_trip(src: &str) {
        let p = parse(src).unwrap_or_else(|e| panic!("{src}: {e}"));
        let printed = print_program(&p);
        let q = parse(&printed).unwrap_or_else(|e| panic!("{printed}: {e}"));
        assert_eq!(p, q, "{printed}");
    }

    #[test]
    fn reparses_to_same_tree() {
        for src in [
            "a = (b, c);",
            "(a + b) * c - d / (e % f);",
            "a - (b - c);",
            "x = a ? b : c ? d : e;",
            "(a ? b : c) ? d : e;",
            "(a || b) && c;",
            "- -x; - --x; !(a < b);",
            "new (f())(); new a.b.C(1)(2); (new F()).x;",
            "(function () { return 1 })();",
            "({ a: 1, 'b c': [1, 2] });",
            "for (var i = (\"a\" in o); (i in o);) ;",
            "for ((x in o);;) break;",
            "(1).toString(); a[b][c](d).e++;",
            "l: while (1) { if (a) { continue l } else { break } }",
            "try { throw 'x' } catch (e) { e } finally { f() }",
            "switch (x) { case 1: y; default: z }",
            "do { x++ } while (x < 3)",
            "with (o) { x = 1 }",
            "for (var k in o) { delete o[k] }",
            "typeof x === 'string' && x !== \"\\n\";",
            "a += b -= 2;",
        ] {
            round_trip(src);
        }
    }

    #[test]
    fn statement_position_function_is_wrapped() {
        let p = parse("(function () {}).call(x);").unwrap();
        assert!(print_program(&p).starts_with("(function"));
    }
}
