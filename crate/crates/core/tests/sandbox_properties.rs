mod common;

use rand::seq::SliceRandom;
use rand::Rng;

use common::criteria::{safety_scan, sandbox_results};
use lambdajs::desugar::{desugar_program, Options};
use lambdajs::js::ast::{map_expr_children, map_stmt_children, UnaryOp};
use lambdajs::js::{self, Expr, ExprKind, Program, StmtKind};
use lambdajs::sandbox::{typecheck, RuleSet, TypeEnv, FORMS, PLACEHOLDERS};
use lambdajs::syntax::free_variables;

/// Replaces placeholder identifiers in expression position.
fn plug(e: &Expr, fill: &mut dyn FnMut() -> Expr) -> Expr {
    match &e.kind {
        ExprKind::Ident { name } if PLACEHOLDERS.contains(&name.as_str()) => fill(),
        ExprKind::Assign { op, target, value } => {
            let target = match target.kind {
                ExprKind::Ident { .. } => target.clone(),
                _ => Box::new(plug(target, fill)),
            };
            Expr::new(ExprKind::Assign { op: *op, target, value: Box::new(plug(value, fill)) }, e.span)
        }
        ExprKind::Update { target, .. } | ExprKind::Unary { op: UnaryOp::Delete, arg: target }
            if matches!(target.kind, ExprKind::Ident { .. }) =>
        {
            e.clone()
        }
        _ => map_expr_children(e, &mut |c| plug(c, fill)),
    }
}

/// The expression of a single-expression-statement form.
fn form_expr(form: &str) -> Option<Expr> {
    let p = js::parse(form).ok()?;
    match &p.body[..] {
        [s] => match &s.kind {
            StmtKind::Expr { expr } => Some(expr.clone()),
            _ => None,
        },
        _ => None,
    }
}

fn certified(program: &Program) -> bool {
    let d = desugar_program(program, &Options::with_placeholders(PLACEHOLDERS.iter().copied()));
    typecheck(&TypeEnv::all_js(free_variables(&d.term).iter()), &d.term, RuleSet::Extended).is_ok()
}

fn compose(rng: &mut impl Rng, forms: &[&str], depth: u32) -> Expr {
    let e = form_expr(forms.choose(rng).unwrap()).unwrap();
    if depth == 0 {
        return e;
    }
    let mut fill = || compose(rng, forms, depth - 1);
    plug(&e, &mut fill)
}

fn statement_program(form: &str, rng: &mut impl Rng, forms: &[&str]) -> Program {
    let p = js::parse(form).unwrap();
    let mut fill = || compose(rng, forms, 1);
    let mut fe = |e: &Expr| plug(e, &mut fill);
    let body = p.body.iter().map(|s| map_stmt_children(s, &mut fe, &mut |c| c.clone())).collect();
    Program { body, span: p.span }
}

#[test]
fn compositions_of_certified_forms_are_certified() {
    let passing: Vec<&str> = FORMS.iter().filter(|(_, ok)| *ok).map(|(f, _)| *f).collect();
    let expressions: Vec<&str> = passing.iter().copied().filter(|f| form_expr(f).is_some()).collect();
    let mut rng = common::rng(31);
    for _ in 0..300 {
        let e = compose(&mut rng, &expressions, 2);
        let program = js::parse(&format!("({});", js::printer::print_expression(&e))).unwrap();
        assert!(certified(&program), "{}", js::print_program(&program));
    }
    for form in passing.iter().filter(|f| form_expr(f).is_none()) {
        let program = statement_program(form, &mut rng, &expressions);
        assert!(certified(&program), "{}", js::print_program(&program));
    }
}

#[test]
fn a_rejected_form_anywhere_rejects_the_composition() {
    let passing: Vec<&str> =
        FORMS.iter().filter(|(f, ok)| *ok && form_expr(f).is_some()).map(|(f, _)| *f).collect();
    let mut rng = common::rng(32);
    for _ in 0..100 {
        let mut used_bad = false;
        let outer = form_expr(passing.choose(&mut rng).unwrap()).unwrap();
        let mut fill = || {
            if !used_bad {
                used_bad = true;
                form_expr("x[y];").unwrap()
            } else {
                compose(&mut rng, &passing, 0)
            }
        };
        let e = plug(&outer, &mut fill);
        if !used_bad {
            continue;
        }
        let program = js::parse(&format!("({});", js::printer::print_expression(&e))).unwrap();
        assert!(!certified(&program), "{}", js::print_program(&program));
    }
}

#[test]
fn paper_sandbox_results_hold() {
    sandbox_results().unwrap();
}

#[test]
fn certified_fixtures_never_touch_the_field() {
    safety_scan().unwrap();
}
