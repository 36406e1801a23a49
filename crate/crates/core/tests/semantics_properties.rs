mod common;

use common::criteria::{determinism, progress, random_terms};
use common::splits::splits;
use lambdajs::eval::{eval, step, trace, Discard, Outcome, Step};
use lambdajs::syntax::{build::*, parse_expr, print_expr, Configuration, Location};

#[test]
fn random_terms_make_progress() {
    let terms = random_terms(1500, 11);
    progress(&terms, 100_000).unwrap();
}

#[test]
fn random_terms_split_uniquely() {
    let terms = random_terms(1500, 12);
    determinism(&terms, 300).unwrap();
}

#[test]
fn oracle_counts_known_shapes() {
    let cases = [
        ("1", 0),
        ("@prim-add(1, 2)", 1),
        ("@prim-add(@prim-add(1, 2), @prim-add(3, 4))", 1),
        ("l: { try { break l 1 } catch (e) { 2 } }", 1),
        ("try { l: { err 1 } } catch (e) { e }", 1),
        ("l: { err 1 }", 1),
        ("err 1", 0),
        ("break l 1", 0),
    ];
    for (src, n) in cases {
        assert_eq!(splits(&parse_expr(src).unwrap()), n, "{src}");
    }
}

#[test]
fn store_domain_only_grows() {
    for t in random_terms(400, 13) {
        let mut last = 0;
        trace(Configuration::new(t), Some(2_000), &mut Discard, |c, _| {
            let locations: Vec<Location> = c.store.iter().map(|(l, _)| l).collect();
            assert!(locations.len() >= last);
            last = locations.len();
            true
        });
    }
}

#[test]
fn while_unrolls_to_its_if_expansion() {
    let w = parse_expr("while (@prim-lt(0, 1)) { 5 }").unwrap();
    let Step::Next { config, rule } = step(&Configuration::new(w.clone()), &mut Discard) else { panic!() };
    assert_eq!(rule, "E-While");
    let Expr::While(c, b) = &*w else { unreachable!() };
    let expected = if_(c.clone(), seq(b.clone(), w.clone()), undefined());
    assert_eq!(print_expr(&config.expr), print_expr(&expected));
}

use lambdajs::syntax::Expr;

#[test]
fn errors_skip_residual_frames_except_finally() {
    let src = r#"let (p = func(this, %print) { undefined })
      @prim-add(1, l: { try { @prim-add(p(0, "a"), err "boom") } finally { p(0, "cleanup") } }); p(0, "never")"#;
    let mut out = Vec::new();
    let r = eval(Configuration::new(parse_expr(src).unwrap()), Some(1000), &mut out);
    assert_eq!(r.outcome, Outcome::Uncaught(str("boom")));
    assert_eq!(out, ["a", "cleanup"]);
}

#[test]
fn finally_reraises_breaks() {
    let mut out = Vec::new();
    let src = r#"let (p = func(this, %print) { undefined }) l: { try { break l 7 } finally { p(0, "f") }; 8 }"#;
    let r = eval(Configuration::new(parse_expr(src).unwrap()), Some(1000), &mut out);
    assert_eq!(r.outcome, Outcome::Value(num(7.0)));
    assert_eq!(out, ["f"]);
}
