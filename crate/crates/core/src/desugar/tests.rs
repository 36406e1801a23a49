use super::*;
use crate::eval::{eval, Outcome};
use crate::js::parse;
use crate::syntax::{free_variables, Configuration};

/// Runs a program and returns what it printed, panicking unless it
/// finishes normally.
fn run(src: &str) -> Vec<String> {
    let (outcome, out) = run_outcome(src);
    assert!(outcome.is_value(), "{src}: {outcome:?}");
    out
}

fn run_outcome(src: &str) -> (Outcome, Vec<String>) {
    let program = parse(src).unwrap_or_else(|e| panic!("{src}: {e}"));
    let mut out = Vec::new();
    let r = eval(Configuration::new(desugar(&program)), Some(5_000_000), &mut out);
    (r.outcome, out)
}

fn prints(src: &str, expected: &[&str]) {
    assert_eq!(run(src), expected, "{src}");
}

#[test]
fn lifted_variable_is_visible_after_its_block() {
    prints("function foo() { if (true) { var x = 10 } return x } print(foo());", &["10"]);
}

#[test]
fn local_declaration_shadows_parameter() {
    prints("function bar(x) { return function() { var x = x; return x } } print(bar(200)());", &["undefined"]);
}

#[test]
fn globals_are_fields_of_window() {
    prints(
        "var x = 0; window.x = 50; print(x); x = 100; print(window.x); print(window.window === window);",
        &["50", "100", "true"],
    );
}

#[test]
fn implicit_this() {
    prints(
        r#"var obj = { "x": 0, "setX": function(val) { this.x = val } };
           print(window.x);
           obj.setX(10); print(obj.x);
           var f = obj.setX; f(90);
           print(obj.x); print(window.x);"#,
        &["undefined", "10", "10", "90"],
    );
}

#[test]
fn instanceof_follows_the_prototype_at_test_time() {
    prints(
        r#"function Dog() { this.barks = "woof" };
           function Cat() { this.purrs = "meow" };
           dog = new Dog(); cat = new Cat();
           print(dog.barks); print(cat.purrs);
           function animalThing(obj) {
             if (obj instanceof Cat) { return obj.purrs }
             else if (obj instanceof Dog) { return obj.barks }
             else { return "unknown animal" } };
           print(animalThing(dog)); print(animalThing(cat)); print(animalThing(4234));
           Cat.prototype = Dog.prototype;
           print(animalThing(cat)); print(animalThing(dog));"#,
        &["woof", "meow", "woof", "meow", "unknown animal", "unknown animal", "undefined"],
    );
}

#[test]
fn number_objects_and_conversions() {
    prints(
        r#"x = 10; y = new Number(7);
           print(typeof x); print(typeof y);
           print(x + y);
           Number.prototype.valueOf = function() { return 0 };
           print(x + y); print(y.toString());
           print(x + y.toString()); print(x * y.toString());"#,
        &["number", "object", "17", "10", "7", "107", "70"],
    );
}

#[test]
fn loops_and_control() {
    prints(
        r#"var s = 0; for (var i = 0; i < 5; i++) { if (i == 3) continue; s += i } print(s);
           var n = 0; while (true) { n++; if (n > 4) break } print(n);
           var d = 0; do { d = d + 1 } while (d < 0); print(d);
           outer: for (var a = 0; a < 3; a++) { for (var b = 0; b < 3; b++) { if (b == 1) continue outer; if (a == 2) break outer; print(a + ":" + b) } }"#,
        &["7", "5", "1", "0:0", "1:0"],
    );
}

#[test]
fn update_expressions() {
    prints(
        "var i = 5; print(i++); print(i); print(++i); var o = {a: 1}; print(o.a--); print(--o.a); o['b'] = '4'; print(o.b++ + 1); print(o.b);",
        &["5", "6", "7", "1", "-1", "5", "5"],
    );
}

#[test]
fn switch_falls_through_from_the_matching_case() {
    let src = r#"function f(x) { var out = "";
        switch (x) { case 1: out += "a"; case 2: out += "b"; break; default: out += "d"; case 3: out += "c" }
        return out }
        print(f(1)); print(f(2)); print(f(3)); print(f(9));"#;
    prints(src, &["ab", "b", "c", "dc"]);
}

#[test]
fn for_in_visits_own_fields() {
    let out = run("var o = {a: 1, b: 2}; var ks = ''; for (var k in o) { ks += k } print(ks);");
    assert_eq!(out, ["ab"]);
    let out = run("var o = {a: 1, b: 2}; var n = 0; for (var k in o) { n += o[k] } print(n);");
    assert_eq!(out, ["3"]);
}

#[test]
fn exceptions_and_finally() {
    prints(
        r#"try { throw "boom" } catch (e) { print(e) } finally { print("done") }
           function g() { try { return 1 } finally { print("cleanup") } } print(g());
           try { null.x } catch (e) { print(e.type) }"#,
        &["boom", "done", "cleanup", "1", "TypeError"],
    );
}

#[test]
fn uncaught_throw_is_reported() {
    let (outcome, _) = run_outcome("throw 3;");
    assert!(matches!(outcome, Outcome::Uncaught(_)), "{outcome:?}");
}

#[test]
fn with_statement_runs_through_elimination() {
    prints("var o = {x: 1}; var x = 2; with (o) { print(x); x = 3; y = 4 } print(o.x); print(y);", &["1", "3", "4"]);
}

#[test]
fn delete_and_in() {
    prints(
        "var o = {a: 1}; print('a' in o); print(delete o.a); print('a' in o); print('toString' in o);",
        &["true", "true", "false", "true"],
    );
}

#[test]
fn logical_and_conditional() {
    prints("print(0 || 'x'); print(1 && 2); print(null ? 1 : 2); print(!'');", &["x", "2", "2", "true"]);
}

#[test]
fn desugared_program_mentions_only_preamble_names() {
    let p = parse("var a = 1; function f(b) { return a + b } f(2); x = o[k]; with (o) { y }").unwrap();
    let d = desugar_program(&p, &Options::default());
    for v in free_variables(&d.term) {
        assert!(ops::HELPERS.contains(&&*v), "{v}");
    }
}

#[test]
fn placeholders_stay_opaque() {
    let p = parse("A + B").unwrap();
    let d = desugar_program(&p, &Options::with_placeholders(["A", "B"]));
    let fv: Vec<String> = free_variables(&d.term).into_iter().map(|x| x.to_string()).collect();
    assert!(fv.contains(&"A".to_string()) && fv.contains(&"B".to_string()), "{fv:?}");
}

#[test]
fn spans_are_recorded_for_translations() {
    let p = parse("x;\ny[0];").unwrap();
    let d = desugar_program(&p, &Options::default());
    assert_eq!(d.span_of(&d.term).map(|s| s.line), Some(1));
    let crate::syntax::Expr::Seq(_, second) = &*d.term else { panic!("{:?}", d.term) };
    assert_eq!(d.span_of(second).map(|s| s.line), Some(2));
}
