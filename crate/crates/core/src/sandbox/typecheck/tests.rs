use super::*;
use crate::syntax::parse_expr;

fn ty(src: &str, free: &[&str], rules: RuleSet) -> Result<SandboxType, Vec<Rejection>> {
    let e = parse_expr(src).unwrap_or_else(|err| panic!("{src}: {err}"));
    typecheck(&TypeEnv::all_js(free), &e, rules)
}

const LOOKUP: &str = r#"func(obj, field) {
  if (@stx-eq(field, "XMLHttpRequest")) { undefined } else { (deref obj)[field] }
}"#;

#[test]
fn subtyping_has_one_edge() {
    use SandboxType::*;
    assert!(NotXhr.is_subtype(Js) && Js.is_subtype(Js) && NotXhr.is_subtype(NotXhr));
    assert!(!Js.is_subtype(NotXhr));
}

#[test]
fn core_lookup_types() {
    for rules in [RuleSet::Basic, RuleSet::Aux, RuleSet::Extended] {
        assert!(ty(LOOKUP, &[], rules).is_ok(), "{rules:?}");
    }
}

#[test]
fn unguarded_lookup_is_rejected() {
    let errs = ty("(deref o)[k]", &["o", "k"], RuleSet::Extended).unwrap_err();
    assert_eq!(errs[0].rule, "T-GetField");
    assert!(ty(r#"(deref (ref 0))["XMLHttpRequest"]"#, &[], RuleSet::Extended).is_err());
    assert!(ty(r#"(deref o)["x"]"#, &["o"], RuleSet::Basic).is_ok());
}

#[test]
fn narrowing_applies_only_to_the_else_branch() {
    let src = r#"if (@stx-eq(k, "XMLHttpRequest")) { (deref o)[k] } else { undefined }"#;
    assert!(ty(src, &["o", "k"], RuleSet::Extended).is_err());
}

#[test]
fn reduced_guards_need_the_auxiliary_rules() {
    let states = [
        r#"if (@stx-eq("XMLHttpRequest", "XMLHttpRequest")) { undefined } else { (deref window)["XMLHttpRequest"] }"#,
        r#"if (true) { undefined } else { (deref window)["XMLHttpRequest"] }"#,
    ];
    for s in states {
        assert!(ty(s, &["window"], RuleSet::Basic).is_err(), "{s}");
        assert!(ty(s, &["window"], RuleSet::Aux).unwrap().is_subtype(SandboxType::Js), "{s}");
    }
}

#[test]
fn every_step_of_the_guarded_lookup_types() {
    let steps = [
        format!(r#"({LOOKUP})(window, "XMLHttpRequest")"#),
        r#"if (@stx-eq("XMLHttpRequest", "XMLHttpRequest")) { undefined } else { (deref window)["XMLHttpRequest"] }"#
            .to_string(),
        r#"if (true) { undefined } else { (deref window)["XMLHttpRequest"] }"#.to_string(),
        "undefined".to_string(),
    ];
    for s in &steps {
        assert!(ty(s, &["window"], RuleSet::Aux).is_ok(), "{s}");
    }
}

#[test]
fn extended_rules_track_let_bound_constants() {
    let src = r#"let (k = "a") (deref o)[k]"#;
    assert!(ty(src, &["o"], RuleSet::Basic).is_err());
    assert!(ty(src, &["o"], RuleSet::Extended).is_ok());
    let xhr = r#"let (k = "XMLHttpRequest") (deref o)[k]"#;
    assert!(ty(xhr, &["o"], RuleSet::Extended).is_err());
}

#[test]
fn string_guard_prunes_the_coercion_branch() {
    // The shape desugaring produces for a computed field name under a
    // typeof-string test.
    let src = r#"if (@stx-eq(f, "XMLHttpRequest")) { undefined } else {
      if (@stx-eq(@typeof(f), "string")) {
        (deref o)[let (%f = f) if (@is-location(%f)) { @to-string(g(%f)) } else { %f }]
      } else { undefined } }"#;
    assert!(ty(src, &["o", "f", "g"], RuleSet::Aux).is_err());
    assert!(ty(src, &["o", "f", "g"], RuleSet::Extended).is_ok());
}

#[test]
fn folding_sees_through_decided_tests() {
    let src = r#"if (@is-location("s")) { (deref o)[k] } else { 1 }"#;
    assert!(ty(src, &["o", "k"], RuleSet::Aux).is_err());
    assert_eq!(ty(src, &["o", "k"], RuleSet::Extended).unwrap(), SandboxType::NotXhr);
}

#[test]
fn unbound_identifiers_are_rejected() {
    let errs = ty("x", &[], RuleSet::Basic).unwrap_err();
    assert_eq!(errs[0].rule, "T-Id");
}

#[test]
fn function_bodies_are_checked() {
    assert!(ty(r#"func(o) { (deref o)["XMLHttpRequest"] }"#, &[], RuleSet::Extended).is_err());
    assert_eq!(ty("func(o) { o }", &[], RuleSet::Basic).unwrap(), SandboxType::NotXhr);
}

#[test]
fn rejections_are_innermost_first() {
    let errs = ty(r#"(deref o)[(deref o)[k]]"#, &["o", "k"], RuleSet::Basic).unwrap_err();
    assert_eq!(errs.len(), 2);
    assert_eq!(print_expr(&errs[0].node), "(deref o)[k]");
}
