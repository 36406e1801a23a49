//! The acceptance criteria as reusable checks. Each returns a short
//! summary on success and a description of the first problem otherwise.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use std::cell::RefCell;

use lambdajs::desugar::{desugar, desugar_program, preamble, Options};
use lambdajs::eval::{decompose, eval, plug_all, trace, Decomposition, Discard, Outcome};
use lambdajs::harness::{cmd_run, cmd_step, discover, load, OutcomeTag, RunConfig, Source};
use lambdajs::js::{self, ast::{map_expr_children, map_stmt_children, UnaryOp}, ExprKind};
use lambdajs::sandbox::{
    check_desugared, instrument, per_form_context_check, scan, typecheck, RuleSet, TypeEnv, FORMS, PLACEHOLDERS,
    LOOKUP_JS_SOURCE, SAFE_LOOKUP_SOURCE,
};
use lambdajs::syntax::{free_variables, parse_expr, well_formed_reason, Configuration, Expr, Term};

use super::core_gen::CoreGen;
use super::js_gen::JsGen;
use super::splits::{is_final, splits};

pub type Check = Result<String, String>;

pub fn fixture_root() -> PathBuf {
    std::env::var_os(lambdajs::harness::FIXTURES_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures"))
}

fn run_fixture(rel: &str) -> Result<(String, String), String> {
    let path = fixture_root().join(rel);
    let source = load(&path).map_err(|e| e.to_string())?;
    let r = cmd_run(&source, &RunConfig::default());
    Ok((r.stdout, r.stderr))
}

/// Paper transcripts, with the printed results as the paper states them.
pub const TRANSCRIPTS: &[(&str, &str)] = &[
    ("semantics/select.ljs", "600\n"),
    ("semantics/not_found.ljs", "undefined\n"),
    ("semantics/update_field.ljs", "{ \"x\": 10 }\n"),
    ("semantics/create_field.ljs", "{ \"z\": 20, \"x\": 0 }\n"),
    ("semantics/delete_field.ljs", "{ \"y\": 13 }\n"),
    ("semantics/arrays.js", "6\nNaN\n"),
    ("semantics/prototypes.ljs", "13\n7\n2\n7\ntrue\n19\n7\n19\nundefined\n"),
    ("semantics/implicit_this.js", "undefined\n10\n10\n90\n"),
    ("semantics/instanceof.js", "woof\nmeow\nwoof\nmeow\nunknown animal\nunknown animal\nundefined\n"),
    ("semantics/lifting.js", "10\nundefined\n"),
    ("semantics/globals.js", "true\n50\n100\n"),
    ("semantics/coercions.js", "number\nobject\n17\n10\n7\n107\n70\n"),
    ("semantics/constructors.js", "50\n"),
];

pub fn transcripts() -> Check {
    for (rel, expected) in TRANSCRIPTS {
        let (out, err) = run_fixture(rel)?;
        if out != *expected || !err.is_empty() {
            return Err(format!("{rel}: printed {out:?} (stderr {err:?}), expected {expected:?}"));
        }
    }
    Ok(format!("{} transcripts exact", TRANSCRIPTS.len()))
}

/// Control fixtures: final results and hand-derived rule sequences.
pub const CONTROL: &[(&str, &[&str], &str)] = &[
    ("control/break_break.ljs", &["E-Break-Break", "E-Break"], "|- 1"),
    ("control/finally_error.ljs", &["E-Throw", "E-Finally-Error", "E-Begin-Discard"], "|- err 1"),
    ("control/finally_break.ljs", &["E-Finally-Break", "E-Begin-Discard", "E-Break"], "|- 5"),
];

pub fn control() -> Check {
    for (rel, rules, last) in CONTROL {
        let path = fixture_root().join(rel);
        let source = load(&path).map_err(|e| e.to_string())?;
        let r = cmd_step(&source, &RunConfig { preamble: false, ..RunConfig::default() }, false);
        let seen: Vec<&str> = r.stdout.lines().filter_map(|l| l.strip_prefix("--> ")).collect();
        if seen != *rules {
            return Err(format!("{rel}: rules {seen:?}, expected {rules:?}"));
        }
        if r.stdout.lines().last() != Some(*last) {
            return Err(format!("{rel}: final state {:?}", r.stdout.lines().last()));
        }
        let golden = std::fs::read_to_string(path.with_extension("trace")).map_err(|e| e.to_string())?;
        if golden != r.stdout {
            return Err(format!("{rel}: trace differs from its golden file"));
        }
    }
    let (out, _) = run_fixture("control/break_break.ljs")?;
    if out != "1\n" {
        return Err(format!("break_break printed {out:?}"));
    }
    Ok(format!("{} traces exact", CONTROL.len()))
}

pub fn random_terms(count: usize, seed: u64) -> Vec<Term> {
    let mut rng = super::rng(seed);
    (0..count)
        .map(|_| {
            let depth = rand::Rng::gen_range(&mut rng, 3..=6);
            CoreGen::new(&mut rng).term(depth)
        })
        .collect()
}

pub fn progress(terms: &[Term], fuel: u64) -> Check {
    let mut tally = [0usize; 4];
    for t in terms {
        let config = Configuration::new(t.clone());
        well_formed_reason(&config).map_err(|e| format!("generated an ill-formed term: {e}"))?;
        match eval(config, Some(fuel), &mut Discard).outcome {
            Outcome::Value(_) => tally[0] += 1,
            Outcome::Uncaught(_) => tally[1] += 1,
            Outcome::TopLevelBreak(..) => tally[2] += 1,
            Outcome::FuelExhausted(_) => tally[3] += 1,
            Outcome::Stuck { expr, reason } => {
                return Err(format!("stuck ({reason}) on {}", lambdajs::syntax::print_expr(&expr)))
            }
        }
    }
    Ok(format!(
        "{} terms: {} values, {} errors, {} top-level breaks, {} out of fuel",
        terms.len(),
        tally[0],
        tally[1],
        tally[2],
        tally[3]
    ))
}

/// Every state along each run (up to `steps` of them) has exactly one
/// split, and the evaluator's split is that one.
pub fn determinism(terms: &[Term], steps: u64) -> Check {
    let mut states = 0u64;
    for t in terms {
        let mut problem = None;
        trace(Configuration::new(t.clone()), Some(steps), &mut Discard, |c, _| {
            states += 1;
            let e = &c.expr;
            let n = splits(e);
            let d = decompose(e);
            let ok = if is_final(e) {
                n == 0 && matches!(d, Decomposition::Value | Decomposition::Uncaught(_) | Decomposition::TopLevelBreak(..))
            } else {
                n == 1
                    && match &d {
                        Decomposition::Redex { frames, redex } => plug_all(frames, redex.clone()) == *e,
                        Decomposition::Signal { .. } | Decomposition::Escaping { .. } => true,
                        _ => false,
                    }
            };
            if !ok {
                problem = Some(format!("{n} splits ({d:?}) in {}", lambdajs::syntax::print_expr(e)));
            }
            ok
        });
        if let Some(p) = problem {
            return Err(p);
        }
    }
    Ok(format!("{} terms, {states} states, one split each", terms.len()))
}

pub fn random_program(seed: u64) -> String {
    let mut rng = super::rng(seed);
    let statements = rand::Rng::gen_range(&mut rng, 1..6);
    JsGen::new(&mut rng).program(statements, 4)
}

pub fn totality(count: usize, seed: u64) -> Check {
    for i in 0..count as u64 {
        let src = random_program(seed.wrapping_add(i));
        let program = js::parse(&src).map_err(|e| format!("generator produced invalid source ({e}):\n{src}"))?;
        let term = catch_unwind(AssertUnwindSafe(|| desugar(&program)))
            .map_err(|_| format!("desugaring panicked on:\n{src}"))?;
        let free = free_variables(&term);
        if !free.is_empty() {
            return Err(format!("free {free:?} after desugaring:\n{src}"));
        }
    }
    Ok(format!("{count} programs desugared, all closed"))
}

fn count_id(t: &Expr, name: &str) -> usize {
    let own = matches!(t, Expr::Id(x) if &**x == name) as usize;
    own + t.children().into_iter().map(|c| count_id(c, name)).sum::<usize>()
}

/// Identifiers in expression position. Assignment and update targets and
/// `delete` operands name a binding rather than computing a value.
fn expression_idents(program: &js::Program) -> Vec<String> {
    fn expr(e: &js::Expr, out: &RefCell<Vec<String>>) {
        let is_ident = |t: &js::Expr| matches!(t.kind, ExprKind::Ident { .. });
        match &e.kind {
            ExprKind::Ident { name } => out.borrow_mut().push(name.clone()),
            ExprKind::Assign { target, value, .. } => {
                if !is_ident(target) {
                    expr(target, out);
                }
                expr(value, out);
            }
            ExprKind::Update { target, .. } | ExprKind::Unary { op: UnaryOp::Delete, arg: target } if is_ident(target) => {}
            _ => {
                map_expr_children(e, &mut |c| {
                    expr(c, out);
                    c.clone()
                });
            }
        }
    }
    fn stmt(s: &js::Stmt, out: &RefCell<Vec<String>>) {
        map_stmt_children(
            s,
            &mut |e| {
                expr(e, out);
                e.clone()
            },
            &mut |c| {
                stmt(c, out);
                c.clone()
            },
        );
    }
    let out = RefCell::new(Vec::new());
    for s in &program.body {
        stmt(s, &out);
    }
    out.into_inner()
}

/// Placeholder children each appear exactly once in their form's
/// translation.
pub fn compositionality() -> Check {
    let options = Options::with_placeholders(PLACEHOLDERS.iter().copied());
    for (form, _) in FORMS {
        let program = js::parse(form).map_err(|e| format!("{form}: {e}"))?;
        let term = desugar_program(&program, &options).term;
        let mut names = expression_idents(&program);
        names.retain(|n| PLACEHOLDERS.contains(&n.as_str()));
        for name in &names {
            if names.iter().filter(|n| *n == name).count() != 1 {
                return Err(format!("{form}: `{name}` is used twice"));
            }
            let n = count_id(&term, name);
            if n != 1 {
                return Err(format!("{form}: `{name}` appears {n} times in the translation"));
            }
        }
    }
    Ok(format!("{} forms", FORMS.len()))
}

const CORE_LOOKUP: &str = r#"func(obj, field) {
  if (@stx-eq(field, "XMLHttpRequest")) { undefined } else { (deref obj)[field] } }"#;

const EXPLOIT: &str = r#"var evil = { toString: function() { return "XMLHttpRequest" } };"#;

pub fn sandbox_results() -> Check {
    let lookup = parse_expr(CORE_LOOKUP).map_err(|e| e.to_string())?;
    typecheck(&TypeEnv::new(), &lookup, RuleSet::Basic).map_err(|e| format!("core lookup rejected: {}", e[0]))?;
    let bare = parse_expr("(deref o)[k]").unwrap();
    if typecheck(&TypeEnv::all_js(["o", "k"]), &bare, RuleSet::Extended).is_ok() {
        return Err("bare computed lookup accepted".into());
    }
    let failing: Vec<&str> = per_form_context_check().into_iter().filter(|r| !r.passed).map(|r| r.form).collect();
    let table = ["x[y];", "x.XMLHttpRequest;", "x[y]++;", "x[y]--;", "++x[y];", "--x[y];"];
    if failing != table {
        return Err(format!("sweep failures {failing:?}"));
    }
    let lookup_js = js::parse(LOOKUP_JS_SOURCE).unwrap();
    if check_desugared(&lookup_js, RuleSet::Extended).certified {
        return Err("lookupJS certified".into());
    }
    let safe = js::parse(SAFE_LOOKUP_SOURCE).unwrap();
    if !check_desugared(&safe, RuleSet::Extended).certified {
        return Err("safeLookup rejected".into());
    }
    let attack = |wrapper: &str, name: &str| {
        let src = format!("{wrapper}{EXPLOIT}\nprint({name}(window, evil));");
        let term = preamble::wrap(&desugar_program(&js::parse(&src).unwrap(), &Options::default()).term);
        scan(&term, 1_000_000, None)
    };
    let broken = attack(LOOKUP_JS_SOURCE, "lookupJS");
    if broken.violations.is_empty() || broken.output != ["function"] {
        return Err(format!("exploit did not reach the field: {:?}", broken.output));
    }
    let fixed = attack(SAFE_LOOKUP_SOURCE, "safeLookup");
    if !fixed.violations.is_empty() || fixed.output != ["undefined"] {
        return Err(format!("safeLookup leaked: {:?}", fixed.output));
    }
    Ok(format!("sweep of {} forms matches; exploit reaches the field only through lookupJS", FORMS.len()))
}

/// Certified sandbox fixtures: the term that actually runs.
pub fn certified_fixture_terms() -> Result<Vec<(String, Term)>, String> {
    let mut out = Vec::new();
    for f in discover(&fixture_root().join("sandbox")).map_err(|e| e.to_string())? {
        if f.tag != Some(OutcomeTag::Certified) {
            continue;
        }
        let Source::Js(program) = load(&f.source).map_err(|e| e.to_string())? else { continue };
        let program = if f.raw {
            program
        } else {
            instrument(&program).map_err(|e| format!("{}: {e:?}", f.name))?
        };
        out.push((f.name, preamble::wrap(&desugar_program(&program, &Options::default()).term)));
    }
    Ok(out)
}

pub fn safety_scan() -> Check {
    let fixtures = certified_fixture_terms()?;
    let mut steps = 0;
    for (name, term) in &fixtures {
        let r = scan(term, 2_000_000, Some(RuleSet::Extended));
        if let Some(v) = r.violations.first() {
            return Err(format!("{name}: step {} looks up the protected field: {}", v.step, v.redex));
        }
        if let Some((step, rejection)) = r.untyped.first() {
            return Err(format!("{name}: step {step} does not type: {rejection}"));
        }
        if !r.outcome.is_value() {
            return Err(format!("{name}: ended with {:?}", r.outcome));
        }
        steps += r.steps;
    }
    Ok(format!("{} fixtures, {steps} steps scanned and retyped", fixtures.len()))
}
