//! Runtime checks on evaluation traces: no step's redex may look up the
//! `XMLHttpRequest` field, and every intermediate expression must still
//! type.

use super::typecheck::{typecheck, Rejection, RuleSet, TypeEnv, XHR};
use crate::eval::{decompose, trace, Decomposition, Outcome};
use crate::syntax::{print_expr, Configuration, Const, Expr, Term};

/// A step whose redex reads the protected field.
#[derive(Clone, Debug)]
pub struct Violation {
    pub step: u64,
    pub redex: String,
}

#[derive(Clone, Debug)]
pub struct ScanReport {
    pub steps: u64,
    pub outcome: Outcome,
    pub violations: Vec<Violation>,
    /// Steps whose expression failed to type, with the first rejection.
    pub untyped: Vec<(u64, Rejection)>,
    pub output: Vec<String>,
}

impl ScanReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.untyped.is_empty()
    }
}

/// Does `redex` look up the protected field of some value?
pub fn is_unsafe_redex(redex: &Expr) -> bool {
    match redex {
        Expr::GetField(o, f) => o.is_value() && matches!(&**f, Expr::Const(Const::Str(s)) if &**s == XHR),
        _ => false,
    }
}

/// Evaluates `term` from the empty store for at most `fuel` steps,
/// checking every configuration. With `retype`, every expression along
/// the way is type-checked under `rules`.
pub fn scan(term: &Term, fuel: u64, retype: Option<RuleSet>) -> ScanReport {
    let mut violations = Vec::new();
    let mut untyped = Vec::new();
    let mut output = Vec::new();
    let mut step = 0;
    let env = TypeEnv::new();
    let r = trace(Configuration::new(term.clone()), Some(fuel), &mut output, |config, _| {
        if let Decomposition::Redex { redex, .. } = decompose(&config.expr) {
            if is_unsafe_redex(&redex) {
                violations.push(Violation { step, redex: print_expr(&redex) });
            }
        }
        if let Some(rules) = retype {
            if let Err(mut errs) = typecheck(&env, &config.expr, rules) {
                untyped.push((step, errs.swap_remove(0)));
            }
        }
        step += 1;
        true
    });
    ScanReport { steps: r.steps, outcome: r.outcome, violations, untyped, output }
}
