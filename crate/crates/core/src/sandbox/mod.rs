//! Language-based sandboxing: untrusted JavaScript is rewritten so field
//! reads go through a wrapper, desugared, and type-checked so that no
//! evaluation step looks up the `XMLHttpRequest` field.

pub mod instrument;
pub mod scan;
pub mod sweep;
pub mod typecheck;

use std::fmt;

use crate::desugar::{desugar_program, Desugared, Options};
use crate::js::{Program, Span};
use crate::syntax::free_variables;

pub use instrument::{instrument, Excluded, LOOKUP_JS_SOURCE, SAFE_LOOKUP, SAFE_LOOKUP_SOURCE};
pub use scan::{scan, ScanReport, Violation};
pub use sweep::{per_form_context_check, FormResult, FORMS, PLACEHOLDERS};
pub use typecheck::{typecheck, typecheck_with_spans, Rejection, RuleSet, SandboxType, TypeEnv, XHR};

/// One reason a program was not certified.
#[derive(Clone, Debug)]
pub struct Failure {
    pub span: Option<Span>,
    pub rule: String,
    pub message: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.span {
            Some(s) => write!(f, "{s}: {}: {}", self.rule, self.message),
            None => write!(f, "{}: {}", self.rule, self.message),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SafetyReport {
    pub certified: bool,
    /// Empty when certified; the first entry is the leftmost-innermost
    /// failure.
    pub failures: Vec<Failure>,
}

impl SafetyReport {
    fn certified() -> SafetyReport {
        SafetyReport { certified: true, failures: Vec::new() }
    }

    fn rejected(failures: Vec<Failure>) -> SafetyReport {
        SafetyReport { certified: false, failures }
    }

    /// A text report: the verdict, then one failure per line (all of
    /// them, or only the first).
    pub fn render(&self, all: bool) -> String {
        let mut out = String::from(if self.certified { "certified\n" } else { "rejected\n" });
        let shown = if all { self.failures.len() } else { self.failures.len().min(1) };
        for failure in &self.failures[..shown] {
            out.push_str(&format!("  {failure}\n"));
        }
        if shown < self.failures.len() {
            out.push_str(&format!("  ({} more; use --all)\n", self.failures.len() - shown));
        }
        out
    }
}

/// Instruments, desugars (without the preamble) and type-checks an
/// untrusted program.
pub fn check_subset(program: &Program) -> SafetyReport {
    match instrument(program) {
        Ok(p) => check_desugared(&p, RuleSet::Extended),
        Err(excluded) => SafetyReport::rejected(
            excluded
                .into_iter()
                .map(|e| Failure { span: Some(e.span), rule: "subset".into(), message: e.message })
                .collect(),
        ),
    }
}

/// Desugars `program` as is and type-checks it with every free identifier
/// at `JS`.
pub fn check_desugared(program: &Program, rules: RuleSet) -> SafetyReport {
    let d = desugar_program(program, &Options::default());
    match typecheck_desugared(&d, rules) {
        Ok(_) => SafetyReport::certified(),
        Err(rejections) => SafetyReport::rejected(
            rejections
                .into_iter()
                .map(|r| Failure { span: r.span, rule: r.rule.to_string(), message: r.detail() })
                .collect(),
        ),
    }
}

/// Type-checks a desugared program, attributing failures to source spans.
pub fn typecheck_desugared(d: &Desugared, rules: RuleSet) -> Result<SandboxType, Vec<Rejection>> {
    let env = TypeEnv::all_js(free_variables(&d.term).iter());
    typecheck_with_spans(&env, &d.term, rules, &|t| d.span_of(t))
}
