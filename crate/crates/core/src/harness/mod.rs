//! The commands behind the CLI. Every command renders its standard output
//! into a string and reports an exit status, so the fixture runner and the
//! binary share one code path.

pub mod fixtures;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::desugar::{desugar_program, preamble, Options};
use crate::eval::{eval, print_string, trace, Outcome};
use crate::js::{self, print_program, ParseError, Program};
use crate::sandbox::{check_desugared, check_subset, instrument, typecheck, RuleSet, SafetyReport, TypeEnv};
use crate::syntax::{free_variables, parse_expr, print_config, print_expr, Configuration, ReadError, Term};

pub use fixtures::{cmd_test, discover, Fixture, FixtureResult, OutcomeTag, TestSummary};

/// Environment variable naming the default fixture root.
pub const FIXTURES_ENV: &str = "LAMBDAJS_FIXTURES";

/// Default step budget.
pub const DEFAULT_FUEL: u64 = 10_000_000;

/// Separator between configurations in a trace.
pub const STEP_SEPARATOR: &str = "-->";

/// Exit statuses shared by every command.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    /// An uncaught error, a rejection, or a fixture mismatch.
    Failure,
    /// Bad usage or unreadable input.
    Usage,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Success => 0,
            Status::Failure => 1,
            Status::Usage => 2,
        }
    }
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: ReadError },
    #[error("{0}")]
    Config(String),
}

#[derive(Clone, Copy, Debug)]
pub struct RunConfig {
    pub fuel: u64,
    pub trace: bool,
    pub preamble: bool,
    pub sandbox: bool,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig { fuel: DEFAULT_FUEL, trace: false, preamble: true, sandbox: false }
    }
}

/// What a command printed and how it ended.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub stdout: String,
    pub stderr: String,
    pub status: Status,
}

impl Report {
    fn new(stdout: String, stderr: String, status: Status) -> Report {
        Report { stdout, stderr, status }
    }
}

/// Input files are JavaScript unless they carry the core extension.
#[derive(Clone, Debug)]
pub enum Source {
    Js(Program),
    Core(Term),
}

pub const CORE_EXTENSION: &str = "ljs";

pub fn is_core_file(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == CORE_EXTENSION)
}

pub fn read_file(path: &Path) -> Result<String, HarnessError> {
    std::fs::read_to_string(path).map_err(|source| HarnessError::Io { path: path.to_path_buf(), source })
}

pub fn load(path: &Path) -> Result<Source, HarnessError> {
    let text = read_file(path)?;
    if is_core_file(path) {
        parse_expr(&text).map(Source::Core).map_err(|source| HarnessError::Read { path: path.to_path_buf(), source })
    } else {
        js::parse(&text).map(Source::Js).map_err(|source| HarnessError::Parse { path: path.to_path_buf(), source })
    }
}

/// The term to evaluate. With `sandbox`, JavaScript is instrumented first.
pub fn to_term(source: &Source, config: &RunConfig) -> Result<Term, String> {
    match source {
        Source::Core(t) => Ok(t.clone()),
        Source::Js(p) => {
            let program = if config.sandbox { instrumented(p)? } else { p.clone() };
            let term = desugar_program(&program, &Options::default()).term;
            Ok(if config.preamble { preamble::wrap(&term) } else { term })
        }
    }
}

fn instrumented(p: &Program) -> Result<Program, String> {
    instrument(p).map_err(|errs| errs.iter().map(|e| format!("{e}\n")).collect())
}

/// Describes an abnormal outcome for the error stream.
pub fn describe_failure(outcome: &Outcome, store: &crate::syntax::Store) -> Option<String> {
    match outcome {
        Outcome::Value(_) => None,
        Outcome::Uncaught(v) => Some(format!("uncaught exception: {}", describe_error(store, v))),
        Outcome::TopLevelBreak(l, v) => Some(format!("break to unknown label {l} with {}", print_string(store, v))),
        Outcome::Stuck { reason, .. } => Some(format!("stuck: {reason}")),
        Outcome::FuelExhausted(_) => Some("fuel exhausted".to_string()),
    }
}

/// Error objects are shown as `type: message` when they have those fields.
fn describe_error(store: &crate::syntax::Store, v: &Term) -> String {
    use crate::syntax::Expr;
    let fields = match &**v {
        Expr::Loc(l) => store.get(*l).cloned(),
        Expr::Object(_) => Some(v.clone()),
        _ => None,
    };
    if let Some(Expr::Object(fields)) = fields.as_deref() {
        let get = |k: &str| fields.iter().find(|(n, _)| &**n == k).map(|(_, v)| print_string(store, v));
        if let (Some(t), Some(m)) = (get("type"), get("message")) {
            return format!("{t}: {m}");
        }
    }
    print_string(store, v)
}

/// Evaluates a file. JavaScript output goes to stdout; a core file also
/// prints its final value.
pub fn cmd_run(source: &Source, config: &RunConfig) -> Report {
    let term = match to_term(source, config) {
        Ok(t) => t,
        Err(e) => return Report::new(String::new(), e, Status::Failure),
    };
    let mut stdout = String::new();
    let r = eval(Configuration::new(term), Some(config.fuel), &mut stdout);
    log::debug!("{} steps", r.steps);
    if let (Source::Core(_), Outcome::Value(v)) = (source, &r.outcome) {
        stdout.push_str(&print_expr(v));
        stdout.push('\n');
    }
    match describe_failure(&r.outcome, &r.store) {
        None => Report::new(stdout, String::new(), Status::Success),
        Some(msg) => Report::new(stdout, format!("{msg}\n"), Status::Failure),
    }
}

/// Prints the core translation of a JavaScript file.
pub fn cmd_desugar(source: &Source, config: &RunConfig) -> Report {
    match to_term(source, config) {
        Ok(t) => Report::new(format!("{}\n", print_expr(&t)), String::new(), Status::Success),
        Err(e) => Report::new(String::new(), e, Status::Failure),
    }
}

/// Prints every configuration of the run, separated by `-->` lines naming
/// the rule that was applied. With `typed`, each expression's sandbox type
/// follows it.
pub fn cmd_step(source: &Source, config: &RunConfig, typed: bool) -> Report {
    let term = match to_term(source, config) {
        Ok(t) => t,
        Err(e) => return Report::new(String::new(), e, Status::Failure),
    };
    let env = TypeEnv::all_js(free_variables(&term).iter());
    let mut stdout = String::new();
    let mut output = String::new();
    let r = trace(Configuration::new(term), Some(config.fuel), &mut output, |c, rule| {
        if let Some(rule) = rule {
            let _ = writeln!(stdout, "{STEP_SEPARATOR} {rule}");
        }
        let _ = writeln!(stdout, "{}", print_config(c));
        if typed {
            let ty = match typecheck(&env, &c.expr, RuleSet::Extended) {
                Ok(t) => t.to_string(),
                Err(errs) => format!("untyped ({})", errs[0]),
            };
            let _ = writeln!(stdout, ": {ty}");
        }
        true
    });
    for line in output.lines() {
        let _ = writeln!(stdout, "output: {line}");
    }
    match describe_failure(&r.outcome, &r.store) {
        None => Report::new(stdout, String::new(), Status::Success),
        Some(msg) => Report::new(stdout, format!("{msg}\n"), Status::Failure),
    }
}

/// How `check` treats its input.
#[derive(Clone, Copy, Debug, Default)]
pub struct CheckOptions {
    /// Print the instrumented program before the verdict.
    pub emit_instrumented: bool,
    /// List every failure rather than the first.
    pub all: bool,
    /// Type-check the program as written (trusted wrapper code) instead of
    /// instrumenting it first.
    pub raw: bool,
}

pub fn safety_report(program: &Program, options: &CheckOptions) -> SafetyReport {
    if options.raw {
        check_desugared(program, RuleSet::Extended)
    } else {
        check_subset(program)
    }
}

/// Sandbox verdict for a JavaScript file.
pub fn cmd_check(source: &Source, options: &CheckOptions) -> Report {
    let Source::Js(program) = source else {
        return Report::new(String::new(), "check expects a JavaScript file\n".into(), Status::Usage);
    };
    let mut stdout = String::new();
    if options.emit_instrumented && !options.raw {
        if let Ok(p) = instrument(program) {
            stdout.push_str(&print_program(&p));
        }
    }
    let report = safety_report(program, options);
    stdout.push_str(&report.render(options.all));
    let status = if report.certified { Status::Success } else { Status::Failure };
    Report::new(stdout, String::new(), status)
}

/// The fixture root: the argument, else the environment variable, else
/// `fixtures` under the current directory.
pub fn fixture_root(arg: Option<PathBuf>) -> PathBuf {
    arg.or_else(|| std::env::var_os(FIXTURES_ENV).map(PathBuf::from)).unwrap_or_else(|| PathBuf::from("fixtures"))
}
