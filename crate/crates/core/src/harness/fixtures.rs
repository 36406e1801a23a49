//! Golden-output fixtures: each `.js` (or core `.ljs`) file sits next to a
//! `.expected` file holding the exact bytes its run prints.
//!
//! Leading `//` comment lines may carry directives:
//! `// outcome: value | uncaught_error | certified | rejected` and
//! `// check: raw` (type-check the file as trusted code, uninstrumented).
//! Sandbox fixtures (tagged `certified` or `rejected`) print the check
//! report, followed, when certified, by the output of the instrumented
//! program.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use similar::TextDiff;
use walkdir::WalkDir;

use super::{cmd_run, load, read_file, safety_report, CheckOptions, HarnessError, RunConfig, Source, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutcomeTag {
    Value,
    UncaughtError,
    Certified,
    Rejected,
}

impl OutcomeTag {
    fn parse(s: &str) -> Option<OutcomeTag> {
        Some(match s {
            "value" => OutcomeTag::Value,
            "uncaught_error" => OutcomeTag::UncaughtError,
            "certified" => OutcomeTag::Certified,
            "rejected" => OutcomeTag::Rejected,
            _ => return None,
        })
    }

    pub fn is_sandbox(self) -> bool {
        matches!(self, OutcomeTag::Certified | OutcomeTag::Rejected)
    }
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    /// First directory below the root, used to group the summary.
    pub suite: String,
    pub source: PathBuf,
    pub expected: PathBuf,
    pub tag: Option<OutcomeTag>,
    pub raw: bool,
}

impl Fixture {
    fn from_path(root: &Path, source: &Path) -> Result<Fixture, HarnessError> {
        let expected = source.with_extension("expected");
        if !expected.is_file() {
            return Err(HarnessError::Config(format!("{}: missing .expected file", source.display())));
        }
        let rel = source.strip_prefix(root).unwrap_or(source);
        let suite = match rel.components().count() {
            1 => ".".to_string(),
            _ => rel.components().next().unwrap().as_os_str().to_string_lossy().into_owned(),
        };
        let mut tag = None;
        let mut raw = false;
        for line in read_file(source)?.lines() {
            let Some(comment) = line.trim().strip_prefix("//") else { break };
            match comment.trim().split_once(':') {
                Some(("outcome", v)) => {
                    tag = Some(OutcomeTag::parse(v.trim()).ok_or_else(|| {
                        HarnessError::Config(format!("{}: unknown outcome tag {:?}", source.display(), v.trim()))
                    })?)
                }
                Some(("check", v)) if v.trim() == "raw" => raw = true,
                _ => {}
            }
        }
        let name = rel.with_extension("").to_string_lossy().into_owned();
        Ok(Fixture { name, suite, source: source.to_path_buf(), expected, tag, raw })
    }

    /// Runs the fixture and renders what it prints, together with whether
    /// its ending matched the tag.
    pub fn execute(&self, config: &RunConfig) -> Result<(String, Option<String>), HarnessError> {
        let source = load(&self.source)?;
        match (self.tag, &source) {
            (Some(tag), Source::Js(program)) if tag.is_sandbox() => {
                let report = safety_report(program, &CheckOptions { raw: self.raw, ..CheckOptions::default() });
                let mut out = report.render(false);
                let mut problem = None;
                if report.certified != (tag == OutcomeTag::Certified) {
                    problem = Some(format!("expected {tag:?}, got {}", out.lines().next().unwrap_or("")));
                }
                if report.certified {
                    let run = cmd_run(&source, &RunConfig { sandbox: !self.raw, ..*config });
                    out.push_str(&run.stdout);
                    if run.status != Status::Success && problem.is_none() {
                        problem = Some(run.stderr.trim_end().to_string());
                    }
                }
                Ok((out, problem))
            }
            _ => {
                let run = cmd_run(&source, config);
                let problem = match self.tag {
                    Some(OutcomeTag::Value) if run.status != Status::Success => {
                        Some(format!("expected a value: {}", run.stderr.trim_end()))
                    }
                    Some(OutcomeTag::UncaughtError) if !run.stderr.starts_with("uncaught exception") => {
                        Some(format!("expected an uncaught error, got {:?}", run.stderr.trim_end()))
                    }
                    Some(t) if t.is_sandbox() => Some("sandbox tags need a JavaScript fixture".into()),
                    _ => None,
                };
                Ok((run.stdout, problem))
            }
        }
    }
}

/// All fixtures below `root`, sorted by path.
pub fn discover(root: &Path) -> Result<Vec<Fixture>, HarnessError> {
    if !root.is_dir() {
        return Err(HarnessError::Config(format!("{}: not a fixture directory", root.display())));
    }
    let mut paths: Vec<PathBuf> = WalkDir::new(root)
        .into_iter()
        .filter_map(Result::ok)
        .map(|e| e.into_path())
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e == "js" || e == super::CORE_EXTENSION))
        .collect();
    paths.sort();
    paths.iter().map(|p| Fixture::from_path(root, p)).collect()
}

#[derive(Clone, Debug)]
pub struct FixtureResult {
    pub name: String,
    pub suite: String,
    pub passed: bool,
    /// A unified diff or a description of the mismatch.
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct TestSummary {
    pub results: Vec<FixtureResult>,
}

impl TestSummary {
    pub fn failures(&self) -> usize {
        self.results.iter().filter(|r| !r.passed).count()
    }

    /// Failure details, then a per-suite table of counts.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for r in self.results.iter().filter(|r| !r.passed) {
            out.push_str(&format!("FAIL {}\n{}", r.name, r.detail));
            if !r.detail.ends_with('\n') {
                out.push('\n');
            }
        }
        let mut suites: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
        for r in &self.results {
            let e = suites.entry(&r.suite).or_default();
            if r.passed {
                e.0 += 1;
            } else {
                e.1 += 1;
            }
        }
        out.push_str(&format!("{:<16} {:>6} {:>6}\n", "suite", "passed", "failed"));
        for (suite, (p, f)) in &suites {
            out.push_str(&format!("{suite:<16} {p:>6} {f:>6}\n"));
        }
        let failed = self.failures();
        out.push_str(&format!("{:<16} {:>6} {:>6}\n", "total", self.results.len() - failed, failed));
        out
    }
}

fn check_fixture(f: &Fixture, config: &RunConfig) -> FixtureResult {
    let result = |passed, detail: String| FixtureResult { name: f.name.clone(), suite: f.suite.clone(), passed, detail };
    let expected = match read_file(&f.expected) {
        Ok(e) => e,
        Err(e) => return result(false, e.to_string()),
    };
    match f.execute(config) {
        Err(e) => result(false, e.to_string()),
        Ok((actual, problem)) => {
            let mut detail = String::new();
            if actual != expected {
                let diff = TextDiff::from_lines(&expected, &actual);
                detail.push_str(&diff.unified_diff().header(&f.expected.to_string_lossy(), "actual").to_string());
            }
            if let Some(p) = problem {
                detail.push_str(&p);
                detail.push('\n');
            }
            result(detail.is_empty(), detail)
        }
    }
}

/// Deeply nested programs recurse in the printer and checker.
const WORKER_STACK: usize = 64 << 20;

/// Runs every fixture below `root`, in parallel. Results are in path order.
pub fn cmd_test(root: &Path, config: &RunConfig) -> Result<TestSummary, HarnessError> {
    let fixtures = discover(root)?;
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(fixtures.len().max(1));
    let chunk = fixtures.len().div_ceil(workers).max(1);
    let results = std::thread::scope(|s| {
        let handles: Vec<_> = fixtures
            .chunks(chunk)
            .map(|part| {
                std::thread::Builder::new()
                    .stack_size(WORKER_STACK)
                    .spawn_scoped(s, move || part.iter().map(|f| check_fixture(f, config)).collect::<Vec<_>>())
                    .expect("spawning a fixture worker")
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("fixture worker panicked")).collect()
    });
    Ok(TestSummary { results })
}
