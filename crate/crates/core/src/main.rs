use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use lambdajs::harness::{
    cmd_check, cmd_desugar, cmd_run, cmd_step, cmd_test, fixture_root, load, read_file, CheckOptions, Report,
    RunConfig, Status, DEFAULT_FUEL,
};
use lambdajs::js;

#[derive(Parser)]
#[command(name = "lambdajs", version, about = "Run, desugar, trace and sandbox-check JavaScript via a core calculus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct EvalFlags {
    /// Maximum number of reduction steps.
    #[arg(long, default_value_t = DEFAULT_FUEL, value_parser = clap::value_parser!(u64).range(1..))]
    fuel: u64,
    /// Do not wrap the program in the standard environment.
    #[arg(long)]
    no_preamble: bool,
}

impl EvalFlags {
    fn config(self) -> RunConfig {
        RunConfig { fuel: self.fuel, preamble: !self.no_preamble, ..RunConfig::default() }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a JavaScript (.js) or core (.ljs) file.
    Run {
        file: PathBuf,
        #[command(flatten)]
        flags: EvalFlags,
        /// Rewrite the program for the sandbox before running it.
        #[arg(long)]
        sandbox: bool,
    },
    /// Print the core translation of a JavaScript file.
    Desugar {
        file: PathBuf,
        #[command(flatten)]
        flags: EvalFlags,
    },
    /// Print every configuration of a run.
    Step {
        file: PathBuf,
        #[command(flatten)]
        flags: EvalFlags,
        /// Instrument the program and print each step's sandbox type.
        #[arg(long)]
        typed: bool,
    },
    /// Decide whether a JavaScript file is safe to run in the sandbox.
    Check {
        file: PathBuf,
        /// Print the rewritten program before the verdict.
        #[arg(long)]
        emit_instrumented: bool,
        /// Report every failure, not only the first.
        #[arg(long)]
        all: bool,
        /// Check the file as written instead of rewriting it first.
        #[arg(long)]
        raw: bool,
    },
    /// Run a directory of golden-output fixtures.
    Test {
        /// Fixture root; defaults to $LAMBDAJS_FIXTURES, then ./fixtures.
        dir: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_FUEL, value_parser = clap::value_parser!(u64).range(1..))]
        fuel: u64,
    },
    /// Parse a JavaScript file.
    Parse {
        file: PathBuf,
        /// Print the syntax tree as JSON.
        #[arg(long)]
        dump_ast: bool,
    },
}

fn emit(report: Report) -> ExitCode {
    print!("{}", report.stdout);
    eprint!("{}", report.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(report.status.code())
}

fn usage_error(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(Status::Usage.code())
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Status::Usage.code() } else { 0 });
        }
    };
    match cli.command {
        Command::Run { file, flags, sandbox } => match load(&file) {
            Ok(src) => emit(cmd_run(&src, &RunConfig { sandbox, ..flags.config() })),
            Err(e) => usage_error(e),
        },
        Command::Desugar { file, flags } => match load(&file) {
            Ok(src) => emit(cmd_desugar(&src, &flags.config())),
            Err(e) => usage_error(e),
        },
        Command::Step { file, flags, typed } => match load(&file) {
            Ok(src) => emit(cmd_step(&src, &RunConfig { trace: true, sandbox: typed, ..flags.config() }, typed)),
            Err(e) => usage_error(e),
        },
        Command::Check { file, emit_instrumented, all, raw } => match load(&file) {
            Ok(src) => emit(cmd_check(&src, &CheckOptions { emit_instrumented, all, raw })),
            Err(e) => usage_error(e),
        },
        Command::Test { dir, fuel } => {
            let root = fixture_root(dir);
            match cmd_test(&root, &RunConfig { fuel, ..RunConfig::default() }) {
                Ok(summary) => {
                    print!("{}", summary.render());
                    ExitCode::from(if summary.failures() == 0 { 0 } else { Status::Failure.code() })
                }
                Err(e) => usage_error(e),
            }
        }
        Command::Parse { file, dump_ast } => {
            let text = match read_file(&file) {
                Ok(t) => t,
                Err(e) => return usage_error(e),
            };
            match js::parse(&text) {
                Ok(p) => {
                    if dump_ast {
                        println!("{}", js::dump_ast(&p));
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => usage_error(format!("{}:{e}", file.display())),
            }
        }
    }
}
