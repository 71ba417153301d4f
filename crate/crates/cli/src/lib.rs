//! The `props` command line.
//!
//! Every command reads one JSON document (stdin or `--in`) and writes one
//! (stdout or `--out`). Exit status: 0 on success or a passing check, 1 for
//! a failed check (the output carries the witness), 2 for usage, input or
//! engine errors, reported as JSON on stderr.

mod args;
mod commands;
mod io;

use std::io::{Read, Write};

use clap::Parser;
use serde_json::{json, Value};

pub use args::Cli;
use args::Format;
use props_engine::budget::Budget;

/// What a command produced.
pub struct Report {
    pub pass: bool,
    pub value: Value,
    /// The graph to print under `--format dot`.
    pub dot: Option<String>,
}

impl Report {
    pub fn ok(value: Value) -> Self {
        Report {
            pass: true,
            value,
            dot: None,
        }
    }

    pub fn check(pass: bool, value: Value) -> Self {
        Report { pass, value, dot: None }
    }

    pub fn with_dot(mut self, dot: String) -> Self {
        self.dot = Some(dot);
        self
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    /// Unparseable input, with its position when known.
    Format {
        message: String,
        line: Option<usize>,
        column: Option<usize>,
    },
    Engine(props_engine::Error),
    Io(std::io::Error),
}

impl From<props_engine::Error> for CliError {
    fn from(e: props_engine::Error) -> Self {
        CliError::Engine(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn to_json(&self) -> Value {
        match self {
            CliError::Usage(m) => json!({ "error": "usage", "message": m }),
            CliError::Format { message, line, column } => json!({
                "error": "format",
                "message": message,
                "line": line,
                "column": column,
            }),
            CliError::Engine(e) => json!({ "error": "engine", "message": e.to_string() }),
            CliError::Io(e) => json!({ "error": "io", "message": e.to_string() }),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Everything a command may use besides its own arguments.
pub struct Context<'a> {
    pub cli: &'a Cli,
    pub budget: Budget,
    stdin: &'a mut (dyn Read + Send),
}

impl Context<'_> {
    /// The whole input document as text.
    pub fn input_text(&mut self) -> CliResult<String> {
        let mut text = String::new();
        match &self.cli.input {
            Some(path) => {
                text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?
            }
            None => {
                self.stdin.read_to_string(&mut text)?;
            }
        }
        Ok(text)
    }
}

/// Runs one command line and returns the exit status.
pub fn run<I, T>(argv: I, stdin: &mut (dyn Read + Send), stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(stdout, "{rendered}")
            } else {
                writeln!(stderr, "{}", json!({ "error": "usage", "message": rendered.trim_end() }))
            };
            return code;
        }
    };
    let outcome = {
        let mut ctx = Context {
            cli: &cli,
            budget: Budget::from_env(),
            stdin,
        };
        match cli.jobs {
            Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
                Ok(pool) => pool.install(|| commands::dispatch(&mut ctx)),
                Err(e) => Err(CliError::Usage(format!("cannot start {n} workers: {e}"))),
            },
            None => commands::dispatch(&mut ctx),
        }
    };
    match outcome.and_then(|report| emit(&cli, &report, stdout).map(|_| report.pass)) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.to_json());
            2
        }
    }
}

fn emit(cli: &Cli, report: &Report, stdout: &mut dyn Write) -> CliResult<()> {
    let text = match (cli.format, &report.dot) {
        (Format::Dot, Some(dot)) => dot.clone(),
        (Format::Dot, None) => {
            return Err(CliError::Usage("this command has no graph output for --format dot".into()))
        }
        (Format::Json, _) => {
            let mut s = serde_json::to_string_pretty(&report.value).expect("JSON values serialize");
            s.push('\n');
            s
        }
    };
    match &cli.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}
