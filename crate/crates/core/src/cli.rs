//! The `beepath` command line. [`run`] does all the work so it can be driven
//! from tests with in-memory streams.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::consistency::{project, verify_inclusion, ConsistencyError};
use crate::declare::{display_label, spec_automaton, translate_spec_decl};
use crate::emit;
use crate::grammar::{parse_source_with, render, Description, LexOptions};
use crate::llm::{self, EndpointConfig, LlmError};
use crate::model::{analyze, validate, ProcessSpec};
use crate::petri::{translate_spec_pn, NetError, DEFAULT_MAX_STATES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;
pub const EXIT_TRANSPORT: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "beepath",
    version,
    about = "Compile BeePath process descriptions"
)]
struct Cli {
    /// Accept any first line ending in "impossible" as the leading text
    #[arg(long, global = true)]
    lenient_leading_text: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse, resolve and lint a description
    Check {
        file: PathBuf,
        /// Treat warnings as errors
        #[arg(long)]
        strict: bool,
    },
    /// Translate and serialize
    Compile {
        file: PathBuf,
        #[arg(long, value_enum)]
        to: Target,
        #[arg(long, value_enum)]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the complete runs of the Petri net as activity sequences
    Simulate {
        file: PathBuf,
        #[arg(long, default_value_t = 40)]
        max_len: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
        max_states: usize,
    },
    /// Check every complete net run against the DECLARE translation
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 40)]
        max_len: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
        max_states: usize,
        #[arg(long)]
        json: bool,
    },
    /// Convert free text to BeePath with a chat-completion endpoint
    Structure {
        file: PathBuf,
        #[arg(long)]
        endpoint: String,
        #[arg(long)]
        model: String,
        /// Name of the environment variable holding the API key
        #[arg(long)]
        key_env: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = llm::DEFAULT_MAX_RETRIES)]
        max_retries: u32,
        /// Seconds
        #[arg(long, default_value_t = llm::DEFAULT_TIMEOUT_SECS)]
        timeout: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    Petri,
    Declare,
    Ast,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Dot,
    Tpn,
    Decl,
    Json,
    Beepath,
}

struct Failure(i32, String);

type Outcome = Result<i32, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure(EXIT_USAGE, msg.into())
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path, lenient: bool) -> Result<(Description, ProcessSpec), Failure> {
    let src = read(path)?;
    let name = path.display();
    let opts = LexOptions {
        lenient_leading_text: lenient,
    };
    let d = parse_source_with(&src, opts).map_err(|e| {
        Failure(
            EXIT_INVALID,
            prefix_lines(&name.to_string(), &e.to_string()),
        )
    })?;
    let p = analyze(&d).map_err(|e| {
        Failure(
            EXIT_INVALID,
            prefix_lines(&name.to_string(), &e.to_string()),
        )
    })?;
    Ok((d, p))
}

fn prefix_lines(prefix: &str, text: &str) -> String {
    text.lines()
        .map(|l| format!("{prefix}: {l}"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn deliver(text: &str, output: Option<&Path>, out: &mut dyn Write) -> Result<(), Failure> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| usage(format!("cannot write output: {e}"))),
    }
}

fn net_failure(e: NetError) -> Failure {
    Failure(EXIT_VIOLATION, e.to_string())
}

fn check(
    file: &Path,
    strict: bool,
    lenient: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let (d, p) = load(file, lenient)?;
    let warnings = validate(&p);
    for w in &warnings {
        writeln!(err, "{}: {w}", file.display()).ok();
    }
    if strict && !warnings.is_empty() {
        return Ok(EXIT_INVALID);
    }
    writeln!(
        out,
        "ok: {} fragments, {} subprocesses, {} activities",
        d.fragments.len(),
        p.subprocesses.len(),
        p.registry.len()
    )
    .ok();
    Ok(EXIT_OK)
}

fn compile(
    file: &Path,
    to: Target,
    format: Format,
    output: Option<&Path>,
    lenient: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let (d, p) = load(file, lenient)?;
    for w in validate(&p) {
        writeln!(err, "{}: {w}", file.display()).ok();
    }
    let text = match (to, format) {
        (Target::Petri, Format::Dot) => emit::emit_dot_petri(&translate_spec_pn(&p)),
        (Target::Petri, Format::Tpn) => emit::emit_tpn(&translate_spec_pn(&p)),
        (Target::Petri, Format::Json) => emit::emit_json_petri(&translate_spec_pn(&p)),
        (Target::Declare, Format::Decl) => emit::emit_decl(&translate_spec_decl(&p)),
        (Target::Declare, Format::Json) => emit::emit_json_declare(&translate_spec_decl(&p)),
        (Target::Declare, Format::Dot) => {
            let a = spec_automaton(&translate_spec_decl(&p))
                .map_err(|e| Failure(EXIT_INVALID, e.to_string()))?;
            emit::emit_dot_automaton(&a)
        }
        (Target::Ast, Format::Json) => emit::emit_json_ast(&d),
        (Target::Ast, Format::Beepath) => render(&d),
        (to, format) => {
            return Err(usage(format!(
                "--to {} cannot be written as {}",
                to.to_possible_value().expect("named").get_name(),
                format.to_possible_value().expect("named").get_name()
            )))
        }
    };
    deliver(&text, output, out)?;
    Ok(EXIT_OK)
}

fn simulate(
    file: &Path,
    max_len: usize,
    max_states: usize,
    lenient: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let (_, p) = load(file, lenient)?;
    let net = translate_spec_pn(&p);
    let run = net
        .enumerate_complete_traces(max_len, max_states)
        .map_err(net_failure)?;
    for w in &run.warnings {
        writeln!(err, "warning: {w}").ok();
    }
    let mut seen = std::collections::BTreeSet::new();
    for seq in &run.traces {
        let trace = project(&net, seq);
        if seen.insert(trace.clone()) {
            writeln!(out, "{}", trace.join(", ")).ok();
        }
    }
    writeln!(
        err,
        "{} complete firing sequences, {} distinct activity traces, {} markings explored",
        run.traces.len(),
        seen.len(),
        run.distinct_markings
    )
    .ok();
    Ok(EXIT_OK)
}

fn plural(n: usize, word: &str) -> String {
    if n == 1 {
        format!("{n} {word}")
    } else {
        format!("{n} {word}s")
    }
}

fn verify(
    file: &Path,
    max_len: usize,
    max_states: usize,
    json: bool,
    lenient: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let (_, p) = load(file, lenient)?;
    let net = translate_spec_pn(&p);
    let spec = translate_spec_decl(&p);
    let report = verify_inclusion(&net, &spec, max_len, max_states).map_err(|e| match e {
        ConsistencyError::Net(e) => net_failure(e),
        ConsistencyError::Declare(e) => Failure(EXIT_INVALID, e.to_string()),
    })?;
    for w in &report.warnings {
        writeln!(err, "warning: {w}").ok();
    }
    if json {
        let text = serde_json::to_string_pretty(&report).expect("report serializes");
        writeln!(out, "{text}").ok();
    } else {
        writeln!(
            out,
            "{} checked, {}",
            plural(report.checked, "trace"),
            plural(report.violations.len(), "violation")
        )
        .ok();
        for v in &report.violations {
            let trace: Vec<&str> = v.trace.iter().map(|l| display_label(l)).collect();
            let broken: Vec<String> = v.violated.iter().map(ToString::to_string).collect();
            writeln!(
                out,
                "violation: [{}] breaks {}",
                trace.join(", "),
                broken.join("; ")
            )
            .ok();
        }
    }
    Ok(if report.is_consistent() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    })
}

#[allow(clippy::too_many_arguments)]
fn structure(
    file: &Path,
    endpoint: String,
    model: String,
    key_env: String,
    output: Option<&Path>,
    max_retries: u32,
    timeout: u64,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let text = read(file)?;
    let cfg = EndpointConfig {
        base_url: endpoint,
        model,
        key_env,
        timeout_secs: timeout,
        max_retries,
    };
    let result = cfg
        .http_transport()
        .and_then(|transport| llm::structure(&text, &cfg, &transport));
    match result {
        Ok(s) => {
            if s.retry_count > 0 {
                let noun = if s.retry_count == 1 {
                    "retry"
                } else {
                    "retries"
                };
                writeln!(err, "valid after {} {noun}", s.retry_count).ok();
            }
            let mut body = s.text;
            body.push('\n');
            deliver(&body, output, out)?;
            Ok(EXIT_OK)
        }
        Err(LlmError::EmptyInput) => Err(Failure(EXIT_INVALID, LlmError::EmptyInput.to_string())),
        Err(LlmError::Exhausted {
            attempts,
            last_text,
            diagnostics,
        }) => {
            writeln!(err, "last reply:\n{last_text}").ok();
            Err(Failure(
                EXIT_INVALID,
                format!("no valid BeePath after {attempts} attempt(s):\n{diagnostics}"),
            ))
        }
        Err(e) => Err(Failure(EXIT_TRANSPORT, e.to_string())),
    }
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                write!(err, "{text}").ok();
            } else {
                write!(out, "{text}").ok();
            }
            return code;
        }
    };
    let lenient = cli.lenient_leading_text;
    let outcome = match cli.command {
        Command::Check { file, strict } => check(&file, strict, lenient, out, err),
        Command::Compile {
            file,
            to,
            format,
            output,
        } => compile(&file, to, format, output.as_deref(), lenient, out, err),
        Command::Simulate {
            file,
            max_len,
            max_states,
        } => simulate(&file, max_len, max_states, lenient, out, err),
        Command::Verify {
            file,
            max_len,
            max_states,
            json,
        } => verify(&file, max_len, max_states, json, lenient, out, err),
        Command::Structure {
            file,
            endpoint,
            model,
            key_env,
            output,
            max_retries,
            timeout,
        } => structure(
            &file,
            endpoint,
            model,
            key_env,
            output.as_deref(),
            max_retries,
            timeout,
            out,
            err,
        ),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            writeln!(err, "{msg}").ok();
            code
        }
    }
}
