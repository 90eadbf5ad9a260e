//! The `pkb` command line.
//!
//! Exit codes: 0 success, 1 parse error or unreadable input, 2 modal
//! inconsistency, 3 unknown reference.

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::doxastic::{Epoch, ModalStatus};
use crate::dsl::{
    answer_query, explain_query, load_str, parse_line, serialize, LoadError, Query, Resolver,
    Session, StatementKind,
};
use crate::error::Error;
use crate::identity::{fork, lineage, merge};
use crate::store::Store;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_INCONSISTENT: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "pkb",
    version,
    about = "Modal knowledge store over finite possible-world models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Load a store or script and summarize it, printing any query answers.
    Load { file: PathBuf },
    /// Check that every context of a store is modally consistent.
    Check { file: PathBuf },
    /// Assert a status in a context and save the store.
    Assert {
        file: PathBuf,
        context: String,
        status: String,
        possibility: String,
        /// Write the updated store here instead of in place.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ask `possibly <P>`, `classify <P>` or `ratio <Q> <P>` in a context.
    Query {
        file: PathBuf,
        context: String,
        kind: String,
        #[arg(required = true, num_args = 1..=2)]
        args: Vec<String>,
        /// Print the world sets behind the answer.
        #[arg(long)]
        explain: bool,
        /// Answer as of an earlier epoch.
        #[arg(long)]
        at: Option<u64>,
    },
    /// List every status a possibility has held in a context.
    History {
        file: PathBuf,
        context: String,
        possibility: String,
    },
    /// List the agents registered in a context.
    Agents { file: PathBuf, context: String },
    /// Credence ratio of Q against P in a context.
    Credence {
        file: PathBuf,
        context: String,
        q: String,
        p: String,
        #[arg(long)]
        at: Option<u64>,
    },
    /// Split a store into two children sharing its history.
    Fork {
        file: PathBuf,
        out_a: PathBuf,
        out_b: PathBuf,
    },
    /// Merge two stores that share a lineage prefix.
    Merge {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// List the stages of a store.
    Lineage { file: PathBuf },
    /// Read statements from standard input, one per line.
    Repl {
        file: Option<PathBuf>,
        /// Where to save the store on exit (defaults to the loaded file).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A failed command: exit code plus the message for the error stream.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn parse(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_PARSE,
            message: message.into(),
        }
    }
}

pub fn exit_code(error: &Error) -> i32 {
    if error.is_modal_inconsistency() {
        EXIT_INCONSISTENT
    } else if error.is_unknown_reference() {
        EXIT_UNKNOWN
    } else {
        EXIT_PARSE
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: exit_code(&e),
            message: format!("error: {e}"),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn load_session(path: &Path) -> Result<Session, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::parse(format!("{}: cannot read: {e}", path.display())))?;
    load_str(&text).map_err(|e| match e {
        LoadError::Parse(ds) => Failure::parse(
            ds.iter()
                .map(|d| format!("{}:{d}", path.display()))
                .collect::<Vec<_>>()
                .join("\n"),
        ),
        LoadError::Exec(x) => Failure {
            code: exit_code(&x.error),
            message: format!("{}:{}: error: {}", path.display(), x.line, x.error),
        },
    })
}

fn load_store(path: &Path) -> Result<Store, Failure> {
    Ok(load_session(path)?.into_store())
}

fn save(path: &Path, store: &Store) -> CmdResult {
    std::fs::write(path, serialize(store))
        .map_err(|e| Failure::parse(format!("{}: cannot write: {e}", path.display())))
}

fn status_arg(s: &str) -> Result<ModalStatus, Failure> {
    s.parse()
        .map_err(|m: String| Failure::parse(format!("error: {m}")))
}

fn emit(out: &mut dyn Write, line: impl AsRef<str>) {
    let _ = writeln!(out, "{}", line.as_ref());
}

fn cmd_load(path: &Path, out: &mut dyn Write) -> CmdResult {
    let session = load_session(path)?;
    for line in &session.outputs {
        emit(out, line);
    }
    let store = session.store();
    let model = &store.universe.model;
    emit(
        out,
        format!("contexts: {}", store.beliefs().contexts().len()),
    );
    emit(out, format!("epoch: {}", store.epoch()));
    emit(out, format!("individuals: {}", model.individuals().len()));
    emit(
        out,
        format!("possibilities: {}", store.universe.possibilities().len()),
    );
    emit(out, format!("stages: {}", store.lineage().len()));
    emit(out, format!("worlds: {}", model.world_count()));
    Ok(())
}

fn cmd_check(path: &Path, out: &mut dyn Write) -> CmdResult {
    let store = load_store(path)?;
    let mut failures = Vec::new();
    let mut names: Vec<&str> = store
        .beliefs()
        .contexts()
        .map(|c| c.name.as_str())
        .collect();
    names.sort();
    for name in names {
        let ctx = store.context(name)?;
        if let Err(e) = store
            .beliefs()
            .solve_worlds(&store.universe, ctx, store.epoch())
        {
            failures.push(e.to_string());
        }
    }
    if failures.is_empty() {
        emit(out, format!("consistent | epoch={}", store.epoch()));
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_INCONSISTENT,
            message: failures.join("\n"),
        })
    }
}

fn cmd_assert(
    path: &Path,
    context: &str,
    status: &str,
    possibility: &str,
    target: Option<&Path>,
    out: &mut dyn Write,
) -> CmdResult {
    let status = status_arg(status)?;
    let mut session = Session::from_store(load_store(path)?);
    session.run(&StatementKind::Assert {
        context: context.to_string(),
        status,
        possibility: possibility.to_string(),
    })?;
    let store = session.store();
    save(target.unwrap_or(path), store)?;
    emit(out, format!("accepted | epoch={}", store.epoch()));
    Ok(())
}

fn cmd_query(
    path: &Path,
    context: &str,
    kind: &str,
    args: &[String],
    explain: bool,
    at: Option<u64>,
    out: &mut dyn Write,
) -> CmdResult {
    let query = match (kind, args) {
        ("possibly", [p]) => Query::Possibly(p.clone()),
        ("classify", [p]) => Query::Classify(p.clone()),
        ("ratio", [q, p]) => Query::Ratio(q.clone(), p.clone()),
        _ => {
            return Err(Failure::parse(
                "error: expected `possibly <P>`, `classify <P>` or `ratio <Q> <P>`",
            ))
        }
    };
    let store = load_store(path)?;
    let at = at.map(Epoch);
    if explain {
        for line in explain_query(&store, context, &query, at)? {
            emit(out, line);
        }
    }
    emit(out, answer_query(&store, context, &query, at)?);
    Ok(())
}

fn cmd_history(path: &Path, context: &str, possibility: &str, out: &mut dyn Write) -> CmdResult {
    let store = load_store(path)?;
    let ctx = store.context(context)?;
    let p = store.possibility(possibility)?;
    for h in store.beliefs().history(ctx, p)? {
        let superseded = h.superseded_at.map_or("-".to_string(), |e| e.to_string());
        emit(
            out,
            format!(
                "{} | asserted={} | superseded={superseded}",
                h.status, h.asserted_at
            ),
        );
    }
    Ok(())
}

fn cmd_agents(path: &Path, context: &str, out: &mut dyn Write) -> CmdResult {
    let store = load_store(path)?;
    let ctx = store.context(context)?;
    let mut lines: Vec<String> = store
        .beliefs()
        .agents(ctx)
        .map(|r| {
            format!(
                "{} | existence={} | registered={}",
                store.universe.name(r.agent),
                r.existence,
                r.registered_at
            )
        })
        .collect();
    lines.sort();
    for line in lines {
        emit(out, line);
    }
    Ok(())
}

fn cmd_fork(path: &Path, out_a: &Path, out_b: &Path, out: &mut dyn Write) -> CmdResult {
    let store = load_store(path)?;
    let (a, b) = fork(&store)?;
    save(out_a, &a)?;
    save(out_b, &b)?;
    emit(
        out,
        format!("{} -> {}", a.lineage().tip().id, out_a.display()),
    );
    emit(
        out,
        format!("{} -> {}", b.lineage().tip().id, out_b.display()),
    );
    Ok(())
}

fn cmd_merge(a: &Path, b: &Path, target: &Path, out: &mut dyn Write) -> CmdResult {
    let sa = load_store(a)?;
    let sb = load_store(b)?;
    let merged = merge(&sa, &sb)?;
    save(target, &merged)?;
    emit(
        out,
        format!(
            "merged | stage={} | epoch={}",
            merged.lineage().tip().id,
            merged.epoch()
        ),
    );
    Ok(())
}

fn cmd_lineage(path: &Path, out: &mut dyn Write) -> CmdResult {
    let store = load_store(path)?;
    for s in lineage(&store) {
        emit(out, s.to_string());
    }
    Ok(())
}

/// Meta commands start with `:`; anything else is a statement.
fn cmd_repl(
    file: Option<&Path>,
    target: Option<&Path>,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let mut session = match file {
        Some(p) if p.exists() => Session::from_store(load_store(p)?),
        _ => Session::new(),
    };
    let save_to = target.or(file);
    let mut line_no = 0;
    let mut text = String::new();
    loop {
        text.clear();
        match input.read_line(&mut text) {
            Ok(0) => break,
            Ok(_) => {}
            Err(e) => return Err(Failure::parse(format!("error: cannot read input: {e}"))),
        }
        line_no += 1;
        let line = text.trim_end_matches(['\n', '\r']);
        let trimmed = line.trim();
        if let Some(meta) = trimmed.strip_prefix(':') {
            let mut words = meta.split_whitespace();
            match (words.next(), words.next()) {
                (Some("quit"), _) => break,
                (Some("save"), path) => {
                    let path = path.map(Path::new).or(save_to);
                    match path {
                        Some(p) => save(p, session.store())?,
                        None => emit(err, "error: no path to save to"),
                    }
                }
                (Some("serialize"), _) => {
                    let _ = write!(out, "{}", serialize(session.store()));
                }
                (Some("lineage"), _) => {
                    for s in lineage(session.store()) {
                        emit(out, s.to_string());
                    }
                }
                _ => emit(err, format!("{line_no}: error: unknown command `:{meta}`")),
            }
            continue;
        }
        let mut resolver = Resolver::from_store(session.store());
        match parse_line(&mut resolver, line_no, line) {
            Ok(None) => {}
            Ok(Some(stmt)) => match session.run(&stmt.kind) {
                Ok(Some(answer)) => emit(out, answer),
                Ok(None) => {}
                Err(e) => emit(err, format!("{line_no}: error: {e}")),
            },
            Err(ds) => {
                for d in ds {
                    emit(err, d.to_string());
                }
            }
        }
    }
    if let Some(p) = save_to {
        save(p, session.store())?;
    }
    Ok(())
}

fn dispatch(
    cli: Cli,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    match cli.command {
        Command::Load { file } => cmd_load(&file, out),
        Command::Check { file } => cmd_check(&file, out),
        Command::Assert {
            file,
            context,
            status,
            possibility,
            out: target,
        } => cmd_assert(
            &file,
            &context,
            &status,
            &possibility,
            target.as_deref(),
            out,
        ),
        Command::Query {
            file,
            context,
            kind,
            args,
            explain,
            at,
        } => cmd_query(&file, &context, &kind, &args, explain, at, out),
        Command::History {
            file,
            context,
            possibility,
        } => cmd_history(&file, &context, &possibility, out),
        Command::Agents { file, context } => cmd_agents(&file, &context, out),
        Command::Credence {
            file,
            context,
            q,
            p,
            at,
        } => cmd_query(&file, &context, "ratio", &[q, p], false, at, out),
        Command::Fork { file, out_a, out_b } => cmd_fork(&file, &out_a, &out_b, out),
        Command::Merge { a, b, out: target } => cmd_merge(&a, &b, &target, out),
        Command::Lineage { file } => cmd_lineage(&file, out),
        Command::Repl { file, out: target } => {
            cmd_repl(file.as_deref(), target.as_deref(), input, out, err)
        }
    }
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, S>(args: I, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match dispatch(cli, input, out, err) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            emit(err, &f.message);
            f.code
        }
    }
}
