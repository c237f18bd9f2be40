use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use xplain_core::ast::{Atom, Program};

use crate::api::{self, ApiError, ExplainRequest, Limits, Mode, Render, Solved};
use crate::http::{serve, Service};
use crate::session::Session;

#[derive(Parser, Debug)]
#[command(name = "xplain", version, about = "Explainable answer set programming")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print answer sets in canonical order.
    Solve {
        file: PathBuf,
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Test whether the given atoms form an answer set.
    Check {
        file: PathBuf,
        /// Comma-separated atoms, e.g. "a,b(1)".
        #[arg(long)]
        model: String,
        #[arg(long)]
        json: bool,
    },
    /// Justify why an atom is in an answer set.
    Why {
        file: PathBuf,
        #[arg(long)]
        atom: String,
        /// Answer set to explain against; defaults to the first containing the atom.
        #[arg(long)]
        model: Option<String>,
        #[arg(long, default_value_t = 1)]
        alternatives: usize,
        #[arg(long)]
        json: bool,
        /// Append the first graph in Graphviz format.
        #[arg(long)]
        dot: bool,
    },
    /// Justify why an atom is not in an answer set.
    Whynot {
        file: PathBuf,
        #[arg(long)]
        atom: String,
        #[arg(long)]
        model: Option<String>,
        #[arg(long, default_value_t = 1)]
        alternatives: usize,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        dot: bool,
    },
    /// Find minimal changes to candidate facts that change the outcome.
    Contrast {
        file: PathBuf,
        #[arg(long)]
        space: PathBuf,
        /// not-an-answer-set, foil-becomes-brave or fact-no-longer-brave.
        #[arg(long)]
        mode: String,
        #[arg(long)]
        target: String,
        /// Report up to K explanations of minimal distance.
        #[arg(long, default_value_t = 1)]
        all: usize,
        #[arg(long)]
        json: bool,
    },
    /// Minimal sets of abducible facts that make an observation brave.
    Abduce {
        file: PathBuf,
        #[arg(long)]
        obs: String,
        /// Comma-separated ground atoms.
        #[arg(long)]
        abducibles: String,
        #[arg(long)]
        json: bool,
    },
    /// Minimal inconsistent subsets and minimal correction sets of soft facts.
    Mus {
        file: PathBuf,
        /// Comma-separated predicates whose facts are soft; default: `%soft` markers.
        #[arg(long)]
        soft: Option<String>,
        #[arg(short, default_value_t = usize::MAX, hide_default_value = true)]
        k: usize,
        #[arg(long)]
        json: bool,
    },
    /// Interactive session reading commands from standard input.
    Repl {
        file: PathBuf,
        #[arg(long)]
        space: Option<PathBuf>,
        /// Replay a saved transcript before reading input.
        #[arg(long)]
        replay: Option<PathBuf>,
    },
    /// HTTP/JSON service.
    Serve {
        /// Program loaded as session 1.
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long, default_value_t = 4)]
        threads: usize,
    },
}

fn read(path: &Path) -> Result<String, ApiError> {
    std::fs::read_to_string(path).map_err(|e| ApiError::usage(format!("cannot read `{}`: {e}", path.display())))
}

fn model_arg(text: &str) -> Result<Vec<Atom>, ApiError> {
    api::parse_atoms_arg(text.trim().trim_start_matches('{').trim_end_matches('}'))
}

fn emit<T: Render + serde::Serialize>(out: &mut impl Write, value: &T, json: bool) -> std::io::Result<()> {
    if json {
        writeln!(out, "{}", api::to_json(value))
    } else {
        out.write_all(value.render_text().as_bytes())
    }
}

/// Run the CLI and return the process exit code.
pub fn run<I, T>(args: I, input: impl BufRead, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let json = matches!(
        cli.command,
        Command::Solve { json: true, .. }
            | Command::Check { json: true, .. }
            | Command::Why { json: true, .. }
            | Command::Whynot { json: true, .. }
            | Command::Contrast { json: true, .. }
            | Command::Abduce { json: true, .. }
            | Command::Mus { json: true, .. }
    );
    match execute(cli.command, input, out, err) {
        Ok(code) => code,
        Err(Failure::Api(e)) => {
            if json {
                let _ = writeln!(out, "{}", api::to_json(&e));
            }
            let _ = writeln!(err, "error: {e}");
            e.kind.exit_code()
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

enum Failure {
    Api(ApiError),
    Io(std::io::Error),
}

impl From<ApiError> for Failure {
    fn from(e: ApiError) -> Self {
        Failure::Api(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn execute(command: Command, input: impl BufRead, out: &mut impl Write, err: &mut impl Write) -> Result<i32, Failure> {
    let limits = Limits::from_env()?;
    let program = |file: &Path| -> Result<_, ApiError> { api::load_program(&read(file)?) };
    match command {
        Command::Solve { file, limit, json } => {
            let mut solved = Solved::new(&program(&file)?, limits)?;
            let r = api::models(&mut solved, limit)?;
            emit(out, &r, json)?;
            Ok(if r.0.is_empty() { 1 } else { 0 })
        }
        Command::Check { file, model, json } => {
            let mut solved = Solved::new(&program(&file)?, limits)?;
            let r = api::check(&mut solved, &model_arg(&model)?)?;
            emit(out, &r, json)?;
            Ok(if r.answer_set { 0 } else { 1 })
        }
        Command::Why {
            file,
            atom,
            model,
            alternatives,
            json,
            dot,
        } => explain(&program(&file)?, limits, Mode::In, &atom, model, alternatives, json, dot, out),
        Command::Whynot {
            file,
            atom,
            model,
            alternatives,
            json,
            dot,
        } => explain(&program(&file)?, limits, Mode::Out, &atom, model, alternatives, json, dot, out),
        Command::Contrast {
            file,
            space,
            mode,
            target,
            all,
            json,
        } => {
            let space = api::load_space(&read(&space)?)?;
            let query = api::contrast_query(&mode, &target)?;
            let r = api::contrast(&program(&file)?, &space, &query, all, limits)?;
            emit(out, &r, json)?;
            Ok(if r.explanations.is_empty() { 1 } else { 0 })
        }
        Command::Abduce {
            file,
            obs,
            abducibles,
            json,
        } => {
            let obs = api::parse_atom_arg(&obs)?;
            let abducibles = api::parse_atoms_arg(&abducibles)?;
            let r = api::abduce(&program(&file)?, &obs, &abducibles, limits)?;
            emit(out, &r, json)?;
            Ok(if r.hypotheses.is_empty() { 1 } else { 0 })
        }
        Command::Mus { file, soft, k, json } => {
            let soft: Option<Vec<String>> = soft.map(|s| s.split(',').map(|p| p.trim().to_string()).collect());
            let r = api::inconsistency(&program(&file)?, soft.as_deref(), k, limits)?;
            emit(out, &r, json)?;
            Ok(0)
        }
        Command::Repl { file, space, replay } => {
            let mut session = Session::open(program(&file)?, limits)?;
            if let Some(space) = space {
                session.set_space(api::load_space(&read(&space)?)?);
            }
            if let Some(path) = replay {
                let lines: Vec<String> = read(&path)?.lines().map(String::from).collect();
                for line in lines.iter().filter(|l| !l.trim().is_empty()) {
                    session.execute(line)?;
                }
            }
            crate::repl::run(&mut session, input, out, err)?;
            Ok(0)
        }
        Command::Serve {
            file,
            port,
            host,
            threads,
        } => {
            let service = Arc::new(Service::new(limits));
            if let Some(file) = file {
                let id = service.create(Session::open(program(&file)?, limits)?);
                writeln!(err, "loaded {} as session {id}", file.display())?;
            }
            let server = tiny_http::Server::http((host.as_str(), port))
                .map_err(|e| ApiError::usage(format!("cannot listen on {host}:{port}: {e}")))?;
            writeln!(err, "listening on http://{}", server.server_addr())?;
            serve(service, Arc::new(server), threads);
            Ok(0)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn explain(
    p: &Program,
    limits: Limits,
    mode: Mode,
    atom: &str,
    model: Option<String>,
    alternatives: usize,
    json: bool,
    dot: bool,
    out: &mut impl Write,
) -> Result<i32, Failure> {
    let mut solved = Solved::new(p, limits)?;
    let req = ExplainRequest {
        atom: api::parse_atom_arg(atom)?,
        mode,
        model: model.as_deref().map(model_arg).transpose()?,
        alternatives,
        dot,
    };
    let r = api::explain(&mut solved, &req)?;
    emit(out, &r, json)?;
    Ok(0)
}
