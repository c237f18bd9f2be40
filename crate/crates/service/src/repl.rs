use std::io::{BufRead, Write};

use crate::session::Session;

/// Read commands from `input` until `quit` or end of input. Errors are
/// reported on `err` and never end the loop.
pub fn run(session: &mut Session, input: impl BufRead, out: &mut impl Write, err: &mut impl Write) -> std::io::Result<()> {
    let mut json = false;
    for line in input.lines() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.starts_with('%') {
            continue;
        }
        match trimmed.split_whitespace().collect::<Vec<_>>()[..] {
            ["quit"] | ["exit"] => break,
            ["json", "on"] => json = true,
            ["json", "off"] => json = false,
            ["save", "transcript", path] => match std::fs::write(path, session.transcript()) {
                Ok(()) => writeln!(out, "saved {} commands to {path}", session.history().len())?,
                Err(e) => writeln!(err, "error: cannot write `{path}`: {e}")?,
            },
            _ => match session.execute(trimmed) {
                Ok(reply) => out.write_all(reply.render(json).as_bytes())?,
                Err(e) if json => writeln!(out, "{}", crate::api::to_json(&e))?,
                Err(e) => writeln!(err, "error: {e}")?,
            },
        }
        out.flush()?;
    }
    Ok(())
}
