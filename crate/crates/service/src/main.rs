use std::io::{stderr, stdin, stdout};

fn main() {
    let code = xplain::cli::run(std::env::args_os(), stdin().lock(), &mut stdout().lock(), &mut stderr().lock());
    std::process::exit(code);
}
