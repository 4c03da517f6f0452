use std::io::{self, BufReader};

fn main() {
    let stdin = io::stdin();
    let mut input = BufReader::new(stdin.lock());
    let mut out = io::stdout().lock();
    let mut err = io::stderr().lock();
    let code = latpoly_cli::run(
        std::env::args_os(),
        latpoly_cli::Streams {
            stdin: &mut input,
            stdout: &mut out,
            stderr: &mut err,
        },
    );
    std::process::exit(code);
}
