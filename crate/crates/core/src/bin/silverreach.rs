use std::io::Write;
use std::process::ExitCode;

use silverreach::cli::{run_args, Cli};

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let out_path = clap::Parser::try_parse_from(&args)
        .ok()
        .and_then(|cli: Cli| cli.out);
    let output = run_args(&args);

    if !output.is_success() {
        eprint!("{}", output.body);
        return ExitCode::from(output.code as u8);
    }
    let written = match out_path {
        Some(path) => std::fs::write(&path, &output.body),
        None => std::io::stdout().write_all(output.body.as_bytes()),
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
