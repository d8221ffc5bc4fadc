use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(hecke_cli::run(std::env::args_os()))
}
