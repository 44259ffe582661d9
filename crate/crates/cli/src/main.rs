use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(fibcmv_cli::run(std::env::args_os()))
}
