use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(kellylab::cli::parse_and_dispatch(std::env::args_os()) as u8)
}
