use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(polysimp::cli::run(std::env::args().skip(1)))
}
